//! Codimension in A_g, expected dimension in M_g and p-rank stratum bounds.

use npstrata::polygon::enumerate;
use npstrata::strata::{dim_ag, supersingular_dim_identity, StratumMetrics};

fn main() {
    let g = 5;
    println!("dim A_{g} = {}", dim_ag(g));
    println!(
        "{:<18} {:>5} {:>5} {:>3} {:>10}",
        "polygon", "codim", "e", "f", "dim M_g^f"
    );
    for xi in enumerate(g) {
        let m = StratumMetrics::of(&xi);
        let pd = m.prank_stratum_dim.map_or("-".into(), |d| d.to_string());
        println!(
            "{:<18} {:>5} {:>5} {:>3} {:>10}",
            xi.to_string(),
            m.codim_ag,
            m.e_dim,
            m.p_rank,
            pd
        );
    }
    let ok = (1..=12).all(supersingular_dim_identity);
    println!("supersingular locus has dimension floor(g^2/4) for g <= 12: {ok}");
}
