//! Congruence conditions on the characteristic and their Boolean algebra.

use npstrata::condition::{Dnf, PrimeCondition, PrimeQuery};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mod11 = PrimeCondition::congruence(11, [3, 4, 5, 9])?;
    let mod7 = PrimeCondition::congruence(7, [2, 4])?;
    let both = mod11.and(&mod7).expect("compatible");
    println!("({mod11}) and ({mod7}) = {both}");

    for p in [2, 3, 13, 191] {
        let q = PrimeQuery::prime(p)?;
        println!(
            "p = {p}: mod 11 {}, both {}",
            mod11.holds(q)?,
            both.holds(q)?
        );
    }

    // Unions absorb weaker clauses.
    let d = Dnf::from(mod11.clone()).or(&Dnf::from(both));
    println!("union: {d}");

    // Asymptotic statements are kept for reporting and never satisfied.
    let far = PrimeCondition::almost_all(PrimeCondition::congruence(8, [7])?, "p >> 0");
    println!(
        "{far}: holds at p = 7? {}",
        far.holds(PrimeQuery::prime(7)?)?
    );

    // 0 is not a unit mod 11 and no prime is divisible by 11 except 11 itself.
    println!(
        "residue 0 mod 11: {:?}",
        PrimeCondition::congruence(11, [0]).map(|c| c.to_string())
    );
    Ok(())
}
