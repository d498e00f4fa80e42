//! Every polygon with p-rank at least g-4 occurs, checked up to genus 10.

use npstrata::axioms::builtin_axioms;
use npstrata::condition::PrimeQuery;
use npstrata::engine::closure;
use npstrata::report::{report, ReportTarget};

fn main() {
    let gmax = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(10);
    let table = closure(gmax, PrimeQuery::AllPrimes, &builtin_axioms());
    for g in 4..=gmax {
        let (mut yes, mut total) = (0, 0);
        for f in table.facts_of_genus(g) {
            if f.polygon.p_rank() + 4 >= g {
                total += 1;
                yes += usize::from(f.occurs());
            }
        }
        println!("g={g:>2}: {yes}/{total} with f >= g-4 occur");
    }
    let rep = report(ReportTarget::Genus5PositivePrank, &table).expect("gmax >= 5");
    print!("{rep}");
}
