//! Status of the five genus 5 p-rank 0 polygons, for all primes and for p = 3.

use npstrata::axioms::builtin_axioms;
use npstrata::condition::PrimeQuery;
use npstrata::engine::closure;
use npstrata::report::{report, ReportTarget};

fn main() {
    for query in [PrimeQuery::AllPrimes, PrimeQuery::prime(3).expect("prime")] {
        let table = closure(5, query, &builtin_axioms());
        print!(
            "{}",
            report(ReportTarget::Genus5Prank0Survey, &table).expect("gmax 5")
        );
        println!();
    }
}
