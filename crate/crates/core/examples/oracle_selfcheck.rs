//! Run the brute-force cross-checks that back `npstrata selfcheck`.

use npstrata::oracle::brute_enumerate;
use npstrata::report::selfcheck;

fn main() {
    for g in 1..=8 {
        let n = brute_enumerate(g).map(|s| s.len()).unwrap_or(0);
        println!("paths of genus {g}: {n}");
    }
    let results = selfcheck();
    for r in &results {
        println!(
            "{} {}: {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
    }
    if results.iter().any(|r| !r.pass) {
        std::process::exit(1);
    }
}
