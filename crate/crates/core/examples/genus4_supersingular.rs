//! Derive that the supersingular polygon occurs in genus 4 from the genus 1
//! to 3 facts alone, without the axiom that asserts it directly.

use npstrata::axioms::builtin_axioms;
use npstrata::condition::PrimeQuery;
use npstrata::engine::closure;
use npstrata::polygon::NewtonPolygon;

fn main() {
    let axioms: Vec<_> = builtin_axioms()
        .into_iter()
        .filter(|a| a.id != "A11")
        .collect();
    let table = closure(4, PrimeQuery::AllPrimes, &axioms);
    let ss4 = NewtonPolygon::supersingular(4);
    print!("{}", table.trace_render(&ss4).expect("in universe"));
}
