//! Export a fact table to JSON, read it back, and compare schedules.

use npstrata::axioms::builtin_axioms;
use npstrata::condition::PrimeQuery;
use npstrata::engine::{closure_with, Context, FactTable, RuleKind, Schedule};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let axioms = builtin_axioms();
    let ctx = Context {
        query: PrimeQuery::prime(3)?,
        axioms: &axioms,
    };
    let table = closure_with(
        6,
        &ctx,
        &Schedule::Rounds {
            order: RuleKind::ALL.to_vec(),
            jobs: 4,
        },
    );
    let json = table.to_json();

    let dir = std::env::temp_dir().join("npstrata-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("facts-g6-p3.json");
    std::fs::write(&path, &json)?;
    let back = FactTable::from_json(&std::fs::read_to_string(&path)?)?;
    println!(
        "wrote {} ({} facts), re-import identical: {}",
        path.display(),
        back.len(),
        back == table
    );

    let sequential = closure_with(
        6,
        &ctx,
        &Schedule::Sequential {
            order: RuleKind::ALL.to_vec(),
            reverse_keys: true,
        },
    );
    println!(
        "sequential schedule gives the same bytes: {}",
        sequential.to_json() == json
    );
    Ok(())
}
