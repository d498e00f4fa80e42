//! Round-trip the literature axioms through their JSON file format and
//! see how validation reports problems.

use npstrata::axioms::{builtin_axioms, load_str, save, validate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let axioms = builtin_axioms();
    let text = save(&axioms);
    let back = load_str(&text)?;
    assert_eq!(back, axioms);
    println!(
        "{} axioms, {} bytes of JSON, validation ok: {}",
        axioms.len(),
        text.len(),
        validate(&back).is_ok()
    );
    for a in &axioms {
        println!("  {:<7} g={:<4} {}", a.id, a.genus.to_string(), a.citation);
    }

    let broken = text.replacen("\"citation\"", "\"citattion\"", 1);
    println!("misspelt field: {}", load_str(&broken).unwrap_err());

    let mut dup = builtin_axioms();
    dup.push(dup[0].clone());
    println!("duplicate id: {}", validate(&dup));
    Ok(())
}
