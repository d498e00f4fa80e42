//! Parse, combine and compare symmetric Newton polygons.
//!
//! Run with `cargo run --example polygon_algebra`.

use npstrata::polygon::{parse, NewtonPolygon};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = parse("ord^2 + nu3")?;
    let b: NewtonPolygon = "ss^2".parse()?;
    let sum = a.direct_sum(&b);
    println!("{a}  (+)  {b}  =  {sum}");
    println!(
        "genus {}, p-rank {}, factors {:?}",
        sum.genus(),
        sum.p_rank(),
        sum.to_triples()
    );
    println!("break points: {:?}", sum.vertices());

    // The supersingular polygon lies on or above every other one of its genus.
    let nu4 = NewtonPolygon::nu(4)?;
    let ss4 = NewtonPolygon::supersingular(4);
    println!("{ss4} dominates {nu4}: {}", ss4.dominates(&nu4)?);
    println!("{nu4} dominates {ss4}: {}", nu4.dominates(&ss4)?);

    // Parse errors carry the byte offset of the problem.
    match parse("G(2,4)") {
        Ok(_) => unreachable!(),
        Err(e) => println!("G(2,4) rejected: {e}"),
    }
    println!("structured form: {}", serde_json::to_string(&sum)?);
    Ok(())
}
