//! List every symmetric polygon of small genus, with its partitions.

use npstrata::polygon::enumerate;

fn main() {
    for g in 1..=6 {
        println!("genus {g}: {} polygons", enumerate(g).len());
    }
    println!();
    for xi in enumerate(4) {
        let parts: Vec<String> = xi.partitions().iter().map(|p| p.to_string()).collect();
        let shown = if parts.is_empty() {
            "indecomposable".to_string()
        } else {
            parts.join(" ")
        };
        println!("{:<12} {shown}", xi.to_string());
    }
}
