//! Newton polygon strata on the moduli space of curves.
//!
//! The crate models symmetric Newton polygons, the dimension bookkeeping of
//! their strata in `A_g` and `M_g`, a small knowledge base of literature
//! facts, and a monotone fixpoint engine that combines them to decide which
//! polygons are known to occur for Jacobians of smooth curves.
//!
//! Each capability has a runnable example under `examples/`.

pub mod axioms;
pub mod cli;
pub mod condition;
pub mod engine;
pub mod oracle;
pub mod polygon;
pub mod report;
pub mod strata;
