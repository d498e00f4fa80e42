//! Proof traces and blockers.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::condition::{Dnf, PrimeCondition};
use crate::polygon::{expr_serde, NewtonPolygon};

/// A reference to another fact `(g, xi)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FactRef {
    pub g: u32,
    #[serde(with = "expr_serde")]
    pub polygon: NewtonPolygon,
}

impl From<&NewtonPolygon> for FactRef {
    fn from(p: &NewtonPolygon) -> Self {
        FactRef {
            g: p.genus(),
            polygon: p.clone(),
        }
    }
}

impl fmt::Display for FactRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.polygon)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckOutcome {
    /// `td(left) + td(right) < e`.
    Holds,
    Fails,
    /// One side is known to have empty compact-type stratum.
    EmptySide,
}

/// Hypothesis (b) evaluated on one partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCheck {
    pub left: FactRef,
    pub right: FactRef,
    /// `None` stands for an empty stratum (dimension minus infinity).
    pub td_left: Option<u32>,
    pub td_right: Option<u32>,
    pub e: u32,
    pub outcome: CheckOutcome,
}

impl PartitionCheck {
    pub fn sum(&self) -> Option<u32> {
        Some(self.td_left? + self.td_right?)
    }

    pub fn is_pair(&self, a: &NewtonPolygon, b: &NewtonPolygon) -> bool {
        (&self.left.polygon == a && &self.right.polygon == b)
            || (&self.left.polygon == b && &self.right.polygon == a)
    }

    /// The two `td` values, smaller first.
    pub fn td_sorted(&self) -> (Option<u32>, Option<u32>) {
        if self.td_left <= self.td_right {
            (self.td_left, self.td_right)
        } else {
            (self.td_right, self.td_left)
        }
    }
}

impl fmt::Display for PartitionCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<u32>| v.map_or("-inf".to_string(), |v| v.to_string());
        match self.outcome {
            CheckOutcome::EmptySide => {
                write!(f, "({}, {}): one side empty on M^ct", self.left, self.right)
            }
            outcome => {
                let rel = if outcome == CheckOutcome::Holds {
                    "<"
                } else {
                    "!<"
                };
                write!(
                    f,
                    "({}, {}): td {} + {} = {} {rel} {}",
                    self.left,
                    self.right,
                    show(self.td_left),
                    show(self.td_right),
                    show(self.sum()),
                    self.e
                )
            }
        }
    }
}

/// One rule application supporting a fact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum Derivation {
    #[serde(rename = "axiom")]
    Axiom {
        id: String,
        kind: String,
        condition: PrimeCondition,
        citation: String,
        /// `(lo, hi)` dimension bounds the axiom contributes, if any.
        dims: Option<(u32, u32)>,
        occurs: bool,
    },
    #[serde(rename = "R1-small-codim")]
    SmallCodim {
        codim: u32,
        dim: u32,
        /// Axiom backing the `c = 3` and `c = 4` cases.
        support: Option<String>,
        condition: Dnf,
    },
    #[serde(rename = "R4-purity")]
    Purity {
        axiom: String,
        p_rank: u32,
        #[serde(with = "polygon_list")]
        generic: Vec<NewtonPolygon>,
        prank_dim: u32,
        bound: u32,
    },
    #[serde(rename = "R2-split")]
    Split {
        e: u32,
        witness: (FactRef, FactRef),
        checks: Vec<PartitionCheck>,
        condition: Dnf,
    },
    #[serde(rename = "R3-oort-case")]
    OortCase {
        d: u32,
        base: FactRef,
        /// `2d - 3`, the p-rank 0 stratum dimension bounding `td(nu_d)`.
        base_bound: u32,
        e: u32,
        condition: Dnf,
    },
}

impl Derivation {
    pub fn rule_id(&self) -> String {
        match self {
            Derivation::Axiom { id, .. } => format!("axiom:{id}"),
            Derivation::SmallCodim { .. } => "R1-small-codim".into(),
            Derivation::Purity { .. } => "R4-purity".into(),
            Derivation::Split { .. } => "R2-split".into(),
            Derivation::OortCase { .. } => "R3-oort-case".into(),
        }
    }

    /// Facts this derivation relies on for occurrence.
    pub fn premises(&self) -> Vec<FactRef> {
        match self {
            Derivation::Split { witness, .. } => vec![witness.0.clone(), witness.1.clone()],
            Derivation::OortCase { base, .. } => vec![base.clone()],
            _ => Vec::new(),
        }
    }

    pub fn axiom_ids(&self) -> Vec<&str> {
        match self {
            Derivation::Axiom { id, .. } => vec![id.as_str()],
            Derivation::SmallCodim {
                support: Some(id), ..
            } => vec![id.as_str()],
            Derivation::Purity { axiom, .. } => vec![axiom.as_str()],
            _ => Vec::new(),
        }
    }
}

mod polygon_list {
    use super::NewtonPolygon;
    use crate::polygon::parse;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[NewtonPolygon], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|p| p.format())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<NewtonPolygon>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Why a fact is still unknown.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "blocker", rename_all = "snake_case")]
pub enum Blocker {
    /// Hypothesis (a): the polygon has no partition at all.
    NoPartition,
    /// Hypothesis (a): no partition has both sides non-empty on `M^ct`.
    NoNonemptyPartition { partitions: usize },
    /// Hypothesis (b): some partition violates the dimension inequality.
    /// `witness` is the failing partition with the smallest `td` sum.
    InequalityFails {
        e: u32,
        witness: PartitionCheck,
        failing: Vec<PartitionCheck>,
    },
    /// The Oort-case rule needs `nu_d` to occur on `M_d`.
    OortBaseUnknown { base: FactRef },
    /// A literature fact exists but its prime condition is not usable here.
    ConditionalLiterature {
        axiom: String,
        condition: PrimeCondition,
        citation: String,
    },
}

impl Blocker {
    pub fn hypothesis(&self) -> Option<char> {
        match self {
            Blocker::NoPartition | Blocker::NoNonemptyPartition { .. } => Some('a'),
            Blocker::InequalityFails { .. } => Some('b'),
            _ => None,
        }
    }
}

impl fmt::Display for Blocker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Blocker::NoPartition => {
                f.write_str("hypothesis (a): no partition exists (indecomposable)")
            }
            Blocker::NoNonemptyPartition { partitions } => write!(
                f,
                "hypothesis (a): none of the {partitions} partitions has both sides known non-empty"
            ),
            Blocker::InequalityFails {
                witness, failing, ..
            } => {
                write!(f, "hypothesis (b): witness {witness}")?;
                if failing.len() > 1 {
                    write!(f, " ({} failing partitions)", failing.len())?;
                }
                Ok(())
            }
            Blocker::OortBaseUnknown { base } => {
                write!(f, "R3: {} not known to occur on M_{}", base.polygon, base.g)
            }
            Blocker::ConditionalLiterature {
                axiom, condition, ..
            } => {
                write!(f, "literature: {axiom} applies only when {condition}")
            }
        }
    }
}

/// Everything the engine can say about one fact after the fixpoint.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub derivations: Vec<Derivation>,
    pub blockers: Vec<Blocker>,
}

impl Provenance {
    pub fn find(&self, rule: &str) -> Option<&Derivation> {
        self.derivations.iter().find(|d| d.rule_id() == rule)
    }

    pub fn split(&self) -> Option<&Derivation> {
        self.find("R2-split")
    }

    pub fn inequality_blocker(&self) -> Option<&Blocker> {
        self.blockers
            .iter()
            .find(|b| matches!(b, Blocker::InequalityFails { .. }))
    }

    pub(crate) fn render_into(&self, out: &mut String, indent: &str) {
        for d in &self.derivations {
            render_derivation(d, out, indent);
        }
        for b in &self.blockers {
            let _ = writeln!(out, "{indent}blocked: {b}");
            if let Blocker::InequalityFails { failing, .. } = b {
                for c in failing {
                    let _ = writeln!(out, "{indent}  (b) {c}");
                }
            }
        }
    }
}

fn render_derivation(d: &Derivation, out: &mut String, indent: &str) {
    match d {
        Derivation::Axiom {
            id,
            kind,
            condition,
            citation,
            dims,
            occurs,
        } => {
            let _ = write!(out, "{indent}[axiom {id}] {kind} [{condition}]");
            if *occurs {
                out.push_str(" => occurs");
            }
            if let Some((lo, hi)) = dims {
                let _ = write!(out, ", component dims in [{lo}, {hi}]");
            }
            let _ = writeln!(out, "\n{indent}  source: {citation}");
        }
        Derivation::SmallCodim {
            codim,
            dim,
            support,
            condition,
        } => {
            let _ = write!(out, "{indent}[R1-small-codim] codim {codim} <= 4 case");
            if let Some(id) = support {
                let _ = write!(out, " (via {id})");
            }
            let _ = writeln!(
                out,
                " => occurs [{condition}], every component has dim {dim}"
            );
        }
        Derivation::Purity {
            axiom,
            p_rank,
            generic,
            prank_dim,
            bound,
        } => {
            let names: Vec<String> = generic.iter().map(|p| p.format()).collect();
            let _ = writeln!(
                out,
                "{indent}[R4-purity] {axiom}: generic polygon on components of the p-rank {p_rank} locus is in {{{}}}; not generic here",
                names.join(", ")
            );
            let _ = writeln!(out, "{indent}  => dim_hi_all <= {prank_dim} - 1 = {bound}");
        }
        Derivation::Split {
            e,
            witness,
            checks,
            condition,
        } => {
            let _ = writeln!(out, "{indent}[R2-split] e = {e}");
            let _ = writeln!(
                out,
                "{indent}  (a) witness ({}, {}): both sides non-empty on M^ct",
                witness.0, witness.1
            );
            for c in checks {
                let _ = writeln!(out, "{indent}  (b) {c}");
            }
            let _ = writeln!(out, "{indent}  => occurs [{condition}], dim_lo_some = {e}");
        }
        Derivation::OortCase {
            d,
            base,
            base_bound,
            e,
            condition,
        } => {
            let _ = writeln!(
                out,
                "{indent}[R3-oort-case] d = {d}: {} occurs; td {base_bound} + 0 < {e}",
                base.polygon
            );
            let _ = writeln!(out, "{indent}  => occurs [{condition}], dim_lo_some = {e}");
        }
    }
}
