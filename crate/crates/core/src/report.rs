//! Claim-by-claim reports over a fact table, and the self-check suite.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::{builtin_axioms, validate};
use crate::condition::PrimeQuery;
use crate::engine::{closure_with, Blocker, Context, FactTable, RuleKind, Schedule};
use crate::oracle::{
    brute_codim, brute_enumerate, brute_partitions, triples_of, unordered, Triples,
};
use crate::polygon::{enumerate, NewtonPolygon};
use crate::strata::{codim_ag, supersingular_dim_identity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ReportTarget {
    /// Every polygon with p-rank at least g-4 occurs, 4 <= g <= gmax.
    #[value(name = "prank-ge-g-minus-4")]
    #[serde(rename = "prank-ge-g-minus-4")]
    PrankGeGMinus4,
    /// All eight genus 4 polygons occur.
    Genus4Complete,
    /// Every genus 5 polygon of positive p-rank occurs.
    Genus5PositivePrank,
    /// Status and blockers of the five genus 5 p-rank 0 polygons.
    Genus5Prank0Survey,
}

impl ReportTarget {
    pub fn name(&self) -> &'static str {
        match self {
            ReportTarget::PrankGeGMinus4 => "prank-ge-g-minus-4",
            ReportTarget::Genus4Complete => "genus4-complete",
            ReportTarget::Genus5PositivePrank => "genus5-positive-prank",
            ReportTarget::Genus5Prank0Survey => "genus5-prank0-survey",
        }
    }

    /// Smallest universe the target makes sense for.
    pub fn min_gmax(&self) -> u32 {
        match self {
            ReportTarget::PrankGeGMinus4 | ReportTarget::Genus4Complete => 4,
            _ => 5,
        }
    }

    /// Whether rows are pass/fail claims rather than a status survey.
    pub fn is_claim(&self) -> bool {
        *self != ReportTarget::Genus5Prank0Survey
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("target {target} needs gmax >= {min} (got {gmax})")]
    GmaxTooSmall {
        target: &'static str,
        min: u32,
        gmax: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRow {
    pub g: u32,
    pub polygon: String,
    pub status: String,
    pub condition: String,
    /// `None` for survey rows.
    pub pass: Option<bool>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub target: ReportTarget,
    pub gmax: u32,
    pub context: PrimeQuery,
    pub rows: Vec<ReportRow>,
}

impl Report {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.pass == Some(true)).count()
    }

    pub fn claims(&self) -> usize {
        self.rows.iter().filter(|r| r.pass.is_some()).count()
    }

    pub fn ok(&self) -> bool {
        self.passed() == self.claims()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "report {} (gmax {}, {})",
            self.target.name(),
            self.gmax,
            self.context
        )?;
        for r in &self.rows {
            let mark = match r.pass {
                Some(true) => "PASS ",
                Some(false) => "FAIL ",
                None => "",
            };
            write!(f, "  {mark}g={} {:<20} {}", r.g, r.polygon, r.status)?;
            if r.status == "yes" {
                write!(f, " [{}]", r.condition)?;
            }
            if !r.note.is_empty() {
                write!(f, "; {}", r.note)?;
            }
            writeln!(f)?;
        }
        if self.target.is_claim() {
            writeln!(f, "{}/{} claims hold", self.passed(), self.claims())?;
        }
        Ok(())
    }
}

/// Evaluates `target` against `table`.
pub fn report(target: ReportTarget, table: &FactTable) -> Result<Report, ReportError> {
    if table.gmax < target.min_gmax() {
        return Err(ReportError::GmaxTooSmall {
            target: target.name(),
            min: target.min_gmax(),
            gmax: table.gmax,
        });
    }
    let selected = |g: u32, xi: &NewtonPolygon| match target {
        ReportTarget::PrankGeGMinus4 => g >= 4 && xi.p_rank() + 4 >= g,
        ReportTarget::Genus4Complete => g == 4,
        ReportTarget::Genus5PositivePrank => g == 5 && xi.p_rank() > 0,
        ReportTarget::Genus5Prank0Survey => g == 5 && xi.p_rank() == 0,
    };
    let rows = table
        .facts()
        .filter(|f| selected(f.g(), f.polygon))
        .map(|f| {
            let note = if f.occurs() {
                f.provenance
                    .derivations
                    .iter()
                    .map(|d| d.rule_id())
                    .collect::<Vec<_>>()
                    .join(", ")
            } else {
                f.provenance
                    .blockers
                    .iter()
                    .find(|b| b.hypothesis().is_some())
                    .or(f.provenance.blockers.first())
                    .map(Blocker::to_string)
                    .unwrap_or_default()
            };
            ReportRow {
                g: f.g(),
                polygon: f.polygon.format(),
                status: f.status_label().to_string(),
                condition: f.state.occurs.to_string(),
                pass: target.is_claim().then(|| f.occurs()),
                note,
            }
        })
        .collect();
    Ok(Report {
        target,
        gmax: table.gmax,
        context: table.query,
        rows,
    })
}

/// One line of `selfcheck` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, failures: Vec<String>, checked: usize) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        pass: failures.is_empty(),
        detail: match failures.first() {
            None => format!("{checked} cases agree"),
            Some(first) => format!(
                "{} of {checked} cases differ, first: {first}",
                failures.len()
            ),
        },
    }
}

/// Oracle equivalences, identities and engine determinism.
pub fn selfcheck() -> Vec<CheckResult> {
    let mut out = Vec::new();

    let mut fails = Vec::new();
    for g in 1..=8 {
        let main: BTreeSet<Triples> = enumerate(g).iter().map(triples_of).collect();
        match brute_enumerate(g) {
            Ok(brute) if brute == main => {}
            Ok(brute) => fails.push(format!("g={g}: {} vs {}", main.len(), brute.len())),
            Err(e) => fails.push(e.to_string()),
        }
    }
    out.push(check("enumerate = brute_enumerate (g <= 8)", fails, 8));

    let mut fails = Vec::new();
    let mut n = 0;
    for g in 1..=8 {
        for xi in enumerate(g) {
            n += 1;
            let (a, b) = (codim_ag(&xi), brute_codim(&xi));
            if a != b {
                fails.push(format!("{xi}: {a} vs {b}"));
            }
        }
    }
    out.push(check("codim_ag = brute_codim (g <= 8)", fails, n));

    let mut fails = Vec::new();
    let mut n = 0;
    for g in 1..=7 {
        for xi in enumerate(g) {
            n += 1;
            let main: BTreeSet<_> = xi
                .partitions()
                .iter()
                .map(|p| unordered(triples_of(&p.left), triples_of(&p.right)))
                .collect();
            match brute_partitions(&xi) {
                Ok(brute) if brute == main => {}
                Ok(brute) => fails.push(format!("{xi}: {} vs {}", main.len(), brute.len())),
                Err(e) => fails.push(format!("{xi}: {e}")),
            }
        }
    }
    out.push(check("partitions = brute_partitions (g <= 7)", fails, n));

    let fails = (1..=12)
        .filter(|&g| !supersingular_dim_identity(g))
        .map(|g| format!("g={g}"))
        .collect();
    out.push(check(
        "dim A_g - codim(ss^g) = floor(g^2/4) (g <= 12)",
        fails,
        12,
    ));

    let axioms = builtin_axioms();
    let v = validate(&axioms);
    out.push(CheckResult {
        name: "builtin axioms validate".into(),
        pass: v.is_ok(),
        detail: if v.is_ok() {
            format!("{} axioms", axioms.len())
        } else {
            v.to_string()
        },
    });

    let ctx = Context {
        query: PrimeQuery::AllPrimes,
        axioms: &axioms,
    };
    let mut reversed = RuleKind::ALL.to_vec();
    reversed.reverse();
    let a = closure_with(6, &ctx, &Schedule::default()).to_json();
    let b = closure_with(
        6,
        &ctx,
        &Schedule::Sequential {
            order: reversed,
            reverse_keys: true,
        },
    )
    .to_json();
    out.push(CheckResult {
        name: "closure is schedule independent (gmax 6)".into(),
        pass: a == b,
        detail: format!("{} bytes", a.len()),
    });
    out
}
