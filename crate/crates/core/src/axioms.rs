//! Citable literature facts the engine starts from.
//!
//! Axioms are stored in a JSON document:
//!
//! ```json
//! {"version": 1, "axioms": [
//!   {"id": "A7", "kind": "occurs_smooth", "g": 5, "polygon": "nu5",
//!    "prime_condition": {"type": "congruence", "modulus": 11, "residues": [3,4,5,9]},
//!    "citation": "..."}
//! ]}
//! ```
//!
//! `g` is either a genus or a string `">=k"`. A `">=k"` axiom is a family:
//! its polygons (and `f`) are written for genus `k` and stand for
//! `ord^(g-k) + polygon` (and `f + g - k`) at every genus `g >= k`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::condition::{ConditionError, PrimeCondition, PrimeQuery, RawCondition};
use crate::polygon::{parse, NewtonPolygon};
use crate::strata::dim_mg;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxiomKind {
    /// Each listed polygon occurs on `M_g`.
    OccursSmooth,
    /// On every component of `M_g^f` the generic polygon lies in the listed set.
    GenericNpOfPrankComponents,
    /// The polygon occurs and every component of `M_g[xi]` has dimension in `[dim_lo, dim_hi]`.
    DimExactComponents,
    /// The polygon occurs and every component of `M_g[xi]` is open and dense
    /// in a component of `M_g^f`.
    OpenDenseInPrankStratum,
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AxiomKind::OccursSmooth => "occurs_smooth",
            AxiomKind::GenericNpOfPrankComponents => "generic_np_of_prank_components",
            AxiomKind::DimExactComponents => "dim_exact_components",
            AxiomKind::OpenDenseInPrankStratum => "open_dense_in_prank_stratum",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenusSpec {
    Exact(u32),
    AtLeast(u32),
}

impl GenusSpec {
    pub fn base(&self) -> u32 {
        match *self {
            GenusSpec::Exact(g) | GenusSpec::AtLeast(g) => g,
        }
    }

    pub fn covers(&self, g: u32) -> bool {
        match *self {
            GenusSpec::Exact(k) => g == k,
            GenusSpec::AtLeast(k) => g >= k,
        }
    }
}

impl fmt::Display for GenusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenusSpec::Exact(g) => write!(f, "{g}"),
            GenusSpec::AtLeast(g) => write!(f, ">={g}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axiom {
    pub id: String,
    pub kind: AxiomKind,
    pub genus: GenusSpec,
    /// Polygons at the base genus.
    pub polygons: Vec<NewtonPolygon>,
    /// p-rank at the base genus (`GenericNpOfPrankComponents` only).
    pub p_rank: Option<u32>,
    pub condition: PrimeCondition,
    pub dim_lo: Option<u32>,
    pub dim_hi: Option<u32>,
    pub citation: String,
    /// Shipped for reference but derivable by the engine.
    pub redundant: bool,
}

/// An axiom specialised to one genus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomInstance<'a> {
    pub axiom: &'a Axiom,
    pub g: u32,
    pub polygons: Vec<NewtonPolygon>,
    pub p_rank: Option<u32>,
}

impl Axiom {
    pub fn instantiate(&self, g: u32) -> Option<AxiomInstance<'_>> {
        if !self.genus.covers(g) {
            return None;
        }
        let pad = g - self.genus.base();
        Some(AxiomInstance {
            axiom: self,
            g,
            polygons: self.polygons.iter().map(|p| p.with_ordinary(pad)).collect(),
            p_rank: self.p_rank.map(|f| f + pad),
        })
    }

    /// Whether the engine may use this axiom when answering `query`.
    pub fn usable(&self, query: PrimeQuery) -> bool {
        self.condition.holds(query).unwrap_or(false)
    }
}

#[derive(Debug, Error)]
pub enum AxiomError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("axiom validation failed:\n{0}")]
    Validation(ValidationReport),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationIssue {
    pub id: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }

    fn push(&mut self, id: &str, message: impl Into<String>) {
        self.issues.push(ValidationIssue {
            id: id.to_string(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for issue in &self.issues {
            writeln!(f, "  {}: {}", issue.id, issue.message)?;
        }
        Ok(())
    }
}

/// Checks the structural invariants of an axiom list.
pub fn validate(axioms: &[Axiom]) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut ids = BTreeSet::new();
    for a in axioms {
        let id = a.id.as_str();
        if id.is_empty() {
            report.push(id, "empty id");
        }
        if !ids.insert(id) {
            report.push(id, "duplicate id");
        }
        if a.citation.trim().is_empty() {
            report.push(id, "missing citation");
        }
        if a.polygons.is_empty() {
            report.push(id, "no polygon");
        }
        let g = a.genus.base();
        if g == 0 {
            report.push(id, "genus must be positive");
        }
        for p in &a.polygons {
            if p.genus() != g {
                report.push(
                    id,
                    format!("polygon {p} has genus {} but axiom genus is {g}", p.genus()),
                );
            }
        }
        match a.kind {
            AxiomKind::GenericNpOfPrankComponents => match a.p_rank {
                None => report.push(id, "generic_np_of_prank_components needs f"),
                Some(f) => {
                    if g < 2 {
                        report.push(id, "p-rank strata need g >= 2");
                    }
                    for p in a.polygons.iter().filter(|p| p.p_rank() != f) {
                        report.push(id, format!("polygon {p} does not have p-rank {f}"));
                    }
                }
            },
            _ if a.p_rank.is_some() => report.push(
                id,
                "f is only meaningful for generic_np_of_prank_components",
            ),
            _ => {}
        }
        match a.kind {
            AxiomKind::DimExactComponents => match (a.dim_lo, a.dim_hi) {
                (Some(lo), Some(hi)) => {
                    if lo > hi {
                        report.push(id, format!("dim_lo {lo} exceeds dim_hi {hi}"));
                    }
                    if hi > dim_mg(g) {
                        report.push(id, format!("dim_hi {hi} exceeds dim M_g = {}", dim_mg(g)));
                    }
                    if matches!(a.genus, GenusSpec::AtLeast(_)) {
                        report.push(id, "dimension bounds need a fixed genus");
                    }
                }
                _ => report.push(id, "dim_exact_components needs dim_lo and dim_hi"),
            },
            _ if a.dim_lo.is_some() || a.dim_hi.is_some() => {
                report.push(id, format!("{} takes no dimension bounds", a.kind))
            }
            _ => {}
        }
        if a.kind == AxiomKind::OpenDenseInPrankStratum && g < 2 {
            report.push(id, "p-rank strata need g >= 2");
        }
    }
    report
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AxiomFile {
    version: u32,
    axioms: Vec<RawAxiom>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum RawGenus {
    Exact(u32),
    Range(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxiom {
    id: String,
    kind: AxiomKind,
    g: RawGenus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    polygon: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    polygons: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    f: Option<u32>,
    prime_condition: RawCondition,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim_lo: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim_hi: Option<u32>,
    citation: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    redundant: bool,
}

fn parse_genus(raw: &RawGenus) -> Result<GenusSpec, String> {
    match raw {
        RawGenus::Exact(g) => Ok(GenusSpec::Exact(*g)),
        RawGenus::Range(s) => s
            .trim()
            .strip_prefix(">=")
            .and_then(|k| k.trim().parse::<u32>().ok())
            .map(GenusSpec::AtLeast)
            .ok_or_else(|| format!("bad genus '{s}': expected an integer or \">=k\"")),
    }
}

impl RawAxiom {
    fn from_axiom(a: &Axiom) -> Self {
        let texts: Vec<String> = a.polygons.iter().map(|p| p.format()).collect();
        let (polygon, polygons) = if texts.len() == 1 {
            (Some(texts[0].clone()), None)
        } else {
            (None, Some(texts))
        };
        RawAxiom {
            id: a.id.clone(),
            kind: a.kind,
            g: match a.genus {
                GenusSpec::Exact(g) => RawGenus::Exact(g),
                GenusSpec::AtLeast(g) => RawGenus::Range(format!(">={g}")),
            },
            polygon,
            polygons,
            f: a.p_rank,
            prime_condition: RawCondition::from_condition(&a.condition),
            dim_lo: a.dim_lo,
            dim_hi: a.dim_hi,
            citation: a.citation.clone(),
            redundant: a.redundant,
        }
    }

    fn into_axiom(self, report: &mut ValidationReport) -> Option<Axiom> {
        let id = self.id.clone();
        let genus = parse_genus(&self.g).map_err(|e| report.push(&id, e)).ok();
        let texts = match (self.polygon, self.polygons) {
            (Some(p), None) => vec![p],
            (None, Some(ps)) => ps,
            _ => {
                report.push(&id, "exactly one of 'polygon' and 'polygons' is required");
                return None;
            }
        };
        let mut polygons = Vec::new();
        let mut ok = true;
        for t in &texts {
            match parse(t) {
                Ok(p) => polygons.push(p),
                Err(e) => {
                    report.push(&id, format!("bad polygon '{t}': {e}"));
                    ok = false;
                }
            }
        }
        let condition = self
            .prime_condition
            .into_condition()
            .map_err(|e: ConditionError| report.push(&id, format!("bad condition: {e}")))
            .ok();
        match (genus, condition, ok) {
            (Some(genus), Some(condition), true) => Some(Axiom {
                id: self.id,
                kind: self.kind,
                genus,
                polygons,
                p_rank: self.f,
                condition,
                dim_lo: self.dim_lo,
                dim_hi: self.dim_hi,
                citation: self.citation,
                redundant: self.redundant,
            }),
            _ => None,
        }
    }
}

/// Serialises axioms to the documented JSON format.
pub fn save(axioms: &[Axiom]) -> String {
    let file = AxiomFile {
        version: FORMAT_VERSION,
        axioms: axioms.iter().map(RawAxiom::from_axiom).collect(),
    };
    serde_json::to_string_pretty(&file).expect("axiom file serialises")
}

pub fn load_str(text: &str) -> Result<Vec<Axiom>, AxiomError> {
    let file: AxiomFile = serde_json::from_str(text).map_err(|e| AxiomError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut report = ValidationReport::default();
    if file.version != FORMAT_VERSION {
        report.push("<file>", format!("unsupported version {}", file.version));
    }
    let axioms: Vec<Axiom> = file
        .axioms
        .into_iter()
        .filter_map(|raw| raw.into_axiom(&mut report))
        .collect();
    report.issues.extend(validate(&axioms).issues);
    if report.is_ok() {
        Ok(axioms)
    } else {
        Err(AxiomError::Validation(report))
    }
}

pub fn load(path: impl AsRef<Path>) -> Result<Vec<Axiom>, AxiomError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| AxiomError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_str(&text)
}

fn poly(s: &str) -> NewtonPolygon {
    parse(s).expect("builtin polygon")
}

#[allow(clippy::too_many_arguments)]
fn axiom(
    id: &str,
    kind: AxiomKind,
    genus: GenusSpec,
    polygons: &[&str],
    p_rank: Option<u32>,
    condition: PrimeCondition,
    dims: Option<(u32, u32)>,
    citation: &str,
) -> Axiom {
    Axiom {
        id: id.to_string(),
        kind,
        genus,
        polygons: polygons.iter().map(|s| poly(s)).collect(),
        p_rank,
        condition,
        dim_lo: dims.map(|d| d.0),
        dim_hi: dims.map(|d| d.1),
        citation: citation.to_string(),
        redundant: false,
    }
}

/// The literature facts behind the genus 4 and p-rank `>= g-4` results.
pub fn builtin_axioms() -> Vec<Axiom> {
    use AxiomKind::*;
    use GenusSpec::*;
    let all = || PrimeCondition::AllPrimes;
    let mod11 = || PrimeCondition::congruence(11, [3, 4, 5, 9]).expect("valid");
    let mod7 = PrimeCondition::congruence(7, [2, 4]).expect("valid");
    let mod8 = PrimeCondition::congruence(8, [7]).expect("valid");
    let mut out = vec![
        axiom(
            "A0.ord",
            DimExactComponents,
            Exact(1),
            &["ord"],
            None,
            all(),
            Some((1, 1)),
            "M_{1,1} is 1-dimensional and its generic elliptic curve is ordinary",
        ),
        axiom(
            "A0.ss",
            DimExactComponents,
            Exact(1),
            &["ss"],
            None,
            all(),
            Some((0, 0)),
            "Deuring: supersingular elliptic curves exist in every characteristic and are finite in number",
        ),
        axiom(
            "A1",
            OccursSmooth,
            Exact(3),
            &["nu3"],
            None,
            all(),
            None,
            "T_3 open Torelli locus is open and dense in A_3; nu3 is indecomposable",
        ),
        axiom(
            "A2",
            GenericNpOfPrankComponents,
            AtLeast(3),
            &["nu3"],
            Some(0),
            all(),
            None,
            "[AP:gen]: ord^(g-3)+nu3 is generic on every component of M_g^(g-3)",
        ),
        axiom(
            "A3",
            OpenDenseInPrankStratum,
            AtLeast(4),
            &["nu4"],
            None,
            all(),
            None,
            "[NP-survey]: components of M_g[ord^(g-4)+nu4] are open and dense in components of M_g^(g-4)",
        ),
        axiom(
            "A4",
            GenericNpOfPrankComponents,
            AtLeast(4),
            &["nu4", "nu3+ss"],
            Some(0),
            all(),
            None,
            "[AP:gen]: the generic polygon on each component of M_g^(g-4) is ord^(g-4)+nu4 or ord^(g-4)+nu3+ss",
        ),
        axiom(
            "A5",
            OccursSmooth,
            Exact(3),
            &["ss^3"],
            None,
            all(),
            None,
            "[oorthypsup]: supersingular curves of genus 3 exist",
        ),
        axiom(
            "A6",
            OccursSmooth,
            Exact(4),
            &["nu4"],
            None,
            all(),
            None,
            "[AP:gen]: nu4 occurs on M_4",
        ),
        axiom(
            "A7",
            OccursSmooth,
            Exact(5),
            &["nu5"],
            None,
            mod11(),
            None,
            "[LMPT1]: nu5 occurs on M_5 for p = 3,4,5,9 mod 11",
        ),
        axiom(
            "A8",
            OccursSmooth,
            Exact(6),
            &["nu6"],
            None,
            mod7,
            None,
            "[LMPT2]: nu6 occurs on M_6 for p = 2,4 mod 7",
        ),
        axiom(
            "A9",
            OccursSmooth,
            Exact(5),
            &["nu5", "G(3,2)+G(2,3)"],
            None,
            mod11(),
            None,
            "[LMPT1]: G(1,4)+G(4,1) and G(2,3)+G(3,2) occur on M_5 for p = 3,4,5,9 mod 11",
        ),
        axiom(
            "A10",
            OccursSmooth,
            Exact(5),
            &["ss^5"],
            None,
            PrimeCondition::almost_all(mod8, "p >> 0"),
            None,
            "[LMPT2]: supersingular curves of genus 5 exist for p = 7 mod 8 and p sufficiently large",
        ),
        axiom(
            "A11",
            OccursSmooth,
            Exact(4),
            &["ss^4"],
            None,
            all(),
            None,
            "[khs20]: supersingular curves of genus 4 exist in every characteristic",
        ),
    ];
    out.last_mut().expect("nonempty").redundant = true;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn by_id<'a>(axioms: &'a [Axiom], id: &str) -> &'a Axiom {
        axioms.iter().find(|a| a.id == id).unwrap()
    }

    #[test]
    fn builtin_is_valid_and_cited() {
        let axioms = builtin_axioms();
        assert!(validate(&axioms).is_ok(), "{}", validate(&axioms));
        for a in &axioms {
            assert!(!a.citation.trim().is_empty());
        }
        assert!(by_id(&axioms, "A11").redundant);
        assert_eq!(axioms.iter().filter(|a| a.redundant).count(), 1);
    }

    #[test]
    fn builtin_examples() {
        let axioms = builtin_axioms();
        assert_eq!(
            by_id(&axioms, "A7").condition,
            PrimeCondition::congruence(11, [3, 4, 5, 9]).unwrap()
        );
        let ord = by_id(&axioms, "A0.ord");
        assert_eq!(
            (ord.polygons[0].format().as_str(), ord.dim_lo, ord.dim_hi),
            ("ord", Some(1), Some(1))
        );
        let ss = by_id(&axioms, "A0.ss");
        assert_eq!(
            (ss.polygons[0].format().as_str(), ss.dim_lo, ss.dim_hi),
            ("ss", Some(0), Some(0))
        );
        assert!(by_id(&axioms, "A10").condition.is_reporting_only());
    }

    #[test]
    fn family_instantiation() {
        let axioms = builtin_axioms();
        let a4 = by_id(&axioms, "A4");
        assert!(a4.instantiate(3).is_none());
        let inst = a4.instantiate(7).unwrap();
        assert_eq!(inst.p_rank, Some(3));
        assert_eq!(inst.polygons, vec![poly("ord^3+nu4"), poly("ord^3+nu3+ss")]);
        assert!(by_id(&axioms, "A6").instantiate(5).is_none());
    }

    #[test]
    fn save_load_roundtrip() {
        let axioms = builtin_axioms();
        let text = save(&axioms);
        assert_eq!(load_str(&text).unwrap(), axioms);
    }

    fn one(entry: &str) -> String {
        format!(r#"{{"version":1,"axioms":[{entry}]}}"#)
    }

    #[test]
    fn non_unit_residue_is_a_validation_error() {
        let text = one(r#"{"id":"X","kind":"occurs_smooth","g":5,"polygon":"nu5",
                "prime_condition":{"type":"congruence","modulus":11,"residues":[0]},"citation":"c"}"#);
        match load_str(&text) {
            Err(AxiomError::Validation(r)) => {
                assert_eq!(r.issues.len(), 1);
                assert!(r.issues[0].message.contains("bad condition"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_kind_is_a_parse_error() {
        let text = one(
            r#"{"id":"X","kind":"occurs_sometimes","g":5,"polygon":"nu5",
                "prime_condition":{"type":"all_primes"},"citation":"c"}"#,
        );
        assert!(matches!(
            load_str(&text),
            Err(AxiomError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn unknown_field_is_a_parse_error() {
        let text = one(
            r#"{"id":"X","kind":"occurs_smooth","g":5,"polygon":"nu5","colour":"red",
                "prime_condition":{"type":"all_primes"},"citation":"c"}"#,
        );
        assert!(matches!(load_str(&text), Err(AxiomError::Parse { .. })));
    }

    #[test]
    fn itemised_validation_errors() {
        let text = r#"{"version":1,"axioms":[
              {"id":"X","kind":"occurs_smooth","g":4,"polygon":"nu5","prime_condition":{"type":"all_primes"},"citation":"c"},
              {"id":"X","kind":"occurs_smooth","g":5,"polygon":"G(1,2)","prime_condition":{"type":"all_primes"},"citation":"c"},
              {"id":"Y","kind":"generic_np_of_prank_components","g":">=3","polygons":["nu3"],"prime_condition":{"type":"all_primes"},"citation":""}
            ]}"#;
        match load_str(text) {
            Err(AxiomError::Validation(r)) => {
                let msgs: Vec<_> = r
                    .issues
                    .iter()
                    .map(|i| format!("{}: {}", i.id, i.message))
                    .collect();
                assert!(
                    msgs.iter().any(|m| m.contains("bad polygon 'G(1,2)'")),
                    "{msgs:?}"
                );
                assert!(
                    msgs.iter()
                        .any(|m| m.starts_with("X: polygon nu5 has genus 5")),
                    "{msgs:?}"
                );
                assert!(msgs.iter().any(|m| m == "Y: missing citation"), "{msgs:?}");
                assert!(
                    msgs.iter()
                        .any(|m| m == "Y: generic_np_of_prank_components needs f"),
                    "{msgs:?}"
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_ids() {
        let mut axioms = builtin_axioms();
        axioms.push(axioms[3].clone());
        let report = validate(&axioms);
        assert_eq!(
            report.issues,
            vec![ValidationIssue {
                id: "A2".into(),
                message: "duplicate id".into()
            }]
        );
    }

    #[test]
    fn usable_by_query() {
        let axioms = builtin_axioms();
        let a7 = by_id(&axioms, "A7");
        assert!(!a7.usable(PrimeQuery::AllPrimes));
        assert!(a7.usable(PrimeQuery::Concrete { p: 3 }));
        assert!(!a7.usable(PrimeQuery::Concrete { p: 13 }));
        let a10 = by_id(&axioms, "A10");
        assert!(!a10.usable(PrimeQuery::AllPrimes));
        assert!(!a10.usable(PrimeQuery::Concrete { p: 7 }));
        assert!(!a10.usable(PrimeQuery::Concrete { p: 1_000_039 }));
    }
}
