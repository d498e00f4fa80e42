//! Conditions on the characteristic `p`.
//!
//! A [`PrimeCondition`] is either unconditional, a set of residue classes
//! modulo `n`, or a reporting-only "almost all primes" caveat. Derived facts
//! carry a [`Dnf`]: a disjunction of conditions, each a conjunction already
//! folded into one residue set by CRT.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus must be at least 2 (got {0})")]
    BadModulus(u64),
    #[error("residue set is empty")]
    EmptyResidues,
    #[error("residue {residue} mod {modulus} is neither a unit nor a prime dividing the modulus")]
    NotAUnit { residue: u64, modulus: u64 },
    #[error("unknown condition type '{0}'")]
    UnknownType(String),
    #[error("condition type '{kind}' {problem}")]
    Shape { kind: String, problem: String },
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2u64;
    while k * k <= n {
        if n.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

/// Whether some prime is congruent to `r` modulo `n`.
fn admissible(r: u64, n: u64) -> bool {
    r.gcd(&n) == 1 || (is_prime(r) && n.is_multiple_of(r))
}

/// The characteristic(s) a question is asked about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PrimeQuery {
    /// A statement meant for every prime characteristic.
    AllPrimes,
    /// A single characteristic `p`.
    Concrete { p: u64 },
}

impl PrimeQuery {
    pub fn prime(p: u64) -> Result<Self, ConditionError> {
        if is_prime(p) {
            Ok(PrimeQuery::Concrete { p })
        } else {
            Err(ConditionError::NotPrime(p))
        }
    }
}

impl fmt::Display for PrimeQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeQuery::AllPrimes => f.write_str("all primes"),
            PrimeQuery::Concrete { p } => write!(f, "p = {p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimeCondition {
    AllPrimes,
    Congruence {
        modulus: u64,
        residues: BTreeSet<u64>,
    },
    /// Holds for primes satisfying `base` beyond an unquantified bound.
    /// Never satisfies a query.
    AlmostAll {
        base: Box<PrimeCondition>,
        caveat: String,
    },
}

impl PrimeCondition {
    pub fn congruence(
        modulus: u64,
        residues: impl IntoIterator<Item = u64>,
    ) -> Result<Self, ConditionError> {
        if modulus < 2 {
            return Err(ConditionError::BadModulus(modulus));
        }
        let residues: BTreeSet<u64> = residues.into_iter().map(|r| r % modulus).collect();
        if residues.is_empty() {
            return Err(ConditionError::EmptyResidues);
        }
        if let Some(&residue) = residues.iter().find(|&&r| !admissible(r, modulus)) {
            return Err(ConditionError::NotAUnit { residue, modulus });
        }
        Ok(PrimeCondition::Congruence { modulus, residues })
    }

    pub fn almost_all(base: PrimeCondition, caveat: impl Into<String>) -> Self {
        PrimeCondition::AlmostAll {
            base: Box::new(base),
            caveat: caveat.into(),
        }
    }

    /// Whether the condition is satisfied for `query`. Concrete queries must name a prime.
    pub fn holds(&self, query: PrimeQuery) -> Result<bool, ConditionError> {
        if let PrimeQuery::Concrete { p } = query {
            if !is_prime(p) {
                return Err(ConditionError::NotPrime(p));
            }
        }
        Ok(match (self, query) {
            (PrimeCondition::AllPrimes, _) => true,
            (PrimeCondition::Congruence { .. }, PrimeQuery::AllPrimes) => false,
            (PrimeCondition::Congruence { modulus, residues }, PrimeQuery::Concrete { p }) => {
                residues.contains(&(p % modulus))
            }
            (PrimeCondition::AlmostAll { .. }, _) => false,
        })
    }

    pub fn is_reporting_only(&self) -> bool {
        matches!(self, PrimeCondition::AlmostAll { .. })
    }

    /// Conjunction; `None` when no prime can satisfy both.
    pub fn and(&self, other: &PrimeCondition) -> Option<PrimeCondition> {
        use PrimeCondition::*;
        match (self, other) {
            (AllPrimes, x) | (x, AllPrimes) => Some(x.clone()),
            (AlmostAll { base, caveat }, x) | (x, AlmostAll { base, caveat }) => base
                .and(x)
                .map(|b| PrimeCondition::almost_all(b, caveat.clone())),
            (
                Congruence {
                    modulus: n1,
                    residues: r1,
                },
                Congruence {
                    modulus: n2,
                    residues: r2,
                },
            ) => {
                let l = n1.lcm(n2);
                let residues: BTreeSet<u64> = r1
                    .iter()
                    .flat_map(|&a| r2.iter().filter_map(move |&b| crt(a, *n1, b, *n2)))
                    .filter(|&x| admissible(x, l))
                    .collect();
                if residues.is_empty() {
                    None
                } else {
                    Some(Congruence {
                        modulus: l,
                        residues,
                    })
                }
            }
        }
    }

    /// Every prime satisfying `self` satisfies `other`.
    pub fn implies(&self, other: &PrimeCondition) -> bool {
        use PrimeCondition::*;
        match (self, other) {
            (_, AllPrimes) => !self.is_reporting_only(),
            (AllPrimes, Congruence { .. }) => false,
            (
                Congruence {
                    modulus: n1,
                    residues: r1,
                },
                Congruence {
                    modulus: n2,
                    residues: r2,
                },
            ) => {
                let l = n1.lcm(n2);
                (0..l)
                    .filter(|&x| admissible(x, l) && r1.contains(&(x % n1)))
                    .all(|x| r2.contains(&(x % n2)))
            }
            (AlmostAll { .. }, _) | (_, AlmostAll { .. }) => self == other,
        }
    }
}

/// Solves `x = a mod n1`, `x = b mod n2`; returns `x mod lcm(n1, n2)`.
pub fn crt(a: u64, n1: u64, b: u64, n2: u64) -> Option<u64> {
    let (a, n1, b, n2) = (a as i128, n1 as i128, b as i128, n2 as i128);
    let e = n1.extended_gcd(&n2);
    let g = e.gcd;
    if (b - a) % g != 0 {
        return None;
    }
    let l = n1 / g * n2;
    // x = a + n1 * t with n1 * t = b - a (mod n2)
    let t = ((b - a) / g * e.x).rem_euclid(n2 / g);
    Some((a + n1 * t).rem_euclid(l) as u64)
}

impl fmt::Display for PrimeCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeCondition::AllPrimes => f.write_str("all p"),
            PrimeCondition::Congruence { modulus, residues } => {
                let rs: Vec<String> = residues.iter().map(u64::to_string).collect();
                write!(f, "p = {} mod {modulus}", rs.join(","))
            }
            PrimeCondition::AlmostAll { base, caveat } => write!(f, "{base} and {caveat}"),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawCondition {
    #[serde(rename = "type")]
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    residues: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    caveat: Option<String>,
}

impl RawCondition {
    pub(crate) fn from_condition(c: &PrimeCondition) -> Self {
        match c {
            PrimeCondition::AllPrimes => RawCondition {
                kind: "all_primes".into(),
                modulus: None,
                residues: None,
                caveat: None,
            },
            PrimeCondition::Congruence { modulus, residues } => RawCondition {
                kind: "congruence".into(),
                modulus: Some(*modulus),
                residues: Some(residues.iter().copied().collect()),
                caveat: None,
            },
            PrimeCondition::AlmostAll { base, caveat } => {
                let inner = RawCondition::from_condition(base);
                RawCondition {
                    kind: "almost_all".into(),
                    modulus: inner.modulus,
                    residues: inner.residues,
                    caveat: Some(caveat.clone()),
                }
            }
        }
    }

    pub(crate) fn into_condition(self) -> Result<PrimeCondition, ConditionError> {
        let shape = |problem: &str| ConditionError::Shape {
            kind: self.kind.clone(),
            problem: problem.to_string(),
        };
        let base = match (self.modulus, &self.residues) {
            (None, None) => PrimeCondition::AllPrimes,
            (Some(n), Some(rs)) => PrimeCondition::congruence(n, rs.iter().copied())?,
            _ => return Err(shape("needs both modulus and residues, or neither")),
        };
        match self.kind.as_str() {
            "all_primes" => {
                if base != PrimeCondition::AllPrimes || self.caveat.is_some() {
                    return Err(shape("takes no other fields"));
                }
                Ok(base)
            }
            "congruence" => {
                if base == PrimeCondition::AllPrimes {
                    return Err(shape("needs modulus and residues"));
                }
                if self.caveat.is_some() {
                    return Err(shape("takes no caveat"));
                }
                Ok(base)
            }
            "almost_all" => {
                let caveat = self.caveat.clone().ok_or_else(|| shape("needs a caveat"))?;
                Ok(PrimeCondition::almost_all(base, caveat))
            }
            other => Err(ConditionError::UnknownType(other.to_string())),
        }
    }
}

impl Serialize for PrimeCondition {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawCondition::from_condition(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PrimeCondition {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        RawCondition::deserialize(deserializer)?
            .into_condition()
            .map_err(serde::de::Error::custom)
    }
}

/// A disjunction of conditions. The empty disjunction is "false".
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Dnf(BTreeSet<PrimeCondition>);

impl Dnf {
    pub fn never() -> Self {
        Dnf(BTreeSet::new())
    }

    pub fn all_primes() -> Self {
        Dnf::from(PrimeCondition::AllPrimes)
    }

    pub fn is_false(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_all_primes(&self) -> bool {
        self.0.contains(&PrimeCondition::AllPrimes)
    }

    pub fn clauses(&self) -> impl Iterator<Item = &PrimeCondition> {
        self.0.iter()
    }

    pub fn or(&self, other: &Dnf) -> Dnf {
        Dnf::normalized(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn and(&self, other: &Dnf) -> Dnf {
        Dnf::normalized(
            self.0
                .iter()
                .flat_map(|a| other.0.iter().filter_map(move |b| a.and(b))),
        )
    }

    pub fn holds(&self, query: PrimeQuery) -> Result<bool, ConditionError> {
        for clause in &self.0 {
            if clause.holds(query)? {
                return Ok(true);
            }
        }
        if let PrimeQuery::Concrete { p } = query {
            if !is_prime(p) {
                return Err(ConditionError::NotPrime(p));
            }
        }
        Ok(false)
    }

    /// Whether every prime satisfying `self` satisfies `other`.
    pub fn implies(&self, other: &Dnf) -> bool {
        self.0.iter().all(|a| other.0.iter().any(|b| a.implies(b)))
    }

    fn normalized(clauses: impl Iterator<Item = PrimeCondition>) -> Dnf {
        let all: BTreeSet<PrimeCondition> = clauses.collect();
        // Drop a clause when another clause absorbs it; among equivalent
        // clauses keep the smallest.
        let kept = all
            .iter()
            .filter(|a| {
                !all.iter()
                    .any(|b| b != *a && a.implies(b) && (!b.implies(a) || b < *a))
            })
            .cloned()
            .collect();
        Dnf(kept)
    }
}

impl From<PrimeCondition> for Dnf {
    fn from(c: PrimeCondition) -> Self {
        let mut set = BTreeSet::new();
        set.insert(c);
        Dnf(set)
    }
}

impl fmt::Display for Dnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("never");
        }
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" or "))
    }
}

impl Serialize for Dnf {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let v: Vec<&PrimeCondition> = self.0.iter().collect();
        v.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Dnf {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v: Vec<PrimeCondition> = Vec::deserialize(deserializer)?;
        Ok(Dnf::normalized(v.into_iter()))
    }
}
