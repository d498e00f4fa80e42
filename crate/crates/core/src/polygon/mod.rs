//! Symmetric Newton polygons as multisets of isocrystal factors `G(c,d)`.
//!
//! A polygon of genus `g` is stored as its Dieudonné-Manin decomposition: a
//! list of coprime pairs `(c, d)` with multiplicities, sorted by ascending
//! slope `d/(c+d)` and then by height `c+d`. Symmetry (`m(c,d) = m(d,c)`) is
//! checked at construction, so every `NewtonPolygon` value is a valid
//! polygon of dimension `g >= 1`.

mod grammar;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use grammar::parse;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("G({c},{d}) is not a valid factor: gcd({c},{d}) must be 1")]
    NonCoprime { c: u32, d: u32 },
    #[error(
        "not symmetric: G({c},{d}) has multiplicity {m} but G({d},{c}) has multiplicity {mirror}"
    )]
    NotSymmetric { c: u32, d: u32, m: u32, mirror: u32 },
    #[error("empty polygon")]
    Empty,
    #[error("G({c},{d}) has multiplicity 0")]
    ZeroMultiplicity { c: u32, d: u32 },
    #[error("nu{d} is undefined: nu requires d >= 3")]
    NuTooSmall { d: u32 },
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("genus mismatch: {left} vs {right}")]
    GenusMismatch { left: u32, right: u32 },
    #[error("multiplicity overflow")]
    Overflow,
}

/// The isocrystal `G(c,d)`: codimension `c`, dimension `d`, slope `d/(c+d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IsoFactor {
    c: u32,
    d: u32,
}

impl IsoFactor {
    pub fn new(c: u32, d: u32) -> Result<Self, PolygonError> {
        if c.gcd(&d) != 1 {
            return Err(PolygonError::NonCoprime { c, d });
        }
        Ok(IsoFactor { c, d })
    }

    pub fn codim(&self) -> u32 {
        self.c
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn height(&self) -> u32 {
        self.c + self.d
    }

    pub fn slope(&self) -> Ratio<u64> {
        Ratio::new(self.d as u64, self.height() as u64)
    }

    /// The factor of complementary slope, `G(d,c)`.
    pub fn dual(&self) -> IsoFactor {
        IsoFactor {
            c: self.d,
            d: self.c,
        }
    }

    fn slope_cmp(&self, other: &Self) -> Ordering {
        (self.d as u64 * other.height() as u64).cmp(&(other.d as u64 * self.height() as u64))
    }
}

impl Ord for IsoFactor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.slope_cmp(other)
            .then_with(|| self.height().cmp(&other.height()))
    }
}

impl PartialOrd for IsoFactor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for IsoFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{})", self.c, self.d)
    }
}

/// A symmetric Newton polygon in canonical factor form.
///
/// Ordering is by genus, then lexicographically by the canonical factor
/// list; `enumerate` returns polygons in this order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NewtonPolygon {
    factors: Vec<(IsoFactor, u32)>,
    genus: u32,
}

impl NewtonPolygon {
    /// Builds a polygon from `(c, d, m)` triples. Repeated factors are merged.
    pub fn make(triples: &[(u32, u32, u32)]) -> Result<Self, PolygonError> {
        if triples.is_empty() {
            return Err(PolygonError::Empty);
        }
        let mut merged: Vec<(IsoFactor, u32)> = Vec::with_capacity(triples.len());
        for &(c, d, m) in triples {
            let factor = IsoFactor::new(c, d)?;
            if m == 0 {
                return Err(PolygonError::ZeroMultiplicity { c, d });
            }
            match merged.iter_mut().find(|(f, _)| *f == factor) {
                Some((_, mult)) => *mult = mult.checked_add(m).ok_or(PolygonError::Overflow)?,
                None => merged.push((factor, m)),
            }
        }
        Self::from_factors(merged)
    }

    fn from_factors(mut factors: Vec<(IsoFactor, u32)>) -> Result<Self, PolygonError> {
        if factors.is_empty() {
            return Err(PolygonError::Empty);
        }
        factors.sort();
        for &(f, m) in &factors {
            let mirror = factors
                .iter()
                .find(|(other, _)| *other == f.dual())
                .map_or(0, |&(_, m)| m);
            if mirror != m {
                return Err(PolygonError::NotSymmetric {
                    c: f.c,
                    d: f.d,
                    m,
                    mirror,
                });
            }
        }
        let genus = factors
            .iter()
            .try_fold(0u32, |acc, &(f, m)| acc.checked_add(f.d.checked_mul(m)?))
            .ok_or(PolygonError::Overflow)?;
        Ok(NewtonPolygon { factors, genus })
    }

    /// `ord^n`. Panics if `n == 0`.
    pub fn ordinary(n: u32) -> Self {
        assert!(n > 0, "ord^0 is not a polygon");
        Self::make(&[(0, 1, n), (1, 0, n)]).expect("ordinary polygon is valid")
    }

    /// `sigma_n = ss^n`. Panics if `n == 0`.
    pub fn supersingular(n: u32) -> Self {
        assert!(n > 0, "ss^0 is not a polygon");
        Self::make(&[(1, 1, n)]).expect("supersingular polygon is valid")
    }

    /// `nu_d^0 = G(1,d-1) + G(d-1,1)`, the generic p-rank 0 polygon of dimension `d`.
    pub fn nu(d: u32) -> Result<Self, PolygonError> {
        if d < 3 {
            return Err(PolygonError::NuTooSmall { d });
        }
        Self::make(&[(1, d - 1, 1), (d - 1, 1, 1)])
    }

    /// `G(c,d) + G(d,c)` (or `G(1,1)` when `c = d = 1`).
    pub fn pair(c: u32, d: u32) -> Result<Self, PolygonError> {
        if c == d {
            Self::make(&[(c, d, 1)])
        } else {
            Self::make(&[(c, d, 1), (d, c, 1)])
        }
    }

    /// `ord^n + self`; `n` may be zero.
    pub fn with_ordinary(&self, n: u32) -> Self {
        if n == 0 {
            self.clone()
        } else {
            self.direct_sum(&Self::ordinary(n))
        }
    }

    /// `self` summed with itself `n` times. Panics if `n == 0`.
    pub fn repeat(&self, n: u32) -> Self {
        assert!(n > 0);
        let factors = self.factors.iter().map(|&(f, m)| (f, m * n)).collect();
        Self::from_factors(factors).expect("repeat preserves symmetry")
    }

    pub fn factors(&self) -> &[(IsoFactor, u32)] {
        &self.factors
    }

    pub fn to_triples(&self) -> Vec<(u32, u32, u32)> {
        self.factors.iter().map(|&(f, m)| (f.c, f.d, m)).collect()
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Total height `2g`.
    pub fn height(&self) -> u32 {
        2 * self.genus
    }

    pub fn multiplicity(&self, c: u32, d: u32) -> u32 {
        self.factors
            .iter()
            .find(|(f, _)| f.c == c && f.d == d)
            .map_or(0, |&(_, m)| m)
    }

    /// Multiplicity of slope 0, i.e. of the factor `G(1,0)`.
    pub fn p_rank(&self) -> u32 {
        self.multiplicity(1, 0)
    }

    pub fn is_supersingular(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].0 == IsoFactor { c: 1, d: 1 }
    }

    pub fn is_ordinary(&self) -> bool {
        self.p_rank() == self.genus
    }

    /// Multiset union of factors.
    pub fn direct_sum(&self, other: &NewtonPolygon) -> NewtonPolygon {
        let mut factors = self.factors.clone();
        for &(f, m) in &other.factors {
            match factors.iter_mut().find(|(g, _)| *g == f) {
                Some((_, mult)) => *mult += m,
                None => factors.push((f, m)),
            }
        }
        Self::from_factors(factors).expect("direct sum of symmetric polygons is symmetric")
    }

    /// Breakpoints of the lower convex path from `(0,0)` to `(2g,g)`.
    pub fn vertices(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.factors.len() + 1);
        let (mut x, mut y) = (0u32, 0u32);
        out.push((x, y));
        for &(f, m) in &self.factors {
            x += f.height() * m;
            y += f.d * m;
            out.push((x, y));
        }
        out
    }

    /// Height of the path at abscissa `x`, `0 <= x <= 2g`.
    pub fn height_at(&self, x: u32) -> Ratio<u64> {
        assert!(
            x <= self.height(),
            "abscissa {x} outside [0, {}]",
            self.height()
        );
        let mut x0 = 0u64;
        let mut y0 = 0u64;
        let x = x as u64;
        for &(f, m) in &self.factors {
            let width = (f.height() * m) as u64;
            if x <= x0 + width {
                return Ratio::from_integer(y0)
                    + Ratio::new((x - x0) * f.d as u64, f.height() as u64);
            }
            x0 += width;
            y0 += (f.d * m) as u64;
        }
        Ratio::from_integer(y0)
    }

    /// `ceil(height_at(x))`, computed with integer arithmetic.
    pub(crate) fn ceil_height_at(&self, x: u32) -> u64 {
        let mut x0 = 0u64;
        let mut y0 = 0u64;
        let x = x as u64;
        for &(f, m) in &self.factors {
            let width = (f.height() * m) as u64;
            if x <= x0 + width {
                return y0 + ((x - x0) * f.d as u64).div_ceil(f.height() as u64);
            }
            x0 += width;
            y0 += (f.d * m) as u64;
        }
        y0
    }

    /// Whether `self` lies on or above `other` at every integer abscissa.
    pub fn dominates(&self, other: &NewtonPolygon) -> Result<bool, PolygonError> {
        if self.genus != other.genus {
            return Err(PolygonError::GenusMismatch {
                left: self.genus,
                right: other.genus,
            });
        }
        Ok((0..=self.height()).all(|x| self.height_at(x) >= other.height_at(x)))
    }

    /// All unordered splits `self = left + right` into two symmetric polygons.
    pub fn partitions(&self) -> Vec<PolygonPartition> {
        // Symmetric sub-multisets are chosen block by block: a block is a
        // factor with slope <= 1/2 together with its dual.
        let blocks: Vec<(IsoFactor, u32)> = self
            .factors
            .iter()
            .copied()
            .filter(|(f, _)| f.d <= f.c)
            .collect();
        let mut counts = vec![0u32; blocks.len()];
        let mut seen = BTreeSet::new();
        loop {
            let taken: u32 = counts.iter().sum();
            let total: u32 = blocks.iter().map(|&(_, m)| m).sum();
            if taken != 0 && taken != total {
                let left = Self::from_blocks(&blocks, &counts, |k, _| k);
                let right = Self::from_blocks(&blocks, &counts, |k, m| m - k);
                seen.insert(PolygonPartition::new(left, right));
            }
            // mixed-radix increment
            let mut i = 0;
            loop {
                if i == blocks.len() {
                    return seen.into_iter().collect();
                }
                if counts[i] < blocks[i].1 {
                    counts[i] += 1;
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
        }
    }

    fn from_blocks(
        blocks: &[(IsoFactor, u32)],
        counts: &[u32],
        pick: impl Fn(u32, u32) -> u32,
    ) -> NewtonPolygon {
        let mut factors = Vec::new();
        for (&(f, m), &k) in blocks.iter().zip(counts) {
            let n = pick(k, m);
            if n == 0 {
                continue;
            }
            factors.push((f, n));
            if f.dual() != f {
                factors.push((f.dual(), n));
            }
        }
        Self::from_factors(factors).expect("block selection is symmetric and nonempty")
    }

    pub fn is_indecomposable(&self) -> bool {
        self.partitions().is_empty()
    }

    /// Canonical expression text; `parse(p.format()) == p`.
    pub fn format(&self) -> String {
        self.to_string()
    }
}

impl Ord for NewtonPolygon {
    fn cmp(&self, other: &Self) -> Ordering {
        self.genus
            .cmp(&other.genus)
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for NewtonPolygon {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NewtonPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn pow(m: u32) -> String {
            if m == 1 {
                String::new()
            } else {
                format!("^{m}")
            }
        }
        // Slope <= 1/2 members in ascending slope order; each stands for its
        // symmetric block.
        let mut terms = Vec::new();
        for &(factor, m) in self.factors.iter().filter(|(g, _)| g.d <= g.c) {
            let term = match (factor.c, factor.d) {
                (1, 0) => format!("ord{}", pow(m)),
                (1, 1) => format!("ss{}", pow(m)),
                (c, 1) => format!("nu{}{}", c + 1, pow(m)),
                (c, d) => format!("G({c},{d}){p}+G({d},{c}){p}", p = pow(m)),
            };
            terms.push(term);
        }
        f.write_str(&terms.join("+"))
    }
}

impl std::str::FromStr for NewtonPolygon {
    type Err = PolygonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl Serialize for NewtonPolygon {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<[u32; 3]> = self.factors.iter().map(|&(f, m)| [f.c, f.d, m]).collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for NewtonPolygon {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<[u32; 3]> = Vec::deserialize(deserializer)?;
        let triples: Vec<_> = rows.into_iter().map(|[c, d, m]| (c, d, m)).collect();
        NewtonPolygon::make(&triples).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter writing a polygon as its canonical expression text.
pub mod expr_serde {
    use super::{parse, NewtonPolygon};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &NewtonPolygon, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&p.format())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<NewtonPolygon, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// An unordered split of a polygon into two symmetric polygons.
/// Stored with `left <= right`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PolygonPartition {
    pub left: NewtonPolygon,
    pub right: NewtonPolygon,
}

impl PolygonPartition {
    pub fn new(a: NewtonPolygon, b: NewtonPolygon) -> Self {
        if a <= b {
            PolygonPartition { left: a, right: b }
        } else {
            PolygonPartition { left: b, right: a }
        }
    }

    pub fn parent(&self) -> NewtonPolygon {
        self.left.direct_sum(&self.right)
    }

    /// Whether this is the unordered pair `{a, b}`.
    pub fn is_pair(&self, a: &NewtonPolygon, b: &NewtonPolygon) -> bool {
        (&self.left == a && &self.right == b) || (&self.left == b && &self.right == a)
    }
}

impl fmt::Display for PolygonPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// Every symmetric polygon of genus `g`, in canonical order.
pub fn enumerate(g: u32) -> Vec<NewtonPolygon> {
    assert!(g >= 1, "genus must be positive");
    // Symmetric blocks with their genus contribution: ord and ss weigh 1,
    // G(c,d)+G(d,c) with c > d >= 1 weighs c + d.
    let mut blocks: Vec<(IsoFactor, u32)> =
        vec![(IsoFactor { c: 1, d: 0 }, 1), (IsoFactor { c: 1, d: 1 }, 1)];
    for h in 3..=g {
        for d in 1..h {
            let c = h - d;
            if c > d && c.gcd(&d) == 1 {
                blocks.push((IsoFactor { c, d }, h));
            }
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fill(&blocks, 0, g, &mut chosen, &mut out);
    out.sort();
    out
}

fn fill(
    blocks: &[(IsoFactor, u32)],
    start: usize,
    remaining: u32,
    chosen: &mut Vec<(IsoFactor, u32)>,
    out: &mut Vec<NewtonPolygon>,
) {
    if remaining == 0 {
        let mut factors = Vec::new();
        for &(f, m) in chosen.iter() {
            factors.push((f, m));
            if f.dual() != f {
                factors.push((f.dual(), m));
            }
        }
        out.push(NewtonPolygon::from_factors(factors).expect("blocks are symmetric"));
        return;
    }
    for i in start..blocks.len() {
        let (factor, weight) = blocks[i];
        let mut m = 1;
        while m * weight <= remaining {
            chosen.push((factor, m));
            fill(blocks, i + 1, remaining - m * weight, chosen, out);
            chosen.pop();
            m += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> NewtonPolygon {
        parse(s).unwrap()
    }

    #[test]
    fn make_examples() {
        let ord3 = NewtonPolygon::make(&[(0, 1, 3), (1, 0, 3)]).unwrap();
        assert_eq!(ord3, NewtonPolygon::ordinary(3));
        assert_eq!(ord3.genus(), 3);

        let nu3 = NewtonPolygon::make(&[(1, 2, 1), (2, 1, 1)]).unwrap();
        assert_eq!(nu3, NewtonPolygon::nu(3).unwrap());
        assert_eq!(nu3.genus(), 3);

        assert!(matches!(
            NewtonPolygon::make(&[(1, 2, 1)]),
            Err(PolygonError::NotSymmetric { .. })
        ));
        assert_eq!(NewtonPolygon::make(&[]), Err(PolygonError::Empty));
        assert_eq!(
            NewtonPolygon::make(&[(2, 4, 1), (4, 2, 1)]),
            Err(PolygonError::NonCoprime { c: 2, d: 4 })
        );
        assert_eq!(
            NewtonPolygon::make(&[(0, 0, 1)]),
            Err(PolygonError::NonCoprime { c: 0, d: 0 })
        );
    }

    #[test]
    fn make_merges_repeats() {
        let a = NewtonPolygon::make(&[(1, 1, 1), (1, 1, 2)]).unwrap();
        assert_eq!(a, NewtonPolygon::supersingular(3));
    }

    #[test]
    fn canonical_order_is_by_slope() {
        let a = p("ss+ord+nu3");
        let slopes: Vec<_> = a.factors().iter().map(|(f, _)| f.slope()).collect();
        let mut sorted = slopes.clone();
        sorted.sort();
        assert_eq!(slopes, sorted);
        assert_eq!(a.format(), "ord+nu3+ss");
    }

    #[test]
    fn direct_sum_examples() {
        let s = NewtonPolygon::ordinary(1).direct_sum(&NewtonPolygon::supersingular(1));
        assert_eq!((s.genus(), s.p_rank()), (2, 1));

        let s = NewtonPolygon::nu(3)
            .unwrap()
            .direct_sum(&NewtonPolygon::supersingular(1));
        // slope multiplicities in the path: (c+d)*m per factor
        let mults: Vec<_> = s
            .factors()
            .iter()
            .map(|&(f, m)| (f.slope(), f.height() * m))
            .collect();
        assert_eq!(
            mults,
            vec![
                (Ratio::new(1, 3), 3),
                (Ratio::new(1, 2), 2),
                (Ratio::new(2, 3), 3)
            ]
        );

        let s2 = NewtonPolygon::supersingular(2);
        assert_eq!(s2.direct_sum(&s2), NewtonPolygon::supersingular(4));
    }

    #[test]
    fn p_rank_examples() {
        for g in 1..=6 {
            assert_eq!(NewtonPolygon::ordinary(g).p_rank(), g);
            assert_eq!(NewtonPolygon::supersingular(g).p_rank(), 0);
        }
        for g in 4..=8 {
            let xi = NewtonPolygon::supersingular(3).with_ordinary(g - 3);
            assert_eq!(xi.p_rank(), g - 3);
        }
    }

    #[test]
    fn vertices_examples() {
        assert_eq!(p("ss").vertices(), vec![(0, 0), (2, 1)]);
        assert_eq!(p("nu3").vertices(), vec![(0, 0), (3, 1), (6, 3)]);
        assert_eq!(p("ord^2").vertices(), vec![(0, 0), (2, 0), (4, 2)]);
    }

    #[test]
    fn enumerate_small() {
        assert_eq!(enumerate(1), vec![p("ord"), p("ss")]);
        let counts: Vec<_> = (1..=4).map(|g| enumerate(g).len()).collect();
        assert_eq!(counts, vec![2, 3, 5, 8]);
    }

    #[test]
    fn partitions_examples() {
        let s4 = NewtonPolygon::supersingular(4);
        let parts = s4.partitions();
        assert_eq!(parts.len(), 2);
        assert!(parts[0].is_pair(&p("ss"), &p("ss^3")) || parts[1].is_pair(&p("ss"), &p("ss^3")));
        assert!(parts.iter().any(|q| q.is_pair(&p("ss^2"), &p("ss^2"))));

        let parts = p("nu3+ss").partitions();
        assert_eq!(parts.len(), 1);
        assert!(parts[0].is_pair(&p("nu3"), &p("ss")));

        assert!(p("nu5").partitions().is_empty());
        assert_eq!(p("ord^3").partitions().len(), 1);
    }

    #[test]
    fn indecomposable_examples() {
        for d in 3..=9 {
            assert!(NewtonPolygon::nu(d).unwrap().is_indecomposable());
        }
        assert!(p("ss").is_indecomposable());
        assert!(!p("sigma2").is_indecomposable());
        assert!(p("G(3,2)+G(2,3)").is_indecomposable());
    }

    #[test]
    fn dominates_examples() {
        for g in 1..=6 {
            let polys = enumerate(g);
            let top = NewtonPolygon::supersingular(g);
            let bottom = NewtonPolygon::ordinary(g);
            for xi in &polys {
                assert!(top.dominates(xi).unwrap());
                assert!(xi.dominates(&bottom).unwrap());
            }
        }
        assert!(p("nu3+ss").dominates(&p("nu4")).unwrap());
        assert!(!p("nu4").dominates(&p("nu3+ss")).unwrap());
        assert_eq!(
            p("ss").dominates(&p("ss^2")),
            Err(PolygonError::GenusMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn height_at_matches_ceil_route() {
        for g in 1..=6 {
            for xi in enumerate(g) {
                for x in 0..=xi.height() {
                    assert_eq!(xi.height_at(x).ceil().to_integer(), xi.ceil_height_at(x));
                }
            }
        }
    }

    #[test]
    fn serde_structured_form() {
        let xi = p("nu3+ss");
        let json = serde_json::to_string(&xi).unwrap();
        assert_eq!(json, "[[2,1,1],[1,1,1],[1,2,1]]");
        let back: NewtonPolygon = serde_json::from_str(&json).unwrap();
        assert_eq!(back, xi);
        assert!(serde_json::from_str::<NewtonPolygon>("[[1,2,1]]").is_err());
    }
}
