//! Brute-force reference implementations.
//!
//! Nothing here calls the polygon algebra of the main code: polygons are
//! handled as plain `(c, d, m)` triples and evaluated with their own
//! routines, so agreement between the two is meaningful evidence.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

use crate::polygon::NewtonPolygon;

/// Largest genus the path search accepts.
pub const ENUMERATE_BUDGET: u32 = 8;
/// Largest number of isocrystal factors the subset search accepts.
pub const PARTITION_BUDGET: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search size {size} exceeds the oracle budget {budget}")]
    BudgetExceeded { size: u64, budget: u64 },
}

/// A polygon as a sorted list of `(c, d, m)` triples.
pub type Triples = Vec<(u32, u32, u32)>;

/// Canonical triple form of a main-code polygon, for comparisons.
pub fn triples_of(xi: &NewtonPolygon) -> Triples {
    let mut t = xi.to_triples();
    t.sort_unstable();
    t
}

/// Every symmetric Newton polygon of genus `g`, found by walking convex
/// lattice paths from `(0, 0)` to `(2g, g)`.
pub fn brute_enumerate(g: u32) -> Result<BTreeSet<Triples>, OracleError> {
    if g > ENUMERATE_BUDGET {
        return Err(OracleError::BudgetExceeded {
            size: g.into(),
            budget: ENUMERATE_BUDGET.into(),
        });
    }
    let mut out = BTreeSet::new();
    let mut path = Vec::new();
    walk(2 * g, g, None, &mut path, &mut out);
    Ok(out)
}

/// Extends `path` by segments `(dx, dy)` of strictly increasing slope in `[0, 1]`
/// until `(rest_x, rest_y)` is used up.
fn walk(
    rest_x: u32,
    rest_y: u32,
    last: Option<(u32, u32)>,
    path: &mut Vec<(u32, u32)>,
    out: &mut BTreeSet<Triples>,
) {
    if rest_x == 0 {
        if rest_y == 0 && symmetric(path) {
            out.insert(segments_to_triples(path));
        }
        return;
    }
    for dx in 1..=rest_x {
        for dy in 0..=dx.min(rest_y) {
            if let Some((lx, ly)) = last {
                // slope dy/dx must exceed ly/lx
                if dy * lx <= ly * dx {
                    continue;
                }
            }
            path.push((dx, dy));
            walk(rest_x - dx, rest_y - dy, Some((dx, dy)), path, out);
            path.pop();
        }
    }
}

/// A segment of slope `l` needs a partner of slope `1 - l` with the same width.
fn symmetric(path: &[(u32, u32)]) -> bool {
    path.iter().all(|&(dx, dy)| path.contains(&(dx, dx - dy)))
}

fn segments_to_triples(path: &[(u32, u32)]) -> Triples {
    let mut t: Triples = path
        .iter()
        .map(|&(dx, dy)| {
            let k = dx.gcd(&dy);
            let (w, d) = (dx / k, dy / k);
            (w - d, d, k)
        })
        .collect();
    t.sort_unstable();
    t
}

/// Height of the polygon at integer abscissa `x`, by walking its segments.
fn height(triples: &[(u32, u32, u32)], x: u32) -> Ratio<u64> {
    let mut segs: Vec<(u32, u32, u32)> = triples.to_vec();
    // ascending slope d / (c + d)
    segs.sort_by(|a, b| {
        (u64::from(a.1) * u64::from(b.0 + b.1)).cmp(&(u64::from(b.1) * u64::from(a.0 + a.1)))
    });
    let mut left = u64::from(x);
    let mut y = Ratio::from_integer(0u64);
    for (c, d, m) in segs {
        let width = u64::from((c + d) * m);
        let take = left.min(width);
        y += Ratio::new(take * u64::from(d), u64::from(c + d));
        left -= take;
        if left == 0 {
            break;
        }
    }
    y
}

/// Number of lattice points `(x, y)` with `1 <= x <= g`, `0 <= y <= g` lying
/// strictly below the polygon.
pub fn brute_codim(xi: &NewtonPolygon) -> u32 {
    let t = triples_of(xi);
    let g = xi.genus();
    let mut count = 0;
    for x in 1..=g {
        let h = height(&t, x);
        for y in 0..=g {
            if Ratio::from_integer(u64::from(y)) < h {
                count += 1;
            }
        }
    }
    count
}

/// Unordered pairs of symmetric sub-polygons splitting `xi`, by trying every
/// subset of its factor list.
pub fn brute_partitions(xi: &NewtonPolygon) -> Result<BTreeSet<(Triples, Triples)>, OracleError> {
    let items: Vec<(u32, u32)> = triples_of(xi)
        .into_iter()
        .flat_map(|(c, d, m)| std::iter::repeat_n((c, d), m as usize))
        .collect();
    let n = items.len();
    if n > PARTITION_BUDGET {
        return Err(OracleError::BudgetExceeded {
            size: n as u64,
            budget: PARTITION_BUDGET as u64,
        });
    }
    let mut out = BTreeSet::new();
    for mask in 1u32..(1u32 << n) - 1 {
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (i, &it) in items.iter().enumerate() {
            if mask & (1 << i) != 0 {
                a.push(it);
            } else {
                b.push(it);
            }
        }
        if balanced(&a) && balanced(&b) {
            out.insert(unordered(collect(&a), collect(&b)));
        }
    }
    Ok(out)
}

/// Orders a pair smaller genus first, then by triples.
pub fn unordered(a: Triples, b: Triples) -> (Triples, Triples) {
    if (genus(&a), &a) <= (genus(&b), &b) {
        (a, b)
    } else {
        (b, a)
    }
}

fn balanced(items: &[(u32, u32)]) -> bool {
    let count = |k: (u32, u32)| items.iter().filter(|&&x| x == k).count();
    items.iter().all(|&(c, d)| count((c, d)) == count((d, c)))
}

fn collect(items: &[(u32, u32)]) -> Triples {
    let mut t: Triples = Vec::new();
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    for (c, d) in sorted {
        match t.last_mut() {
            Some(last) if (last.0, last.1) == (c, d) => last.2 += 1,
            _ => t.push((c, d, 1)),
        }
    }
    t
}

fn genus(t: &Triples) -> u32 {
    t.iter().map(|&(_, d, m)| d * m).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygon::{enumerate, parse};
    use crate::strata::codim_ag;

    #[test]
    fn enumerate_counts() {
        let counts: Vec<usize> = (1..=4).map(|g| brute_enumerate(g).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 3, 5, 8]);
        assert!(matches!(
            brute_enumerate(9),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn codim_examples() {
        assert_eq!(brute_codim(&parse("ss^4").unwrap()), 6);
        assert_eq!(brute_codim(&parse("nu4").unwrap()), 4);
        assert_eq!(brute_codim(&parse("ord^5").unwrap()), 0);
    }

    #[test]
    fn partition_examples() {
        assert_eq!(brute_partitions(&parse("ss^4").unwrap()).unwrap().len(), 2);
        assert!(brute_partitions(&parse("nu6").unwrap()).unwrap().is_empty());
        let ord3 = brute_partitions(&parse("ord^3").unwrap()).unwrap();
        assert_eq!(ord3.len(), 1);
        let (a, b) = ord3.iter().next().unwrap();
        assert_eq!((genus(a), genus(b)), (1, 2));
    }

    #[test]
    fn agrees_with_main_code_small_genus() {
        for g in 1..=5 {
            let main: BTreeSet<Triples> = enumerate(g).iter().map(triples_of).collect();
            assert_eq!(main, brute_enumerate(g).unwrap(), "g = {g}");
            for xi in enumerate(g) {
                assert_eq!(codim_ag(&xi), brute_codim(&xi), "{xi}");
                let parts: BTreeSet<_> = xi
                    .partitions()
                    .iter()
                    .map(|p| unordered(triples_of(&p.left), triples_of(&p.right)))
                    .collect();
                assert_eq!(parts, brute_partitions(&xi).unwrap(), "{xi}");
            }
        }
    }
}
