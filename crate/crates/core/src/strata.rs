//! Dimension arithmetic for Newton polygon strata of `A_g` and `M_g`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polygon::NewtonPolygon;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error("p-rank stratum dimension needs g >= 2 and 0 <= f <= g (got g={g}, f={f})")]
    OutOfRange { g: u32, f: u32 },
}

/// Dimension of `A_g`, `g(g+1)/2`.
pub fn dim_ag(g: u32) -> u32 {
    g * (g + 1) / 2
}

/// Dimension of `M_g` (of `M_{1,1}` when `g = 1`).
pub fn dim_mg(g: u32) -> u32 {
    if g == 1 {
        1
    } else {
        3 * g - 3
    }
}

/// Codimension of `A_g[xi]` in `A_g`: the lattice points `(x, y)` with
/// `1 <= x <= g` and `0 <= y < xi(x)`.
pub fn codim_ag(xi: &NewtonPolygon) -> u32 {
    (1..=xi.genus()).map(|x| xi.ceil_height_at(x) as u32).sum()
}

/// Expected dimension `max(0, 3g-3-codim)`, with `e(ord, M_{1,1}) = 1`.
pub fn e_dim(xi: &NewtonPolygon) -> u32 {
    let g = xi.genus();
    if g == 1 && xi.is_ordinary() {
        return 1;
    }
    (3 * g - 3).saturating_sub(codim_ag(xi))
}

/// Dimension of every component of the p-rank `f` locus `M_g^f`, `2g-3+f`.
pub fn prank_stratum_dim(g: u32, f: u32) -> Result<u32, StrataError> {
    if g < 2 || f > g {
        return Err(StrataError::OutOfRange { g, f });
    }
    Ok(2 * g - 3 + f)
}

/// Checks `dim A_g - codim A_g[sigma_g] = floor(g^2/4)`.
pub fn supersingular_dim_identity(g: u32) -> bool {
    dim_ag(g) - codim_ag(&NewtonPolygon::supersingular(g)) == g * g / 4
}

/// Whether `e(xi1) + e(xi2) < e(xi1 + xi2)`.
pub fn e_inequality(xi1: &NewtonPolygon, xi2: &NewtonPolygon) -> bool {
    e_dim(xi1) + e_dim(xi2) < e_dim(&xi1.direct_sum(xi2))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumMetrics {
    pub genus: u32,
    pub codim_ag: u32,
    pub e_dim: u32,
    pub p_rank: u32,
    /// `None` for `g = 1`, where `M_{1,1}` is handled by special cases.
    pub prank_stratum_dim: Option<u32>,
}

impl StratumMetrics {
    pub fn of(xi: &NewtonPolygon) -> Self {
        let g = xi.genus();
        let f = xi.p_rank();
        StratumMetrics {
            genus: g,
            codim_ag: codim_ag(xi),
            e_dim: e_dim(xi),
            p_rank: f,
            prank_stratum_dim: prank_stratum_dim(g, f).ok(),
        }
    }
}
