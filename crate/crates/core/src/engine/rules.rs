//! The five rule families and the post-fixpoint explanation pass.

use serde::{Deserialize, Serialize};

use super::trace::{Blocker, CheckOutcome, Derivation, FactRef, PartitionCheck, Provenance};
use super::{Context, FactState, Universe, Update, View};
use crate::axioms::{Axiom, AxiomKind};
use crate::condition::{Dnf, PrimeCondition};
use crate::polygon::NewtonPolygon;
use crate::strata::prank_stratum_dim;

/// Rule families, listed in the canonical order used for traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleKind {
    Axioms,
    SmallCodim,
    Purity,
    Split,
    OortCase,
}

impl RuleKind {
    pub const ALL: [RuleKind; 5] = [
        RuleKind::Axioms,
        RuleKind::SmallCodim,
        RuleKind::Purity,
        RuleKind::Split,
        RuleKind::OortCase,
    ];
}

/// One axiom statement landing on one key.
#[derive(Debug, Clone)]
struct Injection<'a> {
    axiom: &'a Axiom,
    dims: Option<(u32, u32)>,
}

#[derive(Debug, Clone)]
struct SmallCodim<'a> {
    codim: u32,
    dim: u32,
    support: Option<&'a Axiom>,
}

#[derive(Debug, Clone)]
struct Purity<'a> {
    axiom: &'a Axiom,
    generic: Vec<NewtonPolygon>,
    prank_dim: u32,
}

/// Per-key rule data that does not depend on the table.
pub(crate) struct Rules<'a> {
    universe: &'a Universe,
    injections: Vec<Vec<Injection<'a>>>,
    small_codim: Vec<Option<SmallCodim<'a>>>,
    purity: Vec<Option<Purity<'a>>>,
    /// For `nu_d + ss`: the index of `nu_d` and of `ss`.
    oort: Vec<Option<(u32, usize, usize)>>,
    /// Unusable axioms that mention the key.
    conditional: Vec<Vec<&'a Axiom>>,
}

impl<'a> Rules<'a> {
    pub(crate) fn new(universe: &'a Universe, ctx: &Context<'a>) -> Self {
        let n = universe.keys.len();
        let mut injections: Vec<Vec<Injection<'a>>> = vec![Vec::new(); n];
        let mut conditional: Vec<Vec<&'a Axiom>> = vec![Vec::new(); n];
        let mut generic_sets: Vec<(u32, u32, &'a Axiom, Vec<NewtonPolygon>)> = Vec::new();
        let mut singleton_generic: Vec<(usize, &'a Axiom)> = Vec::new();
        let mut open_dense: Vec<(usize, &'a Axiom)> = Vec::new();

        for axiom in ctx.axioms {
            let usable = axiom.usable(ctx.query);
            for g in 1..=universe.gmax {
                let Some(inst) = axiom.instantiate(g) else {
                    continue;
                };
                let idx: Vec<usize> = inst
                    .polygons
                    .iter()
                    .filter_map(|p| universe.index.get(p).copied())
                    .collect();
                if !usable {
                    for &i in &idx {
                        conditional[i].push(axiom);
                    }
                    continue;
                }
                match axiom.kind {
                    AxiomKind::OccursSmooth => {
                        for &i in &idx {
                            injections[i].push(Injection { axiom, dims: None });
                        }
                    }
                    AxiomKind::DimExactComponents => {
                        let dims = axiom.dim_lo.zip(axiom.dim_hi);
                        for &i in &idx {
                            injections[i].push(Injection { axiom, dims });
                        }
                    }
                    AxiomKind::OpenDenseInPrankStratum => {
                        for &i in &idx {
                            let xi = &universe.keys[i];
                            let dims = prank_stratum_dim(g, xi.p_rank()).ok().map(|d| (d, d));
                            injections[i].push(Injection { axiom, dims });
                            open_dense.push((i, axiom));
                        }
                    }
                    AxiomKind::GenericNpOfPrankComponents => {
                        let Some(f) = inst.p_rank else { continue };
                        if let [only] = idx.as_slice() {
                            // A single generic polygon fills an open dense part of M_g^f.
                            let d = prank_stratum_dim(g, f).ok();
                            injections[*only].push(Injection {
                                axiom,
                                dims: d.map(|d| (d, d)),
                            });
                            singleton_generic.push((*only, axiom));
                        }
                        generic_sets.push((g, f, axiom, inst.polygons.clone()));
                    }
                }
            }
        }

        let small_codim = (0..n)
            .map(|i| {
                let xi = &universe.keys[i];
                let g = xi.genus();
                let c = universe.codim[i];
                if g < 2 || c > 4 {
                    return None;
                }
                let dim = 3 * g - 3 - c;
                let support = match c {
                    0..=2 => None,
                    3 => Some(singleton_generic.iter().find(|(j, _)| *j == i)?.1),
                    _ => Some(open_dense.iter().find(|(j, _)| *j == i)?.1),
                };
                Some(SmallCodim {
                    codim: c,
                    dim,
                    support,
                })
            })
            .collect();

        let purity = (0..n)
            .map(|i| {
                let xi = &universe.keys[i];
                let (g, f) = (xi.genus(), xi.p_rank());
                let (_, _, axiom, generic) = generic_sets
                    .iter()
                    .find(|(ag, af, _, set)| *ag == g && *af == f && !set.contains(xi))?;
                let prank_dim = prank_stratum_dim(g, f).ok()?;
                Some(Purity {
                    axiom,
                    generic: generic.clone(),
                    prank_dim,
                })
            })
            .collect();

        let ss = universe
            .index
            .get(&NewtonPolygon::supersingular(1))
            .copied();
        let oort = (0..n)
            .map(|i| {
                let xi = &universe.keys[i];
                let d = xi.genus().checked_sub(1)?;
                let nu = NewtonPolygon::nu(d).ok()?;
                if *xi != nu.direct_sum(&NewtonPolygon::supersingular(1)) {
                    return None;
                }
                Some((d, universe.index[&nu], ss?))
            })
            .collect();

        Rules {
            universe,
            injections,
            small_codim,
            purity,
            oort,
            conditional,
        }
    }

    /// The update `rule` proposes for key `i`, if its hypotheses hold.
    pub(crate) fn update(
        &self,
        rule: RuleKind,
        i: usize,
        states: &[FactState],
        view: &View,
    ) -> Option<Update> {
        match rule {
            RuleKind::Axioms => {
                let inj = &self.injections[i];
                if inj.is_empty() {
                    return None;
                }
                let mut u = Update::default();
                for j in inj {
                    let cond = Dnf::from(j.axiom.condition.clone());
                    u.occurs = Some(u.occurs.map_or(cond.clone(), |c| c.or(&cond)));
                    if let Some((lo, hi)) = j.dims {
                        u.dim_lo = u.dim_lo.max(Some(lo));
                        u.dim_hi = Some(u.dim_hi.map_or(hi, |h| h.min(hi)));
                    }
                }
                Some(u)
            }
            RuleKind::SmallCodim => {
                let s = self.small_codim[i].as_ref()?;
                Some(Update {
                    occurs: Some(small_codim_condition(s)),
                    dim_lo: Some(s.dim),
                    dim_hi: Some(s.dim),
                })
            }
            RuleKind::Purity => {
                let p = self.purity[i].as_ref()?;
                Some(Update {
                    dim_hi: Some(p.prank_dim - 1),
                    ..Update::default()
                })
            }
            RuleKind::Split => match self.split(i, view) {
                SplitOutcome::Fires { condition, e, .. } => Some(Update {
                    occurs: Some(condition),
                    dim_lo: Some(e),
                    dim_hi: None,
                }),
                _ => None,
            },
            RuleKind::OortCase => {
                let (d, base, ss) = self.oort[i]?;
                if !states[base].occurs() {
                    return None;
                }
                let condition = states[base].occurs.and(&view.nonempty_ct[ss]);
                if condition.is_false() {
                    return None;
                }
                Some(Update {
                    occurs: Some(condition),
                    dim_lo: Some(2 * d - 2),
                    dim_hi: None,
                })
            }
        }
    }

    fn split(&self, i: usize, view: &View) -> SplitOutcome {
        let parts = &self.universe.partitions[i];
        if parts.is_empty() {
            return SplitOutcome::NoPartition;
        }
        let e = self.universe.e[i];
        let keys = &self.universe.keys;
        let mut condition = Dnf::never();
        let mut witness = None;
        let mut checks = Vec::with_capacity(parts.len());
        for &(l, r) in parts {
            let both = view.nonempty_ct[l].and(&view.nonempty_ct[r]);
            if witness.is_none() && !both.is_false() {
                witness = Some((l, r));
            }
            condition = condition.or(&both);
            let (tl, tr) = (view.td_max[l], view.td_max[r]);
            let outcome = match (tl, tr) {
                (Some(a), Some(b)) if a + b < e => CheckOutcome::Holds,
                (Some(_), Some(_)) => CheckOutcome::Fails,
                _ => CheckOutcome::EmptySide,
            };
            checks.push(PartitionCheck {
                left: FactRef::from(&keys[l]),
                right: FactRef::from(&keys[r]),
                td_left: tl,
                td_right: tr,
                e,
                outcome,
            });
        }
        let failing: Vec<PartitionCheck> = checks
            .iter()
            .filter(|c| c.outcome == CheckOutcome::Fails)
            .cloned()
            .collect();
        match witness {
            None => SplitOutcome::NoNonempty {
                partitions: parts.len(),
                failing,
                e,
            },
            Some(_) if !failing.is_empty() => SplitOutcome::Inequality { failing, e },
            Some((l, r)) => SplitOutcome::Fires {
                condition,
                e,
                witness: (FactRef::from(&keys[l]), FactRef::from(&keys[r])),
                checks,
            },
        }
    }

    /// Re-evaluates every rule on the final table to record why the fact
    /// holds, or what blocks it.
    pub(crate) fn explain(&self, i: usize, states: &[FactState], view: &View) -> Provenance {
        let mut prov = Provenance::default();
        for j in &self.injections[i] {
            prov.derivations.push(Derivation::Axiom {
                id: j.axiom.id.clone(),
                kind: j.axiom.kind.to_string(),
                condition: j.axiom.condition.clone(),
                citation: j.axiom.citation.clone(),
                dims: j.dims,
                occurs: true,
            });
        }
        if let Some(s) = &self.small_codim[i] {
            prov.derivations.push(Derivation::SmallCodim {
                codim: s.codim,
                dim: s.dim,
                support: s.support.map(|a| a.id.clone()),
                condition: small_codim_condition(s),
            });
        }
        if let Some(p) = &self.purity[i] {
            prov.derivations.push(Derivation::Purity {
                axiom: p.axiom.id.clone(),
                p_rank: self.universe.keys[i].p_rank(),
                generic: p.generic.clone(),
                prank_dim: p.prank_dim,
                bound: p.prank_dim - 1,
            });
        }
        let occurs = states[i].occurs();
        match self.split(i, view) {
            SplitOutcome::Fires {
                condition,
                e,
                witness,
                checks,
            } => {
                prov.derivations.push(Derivation::Split {
                    e,
                    witness,
                    checks,
                    condition,
                });
            }
            _ if occurs => {}
            SplitOutcome::NoPartition => prov.blockers.push(Blocker::NoPartition),
            SplitOutcome::NoNonempty {
                partitions,
                failing,
                e,
            } => {
                prov.blockers
                    .push(Blocker::NoNonemptyPartition { partitions });
                if let Some(b) = inequality_blocker(failing, e) {
                    prov.blockers.push(b);
                }
            }
            SplitOutcome::Inequality { failing, e } => {
                prov.blockers.extend(inequality_blocker(failing, e));
            }
        }
        if let Some((d, base, _)) = self.oort[i] {
            match self.update(RuleKind::OortCase, i, states, view) {
                Some(u) => prov.derivations.push(Derivation::OortCase {
                    d,
                    base: FactRef::from(&self.universe.keys[base]),
                    base_bound: 2 * d - 3,
                    e: 2 * d - 2,
                    condition: u.occurs.unwrap_or_else(Dnf::never),
                }),
                None if !occurs => prov.blockers.push(Blocker::OortBaseUnknown {
                    base: FactRef::from(&self.universe.keys[base]),
                }),
                None => {}
            }
        }
        if !occurs {
            for a in &self.conditional[i] {
                let b = Blocker::ConditionalLiterature {
                    axiom: a.id.clone(),
                    condition: a.condition.clone(),
                    citation: a.citation.clone(),
                };
                if !prov.blockers.contains(&b) {
                    prov.blockers.push(b);
                }
            }
        }
        prov
    }
}

fn small_codim_condition(s: &SmallCodim<'_>) -> Dnf {
    match s.support {
        Some(a) => Dnf::from(a.condition.clone()),
        None => Dnf::from(PrimeCondition::AllPrimes),
    }
}

/// Picks the failing partition with the smallest `td` sum; the earliest in
/// canonical order wins ties.
fn inequality_blocker(failing: Vec<PartitionCheck>, e: u32) -> Option<Blocker> {
    let witness = failing.iter().min_by_key(|c| c.sum())?.clone();
    Some(Blocker::InequalityFails {
        e,
        witness,
        failing,
    })
}

enum SplitOutcome {
    NoPartition,
    NoNonempty {
        partitions: usize,
        failing: Vec<PartitionCheck>,
        e: u32,
    },
    Inequality {
        failing: Vec<PartitionCheck>,
        e: u32,
    },
    Fires {
        condition: Dnf,
        e: u32,
        witness: (FactRef, FactRef),
        checks: Vec<PartitionCheck>,
    },
}
