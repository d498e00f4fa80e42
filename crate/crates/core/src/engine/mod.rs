//! Monotone fixpoint engine deriving "xi occurs on M_g" facts.
//!
//! The universe is every symmetric polygon of genus `1..=gmax`. Each key
//! carries a [`FactState`]; rules only ever move a state up in the order
//! "occurrence condition grows, `dim_lo_some` grows, `dim_hi_all` shrinks",
//! so any schedule reaches the same least fixpoint. Proof traces are built
//! afterwards by re-evaluating every rule against the fixpoint.

mod export;
mod rules;
mod trace;

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::axioms::Axiom;
use crate::condition::{Dnf, PrimeQuery};
use crate::polygon::{enumerate, NewtonPolygon};
use crate::strata::{codim_ag, e_dim, prank_stratum_dim};

pub use export::{ExportError, FactRecord, FactTableDocument, EXPORT_VERSION};
pub use rules::RuleKind;
pub use trace::{Blocker, CheckOutcome, Derivation, FactRef, PartitionCheck, Provenance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("({g}, {polygon}) is outside the computed universe (gmax = {gmax})")]
    KeyOutOfUniverse { g: u32, polygon: String, gmax: u32 },
}

/// What is known about one stratum `M_g[xi]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactState {
    /// Primes for which `xi` is known to occur; empty means unknown.
    pub occurs: Dnf,
    /// Lower bound on the dimension of some component (valid when `xi` occurs).
    pub dim_lo_some: Option<u32>,
    /// Upper bound on the dimension of every component (valid if non-empty).
    pub dim_hi_all: u32,
    /// `M^ct_g[xi]` known to be empty.
    pub empty_ct: bool,
}

impl FactState {
    fn initial(xi: &NewtonPolygon) -> Self {
        let g = xi.genus();
        let dim_hi_all = match prank_stratum_dim(g, xi.p_rank()) {
            Ok(d) => d,
            Err(_) => u32::from(xi.is_ordinary()),
        };
        FactState {
            occurs: Dnf::never(),
            dim_lo_some: None,
            dim_hi_all,
            empty_ct: false,
        }
    }

    pub fn occurs(&self) -> bool {
        !self.occurs.is_false()
    }

    /// Joins `update` into `self`; returns whether anything changed.
    fn absorb(&mut self, update: &Update) -> bool {
        let mut changed = false;
        if let Some(cond) = &update.occurs {
            let joined = self.occurs.or(cond);
            if joined != self.occurs {
                self.occurs = joined;
                changed = true;
            }
        }
        if let Some(lo) = update.dim_lo {
            if self.dim_lo_some.is_none_or(|cur| lo > cur) {
                self.dim_lo_some = Some(lo);
                changed = true;
            }
        }
        if let Some(hi) = update.dim_hi {
            if hi < self.dim_hi_all {
                self.dim_hi_all = hi;
                changed = true;
            }
        }
        changed
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct Update {
    pub occurs: Option<Dnf>,
    pub dim_lo: Option<u32>,
    pub dim_hi: Option<u32>,
}

/// Static data about the keys: polygons, metrics, and partitions as index pairs.
#[derive(Debug, Clone)]
pub(crate) struct Universe {
    pub gmax: u32,
    pub keys: Vec<NewtonPolygon>,
    pub index: HashMap<NewtonPolygon, usize>,
    pub partitions: Vec<Vec<(usize, usize)>>,
    pub codim: Vec<u32>,
    pub e: Vec<u32>,
}

impl Universe {
    fn new(gmax: u32) -> Self {
        let keys: Vec<NewtonPolygon> = (1..=gmax).flat_map(enumerate).collect();
        let index: HashMap<_, _> = keys
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, k)| (k, i))
            .collect();
        let partitions = keys
            .iter()
            .map(|k| {
                k.partitions()
                    .into_iter()
                    .map(|p| (index[&p.left], index[&p.right]))
                    .collect()
            })
            .collect();
        let codim = keys.iter().map(codim_ag).collect();
        let e = keys.iter().map(e_dim).collect();
        Universe {
            gmax,
            keys,
            index,
            partitions,
            codim,
            e,
        }
    }
}

/// Quantities derived from a table snapshot: `nonempty_ct` conditions and
/// `td_max` (the largest possible dimension of the Torelli image of
/// `M^ct_g[xi]`; `None` is minus infinity).
#[derive(Debug, Clone)]
pub(crate) struct View {
    pub nonempty_ct: Vec<Dnf>,
    pub td_max: Vec<Option<u32>>,
}

impl View {
    fn compute(universe: &Universe, states: &[FactState]) -> Self {
        let n = universe.keys.len();
        let mut nonempty_ct: Vec<Dnf> = Vec::with_capacity(n);
        let mut td_max: Vec<Option<u32>> = Vec::with_capacity(n);
        // Keys are sorted by genus and partitions point at smaller genera.
        for (i, state) in states.iter().enumerate().take(n) {
            let mut ne = if state.empty_ct {
                Dnf::never()
            } else {
                state.occurs.clone()
            };
            let mut td = if state.empty_ct {
                None
            } else {
                Some(state.dim_hi_all)
            };
            if !state.empty_ct {
                for &(l, r) in &universe.partitions[i] {
                    ne = ne.or(&nonempty_ct[l].and(&nonempty_ct[r]));
                    let boundary = match (td_max[l], td_max[r]) {
                        (Some(a), Some(b)) => Some(a + b),
                        _ => None,
                    };
                    td = td.max(boundary);
                }
            }
            nonempty_ct.push(ne);
            td_max.push(td);
        }
        View {
            nonempty_ct,
            td_max,
        }
    }
}

/// How rules are scheduled. Every schedule yields the same table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    /// Jacobi rounds: all rules read the previous round's table, updates
    /// are joined at the end of the round. `jobs > 1` evaluates keys on a
    /// thread pool.
    Rounds { order: Vec<RuleKind>, jobs: usize },
    /// Gauss-Seidel sweeps applying each update immediately.
    Sequential {
        order: Vec<RuleKind>,
        reverse_keys: bool,
    },
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::Rounds {
            order: RuleKind::ALL.to_vec(),
            jobs: 1,
        }
    }
}

/// The engine's inputs besides the schedule.
#[derive(Debug, Clone)]
pub struct Context<'a> {
    pub query: PrimeQuery,
    pub axioms: &'a [Axiom],
}

/// Result of a closure run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactTable {
    pub gmax: u32,
    pub query: PrimeQuery,
    pub axioms: Vec<String>,
    pub(crate) keys: Vec<NewtonPolygon>,
    pub(crate) states: Vec<FactState>,
    pub(crate) provenance: Vec<Provenance>,
}

/// One row of a [`FactTable`].
#[derive(Debug, Clone, Copy)]
pub struct Fact<'a> {
    pub polygon: &'a NewtonPolygon,
    pub state: &'a FactState,
    pub provenance: &'a Provenance,
}

impl Fact<'_> {
    pub fn g(&self) -> u32 {
        self.polygon.genus()
    }

    pub fn occurs(&self) -> bool {
        self.state.occurs()
    }

    pub fn status_label(&self) -> &'static str {
        if self.occurs() {
            "yes"
        } else {
            "unknown"
        }
    }
}

/// Least fixpoint of all rules for genus `1..=gmax`, default schedule.
pub fn closure(gmax: u32, query: PrimeQuery, axioms: &[Axiom]) -> FactTable {
    closure_with(gmax, &Context { query, axioms }, &Schedule::default())
}

pub fn closure_with(gmax: u32, ctx: &Context<'_>, schedule: &Schedule) -> FactTable {
    assert!(gmax >= 1, "gmax must be positive");
    let universe = Universe::new(gmax);
    let mut states: Vec<FactState> = universe.keys.iter().map(FactState::initial).collect();
    let rules = rules::Rules::new(&universe, ctx);

    match schedule {
        Schedule::Rounds { order, jobs } => {
            let pool = (*jobs > 1).then(|| {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(*jobs)
                    .build()
                    .expect("thread pool")
            });
            loop {
                let view = View::compute(&universe, &states);
                let eval = |i: usize| -> Vec<(usize, Update)> {
                    order
                        .iter()
                        .filter_map(|&rule| rules.update(rule, i, &states, &view).map(|u| (i, u)))
                        .collect()
                };
                let updates: Vec<(usize, Update)> = match &pool {
                    Some(pool) => pool.install(|| {
                        (0..states.len())
                            .into_par_iter()
                            .flat_map_iter(eval)
                            .collect()
                    }),
                    None => (0..states.len()).flat_map(eval).collect(),
                };
                let mut changed = false;
                for (i, u) in &updates {
                    changed |= states[*i].absorb(u);
                }
                if !changed {
                    break;
                }
            }
        }
        Schedule::Sequential {
            order,
            reverse_keys,
        } => {
            let mut idx: Vec<usize> = (0..states.len()).collect();
            if *reverse_keys {
                idx.reverse();
            }
            let mut view = View::compute(&universe, &states);
            loop {
                let mut changed = false;
                for &i in &idx {
                    for &rule in order {
                        if let Some(u) = rules.update(rule, i, &states, &view) {
                            if states[i].absorb(&u) {
                                changed = true;
                                view = View::compute(&universe, &states);
                            }
                        }
                    }
                }
                if !changed {
                    break;
                }
            }
        }
    }

    let view = View::compute(&universe, &states);
    let provenance = (0..states.len())
        .map(|i| rules.explain(i, &states, &view))
        .collect();
    FactTable {
        gmax,
        query: ctx.query,
        axioms: ctx.axioms.iter().map(|a| a.id.clone()).collect(),
        keys: universe.keys,
        states,
        provenance,
    }
}

impl FactTable {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn facts(&self) -> impl Iterator<Item = Fact<'_>> {
        (0..self.keys.len()).map(move |i| self.fact_at(i))
    }

    pub fn facts_of_genus(&self, g: u32) -> impl Iterator<Item = Fact<'_>> {
        self.facts().filter(move |f| f.g() == g)
    }

    fn fact_at(&self, i: usize) -> Fact<'_> {
        Fact {
            polygon: &self.keys[i],
            state: &self.states[i],
            provenance: &self.provenance[i],
        }
    }

    fn position(&self, polygon: &NewtonPolygon) -> Result<usize, EngineError> {
        self.keys
            .binary_search(polygon)
            .map_err(|_| EngineError::KeyOutOfUniverse {
                g: polygon.genus(),
                polygon: polygon.format(),
                gmax: self.gmax,
            })
    }

    pub fn get(&self, polygon: &NewtonPolygon) -> Result<Fact<'_>, EngineError> {
        self.position(polygon).map(|i| self.fact_at(i))
    }

    /// Human-readable trace: the fact with its derivations and blockers,
    /// followed by every fact its occurrence derivations rest on.
    pub fn trace_render(&self, polygon: &NewtonPolygon) -> Result<String, EngineError> {
        let root = self.position(polygon)?;
        let mut out = String::new();
        let mut queue = std::collections::VecDeque::from([root]);
        let mut seen = std::collections::BTreeSet::from([root]);
        while let Some(i) = queue.pop_front() {
            let fact = self.fact_at(i);
            if i != root {
                out.push('\n');
            }
            let _ = writeln!(out, "{}", self.headline(fact));
            fact.provenance.render_into(&mut out, "  ");
            for d in &fact.provenance.derivations {
                for r in d.premises() {
                    if let Ok(j) = self.position(&r.polygon) {
                        if seen.insert(j) {
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn headline(&self, fact: Fact<'_>) -> String {
        let s = fact.state;
        let status = if fact.occurs() {
            format!("occurs [{}]", s.occurs)
        } else {
            "unknown".to_string()
        };
        let lo = s.dim_lo_some.map_or("-".to_string(), |v| v.to_string());
        format!(
            "(g={}) {}: {status}; dim_lo_some {lo}; dim_hi_all {}",
            fact.g(),
            fact.polygon,
            s.dim_hi_all
        )
    }

    /// Ids of all axioms cited anywhere in the table.
    pub fn cited_axioms(&self) -> std::collections::BTreeSet<String> {
        self.provenance
            .iter()
            .flat_map(|p| p.derivations.iter())
            .flat_map(|d| d.axiom_ids().into_iter().map(str::to_string))
            .collect()
    }
}
