//! Satisfiability in K(m) and the two triviality tests.
//!
//! The decider enumerates cubes of the propositional abstraction, in which
//! every outermost atom (propositional or boxed) is an independent variable.
//! A cube is accepted when, for every box atom `□r Ci` it sets false, the
//! clauses `{Cj : □r Cj set true}` together with the negation of `Ci` are
//! satisfiable one level down.

mod dpll;
mod kripke;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

pub use dpll::{dpll_sat, for_each_model, Dpll, PClause, PLit, SearchStats};
pub use kripke::{bounded_model_oracle, DEFAULT_WORLD_LIMIT};

use crate::error::DecideError;
use crate::formula::{Atom, Clause, Formula, Literal};

/// Outermost atoms of a clause set numbered as propositional variables.
#[derive(Debug, Clone, Default)]
pub struct AbstractionMap {
    atoms: Vec<Atom>,
    index: BTreeMap<Atom, usize>,
}

impl AbstractionMap {
    pub fn build<'c>(clauses: impl IntoIterator<Item = &'c Clause>) -> (Self, Vec<PClause>) {
        let mut map = AbstractionMap::default();
        let cnf = clauses
            .into_iter()
            .map(|c| c.literals().iter().map(|l| PLit::new(map.intern(&l.atom), l.negated)).collect())
            .collect();
        (map, cnf)
    }

    fn intern(&mut self, atom: &Atom) -> usize {
        if let Some(&i) = self.index.get(atom) {
            return i;
        }
        self.atoms.push(atom.clone());
        self.index.insert(atom.clone(), self.atoms.len() - 1);
        self.atoms.len() - 1
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom(&self, var: usize) -> &Atom {
        &self.atoms[var]
    }

    pub fn var(&self, atom: &Atom) -> Option<usize> {
        self.index.get(atom).copied()
    }
}

fn abstraction_sat(clauses: &[Clause]) -> bool {
    let (map, cnf) = AbstractionMap::build(clauses);
    dpll_sat(map.len(), &cnf)
}

fn top_sat(clauses: &[Clause]) -> bool {
    let kept: Vec<Vec<Literal>> = clauses
        .iter()
        .filter(|c| !c.literals().iter().any(|l| !l.atom.is_prop() && !l.negated))
        .map(|c| c.literals().iter().filter(|l| l.atom.is_prop()).cloned().collect())
        .collect();
    if kept.iter().any(Vec::is_empty) {
        return false;
    }
    let mut map = AbstractionMap::default();
    let cnf: Vec<PClause> =
        kept.iter().map(|c| c.iter().map(|l| PLit::new(map.intern(&l.atom), l.negated)).collect()).collect();
    dpll_sat(map.len(), &cnf)
}

/// No propositional valuation of the abstraction exists.
pub fn is_trivially_unsatisfiable(phi: &Formula) -> bool {
    !abstraction_sat(phi.clauses())
}

/// Satisfiable at a world without successors, where every `□C` is true.
pub fn is_trivially_satisfiable(phi: &Formula) -> bool {
    top_sat(phi.clauses())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Sat,
    Unsat,
    Timeout,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Sat => "sat",
            Status::Unsat => "unsat",
            Status::Timeout => "timeout",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionOutcome {
    pub status: Status,
    pub trivially_sat: bool,
    pub trivially_unsat: bool,
    pub elapsed: Duration,
    pub stats: SearchStats,
}

struct Search {
    deadline: Option<Instant>,
    stats: SearchStats,
}

impl Search {
    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn satisfiable(&mut self, clauses: &[Clause]) -> Result<bool, DecideError> {
        let (map, cnf) = AbstractionMap::build(clauses);
        let mut dpll = Dpll::new(map.len(), &cnf).deadline(self.deadline);
        let flow = dpll.for_each_cube(|cube| {
            if self.cube_consistent(&map, cube)? {
                Ok(ControlFlow::Break(()))
            } else {
                Ok(ControlFlow::Continue(()))
            }
        });
        self.stats.branches += dpll.stats.branches;
        Ok(flow?.is_break())
    }

    fn cube_consistent(&mut self, map: &AbstractionMap, cube: &[Option<bool>]) -> Result<bool, DecideError> {
        let mut required: BTreeMap<u32, Vec<&Clause>> = BTreeMap::new();
        let mut refuted: Vec<(u32, &Clause)> = Vec::new();
        for (v, value) in cube.iter().enumerate() {
            if let (Atom::Box(r, body), Some(value)) = (map.atom(v), value) {
                if *value {
                    required.entry(*r).or_default().push(body);
                } else {
                    refuted.push((*r, body));
                }
            }
        }
        for (r, body) in refuted {
            if self.expired() {
                return Err(DecideError::Timeout);
            }
            self.stats.successor_checks += 1;
            let mut succ: BTreeSet<Clause> =
                required.get(&r).into_iter().flatten().map(|c| (*c).clone()).collect();
            succ.extend(body.literals().iter().map(|l| Clause::unit(l.negate())));
            let succ: Vec<Clause> = succ.into_iter().collect();
            if !self.satisfiable(&succ)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Decides `phi` in K(m). The triviality flags are computed first, so they
/// are reported even when the search runs out of time.
pub fn k_satisfiable(phi: &Formula, timeout: Option<Duration>) -> DecisionOutcome {
    let start = Instant::now();
    let trivially_unsat = is_trivially_unsatisfiable(phi);
    let trivially_sat = !trivially_unsat && is_trivially_satisfiable(phi);
    let mut search = Search { deadline: timeout.map(|t| start + t), stats: SearchStats::default() };
    let status = if trivially_unsat {
        Status::Unsat
    } else if trivially_sat {
        Status::Sat
    } else {
        match search.satisfiable(phi.clauses()) {
            Ok(true) => Status::Sat,
            Ok(false) => Status::Unsat,
            Err(_) => Status::Timeout,
        }
    };
    DecisionOutcome { status, trivially_sat, trivially_unsat, elapsed: start.elapsed(), stats: search.stats }
}
