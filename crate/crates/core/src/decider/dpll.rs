//! Plain DPLL with unit propagation that enumerates satisfying cubes.

use std::ops::ControlFlow;
use std::time::Instant;

use crate::error::DecideError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PLit {
    pub var: usize,
    pub negated: bool,
}

impl PLit {
    pub fn new(var: usize, negated: bool) -> Self {
        PLit { var, negated }
    }

    fn value(self, assign: &[Option<bool>]) -> Option<bool> {
        assign[self.var].map(|v| v != self.negated)
    }
}

pub type PClause = Vec<PLit>;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub branches: u64,
    pub successor_checks: u64,
}

/// Cube enumerator over `vars` variables.
///
/// Each reported partial assignment satisfies every clause, distinct cubes are
/// disjoint and together they cover every model.
pub struct Dpll<'a> {
    vars: usize,
    clauses: &'a [PClause],
    deadline: Option<Instant>,
    pub stats: SearchStats,
}

impl<'a> Dpll<'a> {
    pub fn new(vars: usize, clauses: &'a [PClause]) -> Self {
        Dpll { vars, clauses, deadline: None, stats: SearchStats::default() }
    }

    pub fn deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    pub fn for_each_cube<F>(&mut self, mut f: F) -> Result<ControlFlow<()>, DecideError>
    where
        F: FnMut(&[Option<bool>]) -> Result<ControlFlow<()>, DecideError>,
    {
        let mut assign = vec![None; self.vars];
        self.search(&mut assign, &mut f)
    }

    pub fn is_satisfiable(&mut self) -> Result<bool, DecideError> {
        let flow = self.for_each_cube(|_| Ok(ControlFlow::Break(())))?;
        Ok(flow.is_break())
    }

    /// Returns `None` on conflict, else whether every clause is satisfied.
    fn propagate(&self, assign: &mut [Option<bool>], trail: &mut Vec<usize>) -> Option<bool> {
        loop {
            let mut changed = false;
            let mut all_sat = true;
            for c in self.clauses {
                let mut open = None;
                let mut n_open = 0;
                let mut sat = false;
                for &l in c {
                    match l.value(assign) {
                        Some(true) => {
                            sat = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            n_open += 1;
                            open = Some(l);
                        }
                    }
                }
                if sat {
                    continue;
                }
                all_sat = false;
                match (n_open, open) {
                    (0, _) => return None,
                    (1, Some(l)) => {
                        assign[l.var] = Some(!l.negated);
                        trail.push(l.var);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Some(all_sat);
            }
        }
    }

    fn branch_var(&self, assign: &[Option<bool>]) -> usize {
        for c in self.clauses {
            if c.iter().any(|l| l.value(assign) == Some(true)) {
                continue;
            }
            if let Some(l) = c.iter().find(|l| assign[l.var].is_none()) {
                return l.var;
            }
        }
        unreachable!("unsatisfied clause without open literal after propagation")
    }

    fn search<F>(&mut self, assign: &mut Vec<Option<bool>>, f: &mut F) -> Result<ControlFlow<()>, DecideError>
    where
        F: FnMut(&[Option<bool>]) -> Result<ControlFlow<()>, DecideError>,
    {
        let mut trail = Vec::new();
        let outcome = match self.propagate(assign, &mut trail) {
            None => Ok(ControlFlow::Continue(())),
            Some(true) => f(assign),
            Some(false) => {
                let v = self.branch_var(assign);
                let mut flow = Ok(ControlFlow::Continue(()));
                for value in [true, false] {
                    if self.deadline.is_some_and(|d| Instant::now() >= d) {
                        flow = Err(DecideError::Timeout);
                        break;
                    }
                    self.stats.branches += 1;
                    assign[v] = Some(value);
                    flow = self.search(assign, f);
                    assign[v] = None;
                    if !matches!(flow, Ok(ControlFlow::Continue(()))) {
                        break;
                    }
                }
                flow
            }
        };
        for v in trail {
            assign[v] = None;
        }
        outcome
    }
}

pub fn dpll_sat(vars: usize, clauses: &[PClause]) -> bool {
    Dpll::new(vars, clauses).is_satisfiable().expect("no deadline")
}

/// Calls `f` once for every total satisfying assignment.
pub fn for_each_model(vars: usize, clauses: &[PClause], mut f: impl FnMut(&[bool])) {
    let _ = Dpll::new(vars, clauses).for_each_cube(|cube| {
        let free: Vec<usize> = (0..vars).filter(|&v| cube[v].is_none()).collect();
        let mut total: Vec<bool> = cube.iter().map(|v| v.unwrap_or(false)).collect();
        for bits in 0..1u64 << free.len() {
            for (i, &v) in free.iter().enumerate() {
                total[v] = bits >> i & 1 == 1;
            }
            f(&total);
        }
        Ok(ControlFlow::Continue(()))
    });
}
