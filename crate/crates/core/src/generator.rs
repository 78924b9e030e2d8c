//! Shape-first random CNF□m generation.
//!
//! Each clause first draws its shape (length `K`, then propositional count
//! `P`), then instantiates `P` propositional literals followed by `K - P`
//! modal literals, sign before atom. An instantiation with a repeated atom is
//! thrown away and the same shape instantiated again; a top-level clause equal
//! to an earlier one is redrawn from scratch, shape included.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::GenError;
use crate::formula::{Atom, Clause, Formula, Literal};
use crate::params::GenParams;
use crate::rng::RandomStream;
use crate::spec::{LengthSpec, PropRateSpec};

pub const DEFAULT_REJECTION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClauseShape {
    pub length: usize,
    pub props: usize,
}

/// A drawn shape and where it was drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeRecord {
    pub nesting: usize,
    pub shape: ClauseShape,
}

/// Clause length for `nesting`, one weighted draw.
pub fn rnd_length(nesting: usize, lengths: &LengthSpec, rng: &mut RandomStream) -> usize {
    rng.weighted_index(lengths.at_depth(nesting)) + 1
}

/// Propositional count for a clause of length `k`; all of them at remaining depth 0.
pub fn rnd_propnum(
    remaining: usize,
    nesting: usize,
    k: usize,
    props: &PropRateSpec,
    rng: &mut RandomStream,
) -> usize {
    if remaining == 0 {
        return k;
    }
    let w = props
        .weights(nesting, k)
        .unwrap_or_else(|| panic!("no propositional-count weights for depth {nesting}, length {k}"));
    rng.weighted_index(w)
}

pub struct Generator<'a> {
    params: &'a GenParams,
    rng: RandomStream,
    cap: u64,
    trace: Option<Vec<ShapeRecord>>,
}

impl<'a> Generator<'a> {
    /// Generator seeded from `params.seed`. Parameters are assumed valid.
    pub fn new(params: &'a GenParams) -> Self {
        Self::with_seed(params, params.seed)
    }

    pub fn with_seed(params: &'a GenParams, seed: u64) -> Self {
        Generator { params, rng: RandomStream::new(seed), cap: DEFAULT_REJECTION_CAP, trace: None }
    }

    pub fn rejection_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    /// Records every drawn shape, including those of rejected instantiations' subclauses.
    pub fn trace_shapes(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    pub fn take_trace(&mut self) -> Vec<ShapeRecord> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn rng(&mut self) -> &mut RandomStream {
        &mut self.rng
    }

    pub fn draw_shape(&mut self, remaining: usize, nesting: usize) -> ClauseShape {
        let length = rnd_length(nesting, &self.params.lengths, &mut self.rng);
        let props = rnd_propnum(remaining, nesting, length, &self.params.props, &mut self.rng);
        let shape = ClauseShape { length, props };
        if let Some(t) = &mut self.trace {
            t.push(ShapeRecord { nesting, shape });
        }
        shape
    }

    pub fn rnd_atom(&mut self, remaining: usize, nesting: usize) -> Result<Atom, GenError> {
        if remaining == 0 {
            Ok(Atom::Prop(1 + self.rng.uniform_below(self.params.vars as u64) as u32))
        } else {
            let r = 1 + self.rng.uniform_below(self.params.boxes as u64) as u32;
            let body = self.rnd_clause(remaining - 1, nesting + 1)?;
            Ok(Atom::boxed(r, body))
        }
    }

    pub fn rnd_clause(&mut self, remaining: usize, nesting: usize) -> Result<Clause, GenError> {
        let shape = self.draw_shape(remaining, nesting);
        self.instantiate(shape, remaining, nesting)
    }

    /// Instantiates `shape` until its atoms are pairwise distinct.
    pub fn instantiate(
        &mut self,
        shape: ClauseShape,
        remaining: usize,
        nesting: usize,
    ) -> Result<Clause, GenError> {
        let ClauseShape { length, props } = shape;
        let mut lits = Vec::with_capacity(length);
        for _ in 0..self.cap {
            lits.clear();
            for _ in 0..props {
                let negated = self.rng.negated();
                lits.push(Literal { atom: self.rnd_atom(0, nesting)?, negated });
            }
            for _ in props..length {
                let negated = self.rng.negated();
                lits.push(Literal { atom: self.rnd_atom(remaining, nesting)?, negated });
            }
            lits.sort();
            if lits.windows(2).all(|w| w[0].atom != w[1].atom) {
                return Ok(Clause::from_sorted_unchecked(std::mem::take(&mut lits)));
            }
        }
        Err(GenError::AtomRejectionCap { depth: nesting, length, props, attempts: self.cap })
    }

    pub fn generate_formula(&mut self) -> Result<Formula, GenError> {
        let gp = self.params;
        let mut seen = HashSet::with_capacity(gp.clauses);
        let mut clauses = Vec::with_capacity(gp.clauses);
        for index in 0..gp.clauses {
            let mut attempts = 0;
            loop {
                if attempts == self.cap {
                    return Err(GenError::ClauseRejectionCap { index: index + 1, attempts });
                }
                attempts += 1;
                let c = self.rnd_clause(gp.depth, 0)?;
                if seen.insert(c.clone()) {
                    clauses.push(c);
                    break;
                }
            }
        }
        Ok(Formula::new(clauses).expect("distinct non-empty clauses"))
    }
}

/// Validates `params` and generates one formula from `params.seed`.
pub fn generate_formula(params: &GenParams) -> Result<Formula, GenError> {
    params.validate()?;
    let f = Generator::new(params).generate_formula()?;
    Ok(f.with_params(Arc::new(params.clone())).expect("generated depth within bound"))
}
