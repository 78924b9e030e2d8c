//! Brute-force search over small tree Kripke models.
//!
//! Worlds of height `h` are built bottom-up: a valuation plus, for each box
//! index, a set of at most `B_r` successor worlds of height `h - 1`, where
//! `B_r` counts the distinct `□r` atoms. A world is identified by the set of
//! closure clauses true at it, so worlds agreeing on every clause collapse.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::time::{Duration, Instant};

use crate::error::DecideError;
use crate::formula::{Atom, Clause, Formula};

/// Largest number of candidate worlds built at one height.
pub const DEFAULT_WORLD_LIMIT: u128 = 2_000_000;

const MAX_VARS: u32 = 3;
const MAX_DEPTH: usize = 2;

type Signature = u128;

struct Closure {
    clauses: Vec<Clause>,
    index: BTreeMap<Clause, usize>,
}

impl Closure {
    fn add(&mut self, c: &Clause) {
        if self.index.contains_key(c) {
            return;
        }
        self.index.insert(c.clone(), self.clauses.len());
        self.clauses.push(c.clone());
        for l in c.literals() {
            if let Atom::Box(_, body) = &l.atom {
                self.add(body);
            }
        }
    }
}

fn subsets_up_to(items: &[Signature], max: usize) -> Vec<Vec<Signature>> {
    let mut out = vec![Vec::new()];
    for &s in items {
        let extended: Vec<Vec<Signature>> = out
            .iter()
            .filter(|set| set.len() < max)
            .map(|set| {
                let mut set = set.clone();
                set.push(s);
                set
            })
            .collect();
        out.extend(extended);
    }
    out
}

fn binomial_sum(n: usize, max: usize) -> u128 {
    let mut term: u128 = 1;
    let mut total: u128 = 1;
    for k in 1..=max.min(n) {
        term = term.saturating_mul((n - k + 1) as u128) / k as u128;
        total = total.saturating_add(term);
    }
    total
}

/// Satisfiability of `phi` by exhaustive tree-model search.
///
/// Only for `N <= 3` and depth `<= 2`, and only while the number of candidate
/// worlds per height stays within [`DEFAULT_WORLD_LIMIT`].
pub fn bounded_model_oracle(phi: &Formula, timeout: Option<Duration>) -> Result<bool, DecideError> {
    let vars = phi.max_prop_index();
    let depth = phi.depth();
    if vars > MAX_VARS || depth > MAX_DEPTH {
        return Err(DecideError::Guard(format!("N={vars}, d={depth} (limits N<={MAX_VARS}, d<={MAX_DEPTH})")));
    }
    let deadline = timeout.map(|t| Instant::now() + t);
    let mut closure = Closure { clauses: Vec::new(), index: BTreeMap::new() };
    for c in phi.clauses() {
        closure.add(c);
    }
    if closure.clauses.len() > Signature::BITS as usize {
        return Err(DecideError::Guard(format!("{} subformula clauses", closure.clauses.len())));
    }
    let mut bounds: BTreeMap<u32, BTreeSet<&Clause>> = BTreeMap::new();
    for c in &closure.clauses {
        for l in c.literals() {
            if let Atom::Box(r, body) = &l.atom {
                bounds.entry(*r).or_default().insert(body);
            }
        }
    }
    let indices: Vec<(u32, usize)> = bounds.iter().map(|(&r, s)| (r, s.len())).collect();

    // literals compiled to bit tests: (is_prop, index or box slot, bit, negated)
    let compiled: Vec<Vec<(bool, usize, Signature, bool)>> = closure
        .clauses
        .iter()
        .map(|c| {
            c.literals()
                .iter()
                .map(|l| match &l.atom {
                    Atom::Prop(p) => (true, 0, 1 << (p - 1), l.negated),
                    Atom::Box(r, body) => {
                        let k = indices.iter().position(|(s, _)| s == r).expect("indexed box");
                        (false, k, 1u128 << closure.index[&**body], l.negated)
                    }
                })
                .collect()
        })
        .collect();
    // `succ[k]` is the intersection of the successor signatures for box slot k
    let signature = |valuation: u32, succ: &[Signature]| -> Signature {
        let mut sig: Signature = 0;
        for (i, lits) in compiled.iter().enumerate() {
            let holds = lits.iter().any(|&(is_prop, k, bit, negated)| {
                let v = if is_prop { valuation as Signature & bit != 0 } else { succ[k] & bit != 0 };
                v != negated
            });
            if holds {
                sig |= 1 << i;
            }
        }
        sig
    };

    let valuations = 1u32 << vars;
    let none: Vec<Signature> = vec![Signature::MAX; indices.len()];
    let mut worlds: HashSet<Signature> = (0..valuations).map(|v| signature(v, &none)).collect();
    for _ in 0..depth {
        let below: Vec<Signature> = {
            let mut v: Vec<Signature> = worlds.iter().copied().collect();
            v.sort_unstable();
            v
        };
        let estimate = indices
            .iter()
            .fold(valuations as u128, |acc, &(_, b)| acc.saturating_mul(binomial_sum(below.len(), b)));
        if estimate > DEFAULT_WORLD_LIMIT {
            return Err(DecideError::Guard(format!("about {estimate} candidate worlds")));
        }
        let options: Vec<Vec<Signature>> = indices
            .iter()
            .map(|&(_, b)| {
                let mut meets: Vec<Signature> =
                    subsets_up_to(&below, b).iter().map(|set| set.iter().fold(Signature::MAX, |a, s| a & s)).collect();
                meets.sort_unstable();
                meets.dedup();
                meets
            })
            .collect();
        let mut next = HashSet::new();
        let mut choice = vec![0usize; options.len()];
        loop {
            if deadline.is_some_and(|d| Instant::now() >= d) {
                return Err(DecideError::Timeout);
            }
            let succ: Vec<Signature> = choice.iter().zip(&options).map(|(&i, o)| o[i]).collect();
            for v in 0..valuations {
                next.insert(signature(v, &succ));
            }
            // odometer over the per-index choices
            let mut k = 0;
            while k < choice.len() {
                choice[k] += 1;
                if choice[k] < options[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
        worlds = next;
    }
    let top: Signature = phi.clauses().iter().map(|c| 1u128 << closure.index[c]).fold(0, |a, b| a | b);
    Ok(worlds.iter().any(|&s| s & top == top))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn oracle(s: &str) -> bool {
        bounded_model_oracle(&parse_formula(s).unwrap(), None).unwrap()
    }

    #[test]
    fn examples() {
        assert!(oracle("(and (or A1 (box 1 (or A2))))"));
        assert!(!oracle("(and (or (box 1 (or A1))) (or (not (box 1 (or A1)))))"));
        assert!(oracle("(and (or (box 1 (or A1))) (or (not (box 1 (or A2)))))"));
        assert!(!oracle("(and (or (box 1 (or A1))) (or (box 1 (or (not A1)))) (or (not (box 1 (or A2)))))"));
        assert!(!oracle("(and (or A1 A2) (or (not A1)) (or (not A2)))"));
        assert!(oracle("(and (or (not (box 1 (or A1)))) (or (not (box 1 (or (not A1))))))"));
    }

    #[test]
    fn guard() {
        let phi = parse_formula("(and (or A4))").unwrap();
        assert!(matches!(bounded_model_oracle(&phi, None), Err(DecideError::Guard(_))));
    }

    #[test]
    fn subsets() {
        assert_eq!(subsets_up_to(&[1, 2, 3], 2).len(), 7);
        assert_eq!(binomial_sum(3, 2), 7);
        assert_eq!(binomial_sum(5, 9), 32);
    }
}
