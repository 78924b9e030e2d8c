#![allow(dead_code)]

use cnfbox_core::spec::{parse_length_spec, parse_prop_spec};
use cnfbox_core::{Atom, Clause, Formula, GenParams, Literal, Method};
use proptest::prelude::*;

pub fn params(depth: usize, vars: u32, boxes: u32, clauses: usize, c: &str, p: &str) -> GenParams {
    GenParams {
        depth,
        boxes,
        clauses,
        vars,
        lengths: parse_length_spec(c).unwrap(),
        props: parse_prop_spec(p).unwrap(),
        method: Method::New,
        seed: 0,
    }
}

/// Atoms over `A1..A<vars>` and box indices `1..=boxes`.
pub fn atom_in(depth: u32, vars: u32, boxes: u32) -> BoxedStrategy<Atom> {
    let prop = (1..=vars).prop_map(Atom::Prop);
    if depth == 0 {
        prop.boxed()
    } else {
        prop_oneof![prop, (1..=boxes, clause_in(depth - 1, vars, boxes)).prop_map(|(r, c)| Atom::boxed(r, c))].boxed()
    }
}

pub fn atom(depth: u32) -> BoxedStrategy<Atom> {
    atom_in(depth, 3, 2)
}

/// Raw literal lists over pairwise distinct atoms, in arbitrary order.
pub fn raw_literals(depth: u32) -> BoxedStrategy<Vec<Literal>> {
    raw_literals_in(depth, 3, 2)
}

pub fn raw_literals_in(depth: u32, vars: u32, boxes: u32) -> BoxedStrategy<Vec<Literal>> {
    prop::collection::vec((atom_in(depth, vars, boxes), any::<bool>()), 1..4)
        .prop_map(|lits| {
            let mut out: Vec<Literal> = Vec::new();
            for (atom, negated) in lits {
                if !out.iter().any(|l| l.atom == atom) {
                    out.push(Literal { atom, negated });
                }
            }
            out
        })
        .boxed()
}

pub fn clause(depth: u32) -> BoxedStrategy<Clause> {
    clause_in(depth, 3, 2)
}

pub fn clause_in(depth: u32, vars: u32, boxes: u32) -> BoxedStrategy<Clause> {
    raw_literals_in(depth, vars, boxes).prop_map(|l| Clause::new(l).unwrap()).boxed()
}

pub fn formula(depth: u32, max_len: usize) -> BoxedStrategy<Formula> {
    formula_in(depth, max_len, 3, 2)
}

pub fn formula_in(depth: u32, max_len: usize, vars: u32, boxes: u32) -> BoxedStrategy<Formula> {
    prop::collection::btree_set(clause_in(depth, vars, boxes), 1..=max_len)
        .prop_map(|set| Formula::new(set.into_iter().collect()).unwrap())
        .boxed()
}
