//! The CNF□m abstract syntax.
//!
//! A [`Formula`] is a conjunction of [`Clause`]s, a clause is a disjunction of
//! signed atoms, and an [`Atom`] is either a propositional variable `A<i>` or a
//! boxed clause `□r C`. Clauses are always held in canonical order and never
//! contain two literals over the same atom, so structural equality of clauses
//! coincides with equality "up to commutativity of disjunction".

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::FormulaError;
use crate::params::GenParams;

/// A propositional variable or a boxed clause.
///
/// The derived ordering is the canonical one: every `Prop` sorts before every
/// `Box`, props compare by index, boxes by box index and then by body.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Prop(u32),
    Box(u32, std::boxed::Box<Clause>),
}

impl Atom {
    pub fn boxed(index: u32, body: Clause) -> Self {
        Atom::Box(index, std::boxed::Box::new(body))
    }

    pub fn is_prop(&self) -> bool {
        matches!(self, Atom::Prop(_))
    }

    pub fn depth(&self) -> usize {
        match self {
            Atom::Prop(_) => 0,
            Atom::Box(_, body) => 1 + body.depth(),
        }
    }

    fn check_indices(&self) -> Result<(), FormulaError> {
        match self {
            Atom::Prop(0) => Err(FormulaError::ZeroIndex("propositional variable")),
            Atom::Box(0, _) => Err(FormulaError::ZeroIndex("box")),
            _ => Ok(()),
        }
    }
}

/// A signed atom. Positive literals sort before negative ones over the same atom.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    // field order matters for the derived ordering
    pub atom: Atom,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { atom, negated: false }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { atom, negated: true }
    }

    pub fn prop(index: u32, negated: bool) -> Self {
        Literal { atom: Atom::Prop(index), negated }
    }

    pub fn negate(&self) -> Self {
        Literal { atom: self.atom.clone(), negated: !self.negated }
    }
}

/// A non-empty disjunction of literals over pairwise distinct atoms, sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Sorts `literals` into canonical order.
    ///
    /// Fails on empty input, on zero indices and when two literals share an atom.
    pub fn new(mut literals: Vec<Literal>) -> Result<Self, FormulaError> {
        if literals.is_empty() {
            return Err(FormulaError::EmptyClause);
        }
        for lit in &literals {
            lit.atom.check_indices()?;
        }
        literals.sort();
        if let Some(w) = literals.windows(2).find(|w| w[0].atom == w[1].atom) {
            return Err(FormulaError::RepeatedAtom(w[0].atom.to_string()));
        }
        Ok(Clause { literals })
    }

    /// Builds a clause from literals already known to be canonical and
    /// repetition-free. Only checked in debug builds.
    pub(crate) fn from_sorted_unchecked(literals: Vec<Literal>) -> Self {
        debug_assert!(!literals.is_empty());
        debug_assert!(literals.windows(2).all(|w| w[0].atom < w[1].atom));
        Clause { literals }
    }

    pub fn unit(literal: Literal) -> Self {
        Clause { literals: vec![literal] }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of propositional literals.
    pub fn prop_count(&self) -> usize {
        self.literals.iter().filter(|l| l.atom.is_prop()).count()
    }

    pub fn depth(&self) -> usize {
        self.literals.iter().map(|l| l.atom.depth()).max().unwrap_or(0)
    }

    pub fn max_prop_index(&self) -> u32 {
        self.literals
            .iter()
            .map(|l| match &l.atom {
                Atom::Prop(i) => *i,
                Atom::Box(_, body) => body.max_prop_index(),
            })
            .max()
            .unwrap_or(0)
    }

    pub fn max_box_index(&self) -> u32 {
        self.literals
            .iter()
            .map(|l| match &l.atom {
                Atom::Prop(_) => 0,
                Atom::Box(r, body) => (*r).max(body.max_box_index()),
            })
            .max()
            .unwrap_or(0)
    }

    fn tally(&self, nesting: usize, counts: &mut ShapeCounts) {
        *counts
            .entry(nesting)
            .or_default()
            .entry(self.len())
            .or_default()
            .entry(self.prop_count())
            .or_default() += 1;
        for lit in &self.literals {
            if let Atom::Box(_, body) = &lit.atom {
                body.tally(nesting + 1, counts);
            }
        }
    }
}

/// Total order over clauses used for canonicalization.
pub fn canonical_compare<T: Ord>(a: &T, b: &T) -> Ordering {
    a.cmp(b)
}

/// Sorts a raw literal sequence into a [`Clause`]. Idempotent.
pub fn canonicalize_clause(raw: Vec<Literal>) -> Result<Clause, FormulaError> {
    Clause::new(raw)
}

/// Occurrence counts keyed by nesting depth, clause length and number of
/// propositional literals.
pub type ShapeCounts = BTreeMap<usize, BTreeMap<usize, BTreeMap<usize, usize>>>;

/// A conjunction of pairwise distinct clauses, in generation order.
#[derive(Debug, Clone)]
pub struct Formula {
    clauses: Vec<Clause>,
    params: Option<Arc<GenParams>>,
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        self.clauses == other.clauses
    }
}

impl Eq for Formula {}

impl Formula {
    pub fn new(clauses: Vec<Clause>) -> Result<Self, FormulaError> {
        if clauses.is_empty() {
            return Err(FormulaError::EmptyFormula);
        }
        let mut seen = std::collections::HashSet::with_capacity(clauses.len());
        for (i, c) in clauses.iter().enumerate() {
            if !seen.insert(c) {
                return Err(FormulaError::RepeatedClause { index: i + 1 });
            }
        }
        Ok(Formula { clauses, params: None })
    }

    /// Attaches the parameters the formula was generated with.
    pub fn with_params(mut self, params: Arc<GenParams>) -> Result<Self, FormulaError> {
        let depth = self.depth();
        if depth > params.depth {
            return Err(FormulaError::DepthExceeded { depth, declared: params.depth });
        }
        self.params = Some(params);
        Ok(self)
    }

    pub fn params(&self) -> Option<&GenParams> {
        self.params.as_deref()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.clauses.iter().map(Clause::depth).max().unwrap_or(0)
    }

    pub fn max_prop_index(&self) -> u32 {
        self.clauses.iter().map(Clause::max_prop_index).max().unwrap_or(0)
    }

    pub fn max_box_index(&self) -> u32 {
        self.clauses.iter().map(Clause::max_box_index).max().unwrap_or(0)
    }

    /// Equality of the two formulas seen as clause sets.
    pub fn same_clause_set(&self, other: &Formula) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut a: Vec<&Clause> = self.clauses.iter().collect();
        let mut b: Vec<&Clause> = other.clauses.iter().collect();
        a.sort();
        b.sort();
        a == b
    }

    /// Tallies every clause occurrence (top level and inside boxes).
    pub fn count_shapes(&self) -> ShapeCounts {
        let mut counts = ShapeCounts::new();
        for c in &self.clauses {
            c.tally(0, &mut counts);
        }
        counts
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Prop(i) => write!(f, "A{i}"),
            Atom::Box(r, body) => write!(f, "(box {r} {body})"),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "(not {})", self.atom)
        } else {
            write!(f, "{}", self.atom)
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(or")?;
        for lit in &self.literals {
            write!(f, " {lit}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(and")?;
        for c in &self.clauses {
            write!(f, " {c}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn p(i: u32) -> Atom {
        Atom::Prop(i)
    }

    fn clause(lits: Vec<Literal>) -> Clause {
        Clause::new(lits).unwrap()
    }

    #[test]
    fn prop_before_box() {
        assert_eq!(canonical_compare(&p(1), &p(1)), Ordering::Equal);
        let b = Atom::boxed(1, clause(vec![Literal::prop(1, false)]));
        assert_eq!(canonical_compare(&p(3), &b), Ordering::Less);
    }

    #[test]
    fn positive_before_negative() {
        assert!(Literal::prop(2, false) < Literal::prop(2, true));
        assert!(Literal::prop(1, true) < Literal::prop(2, false));
    }

    #[test]
    fn clause_order_is_lexicographic_with_prefix_first() {
        let short = clause(vec![Literal::prop(1, false)]);
        let long = clause(vec![Literal::prop(1, false), Literal::prop(2, false)]);
        assert!(short < long);
    }

    #[test]
    fn example_clauses_compare_on_first_literal() {
        let f = parse_formula(crate::syntax::tests::EXAMPLE_FORMULA).unwrap();
        // (¬A3 ∨ ...) vs (¬A1 ∨ ...)
        assert_eq!(canonical_compare(&f.clauses()[0], &f.clauses()[1]), Ordering::Greater);
    }

    #[test]
    fn canonicalize_sorts() {
        let c = canonicalize_clause(vec![Literal::prop(2, true), Literal::prop(1, false)]).unwrap();
        assert_eq!(c.to_string(), "(or A1 (not A2))");
        let again = canonicalize_clause(c.literals().to_vec()).unwrap();
        assert_eq!(again, c);

        let inner = clause(vec![Literal::prop(2, false)]);
        let c = canonicalize_clause(vec![Literal::pos(Atom::boxed(1, inner)), Literal::prop(1, true)])
            .unwrap();
        assert_eq!(c.to_string(), "(or (not A1) (box 1 (or A2)))");
    }

    #[test]
    fn repeated_atom_rejected() {
        let err = Clause::new(vec![Literal::prop(1, false), Literal::prop(1, true)]).unwrap_err();
        assert!(matches!(err, FormulaError::RepeatedAtom(_)));
        assert!(matches!(Clause::new(vec![]), Err(FormulaError::EmptyClause)));
        assert!(matches!(
            Clause::new(vec![Literal::prop(0, false)]),
            Err(FormulaError::ZeroIndex(_))
        ));
    }

    #[test]
    fn repeated_clause_rejected() {
        let c = clause(vec![Literal::prop(1, false)]);
        assert!(matches!(
            Formula::new(vec![c.clone(), c]),
            Err(FormulaError::RepeatedClause { index: 2 })
        ));
    }

    #[test]
    fn depths() {
        let f = parse_formula("(and (or A1 A2))").unwrap();
        assert_eq!(f.depth(), 0);
        let f = parse_formula(crate::syntax::tests::EXAMPLE_FORMULA).unwrap();
        assert_eq!(f.depth(), 2);
        let inner = clause(vec![Literal::prop(4, false)]);
        let mid = clause(vec![Literal::pos(Atom::boxed(1, inner))]);
        assert_eq!(Atom::boxed(1, mid).depth(), 2);
    }

    #[test]
    fn shape_counts_of_example() {
        let f = parse_formula(crate::syntax::tests::EXAMPLE_FORMULA).unwrap();
        let counts = f.count_shapes();
        let expect: ShapeCounts = [
            (0, [(2, [(1, 2)].into()), (3, [(1, 2)].into())].into()),
            (1, [(1, [(0, 2)].into()), (2, [(1, 4)].into())].into()),
            (2, [(1, [(1, 6)].into())].into()),
        ]
        .into();
        assert_eq!(counts, expect);
    }

    #[test]
    fn shape_counts_small() {
        let f = parse_formula("(and (or A1 A2))").unwrap();
        assert_eq!(f.count_shapes(), [(0, [(2, [(2, 1)].into())].into())].into());
        let f = parse_formula("(and (or (box 1 (or A1))))").unwrap();
        assert_eq!(
            f.count_shapes(),
            [(0, [(1, [(0, 1)].into())].into()), (1, [(1, [(1, 1)].into())].into())].into()
        );
    }

    #[test]
    fn as_set_equality_ignores_order() {
        let a = parse_formula("(and (or A1) (or A2))").unwrap();
        let b = parse_formula("(and (or A2) (or A1))").unwrap();
        assert_ne!(a, b);
        assert!(a.same_clause_set(&b));
    }
}
