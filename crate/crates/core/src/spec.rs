//! Clause-length (`C`) and propositional-count (`p`) weight distributions.
//!
//! Both are written in bracket notation. A [`LengthSpec`] is a list of weight
//! lists, one per nesting depth, where entry `j - 1` weighs clause length `j`.
//! A [`PropRateSpec`] is a list (per depth) of lists (per clause length) of
//! weight lists, where entry `r` weighs `r` propositional literals; an empty
//! list marks a length that never occurs at that depth. Depths past the last
//! entry reuse the last entry.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::SpecError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LengthSpec {
    per_depth: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PropRateSpec {
    per_depth: Vec<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecKind {
    Length,
    Prop,
}

/// How scalar parameters are turned into distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Method {
    /// floor/ceil propositional counts per clause
    #[default]
    New,
    /// independent per-atom propositional probability (binomial counts)
    Old,
}

impl std::str::FromStr for Method {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "new" => Ok(Method::New),
            "old" => Ok(Method::Old),
            _ => Err(SpecError::Scalar(format!("unknown method {s:?} (expected new or old)"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::New => "new",
            Method::Old => "old",
        })
    }
}

impl LengthSpec {
    pub fn new(per_depth: Vec<Vec<u64>>) -> Result<Self, SpecError> {
        if per_depth.is_empty() {
            return Err(SpecError::NoDepths);
        }
        Ok(LengthSpec { per_depth })
    }

    pub fn per_depth(&self) -> &[Vec<u64>] {
        &self.per_depth
    }

    /// Weights for the given nesting depth (last entry when out of range).
    pub fn at_depth(&self, nesting: usize) -> &[u64] {
        let i = nesting.min(self.per_depth.len() - 1);
        &self.per_depth[i]
    }

    pub fn normalize(&self) -> Self {
        LengthSpec { per_depth: self.per_depth.iter().map(|w| normalize_weights(w)).collect() }
    }

    pub(crate) fn per_depth_mut(&mut self) -> &mut Vec<Vec<u64>> {
        &mut self.per_depth
    }
}

impl PropRateSpec {
    pub fn new(per_depth: Vec<Vec<Vec<u64>>>) -> Self {
        PropRateSpec { per_depth }
    }

    pub fn per_depth(&self) -> &[Vec<Vec<u64>>] {
        &self.per_depth
    }

    pub fn is_empty(&self) -> bool {
        self.per_depth.is_empty()
    }

    /// Per-length lists for the given nesting depth (last entry when out of
    /// range, `None` when the spec has no entries at all).
    pub fn at_depth(&self, nesting: usize) -> Option<&[Vec<u64>]> {
        let last = self.per_depth.len().checked_sub(1)?;
        Some(&self.per_depth[nesting.min(last)])
    }

    /// Weight list for clauses of `length` at `nesting`, `None` when absent or empty.
    pub fn weights(&self, nesting: usize, length: usize) -> Option<&[u64]> {
        let lists = self.at_depth(nesting)?;
        let w = lists.get(length.checked_sub(1)?)?;
        (!w.is_empty()).then_some(w.as_slice())
    }

    pub fn normalize(&self) -> Self {
        PropRateSpec {
            per_depth: self
                .per_depth
                .iter()
                .map(|lists| lists.iter().map(|w| normalize_weights(w)).collect())
                .collect(),
        }
    }

    pub(crate) fn per_depth_mut(&mut self) -> &mut Vec<Vec<Vec<u64>>> {
        &mut self.per_depth
    }
}

/// Divides a weight list by the gcd of its positive entries.
pub fn normalize_weights(w: &[u64]) -> Vec<u64> {
    let g = w.iter().copied().filter(|&x| x > 0).fold(0u64, |g, x| g.gcd(&x));
    if g <= 1 {
        w.to_vec()
    } else {
        w.iter().map(|x| x / g).collect()
    }
}

/// Either kind of parsed spec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Spec {
    Length(LengthSpec),
    Prop(PropRateSpec),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Num(u64),
    List(Vec<Node>),
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn skip(&mut self) {
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_whitespace() || self.bytes[self.pos] == b',')
        {
            self.pos += 1;
        }
    }

    fn err(&self, message: &str) -> SpecError {
        SpecError::Syntax { offset: self.pos, message: message.into() }
    }

    fn node(&mut self) -> Result<Node, SpecError> {
        self.skip();
        match self.bytes.get(self.pos) {
            Some(b'[') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip();
                    match self.bytes.get(self.pos) {
                        Some(b']') => {
                            self.pos += 1;
                            return Ok(Node::List(items));
                        }
                        None => return Err(self.err("unterminated list")),
                        _ => items.push(self.node()?),
                    }
                }
            }
            Some(b'-') => Err(SpecError::Negative { offset: self.pos }),
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let s = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
                s.parse().map(Node::Num).map_err(|_| SpecError::Overflow)
            }
            Some(_) => Err(self.err("expected '[' or a non-negative integer")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Nesting levels of a node; `None` for an empty list (fits any level >= 1).
fn levels(node: &Node) -> Result<Option<usize>, SpecError> {
    match node {
        Node::Num(_) => Ok(Some(0)),
        Node::List(items) => {
            let mut level = None;
            for item in items {
                let l = match levels(item)? {
                    Some(l) => l + 1,
                    None => 2, // an empty list inside a list
                };
                match level {
                    None => level = Some(l),
                    Some(prev) if prev == l => {}
                    Some(prev) => {
                        return Err(SpecError::Nesting { expected: prev, found: l });
                    }
                }
            }
            Ok(level.or(if items.is_empty() { None } else { Some(1) }))
        }
    }
}

fn numbers(node: &Node) -> Vec<u64> {
    match node {
        Node::List(items) => items
            .iter()
            .map(|n| match n {
                Node::Num(v) => *v,
                Node::List(_) => unreachable!("checked nesting"),
            })
            .collect(),
        Node::Num(_) => unreachable!("checked nesting"),
    }
}

fn lists(node: &Node) -> Vec<&Node> {
    match node {
        Node::List(items) => items.iter().collect(),
        Node::Num(_) => unreachable!("checked nesting"),
    }
}

/// Parses bracket notation such as `[[0, 0, 1]]` or `[[[], [], [0, 3, 3, 0]]]`.
///
/// Commas and whitespace both separate items. No normalization is applied.
pub fn parse_spec(text: &str, kind: SpecKind) -> Result<Spec, SpecError> {
    let mut r = Reader { bytes: text.as_bytes(), pos: 0 };
    let root = r.node()?;
    r.skip();
    if r.pos != r.bytes.len() {
        return Err(r.err("trailing input"));
    }
    if matches!(root, Node::Num(_)) {
        return Err(SpecError::Nesting { expected: expected_levels(kind), found: 0 });
    }
    let found = levels(&root)?;
    let expected = expected_levels(kind);
    // an empty top-level list or one made of empty lists is ambiguous; accept
    // it when it is not deeper than the kind allows
    if let Some(found) = found {
        if found != expected {
            return Err(SpecError::Nesting { expected, found });
        }
    }
    match kind {
        SpecKind::Length => {
            let per_depth = lists(&root).into_iter().map(numbers).collect();
            Ok(Spec::Length(LengthSpec::new(per_depth)?))
        }
        SpecKind::Prop => {
            let mut per_depth = Vec::new();
            for depth in lists(&root) {
                if let Node::Num(_) = depth {
                    return Err(SpecError::Nesting { expected, found: 1 });
                }
                per_depth.push(lists(depth).into_iter().map(numbers).collect());
            }
            Ok(Spec::Prop(PropRateSpec::new(per_depth)))
        }
    }
}

fn expected_levels(kind: SpecKind) -> usize {
    match kind {
        SpecKind::Length => 2,
        SpecKind::Prop => 3,
    }
}

pub fn parse_length_spec(text: &str) -> Result<LengthSpec, SpecError> {
    match parse_spec(text, SpecKind::Length)? {
        Spec::Length(s) => Ok(s),
        Spec::Prop(_) => unreachable!(),
    }
}

pub fn parse_prop_spec(text: &str) -> Result<PropRateSpec, SpecError> {
    match parse_spec(text, SpecKind::Prop)? {
        Spec::Prop(s) => Ok(s),
        Spec::Length(_) => unreachable!(),
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, w: &[u64]) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in w.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("]")
}

impl fmt::Display for LengthSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, w) in self.per_depth.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write_list(f, w)?;
        }
        f.write_str("]")
    }
}

impl fmt::Display for PropRateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, lists) in self.per_depth.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, w) in lists.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write_list(f, w)?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Parses `3`, `2.25` or `9/4` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, SpecError> {
    let bad = || SpecError::Scalar(format!("not a number: {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    Ok(BigRational::new(numer, denom))
}

/// Scales non-negative rational weights to the smallest integer list with the
/// same proportions.
fn scale_to_integers(weights: &[BigRational]) -> Result<Vec<u64>, SpecError> {
    let lcm = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let ints: Vec<BigInt> = weights.iter().map(|w| (w * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter()
        .map(|x| {
            let v = if g.is_zero() { x.clone() } else { x / &g };
            v.to_u64().ok_or(SpecError::Overflow)
        })
        .collect()
}

/// Two-point floor/ceil weights around `x`, indexed from `offset`.
fn floor_ceil(x: &BigRational) -> (usize, usize, BigRational, BigRational) {
    let lo = x.floor();
    let hi = x.ceil();
    let lo_i = lo.to_integer().to_usize().expect("small");
    let hi_i = hi.to_integer().to_usize().expect("small");
    if lo == hi {
        (lo_i, hi_i, BigRational::one(), BigRational::zero())
    } else {
        (lo_i, hi_i, &hi - x, x - &lo)
    }
}

/// Propositional-count weights for a clause of length `k` with scalar rate `p`.
pub fn prop_weights_for_length(k: usize, p: &BigRational, method: Method) -> Result<Vec<u64>, SpecError> {
    let mut w = vec![BigRational::zero(); k + 1];
    match method {
        Method::New => {
            let pk = p * BigRational::from_integer(BigInt::from(k));
            let (lo, hi, w_lo, w_hi) = floor_ceil(&pk);
            w[lo] += w_lo;
            w[hi] += w_hi;
        }
        Method::Old => {
            let q = BigRational::one() - p;
            for (r, slot) in w.iter_mut().enumerate() {
                let choose = num_integer::binomial(BigInt::from(k), BigInt::from(r));
                *slot = BigRational::from_integer(choose)
                    * num_traits::pow(p.clone(), r)
                    * num_traits::pow(q.clone(), k - r);
            }
        }
    }
    scale_to_integers(&w)
}

/// Builds a [`PropRateSpec`] with one depth entry covering every length that
/// has positive weight at some depth of `lengths`.
pub fn prop_spec_for_lengths(
    lengths: &LengthSpec,
    p: &BigRational,
    depth: usize,
    method: Method,
) -> Result<PropRateSpec, SpecError> {
    check_probability(p)?;
    if depth == 0 {
        return Ok(PropRateSpec::default());
    }
    let mut per_depth = Vec::with_capacity(lengths.per_depth.len().min(depth));
    for nesting in 0..lengths.per_depth.len().min(depth) {
        let w = lengths.at_depth(nesting);
        let mut row = Vec::with_capacity(w.len());
        for (j, &weight) in w.iter().enumerate() {
            row.push(if weight > 0 { prop_weights_for_length(j + 1, p, method)? } else { Vec::new() });
        }
        per_depth.push(row);
    }
    // identical rows collapse into one entry
    if per_depth.len() > 1 && per_depth.iter().all(|r| *r == per_depth[0]) {
        per_depth.truncate(1);
    }
    Ok(PropRateSpec::new(per_depth))
}

fn check_probability(p: &BigRational) -> Result<(), SpecError> {
    if p.is_negative() || *p > BigRational::one() {
        return Err(SpecError::Scalar(format!("propositional probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Converts scalar clause size and propositional probability into
/// distribution form.
pub fn basic_to_advanced(
    clause_size: &BigRational,
    prop_prob: &BigRational,
    depth: usize,
    method: Method,
) -> Result<(LengthSpec, PropRateSpec), SpecError> {
    if *clause_size < BigRational::one() {
        return Err(SpecError::Scalar(format!("clause size {clause_size} below 1")));
    }
    check_probability(prop_prob)?;
    let (lo, hi, w_lo, w_hi) = floor_ceil(clause_size);
    let mut w = vec![BigRational::zero(); hi];
    w[lo - 1] += w_lo;
    w[hi - 1] += w_hi;
    let lengths = LengthSpec::new(vec![scale_to_integers(&w)?])?;
    let props = prop_spec_for_lengths(&lengths, prop_prob, depth, method)?;
    Ok((lengths, props))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parses_length_spec() {
        let s = parse_length_spec("[[0, 0, 1]]").unwrap();
        assert_eq!(s.per_depth(), &[vec![0, 0, 1]]);
        let s = parse_length_spec("[[0 2 2] [2,4],[6]]").unwrap();
        assert_eq!(s.to_string(), "[[0, 2, 2], [2, 4], [6]]");
    }

    #[test]
    fn parses_prop_spec_with_empty_lists() {
        let s = parse_prop_spec("[[[ ], [ ], [0, 3, 3, 0]]]").unwrap();
        assert_eq!(s.per_depth(), &[vec![vec![], vec![], vec![0, 3, 3, 0]]]);
        assert_eq!(s.weights(0, 1), None);
        assert_eq!(s.weights(0, 3), Some(&[0, 3, 3, 0][..]));
        let s = parse_prop_spec("[[[], [0, 2, 0], [0, 2, 0, 0]] [[2, 0], [0, 4, 0]]]").unwrap();
        assert_eq!(s.to_string(), "[[[], [0, 2, 0], [0, 2, 0, 0]], [[2, 0], [0, 4, 0]]]");
        assert!(parse_prop_spec("[]").unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(matches!(parse_length_spec("[[1,-1]]"), Err(SpecError::Negative { .. })));
        assert!(matches!(parse_length_spec("[[[1]]]"), Err(SpecError::Nesting { .. })));
        assert!(matches!(parse_prop_spec("[[1, 2]]"), Err(SpecError::Nesting { .. })));
        assert!(matches!(parse_length_spec("[[1, [2]]]"), Err(SpecError::Nesting { .. })));
        assert!(parse_length_spec("[[1, 2]").is_err());
        assert!(parse_length_spec("[[1, 2]] x").is_err());
        assert!(parse_length_spec("[[1.5]]").is_err());
        assert!(matches!(parse_length_spec("[]"), Err(SpecError::NoDepths)));
        assert!(matches!(parse_length_spec("7"), Err(SpecError::Nesting { .. })));
    }

    #[test]
    fn depth_lookup_reuses_last_entry() {
        let c = parse_length_spec("[[1, 8, 1], [1, 2]]").unwrap();
        assert_eq!(c.at_depth(0), &[1, 8, 1]);
        assert_eq!(c.at_depth(3), &[1, 2]);
        let single = parse_length_spec("[[0, 0, 1]]").unwrap();
        assert_eq!(single.at_depth(5), &[0, 0, 1]);
        let c = parse_length_spec("[[0, 1, 1], [1, 2], [1]]").unwrap();
        assert_eq!(c.at_depth(2), &[1]);
    }

    #[test]
    fn normalization() {
        let c = parse_length_spec("[[0, 2, 2], [2, 4], [6]]").unwrap();
        assert_eq!(c.normalize().to_string(), "[[0, 1, 1], [1, 2], [1]]");
        let p = parse_prop_spec("[[[], [], [0, 3, 3, 0]]]").unwrap();
        assert_eq!(p.normalize().to_string(), "[[[], [], [0, 1, 1, 0]]]");
        assert_eq!(p.normalize().normalize(), p.normalize());
        assert_eq!(normalize_weights(&[0, 0]), vec![0, 0]);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(r("2.25"), BigRational::new(9.into(), 4.into()));
        assert_eq!(r("9/4"), r("2.25"));
        assert_eq!(r("3"), BigRational::from_integer(3.into()));
        assert_eq!(r(".5"), BigRational::new(1.into(), 2.into()));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn basic_conversion_rows() {
        let (c, p) = basic_to_advanced(&r("3"), &r("0.5"), 1, Method::New).unwrap();
        assert_eq!(c.to_string(), "[[0, 0, 1]]");
        assert_eq!(p.to_string(), "[[[], [], [0, 1, 1, 0]]]");
        let (_, p) = basic_to_advanced(&r("3"), &r("0.6"), 1, Method::Old).unwrap();
        assert_eq!(p.to_string(), "[[[], [], [8, 36, 54, 27]]]");
        let (c, _) = basic_to_advanced(&r("2.2"), &r("0.5"), 1, Method::New).unwrap();
        assert_eq!(c.to_string(), "[[0, 4, 1]]");
        for m in [Method::New, Method::Old] {
            let (_, p) = basic_to_advanced(&r("3"), &r("0"), 1, m).unwrap();
            assert_eq!(p.to_string(), "[[[], [], [1, 0, 0, 0]]]");
        }
        assert!(basic_to_advanced(&r("3"), &r("1.5"), 1, Method::New).is_err());
        assert!(basic_to_advanced(&r("0.5"), &r("0.5"), 1, Method::New).is_err());
        let (_, p) = basic_to_advanced(&r("3"), &r("0.5"), 0, Method::New).unwrap();
        assert!(p.is_empty());
    }
}
