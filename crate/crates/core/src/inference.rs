//! Building `C` and `p` from a target formula.
//!
//! Length weights at depth `i` are the counts of clauses of each length found
//! at nesting depth `i`; propositional-count weights are the counts of those
//! clauses by number of propositional literals. A weight is therefore non-zero
//! exactly when the corresponding shape occurs in the formula, which is what
//! makes the formula reachable by the generator.

use std::fmt;

use crate::error::SpecError;
use crate::formula::Formula;
use crate::params::GenParams;
use crate::spec::{LengthSpec, Method, PropRateSpec};

pub fn infer_params(phi: &Formula) -> (LengthSpec, PropRateSpec) {
    let counts = phi.count_shapes();
    let d = phi.depth();

    let mut lengths = Vec::with_capacity(d + 1);
    let mut props = Vec::with_capacity(d);
    for i in 0..=d {
        let at = &counts[&i];
        let max_len = *at.keys().next_back().expect("every level up to depth is populated");
        let mut c_row = vec![0u64; max_len];
        let mut p_row = vec![Vec::new(); max_len];
        for (&len, by_props) in at {
            c_row[len - 1] = by_props.values().sum::<usize>() as u64;
            let mut w = vec![0u64; len + 1];
            for (&r, &n) in by_props {
                w[r] = n as u64;
            }
            p_row[len - 1] = w;
        }
        lengths.push(c_row);
        if i < d {
            props.push(p_row);
        }
    }
    (LengthSpec::new(lengths).expect("at least depth 0"), PropRateSpec::new(props))
}

/// Generation parameters under which `phi` can be produced: inferred specs,
/// `d`, `L` from the formula, `N` and `m` from the largest indices used.
pub fn infer_gen_params(phi: &Formula, method: Method, seed: u64) -> GenParams {
    let (lengths, props) = infer_params(phi);
    GenParams {
        depth: phi.depth(),
        boxes: phi.max_box_index().max(1),
        clauses: phi.len(),
        vars: phi.max_prop_index().max(1),
        lengths,
        props,
        method,
        seed,
    }
}

/// A weight position that may be raised from zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Widening {
    /// weight of clause `length` at nesting `depth` in `C`
    Length { depth: usize, length: usize },
    /// weight of `props` propositional literals for `length` at `depth` in `p`
    Prop { depth: usize, length: usize, props: usize },
}

impl fmt::Display for Widening {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Widening::Length { depth, length } => write!(f, "C[depth {depth}][length {length}]"),
            Widening::Prop { depth, length, props } => {
                write!(f, "p[depth {depth}][length {length}][props {props}]")
            }
        }
    }
}

impl std::str::FromStr for Widening {
    type Err = SpecError;

    /// `C:depth:length` or `p:depth:length:props`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SpecError::Scalar(format!("bad widening {s:?} (expected C:d:j or p:d:j:r)"));
        let parts: Vec<&str> = s.split(':').collect();
        let nums: Vec<usize> =
            parts[1..].iter().map(|x| x.parse().map_err(|_| bad())).collect::<Result<_, _>>()?;
        match (parts[0], nums.as_slice()) {
            ("C", &[depth, length]) => Ok(Widening::Length { depth, length }),
            ("p", &[depth, length, props]) => Ok(Widening::Prop { depth, length, props }),
            _ => Err(bad()),
        }
    }
}

fn widen_err(w: &Widening, reason: &str) -> SpecError {
    SpecError::Widen { coord: w.to_string(), reason: reason.into() }
}

/// Replaces the named zero weights by `fill`. Only existing zero entries may
/// be widened; empty lists stay empty.
pub fn widen_spec(
    lengths: &LengthSpec,
    props: &PropRateSpec,
    positions: &[Widening],
    fill: u64,
) -> Result<(LengthSpec, PropRateSpec), SpecError> {
    if fill == 0 {
        return Err(SpecError::Scalar("widening fill must be positive".into()));
    }
    let mut lengths = lengths.clone();
    let mut props = props.clone();
    for w in positions {
        let slot = match *w {
            Widening::Length { depth, length } => lengths
                .per_depth_mut()
                .get_mut(depth)
                .and_then(|row| row.get_mut(length.checked_sub(1)?)),
            Widening::Prop { depth, length, props: r } => props
                .per_depth_mut()
                .get_mut(depth)
                .and_then(|row| row.get_mut(length.checked_sub(1)?))
                .and_then(|list| list.get_mut(r)),
        };
        let slot = slot.ok_or_else(|| widen_err(w, "out of range"))?;
        if *slot != 0 {
            return Err(widen_err(w, "entry is not zero"));
        }
        *slot = fill;
    }
    Ok((lengths, props))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;
    use crate::syntax::tests::EXAMPLE_FORMULA;

    #[test]
    fn example_inference() {
        let f = parse_formula(EXAMPLE_FORMULA).unwrap();
        let (c, p) = infer_params(&f);
        assert_eq!(c.to_string(), "[[0, 2, 2], [2, 4], [6]]");
        assert_eq!(p.to_string(), "[[[], [0, 2, 0], [0, 2, 0, 0]], [[2, 0], [0, 4, 0]]]");
        assert_eq!(c.normalize().to_string(), "[[0, 1, 1], [1, 2], [1]]");
        assert_eq!(p.normalize().to_string(), "[[[], [0, 1, 0], [0, 1, 0, 0]], [[1, 0], [0, 1, 0]]]");
        let gp = infer_gen_params(&f, Method::New, 0);
        assert_eq!((gp.depth, gp.boxes, gp.vars, gp.clauses), (2, 1, 4, 4));
        assert!(gp.validate().is_ok());
    }

    #[test]
    fn propositional_formula() {
        let f = parse_formula("(and (or A1 A2))").unwrap();
        let (c, p) = infer_params(&f);
        assert_eq!(c.to_string(), "[[0, 1]]");
        assert!(p.is_empty());
    }

    #[test]
    fn widening() {
        let f = parse_formula(EXAMPLE_FORMULA).unwrap();
        let (c, p) = infer_params(&f);
        let (c, p) = (c.normalize(), p.normalize());
        let (c2, p2) = widen_spec(&c, &p, &[Widening::Length { depth: 0, length: 1 }], 1).unwrap();
        assert_eq!(c2.to_string(), "[[1, 1, 1], [1, 2], [1]]");
        assert_eq!(p2, p);
        assert_eq!(widen_spec(&c, &p, &[], 1).unwrap(), (c.clone(), p.clone()));
        assert!(widen_spec(&c, &p, &[Widening::Length { depth: 0, length: 2 }], 1).is_err());
        assert!(widen_spec(&c, &p, &[Widening::Length { depth: 0, length: 9 }], 1).is_err());
        // empty lists are not extended
        assert!(widen_spec(&c, &p, &[Widening::Prop { depth: 0, length: 1, props: 0 }], 1).is_err());
        let (_, p3) = widen_spec(&c, &p, &[Widening::Prop { depth: 1, length: 1, props: 1 }], 3).unwrap();
        assert_eq!(p3.per_depth()[1][0], vec![1, 3]);
    }

    #[test]
    fn widening_parse() {
        assert_eq!("C:0:1".parse::<Widening>().unwrap(), Widening::Length { depth: 0, length: 1 });
        assert_eq!(
            "p:1:2:0".parse::<Widening>().unwrap(),
            Widening::Prop { depth: 1, length: 2, props: 0 }
        );
        assert!("x:1".parse::<Widening>().is_err());
        assert!("C:1".parse::<Widening>().is_err());
    }
}
