//! Exact emission probabilities by exhaustive enumeration.
//!
//! The enumeration follows the generator's own semantics: a clause's shape is
//! drawn once, instantiations with a repeated atom are discarded as a whole,
//! so the accepted outcome is the shape's instantiation distribution
//! conditioned on acceptance. Top-level clauses are redrawn until new, which
//! gives the formula probability
//!
//! ```text
//! P(Cl_1, ..., Cl_L) = prod_k P_k / (1 - sum_{s<k} P_s)
//! ```
//!
//! over the clause probabilities `P_k`. Everything is exact rational arithmetic.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use statrs::function::beta::beta_reg;

use crate::error::OracleError;
use crate::formula::{Atom, Clause, Formula, Literal};
use crate::generator::Generator;
use crate::inference::{infer_gen_params, widen_spec, Widening};
use crate::params::GenParams;
use crate::rng::derive_seed;
use crate::spec::Method;

/// Default cap on enumerated outcomes per depth level.
pub const DEFAULT_OUTCOME_LIMIT: u128 = 1_000_000;

/// Largest formula accepted by [`Mode::AsSet`] (L! orderings are summed).
pub const MAX_AS_SET_CLAUSES: usize = 6;

/// Exact distribution of the clauses returned by one clause draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ClauseDistribution {
    pub remaining: usize,
    pub nesting: usize,
    entries: BTreeMap<Clause, BigRational>,
}

impl ClauseDistribution {
    pub fn entries(&self) -> &BTreeMap<Clause, BigRational> {
        &self.entries
    }

    pub fn probability(&self, c: &Clause) -> BigRational {
        self.entries.get(c).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.entries.values().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Memoizing enumerator over (remaining depth, nesting depth) levels.
pub struct Enumerator<'a> {
    params: &'a GenParams,
    limit: u128,
    memo: HashMap<(usize, usize), Arc<ClauseDistribution>>,
}

impl<'a> Enumerator<'a> {
    pub fn new(params: &'a GenParams) -> Self {
        Enumerator { params, limit: DEFAULT_OUTCOME_LIMIT, memo: HashMap::new() }
    }

    pub fn outcome_limit(mut self, limit: u128) -> Self {
        self.limit = limit;
        self
    }

    pub fn distribution(&mut self, remaining: usize, nesting: usize) -> Result<Arc<ClauseDistribution>, OracleError> {
        if let Some(d) = self.memo.get(&(remaining, nesting)) {
            return Ok(d.clone());
        }
        let gp = self.params;
        let lower = if remaining > 0 { Some(self.distribution(remaining - 1, nesting + 1)?) } else { None };

        // modal atom options with their probabilities (box index uniform)
        let modal: Vec<(Atom, BigRational)> = match &lower {
            Some(lower) => (1..=gp.boxes)
                .flat_map(|r| {
                    lower.entries.iter().map(move |(c, q)| {
                        (Atom::boxed(r, c.clone()), q / BigRational::from_integer(BigInt::from(gp.boxes)))
                    })
                })
                .collect(),
            None => Vec::new(),
        };

        let shapes = self.shapes(remaining, nesting);
        let estimate: u128 = shapes
            .iter()
            .map(|&(k, p, _)| {
                let prop = (2 * gp.vars as u128).saturating_pow(p as u32);
                let modal = (2 * modal.len() as u128).saturating_pow((k - p) as u32);
                prop.saturating_mul(modal)
            })
            .fold(0u128, |a, b| a.saturating_add(b));
        if estimate > self.limit {
            return Err(OracleError::Intractable { depth: nesting, estimate, limit: self.limit });
        }

        let prop_p = ratio(1, gp.vars as u64);
        let mut entries: BTreeMap<Clause, BigRational> = BTreeMap::new();
        for (k, p, weight) in shapes {
            // accepted mass of each sorted atom set
            let mut by_atoms: BTreeMap<Vec<Atom>, BigRational> = BTreeMap::new();
            let mut accepted = BigRational::zero();
            let mut tuple: Vec<Atom> = Vec::with_capacity(k);
            let mut slots = Slots { vars: gp.vars, prop_p: &prop_p, modal: &modal, props: p, len: k };
            slots.walk(&mut tuple, BigRational::one(), &mut |atoms, mass| {
                let mut sorted = atoms.to_vec();
                sorted.sort();
                accepted += &mass;
                *by_atoms.entry(sorted).or_insert_with(BigRational::zero) += mass;
            });
            if accepted.is_zero() {
                return Err(OracleError::ImpossibleShape { depth: nesting, length: k, props: p });
            }
            let sign_p = ratio(1, 1u64 << k);
            let scale = &weight * &sign_p / &accepted;
            for (atoms, mass) in by_atoms {
                let share = &mass * &scale;
                for signs in 0..(1u32 << k) {
                    let lits: Vec<Literal> = atoms
                        .iter()
                        .enumerate()
                        .map(|(i, a)| Literal { atom: a.clone(), negated: signs >> i & 1 == 1 })
                        .collect();
                    *entries.entry(Clause::from_sorted_unchecked(lits)).or_insert_with(BigRational::zero) +=
                        &share;
                }
            }
        }
        let dist = Arc::new(ClauseDistribution { remaining, nesting, entries });
        self.memo.insert((remaining, nesting), dist.clone());
        Ok(dist)
    }

    /// (K, P, probability of that shape) for every shape with positive weight.
    fn shapes(&self, remaining: usize, nesting: usize) -> Vec<(usize, usize, BigRational)> {
        let gp = self.params;
        let lw = gp.lengths.at_depth(nesting);
        let ltotal: u64 = lw.iter().sum();
        let mut out = Vec::new();
        for (j, &w) in lw.iter().enumerate().filter(|(_, &w)| w > 0) {
            let k = j + 1;
            let pk = ratio(w, ltotal);
            if remaining == 0 {
                out.push((k, k, pk));
                continue;
            }
            let pw = gp.props.weights(nesting, k).expect("validated params");
            let ptotal: u64 = pw.iter().sum();
            for (r, &v) in pw.iter().enumerate().filter(|(_, &v)| v > 0) {
                out.push((k, r, &pk * ratio(v, ptotal)));
            }
        }
        out
    }
}

struct Slots<'s> {
    vars: u32,
    prop_p: &'s BigRational,
    modal: &'s [(Atom, BigRational)],
    props: usize,
    len: usize,
}

impl Slots<'_> {
    /// Depth-first over slot choices, pruning as soon as an atom repeats.
    fn walk(&mut self, tuple: &mut Vec<Atom>, mass: BigRational, emit: &mut impl FnMut(&[Atom], BigRational)) {
        let i = tuple.len();
        if i == self.len {
            emit(tuple, mass);
            return;
        }
        if i < self.props {
            for v in 1..=self.vars {
                let a = Atom::Prop(v);
                if tuple.contains(&a) {
                    continue;
                }
                tuple.push(a);
                self.walk(tuple, &mass * self.prop_p, emit);
                tuple.pop();
            }
        } else {
            for (a, q) in self.modal {
                if tuple.contains(a) {
                    continue;
                }
                tuple.push(a.clone());
                self.walk(tuple, &mass * q, emit);
                tuple.pop();
            }
        }
    }
}

pub fn enumerate_clause_distribution(
    remaining: usize,
    nesting: usize,
    gp: &GenParams,
) -> Result<ClauseDistribution, OracleError> {
    gp.validate()?;
    Ok((*Enumerator::new(gp).distribution(remaining, nesting)?).clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// clauses must come out in the formula's order
    Ordered,
    /// any order of the same clauses
    AsSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormulaProbability {
    pub value: BigRational,
    /// 1-based indices of clauses the generator can never emit
    pub zero_support: Vec<usize>,
    /// set when the formula size differs from `L`
    pub clause_count_mismatch: bool,
}

/// Ordered-sequence probability from the per-clause probabilities.
pub fn ordered_probability(clause_probs: &[BigRational]) -> BigRational {
    let mut acc = BigRational::one();
    let mut used = BigRational::zero();
    for p in clause_probs {
        let left = BigRational::one() - &used;
        if left.is_zero() || p.is_zero() {
            return BigRational::zero();
        }
        acc = acc * p / left;
        used += p;
    }
    acc
}

fn for_each_permutation(items: &mut Vec<BigRational>, k: usize, f: &mut impl FnMut(&[BigRational])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        for_each_permutation(items, k + 1, f);
        items.swap(k, i);
    }
}

pub fn formula_probability(phi: &Formula, gp: &GenParams, mode: Mode) -> Result<FormulaProbability, OracleError> {
    gp.validate()?;
    formula_probability_with(&mut Enumerator::new(gp), phi, mode)
}

pub fn formula_probability_with(
    en: &mut Enumerator<'_>,
    phi: &Formula,
    mode: Mode,
) -> Result<FormulaProbability, OracleError> {
    let gp = en.params;
    if phi.depth() > gp.depth {
        return Err(OracleError::DepthMismatch { depth: phi.depth(), declared: gp.depth });
    }
    if mode == Mode::AsSet && phi.len() > MAX_AS_SET_CLAUSES {
        return Err(OracleError::TooManyClauses { len: phi.len(), max: MAX_AS_SET_CLAUSES });
    }
    let top = en.distribution(gp.depth, 0)?;
    let probs: Vec<BigRational> = phi.clauses().iter().map(|c| top.probability(c)).collect();
    let zero_support: Vec<usize> =
        probs.iter().enumerate().filter(|(_, p)| p.is_zero()).map(|(i, _)| i + 1).collect();
    let mismatch = phi.len() != gp.clauses;
    let value = if mismatch || !zero_support.is_empty() {
        BigRational::zero()
    } else {
        match mode {
            Mode::Ordered => ordered_probability(&probs),
            Mode::AsSet => {
                let mut total = BigRational::zero();
                let mut items = probs.clone();
                for_each_permutation(&mut items, 0, &mut |perm| total += ordered_probability(perm));
                total
            }
        }
    };
    Ok(FormulaProbability { value, zero_support, clause_count_mismatch: mismatch })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub probability: BigRational,
    pub widened_probability: BigRational,
    /// both probabilities strictly positive
    pub positive: bool,
    /// widened probability does not exceed the original
    pub monotone: bool,
    pub zero_support: Vec<usize>,
}

impl TheoremReport {
    pub fn holds(&self) -> bool {
        self.positive && self.monotone
    }
}

/// Checks, exactly, that `phi` has positive probability under the specs
/// inferred from it and that widening zeros never raises that probability.
pub fn check_theorem_6_1(phi: &Formula, widenings: &[Widening]) -> Result<TheoremReport, OracleError> {
    let gp = infer_gen_params(phi, Method::New, 0);
    check_theorem_with(phi, &gp, widenings)
}

/// Same check with explicitly supplied base parameters.
pub fn check_theorem_with(phi: &Formula, gp: &GenParams, widenings: &[Widening]) -> Result<TheoremReport, OracleError> {
    gp.validate()?;
    let base = formula_probability(phi, gp, Mode::AsSet)?;
    let (lengths, props) = widen_spec(&gp.lengths, &gp.props, widenings, 1)?;
    let widened_gp = GenParams { lengths, props, ..gp.clone() };
    widened_gp.validate()?;
    let widened = formula_probability(phi, &widened_gp, Mode::AsSet)?;
    let positive = !base.value.is_zero() && !widened.value.is_zero();
    let monotone = widened.value <= base.value;
    Ok(TheoremReport {
        probability: base.value,
        widened_probability: widened.value,
        positive,
        monotone,
        zero_support: base.zero_support,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyEstimate {
    pub hits: u64,
    pub samples: u64,
    pub frequency: f64,
    /// exact (Clopper-Pearson) 99% interval
    pub ci_low: f64,
    pub ci_high: f64,
}

impl FrequencyEstimate {
    pub fn new(hits: u64, samples: u64) -> Self {
        let (ci_low, ci_high) = clopper_pearson(hits, samples, 0.01);
        FrequencyEstimate { hits, samples, frequency: hits as f64 / samples as f64, ci_low, ci_high }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

/// Exact binomial confidence interval at level `1 - alpha`.
pub fn clopper_pearson(hits: u64, samples: u64, alpha: f64) -> (f64, f64) {
    let (k, n) = (hits as f64, samples as f64);
    let low = if hits == 0 { 0.0 } else { beta_quantile(k, n - k + 1.0, alpha / 2.0) };
    let high = if hits == samples { 1.0 } else { beta_quantile(k + 1.0, n - k, 1.0 - alpha / 2.0) };
    (low, high)
}

/// Beta quantile by bisection on the regularized incomplete beta function.
fn beta_quantile(a: f64, b: f64, q: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(a, b, mid) < q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Fraction of seeded generator runs that return `phi` (as a clause set).
pub fn monte_carlo_frequency(
    phi: &Formula,
    gp: &GenParams,
    samples: u64,
    master_seed: u64,
) -> Result<FrequencyEstimate, OracleError> {
    if samples == 0 {
        return Err(OracleError::NoSamples);
    }
    gp.validate()?;
    let hits = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut g = Generator::with_seed(gp, derive_seed(master_seed, 0, i));
            g.generate_formula().map(|f| u64::from(f.same_clause_set(phi)))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(FrequencyEstimate::new(hits, samples))
}

/// Counts of clauses returned by `samples` independent clause draws.
pub fn sample_clause_counts(
    gp: &GenParams,
    remaining: usize,
    nesting: usize,
    samples: u64,
    master_seed: u64,
) -> Result<HashMap<Clause, u64>, OracleError> {
    gp.validate()?;
    const CHUNK: u64 = 10_000;
    let chunks = samples.div_ceil(CHUNK);
    let maps = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut g = Generator::with_seed(gp, derive_seed(master_seed, 1, chunk));
            let n = CHUNK.min(samples - chunk * CHUNK);
            let mut counts: HashMap<Clause, u64> = HashMap::new();
            for _ in 0..n {
                *counts.entry(g.rnd_clause(remaining, nesting)?).or_default() += 1;
            }
            Ok::<_, OracleError>(counts)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut total: HashMap<Clause, u64> = HashMap::new();
    for m in maps {
        for (c, n) in m {
            *total.entry(c).or_default() += n;
        }
    }
    Ok(total)
}

/// Decimal approximation of an exact probability.
pub fn to_f64(p: &BigRational) -> f64 {
    p.to_f64().unwrap_or(f64::NAN)
}
