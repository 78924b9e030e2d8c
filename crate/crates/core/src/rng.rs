//! Deterministic SplitMix64 stream.

use num_integer::Integer;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One SplitMix64 step applied to `state ^ value`.
#[inline]
fn absorb(state: u64, value: u64) -> u64 {
    mix((state ^ value).wrapping_add(GAMMA))
}

/// Per-formula seed for sample `sample` of campaign point `point`.
pub fn derive_seed(master: u64, point: u64, sample: u64) -> u64 {
    absorb(absorb(absorb(0, master), point), sample)
}

/// Index whose cumulative-weight interval contains `x`.
pub fn select_weighted(weights: &[u64], mut x: u64) -> usize {
    for (i, &w) in weights.iter().enumerate() {
        if x < w {
            return i;
        }
        x -= w;
    }
    panic!("draw beyond total weight")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomStream {
    state: u64,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        RandomStream { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix(self.state)
    }

    /// Uniform integer in `[0, n)`. Draws below `2^64 mod n` are rejected so
    /// every residue has the same number of preimages.
    pub fn uniform_below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "uniform_below(0)");
        let threshold = n.wrapping_neg() % n;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % n;
            }
        }
    }

    /// Index `i` with probability `weights[i] / sum(weights)` from one
    /// `uniform_below` draw. Weights are reduced by their gcd first, so
    /// proportional weight lists consume the stream identically.
    pub fn weighted_index(&mut self, weights: &[u64]) -> usize {
        let g = weights.iter().fold(0u64, |g, &w| g.gcd(&w));
        assert!(g > 0, "all weights zero");
        let total: u64 = weights.iter().map(|w| w / g).sum();
        select_weighted(weights, self.uniform_below(total) * g)
    }

    /// Fair coin; `true` means the literal is negated (draw 1).
    pub fn negated(&mut self) -> bool {
        self.uniform_below(2) == 1
    }
}
