use std::ops::AddAssign;

use num_bigint::BigUint;
use num_traits::Zero;

use super::{check_prefix, check_states, enumerate, memory_estimate, ScoreDistribution};
use crate::error::Result;
use crate::limits;
use crate::litt::{GameSpec, Word};

/// `sum_k c_k z^{low + k}` with nonnegative integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Laurent {
    low: i64,
    coeffs: Vec<BigUint>,
}

impl Laurent {
    fn monomial(exp: i64) -> Self {
        Laurent { low: exp, coeffs: vec![BigUint::from(1u32)] }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// `self += z^shift * other`.
    fn add_shifted(&mut self, other: &Laurent, shift: i64) {
        if other.is_zero() {
            return;
        }
        let low = other.low + shift;
        if self.is_zero() {
            self.low = low;
            self.coeffs = other.coeffs.clone();
            return;
        }
        if low < self.low {
            let pad = (self.low - low) as usize;
            self.coeffs.splice(0..0, std::iter::repeat(BigUint::zero()).take(pad));
            self.low = low;
        }
        let high = other.high() + shift;
        if high > self.high() {
            let len = (high - self.low + 1) as usize;
            self.coeffs.resize(len, BigUint::zero());
        }
        let start = (low - self.low) as usize;
        for (dst, src) in self.coeffs[start..].iter_mut().zip(&other.coeffs) {
            dst.add_assign(src);
        }
    }
}

/// Exact law from `pi_1(z)^T P(z)^{n-l} 1` over `l`-gram states.
pub fn transfer_distribution(spec: &GameSpec, n: u64) -> Result<ScoreDistribution> {
    transfer_distribution_with_prefix(spec, n, &[])
}

pub fn transfer_distribution_with_prefix(spec: &GameSpec, n: u64, prefix: &[u8]) -> Result<ScoreDistribution> {
    check_states(spec)?;
    check_prefix(spec, n, prefix)?;
    let ell = spec.ell();
    if (n as usize) < ell {
        return enumerate(spec, n, prefix);
    }
    let q = spec.q() as usize;
    let words: Vec<Word> = Word::all(spec.q(), ell).collect();
    let m = words.len();
    limits::check_resources(memory_estimate(spec, n, m as u128), limits::resource_cap())?;
    let g: Vec<i64> = words.iter().map(|w| spec.window_score(w.letters())).collect();

    // first window carries its own score plus occurrences ending inside it
    let mut v: Vec<Laurent> = words
        .iter()
        .zip(&g)
        .map(|(w, &gw)| {
            let fits = w.letters().iter().zip(prefix).all(|(a, b)| a == b);
            if fits {
                Laurent::monomial(gw + spec.early_score(w.letters()))
            } else {
                Laurent::default()
            }
        })
        .collect();

    let block = m / q;
    for pos in ell..n as usize {
        let forced = prefix.get(pos).map(|&x| x as usize);
        let mut next = vec![Laurent::default(); m];
        for (to, slot) in next.iter_mut().enumerate() {
            if forced.is_some_and(|x| to % q != x) {
                continue;
            }
            // predecessors: drop the last letter of `to`, prepend any letter
            let head = to / q;
            for y in 0..q {
                slot.add_shifted(&v[y * block + head], g[to]);
            }
        }
        v = next;
    }

    let mut total = Laurent::default();
    for p in &v {
        total.add_shifted(p, 0);
    }
    Ok(ScoreDistribution::new(n, spec.q(), n - prefix.len() as u64, total.low, total.coeffs))
}
