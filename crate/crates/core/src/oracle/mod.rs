//! Ground truth for the asymptotic formulas.
//!
//! Two independent exact routes count letter sequences by net score with
//! big integers: a dynamic program over the last `l - 1` letters, and
//! powers of the transfer matrix `P(z)` over Laurent polynomials. A
//! seeded Monte Carlo simulator provides a third, statistical, check.

mod dp;
mod simulate;
mod transfer;

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::{self, STATE_CAP};
use crate::litt::GameSpec;
use crate::rational::{self, Rational};

pub use dp::{exact_distribution, exact_distribution_with_prefix, exact_distributions_upto};
pub use simulate::{simulate, SimulationConfig, SimulationResult, RNG_ID, SHARDS};
pub use transfer::{transfer_distribution, transfer_distribution_with_prefix};

/// Counts of letter sequences by net score. Sequences are the `q^free`
/// completions of a fixed prefix (`free = n` without one).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreDistribution {
    n: u64,
    q: u32,
    free_letters: u64,
    offset: i64,
    counts: Vec<BigUint>,
}

impl ScoreDistribution {
    /// Trims zero counts at both ends so equal laws compare equal.
    pub fn new(n: u64, q: u32, free_letters: u64, offset: i64, mut counts: Vec<BigUint>) -> Self {
        let lead = counts.iter().take_while(|c| c.is_zero()).count();
        if lead == counts.len() {
            return ScoreDistribution { n, q, free_letters, offset: 0, counts: Vec::new() };
        }
        counts.drain(..lead);
        while counts.last().is_some_and(Zero::is_zero) {
            counts.pop();
        }
        ScoreDistribution { n, q, free_letters, offset: offset + lead as i64, counts }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Lowest score with a nonzero count.
    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count_at(&self, score: i64) -> BigUint {
        usize::try_from(score - self.offset).ok().and_then(|i| self.counts.get(i)).cloned().unwrap_or_default()
    }

    /// `q^free`.
    pub fn denominator(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.q), self.free_letters as usize)
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigUint)> {
        self.counts.iter().enumerate().map(move |(i, c)| (self.offset + i as i64, c))
    }

    pub fn probability_at(&self, score: i64) -> Rational {
        Rational::new(self.count_at(score).into(), self.denominator().into())
    }

    /// Exact `E[(S - c)^k]` about `c`.
    fn moment_about(&self, c: &Rational, k: usize) -> Rational {
        let den = Rational::from_integer(self.denominator().into());
        let sum: Rational = self
            .iter()
            .map(|(s, count)| num_traits::pow(rational::int(s) - c, k) * Rational::from_integer(count.clone().into()))
            .sum();
        sum / den
    }

    pub fn mean(&self) -> Rational {
        self.moment_about(&rational::zero(), 1)
    }

    pub fn variance(&self) -> Rational {
        self.moment_about(&self.mean(), 2)
    }

    pub fn third_central_moment(&self) -> Rational {
        self.moment_about(&self.mean(), 3)
    }

    /// Sequences with score `> 0`, `< 0`, `= 0`.
    pub fn outcome_counts(&self) -> OutcomeCounts {
        let mut out = OutcomeCounts::default();
        for (s, c) in self.iter() {
            match s.signum() {
                1 => out.win += c,
                -1 => out.lose += c,
                _ => out.tie += c,
            }
        }
        out
    }

    /// `score,count` lines with a header; counts in decimal.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("score,count\n");
        for (s, c) in self.iter() {
            writeln!(out, "{s},{c}").expect("write to string");
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OutcomeCounts {
    pub win: BigUint,
    pub lose: BigUint,
    pub tie: BigUint,
}

/// Exact `(P(S > 0), P(S < 0), P(S = 0))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactTriple {
    #[serde(with = "rational::as_string")]
    pub win: Rational,
    #[serde(with = "rational::as_string")]
    pub lose: Rational,
    #[serde(with = "rational::as_string")]
    pub tie: Rational,
}

impl ExactTriple {
    pub fn to_f64(&self) -> [f64; 3] {
        [rational::to_f64(&self.win), rational::to_f64(&self.lose), rational::to_f64(&self.tie)]
    }
}

pub fn outcome_probabilities(dist: &ScoreDistribution) -> ExactTriple {
    let c = dist.outcome_counts();
    let den: num_bigint::BigInt = dist.denominator().into();
    let r = |x: BigUint| Rational::new(x.into(), den.clone());
    ExactTriple { win: r(c.win), lose: r(c.lose), tie: r(c.tie) }
}

fn check_prefix(spec: &GameSpec, n: u64, prefix: &[u8]) -> Result<()> {
    if prefix.len() as u64 > n {
        return Err(Error::InvalidGame(format!("prefix of {} letters exceeds n = {n}", prefix.len())));
    }
    if let Some(&x) = prefix.iter().find(|&&x| u32::from(x) >= spec.q()) {
        return Err(Error::InvalidWord { word: format!("letter {x}"), q: spec.q() });
    }
    Ok(())
}

fn check_states(spec: &GameSpec) -> Result<()> {
    let states = limits::state_count(spec.q(), spec.ell());
    if states > u128::from(STATE_CAP) {
        return Err(Error::AlphabetTooLarge { states, cap: STATE_CAP });
    }
    Ok(())
}

/// Working-set estimate: two layers of `states x range` big integers of
/// `n log2 q` bits, plus per-integer overhead.
pub fn memory_estimate(spec: &GameSpec, n: u64, states: u128) -> u128 {
    let (lo, hi) = step_bounds(spec);
    let range = u128::from(n) * (hi - lo) as u128 + 2 * spec.ell() as u128 * max_abs_weight(spec) as u128 + 1;
    let bits = (u128::from(n) * u128::from(32 - (spec.q() - 1).leading_zeros())).max(64);
    2 * states * range * (bits / 8 + 32)
}

fn max_abs_weight(spec: &GameSpec) -> i64 {
    spec.words().iter().map(|(_, v)| v.abs()).sum()
}

/// Per-window score bounds `(min g, max g)`, always containing zero.
fn step_bounds(spec: &GameSpec) -> (i64, i64) {
    let lo = spec.words().iter().map(|(_, v)| (*v).min(0)).sum::<i64>();
    let hi = spec.words().iter().map(|(_, v)| (*v).max(0)).sum::<i64>();
    (lo, hi)
}

/// Direct enumeration of all completions of `prefix` to `n` letters.
fn enumerate(spec: &GameSpec, n: u64, prefix: &[u8]) -> Result<ScoreDistribution> {
    let free = n as usize - prefix.len();
    let q = spec.q() as usize;
    let total = limits::state_count(spec.q(), free);
    limits::check_resources(total.saturating_mul(n as u128), limits::resource_cap())?;
    let mut tally = std::collections::BTreeMap::<i64, u64>::new();
    let mut letters = prefix.to_vec();
    letters.resize(n as usize, 0);
    for idx in 0..total as usize {
        let mut rest = idx;
        for slot in letters[prefix.len()..].iter_mut().rev() {
            *slot = (rest % q) as u8;
            rest /= q;
        }
        *tally.entry(spec.sequence_score(&letters)).or_default() += 1;
    }
    let lo = tally.keys().next().copied().unwrap_or(0);
    let hi = tally.keys().last().copied().unwrap_or(0);
    let mut counts = vec![BigUint::zero(); (hi - lo + 1) as usize];
    for (s, c) in tally {
        counts[(s - lo) as usize] = BigUint::from(c);
    }
    Ok(ScoreDistribution::new(n, spec.q(), free as u64, lo, counts))
}

/// Count of sequences as a float probability, for quick reports.
pub fn to_probability_f64(count: &BigUint, dist: &ScoreDistribution) -> f64 {
    let r = Rational::new(count.clone().into(), dist.denominator().into());
    r.to_f64().unwrap_or(f64::NAN)
}
