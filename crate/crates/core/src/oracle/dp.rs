use num_bigint::BigUint;
use num_traits::Zero;

use super::{check_prefix, check_states, enumerate, memory_estimate, step_bounds, ScoreDistribution};
use crate::error::Result;
use crate::limits;
use crate::litt::{GameSpec, Word};

/// Exact law of the net score after `n` letters.
pub fn exact_distribution(spec: &GameSpec, n: u64) -> Result<ScoreDistribution> {
    exact_distribution_with_prefix(spec, n, &[])
}

/// Exact law over sequences whose first letters are `prefix`.
///
/// State: the last `l - 1` letters. Each appended letter closes one
/// `l`-window and adds its score.
pub fn exact_distribution_with_prefix(spec: &GameSpec, n: u64, prefix: &[u8]) -> Result<ScoreDistribution> {
    check_states(spec)?;
    check_prefix(spec, n, prefix)?;
    if (n as usize) < spec.ell() {
        return enumerate(spec, n, prefix);
    }
    let mut last = None;
    run(spec, n, prefix, |h, layer, lo| {
        if h == n {
            last = Some(collapse(spec, h, prefix, layer, lo));
        }
    })?;
    Ok(last.expect("final horizon visited"))
}

/// Exact laws for every horizon `1..=n` from a single pass.
pub fn exact_distributions_upto(spec: &GameSpec, n: u64) -> Result<Vec<ScoreDistribution>> {
    check_states(spec)?;
    let short = (n as usize).min(spec.ell() - 1) as u64;
    let mut out = (1..=short).map(|h| enumerate(spec, h, &[])).collect::<Result<Vec<_>>>()?;
    if (n as usize) >= spec.ell() {
        run(spec, n, &[], |h, layer, lo| out.push(collapse(spec, h, &[], layer, lo)))?;
    }
    Ok(out)
}

fn collapse(spec: &GameSpec, n: u64, prefix: &[u8], layer: &[Vec<BigUint>], lo: i64) -> ScoreDistribution {
    let mut counts = vec![BigUint::zero(); layer[0].len()];
    for row in layer {
        for (acc, c) in counts.iter_mut().zip(row) {
            *acc += c;
        }
    }
    ScoreDistribution::new(n, spec.q(), n - prefix.len() as u64, lo, counts)
}

/// Runs the recursion to `n` letters, calling `visit(horizon, layer, lo)`
/// after each of the horizons `l..=n`.
fn run(spec: &GameSpec, n: u64, prefix: &[u8], mut visit: impl FnMut(u64, &[Vec<BigUint>], i64)) -> Result<()> {
    let ell = spec.ell();
    let q = spec.q() as usize;
    let states = q.pow(ell as u32 - 1);
    limits::check_resources(memory_estimate(spec, n, states as u128), limits::resource_cap())?;

    let window_score: Vec<i64> = Word::all(spec.q(), ell).map(|w| spec.window_score(w.letters())).collect();
    let (step_lo, step_hi) = step_bounds(spec);

    // seed: every admissible first l-1 letters with the score of the words
    // lying entirely inside them
    let heads: Vec<(usize, i64)> = Word::all(spec.q(), ell - 1)
        .filter(|w| w.letters().iter().zip(prefix).all(|(a, b)| a == b))
        .map(|w| (w.index(), spec.sequence_score(w.letters())))
        .collect();
    let mut lo = heads.iter().map(|h| h.1).min().unwrap_or(0);
    let hi0 = heads.iter().map(|h| h.1).max().unwrap_or(0);
    let mut width = (hi0 - lo + 1) as usize;
    let mut layer = vec![vec![BigUint::zero(); width]; states];
    for &(s, score) in &heads {
        layer[s][(score - lo) as usize] += 1u32;
    }

    let span = (step_hi - step_lo) as usize;
    for pos in ell - 1..n as usize {
        let letters: Vec<usize> = match prefix.get(pos) {
            Some(&x) => vec![x as usize],
            None => (0..q).collect(),
        };
        let next_width = width + span;
        let mut next = vec![vec![BigUint::zero(); next_width]; states];
        for (s, row) in layer.iter().enumerate() {
            if row.iter().all(Zero::is_zero) {
                continue;
            }
            for &x in &letters {
                let window = s * q + x;
                let shift = (window_score[window] - step_lo) as usize;
                let dest = &mut next[window % states];
                for (i, c) in row.iter().enumerate() {
                    if !c.is_zero() {
                        dest[i + shift] += c;
                    }
                }
            }
        }
        layer = next;
        width = next_width;
        lo += step_lo;
        visit(pos as u64 + 1, &layer, lo);
    }
    Ok(())
}
