//! Named chains used by the tests, the acceptance suite and the CLI demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::ChainSpec;
use crate::linalg::RationalMatrix;
use crate::rational::{frac, int, Rational};

/// Fair coin as a two-state chain with every transition `1/2`.
pub fn coin_chain(g: Vec<i64>) -> ChainSpec {
    let half = frac(1, 2);
    let p = RationalMatrix::from_rows(vec![vec![half.clone(), half.clone()], vec![half.clone(), half]]);
    ChainSpec::with_state_scores(vec!["H".into(), "T".into()], p, g).expect("valid coin chain")
}

/// Four-state chain with a parity obstruction: `g = (1, -1, 0, 0)` on
/// states `a, b, c, d`.
pub fn e4_chain() -> ChainSpec {
    let z = int(0);
    let p = RationalMatrix::from_rows(vec![
        vec![frac(9, 20), frac(9, 20), frac(1, 10), z.clone()],
        vec![frac(9, 20), frac(9, 20), frac(1, 10), z.clone()],
        vec![z.clone(), z.clone(), z.clone(), int(1)],
        vec![frac(1, 2), frac(1, 2), z.clone(), z],
    ]);
    let states = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
    ChainSpec::with_state_scores(states, p, vec![1, -1, 0, 0]).expect("valid E4 chain")
}

/// Seeded irreducible, aperiodic chain with small-denominator entries and
/// scores in `-2..=2`.
pub fn random_chain(seed: u64, m: usize) -> ChainSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(m);
    for i in 0..m {
        let mut weights: Vec<i64> = (0..m).map(|_| if rng.gen_bool(0.5) { rng.gen_range(1..5) } else { 0 }).collect();
        weights[(i + 1) % m] += 1;
        if i == 0 {
            weights[0] += 1;
        }
        let total: i64 = weights.iter().sum();
        rows.push(weights.into_iter().map(|w| frac(w, total)).collect::<Vec<Rational>>());
    }
    let g = (0..m).map(|_| rng.gen_range(-2..=2)).collect();
    ChainSpec::from_matrix(RationalMatrix::from_rows(rows), g).expect("valid random chain")
}
