use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::check_states;
use crate::error::{Error, Result};
use crate::litt::{GameSpec, Word};

/// Generator recorded in simulation output.
pub const RNG_ID: &str = "chacha8";

/// Fixed shard count; shard `s` draws from stream `s` of the seeded
/// generator, so results do not depend on the thread count.
pub const SHARDS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimulationConfig {
    pub reps: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationResult {
    pub reps: u64,
    pub seed: u64,
    pub rng: &'static str,
    pub shards: u64,
    pub wins: u64,
    pub losses: u64,
    pub ties: u64,
    pub p_win: f64,
    pub p_lose: f64,
    pub p_tie: f64,
    pub se_win: f64,
    pub se_lose: f64,
    pub se_tie: f64,
}

struct Scorer<'a> {
    spec: &'a GameSpec,
    q: u32,
    ell: usize,
    modulus: usize,
    /// `g(U)` per window.
    g: Vec<i64>,
    /// `g(U) + h(U)` for the first window.
    first: Vec<i64>,
}

impl<'a> Scorer<'a> {
    fn new(spec: &'a GameSpec) -> Self {
        let words: Vec<Word> = Word::all(spec.q(), spec.ell()).collect();
        let g: Vec<i64> = words.iter().map(|w| spec.window_score(w.letters())).collect();
        let first = words.iter().zip(&g).map(|(w, gw)| gw + spec.early_score(w.letters())).collect();
        Scorer { spec, q: spec.q(), ell: spec.ell(), modulus: words.len(), g, first }
    }

    fn run(&self, rng: &mut ChaCha8Rng, n: usize, buf: &mut Vec<u8>) -> i64 {
        if n < self.ell {
            buf.clear();
            buf.extend((0..n).map(|_| rng.gen_range(0..self.q) as u8));
            return self.spec.sequence_score(buf);
        }
        let q = self.q as usize;
        let mut bits = Bits::default();
        let mut draw = |rng: &mut ChaCha8Rng| if q == 2 { bits.next(rng) } else { rng.gen_range(0..q) };
        let mut window = 0usize;
        for _ in 0..self.ell {
            window = window * q + draw(rng);
        }
        let mut score = self.first[window];
        for _ in self.ell..n {
            window = (window * q + draw(rng)) % self.modulus;
            score += self.g[window];
        }
        score
    }
}

/// One letter per bit of a 64-bit draw.
#[derive(Default)]
struct Bits {
    word: u64,
    left: u32,
}

impl Bits {
    fn next(&mut self, rng: &mut ChaCha8Rng) -> usize {
        if self.left == 0 {
            self.word = rng.next_u64();
            self.left = 64;
        }
        let bit = (self.word & 1) as usize;
        self.word >>= 1;
        self.left -= 1;
        bit
    }
}

/// Monte Carlo estimate of `(P(S > 0), P(S < 0), P(S = 0))` after `n`
/// letters; identical for identical `(spec, n, config)`.
pub fn simulate(spec: &GameSpec, n: u64, config: SimulationConfig) -> Result<SimulationResult> {
    if config.reps == 0 {
        return Err(Error::InvalidGame("simulation needs at least one repetition".into()));
    }
    check_states(spec)?;
    let scorer = Scorer::new(spec);
    let tallies: Vec<[u64; 3]> = (0..SHARDS)
        .into_par_iter()
        .map(|shard| {
            let reps = config.reps / SHARDS + u64::from(shard < config.reps % SHARDS);
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(shard);
            let mut buf = Vec::new();
            let mut t = [0u64; 3];
            for _ in 0..reps {
                match scorer.run(&mut rng, n as usize, &mut buf).signum() {
                    1 => t[0] += 1,
                    -1 => t[1] += 1,
                    _ => t[2] += 1,
                }
            }
            t
        })
        .collect();
    let [wins, losses, ties] = tallies.iter().fold([0u64; 3], |a, t| [a[0] + t[0], a[1] + t[1], a[2] + t[2]]);
    let reps = config.reps as f64;
    let p = |k: u64| k as f64 / reps;
    let se = |k: u64| (p(k) * (1.0 - p(k)) / reps).sqrt();
    Ok(SimulationResult {
        reps: config.reps,
        seed: config.seed,
        rng: RNG_ID,
        shards: SHARDS,
        wins,
        losses,
        ties,
        p_win: p(wins),
        p_lose: p(losses),
        p_tie: p(ties),
        se_win: se(wins),
        se_lose: se(losses),
        se_tie: se(ties),
    })
}
