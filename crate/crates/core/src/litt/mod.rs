//! Litt's coin-flip games: each word scores its weight whenever it appears
//! as a window of a uniform random letter sequence.
//!
//! The classic game is two words of equal length `l` with weights `+1`
//! (Alice) and `-1` (Bob). Its statistics are carried by the `l`-gram
//! chain `W_k = xi_k .. xi_{k+l-1}`, whose group inverse is explicit in
//! terms of the overlap indices `theta_UV`.

mod multiword;
mod word;

use std::f64::consts::PI;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::chain::ChainSpec;
use crate::cumulants::cumulants_state_score;
use crate::edgeworth::{zero_mean_triple, EdgeworthInput};
use crate::error::{Error, Result};
use crate::limits::{self, RATIONAL_ENTRY_BYTES, STATE_CAP};
use crate::linalg::RationalMatrix;
use crate::rational::{self, Rational};

pub use multiword::{multiword_analysis, MultiwordReport, WordWeight};
pub use word::{Word, MAX_Q};

/// Chains up to this many states are also run through the generic
/// cumulant route when computing game constants.
pub const CROSS_CHECK_STATES: u128 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    q: u32,
    words: Vec<(Word, i64)>,
    ell: usize,
}

impl GameSpec {
    pub fn new(q: u32, words: Vec<(Word, i64)>) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::InvalidGame(format!("alphabet size {q} outside 2..={MAX_Q}")));
        }
        if words.is_empty() {
            return Err(Error::InvalidGame("at least one word is required".into()));
        }
        if let Some((w, _)) = words.iter().find(|(w, _)| w.q() != q) {
            return Err(Error::InvalidGame(format!("word {w} is over an alphabet of size {}, not {q}", w.q())));
        }
        let ell = words.iter().map(|(w, _)| w.len()).max().expect("nonempty");
        Ok(GameSpec { q, words, ell })
    }

    /// Alice holds `a` (+1), Bob holds `b` (-1).
    pub fn classic(a: Word, b: Word) -> Result<Self> {
        let spec = Self::new(a.q(), vec![(a, 1), (b, -1)])?;
        spec.classic_pair()?;
        Ok(spec)
    }

    pub fn parse_classic(q: u32, a: &str, b: &str) -> Result<Self> {
        let (a, b) = (Word::parse(q, a)?, Word::parse(q, b)?);
        if a.len() != b.len() {
            return Err(Error::LengthMismatch(a.len(), b.len()));
        }
        if a == b {
            return Err(Error::InvalidGame(format!("words must differ (both {a})")));
        }
        Self::classic(a, b)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn words(&self) -> &[(Word, i64)] {
        &self.words
    }

    pub fn classic_pair(&self) -> Result<(&Word, &Word)> {
        match self.words.as_slice() {
            [(a, 1), (b, -1)] if a.len() == b.len() && a != b => Ok((a, b)),
            _ => Err(Error::NotClassic),
        }
    }

    pub fn is_classic(&self) -> bool {
        self.classic_pair().is_ok()
    }

    /// Sum of weights of words that end the letter slice.
    pub fn suffix_score(&self, letters: &[u8]) -> i64 {
        self.words.iter().filter(|(w, _)| letters.ends_with(w.letters())).map(|(_, v)| v).sum()
    }

    /// `g(U)` for an `l`-letter window.
    pub fn window_score(&self, window: &[u8]) -> i64 {
        self.suffix_score(window)
    }

    /// Occurrences of words ending strictly inside the first window, i.e.
    /// at letter positions `1..l-1`.
    pub fn early_score(&self, window: &[u8]) -> i64 {
        (1..self.ell.min(window.len() + 1)).map(|k| self.suffix_score(&window[..k])).sum()
    }

    /// Net score of a whole letter sequence, by direct search.
    pub fn sequence_score(&self, letters: &[u8]) -> i64 {
        (1..=letters.len()).map(|e| self.suffix_score(&letters[..e])).sum()
    }

    /// Swaps the two players of a classic game.
    pub fn swapped(&self) -> Result<Self> {
        let (a, b) = self.classic_pair()?;
        Self::classic(b.clone(), a.clone())
    }

    pub fn relabel(&self, perm: &[u8]) -> Self {
        let words = self.words.iter().map(|(w, v)| (w.relabel(perm), *v)).collect();
        GameSpec { q: self.q, words, ell: self.ell }
    }

    pub fn describe(&self) -> String {
        self.words.iter().map(|(w, v)| format!("{w}:{v:+}")).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapData {
    /// Lengths `k` in `1..l` with `suffix_k(U) = prefix_k(V)`.
    pub theta_set: Vec<usize>,
    /// `sum_{k in theta_set} q^{k-l}`.
    #[serde(with = "rational::as_string")]
    pub theta: Rational,
}

pub fn overlap(u: &Word, v: &Word) -> Result<OverlapData> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    if u.q() != v.q() {
        return Err(Error::InvalidGame(format!("alphabets differ ({} vs {})", u.q(), v.q())));
    }
    let ell = u.len();
    let theta_set: Vec<usize> = (1..ell).filter(|&k| u.letters()[ell - k..] == v.letters()[..k]).collect();
    let q = rational::int(i64::from(u.q()));
    let theta = theta_set.iter().map(|&k| Rational::one() / num_traits::pow(q.clone(), ell - k)).sum();
    Ok(OverlapData { theta_set, theta })
}

pub fn theta(u: &Word, v: &Word) -> Result<Rational> {
    overlap(u, v).map(|o| o.theta)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaTable {
    #[serde(with = "rational::as_string")]
    pub aa: Rational,
    #[serde(with = "rational::as_string")]
    pub ab: Rational,
    #[serde(with = "rational::as_string")]
    pub ba: Rational,
    #[serde(with = "rational::as_string")]
    pub bb: Rational,
}

impl ThetaTable {
    pub fn new(a: &Word, b: &Word) -> Result<Self> {
        Ok(ThetaTable { aa: theta(a, a)?, ab: theta(a, b)?, ba: theta(b, a)?, bb: theta(b, b)? })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameConstants {
    pub thetas: ThetaTable,
    #[serde(with = "rational::as_string")]
    pub sigma2: Rational,
    #[serde(with = "rational::as_string")]
    pub kappa3: Rational,
    /// Whether the generic chain route was also run and agreed.
    pub cross_checked: bool,
}

/// `sigma^2 = 2 q^{-l} (1 + theta_AA - theta_AB - theta_BA + theta_BB)`,
/// `kappa_3 = 3 sigma^2 (theta_AA - theta_BB)`.
pub fn game_constants(spec: &GameSpec) -> Result<GameConstants> {
    let (a, b) = spec.classic_pair()?;
    let thetas = ThetaTable::new(a, b)?;
    let q_ell = num_traits::pow(rational::int(i64::from(spec.q)), spec.ell);
    let sigma2 = rational::int(2) / q_ell * (Rational::one() + &thetas.aa - &thetas.ab - &thetas.ba + &thetas.bb);
    let kappa3 = rational::int(3) * &sigma2 * (&thetas.aa - &thetas.bb);

    let cross_checked = limits::state_count(spec.q, spec.ell) <= CROSS_CHECK_STATES;
    if cross_checked {
        let t = cumulants_state_score(&build_chain(spec)?)?;
        if !t.mu.is_zero() || t.sigma2 != sigma2 || t.kappa3 != kappa3 {
            return Err(Error::Inconsistent(format!(
                "overlap constants ({sigma2}, {kappa3}) differ from chain cumulants ({}, {})",
                t.sigma2, t.kappa3
            )));
        }
    }
    Ok(GameConstants { thetas, sigma2, kappa3, cross_checked })
}

/// The `q^l`-state chain of `l`-letter windows with `g(U)` the summed
/// weight of the words ending `U`.
pub fn build_chain(spec: &GameSpec) -> Result<ChainSpec> {
    build_chain_with_cap(spec, STATE_CAP)
}

pub fn build_chain_with_cap(spec: &GameSpec, cap: u64) -> Result<ChainSpec> {
    let states = limits::state_count(spec.q, spec.ell);
    if states > u128::from(cap) {
        return Err(Error::AlphabetTooLarge { states, cap });
    }
    limits::check_resources(states * states * RATIONAL_ENTRY_BYTES, limits::resource_cap())?;
    let m = states as usize;
    let q = spec.q as usize;
    let step = rational::frac(1, i64::from(spec.q));
    let mut p = RationalMatrix::zeros(m, m);
    for u in 0..m {
        let tail = (u * q) % m;
        for x in 0..q {
            p[(u, tail + x)] = step.clone();
        }
    }
    let words: Vec<Word> = Word::all(spec.q, spec.ell).collect();
    let g = words.iter().map(|w| spec.window_score(w.letters())).collect();
    ChainSpec::with_state_scores(words.iter().map(Word::to_string).collect(), p, g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExceptionTag {
    None,
    GapDegenerate,
    SingleLetter,
    ComplementPair,
}

impl ExceptionTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ExceptionTag::None => "none",
            ExceptionTag::GapDegenerate => "gap_degenerate",
            ExceptionTag::SingleLetter => "single_letter",
            ExceptionTag::ComplementPair => "complement_pair",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionClass {
    pub tag: ExceptionTag,
    /// Which variant of the pattern matched.
    pub detail: Option<String>,
}

impl ExceptionClass {
    pub fn none() -> Self {
        ExceptionClass { tag: ExceptionTag::None, detail: None }
    }

    pub fn is_exceptional(&self) -> bool {
        self.tag != ExceptionTag::None
    }
}

/// Exceptional classic pairs; only `q = 2` has any.
pub fn classify_exceptions(spec: &GameSpec) -> Result<ExceptionClass> {
    let (a, b) = spec.classic_pair()?;
    if spec.q != 2 {
        return Ok(ExceptionClass::none());
    }
    let ell = spec.ell;
    if ell == 1 {
        return Ok(ExceptionClass { tag: ExceptionTag::SingleLetter, detail: Some(format!("A = {a}, B = {b}")) });
    }
    for (x, y) in [(0u8, 1u8), (1, 0)] {
        let name = |v: u8| Word::render_letter(2, v);
        let gap_left: Vec<u8> = std::iter::once(x).chain(std::iter::repeat(y).take(ell - 1)).collect();
        let gap_right: Vec<u8> = std::iter::repeat(y).take(ell - 1).chain(std::iter::once(x)).collect();
        let pattern = format!("x y^{} and y^{} x with x = {}, y = {}", ell - 1, ell - 1, name(x), name(y));
        if a.letters() == gap_left && b.letters() == gap_right {
            return Ok(ExceptionClass { tag: ExceptionTag::GapDegenerate, detail: Some(format!("A, B = {pattern}")) });
        }
        if b.letters() == gap_left && a.letters() == gap_right {
            return Ok(ExceptionClass { tag: ExceptionTag::GapDegenerate, detail: Some(format!("B, A = {pattern}")) });
        }
        if ell == 2 && a.letters() == [x, x] && b.letters() == [y, y] {
            return Ok(ExceptionClass {
                tag: ExceptionTag::ComplementPair,
                detail: Some(format!("A = {}{}, B = {}{}", name(x), name(x), name(y), name(y))),
            });
        }
    }
    Ok(ExceptionClass::none())
}

/// `n^{-1/2}` coefficients, each `numerator / sqrt(2 pi sigma^2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coefficients {
    #[serde(with = "rational::as_string")]
    pub alice_numerator: Rational,
    #[serde(with = "rational::as_string")]
    pub bob_numerator: Rational,
    #[serde(with = "rational::as_string")]
    pub tie_numerator: Rational,
    pub alice: f64,
    pub bob: f64,
    pub tie: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GamePrediction {
    /// Letters tossed.
    pub n: u64,
    /// Scoring windows, `n - l + 1`.
    pub effective_n: u64,
    pub constants: GameConstants,
    pub coefficients: Coefficients,
    pub p_alice: f64,
    pub p_bob: f64,
    pub p_tie: f64,
    pub clamped: bool,
    pub asymptotic_regime: bool,
}

pub fn predict(spec: &GameSpec, n: u64) -> Result<GamePrediction> {
    let class = classify_exceptions(spec)?;
    if class.is_exceptional() {
        return Err(Error::ExceptionalPair(class));
    }
    if n < spec.ell as u64 {
        return Err(Error::HorizonTooShort { n, ell: spec.ell });
    }
    let constants = game_constants(spec)?;
    let t = &constants.thetas;
    let half = rational::frac(1, 2);
    let alice_numerator = (&t.bb - &t.aa - Rational::one()) * &half;
    let bob_numerator = (&t.aa - &t.bb - Rational::one()) * &half;
    let tie_numerator = Rational::one();
    let sigma2 = rational::to_f64(&constants.sigma2);
    let root = (2.0 * PI * sigma2).sqrt();
    let coefficients = Coefficients {
        alice: rational::to_f64(&alice_numerator) / root,
        bob: rational::to_f64(&bob_numerator) / root,
        tie: 1.0 / root,
        alice_numerator,
        bob_numerator,
        tie_numerator,
    };

    let effective_n = n - spec.ell as u64 + 1;
    let input = EdgeworthInput::new(effective_n, 0.0, sigma2, rational::to_f64(&constants.kappa3))?;
    let triple = zero_mean_triple(&input)?;
    if !triple.clamped {
        let s = (effective_n as f64).sqrt();
        let closed = [0.5 + coefficients.alice / s, 0.5 + coefficients.bob / s, coefficients.tie / s];
        let got = [triple.p_above, triple.p_below, triple.p_zero];
        if closed.iter().zip(&got).any(|(c, g)| (c - g).abs() > 1e-12) {
            return Err(Error::Inconsistent(format!("closed form {closed:?} vs expansion {got:?}")));
        }
    }
    Ok(GamePrediction {
        n,
        effective_n,
        constants,
        coefficients,
        p_alice: triple.p_above,
        p_bob: triple.p_below,
        p_tie: triple.p_zero,
        clamped: triple.clamped,
        asymptotic_regime: input.asymptotic_regime(),
    })
}
