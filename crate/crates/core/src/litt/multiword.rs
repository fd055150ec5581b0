use serde::Serialize;

use super::{build_chain, GameSpec, Word};
use crate::aperiodicity::{check_em4, Em4Certificate, Verdict};
use crate::cumulants::{cumulants_state_score, CumulantReport};
use crate::edgeworth::{outcome_triple, EdgeworthInput, OutcomeTriple};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WordWeight {
    pub word: Word,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiwordReport {
    pub q: u32,
    pub words: Vec<WordWeight>,
    pub ell: usize,
    pub n: u64,
    pub effective_n: u64,
    pub em4: Em4Certificate,
    /// Reported whatever the lattice verdict.
    pub cumulants: Option<CumulantReport>,
    /// Mean score of occurrences ending inside the first window.
    pub delta: Option<String>,
    pub delta_f64: Option<f64>,
    /// `p_above`: total score > 0, `p_below`: < 0.
    pub prediction: Option<OutcomeTriple>,
    pub asymptotic_regime: bool,
}

/// Expected early-window score under the uniform first window.
pub fn early_delta(spec: &GameSpec) -> Rational {
    let total: i64 = Word::all(spec.q, spec.ell).map(|w| spec.early_score(w.letters())).sum();
    rational::int(total) / num_traits::pow(rational::int(i64::from(spec.q)), spec.ell)
}

/// Weighted multi-word game: lattice verdict, cumulants, and the expansion
/// for `P(total > 0)`, `P(total = 0)`, `P(total < 0)` when it applies.
pub fn multiword_analysis(spec: &GameSpec, n: u64) -> Result<MultiwordReport> {
    if n < spec.ell as u64 {
        return Err(Error::HorizonTooShort { n, ell: spec.ell });
    }
    let chain = build_chain(spec)?;
    let em4 = check_em4(&chain)?;
    let effective_n = n - spec.ell as u64 + 1;
    let mut report = MultiwordReport {
        q: spec.q,
        words: spec.words.iter().map(|(w, v)| WordWeight { word: w.clone(), weight: *v }).collect(),
        ell: spec.ell,
        n,
        effective_n,
        em4,
        cumulants: None,
        delta: None,
        delta_f64: None,
        prediction: None,
        asymptotic_regime: false,
    };
    let triple = cumulants_state_score(&chain)?;
    let delta = early_delta(spec);
    report.cumulants = Some(triple.report());
    report.delta_f64 = Some(rational::to_f64(&delta));
    report.delta = Some(rational::render(&delta));
    if report.em4.verdict != Verdict::Holds {
        return Ok(report);
    }
    let input = EdgeworthInput::new(effective_n, triple.mu_f64(), triple.sigma2_f64(), triple.kappa3_f64())?
        .with_delta(rational::to_f64(&delta));
    report.prediction = Some(outcome_triple(&input)?);
    report.asymptotic_regime = input.asymptotic_regime();
    Ok(report)
}
