//! Machine-readable reports shared by the command-line tool and the C API.

use serde::Serialize;

use crate::aperiodicity::{
    check_em4, check_sigma2_zero, value_length_lattice, DegeneracyCertificate, Em4Certificate, LatticeReport,
};
use crate::chain::{ChainSpec, Score};
use crate::cumulants::{cumulants, CumulantReport};
use crate::error::{Error, Result};
use crate::limits::{self, STATE_CAP};
use crate::litt::{
    build_chain, classify_exceptions, game_constants, overlap, predict, ExceptionClass, GameConstants, GameSpec, Word,
};
use crate::markov::{
    expected_visits_before, group_inverse, passage_times_from, stationary_distribution, visits_via_passage_times,
};
use crate::oracle::{
    exact_distribution, exact_distributions_upto, outcome_probabilities, simulate, ExactTriple, SimulationConfig,
    SimulationResult, RNG_ID,
};
use crate::perturbation::{eigen_perturbation_cumulants, FloatTriple};
use crate::rational;

pub const SCHEMA_VERSION: u32 = 1;

/// Largest chain for which reports attach a lattice certificate.
pub const CERTIFICATE_STATES: u128 = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: Option<u64>,
    pub rng: Option<&'static str>,
    pub state_cap: u64,
    pub resource_cap_bytes: u128,
}

impl Provenance {
    pub fn new(seed: Option<u64>) -> Self {
        Provenance {
            tool: "litt",
            version: env!("CARGO_PKG_VERSION"),
            seed,
            rng: seed.map(|_| RNG_ID),
            state_cap: STATE_CAP,
            resource_cap_bytes: limits::resource_cap(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeInputs {
    pub q: u32,
    pub a: Word,
    pub b: Word,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapSets {
    pub aa: Vec<usize>,
    pub ab: Vec<usize>,
    pub ba: Vec<usize>,
    pub bb: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionSection {
    pub effective_n: u64,
    pub coefficients: crate::litt::Coefficients,
    pub p_alice: f64,
    pub p_bob: f64,
    pub p_tie: f64,
    pub clamped: bool,
    pub asymptotic_regime: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactSection {
    /// Alice wins when the net score is positive.
    pub alice: String,
    pub bob: String,
    pub tie: String,
    pub alice_f64: f64,
    pub bob_f64: f64,
    pub tie_f64: f64,
    /// `|exact - predicted|` per outcome, when a prediction exists.
    pub abs_error: Option<[f64; 3]>,
}

impl ExactSection {
    fn new(t: &ExactTriple, prediction: Option<&PredictionSection>) -> Self {
        let [w, l, z] = t.to_f64();
        ExactSection {
            alice: rational::render(&t.win),
            bob: rational::render(&t.lose),
            tie: rational::render(&t.tie),
            alice_f64: w,
            bob_f64: l,
            tie_f64: z,
            abs_error: prediction.map(|p| [(w - p.p_alice).abs(), (l - p.p_bob).abs(), (z - p.p_tie).abs()]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub inputs: AnalyzeInputs,
    pub ell: usize,
    pub overlaps: OverlapSets,
    pub constants: GameConstants,
    pub sigma2_f64: f64,
    pub kappa3_f64: f64,
    pub exception: ExceptionClass,
    pub em4: Option<Em4Certificate>,
    pub degeneracy: Option<DegeneracyCertificate>,
    pub prediction: Option<PredictionSection>,
    pub exact: Option<ExactSection>,
    pub simulation: Option<SimulationResult>,
    pub notes: Vec<String>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub exact: bool,
    pub simulate: Option<SimulationConfig>,
}

/// Classic two-word analysis. Exceptional pairs get their certificate and
/// the exact law instead of a prediction.
pub fn analyze(spec: &GameSpec, n: u64, opts: AnalyzeOptions) -> Result<AnalyzeReport> {
    let (a, b) = spec.classic_pair()?;
    if n < spec.ell() as u64 {
        return Err(Error::HorizonTooShort { n, ell: spec.ell() });
    }
    let constants = game_constants(spec)?;
    let exception = classify_exceptions(spec)?;
    let mut notes = Vec::new();

    let (em4, degeneracy) = if limits::state_count(spec.q(), spec.ell()) <= CERTIFICATE_STATES {
        let chain = build_chain(spec)?;
        (Some(check_em4(&chain)?), check_sigma2_zero(&chain)?)
    } else {
        notes.push(format!("lattice certificate skipped above {CERTIFICATE_STATES} chain states"));
        (None, None)
    };

    let prediction = if exception.is_exceptional() {
        notes.push(format!("exceptional pair ({}); no expansion applies", exception.tag.as_str()));
        None
    } else {
        let p = predict(spec, n)?;
        Some(PredictionSection {
            effective_n: p.effective_n,
            coefficients: p.coefficients,
            p_alice: p.p_alice,
            p_bob: p.p_bob,
            p_tie: p.p_tie,
            clamped: p.clamped,
            asymptotic_regime: p.asymptotic_regime,
        })
    };
    if prediction.as_ref().is_some_and(|p| !p.asymptotic_regime) {
        notes.push("asymptotic regime not reached (fewer than 16 scoring windows)".into());
    }
    if prediction.as_ref().is_some_and(|p| p.clamped) {
        notes.push("expansion clamped to [0, 1]".into());
    }

    let exact = if opts.exact || exception.is_exceptional() {
        match exact_distribution(spec, n) {
            Ok(d) => Some(ExactSection::new(&outcome_probabilities(&d), prediction.as_ref())),
            Err(e @ Error::ResourceCap { .. }) if !opts.exact => {
                notes.push(format!("exact law skipped: {e}"));
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let simulation = opts.simulate.map(|cfg| simulate(spec, n, cfg)).transpose()?;

    Ok(AnalyzeReport {
        schema_version: SCHEMA_VERSION,
        command: "analyze",
        inputs: AnalyzeInputs { q: spec.q(), a: a.clone(), b: b.clone(), n },
        ell: spec.ell(),
        overlaps: OverlapSets {
            aa: overlap(a, a)?.theta_set,
            ab: overlap(a, b)?.theta_set,
            ba: overlap(b, a)?.theta_set,
            bb: overlap(b, b)?.theta_set,
        },
        sigma2_f64: rational::to_f64(&constants.sigma2),
        kappa3_f64: rational::to_f64(&constants.kappa3),
        constants,
        exception,
        em4,
        degeneracy,
        prediction,
        exact,
        simulation,
        notes,
        provenance: Provenance::new(opts.simulate.map(|c| c.seed)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub a: Word,
    pub b: Word,
    pub theta_aa: String,
    pub theta_ab: String,
    pub theta_ba: String,
    pub theta_bb: String,
    pub sigma2: String,
    pub kappa3: String,
    pub exception: &'static str,
    pub p_alice: Option<f64>,
    pub p_bob: Option<f64>,
    pub p_tie: Option<f64>,
    /// Exact win count equals lose count at every horizon up to the bound.
    pub exact_fair: Option<bool>,
}

pub const SCAN_HEADER: [&str; 12] = [
    "A",
    "B",
    "theta_AA",
    "theta_AB",
    "theta_BA",
    "theta_BB",
    "sigma2",
    "kappa3",
    "exception",
    "p_alice",
    "p_bob",
    "p_tie",
];

impl ScanRow {
    pub fn csv_fields(&self, with_exact: bool) -> Vec<String> {
        let f = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        let mut out = vec![
            self.a.to_string(),
            self.b.to_string(),
            self.theta_aa.clone(),
            self.theta_ab.clone(),
            self.theta_ba.clone(),
            self.theta_bb.clone(),
            self.sigma2.clone(),
            self.kappa3.clone(),
            self.exception.to_string(),
            f(self.p_alice),
            f(self.p_bob),
            f(self.p_tie),
        ];
        if with_exact {
            out.push(self.exact_fair.map(|b| b.to_string()).unwrap_or_default());
        }
        out
    }
}

/// One row of a scan over unordered pairs `a < b`.
pub fn scan_row(a: &Word, b: &Word, n: u64, exact_upto: Option<u64>) -> Result<ScanRow> {
    let spec = GameSpec::classic(a.clone(), b.clone())?;
    let c = game_constants(&spec)?;
    let class = classify_exceptions(&spec)?;
    let (p_alice, p_bob, p_tie) = if class.is_exceptional() || n < spec.ell() as u64 {
        (None, None, None)
    } else {
        let ab = predict(&spec, n)?;
        let ba = predict(&spec.swapped()?, n)?;
        if (ab.p_alice - ba.p_bob).abs() > 1e-12 || (ab.p_bob - ba.p_alice).abs() > 1e-12 {
            return Err(Error::Inconsistent(format!("antisymmetry violated for ({a}, {b})")));
        }
        (Some(ab.p_alice), Some(ab.p_bob), Some(ab.p_tie))
    };
    let exact_fair = exact_upto
        .map(|m| {
            exact_distributions_upto(&spec, m).map(|ds| {
                ds.iter().all(|d| {
                    let c = d.outcome_counts();
                    c.win == c.lose
                })
            })
        })
        .transpose()?;
    let s = |r: &rational::Rational| rational::render(r);
    Ok(ScanRow {
        a: a.clone(),
        b: b.clone(),
        theta_aa: s(&c.thetas.aa),
        theta_ab: s(&c.thetas.ab),
        theta_ba: s(&c.thetas.ba),
        theta_bb: s(&c.thetas.bb),
        sigma2: s(&c.sigma2),
        kappa3: s(&c.kappa3),
        exception: class.tag.as_str(),
        p_alice,
        p_bob,
        p_tie,
        exact_fair,
    })
}

/// All unordered pairs of distinct words of length `ell`, lexicographic.
pub fn scan_pairs(q: u32, ell: usize) -> Result<Vec<(Word, Word)>> {
    let states = limits::state_count(q, ell);
    if states > u128::from(STATE_CAP) {
        return Err(Error::AlphabetTooLarge { states, cap: STATE_CAP });
    }
    if ell == 0 {
        return Err(Error::InvalidGame("word length must be at least 1".into()));
    }
    Word::parse(q, &"0".repeat(ell))?;
    let words: Vec<Word> = Word::all(q, ell).collect();
    Ok(words.iter().enumerate().flat_map(|(i, a)| words[i + 1..].iter().map(move |b| (a.clone(), b.clone()))).collect())
}

/// Pairs from a batch file: one `A B` pair per line, blank lines and `#`
/// comments ignored. Word errors are reported as parse errors with a line number.
pub fn parse_pair_batch(q: u32, text: &str) -> Result<Vec<(Word, Word)>> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = fields[..] else {
            return Err(Error::Parse(format!("line {}: expected two words, got `{line}`", lineno + 1)));
        };
        let word = |s: &str| Word::parse(q, s).map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)));
        let (a, b) = (word(a)?, word(b)?);
        if a.len() != b.len() || a == b {
            return Err(Error::Parse(format!("line {}: need two distinct words of equal length", lineno + 1)));
        }
        pairs.push((a, b));
    }
    if pairs.is_empty() {
        return Err(Error::Parse("batch file has no pairs".into()));
    }
    Ok(pairs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CumulantSection {
    pub exact: CumulantReport,
    pub score: &'static str,
    /// Float triple from the eigenvalue route (aperiodic state-score chains).
    pub perturbation: Option<FloatTriple>,
    pub perturbation_agrees: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Em4Section {
    pub lattice: LatticeReport,
    pub certificate: Option<Em4Certificate>,
    pub degeneracy: Option<DegeneracyCertificate>,
    pub chain_period: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisitsSection {
    pub source: String,
    pub target: String,
    pub expected_visits: String,
    pub expected_visits_f64: f64,
    pub route: &'static str,
    pub via_passage_times: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub states: Vec<String>,
    pub stationary: Vec<String>,
    pub cumulants: Option<CumulantSection>,
    pub em4: Option<Em4Section>,
    pub mfpt: Option<Vec<Vec<String>>>,
    pub visits: Option<VisitsSection>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChainOptions {
    pub cumulants: bool,
    pub em4: bool,
    pub mfpt: bool,
    pub visits: Option<(String, String)>,
}

pub fn chain_report(chain: &ChainSpec, opts: &ChainOptions) -> Result<ChainReport> {
    let pi = stationary_distribution(chain)?;
    let cumulant_section = if opts.cumulants {
        let exact = cumulants(chain)?;
        let (perturbation, agrees, score) = match chain.score() {
            Score::State(_) if chain.period()? == 1 => {
                let (_, t) = eigen_perturbation_cumulants(chain)?;
                (Some(t), Some(t.matches(&exact)), "state")
            }
            Score::State(_) => (None, None, "state"),
            Score::Edge(_) => (None, None, "edge"),
        };
        Some(CumulantSection { exact: exact.report(), score, perturbation, perturbation_agrees: agrees })
    } else {
        None
    };
    let em4 = if opts.em4 {
        let period = chain.period()?;
        let lattice = value_length_lattice(chain)?;
        let (certificate, degeneracy) =
            if period == 1 { (Some(check_em4(chain)?), check_sigma2_zero(chain)?) } else { (None, None) };
        Some(Em4Section { lattice, certificate, degeneracy, chain_period: period })
    } else {
        None
    };
    let mfpt = if opts.mfpt { Some(passage_times_from(&group_inverse(chain)?).to_strings()) } else { None };
    let visits = match &opts.visits {
        Some((a, b)) => {
            let v = expected_visits_before(chain, a, b)?;
            let via = visits_via_passage_times(chain, chain.index_of(a)?, chain.index_of(b)?)?;
            if via != v.expected_visits {
                return Err(Error::Inconsistent(format!("visits {} != passage-time form {via}", v.expected_visits)));
            }
            Some(VisitsSection {
                expected_visits_f64: rational::to_f64(&v.expected_visits),
                expected_visits: rational::render(&v.expected_visits),
                source: v.source,
                target: v.target,
                route: v.route,
                via_passage_times: rational::render(&via),
            })
        }
        None => None,
    };
    Ok(ChainReport {
        schema_version: SCHEMA_VERSION,
        command: "chain",
        states: chain.states().to_vec(),
        stationary: pi.pi.iter().map(rational::render).collect(),
        cumulants: cumulant_section,
        em4,
        mfpt,
        visits,
        provenance: Provenance::new(None),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiwordEnvelope {
    pub schema_version: u32,
    pub command: &'static str,
    #[serde(flatten)]
    pub report: crate::litt::MultiwordReport,
    pub provenance: Provenance,
}

pub fn multiword_report(spec: &GameSpec, n: u64) -> Result<MultiwordEnvelope> {
    Ok(MultiwordEnvelope {
        schema_version: SCHEMA_VERSION,
        command: "multiword",
        report: crate::litt::multiword_analysis(spec, n)?,
        provenance: Provenance::new(None),
    })
}
