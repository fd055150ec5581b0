//! C interface to `litt-core`.
//!
//! Every entry point returns a [`LittStatus`] and writes results through out
//! pointers. On failure a message is stored per thread and can be fetched
//! with [`litt_last_error_message`]. Strings handed out by the library are
//! released with [`litt_string_free`]; handles with their `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use litt_core::chain::ChainFile;
use litt_core::error::Error;
use litt_core::litt::{classify_exceptions, game_constants, predict, ExceptionTag, GameSpec, Word};
use litt_core::markov::expected_visits_before;
use litt_core::oracle::{exact_distribution, outcome_probabilities, simulate, SimulationConfig};
use litt_core::report::{self, AnalyzeOptions, ChainOptions};
use litt_core::{cumulants, rational, ChainSpec};

/// Result of every call. Values match the command-line exit codes where
/// both exist.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LittStatus {
    Ok = 0,
    ExceptionalPair = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    Panic = 5,
    Usage = 64,
    Data = 65,
    Resource = 69,
    Internal = 70,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LittException {
    None = 0,
    GapDegenerate = 1,
    SingleLetter = 2,
    ComplementPair = 3,
}

/// A parsed chain with its score.
pub struct LittChain {
    chain: ChainSpec,
}

/// A word game.
pub struct LittGame {
    spec: GameSpec,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LittCumulants {
    pub mu: f64,
    pub sigma2: f64,
    pub kappa3: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LittGameConstants {
    pub theta_aa: f64,
    pub theta_ab: f64,
    pub theta_ba: f64,
    pub theta_bb: f64,
    pub sigma2: f64,
    pub kappa3: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LittPrediction {
    pub p_alice: f64,
    pub p_bob: f64,
    pub p_tie: f64,
    pub effective_n: u64,
    pub clamped: bool,
}

/// Exact outcome probabilities rounded to double.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LittOutcomes {
    pub p_alice: f64,
    pub p_bob: f64,
    pub p_tie: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LittSimulation {
    pub wins: u64,
    pub losses: u64,
    pub ties: u64,
    pub p_alice: f64,
    pub p_bob: f64,
    pub p_tie: f64,
}

pub const LITT_REPORT_CUMULANTS: u32 = 1;
pub const LITT_REPORT_EM4: u32 = 2;
pub const LITT_REPORT_MFPT: u32 = 4;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(LittStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.exit_code() {
            2 => LittStatus::ExceptionalPair,
            64 => LittStatus::Usage,
            65 => LittStatus::Data,
            69 => LittStatus::Resource,
            _ => LittStatus::Internal,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> LittStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            LittStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("panic inside litt".into());
            LittStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(LittStatus::NullPointer, "null pointer argument".into())
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(LittStatus::InvalidUtf8, "string is not valid UTF-8".into()))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

fn into_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| Failure(LittStatus::Internal, "interior NUL in output".into()))
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string(value).map_err(|e| Failure(LittStatus::Internal, e.to_string()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn litt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn litt_status_message(status: LittStatus) -> *const c_char {
    let s: &'static str = match status {
        LittStatus::Ok => "ok\0",
        LittStatus::ExceptionalPair => "exceptional word pair\0",
        LittStatus::NullPointer => "null pointer argument\0",
        LittStatus::InvalidUtf8 => "invalid UTF-8\0",
        LittStatus::Panic => "internal panic\0",
        LittStatus::Usage => "invalid argument\0",
        LittStatus::Data => "invalid input data\0",
        LittStatus::Resource => "resource limit exceeded\0",
        LittStatus::Internal => "internal error\0",
    };
    s.as_ptr().cast()
}

/// Copy of the last error message on this thread, or NULL. Free with
/// `litt_string_free`.
#[no_mangle]
pub extern "C" fn litt_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn litt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a chain from its JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_chain_from_json(json: *const c_char, out: *mut *mut LittChain) -> LittStatus {
    guard(|| {
        let text = read_str(json)?;
        let chain = ChainFile::parse(text)?;
        write(out, Box::into_raw(Box::new(LittChain { chain })))
    })
}

/// # Safety
/// `chain` must be NULL or a handle from `litt_chain_from_json`, freed once.
#[no_mangle]
pub unsafe extern "C" fn litt_chain_free(chain: *mut LittChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// # Safety
/// `chain` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_chain_state_count(chain: *const LittChain, out: *mut usize) -> LittStatus {
    guard(|| write(out, borrow(chain)?.chain.len()))
}

/// Asymptotic mean, variance and third cumulant per step.
///
/// # Safety
/// `chain` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_chain_cumulants(chain: *const LittChain, out: *mut LittCumulants) -> LittStatus {
    guard(|| {
        let t = cumulants(&borrow(chain)?.chain)?;
        write(out, LittCumulants { mu: t.mu_f64(), sigma2: t.sigma2_f64(), kappa3: t.kappa3_f64() })
    })
}

/// Expected visits to state `a` before the first visit to `b`, starting at `a`.
///
/// # Safety
/// `chain` must be a live handle, `a` and `b` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_chain_expected_visits(
    chain: *const LittChain,
    a: *const c_char,
    b: *const c_char,
    out: *mut f64,
) -> LittStatus {
    guard(|| {
        let r = expected_visits_before(&borrow(chain)?.chain, read_str(a)?, read_str(b)?)?;
        write(out, rational::to_f64(&r.expected_visits))
    })
}

/// JSON report with the sections selected by `flags`
/// (`LITT_REPORT_CUMULANTS | LITT_REPORT_EM4 | LITT_REPORT_MFPT`).
///
/// # Safety
/// `chain` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_chain_report_json(
    chain: *const LittChain,
    flags: u32,
    out: *mut *mut c_char,
) -> LittStatus {
    guard(|| {
        let opts = ChainOptions {
            cumulants: flags & LITT_REPORT_CUMULANTS != 0,
            em4: flags & LITT_REPORT_EM4 != 0,
            mfpt: flags & LITT_REPORT_MFPT != 0,
            visits: None,
        };
        let text = json(&report::chain_report(&borrow(chain)?.chain, &opts)?)?;
        write(out, into_c_string(text)?)
    })
}

/// Two-word game: Alice holds `a`, Bob holds `b`.
///
/// # Safety
/// `a` and `b` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_game_new(
    q: u32,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut LittGame,
) -> LittStatus {
    guard(|| {
        let spec = GameSpec::parse_classic(q, read_str(a)?, read_str(b)?)?;
        write(out, Box::into_raw(Box::new(LittGame { spec })))
    })
}

/// Weighted game over `len` words.
///
/// # Safety
/// `words` and `weights` must point to `len` entries; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_game_new_weighted(
    q: u32,
    words: *const *const c_char,
    weights: *const i64,
    len: usize,
    out: *mut *mut LittGame,
) -> LittStatus {
    guard(|| {
        if words.is_null() || weights.is_null() {
            return Err(null());
        }
        let words = std::slice::from_raw_parts(words, len);
        let weights = std::slice::from_raw_parts(weights, len);
        let pairs = words
            .iter()
            .zip(weights)
            .map(|(&w, &v)| Ok((Word::parse(q, read_str(w)?)?, v)))
            .collect::<Result<Vec<_>, Failure>>()?;
        let spec = GameSpec::new(q, pairs)?;
        write(out, Box::into_raw(Box::new(LittGame { spec })))
    })
}

/// # Safety
/// `game` must be NULL or a handle from `litt_game_new*`, freed once.
#[no_mangle]
pub unsafe extern "C" fn litt_game_free(game: *mut LittGame) {
    if !game.is_null() {
        drop(Box::from_raw(game));
    }
}

/// # Safety
/// `game` must be a live two-word handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_game_constants(game: *const LittGame, out: *mut LittGameConstants) -> LittStatus {
    guard(|| {
        let c = game_constants(&borrow(game)?.spec)?;
        let f = rational::to_f64;
        write(
            out,
            LittGameConstants {
                theta_aa: f(&c.thetas.aa),
                theta_ab: f(&c.thetas.ab),
                theta_ba: f(&c.thetas.ba),
                theta_bb: f(&c.thetas.bb),
                sigma2: f(&c.sigma2),
                kappa3: f(&c.kappa3),
            },
        )
    })
}

/// # Safety
/// `game` must be a live two-word handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_game_exception(game: *const LittGame, out: *mut LittException) -> LittStatus {
    guard(|| {
        let tag = match classify_exceptions(&borrow(game)?.spec)?.tag {
            ExceptionTag::None => LittException::None,
            ExceptionTag::GapDegenerate => LittException::GapDegenerate,
            ExceptionTag::SingleLetter => LittException::SingleLetter,
            ExceptionTag::ComplementPair => LittException::ComplementPair,
        };
        write(out, tag)
    })
}

/// Edgeworth prediction after `n` letters. Exceptional pairs return
/// `LITT_STATUS_EXCEPTIONAL_PAIR`.
///
/// # Safety
/// `game` must be a live two-word handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_game_predict(game: *const LittGame, n: u64, out: *mut LittPrediction) -> LittStatus {
    guard(|| {
        let p = predict(&borrow(game)?.spec, n)?;
        write(
            out,
            LittPrediction {
                p_alice: p.p_alice,
                p_bob: p.p_bob,
                p_tie: p.p_tie,
                effective_n: p.effective_n,
                clamped: p.clamped,
            },
        )
    })
}

/// Exact outcome probabilities after `n` letters.
///
/// # Safety
/// `game` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_game_exact(game: *const LittGame, n: u64, out: *mut LittOutcomes) -> LittStatus {
    guard(|| {
        let [p_alice, p_bob, p_tie] = outcome_probabilities(&exact_distribution(&borrow(game)?.spec, n)?).to_f64();
        write(out, LittOutcomes { p_alice, p_bob, p_tie })
    })
}

/// Exact score distribution as `score,count` CSV.
///
/// # Safety
/// `game` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_game_distribution_csv(
    game: *const LittGame,
    n: u64,
    out: *mut *mut c_char,
) -> LittStatus {
    guard(|| {
        let csv = exact_distribution(&borrow(game)?.spec, n)?.to_csv();
        write(out, into_c_string(csv)?)
    })
}

/// Seeded Monte Carlo estimate.
///
/// # Safety
/// `game` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_game_simulate(
    game: *const LittGame,
    n: u64,
    reps: u64,
    seed: u64,
    out: *mut LittSimulation,
) -> LittStatus {
    guard(|| {
        let r = simulate(&borrow(game)?.spec, n, SimulationConfig { reps, seed })?;
        write(
            out,
            LittSimulation {
                wins: r.wins,
                losses: r.losses,
                ties: r.ties,
                p_alice: r.p_win,
                p_bob: r.p_lose,
                p_tie: r.p_tie,
            },
        )
    })
}

/// Full analysis as JSON, the same document the command-line tool prints.
/// The report is written for exceptional pairs too, and the call then
/// returns `LITT_STATUS_EXCEPTIONAL_PAIR`.
///
/// # Safety
/// `game` must be a live two-word handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn litt_game_analyze_json(
    game: *const LittGame,
    n: u64,
    exact: bool,
    out: *mut *mut c_char,
) -> LittStatus {
    let mut exceptional = false;
    let status = guard(|| {
        let r = report::analyze(&borrow(game)?.spec, n, AnalyzeOptions { exact, simulate: None })?;
        exceptional = r.exception.is_exceptional();
        write(out, into_c_string(json(&r)?)?)
    });
    if status == LittStatus::Ok && exceptional {
        LittStatus::ExceptionalPair
    } else {
        status
    }
}
