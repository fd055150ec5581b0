//! One-term Edgeworth expansion for an integer-valued sum, including the
//! lattice (sawtooth) term and the initial-distribution shift `Delta`.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};

/// Below this horizon reports flag the expansion as outside its regime.
pub const MIN_ASYMPTOTIC_N: u64 = 16;

/// Relative snapping window for sawtooth arguments that should be integers.
const LATTICE_SNAP: f64 = 1e-9;

/// `1/2 - (x - floor(x))`, right-continuous with value `1/2` at integers.
pub fn sawtooth(x: f64) -> f64 {
    0.5 - (x - x.floor())
}

/// Left limit of the sawtooth: `-1/2` at integers.
pub fn sawtooth_left(x: f64) -> f64 {
    x.ceil() - x - 0.5
}

/// Standard normal CDF via `erfc`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Whether the CDF is taken at or strictly below the lattice point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    AtOrBelow,
    StrictlyBelow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeworthInput {
    pub n: u64,
    pub mu: f64,
    pub sigma2: f64,
    pub kappa3: f64,
    pub delta: f64,
}

impl EdgeworthInput {
    pub fn new(n: u64, mu: f64, sigma2: f64, kappa3: f64) -> Result<Self> {
        Self { n, mu, sigma2, kappa3, delta: 0.0 }.validated()
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    fn validated(self) -> Result<Self> {
        if self.sigma2.is_nan() || self.sigma2 <= 0.0 || !self.sigma2.is_finite() {
            return Err(Error::DegenerateVariance);
        }
        if self.n == 0 {
            return Err(Error::InvalidDistribution("horizon n must be at least 1".into()));
        }
        Ok(self)
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }

    /// `sigma sqrt(2 pi n)`.
    fn scale(&self) -> f64 {
        self.sigma() * (2.0 * PI * self.n as f64).sqrt()
    }

    pub fn asymptotic_regime(&self) -> bool {
        self.n >= MIN_ASYMPTOTIC_N
    }
}

fn snap(y: f64) -> f64 {
    let r = y.round();
    if (y - r).abs() <= LATTICE_SNAP * r.abs().max(1.0) {
        r
    } else {
        y
    }
}

/// Unclamped expansion of `P(S_n - n mu <= x sigma sqrt(n))`.
fn cdf_raw(input: &EdgeworthInput, x: f64, side: Side) -> f64 {
    let n = input.n as f64;
    let sigma = input.sigma();
    let scale = input.scale();
    let gauss = (-x * x / 2.0).exp();
    let point = snap(x * sigma * n.sqrt() + n * input.mu);
    let lattice = match side {
        Side::AtOrBelow => sawtooth(point),
        Side::StrictlyBelow => sawtooth_left(point),
    };
    normal_cdf(x)
        + input.kappa3 / (6.0 * sigma.powi(3) * (2.0 * PI * n).sqrt()) * (1.0 - x * x) * gauss
        + lattice * gauss / scale
        - input.delta * gauss / scale
}

pub fn edgeworth_cdf(input: &EdgeworthInput, x: f64, side: Side) -> Result<f64> {
    let input = input.validated()?;
    Ok(cdf_raw(&input, x, side).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeTriple {
    pub p_below: f64,
    pub p_zero: f64,
    pub p_above: f64,
    /// Set when a raw value left `[0, 1]`.
    pub clamped: bool,
}

impl OutcomeTriple {
    /// `p_zero` clamped to `[0, 1]`, then `p_below` to `[0, 1 - p_zero]`,
    /// `p_above` as the complement.
    pub fn from_raw(p_below: f64, p_zero: f64) -> Self {
        let z = p_zero.clamp(0.0, 1.0);
        let b = p_below.clamp(0.0, 1.0 - z);
        let clamped = z != p_zero || b != p_below || 1.0 - b - z < 0.0;
        OutcomeTriple { p_below: b, p_zero: z, p_above: (1.0 - b - z).max(0.0), clamped }
    }
}

/// Closed form for `mu = 0`: exact expressions for `P(S < 0)`,
/// `P(S = 0)` and the complement.
pub fn zero_mean_triple(input: &EdgeworthInput) -> Result<OutcomeTriple> {
    let input = input.validated()?;
    if input.mu != 0.0 {
        return Err(Error::NonZeroMean(input.mu));
    }
    let scale = input.scale();
    let skew = input.kappa3 / (6.0 * input.sigma().powi(3) * (2.0 * PI * input.n as f64).sqrt());
    let p_zero = 1.0 / scale;
    let p_below = 0.5 + skew - 0.5 / scale - input.delta / scale;
    Ok(OutcomeTriple::from_raw(p_below, p_zero))
}

/// Outcome triple at `S_n` versus zero for any mean, from the CDF at
/// `x0 = -n mu / (sigma sqrt n)` on both sides of the lattice point.
pub fn outcome_triple(input: &EdgeworthInput) -> Result<OutcomeTriple> {
    let input = input.validated()?;
    if input.mu == 0.0 {
        return zero_mean_triple(&input);
    }
    let n = input.n as f64;
    let x0 = -n * input.mu / (input.sigma() * n.sqrt());
    let at_or_below = cdf_raw(&input, x0, Side::AtOrBelow);
    let below = cdf_raw(&input, x0, Side::StrictlyBelow);
    Ok(OutcomeTriple::from_raw(below, at_or_below - below))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `Phi(x)` to 20 digits from a 50-digit reference computation.
    #[allow(clippy::excessive_precision)]
    const PHI_TABLE: [(f64, f64); 20] = [
        (-8.0, 6.2209605742717841235e-16),
        (-6.0, 9.865876450376981407e-10),
        (-5.0, 2.8665157187919391167e-7),
        (-4.0, 0.000031671241833119921254),
        (-3.0, 0.0013498980316300945267),
        (-2.5, 0.006209665325776135167),
        (-2.0, 0.0227501319481792072),
        (-1.5, 0.066807201268858066004),
        (-1.0, 0.15865525393145705141),
        (-0.5, 0.30853753872598689636),
        (-0.1, 0.46017216272297101633),
        (0.0, 0.5),
        (0.1, 0.53982783727702898367),
        (0.5, 0.69146246127401310364),
        (1.0, 0.84134474606854294859),
        (1.5, 0.933192798731141934),
        (2.0, 0.9772498680518207928),
        (3.0, 0.99865010196836990547),
        (5.0, 0.99999971334842812081),
        (7.0, 0.99999999999872018746),
    ];

    #[test]
    fn phi_matches_reference_table() {
        for (x, want) in PHI_TABLE {
            assert!((normal_cdf(x) - want).abs() <= 1e-12, "Phi({x})");
        }
    }

    #[test]
    fn sawtooth_values() {
        assert_eq!(sawtooth(0.0), 0.5);
        assert_eq!(sawtooth(0.5), 0.0);
        assert_eq!(sawtooth(-0.25), -0.25);
        assert_eq!(sawtooth_left(0.0), -0.5);
        assert_eq!(sawtooth_left(3.0), -0.5);
        assert_eq!(sawtooth_left(2.25), sawtooth(2.25));
    }

    #[test]
    fn midpoint_without_skew_is_phi() {
        let input = EdgeworthInput::new(16, 0.0, 1.0, 0.0).unwrap();
        let x = 0.5 / 4.0;
        assert_eq!(edgeworth_cdf(&input, x, Side::AtOrBelow).unwrap(), normal_cdf(x));
    }

    #[test]
    fn far_tails() {
        let input = EdgeworthInput::new(100, 0.0, 0.5, 0.75).unwrap();
        assert!(edgeworth_cdf(&input, -8.0, Side::AtOrBelow).unwrap() < 1e-10);
        assert!(edgeworth_cdf(&input, 8.0, Side::AtOrBelow).unwrap() > 1.0 - 1e-10);
    }

    #[test]
    fn degenerate_variance_rejected() {
        assert_eq!(EdgeworthInput::new(10, 0.0, 0.0, 0.0).unwrap_err(), Error::DegenerateVariance);
        let bad = EdgeworthInput { n: 10, mu: 0.0, sigma2: -1.0, kappa3: 0.0, delta: 0.0 };
        assert_eq!(edgeworth_cdf(&bad, 0.0, Side::AtOrBelow).unwrap_err(), Error::DegenerateVariance);
    }

    #[test]
    fn symmetric_triple() {
        let t = zero_mean_triple(&EdgeworthInput::new(50, 0.0, 2.0, 0.0).unwrap()).unwrap();
        assert!((t.p_below - t.p_above).abs() < 1e-15);
        assert!((t.p_zero - 1.0 / (2.0f64.sqrt() * (100.0 * PI).sqrt())).abs() < 1e-15);
    }

    #[test]
    fn hh_ht_tie_and_skew_gap() {
        let input = EdgeworthInput::new(100, 0.0, 0.5, 0.75).unwrap();
        let t = zero_mean_triple(&input).unwrap();
        assert!((t.p_zero - 1.0 / (100.0 * PI).sqrt()).abs() < 1e-15);
        assert!((t.p_zero - 0.05642).abs() < 1e-5);
        let gap = 0.75 / (3.0 * 0.5f64.powf(1.5) * (200.0 * PI).sqrt());
        assert!((t.p_below - t.p_above - gap).abs() < 1e-14);
        assert_eq!(t.p_below + t.p_zero + t.p_above, 1.0);
    }

    #[test]
    fn zero_mean_required() {
        let input = EdgeworthInput::new(100, 0.25, 0.5, 0.0).unwrap();
        assert_eq!(zero_mean_triple(&input).unwrap_err(), Error::NonZeroMean(0.25));
    }

    #[test]
    fn general_route_reduces_to_zero_mean_form() {
        let input = EdgeworthInput::new(64, 0.0, 0.75, -0.3).unwrap().with_delta(0.4);
        let a = zero_mean_triple(&input).unwrap();
        let at = cdf_raw(&input, 0.0, Side::AtOrBelow);
        let below = cdf_raw(&input, 0.0, Side::StrictlyBelow);
        assert!((a.p_below - below).abs() < 1e-15);
        assert!((a.p_zero - (at - below)).abs() < 1e-15);
    }

    #[test]
    fn doubling_n_scales_corrections() {
        let corr = |n: u64| {
            let t = zero_mean_triple(&EdgeworthInput::new(n, 0.0, 0.5, 0.75).unwrap().with_delta(0.3)).unwrap();
            (t.p_below - 0.5, t.p_zero)
        };
        let (b1, z1) = corr(100);
        let (b2, z2) = corr(200);
        assert!((b2 * SQRT_2 - b1).abs() < 1e-15);
        assert!((z2 * SQRT_2 - z1).abs() < 1e-15);
    }

    #[test]
    fn clamping_is_reported() {
        let t = OutcomeTriple::from_raw(-0.2, 1.3);
        assert!(t.clamped);
        assert_eq!((t.p_below, t.p_zero, t.p_above), (0.0, 1.0, 0.0));
    }

    #[test]
    fn small_n_flagged() {
        assert!(!EdgeworthInput::new(15, 0.0, 1.0, 0.0).unwrap().asymptotic_regime());
        assert!(EdgeworthInput::new(16, 0.0, 1.0, 0.0).unwrap().asymptotic_regime());
    }
}
