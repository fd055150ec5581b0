//! Floating-point cumulants from derivatives of the Perron eigenvalue of
//! `F(t) = P e^{tG}`, used as an independent check on the exact route.

use serde::Serialize;

use crate::chain::ChainSpec;
use crate::cumulants::CumulantTriple;
use crate::error::{Error, Result};
use crate::markov::group_inverse;

const POWER_TOL: f64 = 1e-13;
const MAX_ITER: usize = 1_000_000;

/// Relative tolerance against the exact route.
pub const REL_TOL: f64 = 1e-8;
/// Absolute tolerance when the exact value is zero.
pub const ABS_TOL: f64 = 1e-10;

/// `m_k = lambda^{(k)}(0)` with the eigenvector pair used to get them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationSeries {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
    /// Left eigenvector, `u^T 1 = 1`.
    pub u: Vec<f64>,
    /// Right eigenvector, `u^T v = 1`.
    pub v: Vec<f64>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FloatTriple {
    pub mu: f64,
    pub sigma2: f64,
    pub kappa3: f64,
}

impl FloatTriple {
    /// Agreement with an exact triple under `REL_TOL` / `ABS_TOL`.
    pub fn matches(&self, exact: &CumulantTriple) -> bool {
        close(self.mu, exact.mu_f64())
            && close(self.sigma2, exact.sigma2_f64())
            && close(self.kappa3, exact.kappa3_f64())
    }
}

pub fn close(approx: f64, exact: f64) -> bool {
    if exact == 0.0 {
        approx.abs() <= ABS_TOL
    } else {
        ((approx - exact) / exact).abs() <= REL_TOL
    }
}

type Mat = Vec<Vec<f64>>;

fn mat_vec(m: &Mat, v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn vec_mat(v: &[f64], m: &Mat) -> Vec<f64> {
    let mut out = vec![0.0; m[0].len()];
    for (x, row) in v.iter().zip(m) {
        for (o, a) in out.iter_mut().zip(row) {
            *o += x * a;
        }
    }
    out
}

fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Power iteration for the left and right Perron vectors of a stochastic `p`.
fn perron_pair(p: &Mat) -> Result<(Vec<f64>, Vec<f64>, usize)> {
    let m = p.len();
    let mut u = vec![1.0 / m as f64; m];
    let mut v = vec![1.0; m];
    for it in 1..=MAX_ITER {
        let mut nu = vec_mat(&u, p);
        let s: f64 = nu.iter().sum();
        nu.iter_mut().for_each(|x| *x /= s);
        let mut nv = mat_vec(p, &v);
        let top = nv.iter().fold(0.0, |a: f64, &b| a.max(b.abs()));
        nv.iter_mut().for_each(|x| *x /= top);
        let done = max_diff(&nu, &u) < POWER_TOL && max_diff(&nv, &v) < POWER_TOL;
        u = nu;
        v = nv;
        if done {
            let uv = dotf(&u, &v);
            v.iter_mut().for_each(|x| *x /= uv);
            return Ok((u, v, it));
        }
    }
    Err(Error::NoConvergence(MAX_ITER))
}

/// `F^{(k)}(0) x = P G^k x`.
fn f_deriv(p: &Mat, g: &[f64], k: i32, x: &[f64]) -> Vec<f64> {
    let gx: Vec<f64> = g.iter().zip(x).map(|(gi, xi)| gi.powi(k) * xi).collect();
    mat_vec(p, &gx)
}

pub fn eigen_perturbation_cumulants(chain: &ChainSpec) -> Result<(PerturbationSeries, FloatTriple)> {
    let g: Vec<f64> = chain
        .state_scores()
        .ok_or_else(|| Error::InvalidChain("expected per-state scores".into()))?
        .iter()
        .map(|&x| x as f64)
        .collect();
    chain.check_aperiodic()?;
    let p = chain.transition().to_f64();
    let q = group_inverse(chain)?.q().to_f64();
    let (u, v, iterations) = perron_pair(&p)?;

    let f1v = f_deriv(&p, &g, 1, &v);
    let f2v = f_deriv(&p, &g, 2, &v);
    let f3v = f_deriv(&p, &g, 3, &v);
    let uf1 = |x: &[f64]| dotf(&u, &f_deriv(&p, &g, 1, x));
    let uf2 = |x: &[f64]| dotf(&u, &f_deriv(&p, &g, 2, x));

    let q_f1v = mat_vec(&q, &f1v);
    let q_f2v = mat_vec(&q, &f2v);
    let q_f1_q_f1v = mat_vec(&q, &f_deriv(&p, &g, 1, &q_f1v));
    let q2_f1v = mat_vec(&q, &q_f1v);

    let m1 = dotf(&u, &f1v);
    let m2 = dotf(&u, &f2v) + 2.0 * uf1(&q_f1v);
    let m3 = dotf(&u, &f3v) + 3.0 * uf2(&q_f1v) + 3.0 * uf1(&q_f2v) + 6.0 * uf1(&q_f1_q_f1v) - 6.0 * m1 * uf1(&q2_f1v);

    let triple = FloatTriple { mu: m1, sigma2: m2 - m1 * m1, kappa3: m3 - 3.0 * m2 * m1 + 2.0 * m1.powi(3) };
    Ok((PerturbationSeries { m1, m2, m3, u, v, iterations }, triple))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cumulants::cumulants_state_score;
    use crate::fixtures;

    #[test]
    fn zero_score_has_flat_eigenvalue() {
        let (s, t) = eigen_perturbation_cumulants(
            &fixtures::random_chain(1, 5).replace_score(crate::chain::Score::State(vec![0; 5])).unwrap(),
        )
        .unwrap();
        assert_eq!((s.m1, s.m2, s.m3), (0.0, 0.0, 0.0));
        assert_eq!(t.sigma2, 0.0);
    }

    #[test]
    fn e4_matches_exact() {
        let c = fixtures::e4_chain();
        let (s, t) = eigen_perturbation_cumulants(&c).unwrap();
        assert!(t.matches(&cumulants_state_score(&c).unwrap()), "{t:?}");
        assert!((s.u.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!((dotf(&s.u, &s.v) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_chains_match_exact() {
        for seed in 0..6 {
            let c = fixtures::random_chain(seed, 6);
            let (_, t) = eigen_perturbation_cumulants(&c).unwrap();
            assert!(t.matches(&cumulants_state_score(&c).unwrap()), "seed {seed}: {t:?}");
        }
    }

    #[test]
    fn periodic_chain_rejected() {
        use crate::linalg::RationalMatrix;
        use crate::rational::int;
        let p = RationalMatrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        let c = ChainSpec::from_matrix(p, vec![1, 0]).unwrap();
        assert_eq!(eigen_perturbation_cumulants(&c).unwrap_err(), Error::NotAperiodic(2));
    }
}
