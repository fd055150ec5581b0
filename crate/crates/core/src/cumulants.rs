//! Asymptotic cumulants `mu`, `sigma^2`, `kappa_3` of `S_n = sum g(W_k)`
//! from the group inverse of `I - P`.
//!
//! Every state-score computation runs two algebraically equivalent forms,
//! one through `QP` and one through `Q' = Q - I`, and refuses to return
//! unless they agree exactly. Edge scores are handled on the chain of
//! consecutive pairs, whose stationary law and group inverse are written
//! down directly from those of the base chain.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::chain::{ChainSpec, Score};
use crate::error::{Error, Result};
use crate::linalg::{dot, RationalMatrix};
use crate::markov::{group_inverse, GroupInverseMatrix};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct CumulantTriple {
    pub mu: Rational,
    pub sigma2: Rational,
    pub kappa3: Rational,
}

impl CumulantTriple {
    pub fn mu_f64(&self) -> f64 {
        rational::to_f64(&self.mu)
    }

    pub fn sigma2_f64(&self) -> f64 {
        rational::to_f64(&self.sigma2)
    }

    pub fn kappa3_f64(&self) -> f64 {
        rational::to_f64(&self.kappa3)
    }

    pub fn sigma_f64(&self) -> f64 {
        self.sigma2_f64().sqrt()
    }

    pub fn report(&self) -> CumulantReport {
        CumulantReport {
            mu: rational::render(&self.mu),
            sigma2: rational::render(&self.sigma2),
            kappa3: rational::render(&self.kappa3),
            mu_f64: self.mu_f64(),
            sigma2_f64: self.sigma2_f64(),
            kappa3_f64: self.kappa3_f64(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CumulantReport {
    pub mu: String,
    pub sigma2: String,
    pub kappa3: String,
    pub mu_f64: f64,
    pub sigma2_f64: f64,
    pub kappa3_f64: f64,
}

/// `G = diag(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagScore(Vec<i64>);

impl DiagScore {
    pub fn new(g: Vec<i64>) -> Self {
        DiagScore(g)
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn matrix(&self) -> RationalMatrix {
        RationalMatrix::diagonal(&self.0.iter().map(|&v| rational::int(v)).collect::<Vec<_>>())
    }

    fn apply(&self, power: u32, v: &[Rational]) -> Vec<Rational> {
        self.0.iter().zip(v).map(|(&g, x)| rational::int(g.pow(power)) * x).collect()
    }
}

/// A factor in a product `pi^T F_1 F_2 ... F_k 1`.
#[derive(Clone, Copy)]
enum Factor<'a> {
    G(u32),
    M(&'a RationalMatrix),
}

/// Evaluates `pi^T F_1 ... F_k 1` right to left as matrix-vector products.
fn quadratic(pi: &[Rational], g: &DiagScore, factors: &[Factor<'_>]) -> Rational {
    let mut v = vec![Rational::one(); pi.len()];
    for f in factors.iter().rev() {
        v = match f {
            Factor::G(k) => g.apply(*k, &v),
            Factor::M(m) => m.mul_vec(&v),
        };
    }
    dot(pi, &v)
}

/// `(sigma^2, kappa_3)` through `QP`.
fn via_qp(
    pi: &[Rational],
    g: &DiagScore,
    q: &RationalMatrix,
    p: &RationalMatrix,
    mu: &Rational,
) -> (Rational, Rational) {
    use Factor::{G, M};
    let qp = q * p;
    let q2p = q * &qp;
    let sigma2 = quadratic(pi, g, &[G(2)]) + rational::int(2) * quadratic(pi, g, &[G(1), M(&qp), G(1)]) - mu * mu;
    let kappa3 = quadratic(pi, g, &[G(3)])
        + rational::int(3) * quadratic(pi, g, &[G(1), M(&qp), G(2)])
        + rational::int(3) * quadratic(pi, g, &[G(2), M(&qp), G(1)])
        + rational::int(6) * quadratic(pi, g, &[G(1), M(&qp), G(1), M(&qp), G(1)])
        - mu * (rational::int(6) * quadratic(pi, g, &[G(1), M(&q2p), G(1)]) + rational::int(3) * &sigma2 + mu * mu);
    (sigma2, kappa3)
}

/// `(sigma^2, kappa_3)` through `Q' = Q - I`.
fn via_q_prime(pi: &[Rational], g: &DiagScore, q_prime: &RationalMatrix, mu: &Rational) -> (Rational, Rational) {
    use Factor::{G, M};
    let qp2 = q_prime * q_prime;
    let sigma2 = quadratic(pi, g, &[G(2)]) + rational::int(2) * quadratic(pi, g, &[G(1), M(q_prime), G(1)]) + mu * mu;
    let kappa3 = quadratic(pi, g, &[G(3)])
        + rational::int(3) * quadratic(pi, g, &[G(1), M(q_prime), G(2)])
        + rational::int(3) * quadratic(pi, g, &[G(2), M(q_prime), G(1)])
        + rational::int(6) * quadratic(pi, g, &[G(1), M(q_prime), G(1), M(q_prime), G(1)])
        + mu * (rational::int(3) * quadratic(pi, g, &[G(2)])
            - rational::int(6) * quadratic(pi, g, &[G(1), M(&qp2), G(1)])
            + rational::int(2) * mu * mu);
    (sigma2, kappa3)
}

/// Both routes on the same `(pi, Q, P, g)`; only the `Q'` route is used when
/// `p` is `None`.
fn triple_from_parts(
    pi: &[Rational],
    g: &DiagScore,
    q: &RationalMatrix,
    p: Option<&RationalMatrix>,
) -> Result<CumulantTriple> {
    let mu = quadratic(pi, g, &[Factor::G(1)]);
    let q_prime = q - &RationalMatrix::identity(q.rows());
    let (sigma2, kappa3) = via_q_prime(pi, g, &q_prime, &mu);
    if let Some(p) = p {
        let (s2, k3) = via_qp(pi, g, q, p, &mu);
        if s2 != sigma2 || k3 != kappa3 {
            return Err(Error::Inconsistent(format!(
                "QP route ({s2}, {k3}) disagrees with Q' route ({sigma2}, {kappa3})"
            )));
        }
    }
    if sigma2.is_negative() {
        return Err(Error::Inconsistent(format!("negative asymptotic variance {sigma2}")));
    }
    Ok(CumulantTriple { mu, sigma2, kappa3 })
}

/// Cumulants for a per-state score.
pub fn cumulants_state_score(chain: &ChainSpec) -> Result<CumulantTriple> {
    let g = match chain.score() {
        Score::State(g) => DiagScore::new(g.clone()),
        Score::Edge(_) => return Err(Error::InvalidChain("expected per-state scores".into())),
    };
    let gi = group_inverse(chain)?;
    cumulants_with_group_inverse(chain, &gi, &g)
}

/// The `QP` and `Q'` triples computed independently, in that order.
pub fn cumulant_routes(chain: &ChainSpec) -> Result<(CumulantTriple, CumulantTriple)> {
    let g = match chain.score() {
        Score::State(g) => DiagScore::new(g.clone()),
        Score::Edge(_) => return Err(Error::InvalidChain("expected per-state scores".into())),
    };
    let gi = group_inverse(chain)?;
    let (pi, q) = (gi.pi(), gi.q());
    let mu = quadratic(pi, &g, &[Factor::G(1)]);
    let (s_qp, k_qp) = via_qp(pi, &g, q, chain.transition(), &mu);
    let q_prime = q - &RationalMatrix::identity(q.rows());
    let (s_qq, k_qq) = via_q_prime(pi, &g, &q_prime, &mu);
    Ok((
        CumulantTriple { mu: mu.clone(), sigma2: s_qp, kappa3: k_qp },
        CumulantTriple { mu, sigma2: s_qq, kappa3: k_qq },
    ))
}

pub(crate) fn cumulants_with_group_inverse(
    chain: &ChainSpec,
    gi: &GroupInverseMatrix,
    g: &DiagScore,
) -> Result<CumulantTriple> {
    triple_from_parts(gi.pi(), g, gi.q(), Some(chain.transition()))
}

/// The chain of consecutive pairs `(W_{k-1}, W_k)` over the edges of a base
/// chain, with its stationary law and group inverse in closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedChain {
    pub base: ChainSpec,
    pub pair_states: Vec<(usize, usize)>,
    /// `pi_i P_ij` per pair state.
    pub pi_hat: Vec<Rational>,
    /// `1{(i,j) = (i',j')} + P_i'j' (Q_ji' - pi_i')`.
    pub q_hat: RationalMatrix,
}

impl ExpandedChain {
    pub fn new(base: &ChainSpec) -> Result<Self> {
        let gi = group_inverse(base)?;
        let p = base.transition();
        let pi = gi.pi();
        let q = gi.q();
        let pair_states: Vec<(usize, usize)> = base.edges().collect();
        let pi_hat = pair_states.iter().map(|&(i, j)| &pi[i] * &p[(i, j)]).collect();
        let k = pair_states.len();
        let mut q_hat = RationalMatrix::zeros(k, k);
        for (r, &(_, j)) in pair_states.iter().enumerate() {
            for (c, &(i2, j2)) in pair_states.iter().enumerate() {
                let mut v = &p[(i2, j2)] * (&q[(j, i2)] - &pi[i2]);
                if r == c {
                    v += Rational::one();
                }
                q_hat[(r, c)] = v;
            }
        }
        Ok(ExpandedChain { base: base.clone(), pair_states, pi_hat, q_hat })
    }

    /// `P_hat[(i,j),(i',j')] = 1{j = i'} P_{j j'}`.
    pub fn transition(&self) -> RationalMatrix {
        let p = self.base.transition();
        let k = self.pair_states.len();
        let mut out = RationalMatrix::zeros(k, k);
        for (r, &(_, j)) in self.pair_states.iter().enumerate() {
            for (c, &(i2, j2)) in self.pair_states.iter().enumerate() {
                if j == i2 {
                    out[(r, c)] = p[(j, j2)].clone();
                }
            }
        }
        out
    }

    pub fn pair_scores(&self) -> Vec<i64> {
        self.pair_states.iter().map(|&(i, j)| self.base.step_score(i, j)).collect()
    }

    pub fn pair_labels(&self) -> Vec<String> {
        let states = self.base.states();
        self.pair_states.iter().map(|&(i, j)| format!("{}>{}", states[i], states[j])).collect()
    }

    /// The pair chain as an ordinary state-scored chain.
    pub fn to_chain(&self) -> Result<ChainSpec> {
        ChainSpec::with_state_scores(self.pair_labels(), self.transition(), self.pair_scores())
    }

    /// Checks that `pi_hat` is stationary for `P_hat` and that `Q_hat` is the
    /// group inverse of `I - P_hat`.
    pub fn verify(&self) -> bool {
        let p_hat = self.transition();
        let sum: Rational = self.pi_hat.iter().sum();
        if !sum.is_one() || p_hat.vec_mul(&self.pi_hat) != self.pi_hat {
            return false;
        }
        let k = self.pair_states.len();
        let a = &RationalMatrix::identity(k) - &p_hat;
        let aq = &a * &self.q_hat;
        let qa = &self.q_hat * &a;
        aq == qa && &aq * &a == a && &qa * &self.q_hat == self.q_hat
    }
}

/// Cumulants for a per-edge score `S_n = sum g(W_{k-1}, W_k)`.
///
/// A per-state chain is accepted too, reading `g(i, j) = g(j)`.
pub fn cumulants_edge_score(chain: &ChainSpec) -> Result<CumulantTriple> {
    let expanded = ExpandedChain::new(chain)?;
    if !expanded.verify() {
        return Err(Error::Inconsistent("expanded chain group inverse".into()));
    }
    let g = DiagScore::new(expanded.pair_scores());
    let closed = triple_from_parts(&expanded.pi_hat, &g, &expanded.q_hat, Some(&expanded.transition()))?;

    let direct = cumulants_state_score(&expanded.to_chain()?)?;
    if direct != closed {
        return Err(Error::Inconsistent(format!("pair-chain cumulants {direct:?} != expanded closed form {closed:?}")));
    }
    Ok(closed)
}

/// Cumulants for whichever score the chain carries.
pub fn cumulants(chain: &ChainSpec) -> Result<CumulantTriple> {
    match chain.score() {
        Score::State(_) => cumulants_state_score(chain),
        Score::Edge(_) => cumulants_edge_score(chain),
    }
}

/// Per-state expected increment: `g` itself for state scores,
/// `sum_j P_ij g(i,j)` for edge scores.
fn expected_step(chain: &ChainSpec) -> Vec<Rational> {
    match chain.score() {
        Score::State(g) => g.iter().map(|&v| rational::int(v)).collect(),
        Score::Edge(_) => (0..chain.len())
            .map(|i| {
                chain
                    .successors(i)
                    .iter()
                    .map(|&j| &chain.transition()[(i, j)] * rational::int(chain.step_score(i, j)))
                    .sum()
            })
            .collect(),
    }
}

/// Limit of `E S_n - n mu` for a chain started from `pi1` with an extra
/// initial score `h(W_1)`: `pi1^T Q g + pi1^T h`.
pub fn initial_distribution_delta(chain: &ChainSpec, pi1: &[Rational], h: Option<&[i64]>) -> Result<Rational> {
    let m = chain.len();
    if pi1.len() != m {
        return Err(Error::InvalidDistribution(format!("{} entries for {m} states", pi1.len())));
    }
    if pi1.iter().any(Signed::is_negative) {
        return Err(Error::InvalidDistribution("negative entry".into()));
    }
    let total: Rational = pi1.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidDistribution(format!("entries sum to {total}")));
    }
    if let Some(h) = h {
        if h.len() != m {
            return Err(Error::InvalidDistribution(format!("{} offsets for {m} states", h.len())));
        }
    }
    let gi = group_inverse(chain)?;
    let mut delta = dot(pi1, &gi.q().mul_vec(&expected_step(chain)));
    if let Some(h) = h {
        delta += dot(pi1, &h.iter().map(|&v| rational::int(v)).collect::<Vec<_>>());
    }
    Ok(delta)
}

/// Exact partial sums `sum_{k=1}^{K} (E X_k - mu)` for `K = 1..=terms`.
pub fn delta_partial_sums(chain: &ChainSpec, pi1: &[Rational], terms: usize) -> Result<Vec<Rational>> {
    let gi = group_inverse(chain)?;
    let step = expected_step(chain);
    let mu = dot(gi.pi(), &step);
    let mut dist = pi1.to_vec();
    let mut acc = Rational::zero();
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        acc += dot(&dist, &step) - &mu;
        out.push(acc.clone());
        dist = chain.transition().vec_mul(&dist);
    }
    Ok(out)
}
