//! Exact stationary distribution, group inverse, mean first passage times
//! and expected visits for irreducible finite chains.

use num_traits::{One, Signed, Zero};

use crate::chain::ChainSpec;
use crate::error::{Error, Result};
use crate::linalg::{dot, RationalMatrix};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDist {
    pub pi: Vec<Rational>,
}

pub fn stationary_distribution(chain: &ChainSpec) -> Result<StationaryDist> {
    chain.check_irreducible()?;
    let m = chain.len();
    let p = chain.transition();
    // pi^T (I - P) = 0 with the last equation swapped for sum(pi) = 1
    let mut system = &RationalMatrix::identity(m) - p;
    for i in 0..m {
        system[(i, m - 1)] = Rational::one();
    }
    let mut rhs = vec![Rational::zero(); m];
    rhs[m - 1] = Rational::one();
    let pi = system.transpose().solve_vec(&rhs)?;

    let sum: Rational = pi.iter().sum();
    if !sum.is_one() || p.vec_mul(&pi) != pi || pi.iter().any(|v| !v.is_positive()) {
        return Err(Error::SingularMatrix);
    }
    Ok(StationaryDist { pi })
}

/// `Q = (I - P)^#`, the group inverse, together with the stationary
/// distribution it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupInverseMatrix {
    q: RationalMatrix,
    pi: Vec<Rational>,
}

impl GroupInverseMatrix {
    pub fn q(&self) -> &RationalMatrix {
        &self.q
    }

    /// `Q' = Q - I`.
    pub fn q_prime(&self) -> RationalMatrix {
        &self.q - &RationalMatrix::identity(self.q.rows())
    }

    pub fn pi(&self) -> &[Rational] {
        &self.pi
    }

    /// Checks `AQ = QA`, `AQA = A`, `QAQ = Q`, `(I-P)Q = I - 1 pi^T` and
    /// `Q 1 = 0` for `A = I - P`.
    pub fn satisfies_identities(&self, p: &RationalMatrix) -> bool {
        let m = p.rows();
        let a = &RationalMatrix::identity(m) - p;
        let aq = &a * &self.q;
        let qa = &self.q * &a;
        let ones = vec![Rational::one(); m];
        let projector = &RationalMatrix::identity(m) - &RationalMatrix::outer(&ones, &self.pi);
        aq == qa
            && &aq * &a == a
            && &qa * &self.q == self.q
            && aq == projector
            && self.q.mul_vec(&ones).iter().all(Zero::is_zero)
    }

    /// Whether `Q` is also the Moore-Penrose pseudoinverse of `I - P`,
    /// i.e. whether `AQ` and `QA` are symmetric.
    pub fn is_moore_penrose(&self, p: &RationalMatrix) -> bool {
        let a = &RationalMatrix::identity(p.rows()) - p;
        (&a * &self.q).is_symmetric() && (&self.q * &a).is_symmetric()
    }
}

/// `(I - P + 1 pi^T)^{-1} - 1 pi^T`.
pub fn group_inverse(chain: &ChainSpec) -> Result<GroupInverseMatrix> {
    let pi = stationary_distribution(chain)?.pi;
    let m = chain.len();
    let ones = vec![Rational::one(); m];
    let rank_one = RationalMatrix::outer(&ones, &pi);
    let fundamental = &(&RationalMatrix::identity(m) - chain.transition()) + &rank_one;
    let q = &fundamental.inverse()? - &rank_one;
    let gi = GroupInverseMatrix { q, pi };
    if !gi.satisfies_identities(chain.transition()) {
        return Err(Error::Inconsistent("group inverse identities".into()));
    }
    Ok(gi)
}

/// Mean first passage times `m_ij = (Q_jj - Q_ij) / pi_j`, with `m_ii = 0`.
pub fn mean_first_passage(chain: &ChainSpec) -> Result<RationalMatrix> {
    let gi = group_inverse(chain)?;
    Ok(passage_times_from(&gi))
}

pub(crate) fn passage_times_from(gi: &GroupInverseMatrix) -> RationalMatrix {
    let q = gi.q();
    let m = q.rows();
    let mut out = RationalMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            if i != j {
                out[(i, j)] = (&q[(j, j)] - &q[(i, j)]) / &gi.pi()[j];
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisitsReport {
    pub source: String,
    pub target: String,
    /// Expected visits to `source` before the first visit to `target`,
    /// counting the start.
    pub expected_visits: Rational,
    pub route: &'static str,
}

/// Expected visits to `a` before hitting `b`, from the group-inverse closed
/// form and from the direct linear system `N_i = 1{i=a} + sum_{j != b} P_ij N_j`.
pub fn expected_visits_before(chain: &ChainSpec, a: &str, b: &str) -> Result<VisitsReport> {
    let (ia, ib) = (chain.index_of(a)?, chain.index_of(b)?);
    if ia == ib {
        return Err(Error::SameState(a.to_string()));
    }
    let gi = group_inverse(chain)?;
    let closed = killed_inverse_entry(&gi, ia, ia, ib);
    let direct = visits_direct_solve(chain, ia, ib)?;
    if closed != direct {
        return Err(Error::Inconsistent(format!("visits closed form {closed} != direct solve {direct}")));
    }
    Ok(VisitsReport {
        source: a.to_string(),
        target: b.to_string(),
        expected_visits: closed,
        route: "group-inverse closed form = direct solve",
    })
}

/// Entry `(i, j)` of `(I - P_{!=b})^{-1}`:
/// `Q_ij + (Q_bb + (I-Q)_ib) pi_j / pi_b - Q_bj`.
pub fn killed_inverse_entry(gi: &GroupInverseMatrix, i: usize, j: usize, b: usize) -> Rational {
    let q = gi.q();
    let i_minus_q_ib = if i == b { Rational::one() - &q[(i, b)] } else { -q[(i, b)].clone() };
    &q[(i, j)] + (&q[(b, b)] + i_minus_q_ib) * &gi.pi()[j] / &gi.pi()[b] - &q[(b, j)]
}

/// `(I - P_{!=b})^{-1}` assembled from the closed form.
pub fn killed_inverse(gi: &GroupInverseMatrix, b: usize) -> RationalMatrix {
    let m = gi.q().rows();
    let mut out = RationalMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            out[(i, j)] = killed_inverse_entry(gi, i, j, b);
        }
    }
    out
}

/// Uniform-`pi` specialisation `1{i=b} + Q_ij + Q_bb - Q_ib - Q_bj`.
pub fn killed_inverse_uniform(gi: &GroupInverseMatrix, b: usize) -> RationalMatrix {
    let q = gi.q();
    let m = q.rows();
    let mut out = RationalMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let base = if i == b { Rational::one() } else { Rational::zero() };
            out[(i, j)] = base + &q[(i, j)] + &q[(b, b)] - &q[(i, b)] - &q[(b, j)];
        }
    }
    out
}

/// `P_{!=b}`: `P` with column `b` zeroed.
pub fn kill_column(p: &RationalMatrix, b: usize) -> RationalMatrix {
    let mut out = p.clone();
    for i in 0..p.rows() {
        out[(i, b)] = Rational::zero();
    }
    out
}

fn visits_direct_solve(chain: &ChainSpec, a: usize, b: usize) -> Result<Rational> {
    let m = chain.len();
    let system = &RationalMatrix::identity(m) - &kill_column(chain.transition(), b);
    let mut rhs = vec![Rational::zero(); m];
    rhs[a] = Rational::one();
    let n = system.solve_vec(&rhs)?;
    Ok(n[a].clone())
}

/// `pi_a (m_ab + m_ba)`: expected visits via the return-through-`b` time.
pub fn visits_via_passage_times(chain: &ChainSpec, a: usize, b: usize) -> Result<Rational> {
    let gi = group_inverse(chain)?;
    let mfpt = passage_times_from(&gi);
    Ok(&gi.pi()[a] * (&mfpt[(a, b)] + &mfpt[(b, a)]))
}

/// `sum_i pi_i x_i`.
pub fn expectation(pi: &[Rational], x: &[Rational]) -> Rational {
    dot(pi, x)
}
