//! The value-length lattice of closed walks and the certificates read off
//! from it.
//!
//! A closed walk through the base state contributes `(score, length)`. The
//! walks generate a subgroup `L` of `Z^2`; the expansion needs `L = Z^2`.
//! When `L` has finite index `N > 1` the scores obey a congruence mod `N`;
//! when `L` has rank one the score is a bounded perturbation of `b n`.

use std::collections::VecDeque;

use num_complex::Complex64;
use num_integer::Integer;
use serde::Serialize;

use crate::chain::ChainSpec;
use crate::error::{Error, Result};

/// Lattice index; `Infinite` when the rank is below two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Period {
    Finite(u64),
    #[serde(serialize_with = "ser_infinite")]
    Infinite,
}

fn ser_infinite<S: serde::Serializer>(s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str("infinite")
}

impl std::fmt::Display for Period {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Period::Finite(n) => write!(f, "{n}"),
            Period::Infinite => f.write_str("infinite"),
        }
    }
}

/// Hermite basis `{(a, 0), (c, d)}` with `0 <= c < a` when `a > 0`; rows are
/// `(value, length)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hnf {
    pub a: i64,
    pub c: i64,
    pub d: i64,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        usize::from(self.a != 0) + usize::from(self.d != 0)
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        [[self.a, 0], [self.c, self.d]]
    }

    pub fn contains(&self, (x, y): (i64, i64)) -> bool {
        if self.d == 0 {
            return y == 0 && if self.a == 0 { x == 0 } else { x % self.a == 0 };
        }
        if y % self.d != 0 {
            return false;
        }
        let rest = x - (y / self.d) * self.c;
        if self.a == 0 {
            rest == 0
        } else {
            rest % self.a == 0
        }
    }
}

/// Incremental Hermite normal form of a list of `(value, length)` vectors.
pub fn hermite_normal_form(generators: &[(i64, i64)]) -> Hnf {
    let (mut a, mut c, mut d) = (0i128, 0i128, 0i128);
    for &(x, y) in generators {
        let (x, y) = (i128::from(x), i128::from(y));
        if y == 0 {
            a = a.gcd(&x);
        } else if d == 0 {
            (c, d) = (x, y);
        } else {
            let e = d.extended_gcd(&y);
            let kernel = (y / e.gcd) * c - (d / e.gcd) * x;
            a = a.gcd(&kernel);
            c = e.x * c + e.y * x;
            d = e.gcd;
        }
        if d < 0 {
            (c, d) = (-c, -d);
        }
        if a != 0 {
            c = c.rem_euclid(a);
        }
    }
    Hnf { a: a as i64, c: c as i64, d: d as i64 }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeReport {
    pub base_state: usize,
    pub generators: Vec<(i64, i64)>,
    pub hnf: Hnf,
    #[serde(rename = "N")]
    pub period: Period,
    pub b: i64,
    /// Forward BFS paths from the base, `(value, length)` per state.
    #[serde(skip)]
    pub paths: Vec<(i64, i64)>,
}

fn bfs_tree(m: usize, start: usize, next: impl Fn(usize) -> Vec<usize>) -> Vec<Option<usize>> {
    let mut parent = vec![None; m];
    let mut seen = vec![false; m];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        for j in next(i) {
            if !seen[j] {
                seen[j] = true;
                parent[j] = Some(i);
                queue.push_back(j);
            }
        }
    }
    parent
}

fn bfs_order(parent: &[Option<usize>], start: usize) -> Vec<usize> {
    let m = parent.len();
    let mut children = vec![Vec::new(); m];
    for (j, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            children[*p].push(j);
        }
    }
    let mut order = vec![start];
    let mut k = 0;
    while k < order.len() {
        order.extend(children[order[k]].iter().copied());
        k += 1;
    }
    order
}

pub fn value_length_lattice(chain: &ChainSpec) -> Result<LatticeReport> {
    chain.check_irreducible()?;
    let m = chain.len();
    let base = 0;
    let predecessors: Vec<Vec<usize>> =
        (0..m).map(|j| (0..m).filter(|&i| chain.successors(i).contains(&j)).collect()).collect();

    let fwd = bfs_tree(m, base, |i| chain.successors(i).to_vec());
    let mut w = vec![(0i64, 0i64); m];
    for &j in bfs_order(&fwd, base).iter().skip(1) {
        let i = fwd[j].expect("reachable");
        w[j] = (w[i].0 + chain.step_score(i, j), w[i].1 + 1);
    }

    let rev = bfs_tree(m, base, |j| predecessors[j].clone());
    let mut r = vec![(0i64, 0i64); m];
    for &i in bfs_order(&rev, base).iter().skip(1) {
        let j = rev[i].expect("co-reachable");
        r[i] = (chain.step_score(i, j) + r[j].0, 1 + r[j].1);
    }

    let mut generators: Vec<(i64, i64)> =
        chain.edges().map(|(i, j)| (w[i].0 + chain.step_score(i, j) + r[j].0, w[i].1 + 1 + r[j].1)).collect();
    generators.extend((0..m).map(|i| (w[i].0 + r[i].0, w[i].1 + r[i].1)));

    let hnf = hermite_normal_form(&generators);
    let period = if hnf.rank() == 2 { Period::Finite((hnf.a * hnf.d) as u64) } else { Period::Infinite };
    Ok(LatticeReport { base_state: base, generators, hnf, period, b: hnf.c, paths: w })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Degenerate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Em4Certificate {
    pub verdict: Verdict,
    #[serde(rename = "N")]
    pub period: Period,
    pub b: i64,
    /// State potentials; empty when the condition holds.
    pub gamma: Vec<i64>,
}

impl Em4Certificate {
    /// Re-checks the congruence (or exact identity) on every edge.
    pub fn verify(&self, chain: &ChainSpec) -> bool {
        match (self.verdict, self.period) {
            (Verdict::Holds, Period::Finite(1)) => true,
            (Verdict::Fails, Period::Finite(n)) if n >= 2 => {
                let n = n as i64;
                chain
                    .edges()
                    .all(|(i, j)| (self.gamma[i] + chain.step_score(i, j) - self.b - self.gamma[j]).rem_euclid(n) == 0)
            }
            (Verdict::Degenerate, Period::Infinite) => {
                chain.edges().all(|(i, j)| self.gamma[j] == self.gamma[i] + chain.step_score(i, j) - self.b)
            }
            _ => false,
        }
    }
}

fn potentials(lattice: &LatticeReport) -> Vec<i64> {
    let b = lattice.b;
    match lattice.period {
        Period::Finite(n) => lattice.paths.iter().map(|&(v, l)| (v - b * l).rem_euclid(n as i64)).collect(),
        Period::Infinite => lattice.paths.iter().map(|&(v, l)| v - b * l).collect(),
    }
}

pub fn check_em4(chain: &ChainSpec) -> Result<Em4Certificate> {
    chain.check_aperiodic()?;
    let lattice = value_length_lattice(chain)?;
    let cert = match lattice.period {
        Period::Finite(1) => {
            Em4Certificate { verdict: Verdict::Holds, period: Period::Finite(1), b: 0, gamma: Vec::new() }
        }
        Period::Finite(_) => Em4Certificate {
            verdict: Verdict::Fails,
            period: lattice.period,
            b: lattice.b,
            gamma: potentials(&lattice),
        },
        Period::Infinite => Em4Certificate {
            verdict: Verdict::Degenerate,
            period: Period::Infinite,
            b: lattice.b,
            gamma: potentials(&lattice),
        },
    };
    if !cert.verify(chain) {
        return Err(Error::Inconsistent(format!("em4 certificate failed verification: {cert:?}")));
    }
    Ok(cert)
}

/// `S_n = b n + gamma(W_n) - gamma(W_0)`, so `|S_n - b n| <= bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegeneracyCertificate {
    pub b: i64,
    pub gamma: Vec<i64>,
    /// `max |g - b| + 2 max |gamma|`.
    pub bound: i64,
}

pub fn check_sigma2_zero(chain: &ChainSpec) -> Result<Option<DegeneracyCertificate>> {
    let cert = check_em4(chain)?;
    if cert.verdict != Verdict::Degenerate {
        return Ok(None);
    }
    let max_g = chain.edges().map(|(i, j)| (chain.step_score(i, j) - cert.b).abs()).max().unwrap_or(0);
    let max_gamma = cert.gamma.iter().map(|x| x.abs()).max().unwrap_or(0);
    Ok(Some(DegeneracyCertificate { b: cert.b, gamma: cert.gamma, bound: max_g + 2 * max_gamma }))
}

type CMat = Vec<Vec<Complex64>>;

fn cmul(a: &CMat, b: &CMat) -> CMat {
    let m = a.len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); m]; m];
    for i in 0..m {
        for k in 0..m {
            let aik = a[i][k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Heuristic `rho(P(e^{it}))` as `||M^64||_inf^{1/64}`; not a proof.
pub fn spectral_radius_scan(chain: &ChainSpec, t_values: &[f64]) -> Vec<f64> {
    let p = chain.transition().to_f64();
    let m = p.len();
    t_values
        .iter()
        .map(|&t| {
            let mut a: CMat = (0..m)
                .map(|i| (0..m).map(|j| Complex64::from_polar(p[i][j], t * chain.step_score(i, j) as f64)).collect())
                .collect();
            for _ in 0..6 {
                a = cmul(&a, &a);
            }
            let norm = a.iter().map(|row| row.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
            norm.powf(1.0 / 64.0)
        })
        .collect()
}
