//! Dense exact matrices over [`Rational`] with a fraction-free solver.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_cols), "ragged matrix");
        RationalMatrix { rows: n_rows, cols: n_cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, v) in entries.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    /// The rank-one matrix `column * row^T`.
    pub fn outer(column: &[Rational], row: &[Rational]) -> Self {
        let mut m = Self::zeros(column.len(), row.len());
        for (i, c) in column.iter().enumerate() {
            for (j, r) in row.iter().enumerate() {
                m[(i, j)] = c * r;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        RationalMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * factor).collect() }
    }

    /// `M v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b)).collect()
    }

    /// `v^T M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Rational::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                let a = &self[(i, j)];
                if !a.is_zero() {
                    *slot += vi * a;
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(rational::to_f64).collect()).collect()
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| self.row(i).iter().map(rational::render).collect()).collect()
    }

    /// Solves `self * X = rhs` exactly.
    ///
    /// Each row of the augmented system is cleared of denominators and the
    /// integer system is triangularized with Bareiss' fraction-free
    /// elimination, so every intermediate division is exact.
    pub fn solve(&self, rhs: &RationalMatrix) -> Result<RationalMatrix> {
        assert!(self.is_square(), "solve needs a square matrix");
        assert_eq!(self.rows, rhs.rows);
        let n = self.rows;
        let width = n + rhs.cols;

        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let entries: Vec<&Rational> = self.row(i).iter().chain(rhs.row(i)).collect();
                let lcm = entries.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                entries.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
            })
            .collect();

        let mut prev = BigInt::one();
        for k in 0..n {
            let pivot = (k..n).find(|&r| !m[r][k].is_zero()).ok_or(Error::SingularMatrix)?;
            m.swap(k, pivot);
            let (head, tail) = m.split_at_mut(k + 1);
            let pivot_row = &head[k];
            for row in tail.iter_mut() {
                let factor = row[k].clone();
                for j in k + 1..width {
                    let v = &row[j] * &pivot_row[k] - &factor * &pivot_row[j];
                    row[j] = v / &prev;
                }
                row[k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }

        let mut x = RationalMatrix::zeros(n, rhs.cols);
        for c in 0..rhs.cols {
            for i in (0..n).rev() {
                let mut acc = Rational::from_integer(m[i][n + c].clone());
                for j in i + 1..n {
                    if !m[i][j].is_zero() {
                        acc -= Rational::from_integer(m[i][j].clone()) * &x[(j, c)];
                    }
                }
                x[(i, c)] = acc / Rational::from_integer(m[i][i].clone());
            }
        }
        Ok(x)
    }

    pub fn solve_vec(&self, rhs: &[Rational]) -> Result<Vec<Rational>> {
        let column = RationalMatrix { rows: rhs.len(), cols: 1, data: rhs.to_vec() };
        Ok(self.solve(&column)?.data)
    }

    pub fn inverse(&self) -> Result<RationalMatrix> {
        self.solve(&RationalMatrix::identity(self.rows))
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a RationalMatrix> for &'a RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a RationalMatrix> for &'a RationalMatrix {
    type Output = RationalMatrix;
    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a RationalMatrix> for &'a RationalMatrix {
    type Output = RationalMatrix;
    fn sub(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i).iter().map(rational::render).collect::<Vec<_>>()))
            .finish()
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}
