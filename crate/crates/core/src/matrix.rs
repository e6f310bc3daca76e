//! Dense exact matrices.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A dense row-major matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Result<Matrix> {
        Matrix::from_vec(rows, cols, data.iter().map(|&v| Rational::from(v)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
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

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    fn require_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product of a chain of matrices, left to right.
    pub fn product<'a>(mats: impl IntoIterator<Item = &'a Matrix>) -> Result<Matrix> {
        let mut it = mats.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty product".into()))?
            .clone();
        it.try_fold(first, |acc, m| acc.mat_mul(m))
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.require_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.require_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &Rational) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn neg(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> Result<bool> {
        self.require_square()?;
        Ok((0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)])))
    }

    pub fn is_skew(&self) -> Result<bool> {
        self.require_square()?;
        Ok((0..self.rows).all(|i| (i..self.cols).all(|j| self[(i, j)] == -&self[(j, i)])))
    }

    pub fn trace(&self) -> Result<Rational> {
        self.require_square()?;
        Ok((0..self.rows).map(|i| &self[(i, i)]).sum())
    }

    /// `[a, b] = ab − ba`.
    pub fn bracket(&self, other: &Matrix) -> Result<Matrix> {
        self.mat_mul(other)?.sub(&other.mat_mul(self)?)
    }

    /// `tr(AᵀB)` without forming the product.
    pub fn frobenius(&self, other: &Matrix) -> Result<Rational> {
        self.require_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum())
    }

    /// `[[a, b], [c, d]]` for square blocks of equal size.
    pub fn block2(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Matrix> {
        let n = a.rows;
        for m in [a, b, c, d] {
            if m.rows != n || m.cols != n {
                return Err(Error::DimensionMismatch("blocks must be square of equal size".into()));
            }
        }
        Ok(Matrix::from_fn(2 * n, 2 * n, |i, j| {
            let blk = match (i < n, j < n) {
                (true, true) => a,
                (true, false) => b,
                (false, true) => c,
                (false, false) => d,
            };
            blk[(i % n, j % n)].clone()
        }))
    }

    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Kronecker product `a ⊗ b`.
    pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
        Matrix::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
            let x = &a[(i / b.rows, j / b.cols)];
            if x.is_zero() {
                Rational::zero()
            } else {
                x * &b[(i % b.rows, j % b.cols)]
            }
        })
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Rank by fraction-free (Bareiss) elimination over the integers.
    pub fn rank(&self) -> usize {
        let mut rows = integer_rows(self);
        bareiss_rank(&mut rows, self.cols)
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> Result<Rational> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(Rational::one());
        }
        // Scale each row to integers, then undo the scaling at the end.
        let mut scale = Rational::one();
        let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let l = self.row(i).iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
            scale = scale * Rational::from_bigint(l.clone());
            a.push(self.row(i).iter().map(|x| x.numer() * (&l / x.denom())).collect());
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let d = Rational::from_bigint(sign * &a[n - 1][n - 1]);
        Ok(d / scale)
    }
}

fn integer_rows(m: &Matrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

fn bareiss_rank(a: &mut [Vec<BigInt>], cols: usize) -> usize {
    let nrows = a.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (pivot_rows, rest) = a.split_at_mut(rank + 1);
        let pr = &pivot_rows[rank];
        for row in rest.iter_mut() {
            for j in col + 1..cols {
                let v = &row[j] * &pr[col] - &row[col] * &pr[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pr[col].clone();
        rank += 1;
    }
    rank
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank of the Gram matrix under `⟨A, B⟩ = tr(AᵀB)/n`: the number of linearly
/// independent matrices in the list.
pub fn independence_count(mats: &[Matrix]) -> Result<usize> {
    let Some(first) = mats.first() else {
        return Ok(0);
    };
    let n = Rational::from(first.rows() as i64);
    let k = mats.len();
    let mut gram = Matrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let g = mats[i].frobenius(&mats[j])? / &n;
            gram[(j, i)] = g.clone();
            gram[(i, j)] = g;
        }
    }
    Ok(gram.rank())
}
