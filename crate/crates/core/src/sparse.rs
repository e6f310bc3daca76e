//! Sparse exact matrices and Lie-algebra closure.
//!
//! Vector-field systems reach 512×512 and the largest even Clifford model
//! lives on ℝ¹²⁸; every matrix involved is a signed permutation or a short
//! sum of them, so row lists keep products cheap.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;

/// Row-compressed matrix; each row is sorted by column with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> SparseMatrix {
        SparseMatrix { rows: n, cols: n, data: (0..n).map(|i| vec![(i, Rational::one())]).collect() }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, Rational)>) -> Result<SparseMatrix> {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); rows];
        for (i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::DimensionMismatch(format!("entry ({i},{j}) outside {rows}x{cols}")));
            }
            *acc[i].entry(j).or_insert_with(Rational::zero) += v;
        }
        let data = acc
            .into_iter()
            .map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Ok(SparseMatrix { rows, cols, data })
    }

    pub fn from_dense(m: &Matrix) -> SparseMatrix {
        let data = (0..m.rows())
            .map(|i| {
                m.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect();
        SparseMatrix { rows: m.rows(), cols: m.cols(), data }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.rows, self.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                m[(i, *j)] = v.clone();
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

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &[(usize, Rational)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        match self.data[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.data[i][k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// All stored entries as `(row, col, value)`.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.data[*k] {
                        *acc.entry(*j).or_insert_with(Rational::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(SparseMatrix { rows: self.rows, cols: other.cols, data })
    }

    fn combine(&self, other: &SparseMatrix, sign: &Rational) -> Result<SparseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| merge_rows(a, b, sign))
            .collect();
        Ok(SparseMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.combine(other, &Rational::one())
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.combine(other, &-Rational::one())
    }

    pub fn scale(&self, s: &Rational) -> SparseMatrix {
        if s.is_zero() {
            return SparseMatrix::zeros(self.rows, self.cols);
        }
        let data = self
            .data
            .iter()
            .map(|r| r.iter().map(|(j, v)| (*j, v * s)).collect())
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> SparseMatrix {
        self.scale(&-Rational::one())
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn bracket(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn is_skew(&self) -> bool {
        self.rows == self.cols && *self == self.transpose().neg()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    /// `AᵀA = Id`.
    pub fn is_orthogonal(&self) -> bool {
        self.rows == self.cols
            && self.transpose().mul(self).is_ok_and(|p| p == SparseMatrix::identity(self.rows))
    }

    /// Kronecker product `a ⊗ b`.
    pub fn kron(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
        let mut data = Vec::with_capacity(a.rows * b.rows);
        for arow in &a.data {
            for brow in &b.data {
                let mut row = Vec::with_capacity(arow.len() * brow.len());
                for (ja, va) in arow {
                    for (jb, vb) in brow {
                        row.push((ja * b.cols + jb, va * vb));
                    }
                }
                data.push(row);
            }
        }
        SparseMatrix { rows: a.rows * b.rows, cols: a.cols * b.cols, data }
    }

    /// `diag(a, a, …, a)` with `copies` blocks.
    pub fn repeat_diag(&self, copies: usize) -> SparseMatrix {
        SparseMatrix::kron(&SparseMatrix::identity(copies), self)
    }

    pub fn block_diag(blocks: &[SparseMatrix]) -> SparseMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows);
        let mut c0 = 0;
        for b in blocks {
            for r in &b.data {
                data.push(r.iter().map(|(j, v)| (j + c0, v.clone())).collect());
            }
            c0 += b.cols;
        }
        SparseMatrix { rows, cols, data }
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .map(|r| r.iter().map(|(j, a)| a * &v[*j]).sum())
            .collect())
    }

    /// Entries flattened to `(row·cols + col, value)`, sorted.
    fn flat(&self) -> Vec<(usize, Rational)> {
        self.triplets().map(|(i, j, v)| (i * self.cols + j, v.clone())).collect()
    }
}

fn merge_rows(a: &[(usize, Rational)], b: &[(usize, Rational)], sign: &Rational) -> Vec<(usize, Rational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, &b[j].1 * sign));
            j += 1;
        } else {
            let v = &a[i].1 + &(&b[j].1 * sign);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental row echelon basis of sparse vectors, used to test membership
/// in a growing span.
#[derive(Default, Debug, Clone)]
pub struct SparseSpan {
    // Pivot position → vector whose first entry is at the pivot with value 1.
    pivots: BTreeMap<usize, Vec<(usize, Rational)>>,
}

impl SparseSpan {
    pub fn new() -> SparseSpan {
        SparseSpan::default()
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, v: &[(usize, Rational)]) -> BTreeMap<usize, Rational> {
        let mut v: BTreeMap<usize, Rational> = v.iter().cloned().collect();
        let mut cursor = 0;
        while let Some((&pos, c)) = v.range(cursor..).next() {
            if let Some(p) = self.pivots.get(&pos) {
                let c = c.clone();
                for (k, x) in p {
                    let e = v.entry(*k).or_insert_with(Rational::zero);
                    *e -= &c * x;
                    if e.is_zero() {
                        v.remove(k);
                    }
                }
            }
            cursor = pos + 1;
        }
        v
    }

    pub fn contains(&self, v: &[(usize, Rational)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` if it is independent of the span; returns whether it was added.
    pub fn insert(&mut self, v: &[(usize, Rational)]) -> bool {
        let r = self.reduce(v);
        let Some((&pivot, lead)) = r.iter().next() else {
            return false;
        };
        let inv = lead.recip();
        let vec = r.iter().map(|(k, x)| (*k, x * &inv)).collect();
        self.pivots.insert(pivot, vec);
        true
    }
}

/// Dimension of the Lie algebra generated by `generators` under the
/// commutator, computed exactly on sparse matrices.
pub fn lie_closure_dim_sparse(generators: &[SparseMatrix], max_dim: usize) -> Result<usize> {
    let Some(first) = generators.first() else {
        return Ok(0);
    };
    let n = first.rows();
    for g in generators {
        if g.rows() != n || g.cols() != n {
            return Err(Error::DimensionMismatch("generators must share one square shape".into()));
        }
        if !g.is_skew() {
            return Err(Error::NotSkew);
        }
    }
    let mut span = SparseSpan::new();
    let mut basis: Vec<SparseMatrix> = Vec::new();
    for g in generators {
        if span.insert(&g.flat()) {
            basis.push(g.clone());
            if basis.len() > max_dim {
                return Err(Error::ClosureBound(max_dim));
            }
        }
    }
    // Bracket each basis element with every earlier one exactly once; new
    // elements are appended and processed in turn.
    let mut next = 0;
    while next < basis.len() {
        let brackets: Vec<SparseMatrix> = (0..next)
            .into_par_iter()
            .map(|j| basis[next].bracket(&basis[j]))
            .collect::<Result<_>>()?;
        for b in brackets {
            if !b.is_zero() && span.insert(&b.flat()) {
                basis.push(b);
                if basis.len() > max_dim {
                    return Err(Error::ClosureBound(max_dim));
                }
            }
        }
        next += 1;
    }
    Ok(basis.len())
}

/// Dense front end of [`lie_closure_dim_sparse`].
pub fn lie_closure_dim(generators: &[Matrix], max_dim: usize) -> Result<usize> {
    for g in generators {
        if !g.is_square() {
            return Err(Error::NotSquare { rows: g.rows(), cols: g.cols() });
        }
    }
    let sparse: Vec<SparseMatrix> = generators.iter().map(SparseMatrix::from_dense).collect();
    lie_closure_dim_sparse(&sparse, max_dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn elementary_skew(n: usize, i: usize, j: usize) -> SparseMatrix {
        SparseMatrix::from_triplets(n, n, [(i, j, q(1)), (j, i, q(-1))]).unwrap()
    }

    #[test]
    fn dense_roundtrip_and_product() {
        let a = Matrix::from_i64(2, 3, &[1, 0, 2, 0, -1, 0]).unwrap();
        let b = Matrix::from_i64(3, 2, &[0, 1, 1, 0, 3, 0]).unwrap();
        let sa = SparseMatrix::from_dense(&a);
        assert_eq!(sa.to_dense(), a);
        let prod = sa.mul(&SparseMatrix::from_dense(&b)).unwrap();
        assert_eq!(prod.to_dense(), a.mat_mul(&b).unwrap());
    }

    #[test]
    fn so_n_closure() {
        // E_{12} and E_{23} generate so(3); adding E_{34} generates so(4).
        let g3 = [elementary_skew(4, 0, 1), elementary_skew(4, 1, 2)];
        assert_eq!(lie_closure_dim_sparse(&g3, 100).unwrap(), 3);
        let g4 = [elementary_skew(4, 0, 1), elementary_skew(4, 1, 2), elementary_skew(4, 2, 3)];
        assert_eq!(lie_closure_dim_sparse(&g4, 100).unwrap(), 6);
        assert!(matches!(lie_closure_dim_sparse(&g4, 4), Err(Error::ClosureBound(4))));
    }

    #[test]
    fn single_generator_is_abelian() {
        assert_eq!(lie_closure_dim_sparse(&[elementary_skew(3, 0, 2)], 10).unwrap(), 1);
    }

    #[test]
    fn rejects_non_skew() {
        let sym = SparseMatrix::identity(3);
        assert!(matches!(lie_closure_dim_sparse(&[sym], 10), Err(Error::NotSkew)));
    }

    #[test]
    fn kron_matches_dense_definition() {
        let a = Matrix::from_i64(2, 2, &[0, 1, -1, 0]).unwrap();
        let b = Matrix::from_i64(2, 2, &[1, 2, 3, 4]).unwrap();
        let k = SparseMatrix::kron(&SparseMatrix::from_dense(&a), &SparseMatrix::from_dense(&b));
        assert_eq!(k.to_dense(), Matrix::kron(&a, &b));
    }

    proptest! {
        #[test]
        fn closure_independent_of_order(perm in Just((0..5).collect::<Vec<usize>>()).prop_shuffle()) {
            let gens: Vec<SparseMatrix> = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]
                .iter()
                .map(|&(i, j)| elementary_skew(5, i, j))
                .collect();
            let shuffled: Vec<SparseMatrix> = perm.iter().map(|&i| gens[i].clone()).collect();
            prop_assert_eq!(lie_closure_dim_sparse(&shuffled, 100).unwrap(), 10);
        }

        #[test]
        fn span_rank_matches_dense_rank(rows in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 5), 1..7)) {
            let mut span = SparseSpan::new();
            for r in &rows {
                let v: Vec<(usize, Rational)> = r.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i, q(*x))).collect();
                span.insert(&v);
            }
            let flat: Vec<i64> = rows.iter().flatten().copied().collect();
            let dense = Matrix::from_i64(rows.len(), 5, &flat).unwrap();
            prop_assert_eq!(span.dim(), dense.rank());
        }
    }
}
