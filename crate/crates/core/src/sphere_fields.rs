//! Maximal systems of orthonormal tangent vector fields on spheres.
//!
//! A field is a matrix `A` with value `A·x` at `x`; tangency and
//! orthonormality everywhere on `S^{m−1}` are the three matrix conditions
//! `Aᵀ = −A`, `AᵀA = Id` and `A_iᵀA_j + A_jᵀA_i = 0`.
//!
//! Coordinates of ℝ^{16l} are grouped as `l` sedenions `s = (x, y)`; the
//! conjugation `D` negates every `y`.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cayley_dickson::CdElement;
use crate::clifford::CliffordSystem;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;
use crate::sparse::SparseMatrix;

/// `m = (2k+1)·2^p·16^q` with `0 ≤ p ≤ 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HrDecomposition {
    pub m: usize,
    pub k: usize,
    pub p: u32,
    pub q: u32,
}

impl HrDecomposition {
    pub fn recompose(&self) -> usize {
        (2 * self.k + 1) << (self.p + 4 * self.q)
    }

    /// `2^p + 8q − 1`.
    pub fn sigma(&self) -> usize {
        (1usize << self.p) + 8 * self.q as usize - 1
    }
}

pub fn hr_decompose(m: usize) -> Result<HrDecomposition> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let twos = m.trailing_zeros();
    Ok(HrDecomposition { m, k: (m >> twos) / 2, p: twos % 4, q: twos / 4 })
}

pub fn sigma(m: usize) -> Result<usize> {
    Ok(hr_decompose(m)?.sigma())
}

/// Where the formal left multiplications came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LeftMultSource {
    Listed,
    /// The listed rows failed verification; these rows were replaced by the
    /// octonion table.
    TableCorrected { corrections: Vec<LeftMultDiff> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorFieldSystem {
    pub m: usize,
    pub fields: Vec<SparseMatrix>,
    pub labels: Vec<String>,
    pub left_mult: Option<LeftMultSource>,
}

impl VectorFieldSystem {
    pub fn new(m: usize, fields: Vec<SparseMatrix>, labels: Vec<String>) -> Result<VectorFieldSystem> {
        if fields.len() != labels.len() {
            return Err(Error::InvalidArgument("one label per field".into()));
        }
        if let Some(f) = fields.iter().find(|f| f.rows() != m || f.cols() != m) {
            return Err(Error::DimensionMismatch(format!("{}x{} field on R^{m}", f.rows(), f.cols())));
        }
        Ok(VectorFieldSystem { m, fields, labels, left_mult: None })
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    /// The `copies`-fold block-diagonal repetition of every field.
    pub fn diagonal_extension(&self, copies: usize) -> VectorFieldSystem {
        VectorFieldSystem {
            m: self.m * copies,
            fields: self.fields.iter().map(|f| f.repeat_diag(copies)).collect(),
            labels: self.labels.clone(),
            left_mult: self.left_mult.clone(),
        }
    }

    /// The field values at `x`.
    pub fn at(&self, x: &[Rational]) -> Result<Vec<Vec<Rational>>> {
        self.fields.iter().map(|f| f.apply(x)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum FieldFailure {
    NotSkew(usize),
    NotOrthogonal(usize),
    NotAnticommuting(usize, usize),
    /// `⟨A_i x, x⟩ ≠ 0` at sample `s`.
    NotTangent { field: usize, sample: usize },
    /// `⟨A_i x, A_j x⟩ ≠ δ_ij |x|²` at sample `s`.
    NotOrthonormal { i: usize, j: usize, sample: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldReport {
    pub m: usize,
    pub count: usize,
    pub expected: usize,
    pub samples: usize,
    pub failures: Vec<FieldFailure>,
}

impl FieldReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn count_matches(&self) -> bool {
        self.count == self.expected
    }
}

impl fmt::Display for FieldReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "S^{}: {} fields (sigma = {}), {} sampled points, {}",
            self.m - 1,
            self.count,
            self.expected,
            self.samples,
            if self.passed() { "pass".to_string() } else { format!("{} failures", self.failures.len()) }
        )
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact matrix conditions plus the pointwise identities at `samples` random
/// integer points.
pub fn verify_system(v: &VectorFieldSystem, samples: usize, seed: u64) -> FieldReport {
    use rayon::prelude::*;
    let mut failures = Vec::new();
    let ts: Vec<SparseMatrix> = v.fields.iter().map(SparseMatrix::transpose).collect();
    let id = SparseMatrix::identity(v.m);
    for (i, (a, t)) in v.fields.iter().zip(&ts).enumerate() {
        if *t != a.neg() {
            failures.push(FieldFailure::NotSkew(i));
        }
        if t.mul(a).map_or(true, |p| p != id) {
            failures.push(FieldFailure::NotOrthogonal(i));
        }
    }
    let pairs: Vec<(usize, usize)> = (0..v.len()).flat_map(|i| (i + 1..v.len()).map(move |j| (i, j))).collect();
    let bad: Vec<(usize, usize)> = pairs
        .par_iter()
        .filter(|&&(i, j)| {
            let s = ts[i].mul(&v.fields[j]).and_then(|x| x.add(&ts[j].mul(&v.fields[i])?));
            s.map_or(true, |s| !s.is_zero())
        })
        .copied()
        .collect();
    failures.extend(bad.into_iter().map(|(i, j)| FieldFailure::NotAnticommuting(i, j)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        let x: Vec<Rational> = (0..v.m).map(|_| Rational::from(rng.random_range(-5i64..=5))).collect();
        let n2 = dot(&x, &x);
        let Ok(vals) = v.at(&x) else { continue };
        for (i, ax) in vals.iter().enumerate() {
            if !dot(ax, &x).is_zero() {
                failures.push(FieldFailure::NotTangent { field: i, sample: s });
            }
            for (j, bx) in vals.iter().enumerate().skip(i) {
                let want = if i == j { n2.clone() } else { Rational::from(0) };
                if dot(ax, bx) != want {
                    failures.push(FieldFailure::NotOrthonormal { i, j, sample: s });
                }
            }
        }
    }
    let expected = sigma(v.m).unwrap_or(0);
    FieldReport { m: v.m, count: v.len(), expected, samples, failures }
}

const UNITS: [&str; 8] = ["1", "i", "j", "k", "e", "f", "g", "h"];

/// Listed formal left multiplications `L_u(s¹, …, s^l)`: entry `c` is
/// `±a`, meaning the `c`-th unit carries `±s^a`.
fn listed_rows(l: usize) -> Option<&'static [[i8; 8]]> {
    const L2: [[i8; 8]; 1] = [[-2, 1, 0, 0, 0, 0, 0, 0]];
    const L4: [[i8; 8]; 3] = [
        [-2, 1, -4, 3, 0, 0, 0, 0],
        [-3, 4, 1, -2, 0, 0, 0, 0],
        [-4, -3, 2, 1, 0, 0, 0, 0],
    ];
    const L8: [[i8; 8]; 7] = [
        [-2, 1, -4, 3, -6, 5, 8, -7],
        [-3, 4, 1, -2, -7, -8, 5, 6],
        [-4, -3, 2, 1, -8, 7, -6, 5],
        [-5, 6, 7, 6, 1, -2, -3, -4],
        [-6, -5, 8, -7, 2, 1, 4, -3],
        [-7, -8, -5, 6, 3, -4, 1, 2],
        [-8, 7, -6, -5, 4, 3, -2, 1],
    ];
    match l {
        2 => Some(&L2),
        4 => Some(&L4),
        8 => Some(&L8),
        _ => None,
    }
}

fn level_of(l: usize) -> Result<u32> {
    match l {
        2 => Ok(1),
        4 => Ok(2),
        8 => Ok(3),
        _ => Err(Error::InvalidArgument(format!("formal left multiplication needs l in {{2, 4, 8}}, got {l}"))),
    }
}

/// The listed `l×l` matrices `L_i, L_j, …` (one per imaginary unit).
pub fn listed_left_mult(l: usize) -> Result<Vec<Matrix>> {
    level_of(l)?;
    let rows = listed_rows(l).expect("l checked");
    Ok(rows
        .iter()
        .map(|row| {
            let mut m = Matrix::zeros(l, l);
            for (c, &e) in row.iter().take(l).enumerate() {
                let a = e.unsigned_abs() as usize - 1;
                m[(c, a)] += Rational::from(e.signum() as i64);
            }
            m
        })
        .collect())
}

/// `L_u` from the multiplication table: `(L_u)_{ca} = (u·e_a)_c`.
pub fn table_left_mult(l: usize) -> Result<Vec<Matrix>> {
    let level = level_of(l)?;
    Ok((1..l).map(|u| CdElement::basis(level, u).left_mult_matrix()).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeftMultDiff {
    pub unit: String,
    /// The unit whose coefficient differs.
    pub component: String,
    pub listed: String,
    pub table: String,
}

impl fmt::Display for LeftMultDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L_{}: {} component listed {} table {}", self.unit, self.component, self.listed, self.table)
    }
}

fn describe_row(m: &Matrix, c: usize) -> String {
    let terms: Vec<String> = (0..m.cols())
        .filter(|&a| !m[(c, a)].is_zero())
        .map(|a| format!("{}s{}", if m[(c, a)].signum() < 0 { "-" } else { "+" }, a + 1))
        .collect();
    if terms.is_empty() { "0".into() } else { terms.join("") }
}

/// Rows where the listed formal left multiplications differ from the table.
pub fn left_mult_comparison(l: usize) -> Result<Vec<LeftMultDiff>> {
    let listed = listed_left_mult(l)?;
    let table = table_left_mult(l)?;
    let mut out = Vec::new();
    for (u, (p, t)) in listed.iter().zip(&table).enumerate() {
        for c in 0..l {
            let (a, b) = (describe_row(p, c), describe_row(t, c));
            if a != b {
                out.push(LeftMultDiff { unit: UNITS[u + 1].into(), component: UNITS[c].into(), listed: a, table: b });
            }
        }
    }
    Ok(out)
}

/// `diag(Id₈, −Id₈)` repeated over ℝ^{16l}.
fn conj_d(m: usize) -> SparseMatrix {
    SparseMatrix::from_triplets(m, m, (0..m).map(|i| (i, i, Rational::from(if i % 16 < 8 { 1 } else { -1 }))))
        .expect("diagonal")
}

/// `D₂`: on each ℝ^256 block, negate the second half.
fn conj_d2(m: usize) -> SparseMatrix {
    SparseMatrix::from_triplets(m, m, (0..m).map(|i| (i, i, Rational::from(if i % 256 < 128 { 1 } else { -1 }))))
        .expect("diagonal")
}

/// `J_α = I_αI₉` on ℝ¹⁶, α = 1..8.
pub fn complex_structures() -> Vec<SparseMatrix> {
    let c = CliffordSystem::standard_spin9();
    (0..8).map(|a| SparseMatrix::from_dense(&c.compose_j(&[a, 8]).expect("in range"))).collect()
}

/// The eight fields `I_αI_β`, α ≠ β, on ℝ¹⁶ (β is 1-based).
pub fn fixed_beta_variant(beta: usize) -> Result<VectorFieldSystem> {
    if !(1..=9).contains(&beta) {
        return Err(Error::InvalidArgument(format!("beta must be in 1..9, got {beta}")));
    }
    let c = CliffordSystem::standard_spin9();
    let alphas: Vec<usize> = (1..=9).filter(|&a| a != beta).collect();
    let fields = alphas
        .iter()
        .map(|&a| Ok(SparseMatrix::from_dense(&c.mats()[a - 1].mat_mul(&c.mats()[beta - 1])?)))
        .collect::<Result<_>>()?;
    let labels = alphas.iter().map(|a| format!("I{a}I{beta}")).collect();
    VectorFieldSystem::new(16, fields, labels)
}

fn q0_fields(p: u32) -> Result<VectorFieldSystem> {
    let n = 1usize << p;
    let fields = (1..n)
        .map(|u| SparseMatrix::from_dense(&CdElement::basis(p, u).right_mult_matrix()))
        .collect();
    let labels = (1..n).map(|u| format!("R_{}", UNITS[u])).collect();
    VectorFieldSystem::new(n, fields, labels)
}

fn q1_fields(p: u32, left: &[Matrix]) -> Result<VectorFieldSystem> {
    let l = 1usize << p;
    let m = 16 * l;
    let mut fields: Vec<SparseMatrix> = complex_structures().iter().map(|j| j.repeat_diag(l)).collect();
    let mut labels: Vec<String> = (1..=8).map(|a| format!("J{a}")).collect();
    let d = conj_d(m);
    let id16 = SparseMatrix::identity(16);
    for (u, lm) in left.iter().enumerate() {
        fields.push(d.mul(&SparseMatrix::kron(&SparseMatrix::from_dense(lm), &id16))?);
        labels.push(format!("D(L_{} N)", UNITS[u + 1]));
    }
    VectorFieldSystem::new(m, fields, labels)
}

/// The sixteen level-1 and level-2 fields on ℝ²⁵⁶.
fn level_fields_256() -> Result<(Vec<SparseMatrix>, Vec<String>)> {
    let js = complex_structures();
    let d = conj_d(256);
    let id16 = SparseMatrix::identity(16);
    let mut fields: Vec<SparseMatrix> = js.iter().map(|j| j.repeat_diag(16)).collect();
    let mut labels: Vec<String> = (1..=8).map(|a| format!("J{a}")).collect();
    for (a, j) in js.iter().enumerate() {
        fields.push(d.mul(&SparseMatrix::kron(j, &id16))?);
        labels.push(format!("D(block(J{}) N)", a + 1));
    }
    Ok((fields, labels))
}

/// The extra field on ℝ^{256·2^p} from the unit `u`, with or without `D₂`.
fn q2_extra(p: u32, u: usize, with_d2: bool) -> Result<SparseMatrix> {
    let l = 1usize << p;
    let m = 256 * l;
    let lm = SparseMatrix::from_dense(&CdElement::basis(p, u).left_mult_matrix());
    let base = SparseMatrix::kron(&lm, &SparseMatrix::identity(256));
    let inner = if with_d2 { conj_d2(m).mul(&base)? } else { base };
    conj_d(m).mul(&inner)
}

fn q2_fields(p: u32) -> Result<VectorFieldSystem> {
    let l = 1usize << p;
    let (base, mut labels) = level_fields_256()?;
    let mut fields: Vec<SparseMatrix> = base.iter().map(|f| f.repeat_diag(l)).collect();
    for u in 1..l {
        fields.push(q2_extra(p, u, true)?);
        labels.push(format!("D(D2(L_{} N))", UNITS[u]));
    }
    VectorFieldSystem::new(256 * l, fields, labels)
}

/// `D(L_i N)` on ℝ⁵¹² without the inner conjugation `D₂`.
pub fn naive_512_extra() -> Result<SparseMatrix> {
    q2_extra(1, 1, false)
}

/// The 16 level fields on ℝ⁵¹² followed by the naive extra field.
pub fn naive_512_system() -> Result<VectorFieldSystem> {
    let (base, mut labels) = level_fields_256()?;
    let mut fields: Vec<SparseMatrix> = base.iter().map(|f| f.repeat_diag(2)).collect();
    fields.push(naive_512_extra()?);
    labels.push("D(L_i N)".into());
    VectorFieldSystem::new(512, fields, labels)
}

/// Number of sampled points used when choosing between listed and table rows.
const CHECK_SAMPLES: usize = 2;

/// A maximal system of `σ(m)` fields on `S^{m−1}` for `m` with `q ≤ 2`.
///
/// For `q = 1` the listed formal left multiplications are used when they
/// verify; otherwise the table rows replace them and the differences are
/// recorded in `left_mult`.
pub fn build_fields(m: usize) -> Result<VectorFieldSystem> {
    let hr = hr_decompose(m)?;
    let base = match hr.q {
        0 => q0_fields(hr.p)?,
        1 if hr.p == 0 => q1_fields(0, &[])?,
        1 => {
            let l = 1usize << hr.p;
            let listed = q1_fields(hr.p, &listed_left_mult(l)?)?;
            if verify_system(&listed, 0, 0).passed() {
                VectorFieldSystem { left_mult: Some(LeftMultSource::Listed), ..listed }
            } else {
                let fixed = q1_fields(hr.p, &table_left_mult(l)?)?;
                let corrections = left_mult_comparison(l)?;
                VectorFieldSystem { left_mult: Some(LeftMultSource::TableCorrected { corrections }), ..fixed }
            }
        }
        2 => q2_fields(hr.p)?,
        q => return Err(Error::Unsupported(format!("m = {m} has q = {q}; only q <= 2 is constructed"))),
    };
    Ok(if hr.k == 0 { base } else { base.diagonal_extension(2 * hr.k + 1) })
}

/// Builds and checks `σ(m)` fields for `m`.
pub fn build_and_verify(m: usize, seed: u64) -> Result<(VectorFieldSystem, FieldReport)> {
    let v = build_fields(m)?;
    let r = verify_system(&v, CHECK_SAMPLES, seed);
    Ok((v, r))
}

/// Sparse `(row, col, value)` triplets, 1-based, as exported.
pub fn triplets(f: &SparseMatrix) -> Vec<(usize, usize, String)> {
    f.triplets().map(|(i, j, v)| (i + 1, j + 1, v.to_string())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decomposition() {
        for m in 1..5000 {
            let d = hr_decompose(m).unwrap();
            assert_eq!(d.recompose(), m);
            assert!(d.p <= 3);
        }
        assert_eq!(sigma(16).unwrap(), 8);
        assert_eq!(sigma(256).unwrap(), 16);
        assert_eq!(sigma(512).unwrap(), 17);
        assert_eq!(sigma(48).unwrap(), 8);
        assert_eq!(sigma(7).unwrap(), 0);
        assert!(hr_decompose(0).is_err());
    }

    // Independent oracle: Radon's closed form ρ(2^{c+4d}) = 2^c + 8d.
    #[test]
    fn sigma_matches_radon() {
        for m in 1..3000usize {
            let b = m.trailing_zeros();
            let (c, d) = (b % 4, b / 4);
            assert_eq!(sigma(m).unwrap() + 1, (1 << c) + 8 * d as usize);
        }
    }

    #[test]
    fn small_systems_pass() {
        for m in [1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 80, 128] {
            let (v, r) = build_and_verify(m, 3).unwrap();
            assert!(r.passed(), "m = {m}: {:?}", r.failures);
            assert_eq!(v.len(), sigma(m).unwrap());
        }
    }

    #[test]
    fn j1_swaps_halves() {
        let v = build_fields(16).unwrap();
        let x: Vec<Rational> = (1..=16).map(Rational::from).collect();
        let j1x = v.fields[0].apply(&x).unwrap();
        let want: Vec<Rational> = (9..=16).map(|i| Rational::from(-i)).chain((1..=8).map(Rational::from)).collect();
        assert_eq!(j1x, want);
    }

    #[test]
    fn listed_octonionic_row_has_one_slip() {
        assert!(left_mult_comparison(2).unwrap().is_empty());
        assert!(left_mult_comparison(4).unwrap().is_empty());
        let d = left_mult_comparison(8).unwrap();
        assert_eq!(d.len(), 1, "{d:?}");
        assert_eq!((d[0].unit.as_str(), d[0].component.as_str()), ("e", "k"));
        assert_eq!((d[0].listed.as_str(), d[0].table.as_str()), ("+s6", "+s8"));
        let v = build_fields(128).unwrap();
        assert!(matches!(v.left_mult, Some(LeftMultSource::TableCorrected { .. })));
        assert_eq!(build_fields(64).unwrap().left_mult, Some(LeftMultSource::Listed));
        let listed = q1_fields(3, &listed_left_mult(8).unwrap()).unwrap();
        assert!(!verify_system(&listed, 0, 0).passed());
    }

    #[test]
    fn every_beta_works() {
        for beta in 1..=9 {
            assert!(verify_system(&fixed_beta_variant(beta).unwrap(), 2, beta as u64).passed());
        }
        assert_eq!(fixed_beta_variant(9).unwrap().fields, complex_structures());
        assert!(fixed_beta_variant(0).is_err() && fixed_beta_variant(10).is_err());
    }

    #[test]
    fn broken_systems_are_caught() {
        let j = complex_structures();
        let dup = VectorFieldSystem::new(16, vec![j[0].clone(), j[0].clone()], vec!["a".into(), "b".into()]).unwrap();
        let r = verify_system(&dup, 1, 0);
        assert!(r.failures.contains(&FieldFailure::NotAnticommuting(0, 1)));
        let id = VectorFieldSystem::new(16, vec![SparseMatrix::identity(16)], vec!["id".into()]).unwrap();
        let r = verify_system(&id, 1, 0);
        assert!(r.failures.contains(&FieldFailure::NotSkew(0)));
        assert!(r.failures.iter().any(|f| matches!(f, FieldFailure::NotTangent { .. })));
    }

    #[test]
    fn diagonal_extension_keeps_invariants() {
        let base = build_fields(16).unwrap();
        for k in 1..=2 {
            let ext = base.diagonal_extension(2 * k + 1);
            assert!(verify_system(&ext, 1, k as u64).passed());
            assert_eq!(ext, build_fields(16 * (2 * k + 1)).unwrap());
        }
    }

    #[test]
    fn second_level_systems() {
        for m in [256, 512, 1024, 2048] {
            let (v, r) = build_and_verify(m, 5).unwrap();
            assert!(r.passed() && r.count_matches(), "m = {m}");
            assert_eq!(v.len(), sigma(m).unwrap());
        }
    }

    #[test]
    fn naive_512_field_misses_level_two_only() {
        let r = verify_system(&naive_512_system().unwrap(), 0, 0);
        let bad: Vec<_> = r.failures.clone();
        assert_eq!(bad, (8..16).map(|i| FieldFailure::NotAnticommuting(i, 16)).collect::<Vec<_>>());
    }

    #[test]
    fn q3_is_unsupported() {
        assert!(matches!(build_fields(1 << 12), Err(Error::Unsupported(_))));
    }
}
