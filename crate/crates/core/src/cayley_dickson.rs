//! The Cayley–Dickson tower ℝ → ℂ → ℍ → 𝕆 → 𝕊.
//!
//! An element of level `k` has `2^k` coordinates. Writing `x = a + b·e` with
//! `a` the low half and `b` the high half of the coordinates, the product is
//!
//! ```text
//! (a + b e)(c + d e) = (ac − d̄b) + (bc̄ + da) e
//! ```
//!
//! applied recursively. At level 3 the basis comes out as `(1, i, j, k, e, f,
//! g, h)` with `f = ie`, `g = je`, `h = ke`.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;

pub const MAX_LEVEL: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CdElement {
    level: u32,
    coeffs: Vec<Rational>,
}

/// `e_a · e_b = sign · e_index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisProduct {
    pub index: usize,
    pub sign: i8,
}

impl CdElement {
    pub fn new(level: u32, coeffs: Vec<Rational>) -> Result<CdElement> {
        if level > MAX_LEVEL {
            return Err(Error::InvalidArgument(format!("level {level} exceeds {MAX_LEVEL}")));
        }
        if coeffs.len() != 1 << level {
            return Err(Error::DimensionMismatch(format!(
                "level {level} needs {} coefficients, got {}",
                1usize << level,
                coeffs.len()
            )));
        }
        Ok(CdElement { level, coeffs })
    }

    pub fn from_i64(level: u32, coeffs: &[i64]) -> Result<CdElement> {
        CdElement::new(level, coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero(level: u32) -> CdElement {
        CdElement { level, coeffs: vec![Rational::zero(); 1 << level] }
    }

    pub fn one(level: u32) -> CdElement {
        CdElement::basis(level, 0)
    }

    /// The basis unit `e_i` (with `e_0 = 1`).
    pub fn basis(level: u32, i: usize) -> CdElement {
        let mut x = CdElement::zero(level);
        x.coeffs[i] = Rational::one();
        x
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn real_part(&self) -> Rational {
        self.coeffs[0].clone()
    }

    /// True when the real coordinate vanishes.
    pub fn is_imaginary(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    pub fn conjugate(&self) -> CdElement {
        let mut c: Vec<Rational> = self.coeffs.iter().map(|x| -x).collect();
        c[0] = self.coeffs[0].clone();
        CdElement { level: self.level, coeffs: c }
    }

    pub fn norm2(&self) -> Rational {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Euclidean inner product of coordinate vectors.
    pub fn dot(&self, other: &CdElement) -> Rational {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum()
    }

    fn check_level(&self, other: &CdElement) -> Result<()> {
        if self.level == other.level {
            Ok(())
        } else {
            Err(Error::LevelMismatch(self.level, other.level))
        }
    }

    pub fn add(&self, other: &CdElement) -> Result<CdElement> {
        self.check_level(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CdElement { level: self.level, coeffs })
    }

    pub fn sub(&self, other: &CdElement) -> Result<CdElement> {
        self.check_level(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CdElement { level: self.level, coeffs })
    }

    pub fn scale(&self, s: &Rational) -> CdElement {
        CdElement { level: self.level, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn neg(&self) -> CdElement {
        self.scale(&-Rational::one())
    }

    /// The Cayley–Dickson product.
    pub fn mul(&self, other: &CdElement) -> Result<CdElement> {
        self.check_level(other)?;
        let table = structure_table(self.level);
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in other.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let p = table[a * n + b];
                let t = x * y;
                if p.sign > 0 {
                    out[p.index] += t;
                } else {
                    out[p.index] -= t;
                }
            }
        }
        Ok(CdElement { level: self.level, coeffs: out })
    }

    /// `[x, y, z] = (xy)z − x(yz)`.
    pub fn associator(x: &CdElement, y: &CdElement, z: &CdElement) -> Result<CdElement> {
        x.mul(y)?.mul(z)?.sub(&x.mul(&y.mul(z)?)?)
    }

    /// Matrix of `x ↦ x·u` acting on coordinate columns.
    pub fn right_mult_matrix(&self) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for col in 0..n {
            let img = CdElement::basis(self.level, col).mul(self).expect("same level");
            for (row, v) in img.coeffs.into_iter().enumerate() {
                m[(row, col)] = v;
            }
        }
        m
    }

    /// Matrix of `x ↦ u·x` acting on coordinate columns.
    pub fn left_mult_matrix(&self) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for col in 0..n {
            let img = self.mul(&CdElement::basis(self.level, col)).expect("same level");
            for (row, v) in img.coeffs.into_iter().enumerate() {
                m[(row, col)] = v;
            }
        }
        m
    }
}

/// The defining recursion on raw coordinate slices.
pub fn cd_product(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let n = x.len();
    assert_eq!(n, y.len());
    if n == 1 {
        return vec![&x[0] * &y[0]];
    }
    let h = n / 2;
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let conj = |v: &[Rational]| -> Vec<Rational> {
        let mut w: Vec<Rational> = v.iter().map(|t| -t).collect();
        w[0] = v[0].clone();
        w
    };
    let ac = cd_product(a, c);
    let db = cd_product(&conj(d), b);
    let bc = cd_product(b, &conj(c));
    let da = cd_product(d, a);
    ac.iter()
        .zip(&db)
        .map(|(p, q)| p - q)
        .chain(bc.iter().zip(&da).map(|(p, q)| p + q))
        .collect()
}

/// Signed structure constants `e_a e_b` for a level, indexed `a·2^k + b`.
pub fn structure_table(level: u32) -> &'static [BasisProduct] {
    static TABLES: [OnceLock<Vec<BasisProduct>>; MAX_LEVEL as usize + 1] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    assert!(level <= MAX_LEVEL, "level {level} exceeds {MAX_LEVEL}");
    TABLES[level as usize].get_or_init(|| {
        let n = 1usize << level;
        let unit = |i: usize| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::one();
            v
        };
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let p = cd_product(&unit(a), &unit(b));
                let (index, v) = p
                    .iter()
                    .enumerate()
                    .find(|(_, v)| !v.is_zero())
                    .expect("basis products are nonzero");
                table.push(BasisProduct { index, sign: if v.signum() > 0 { 1 } else { -1 } });
            }
        }
        table
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TableEntry {
    pub i: usize,
    pub j: usize,
    pub product: Vec<String>,
}

/// The full multiplication table of basis units, for export.
pub fn multiplication_table(level: u32) -> Vec<TableEntry> {
    let n = 1usize << level;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let p = CdElement::basis(level, i).mul(&CdElement::basis(level, j)).expect("same level");
            out.push(TableEntry { i, j, product: p.coeffs.iter().map(ToString::to_string).collect() });
        }
    }
    out
}

/// Conventional names of the octonion units.
pub const OCTONION_UNITS: [&str; 8] = ["1", "i", "j", "k", "e", "f", "g", "h"];

impl fmt::Display for CdElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = if self.level == 3 { OCTONION_UNITS[i].to_string() } else { format!("e{i}") };
            let sign = if c.signum() < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{sign}{mag}")?,
                (_, true) => write!(f, "{sign}{name}")?,
                (_, false) => write!(f, "{sign}{mag}{name}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};
    use proptest::prelude::*;

    /// Frozen octonion table: entry = sign × (1-based index of the product unit).
    const OCTONION_TABLE: [[i8; 8]; 8] = [
        [1, 2, 3, 4, 5, 6, 7, 8],
        [2, -1, 4, -3, 6, -5, -8, 7],
        [3, -4, -1, 2, 7, 8, -5, -6],
        [4, 3, -2, -1, 8, -7, 6, -5],
        [5, -6, -7, -8, -1, 2, 3, 4],
        [6, 5, -8, 7, -2, -1, -4, 3],
        [7, 8, 5, -6, -3, 4, -1, -2],
        [8, -7, 6, 5, -4, -3, 2, -1],
    ];

    fn oracle_mul(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![q(0); 8];
        for a in 0..8 {
            for b in 0..8 {
                let e = OCTONION_TABLE[a][b];
                let idx = e.unsigned_abs() as usize - 1;
                let t = &x[a] * &y[b];
                if e > 0 {
                    out[idx] += t;
                } else {
                    out[idx] -= t;
                }
            }
        }
        out
    }

    fn unit(level: u32, i: usize) -> CdElement {
        CdElement::basis(level, i)
    }

    fn octonion() -> impl Strategy<Value = CdElement> {
        proptest::collection::vec((-5i64..=5, 1i64..=4), 8)
            .prop_map(|v| CdElement::new(3, v.into_iter().map(|(a, b)| qf(a, b)).collect()).unwrap())
    }

    fn element(level: u32) -> impl Strategy<Value = CdElement> {
        proptest::collection::vec(-4i64..=4, 1usize << level)
            .prop_map(move |v| CdElement::from_i64(level, &v).unwrap())
    }

    #[test]
    fn named_products() {
        assert_eq!(unit(2, 1).mul(&unit(2, 2)).unwrap(), unit(2, 3));
        // f = ie, g = je, h = ke
        for (a, p) in [(1, 5), (2, 6), (3, 7)] {
            assert_eq!(unit(3, a).mul(&unit(3, 4)).unwrap(), unit(3, p));
        }
    }

    #[test]
    fn sedenion_zero_divisors() {
        let a = unit(4, 2).sub(&unit(4, 11)).unwrap();
        let b = unit(4, 7).add(&unit(4, 14)).unwrap();
        assert!(a.mul(&b).unwrap().is_zero());
        assert_ne!(a.mul(&b).unwrap().norm2(), a.norm2() * b.norm2());
    }

    #[test]
    fn level_mismatch() {
        assert_eq!(unit(2, 1).mul(&unit(3, 1)), Err(Error::LevelMismatch(2, 3)));
    }

    #[test]
    fn table_matches_frozen_oracle() {
        let t = structure_table(3);
        for a in 0..8 {
            for b in 0..8 {
                let e = OCTONION_TABLE[a][b];
                assert_eq!(t[a * 8 + b].index, e.unsigned_abs() as usize - 1);
                assert_eq!(t[a * 8 + b].sign, e.signum());
            }
        }
    }

    #[test]
    fn multiplication_matrices() {
        assert_eq!(CdElement::one(3).right_mult_matrix(), Matrix::identity(8));
        let ri = unit(3, 1).right_mult_matrix();
        assert_eq!(ri.mat_mul(&ri).unwrap(), Matrix::identity(8).neg());
        // Real elements are central.
        let c = CdElement::one(2).scale(&q(3));
        assert_eq!(c.left_mult_matrix(), c.right_mult_matrix());
    }

    #[test]
    fn associators() {
        assert!(CdElement::associator(&unit(2, 1), &unit(2, 2), &unit(2, 3)).unwrap().is_zero());
        assert!(!CdElement::associator(&unit(3, 1), &unit(3, 2), &unit(3, 4)).unwrap().is_zero());
    }

    #[test]
    fn table_export() {
        let t = multiplication_table(3);
        assert_eq!(t.len(), 64);
        let ie = &t[8 + 4];
        assert_eq!(ie.product, ["0", "0", "0", "0", "0", "1", "0", "0"]);
    }

    #[test]
    fn display() {
        let x = CdElement::from_i64(3, &[1, -1, 0, 0, 2, 0, 0, 0]).unwrap();
        assert_eq!(x.to_string(), "1-i+2e");
        assert_eq!(CdElement::zero(3).to_string(), "0");
    }

    proptest! {
        #[test]
        fn mul_agrees_with_oracle(x in octonion(), y in octonion()) {
            prop_assert_eq!(x.mul(&y).unwrap().coeffs().to_vec(), oracle_mul(x.coeffs(), y.coeffs()));
            prop_assert_eq!(x.mul(&y).unwrap().coeffs().to_vec(), cd_product(x.coeffs(), y.coeffs()));
        }

        #[test]
        fn conjugation_reverses_products(x in octonion(), y in octonion()) {
            prop_assert_eq!(x.mul(&y).unwrap().conjugate(), y.conjugate().mul(&x.conjugate()).unwrap());
        }

        #[test]
        fn composition_up_to_octonions(
            (x, y) in (0u32..=3).prop_flat_map(|l| (element(l), element(l)))
        ) {
            prop_assert_eq!(x.mul(&y).unwrap().norm2(), x.norm2() * y.norm2());
        }

        #[test]
        fn alternative(x in octonion(), y in octonion()) {
            prop_assert!(CdElement::associator(&x, &x, &y).unwrap().is_zero());
            prop_assert!(CdElement::associator(&x, &y, &y).unwrap().is_zero());
            prop_assert!(CdElement::associator(&x, &x.conjugate(), &y).unwrap().is_zero());
        }

        #[test]
        fn right_mult_is_conformal(u in octonion()) {
            let r = u.right_mult_matrix();
            let expect = Matrix::identity(8).scale(&u.norm2());
            prop_assert_eq!(r.transpose().mat_mul(&r).unwrap(), expect);
            let mut im = u.clone();
            im = im.sub(&CdElement::one(3).scale(&u.real_part())).unwrap();
            prop_assert!(im.right_mult_matrix().is_skew().unwrap());
        }
    }
}
