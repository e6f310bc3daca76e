//! The octonionic Hopf fibration S¹⁵ → S⁸ in coordinates.
//!
//! The Hopf map sends `N = (x, y)` to `λ(N) ∈ S⁸`, the coefficients of
//! `N = Σ λ_α I_α N`. Fibers are the unit spheres of the right lines
//! `{(x, x·m)}` and of `l_∞ = {(0, y)}`, which maps to `(0, …, 0, −1)`.

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::cayley_dickson::CdElement;
use crate::clifford::CliffordSystem;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;

const LEVEL: u32 = 3;

/// A point `(x, y)` of S¹⁵ ⊂ 𝕆².
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpherePoint16 {
    x: CdElement,
    y: CdElement,
}

impl SpherePoint16 {
    pub fn new(x: CdElement, y: CdElement) -> Result<SpherePoint16> {
        if x.level() != LEVEL || y.level() != LEVEL {
            return Err(Error::LevelMismatch(x.level().max(y.level()), LEVEL));
        }
        if !(x.norm2() + y.norm2()).is_one() {
            return Err(Error::OffSphere);
        }
        Ok(SpherePoint16 { x, y })
    }

    pub fn from_coords(c: &[Rational]) -> Result<SpherePoint16> {
        if c.len() != 16 {
            return Err(Error::DimensionMismatch(format!("{} coordinates for a point of R^16", c.len())));
        }
        SpherePoint16::new(CdElement::new(LEVEL, c[..8].to_vec())?, CdElement::new(LEVEL, c[8..].to_vec())?)
    }

    pub fn x(&self) -> &CdElement {
        &self.x
    }

    pub fn y(&self) -> &CdElement {
        &self.y
    }

    pub fn coords(&self) -> Vec<Rational> {
        self.x.coeffs().iter().chain(self.y.coeffs()).cloned().collect()
    }
}

/// The symmetric involution `[[r, R_ū], [R_u, −r]] = Σ u_a I_{1+a} + r I₉`.
pub fn hopf_action(u: &CdElement, r: &Rational) -> Result<Matrix> {
    if u.level() != LEVEL {
        return Err(Error::LevelMismatch(u.level(), LEVEL));
    }
    if !(u.norm2() + r * r).is_one() {
        return Err(Error::OffSphere);
    }
    let id = Matrix::identity(8);
    Matrix::block2(
        &id.scale(r),
        &u.conjugate().right_mult_matrix(),
        &u.right_mult_matrix(),
        &id.scale(&-r),
    )
}

/// `λ` without the sphere check; homogeneous of degree 2.
pub fn lambda_raw(x: &CdElement, y: &CdElement) -> Result<[Rational; 9]> {
    if x.level() != LEVEL || y.level() != LEVEL {
        return Err(Error::LevelMismatch(x.level().max(y.level()), LEVEL));
    }
    let mut l: [Rational; 9] = Default::default();
    l[0] = Rational::from(2) * x.dot(y);
    for a in 1..8 {
        let ry = y.mul(&CdElement::basis(LEVEL, a))?;
        l[a] = Rational::from(-2) * x.dot(&ry);
    }
    l[8] = x.norm2() - y.norm2();
    Ok(l)
}

/// `λ₁ = 2x·y`, `λ_{1+a} = −2x·R_{e_a}y`, `λ₉ = |x|² − |y|²`.
pub fn lambda_coeffs(p: &SpherePoint16) -> [Rational; 9] {
    lambda_raw(&p.x, &p.y).expect("level checked on construction")
}

/// The Hopf map, defined as `λ`.
pub fn hopf_map(p: &SpherePoint16) -> [Rational; 9] {
    lambda_coeffs(p)
}

/// `I_α N` for α = 1..9 at a point given by its 16 coordinates.
pub fn sections(n: &[Rational]) -> Result<Vec<Vec<Rational>>> {
    let c = CliffordSystem::standard_spin9();
    c.mats().iter().map(|i| i.apply(n)).collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `⟨v, I_α N⟩` for α = 1..9.
pub fn inner_products(p: &SpherePoint16, v: &[Rational]) -> Result<[Rational; 9]> {
    if v.len() != 16 {
        return Err(Error::DimensionMismatch(format!("tangent of length {}", v.len())));
    }
    let s = sections(&p.coords())?;
    let mut out: [Rational; 9] = Default::default();
    for (o, si) in out.iter_mut().zip(&s) {
        *o = dot(v, si);
    }
    Ok(out)
}

/// True when `v` is orthogonal to all nine `I_α N`.
pub fn fiber_orthogonality_check(p: &SpherePoint16, v: &[Rational]) -> Result<bool> {
    Ok(inner_products(p, v)?.iter().all(Zero::is_zero))
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaReport {
    pub lambda: [Rational; 9],
    pub norm2: Rational,
    /// `Σ λ_α I_α N = N`.
    pub reconstructs: bool,
    /// `⟨I_α N, I_β N⟩ = δ_αβ`.
    pub orthonormal: bool,
}

impl LambdaReport {
    pub fn passed(&self) -> bool {
        self.norm2.is_one() && self.reconstructs && self.orthonormal
    }
}

pub fn lambda_report(p: &SpherePoint16) -> Result<LambdaReport> {
    let n = p.coords();
    let lambda = lambda_coeffs(p);
    let s = sections(&n)?;
    let mut sum = vec![Rational::zero(); 16];
    for (l, si) in lambda.iter().zip(&s) {
        for (acc, v) in sum.iter_mut().zip(si) {
            *acc += l * v;
        }
    }
    let orthonormal = (0..9).all(|a| {
        (0..9).all(|b| dot(&s[a], &s[b]) == if a == b { Rational::one() } else { Rational::zero() })
    });
    let norm2 = lambda.iter().map(|l| l * l).sum();
    Ok(LambdaReport { lambda, norm2, reconstructs: sum == n, orthonormal })
}

/// Inverse stereographic projection `t ↦ (2t, |t|² − 1)/(|t|² + 1)` onto the unit sphere in ℝ^{len(t)+1}.
pub fn inverse_stereographic(t: &[Rational]) -> Vec<Rational> {
    let n2: Rational = t.iter().map(|v| v * v).sum();
    let d = (&n2 + Rational::one()).recip();
    let mut out: Vec<Rational> = t.iter().map(|v| Rational::from(2) * v * &d).collect();
    out.push((n2 - Rational::one()) * d);
    out
}

fn small_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.random_range(-6..=6), rng.random_range(1..=5))
}

/// A rational point of S¹⁵.
pub fn random_sphere_point(rng: &mut impl Rng) -> SpherePoint16 {
    let t: Vec<Rational> = (0..15).map(|_| small_rational(rng)).collect();
    SpherePoint16::from_coords(&inverse_stereographic(&t)).expect("on the sphere by construction")
}

/// A rational unit octonion.
pub fn random_unit_octonion(rng: &mut impl Rng) -> CdElement {
    let t: Vec<Rational> = (0..7).map(|_| small_rational(rng)).collect();
    CdElement::new(LEVEL, inverse_stereographic(&t)).expect("eight coordinates")
}

/// The point `(x, x·m)/√(1+|m|²)` of the fiber over `m`; needs `1+|m|²` to be a rational square.
pub fn line_point(m: &CdElement, x: &CdElement) -> Result<SpherePoint16> {
    let s = (Rational::one() + m.norm2())
        .sqrt_exact()
        .ok_or_else(|| Error::InvalidArgument("1 + |m|^2 must be a rational square".into()))?;
    let inv = s.recip();
    let xm = x.mul(m)?;
    SpherePoint16::new(x.scale(&inv), xm.scale(&inv))
}

/// The tangent `(w, w·m)` to the fiber over `m`, for `w ⊥ x`.
pub fn line_tangent(m: &CdElement, w: &CdElement) -> Result<Vec<Rational>> {
    let wm = w.mul(m)?;
    Ok(w.coeffs().iter().chain(wm.coeffs()).cloned().collect())
}

/// Certificate on the fiber `l_∞ = {(0, y)}` at `samples` random rational
/// points: the map is the south pole there, and every tangent `(0, y·e_a)`
/// is orthogonal to all `I_α N`.
pub fn infinity_fiber_certificate(samples: usize, seed: u64) -> Result<bool> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut south: [Rational; 9] = std::array::from_fn(|_| Rational::zero());
    south[8] = -Rational::one();
    let zero = CdElement::zero(LEVEL);
    for _ in 0..samples {
        let y = random_unit_octonion(&mut rng);
        let p = SpherePoint16::new(zero.clone(), y.clone())?;
        if hopf_map(&p) != south {
            return Ok(false);
        }
        for a in 1..8 {
            let w = y.mul(&CdElement::basis(LEVEL, a))?;
            let v: Vec<Rational> = zero.coeffs().iter().chain(w.coeffs()).cloned().collect();
            if !fiber_orthogonality_check(&p, &v)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn oct(c: &[i64]) -> CdElement {
        CdElement::from_i64(3, c).unwrap()
    }

    #[test]
    fn action_recovers_generators() {
        let c = CliffordSystem::standard_spin9();
        assert_eq!(hopf_action(&CdElement::zero(3), &q(1)).unwrap(), c.mats()[8]);
        assert_eq!(hopf_action(&CdElement::one(3), &q(0)).unwrap(), c.mats()[0]);
        assert_eq!(hopf_action(&CdElement::basis(3, 1), &q(0)).unwrap(), c.mats()[1]);
        assert!(matches!(hopf_action(&oct(&[1, 1, 0, 0, 0, 0, 0, 0]), &q(0)), Err(Error::OffSphere)));
    }

    #[test]
    fn action_is_symmetric_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let t: Vec<Rational> = (0..8).map(|_| small_rational(&mut rng)).collect();
            let v = inverse_stereographic(&t);
            let u = CdElement::new(3, v[..8].to_vec()).unwrap();
            let h = hopf_action(&u, &v[8]).unwrap();
            assert!(h.is_symmetric().unwrap());
            assert_eq!(h.mat_mul(&h).unwrap(), Matrix::identity(16));
        }
    }

    #[test]
    fn poles() {
        let p = SpherePoint16::new(CdElement::basis(3, 2), CdElement::zero(3)).unwrap();
        assert_eq!(lambda_coeffs(&p).to_vec(), [vec![q(0); 8], vec![q(1)]].concat());
        let p = SpherePoint16::new(CdElement::zero(3), CdElement::basis(3, 5)).unwrap();
        assert_eq!(hopf_map(&p).to_vec(), [vec![q(0); 8], vec![q(-1)]].concat());
        assert!(matches!(SpherePoint16::new(oct(&[1, 1, 0, 0, 0, 0, 0, 0]), CdElement::zero(3)), Err(Error::OffSphere)));
    }

    #[test]
    fn random_points_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let r = lambda_report(&random_sphere_point(&mut rng)).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn degree_two_homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_sphere_point(&mut rng);
        let t = Rational::new(3, 7);
        let l = lambda_raw(&p.x().scale(&t), &p.y().scale(&t)).unwrap();
        let t2 = &t * &t;
        assert_eq!(l.to_vec(), lambda_coeffs(&p).iter().map(|v| v * &t2).collect::<Vec<_>>());
    }

    // The fiber through (1, i)/√2 contains (j, −k)/√2, since j·i = −k.
    #[test]
    fn right_line_is_one_fiber() {
        let m = CdElement::basis(3, 1);
        let half = Rational::new(1, 2);
        let unit = |x: CdElement, y: CdElement| {
            let s = x.norm2() + y.norm2();
            assert_eq!(s, q(2));
            (x, y)
        };
        let (x1, y1) = unit(CdElement::one(3), m.clone());
        let (x2, y2) = unit(CdElement::basis(3, 2), CdElement::basis(3, 3).neg());
        let l1 = lambda_raw(&x1, &y1).unwrap().map(|v| v * &half);
        let l2 = lambda_raw(&x2, &y2).unwrap().map(|v| v * &half);
        assert_eq!(l1, l2);
        // the left line {(x, m·x)} through (j, k) lies in a different fiber
        let l3 = lambda_raw(&CdElement::basis(3, 2), &CdElement::basis(3, 3)).unwrap().map(|v| v * &half);
        assert_ne!(l1, l3);
    }

    #[test]
    fn fibers_are_constant_and_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        // 1 + |m|² ∈ {4, 9}
        for m in [oct(&[0, 1, 1, 1, 0, 0, 0, 0]), oct(&[2, 2, 0, 0, 0, 0, 0, 0]), oct(&[1, 0, 0, 0, 1, 0, 0, 1])] {
            let x = random_unit_octonion(&mut rng);
            let p = line_point(&m, &x).unwrap();
            let x2 = random_unit_octonion(&mut rng);
            assert_eq!(hopf_map(&p), hopf_map(&line_point(&m, &x2).unwrap()));
            // w ⊥ x inside the line: w = x·e for imaginary e keeps |w| and ⟨w, x⟩ = 0
            let w = x.mul(&CdElement::basis(3, 3)).unwrap();
            assert!(fiber_orthogonality_check(&p, &line_tangent(&m, &w).unwrap()).unwrap());
        }
    }

    #[test]
    fn infinity_fiber() {
        assert!(infinity_fiber_certificate(20, 5).unwrap());
        let p = SpherePoint16::new(CdElement::zero(3), CdElement::basis(3, 0)).unwrap();
        let mut v = vec![q(0); 16];
        v[9] = q(1);
        assert!(fiber_orthogonality_check(&p, &v).unwrap());
        let i1n = sections(&p.coords()).unwrap()[0].clone();
        assert!(!fiber_orthogonality_check(&p, &i1n).unwrap());
        // transport by an involution of the family
        let h = hopf_action(&CdElement::basis(3, 4), &q(0)).unwrap();
        let hp = SpherePoint16::from_coords(&h.apply(&p.coords()).unwrap()).unwrap();
        assert!(fiber_orthogonality_check(&hp, &h.apply(&v).unwrap()).unwrap());
    }
}
