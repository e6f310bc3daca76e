//! The Spin(9) canonical 8-form and its companions.
//!
//! Three independent constructions of one 8-form on ℝ¹⁶ live here: the
//! characteristic coefficient `τ₄(ψ)` of the matrix of Kähler forms, the
//! quadruple sum `Ω_CGM`, and the octonionic expression `Ψ₈`. They agree as
//! `360Φ = τ₄(ψ) = −Ω_CGM/4 = −Ψ₈/8`.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cayley_dickson::CdElement;
use crate::clifford::{CliffordSystem, StandardKind};
use crate::error::{Error, Result};
use crate::exterior::{charpoly_coeffs, kahler_form, sum_of_squares, Blade, FormMatrix, Multivector};
use crate::matrix::Matrix;
use crate::octform::OctForm;
use crate::rational::{q, Rational};

/// The matrix `ψ_αβ = kahler(I_αI_β)` of a Clifford system (zero diagonal).
pub fn kahler_matrix(c: &CliffordSystem) -> Result<FormMatrix> {
    let k = c.mats().len();
    FormMatrix::from_upper(k, c.n(), |a, b| kahler_form(&c.compose_j(&[a, b])?))
}

/// `ψ` for the standard `I₁, …, I₉` on ℝ¹⁶.
pub fn spin9_psi() -> &'static FormMatrix {
    static PSI: OnceLock<FormMatrix> = OnceLock::new();
    PSI.get_or_init(|| kahler_matrix(&CliffordSystem::standard_spin9()).expect("spin9 is a Clifford system"))
}

/// `τ₁(ψ), …, τ₉(ψ)` for the spin9 matrix.
pub fn spin9_charpoly() -> &'static [Multivector] {
    static TAUS: OnceLock<Vec<Multivector>> = OnceLock::new();
    TAUS.get_or_init(|| charpoly_coeffs(spin9_psi()).expect("homogeneous entries"))
}

/// `τ₄(ψ)`.
pub fn spin9_tau4() -> &'static Multivector {
    &spin9_charpoly()[3]
}

pub const SPIN9_FACTOR: i64 = 360;

/// `Φ = τ₄(ψ)/360`, an integral 8-form with coprime coefficients.
pub fn spin9_form() -> &'static Multivector {
    static PHI: OnceLock<Multivector> = OnceLock::new();
    PHI.get_or_init(|| spin9_tau4().scale(&Rational::new(1, SPIN9_FACTOR)))
}

/// `Ω_CGM = Σ_{α,β,α′,β′} ψ_αβ ∧ ψ_αβ′ ∧ ψ_α′β ∧ ψ_α′β′`, summed literally over
/// all `9⁴` index tuples (the 4-forms `ψ_αβ ∧ ψ_αβ′` are computed once).
pub fn cgm_form() -> Result<Multivector> {
    use rayon::prelude::*;
    let psi = spin9_psi();
    let k = psi.k();
    let n = psi.n();
    // pair[α][β][β′] = ψ_αβ ∧ ψ_αβ′
    let mut pair = Vec::with_capacity(k * k * k);
    for a in 0..k {
        for b in 0..k {
            for b2 in 0..k {
                pair.push(psi.get(a, b).wedge(psi.get(a, b2))?);
            }
        }
    }
    let parts: Vec<Multivector> = (0..k)
        .into_par_iter()
        .map(|a| {
            let mut acc = Multivector::zero(n);
            for a2 in 0..k {
                for b in 0..k {
                    for b2 in 0..k {
                        let x = &pair[(a * k + b) * k + b2];
                        let y = &pair[(a2 * k + b) * k + b2];
                        if !x.is_zero() && !y.is_zero() {
                            acc = acc.add(&x.wedge(y)?)?;
                        }
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    parts.iter().try_fold(Multivector::zero(n), |acc, p| acc.add(p))
}

/// `F`, `P`, `Q` of a skew scalar matrix `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fpq {
    pub f: Rational,
    pub p: Rational,
    pub q: Rational,
}

impl Fpq {
    pub fn of(x: &Matrix) -> Result<Fpq> {
        if !x.is_skew()? {
            return Err(Error::NotSkew);
        }
        let k = x.rows();
        let mut f = Rational::zero();
        for a in 0..k {
            for a2 in 0..k {
                for b in 0..k {
                    let s = &x[(a, b)] * &x[(a2, b)];
                    if s.is_zero() {
                        continue;
                    }
                    for b2 in 0..k {
                        f += &s * &(&x[(a, b2)] * &x[(a2, b2)]);
                    }
                }
            }
        }
        let mut p = Rational::zero();
        for a in 0..k {
            for b in a + 1..k {
                p += &x[(a, b)] * &x[(a, b)];
            }
        }
        let mut qv = Rational::zero();
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    for d in c + 1..k {
                        let pf = &x[(a, b)] * &x[(c, d)] - &x[(a, c)] * &x[(b, d)] + &x[(a, d)] * &x[(b, c)];
                        qv += &pf * &pf;
                    }
                }
            }
        }
        Ok(Fpq { f, p, q: qv })
    }

    /// `F = 2P² − 4Q`.
    pub fn holds(&self) -> bool {
        self.f == q(2) * &self.p * &self.p - q(4) * &self.q
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FpqReport {
    pub trials: usize,
    pub seed: u64,
    pub passed: usize,
    pub first_failure: Option<usize>,
}

impl FpqReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.trials
    }
}

/// A random 9×9 skew matrix with entries `a/b`, `|a| ≤ 9`, `1 ≤ b ≤ 6`.
pub fn random_skew(rng: &mut impl Rng, k: usize) -> Matrix {
    let mut x = Matrix::zeros(k, k);
    for a in 0..k {
        for b in a + 1..k {
            let v = Rational::new(rng.random_range(-9..=9), rng.random_range(1..=6));
            x[(b, a)] = -&v;
            x[(a, b)] = v;
        }
    }
    x
}

/// Checks `F = 2P² − 4Q` on random rational skew 9×9 matrices.
pub fn fpq_identity_check(trials: usize, seed: u64) -> Result<FpqReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut first_failure = None;
    for t in 0..trials {
        if Fpq::of(&random_skew(&mut rng, 9))?.holds() {
            passed += 1;
        } else if first_failure.is_none() {
            first_failure = Some(t);
        }
    }
    Ok(FpqReport { trials, seed, passed, first_failure })
}

/// `θ_αβ` for the quaternionic system on ℝ⁸ together with the left
/// quaternionic 4-form `Ω_L = ω_{L_i}² + ω_{L_j}² + ω_{L_k}²`.
pub fn quaternionic_forms() -> Result<(FormMatrix, Multivector)> {
    let theta = kahler_matrix(&CliffordSystem::standard(StandardKind::QuaternionicSp2Sp1))?;
    let omegas = (1..4)
        .map(|u| {
            let l = CdElement::basis(2, u).left_mult_matrix();
            kahler_form(&Matrix::block_diag(&[l.clone(), l]))
        })
        .collect::<Result<Vec<_>>>()?;
    let omega_l = sum_of_squares(8, &omegas)?;
    Ok((theta, omega_l))
}

/// The octonionic 1-forms `dx = Σ e_a dx_a` (indices 1..8) and `dy` (9..16).
pub fn octonionic_differentials() -> (OctForm, OctForm) {
    let d = |offset: usize| {
        OctForm::from_terms(16, (0..8).map(|a| (Blade(1u128 << (a + offset)), CdElement::basis(3, a))))
            .expect("blades fit in R^16")
    };
    (d(0), d(8))
}

/// The four octonionic 4-forms and the real 8-form built from them.
#[derive(Clone, Debug)]
pub struct Kotrbaty {
    pub psi40: OctForm,
    pub psi31: OctForm,
    pub psi13: OctForm,
    pub psi04: OctForm,
    /// `Ψ₈` with its octonionic coefficients.
    pub psi8: OctForm,
}

impl Kotrbaty {
    /// The real part of `Ψ₈`.
    pub fn real(&self) -> Multivector {
        self.psi8.real_part()
    }

    /// True when every coefficient of `Ψ₈` is real.
    pub fn is_real(&self) -> bool {
        self.psi8.imaginary_is_zero()
    }
}

/// Evaluates `Ψ₈` with every octonion product bracketed as in its defining formula.
pub fn kotrbaty_psi8() -> Result<Kotrbaty> {
    let (dx, dy) = octonionic_differentials();
    let (dxb, dyb) = (dx.conjugate(), dy.conjugate());
    // ((a ∧ b) ∧ c) ∧ d
    let chain = |a: &OctForm, b: &OctForm, c: &OctForm, d: &OctForm| -> Result<OctForm> {
        a.wedge(b)?.wedge(c)?.wedge(d)
    };
    let psi40 = chain(&dxb, &dx, &dxb, &dx)?;
    let psi31 = chain(&dyb, &dx, &dxb, &dx)?;
    let psi13 = chain(&dxb, &dy, &dyb, &dy)?;
    let psi04 = chain(&dyb, &dy, &dyb, &dy)?;
    let (b40, b31, b13, b04) = (psi40.conjugate(), psi31.conjugate(), psi13.conjugate(), psi04.conjugate());
    let mixed = psi31.wedge(&psi13)?.add(&b13.wedge(&b31)?)?;
    let psi8 = psi40
        .wedge(&b40)?
        .add(&psi31.wedge(&b31)?.scale(&q(4)))?
        .sub(&mixed.scale(&q(5)))?
        .add(&psi13.wedge(&b13)?.scale(&q(4)))?
        .add(&psi04.wedge(&b04)?)?;
    Ok(Kotrbaty { psi40, psi31, psi13, psi04, psi8 })
}

/// `−4·6!`: `Φ = Ψ₈ / KOTRBATY_FACTOR`.
pub const KOTRBATY_FACTOR: i64 = -2880;

#[derive(Clone, Debug, Serialize)]
pub struct Tau8Report {
    /// Coefficient of `e^{1…16}` in `τ₈(ψ)`.
    pub tau8_top: Rational,
    /// Coefficient of `e^{1…16}` in `τ₄ ∧ τ₄`.
    pub tau4_squared_top: Rational,
    /// `(τ₄ ∧ τ₄)/τ₈`.
    pub ratio: Rational,
}

pub fn tau8_and_ratio() -> Result<Tau8Report> {
    let tau8 = &spin9_charpoly()[7];
    let tau8_top = tau8.top_coeff();
    if tau8_top.is_zero() {
        return Err(Error::InvalidArgument("tau8 vanishes".into()));
    }
    let t4 = spin9_tau4();
    let tau4_squared_top = t4.wedge(t4)?.top_coeff();
    let ratio = &tau4_squared_top / &tau8_top;
    Ok(Tau8Report { tau8_top, tau4_squared_top, ratio })
}

/// `coeff / π^pi_power`, kept symbolic in π.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PiMultiple {
    pub coeff: Rational,
    pub pi_power: u32,
}

impl fmt::Display for PiMultiple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "0");
        }
        if self.pi_power == 0 {
            return write!(f, "{}", self.coeff);
        }
        let sign = if self.coeff.signum() < 0 { "-" } else { "" };
        let a = self.coeff.abs();
        let (num, den) = (a.numer(), a.denom());
        let den = if den.is_one() { String::new() } else { den.to_string() };
        write!(f, "{sign}{num}/({den}π^{})", self.pi_power)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PontrjaginEntry {
    pub class: String,
    pub coefficient: PiMultiple,
    /// The form the coefficient multiplies (`Phi` or `tau8`), empty for zero.
    pub form: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PontrjaginReport {
    /// `p_k(E)` in terms of `τ_{2k}(ψ)`.
    pub bundle: Vec<PontrjaginEntry>,
    /// `p_k(M)` in terms of `Φ` and `τ₈`.
    pub manifold: Vec<PontrjaginEntry>,
    /// Representatives of `u` and `u²` on 𝕆P².
    pub generator: Vec<PontrjaginEntry>,
    pub tau2_zero: bool,
    pub tau6_zero: bool,
}

/// Applies the characteristic-class relations to the computed `τ_j(ψ)`.
///
/// `(2π)^{2k}·p_k(E) = τ_{2k}(ψ)` up to the normalisation of the
/// curvature forms, which here is `16π⁴ p₂(E) = τ₄`, `256π⁸ p₄(E) = τ₈`.
/// For a Spin(9) structure,
/// `p₂(M) = 7/4 p₁(E)² − p₂(E)` and
/// `p₄(M) = (35p₁⁴ − 120p₁²p₂ + 400p₁p₃ − 1664p₄)(E)/128`.
pub fn pontrjagin_report() -> PontrjaginReport {
    let taus = spin9_charpoly();
    let tau2_zero = taus[1].is_zero();
    let tau6_zero = taus[5].is_zero();
    let entry = |class: &str, coeff: Rational, pi_power: u32, form: &str| PontrjaginEntry {
        class: class.into(),
        form: if coeff.is_zero() { String::new() } else { form.into() },
        coefficient: PiMultiple { coeff, pi_power },
    };
    // p₂(E) = τ₄/(16π⁴) = (360/16)Φ/π⁴; p₄(E) = τ₈/(256π⁸).
    let p2e_tau4 = Rational::new(1, 16);
    let p4e_tau8 = Rational::new(1, 256);
    let p2e_phi = &p2e_tau4 * &q(SPIN9_FACTOR);
    // Every term of the relations that contains p₁(E) or p₃(E) vanishes when
    // τ₂ = τ₆ = 0; what survives is the linear part.
    let p2m_phi = -&p2e_phi;
    let p4m_tau8 = &q(-1664) / &q(128) * &p4e_tau8;
    let bundle = vec![
        entry("p1(E)", Rational::zero(), 2, "tau2"),
        entry("p2(E)", p2e_tau4.clone(), 4, "tau4"),
        entry("p3(E)", Rational::zero(), 6, "tau6"),
        entry("p4(E)", p4e_tau8.clone(), 8, "tau8"),
    ];
    let manifold = vec![
        entry("p1(M)", Rational::zero(), 2, "Phi"),
        entry("p2(M)", p2m_phi.clone(), 4, "Phi"),
        entry("p3(M)", Rational::zero(), 6, "Phi"),
        entry("p4(M)", p4m_tau8.clone(), 8, "tau8"),
    ];
    // On 𝕆P², p₂ = 6u and p₄ = 39u².
    let generator = vec![
        entry("u", &p2m_phi / &q(6), 4, "Phi"),
        entry("u", &p2m_phi / &q(6) / &q(SPIN9_FACTOR), 4, "tau4"),
        entry("u^2", &p4m_tau8 / &q(39), 8, "tau8"),
    ];
    PontrjaginReport { bundle, manifold, generator, tau2_zero, tau6_zero }
}

impl fmt::Display for PontrjaginReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tau2(psi) = 0: {}, tau6(psi) = 0: {}", self.tau2_zero, self.tau6_zero)?;
        for (title, list) in [("bundle E^9", &self.bundle), ("manifold M^16", &self.manifold), ("OP^2 generator", &self.generator)] {
            writeln!(f, "{title}:")?;
            for e in list {
                if e.form.is_empty() {
                    writeln!(f, "  {} = 0", e.class)?;
                } else {
                    writeln!(f, "  {} = {} [{}]", e.class, e.coefficient, e.form)?;
                }
            }
        }
        Ok(())
    }
}


#[cfg(test)]
mod spin9 {
    use super::*;

    #[test]
    fn only_tau4_and_tau8_survive() {
        let lens: Vec<usize> = spin9_charpoly().iter().map(Multivector::len).collect();
        assert_eq!(lens, [0, 0, 0, 702, 0, 0, 0, 1, 0]);
        assert_eq!(spin9_tau4().integer_gcd(), Some(q(SPIN9_FACTOR)));
    }

    #[test]
    fn phi_coefficients() {
        let hist = spin9_form().coeff_histogram();
        let want = [(-14, 2), (-2, 164), (-1, 272), (1, 176), (2, 88)];
        assert_eq!(hist, want.iter().map(|&(c, n)| (q(c), n)).collect::<Vec<_>>());
        assert_eq!(spin9_form().coeff_of(&[1, 2, 3, 4, 5, 6, 7, 8]).unwrap(), q(-14));
        assert_eq!(spin9_form().norm2(), q(1848));
    }

    #[test]
    fn direct_tau4_agrees() {
        assert_eq!(&crate::exterior::tau4_direct(spin9_psi()).unwrap(), spin9_tau4());
    }

    #[test]
    fn cgm_is_minus_four_tau4() {
        assert_eq!(cgm_form().unwrap(), spin9_tau4().scale(&q(-4)));
    }

    #[test]
    fn psi8_is_real_multiple() {
        let k = kotrbaty_psi8().unwrap();
        assert!(k.is_real());
        assert_eq!(k.real(), spin9_form().scale(&q(KOTRBATY_FACTOR)));
    }

    #[test]
    fn tau8_ratio() {
        let r = tau8_and_ratio().unwrap();
        assert_eq!(r.ratio, q(-12));
        assert_eq!(r.tau8_top, q(-19958400));
    }
}
