//! Clifford systems: tuples `(P₀, …, P_m)` of symmetric, pairwise
//! anticommuting involutions of ℝᴺ.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::cayley_dickson::CdElement;
use crate::error::{Error, Result};
use crate::matrix::{independence_count, Matrix};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordSystem {
    n: usize,
    mats: Vec<Matrix>,
}

/// The four basic systems `C₁, C₂, C₄, C₈` attached to the Hopf fibrations
/// over ℝ, ℂ, ℍ and 𝕆.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum StandardKind {
    /// `C₁` on ℝ².
    RealU1,
    /// The Pauli matrices, realified: `C₂` on ℝ⁴.
    PauliU2,
    /// `C₄` on ℝ⁸.
    QuaternionicSp2Sp1,
    /// `I₁, …, I₉`: `C₈` on ℝ¹⁶.
    Spin9,
}

impl StandardKind {
    pub const ALL: [StandardKind; 4] =
        [StandardKind::RealU1, StandardKind::PauliU2, StandardKind::QuaternionicSp2Sp1, StandardKind::Spin9];

    /// Cayley–Dickson level of the underlying algebra.
    pub fn level(self) -> u32 {
        match self {
            StandardKind::RealU1 => 0,
            StandardKind::PauliU2 => 1,
            StandardKind::QuaternionicSp2Sp1 => 2,
            StandardKind::Spin9 => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StandardKind::RealU1 => "real_U1",
            StandardKind::PauliU2 => "pauli_U2",
            StandardKind::QuaternionicSp2Sp1 => "quaternionic_Sp2Sp1",
            StandardKind::Spin9 => "spin9",
        }
    }
}

impl fmt::Display for StandardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StandardKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<StandardKind> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "real_u1" | "u1" => Ok(StandardKind::RealU1),
            "pauli" | "pauli_u2" | "u2" => Ok(StandardKind::PauliU2),
            "quaternionic" | "quaternionic_sp2sp1" | "sp2sp1" => Ok(StandardKind::QuaternionicSp2Sp1),
            "spin9" => Ok(StandardKind::Spin9),
            other => Err(Error::Parse(format!("unknown system kind `{other}`"))),
        }
    }
}

/// One violated axiom; only the first offender of each kind is recorded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AxiomFailure {
    Shape { index: usize },
    NotSymmetric { index: usize },
    NotInvolution { index: usize },
    NotAnticommuting { first: usize, second: usize },
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomFailure::Shape { index } => write!(f, "P{index} has the wrong shape"),
            AxiomFailure::NotSymmetric { index } => write!(f, "P{index} is not symmetric"),
            AxiomFailure::NotInvolution { index } => write!(f, "P{index}^2 != Id"),
            AxiomFailure::NotAnticommuting { first, second } => {
                write!(f, "P{first} P{second} != -P{second} P{first}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n: usize,
    pub count: usize,
    pub symmetric: bool,
    pub involutions: bool,
    pub anticommuting: bool,
    pub failures: Vec<AxiomFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A block-wise right multiplication by an imaginary unit, used to append
/// further endomorphisms when extending a system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtraUnit {
    /// Cayley–Dickson level of the blocks (2 for ℍ, 3 for 𝕆).
    pub level: u32,
    /// Index of the unit, `1..2^level`.
    pub unit: usize,
}

impl CliffordSystem {
    /// Wraps matrices without checking the axioms; see [`CliffordSystem::verify`].
    pub fn new(mats: Vec<Matrix>) -> Result<CliffordSystem> {
        let first = mats
            .first()
            .ok_or_else(|| Error::InvalidArgument("a Clifford system needs at least one matrix".into()))?;
        let n = first.rows();
        if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
            return Err(Error::DimensionMismatch("all matrices must be n x n".into()));
        }
        Ok(CliffordSystem { n, mats })
    }

    /// Builds the system from the Hopf-type construction on `A²`, with `A` the
    /// algebra at the kind's level: `antidiag(Id, Id)`, the blocks
    /// `[[0, −R_u], [R_u, 0]]` for each imaginary unit `u`, and `diag(Id, −Id)`.
    pub fn standard(kind: StandardKind) -> CliffordSystem {
        hopf_type_system(kind.level())
    }

    pub fn standard_spin9() -> CliffordSystem {
        CliffordSystem::standard(StandardKind::Spin9)
    }

    /// Ambient dimension `N`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The index `m`; the system has `m + 1` endomorphisms.
    pub fn m(&self) -> usize {
        self.mats.len() - 1
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn verify(&self) -> VerifyReport {
        let id = Matrix::identity(self.n);
        let mut failures = Vec::new();
        let (mut sym, mut inv, mut anti) = (true, true, true);
        for (i, p) in self.mats.iter().enumerate() {
            if p.rows() != self.n || p.cols() != self.n {
                failures.push(AxiomFailure::Shape { index: i });
                return VerifyReport {
                    n: self.n,
                    count: self.mats.len(),
                    symmetric: false,
                    involutions: false,
                    anticommuting: false,
                    failures,
                };
            }
        }
        for (i, p) in self.mats.iter().enumerate() {
            if sym && !p.is_symmetric().unwrap_or(false) {
                sym = false;
                failures.push(AxiomFailure::NotSymmetric { index: i });
            }
            if inv && p.mat_mul(p).map_or(true, |sq| sq != id) {
                inv = false;
                failures.push(AxiomFailure::NotInvolution { index: i });
            }
        }
        'outer: for i in 0..self.mats.len() {
            for j in i + 1..self.mats.len() {
                let ab = self.mats[i].mat_mul(&self.mats[j]).expect("square");
                let ba = self.mats[j].mat_mul(&self.mats[i]).expect("square");
                if !ab.add(&ba).expect("same shape").is_zero() {
                    anti = false;
                    failures.push(AxiomFailure::NotAnticommuting { first: i, second: j });
                    break 'outer;
                }
            }
        }
        VerifyReport {
            n: self.n,
            count: self.mats.len(),
            symmetric: sym,
            involutions: inv,
            anticommuting: anti,
            failures,
        }
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.verify();
        match report.failures.first() {
            None => Ok(()),
            Some(f) => Err(Error::InvalidSystem(f.to_string())),
        }
    }

    /// `C_m` on ℝᴺ to `C_{m+1}` on ℝ²ᴺ.
    pub fn extend(&self) -> Result<CliffordSystem> {
        self.extend_with(&[])
    }

    /// Like [`CliffordSystem::extend`], appending one more endomorphism
    /// `[[0, −B], [B, 0]]` per extra unit, where `B` is the block-wise right
    /// multiplication by that unit. The result must pass verification.
    pub fn extend_with(&self, extra: &[ExtraUnit]) -> Result<CliffordSystem> {
        self.require_valid()?;
        let n = self.n;
        let id = Matrix::identity(n);
        let zero = Matrix::zeros(n, n);
        let offdiag = |b: &Matrix| Matrix::block2(&zero, &b.neg(), b, &zero).expect("square blocks");
        let mut mats = vec![Matrix::block2(&zero, &id, &id, &zero)?];
        let p0 = &self.mats[0];
        for p in &self.mats[1..] {
            mats.push(offdiag(&p0.mat_mul(p)?));
        }
        for u in extra {
            let block = 1usize << u.level;
            if u.unit == 0 || u.unit >= block || !n.is_multiple_of(block) {
                return Err(Error::InvalidArgument(format!(
                    "unit {} at level {} does not fit ℝ^{n}",
                    u.unit, u.level
                )));
            }
            let r = CdElement::basis(u.level, u.unit).right_mult_matrix();
            mats.push(offdiag(&Matrix::kron(&Matrix::identity(n / block), &r)));
        }
        mats.push(Matrix::block2(&id, &zero, &zero, &id.neg())?);
        let out = CliffordSystem::new(mats)?;
        out.require_valid()?;
        Ok(out)
    }

    /// `tr(P₀P₁⋯P_m)`.
    pub fn trace_invariant(&self) -> Result<Rational> {
        self.require_valid()?;
        Matrix::product(&self.mats)?.trace()
    }

    /// `J_αβ = P_αP_β` or `J_αβγ = P_αP_βP_γ`, positions counted from 0.
    pub fn compose_j(&self, indices: &[usize]) -> Result<Matrix> {
        if !(2..=3).contains(&indices.len()) {
            return Err(Error::InvalidArgument("compose_j takes two or three indices".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) || *indices.last().unwrap() > self.m() {
            return Err(Error::InvalidArgument(format!("bad index list {indices:?}")));
        }
        Matrix::product(indices.iter().map(|&i| &self.mats[i]))
    }

    /// All `J_αβ`, `α < β`, in lexicographic order.
    pub fn pairs(&self) -> Vec<Matrix> {
        let k = self.mats.len();
        let mut out = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                out.push(self.compose_j(&[a, b]).expect("valid indices"));
            }
        }
        out
    }

    /// All `J_αβγ`, `α < β < γ`, in lexicographic order.
    pub fn triples(&self) -> Vec<Matrix> {
        let k = self.mats.len();
        let mut out = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                let ab = self.compose_j(&[a, b]).expect("valid indices");
                for c in b + 1..k {
                    out.push(ab.mat_mul(&self.mats[c]).expect("square"));
                }
            }
        }
        out
    }

    /// The first `count` endomorphisms, itself a Clifford system.
    pub fn truncate(&self, count: usize) -> Result<CliffordSystem> {
        if count == 0 || count > self.mats.len() {
            return Err(Error::InvalidArgument(format!("cannot keep {count} of {} matrices", self.mats.len())));
        }
        CliffordSystem::new(self.mats[..count].to_vec())
    }

    pub fn independence_count(&self) -> Result<usize> {
        independence_count(&self.mats)
    }
}

fn hopf_type_system(level: u32) -> CliffordSystem {
    let d = 1usize << level;
    let id = Matrix::identity(d);
    let zero = Matrix::zeros(d, d);
    let mut mats = vec![Matrix::block2(&zero, &id, &id, &zero).expect("square")];
    for a in 1..d {
        let r = CdElement::basis(level, a).right_mult_matrix();
        mats.push(Matrix::block2(&zero, &r.neg(), &r, &zero).expect("square"));
    }
    mats.push(Matrix::block2(&id, &zero, &zero, &id.neg()).expect("square"));
    CliffordSystem { n: 2 * d, mats }
}

/// `δ(m)`: irreducible Clifford systems `C_m` live on ℝ^{2δ(m)}.
pub fn delta(m: usize) -> Result<u128> {
    const SEEDS: [u128; 8] = [1, 2, 4, 4, 8, 8, 8, 8];
    match m {
        0 => Err(Error::InvalidArgument("delta is defined for m >= 1".into())),
        1..=8 => Ok(SEEDS[m - 1]),
        _ => delta(m - 8)?
            .checked_mul(16)
            .ok_or_else(|| Error::InvalidArgument(format!("delta({m}) overflows")))
    }
}

/// `|tr(P₀⋯P_m)|` is `2δ(m)` for `m ≡ 0 mod 4` and vanishes otherwise.
pub fn expected_trace_magnitude(m: usize) -> Result<u128> {
    Ok(if m.is_multiple_of(4) { 2 * delta(m)? } else { 0 })
}

/// Checks the orthonormality facts behind the independence argument:
/// `|tr P_α| ∈ {0, n}` and `tr(P_αP_β) = 0` for `α ≠ β`.
pub fn trace_orthonormality(c: &CliffordSystem) -> bool {
    let n = Rational::from(c.n() as i64);
    let traces_ok = c.mats().iter().all(|p| {
        let t = p.trace().expect("square").abs();
        t.is_zero() || t == n
    });
    let pairs_ok = (0..c.mats().len()).all(|i| {
        (i + 1..c.mats().len()).all(|j| c.mats()[i].frobenius(&c.mats()[j]).expect("same shape").is_zero())
    });
    traces_ok && pairs_ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn standard_systems_verify() {
        for kind in StandardKind::ALL {
            let c = CliffordSystem::standard(kind);
            assert!(c.verify().passed(), "{kind}");
            assert_eq!(c.n() as u128, 2 * delta(c.m()).unwrap());
            assert!(trace_orthonormality(&c));
        }
    }

    #[test]
    fn spin9_shape() {
        let c = CliffordSystem::standard_spin9();
        assert_eq!((c.n(), c.m()), (16, 8));
        let i1 = &c.mats()[0];
        assert_eq!(i1.mat_mul(i1).unwrap(), Matrix::identity(16));
        let anti = i1.mat_mul(&c.mats()[1]).unwrap().add(&c.mats()[1].mat_mul(i1).unwrap()).unwrap();
        assert!(anti.is_zero());
        let i9 = &c.mats()[8];
        assert!(i9.is_symmetric().unwrap());
        assert_eq!(i9[(0, 0)], q(1));
        assert_eq!(i9[(15, 15)], q(-1));
        assert!(c.compose_j(&[0, 1]).unwrap().is_skew().unwrap());
    }

    #[test]
    fn pauli_blocks() {
        let c = CliffordSystem::standard(StandardKind::PauliU2);
        let expect = Matrix::from_i64(4, 4, &[0, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 0]).unwrap();
        assert_eq!(c.mats()[1], expect);
        assert_eq!(CliffordSystem::standard(StandardKind::QuaternionicSp2Sp1).mats()[4][(7, 7)], q(-1));
    }

    #[test]
    fn rejects_non_anticommuting() {
        let c = CliffordSystem::new(vec![Matrix::identity(2), Matrix::identity(2)]).unwrap();
        let r = c.verify();
        assert!(!r.passed());
        assert_eq!(r.failures, vec![AxiomFailure::NotAnticommuting { first: 0, second: 1 }]);
        assert!(matches!(c.extend(), Err(Error::InvalidSystem(_))));
    }

    #[test]
    fn delta_table() {
        let table = [1, 2, 4, 4, 8, 8, 8, 8, 16, 32, 64, 64, 128, 128, 128, 128];
        for (m, d) in table.iter().enumerate() {
            assert_eq!(delta(m + 1).unwrap(), *d);
        }
        assert_eq!(delta(17).unwrap(), 256);
        assert!(delta(0).is_err());
    }

    #[test]
    fn extensions_follow_the_table() {
        // C₁ → C₂ → C₃ land on the irreducible dimensions; C₃ is not the last
        // system on ℝ⁸, so its extension is reducible and only verified.
        let mut c = CliffordSystem::standard(StandardKind::RealU1);
        for step in 0..3 {
            c = c.extend().unwrap();
            assert!(c.verify().passed());
            assert_eq!(c.n() as u128 == 2 * delta(c.m()).unwrap(), step < 2);
        }
        let c9 = CliffordSystem::standard_spin9().extend().unwrap();
        assert_eq!((c9.n(), c9.mats().len()), (32, 10));
    }

    #[test]
    fn extra_units_rebuild_the_basic_systems() {
        let pauli = CliffordSystem::standard(StandardKind::PauliU2);
        let quat = pauli.extend_with(&[ExtraUnit { level: 2, unit: 3 }]).unwrap();
        assert_eq!((quat.n(), quat.m()), (8, 4));
        let units: Vec<ExtraUnit> = (5..8).map(|unit| ExtraUnit { level: 3, unit }).collect();
        let spin9 = CliffordSystem::standard(StandardKind::QuaternionicSp2Sp1).extend_with(&units).unwrap();
        assert_eq!((spin9.n(), spin9.m()), (16, 8));
        // P₀P₄ of the quaternionic system already acts as R_e; repeating it fails.
        let clash = CliffordSystem::standard(StandardKind::QuaternionicSp2Sp1).extend_with(&[ExtraUnit { level: 3, unit: 4 }]);
        assert!(matches!(clash, Err(Error::InvalidSystem(_))));
        assert!(pauli.extend_with(&[ExtraUnit { level: 2, unit: 1 }]).is_err());
    }

    #[test]
    fn traces() {
        let t = |k| CliffordSystem::standard(k).trace_invariant().unwrap();
        assert_eq!(t(StandardKind::Spin9).abs(), q(16));
        assert_eq!(t(StandardKind::QuaternionicSp2Sp1).abs(), q(8));
        assert_eq!(t(StandardKind::PauliU2), q(0));
        assert_eq!(t(StandardKind::RealU1), q(0));
    }

    #[test]
    fn compositions() {
        let c = CliffordSystem::standard_spin9();
        let j = c.compose_j(&[0, 1]).unwrap();
        assert_eq!(j.mat_mul(&j).unwrap(), Matrix::identity(16).neg());
        assert!(c.compose_j(&[1, 0]).is_err());
        assert!(c.compose_j(&[0, 9]).is_err());
        for t in c.triples() {
            assert!(t.is_skew().unwrap());
            assert_eq!(t.mat_mul(&t).unwrap(), Matrix::identity(16).neg());
        }
        assert_eq!(independence_count(&c.pairs()).unwrap(), 36);
        assert_eq!(independence_count(&c.triples()).unwrap(), 84);
    }
}
