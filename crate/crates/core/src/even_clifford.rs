//! Even Clifford structures on the Cayley–Rosenfeld model spaces and on the
//! 16-dimensional Grassmannian models.
//!
//! For the planes, coordinates of `A ⊗ ℝ¹⁶` are grouped by the algebra
//! component: index `16·c + s`, with `c` the component in `A` and `s` the
//! spin9 index. The `𝕴`-type generators are `R_u ⊗ Id₁₆` and the Pauli part
//! is `Id ⊗ I_α`; the two factors commute.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cayley_dickson::{CdElement, OCTONION_UNITS};
use crate::clifford::{CliffordSystem, StandardKind};
use crate::error::{Error, Result};
use crate::exterior::{charpoly_coeffs_upto, Blade, FormMatrix, Multivector};
use crate::matrix::{independence_count, Matrix};
use crate::rational::Rational;
use crate::sparse::{lie_closure_dim_sparse, SparseMatrix};

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ModelName {
    EIII,
    EVI,
    EVIII,
    /// `Gr₈(ℝ^{2m+8})` at `m = 1`, on `(𝕆 ⊕ 𝕆)¹`.
    Gr8R_2m8,
    /// `Gr₄(ℂ^{2m+4})` at `m = 1`.
    Gr4C_2m4,
    /// `Gr₂(ℍ^{n+2})` at `n = 2`.
    Gr2H_n2,
}

impl ModelName {
    pub const ALL: [ModelName; 6] =
        [ModelName::EIII, ModelName::EVI, ModelName::EVIII, ModelName::Gr8R_2m8, ModelName::Gr4C_2m4, ModelName::Gr2H_n2];

    pub fn name(self) -> &'static str {
        match self {
            ModelName::EIII => "EIII",
            ModelName::EVI => "EVI",
            ModelName::EVIII => "EVIII",
            ModelName::Gr8R_2m8 => "Gr8R_2m8",
            ModelName::Gr4C_2m4 => "Gr4C_2m4",
            ModelName::Gr2H_n2 => "Gr2H_n2",
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelName {
    type Err = Error;
    fn from_str(s: &str) -> Result<ModelName> {
        ModelName::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Unsupported(format!("model `{s}`")))
    }
}

/// How a generator squares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GeneratorKind {
    /// `g² = −Id`, `gᵀ = −g`.
    ComplexStructure,
    /// `g² = Id`, `gᵀ = g`.
    Involution,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvenCliffordModel {
    pub name: ModelName,
    pub ambient_dim: usize,
    pub generators: Vec<SparseMatrix>,
    pub kinds: Vec<GeneratorKind>,
    pub labels: Vec<String>,
}

const PLANE_UNITS: [&str; 7] = ["𝕴", "𝕵", "𝕶", "𝕷", "𝕸", "𝕹", "𝕳"];

fn spin9_sparse() -> Vec<SparseMatrix> {
    CliffordSystem::standard_spin9().mats().iter().map(SparseMatrix::from_dense).collect()
}

/// `A ⊗ ℝ¹⁶` with `A` at Cayley–Dickson level `level`.
fn plane(name: ModelName, level: u32) -> EvenCliffordModel {
    let d = 1usize << level;
    let id16 = SparseMatrix::identity(16);
    let idd = SparseMatrix::identity(d);
    let mut generators = Vec::new();
    let mut kinds = Vec::new();
    let mut labels = Vec::new();
    for a in 1..d {
        let r = SparseMatrix::from_dense(&CdElement::basis(level, a).right_mult_matrix());
        generators.push(SparseMatrix::kron(&r, &id16));
        kinds.push(GeneratorKind::ComplexStructure);
        labels.push(PLANE_UNITS[a - 1].to_string());
    }
    for (a, i) in spin9_sparse().iter().enumerate() {
        generators.push(SparseMatrix::kron(&idd, i));
        kinds.push(GeneratorKind::Involution);
        labels.push(format!("I{}", a + 1));
    }
    EvenCliffordModel { name, ambient_dim: 16 * d, generators, kinds, labels }
}

/// The operators `m_u`, `u` running over the first `rank` octonion units,
/// repeated on `pairs` copies of `𝕆 ⊕ 𝕆`.
fn grassmann_octonionic(name: ModelName, rank: usize, pairs: usize) -> EvenCliffordModel {
    let generators = (0..rank)
        .map(|a| SparseMatrix::from_dense(&m_u(&CdElement::basis(3, a))).repeat_diag(pairs))
        .collect();
    EvenCliffordModel {
        name,
        ambient_dim: 16 * pairs,
        generators,
        kinds: vec![GeneratorKind::ComplexStructure; rank],
        labels: OCTONION_UNITS[..rank].iter().map(|u| format!("m_{u}")).collect(),
    }
}

pub fn build_model(name: ModelName) -> EvenCliffordModel {
    match name {
        ModelName::EIII => plane(name, 1),
        ModelName::EVI => plane(name, 2),
        ModelName::EVIII => plane(name, 3),
        ModelName::Gr8R_2m8 => grassmann_octonionic(name, 8, 1),
        ModelName::Gr4C_2m4 => grassmann_octonionic(name, 6, 1),
        ModelName::Gr2H_n2 => {
            let sigma: Vec<SparseMatrix> = CliffordSystem::standard(StandardKind::QuaternionicSp2Sp1)
                .mats()
                .iter()
                .map(|p| SparseMatrix::from_dense(p).repeat_diag(2))
                .collect();
            EvenCliffordModel {
                name,
                ambient_dim: 16,
                kinds: vec![GeneratorKind::Involution; sigma.len()],
                labels: (1..=sigma.len()).map(|a| format!("σ{a}")).collect(),
                generators: sigma,
            }
        }
    }
}

/// Parses the name and builds the model.
pub fn build_model_named(name: &str) -> Result<EvenCliffordModel> {
    Ok(build_model(name.parse()?))
}

fn frobenius(a: &SparseMatrix, b: &SparseMatrix) -> Rational {
    let mut acc = Rational::zero();
    for (i, j, x) in a.triplets() {
        let y = b.get(i, j);
        if !y.is_zero() {
            acc += x * &y;
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelReport {
    pub name: ModelName,
    pub ambient_dim: usize,
    pub rank: usize,
    pub orthonormal: bool,
    pub squares_ok: bool,
    pub lambda2_count: usize,
    pub lambda2_complex: bool,
}

impl ModelReport {
    pub fn passed(&self) -> bool {
        self.orthonormal && self.squares_ok && self.lambda2_complex
    }
}

impl EvenCliffordModel {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// `J_αβ = g_α ∘ g_β` for `α < β`, lexicographic.
    pub fn lambda2_generators(&self) -> Vec<SparseMatrix> {
        let r = self.rank();
        let mut out = Vec::with_capacity(r * (r - 1) / 2);
        for a in 0..r {
            for b in a + 1..r {
                out.push(self.generators[a].mul(&self.generators[b]).expect("same shape"));
            }
        }
        out
    }

    /// Index pairs in the order of [`EvenCliffordModel::lambda2_generators`].
    pub fn lambda2_labels(&self) -> Vec<String> {
        let r = self.rank();
        let mut out = Vec::new();
        for a in 0..r {
            for b in a + 1..r {
                out.push(format!("{}{}", self.labels[a], self.labels[b]));
            }
        }
        out
    }

    /// Orthonormality under `tr(AᵀB)/n`, the squaring rule of each family,
    /// and that every `J_αβ` is skew with `J² = −Id`.
    pub fn check(&self) -> ModelReport {
        let n = self.ambient_dim;
        let nq = Rational::from_integer(n as i64);
        let r = self.rank();
        let mut orthonormal = true;
        for a in 0..r {
            for b in a..r {
                let t = &frobenius(&self.generators[a], &self.generators[b]) / &nq;
                let want = if a == b { Rational::one() } else { Rational::zero() };
                orthonormal &= t == want;
            }
        }
        let id = SparseMatrix::identity(n);
        let squares_ok = self.generators.iter().zip(&self.kinds).all(|(g, k)| {
            let sq = g.mul(g).expect("square");
            match k {
                GeneratorKind::ComplexStructure => g.is_skew() && sq == id.neg(),
                GeneratorKind::Involution => g.is_symmetric() && sq == id,
            }
        });
        let j = self.lambda2_generators();
        let lambda2_complex = j.iter().all(|m| m.is_skew() && m.mul(m).expect("square") == id.neg());
        ModelReport { name: self.name, ambient_dim: n, rank: r, orthonormal, squares_ok, lambda2_count: j.len(), lambda2_complex }
    }

    /// Dimension of the Lie algebra generated by all `J_αβ`.
    pub fn closure_dim(&self) -> Result<usize> {
        let n = self.ambient_dim;
        lie_closure_dim_sparse(&self.lambda2_generators(), n * (n - 1) / 2)
    }

    /// The matrix of Kähler forms `ψ_αβ = kahler(J_αβ)`.
    pub fn kahler_matrix(&self) -> Result<FormMatrix> {
        let j = self.lambda2_generators();
        let r = self.rank();
        let index = |a: usize, b: usize| a * (2 * r - a - 1) / 2 + (b - a - 1);
        FormMatrix::from_upper(r, self.ambient_dim, |a, b| kahler_sparse(&j[index(a, b)]))
    }
}

/// `Σ_{i<j} J_ij e^{ij}` for a skew sparse matrix.
pub fn kahler_sparse(j: &SparseMatrix) -> Result<Multivector> {
    if !j.is_skew() {
        return Err(Error::NotSkew);
    }
    let terms = j
        .triplets()
        .filter(|(a, b, _)| a < b)
        .map(|(a, b, c)| (Blade((1u128 << a) | (1u128 << b)), c.clone()));
    Multivector::from_terms(j.rows(), terms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub name: ModelName,
    pub generators: usize,
    pub closure_dim: usize,
    /// `r(r−1)/2`, the dimension of `spin(r)`.
    pub spin_dim: usize,
}

pub fn closure_report(model: &EvenCliffordModel) -> Result<ClosureReport> {
    let r = model.rank();
    Ok(ClosureReport {
        name: model.name,
        generators: r * (r - 1) / 2,
        closure_dim: model.closure_dim()?,
        spin_dim: r * (r - 1) / 2,
    })
}

/// EIII closures: from `J_α9` alone (the `u(1)` direction and spin9's
/// generators), and the spin9 part `J_αβ` with `α, β ≥ 1`.
pub fn eiii_closures() -> Result<(usize, usize)> {
    let model = build_model(ModelName::EIII);
    let g = &model.generators;
    let last = g.len() - 1;
    let j9: Vec<SparseMatrix> = (0..last).map(|a| g[a].mul(&g[last]).expect("square")).collect();
    let from_j9 = lie_closure_dim_sparse(&j9, 496)?;
    let mut spin9 = Vec::new();
    for a in 1..g.len() {
        for b in a + 1..g.len() {
            spin9.push(g[a].mul(&g[b])?);
        }
    }
    Ok((from_j9, lie_closure_dim_sparse(&spin9, 496)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EiiiTau2 {
    pub tau2: Multivector,
    pub omega_squared: Multivector,
    /// `τ₂ + 3ω²`, zero when the identity holds.
    pub defect: Multivector,
    /// `τ₄` restricted to a few 8-dimensional coordinate subspaces.
    pub tau4_samples: Vec<(Vec<usize>, Rational)>,
}

impl EiiiTau2 {
    pub fn identity_holds(&self) -> bool {
        self.defect.is_zero()
    }

    pub fn tau4_nonzero(&self) -> bool {
        self.tau4_samples.iter().any(|(_, c)| !c.is_zero())
    }
}

/// Coordinate subspaces (1-based) used to witness `τ₄ ≠ 0`: a purely real one, and
/// mixed ones pairing real and imaginary coordinates.
pub const TAU4_WITNESSES: [[usize; 8]; 3] =
    [[1, 2, 3, 4, 5, 6, 7, 8], [1, 2, 3, 4, 17, 18, 19, 20], [1, 2, 9, 10, 17, 18, 25, 26]];

pub fn eiii_tau2() -> Result<EiiiTau2> {
    let model = build_model(ModelName::EIII);
    let psi = model.kahler_matrix()?;
    let tau2 = charpoly_coeffs_upto(&psi, 2)?.pop().expect("two coefficients");
    let omega = kahler_sparse(&model.generators[0])?;
    let omega_squared = omega.wedge(&omega)?;
    let defect = tau2.add(&omega_squared.scale(&Rational::from_integer(3)))?;
    let mut tau4_samples = Vec::new();
    for w in TAU4_WITNESSES {
        let blade = Blade::from_indices(&w)?;
        let tau4 = charpoly_coeffs_upto(&psi.restrict(blade), 4)?.pop().expect("four coefficients");
        tau4_samples.push((w.to_vec(), tau4.coeff(blade)));
    }
    Ok(EiiiTau2 { tau2, omega_squared, defect, tau4_samples })
}

/// `m_u = [[0, R_u], [−R_ū, 0]]` on `𝕆 ⊕ 𝕆`.
pub fn m_u(u: &CdElement) -> Matrix {
    let z = Matrix::zeros(8, 8);
    Matrix::block2(&z, &u.right_mult_matrix(), &u.conjugate().right_mult_matrix().neg(), &z).expect("8x8 blocks")
}

/// `m_{u,v} = diag(−R_u∘R_v̄, −R_ū∘R_v) = m_u ∘ m_v`.
pub fn m_uv(u: &CdElement, v: &CdElement) -> Result<Matrix> {
    if u.level() != 3 || v.level() != 3 {
        return Err(Error::InvalidArgument("m_uv takes octonions".into()));
    }
    let (ru, rv) = (u.right_mult_matrix(), v.right_mult_matrix());
    let (rub, rvb) = (u.conjugate().right_mult_matrix(), v.conjugate().right_mult_matrix());
    let z = Matrix::zeros(8, 8);
    Matrix::block2(&ru.mat_mul(&rvb)?.neg(), &z, &z, &rub.mat_mul(&rv)?.neg())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuvCheck {
    pub orthonormal_input: bool,
    pub squares_to_minus_id: bool,
    pub antisymmetric: bool,
}

impl MuvCheck {
    /// The properties that must hold for orthonormal input.
    pub fn expected(&self) -> bool {
        !self.orthonormal_input || (self.squares_to_minus_id && self.antisymmetric)
    }
}

pub fn muv_check(u: &CdElement, v: &CdElement) -> Result<MuvCheck> {
    let m = m_uv(u, v)?;
    let orthonormal_input = u.norm2().is_one() && v.norm2().is_one() && u.dot(v).is_zero();
    Ok(MuvCheck {
        orthonormal_input,
        squares_to_minus_id: m.mat_mul(&m)? == Matrix::identity(16).neg(),
        antisymmetric: m_uv(v, u)? == m.neg(),
    })
}

/// Applies `m_{u,v}` to each consecutive pair `(x_{2i−1}, x_{2i})`.
pub fn grassmann_phi_apply(u: &CdElement, v: &CdElement, tangent: &[CdElement]) -> Result<Vec<CdElement>> {
    if !tangent.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("tangent needs an even number of octonions, got {}", tangent.len())));
    }
    let m = m_uv(u, v)?;
    let mut out = Vec::with_capacity(tangent.len());
    for pair in tangent.chunks(2) {
        let coords: Vec<Rational> = pair[0].coeffs().iter().chain(pair[1].coeffs()).cloned().collect();
        if coords.len() != 16 {
            return Err(Error::InvalidArgument("tangent entries must be octonions".into()));
        }
        let img = m.apply(&coords)?;
        out.push(CdElement::new(3, img[..8].to_vec())?);
        out.push(CdElement::new(3, img[8..].to_vec())?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusEntry {
    pub label: String,
    pub ambient_dim: usize,
    pub matrices: usize,
    pub independent: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub entries: Vec<CensusEntry>,
}

impl Census {
    pub fn get(&self, label: &str) -> Option<&CensusEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    fn count(&self, label: &str) -> usize {
        self.get(label).map_or(0, |e| e.independent)
    }

    /// 36 + 84 = 120 = dim so(16).
    pub fn spin9_splits_so16(&self) -> bool {
        self.count("spin9_pairs") == 36 && self.count("spin9_triples") == 84 && self.count("spin9_pairs_and_triples") == 120
    }

    /// The C₆ triples exceed `dim Λ²₂₁ = 21`.
    pub fn spin7_obstruction(&self) -> bool {
        self.count("c6_triples") == 35 && 35 > 21
    }

    pub fn passed(&self) -> bool {
        self.spin9_splits_so16()
            && self.spin7_obstruction()
            && self.count("quaternionic_pairs") == 10
            && self.count("octonion_right_pairs") == 21
    }
}

fn entry(label: &str, mats: &[Matrix]) -> Result<CensusEntry> {
    Ok(CensusEntry {
        label: label.to_string(),
        ambient_dim: mats.first().map_or(0, Matrix::rows),
        matrices: mats.len(),
        independent: independence_count(mats)?,
    })
}

/// Independence counts of the standard families of skew endomorphisms.
///
/// A `C₆` has `δ(6) = 8`, so it lives on ℝ¹⁶; it is taken as the first seven
/// of `I₁, …, I₉`. Its triples commute with the volume element
/// `P₀⋯P₆`, a complex structure, so they act on ℂ⁸.
pub fn structure_census() -> Result<Census> {
    let spin9 = CliffordSystem::standard_spin9();
    let pairs = spin9.pairs();
    let triples = spin9.triples();
    let both: Vec<Matrix> = pairs.iter().chain(&triples).cloned().collect();
    let c6 = spin9.truncate(7)?.triples();
    let quat = CliffordSystem::standard(StandardKind::QuaternionicSp2Sp1).pairs();
    let rights: Vec<Matrix> = (1..8).map(|a| CdElement::basis(3, a).right_mult_matrix()).collect();
    let mut right_pairs = Vec::new();
    for a in 0..7 {
        for b in a + 1..7 {
            right_pairs.push(rights[a].mat_mul(&rights[b])?);
        }
    }
    Ok(Census {
        entries: vec![
            entry("spin9_pairs", &pairs)?,
            entry("spin9_triples", &triples)?,
            entry("spin9_pairs_and_triples", &both)?,
            entry("c6_triples", &c6)?,
            entry("quaternionic_pairs", &quat)?,
            entry("octonion_right_pairs", &right_pairs)?,
        ],
    })
}

impl fmt::Display for Census {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{:<26} R^{:<3} {:>3} matrices, {:>3} independent", e.label, e.ambient_dim, e.matrices, e.independent)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    #[test]
    fn models_have_the_right_shape() {
        let want = [
            (ModelName::EIII, 32, 10),
            (ModelName::EVI, 64, 12),
            (ModelName::EVIII, 128, 16),
            (ModelName::Gr8R_2m8, 16, 8),
            (ModelName::Gr4C_2m4, 16, 6),
            (ModelName::Gr2H_n2, 16, 5),
        ];
        for (name, n, r) in want {
            let m = build_model(name);
            assert_eq!((m.ambient_dim, m.rank()), (n, r), "{name}");
            let rep = m.check();
            assert!(rep.passed(), "{rep:?}");
        }
        assert!("eiii".parse::<ModelName>().is_ok());
        assert!("FII".parse::<ModelName>().is_err());
    }

    #[test]
    fn eiii_complex_structure_is_block_rotation() {
        let m = build_model(ModelName::EIII);
        let i = m.generators[0].to_dense();
        let z = Matrix::zeros(16, 16);
        let id = Matrix::identity(16);
        assert_eq!(i, Matrix::block2(&z, &id.neg(), &id, &z).unwrap());
        // 𝕴 I₉ = diag(Id₈, −Id₈) ⊗ i
        let i9 = m.generators[0].mul(&m.generators[9]).unwrap().to_dense();
        assert_eq!(i9[(16, 0)], q(1));
        assert_eq!(i9[(24, 8)], q(-1));
    }

    #[test]
    fn closures() {
        assert_eq!(eiii_closures().unwrap(), (45, 36));
        assert_eq!(build_model(ModelName::EIII).closure_dim().unwrap(), 45);
        assert_eq!(build_model(ModelName::EVI).closure_dim().unwrap(), 66);
        assert_eq!(build_model(ModelName::EVIII).closure_dim().unwrap(), 120);
        assert_eq!(build_model(ModelName::Gr8R_2m8).closure_dim().unwrap(), 28);
        assert_eq!(build_model(ModelName::Gr4C_2m4).closure_dim().unwrap(), 15);
        assert_eq!(build_model(ModelName::Gr2H_n2).closure_dim().unwrap(), 10);
    }

    #[test]
    fn eiii_tau2_identity() {
        let t = eiii_tau2().unwrap();
        assert!(t.tau2.is_homogeneous_of(4));
        assert!(!t.tau2.is_zero());
        assert!(t.identity_holds(), "defect has {} terms", t.defect.len());
        assert!(t.tau4_nonzero());
        // the real coordinates see spin9's τ₄ = 360Φ with Φ = −14 on e^{1..8}
        assert_eq!(t.tau4_samples[0].1, q(-5040));
        assert_eq!(t.tau4_samples[1].1, q(-144));
    }

    #[test]
    fn muv_properties() {
        let one = CdElement::one(3);
        let i = CdElement::basis(3, 1);
        let c = muv_check(&one, &i).unwrap();
        assert!(c.orthonormal_input && c.squares_to_minus_id && c.antisymmetric);
        let d = muv_check(&one, &one).unwrap();
        assert!(!d.orthonormal_input && !d.squares_to_minus_id);
        assert_eq!(m_uv(&one, &one).unwrap(), Matrix::identity(16).neg());
        let mu = m_u(&one).mat_mul(&m_u(&i)).unwrap();
        assert_eq!(mu, m_uv(&one, &i).unwrap());
        assert!(m_uv(&CdElement::one(2), &i).is_err());
    }

    #[test]
    fn phi_on_one_pair_is_muv() {
        let u = CdElement::basis(3, 2);
        let v = CdElement::basis(3, 5);
        let x = CdElement::from_i64(3, &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        let y = CdElement::from_i64(3, &[-1, 0, 2, 0, 3, 0, -4, 1]).unwrap();
        let out = grassmann_phi_apply(&u, &v, &[x.clone(), y.clone()]).unwrap();
        let coords: Vec<Rational> = x.coeffs().iter().chain(y.coeffs()).cloned().collect();
        let img = m_uv(&u, &v).unwrap().apply(&coords).unwrap();
        assert_eq!(out[0].coeffs(), &img[..8]);
        assert_eq!(out[1].coeffs(), &img[8..]);
        assert!(grassmann_phi_apply(&u, &v, &[x]).is_err());
    }

    #[test]
    fn census() {
        let c = structure_census().unwrap();
        assert!(c.passed(), "{c}");
    }

    fn octonion() -> impl Strategy<Value = CdElement> {
        proptest::collection::vec(-4i64..=4, 8).prop_map(|c| CdElement::from_i64(3, &c).unwrap())
    }

    // (a, a·e_k) is orthogonal with both norms |a|²; m_{u,v} is bilinear, so
    // dividing by |a|² gives the unit-vector case exactly.
    fn orthogonal_pair(a: &CdElement, k: usize) -> (CdElement, CdElement) {
        (a.clone(), a.mul(&CdElement::basis(3, k)).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn muv_antisymmetric_and_square(a in octonion(), k in 1usize..8) {
            prop_assume!(!a.is_zero());
            let (u, v) = orthogonal_pair(&a, k);
            let n2 = a.norm2();
            let m = m_uv(&u, &v).unwrap().scale(&n2.recip());
            let mt = m_uv(&v, &u).unwrap().scale(&n2.recip());
            prop_assert_eq!(mt, m.neg());
            prop_assert_eq!(m.mat_mul(&m).unwrap(), Matrix::identity(16).neg());
        }

        #[test]
        fn phi_twice_negates(a in octonion(), k in 1usize..8, t in proptest::collection::vec(octonion(), 4)) {
            prop_assume!(!a.is_zero());
            let (u, v) = orthogonal_pair(&a, k);
            let s = a.norm2().recip();
            let (u, v) = (u.scale(&s), v);
            let once = grassmann_phi_apply(&u, &v, &t).unwrap();
            let twice = grassmann_phi_apply(&u, &v, &once).unwrap();
            for (x, y) in t.iter().zip(&twice) {
                prop_assert_eq!(y, &x.neg());
            }
        }

        #[test]
        fn phi_is_linear(t1 in proptest::collection::vec(octonion(), 2), t2 in proptest::collection::vec(octonion(), 2), c in -5i64..=5) {
            let (u, v) = (CdElement::basis(3, 3), CdElement::basis(3, 6));
            let combo: Vec<CdElement> = t1.iter().zip(&t2).map(|(x, y)| x.add(&y.scale(&q(c))).unwrap()).collect();
            let lhs = grassmann_phi_apply(&u, &v, &combo).unwrap();
            let a = grassmann_phi_apply(&u, &v, &t1).unwrap();
            let b = grassmann_phi_apply(&u, &v, &t2).unwrap();
            for ((l, x), y) in lhs.iter().zip(&a).zip(&b) {
                prop_assert_eq!(l, &x.add(&y.scale(&q(c))).unwrap());
            }
        }
    }
}

