//! Sparse exterior algebra over ℝⁿ with exact coefficients.
//!
//! Blades are bitmasks (bit `i` ↔ index `i + 1`), so `n ≤ 128`. The sign of
//! `e^A ∧ e^B` is `(−1)^t` with `t` the number of pairs `a ∈ A, b ∈ B`,
//! `a > b`, which is a popcount per index of `B`.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::{gcd_integers, Rational};

pub const MAX_DIM: usize = 128;

/// Basis monomial `e^{i₁…i_k}`, stored as a bitmask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade(pub u128);

impl Blade {
    /// From strictly increasing 1-based indices.
    pub fn from_indices(indices: &[usize]) -> Result<Blade> {
        let mut mask = 0u128;
        let mut last = 0;
        for &i in indices {
            if i == 0 || i > MAX_DIM || i <= last {
                return Err(Error::InvalidArgument(format!("blade indices {indices:?} are not strictly increasing in 1..=128")));
            }
            mask |= 1u128 << (i - 1);
            last = i;
        }
        Ok(Blade(mask))
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        let mut m = self.0;
        let mut out = Vec::with_capacity(self.grade());
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            out.push(i + 1);
            m &= m - 1;
        }
        out
    }

    /// Largest index used, 0 for the empty blade.
    pub fn max_index(self) -> usize {
        128 - self.0.leading_zeros() as usize
    }

    /// Sign of `e^self ∧ e^other`, or `None` when they share an index.
    #[inline]
    pub fn wedge_sign(self, other: Blade) -> Option<bool> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut b = other.0;
        while b != 0 {
            let j = b.trailing_zeros();
            swaps += (self.0 >> j).count_ones();
            b &= b - 1;
        }
        Some(swaps % 2 == 1)
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices().iter().map(ToString::to_string).collect();
        write!(f, "e^{{{}}}", idx.join(","))
    }
}

/// A sparse exterior form; terms are kept sorted by blade mask with no zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multivector {
    n: usize,
    terms: Vec<(Blade, Rational)>,
}

/// Above this many term pairs a wedge is split across threads.
const PAR_THRESHOLD: usize = 1 << 16;

impl Multivector {
    pub fn zero(n: usize) -> Multivector {
        assert!(n <= MAX_DIM, "dimension {n} exceeds {MAX_DIM}");
        Multivector { n, terms: Vec::new() }
    }

    pub fn scalar(n: usize, c: Rational) -> Multivector {
        Multivector::from_terms(n, [(Blade(0), c)]).expect("empty blade fits")
    }

    /// The 1-form `e^i`, `i` counted from 1.
    pub fn basis(n: usize, i: usize) -> Result<Multivector> {
        Multivector::monomial(n, &[i], Rational::one())
    }

    /// `c · e^{indices}`, with the indices in any order (the sign follows the sort).
    pub fn monomial(n: usize, indices: &[usize], c: Rational) -> Result<Multivector> {
        let mut out = Multivector::scalar(n, c);
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::InvalidArgument(format!("index {i} outside 1..={n}")));
            }
            let e = Multivector { n, terms: vec![(Blade(1u128 << (i - 1)), Rational::one())] };
            out = out.wedge(&e)?;
        }
        Ok(out)
    }

    /// Sums duplicate blades and drops zeros.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Blade, Rational)>) -> Result<Multivector> {
        if n > MAX_DIM {
            return Err(Error::InvalidArgument(format!("dimension {n} exceeds {MAX_DIM}")));
        }
        let mut acc: HashMap<Blade, Rational> = HashMap::new();
        for (b, c) in terms {
            if b.max_index() > n {
                return Err(Error::DimensionMismatch(format!("{b} does not fit in dimension {n}")));
            }
            *acc.entry(b).or_insert_with(Rational::zero) += c;
        }
        Ok(Multivector::from_map(n, acc))
    }

    fn from_map(n: usize, acc: HashMap<Blade, Rational>) -> Multivector {
        let mut terms: Vec<(Blade, Rational)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|(b, _)| *b);
        Multivector { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Blade, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, blade: Blade) -> Rational {
        match self.terms.binary_search_by_key(&blade, |(b, _)| *b) {
            Ok(k) => self.terms[k].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Coefficient of `e^{indices}` for strictly increasing 1-based indices.
    pub fn coeff_of(&self, indices: &[usize]) -> Result<Rational> {
        Ok(self.coeff(Blade::from_indices(indices)?))
    }

    /// Coefficient of the volume form `e^{1…n}`.
    pub fn top_coeff(&self) -> Rational {
        let mask = if self.n == 128 { u128::MAX } else { (1u128 << self.n) - 1 };
        self.coeff(Blade(mask))
    }

    /// The common grade, or `None` for zero or mixed forms.
    pub fn grade(&self) -> Option<usize> {
        let g = self.terms.first()?.0.grade();
        self.terms.iter().all(|(b, _)| b.grade() == g).then_some(g)
    }

    /// True for zero or for a form whose terms all have grade `g`.
    pub fn is_homogeneous_of(&self, g: usize) -> bool {
        self.terms.iter().all(|(b, _)| b.grade() == g)
    }

    fn check_dim(&self, other: &Multivector) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!("forms on R^{} and R^{}", self.n, other.n)))
        }
    }

    pub fn add(&self, other: &Multivector) -> Result<Multivector> {
        self.check_dim(other)?;
        Ok(Multivector { n: self.n, terms: merge(&self.terms, &other.terms, false) })
    }

    pub fn sub(&self, other: &Multivector) -> Result<Multivector> {
        self.check_dim(other)?;
        Ok(Multivector { n: self.n, terms: merge(&self.terms, &other.terms, true) })
    }

    pub fn scale(&self, s: &Rational) -> Multivector {
        if s.is_zero() {
            return Multivector::zero(self.n);
        }
        Multivector { n: self.n, terms: self.terms.iter().map(|(b, c)| (*b, c * s)).collect() }
    }

    pub fn neg(&self) -> Multivector {
        Multivector { n: self.n, terms: self.terms.iter().map(|(b, c)| (*b, -c)).collect() }
    }

    pub fn wedge(&self, other: &Multivector) -> Result<Multivector> {
        self.check_dim(other)?;
        if self.terms.len() * other.terms.len() < PAR_THRESHOLD {
            return Ok(Multivector::from_map(self.n, wedge_into(&self.terms, &other.terms)));
        }
        // Chunked over the left factor; partial maps are merged in chunk order.
        let chunk = (self.terms.len() / rayon::current_num_threads().max(1)).max(1);
        let parts: Vec<HashMap<Blade, Rational>> =
            self.terms.par_chunks(chunk).map(|c| wedge_into(c, &other.terms)).collect();
        let mut acc: HashMap<Blade, Rational> = HashMap::new();
        for part in parts {
            for (b, c) in part {
                *acc.entry(b).or_insert_with(Rational::zero) += c;
            }
        }
        Ok(Multivector::from_map(self.n, acc))
    }

    /// `a₁ ∧ a₂ ∧ …`, left to right.
    pub fn wedge_all<'a>(forms: impl IntoIterator<Item = &'a Multivector>) -> Result<Multivector> {
        let mut it = forms.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty wedge product".into()))?
            .clone();
        it.try_fold(first, |acc, f| acc.wedge(f))
    }

    /// Drops every term that uses an index outside `keep`. The coefficient of
    /// any blade inside `keep` in a wedge product is unchanged by restricting
    /// the factors first.
    pub fn restrict(&self, keep: Blade) -> Multivector {
        Multivector {
            n: self.n,
            terms: self.terms.iter().filter(|(b, _)| b.0 & !keep.0 == 0).cloned().collect(),
        }
    }

    /// Gcd of the coefficients when all are integers.
    pub fn integer_gcd(&self) -> Option<Rational> {
        if !self.terms.iter().all(|(_, c)| c.is_integer()) {
            return None;
        }
        Some(self.terms.iter().fold(Rational::zero(), |g, (_, c)| gcd_integers(&g, c)))
    }

    /// Histogram of coefficient values, sorted by value.
    pub fn coeff_histogram(&self) -> Vec<(Rational, usize)> {
        let mut h: HashMap<Rational, usize> = HashMap::new();
        for (_, c) in &self.terms {
            *h.entry(c.clone()).or_default() += 1;
        }
        let mut v: Vec<_> = h.into_iter().collect();
        v.sort();
        v
    }

    /// Squared Euclidean norm of the coefficient vector.
    pub fn norm2(&self) -> Rational {
        self.terms.iter().map(|(_, c)| c * c).sum()
    }

    /// Terms ordered lexicographically by their index lists.
    pub fn lex_terms(&self) -> Vec<(Vec<usize>, Rational)> {
        let mut v: Vec<(Vec<usize>, Rational)> = self.terms.iter().map(|(b, c)| (b.indices(), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

fn wedge_into(a: &[(Blade, Rational)], b: &[(Blade, Rational)]) -> HashMap<Blade, Rational> {
    let mut acc: HashMap<Blade, Rational> = HashMap::with_capacity(a.len() * b.len() / 2 + 1);
    for (ba, ca) in a {
        for (bb, cb) in b {
            if let Some(neg) = ba.wedge_sign(*bb) {
                let t = ca * cb;
                let e = acc.entry(Blade(ba.0 | bb.0)).or_insert_with(Rational::zero);
                if neg {
                    *e -= t;
                } else {
                    *e += t;
                }
            }
        }
    }
    acc
}

fn merge(a: &[(Blade, Rational)], b: &[(Blade, Rational)], negate_b: bool) -> Vec<(Blade, Rational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let bval = |c: &Rational| if negate_b { -c } else { c.clone() };
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, bval(&b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(bl, c)| (*bl, bval(c))));
    out
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (idx, c)) in self.lex_terms().into_iter().enumerate() {
            let sign = if c.signum() < 0 { "-" } else if k == 0 { "" } else { "+" };
            let mag = c.abs();
            let body: Vec<String> = idx.iter().map(ToString::to_string).collect();
            if mag.is_one() && !idx.is_empty() {
                write!(f, "{sign}e^{{{}}}", body.join(","))?;
            } else if idx.is_empty() {
                write!(f, "{sign}{mag}")?;
            } else {
                write!(f, "{sign}{mag}e^{{{}}}", body.join(","))?;
            }
        }
        Ok(())
    }
}

/// `ψ = Σ_{i<j} ⟨e_i, J e_j⟩ e^{ij}`, the Kähler form `ψ(X, Y) = ⟨X, JY⟩`.
pub fn kahler_form(j: &Matrix) -> Result<Multivector> {
    if !j.is_skew()? {
        return Err(Error::NotSkew);
    }
    let n = j.rows();
    let mut terms = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let c = &j[(a, b)];
            if !c.is_zero() {
                terms.push((Blade((1u128 << a) | (1u128 << b)), c.clone()));
            }
        }
    }
    Multivector::from_terms(n, terms)
}

/// A skew `k × k` matrix of 2-forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormMatrix {
    k: usize,
    n: usize,
    entries: Vec<Multivector>,
}

impl FormMatrix {
    /// Builds from the strictly upper entries `f(α, β)`, `α < β`; the lower
    /// triangle is filled by skew-symmetry.
    pub fn from_upper(k: usize, n: usize, mut f: impl FnMut(usize, usize) -> Result<Multivector>) -> Result<FormMatrix> {
        let mut entries = vec![Multivector::zero(n); k * k];
        for a in 0..k {
            for b in a + 1..k {
                let e = f(a, b)?;
                if e.n() != n {
                    return Err(Error::DimensionMismatch(format!("entry ({a},{b}) lives on R^{}", e.n())));
                }
                if !e.is_homogeneous_of(2) {
                    return Err(Error::NotHomogeneous);
                }
                entries[b * k + a] = e.neg();
                entries[a * k + b] = e;
            }
        }
        Ok(FormMatrix { k, n, entries })
    }

    /// Builds from all entries, checking skew-symmetry and grade.
    pub fn new(k: usize, n: usize, entries: Vec<Multivector>) -> Result<FormMatrix> {
        if entries.len() != k * k {
            return Err(Error::DimensionMismatch(format!("{} entries for a {k}x{k} form matrix", entries.len())));
        }
        for a in 0..k {
            for b in 0..k {
                let e = &entries[a * k + b];
                if e.n() != n {
                    return Err(Error::DimensionMismatch("entries on different spaces".into()));
                }
                if !e.is_homogeneous_of(2) {
                    return Err(Error::NotHomogeneous);
                }
                if *e != entries[b * k + a].neg() {
                    return Err(Error::NotSkew);
                }
            }
        }
        Ok(FormMatrix { k, n, entries })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> &Multivector {
        &self.entries[a * self.k + b]
    }

    /// Same matrix with every entry restricted to the indices of `keep`.
    pub fn restrict(&self, keep: Blade) -> FormMatrix {
        FormMatrix { k: self.k, n: self.n, entries: self.entries.iter().map(|e| e.restrict(keep)).collect() }
    }
}

/// Dense square matrix over the commutative algebra of even forms.
struct EvenMatrix {
    k: usize,
    entries: Vec<Multivector>,
}

impl EvenMatrix {
    fn mul(&self, other: &EvenMatrix, n: usize) -> Result<EvenMatrix> {
        let k = self.k;
        let entries = (0..k * k)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / k, idx % k);
                let mut acc = Multivector::zero(n);
                for l in 0..k {
                    let (a, b) = (&self.entries[i * k + l], &other.entries[l * k + j]);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.wedge(b)?)?;
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(EvenMatrix { k, entries })
    }

    fn trace(&self, n: usize) -> Result<Multivector> {
        (0..self.k).try_fold(Multivector::zero(n), |acc, i| acc.add(&self.entries[i * self.k + i]))
    }
}

/// Coefficients `τ₁, …, τ_k` of `det(tI − f) = Σ τ_j t^{k−j}` (with `τ₀ = 1`);
/// `τ_j` is a `2j`-form. Computed by Faddeev–LeVerrier over the even forms.
pub fn charpoly_coeffs(f: &FormMatrix) -> Result<Vec<Multivector>> {
    charpoly_coeffs_upto(f, f.k)
}

/// The first `jmax` characteristic coefficients.
pub fn charpoly_coeffs_upto(f: &FormMatrix, jmax: usize) -> Result<Vec<Multivector>> {
    let (k, n) = (f.k, f.n);
    let a = EvenMatrix { k, entries: f.entries.clone() };
    // M₁ = I, c₁ = −tr(A); M_j = A M_{j−1} + c_{j−1} I, c_j = −tr(A M_j)/j.
    let mut m = EvenMatrix {
        k,
        entries: (0..k * k)
            .map(|idx| if idx / k == idx % k { Multivector::scalar(n, Rational::one()) } else { Multivector::zero(n) })
            .collect(),
    };
    let mut out = Vec::with_capacity(jmax);
    for j in 1..=jmax.min(k) {
        if j > 1 {
            let c_prev = out.last().expect("j > 1");
            let mut next = a.mul(&m, n)?;
            for i in 0..k {
                next.entries[i * k + i] = next.entries[i * k + i].add(c_prev)?;
            }
            m = next;
        }
        let am = a.mul(&m, n)?;
        let c = am.trace(n)?.scale(&Rational::new(-1, j as i64));
        out.push(c);
    }
    Ok(out)
}

/// `Σ_{α₁<α₂<α₃<α₄} (ψ₁₂∧ψ₃₄ − ψ₁₃∧ψ₂₄ + ψ₁₄∧ψ₂₃)²`, the sum of squared
/// 4×4 sub-Pfaffians.
pub fn tau4_direct(f: &FormMatrix) -> Result<Multivector> {
    let k = f.k;
    if k < 4 {
        return Err(Error::InvalidArgument(format!("tau4_direct needs k >= 4, got {k}")));
    }
    let mut quads = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    quads.push([a, b, c, d]);
                }
            }
        }
    }
    let parts = quads
        .par_iter()
        .map(|&[a, b, c, d]| {
            let pf = f
                .get(a, b)
                .wedge(f.get(c, d))?
                .sub(&f.get(a, c).wedge(f.get(b, d))?)?
                .add(&f.get(a, d).wedge(f.get(b, c))?)?;
            pf.wedge(&pf)
        })
        .collect::<Result<Vec<_>>>()?;
    parts.iter().try_fold(Multivector::zero(f.n), |acc, p| acc.add(p))
}

/// Blade of the complementary indices, with the sign making
/// `e^B ∧ complement(e^B) = sign · e^{1…n}`.
pub fn complement(n: usize, blade: Blade) -> (Blade, bool) {
    let full = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let c = Blade(full & !blade.0);
    let neg = blade.wedge_sign(c).expect("disjoint");
    (c, neg)
}

/// Sum of the squares of a list of forms.
pub fn sum_of_squares<'a>(n: usize, forms: impl IntoIterator<Item = &'a Multivector>) -> Result<Multivector> {
    forms.into_iter().try_fold(Multivector::zero(n), |acc, f| acc.add(&f.wedge(f)?))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonTerm {
    pub blade: Vec<usize>,
    pub coeff: Rational,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct JsonForm {
    pub n: usize,
    pub grade: Option<usize>,
    pub terms: Vec<JsonTerm>,
}

impl Multivector {
    /// Export shape: blades sorted lexicographically, coefficients as strings.
    pub fn to_json(&self) -> JsonForm {
        JsonForm {
            n: self.n,
            grade: self.grade(),
            terms: self.lex_terms().into_iter().map(|(blade, coeff)| JsonTerm { blade, coeff }).collect(),
        }
    }

    pub fn from_json(j: &JsonForm) -> Result<Multivector> {
        let terms = j
            .terms
            .iter()
            .map(|t| Ok((Blade::from_indices(&t.blade)?, t.coeff.clone())))
            .collect::<Result<Vec<_>>>()?;
        Multivector::from_terms(j.n, terms)
    }

    /// `blade;coeff` rows with dash-joined indices, header first.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("blade;coeff\n");
        for (idx, c) in self.lex_terms() {
            let b: Vec<String> = idx.iter().map(ToString::to_string).collect();
            s.push_str(&b.join("-"));
            s.push(';');
            s.push_str(&c.to_string());
            s.push('\n');
        }
        s
    }
}
