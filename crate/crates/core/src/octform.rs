//! Exterior forms with octonion coefficients.
//!
//! The wedge multiplies coefficients in the order of the factors and never
//! reassociates; conjugation acts coefficient-wise, which gives
//! `conj(α ∧ β) = (−1)^{kl} conj(β) ∧ conj(α)`.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::cayley_dickson::CdElement;
use crate::error::{Error, Result};
use crate::exterior::{Blade, Multivector};
use crate::rational::Rational;

const LEVEL: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OctForm {
    n: usize,
    terms: Vec<(Blade, CdElement)>,
}

impl OctForm {
    pub fn zero(n: usize) -> OctForm {
        OctForm { n, terms: Vec::new() }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Blade, CdElement)>) -> Result<OctForm> {
        let mut acc: HashMap<Blade, CdElement> = HashMap::new();
        for (b, c) in terms {
            if c.level() != LEVEL {
                return Err(Error::LevelMismatch(c.level(), LEVEL));
            }
            if b.max_index() > n {
                return Err(Error::DimensionMismatch(format!("{b} does not fit in dimension {n}")));
            }
            match acc.get_mut(&b) {
                Some(e) => *e = e.add(&c)?,
                None => {
                    acc.insert(b, c);
                }
            }
        }
        Ok(OctForm::from_map(n, acc))
    }

    fn from_map(n: usize, acc: HashMap<Blade, CdElement>) -> OctForm {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|(b, _)| *b);
        OctForm { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Blade, CdElement)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn grade(&self) -> Option<usize> {
        let g = self.terms.first()?.0.grade();
        self.terms.iter().all(|(b, _)| b.grade() == g).then_some(g)
    }

    pub fn coeff(&self, blade: Blade) -> CdElement {
        match self.terms.binary_search_by_key(&blade, |(b, _)| *b) {
            Ok(k) => self.terms[k].1.clone(),
            Err(_) => CdElement::zero(LEVEL),
        }
    }

    pub fn conjugate(&self) -> OctForm {
        OctForm { n: self.n, terms: self.terms.iter().map(|(b, c)| (*b, c.conjugate())).collect() }
    }

    pub fn scale(&self, s: &Rational) -> OctForm {
        let acc = self.terms.iter().map(|(b, c)| (*b, c.scale(s))).collect();
        OctForm::from_map(self.n, acc)
    }

    fn combine(&self, other: &OctForm, negate: bool) -> Result<OctForm> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("forms on R^{} and R^{}", self.n, other.n)));
        }
        let mut acc: HashMap<Blade, CdElement> = self.terms.iter().cloned().collect();
        for (b, c) in &other.terms {
            let c = if negate { c.neg() } else { c.clone() };
            match acc.get_mut(b) {
                Some(e) => *e = e.add(&c)?,
                None => {
                    acc.insert(*b, c);
                }
            }
        }
        Ok(OctForm::from_map(self.n, acc))
    }

    pub fn add(&self, other: &OctForm) -> Result<OctForm> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &OctForm) -> Result<OctForm> {
        self.combine(other, true)
    }

    /// `Σ ± (a_A · b_B) e^{A∪B}`, left coefficient first.
    pub fn wedge(&self, other: &OctForm) -> Result<OctForm> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!("forms on R^{} and R^{}", self.n, other.n)));
        }
        let chunk = (self.terms.len() / rayon::current_num_threads().max(1)).max(16);
        let parts: Vec<HashMap<Blade, CdElement>> = self
            .terms
            .par_chunks(chunk)
            .map(|part| {
                let mut acc: HashMap<Blade, CdElement> = HashMap::new();
                for (ba, ca) in part {
                    for (bb, cb) in &other.terms {
                        let Some(neg) = ba.wedge_sign(*bb) else { continue };
                        let p = ca.mul(cb)?;
                        let p = if neg { p.neg() } else { p };
                        let key = Blade(ba.0 | bb.0);
                        match acc.get_mut(&key) {
                            Some(e) => *e = e.add(&p)?,
                            None => {
                                acc.insert(key, p);
                            }
                        }
                    }
                }
                Ok(acc)
            })
            .collect::<Result<_>>()?;
        let mut acc: HashMap<Blade, CdElement> = HashMap::new();
        for part in parts {
            for (b, c) in part {
                match acc.get_mut(&b) {
                    Some(e) => *e = e.add(&c)?,
                    None => {
                        acc.insert(b, c);
                    }
                }
            }
        }
        Ok(OctForm::from_map(self.n, acc))
    }

    /// The real-valued form of real parts.
    pub fn real_part(&self) -> Multivector {
        Multivector::from_terms(self.n, self.terms.iter().map(|(b, c)| (*b, c.real_part())))
            .expect("same dimension")
    }

    /// The real form of the `a`-th octonion coordinate.
    pub fn component(&self, a: usize) -> Multivector {
        Multivector::from_terms(self.n, self.terms.iter().map(|(b, c)| (*b, c.coeffs()[a].clone())))
            .expect("same dimension")
    }

    pub fn imaginary_is_zero(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.coeffs()[1..].iter().all(num_traits::Zero::is_zero))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use proptest::prelude::*;

    fn form(n: usize, grade: usize) -> impl Strategy<Value = OctForm> {
        let term = (
            proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), grade),
            proptest::collection::vec(-2i64..=2, 8),
        );
        proptest::collection::vec(term, 0..4).prop_map(move |ts| {
            OctForm::from_terms(
                n,
                ts.into_iter()
                    .map(|(idx, c)| (Blade::from_indices(&idx).unwrap(), CdElement::from_i64(3, &c).unwrap())),
            )
            .unwrap()
        })
    }

    #[test]
    fn coefficient_order_is_kept() {
        let i = OctForm::from_terms(4, [(Blade(1), CdElement::basis(3, 1))]).unwrap();
        let j = OctForm::from_terms(4, [(Blade(2), CdElement::basis(3, 2))]).unwrap();
        // (i e¹) ∧ (j e²) = ij e¹² = k e¹²; the reverse is (ji)(−e¹²) = k e¹².
        assert_eq!(i.wedge(&j).unwrap().coeff(Blade(3)), CdElement::basis(3, 3));
        assert_eq!(j.wedge(&i).unwrap().coeff(Blade(3)), CdElement::basis(3, 3));
        let real = i.wedge(&j).unwrap().scale(&q(0));
        assert!(real.is_empty());
    }

    proptest! {
        #[test]
        fn conjugation_is_involution(a in form(6, 2)) {
            prop_assert_eq!(a.conjugate().conjugate(), a);
        }

        #[test]
        fn graded_conjugation_rule(
            (a, b, k, l) in (1usize..4, 1usize..4).prop_flat_map(|(k, l)| (form(7, k), form(7, l), Just(k), Just(l)))
        ) {
            let lhs = a.wedge(&b).unwrap().conjugate();
            let rhs = b.conjugate().wedge(&a.conjugate()).unwrap();
            let rhs = if k * l % 2 == 1 { rhs.scale(&q(-1)) } else { rhs };
            prop_assert_eq!(lhs, rhs);
        }
    }
}
