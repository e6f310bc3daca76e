//! Exact rational scalars.
//!
//! Values that fit in a pair of machine words stay inline; anything larger is
//! promoted to an arbitrary-precision fraction and demoted again as soon as it
//! fits. The representation is canonical, so structural equality and hashing
//! coincide with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Repr {
    Small(Ratio<i64>),
    Big(Box<BigRational>),
}

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, Debug)]
pub struct Rational(Repr);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Rational {
        assert!(denom != 0, "zero denominator");
        if numer == i64::MIN || denom == i64::MIN {
            return Rational::from_big(BigRational::new(numer.into(), denom.into()));
        }
        Rational(Repr::Small(Ratio::new(numer, denom)))
    }

    fn from_small(r: Ratio<i64>) -> Rational {
        if *r.numer() == i64::MIN || *r.denom() == i64::MIN {
            Rational::from_big(BigRational::new_raw((*r.numer()).into(), (*r.denom()).into()))
        } else {
            Rational(Repr::Small(r))
        }
    }

    pub fn from_integer(n: i64) -> Rational {
        Rational::new(n, 1)
    }

    pub fn from_big(r: BigRational) -> Rational {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => {
                Rational(Repr::Small(Ratio::new_raw(n, d)))
            }
            _ => Rational(Repr::Big(Box::new(r))),
        }
    }

    pub fn from_bigint(n: BigInt) -> Rational {
        Rational::from_big(BigRational::from_integer(n))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => BigRational::new_raw((*r.numer()).into(), (*r.denom()).into()),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => (*r.numer()).into(),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => (*r.denom()).into(),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => *r.denom() == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// The value as an `i64` if it is an integer in range.
    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(r) if *r.denom() == 1 => Some(*r.numer()),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(r) => *r.numer() as f64 / *r.denom() as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(r) => r.numer().signum() as i32,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn abs(&self) -> Rational {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Rational {
        Rational::one() / self
    }

    pub fn pow(&self, exp: u32) -> Rational {
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact square root when the value is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rational> {
        if self.signum() < 0 {
            return None;
        }
        let n = self.numer();
        let d = self.denom();
        let sn = n.sqrt();
        let sd = d.sqrt();
        if &sn * &sn == n && &sd * &sd == d {
            Some(Rational::from_big(BigRational::new(sn, sd)))
        } else {
            None
        }
    }

    fn big_op(a: &Rational, b: &Rational, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Rational {
        Rational::from_big(f(&a.to_big(), &b.to_big()))
    }
}

/// Greatest common divisor of two integers given as rationals; both must be integral.
pub fn gcd_integers(a: &Rational, b: &Rational) -> Rational {
    debug_assert!(a.is_integer() && b.is_integer());
    match (&a.0, &b.0) {
        (Repr::Small(x), Repr::Small(y)) => {
            let g = (*x.numer() as i128).gcd(&(*y.numer() as i128));
            match i64::try_from(g) {
                Ok(g) => Rational::from_integer(g),
                Err(_) => Rational::from_bigint(g.into()),
            }
        }
        _ => Rational::from_bigint(a.numer().gcd(&b.numer())),
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(Ratio::new_raw(0, 1)))
    }
    fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => *r.numer() == 0,
            Repr::Big(b) => b.is_zero(),
        }
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small(Ratio::new_raw(1, 1)))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<i32> for Rational {
    fn from(n: i32) -> Self {
        Rational::from_integer(n as i64)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_bigint(n)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.numer() == b.numer() && a.denom() == b.denom(),
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(r) => {
                0u8.hash(state);
                r.numer().hash(state);
                r.denom().hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => {
                let lhs = *a.numer() as i128 * *b.denom() as i128;
                let rhs = *b.numer() as i128 * *a.denom() as i128;
                lhs.cmp(&rhs)
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if *a.denom() == 1 && *b.denom() == 1 {
                if let Some(v) = i64::checked_add(*a.numer(), *b.numer()) {
                    if v != i64::MIN {
                        return Rational(Repr::Small(Ratio::new_raw(v, 1)));
                    }
                }
            } else if let Some(r) = a.checked_add(b) {
                return Rational::from_small(r);
            }
        }
        Rational::big_op(self, rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if *a.denom() == 1 && *b.denom() == 1 {
                if let Some(v) = i64::checked_sub(*a.numer(), *b.numer()) {
                    if v != i64::MIN {
                        return Rational(Repr::Small(Ratio::new_raw(v, 1)));
                    }
                }
            } else if let Some(r) = a.checked_sub(b) {
                return Rational::from_small(r);
            }
        }
        Rational::big_op(self, rhs, |a, b| a - b)
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            // Integer fast path: the wedge and matrix hot loops are integral.
            if *a.denom() == 1 && *b.denom() == 1 {
                if let Some(p) = i64::checked_mul(*a.numer(), *b.numer()) {
                    if p != i64::MIN {
                        return Rational(Repr::Small(Ratio::new_raw(p, 1)));
                    }
                }
            } else if let Some(r) = a.checked_mul(b) {
                return Rational::from_small(r);
            }
        }
        Rational::big_op(self, rhs, |a, b| a * b)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            if let Some(r) = a.checked_div(b) {
                return Rational::from_small(r);
            }
        }
        Rational::big_op(self, rhs, |a, b| a / b)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            // i64::MIN is never stored inline, so negation cannot overflow.
            Repr::Small(r) => Rational(Repr::Small(Ratio::new_raw(-*r.numer(), *r.denom()))),
            Repr::Big(b) => Rational::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = &*self + rhs;
    }
}

impl AddAssign<Rational> for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        *self = &*self - rhs;
    }
}

impl SubAssign<Rational> for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        *self = &*self - &rhs;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        *self = &*self * rhs;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for Rational {
    /// `p` for integers, `p/q` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Repr::Small(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Rational> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("invalid rational `{s}`")))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in `{s}`")));
                }
                Ok(Rational::from_big(BigRational::new(parse(n)?, d)))
            }
            None => Ok(Rational::from_bigint(parse(s)?)),
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shorthand for an integer rational.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Shorthand for `numer/denom`.
pub fn qf(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = qf(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(r.denom(), BigInt::from(2));
        assert_eq!(qf(0, -5), Rational::zero());
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = q(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq.0, Repr::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(_)));
        let sum = &q(i64::MAX) + &q(1);
        assert_eq!(&sum - &q(1), q(i64::MAX));
    }

    #[test]
    fn i64_min_never_inline() {
        let m = Rational::new(i64::MIN, 1);
        assert!(matches!(m.0, Repr::Big(_)));
        assert_eq!((-m).to_string(), "9223372036854775808");
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("7/21".parse::<Rational>().unwrap(), qf(1, 3));
        assert_eq!("-12".parse::<Rational>().unwrap(), q(-12));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        let huge: Rational = "123456789012345678901234567890/7".parse().unwrap();
        assert_eq!(huge.to_string().parse::<Rational>().unwrap(), huge);
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(qf(9, 4).sqrt_exact(), Some(qf(3, 2)));
        assert_eq!(q(2).sqrt_exact(), None);
    }

    fn arb() -> impl Strategy<Value = Rational> {
        (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rational::new(n, d))
    }

    proptest! {
        #[test]
        fn agrees_with_bigrational(a in arb(), b in arb()) {
            let (ba, bb) = (a.to_big(), b.to_big());
            prop_assert_eq!((&a + &b).to_big(), &ba + &bb);
            prop_assert_eq!((&a - &b).to_big(), &ba - &bb);
            prop_assert_eq!((&a * &b).to_big(), &ba * &bb);
            if !b.is_zero() {
                prop_assert_eq!((&a / &b).to_big(), &ba / &bb);
            }
            prop_assert_eq!(a.cmp(&b), ba.cmp(&bb));
        }
    }
}
