//! Exact rational numbers.
//!
//! `Rat` wraps an arbitrary-precision rational kept in canonical reduced form
//! (denominator > 0, gcd(|num|, den) = 1). Every radius, parameter, and
//! coordinate in the crate is a `Rat`; no floating point enters any verdict.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// Panics if `den == 0`. The result is reduced and sign-normalized.
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(r: BigRational) -> Rat {
        Rat(r)
    }

    /// Panics if `den` is zero.
    pub fn from_frac(num: BigInt, den: BigInt) -> Rat {
        Rat(BigRational::new(num, den))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn min(self, other: Rat) -> Rat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rat) -> Rat {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Integer power; negative exponents invert (panics on zero base).
    pub fn pow(&self, e: i64) -> Rat {
        let e32 = i32::try_from(e).expect("exponent out of range");
        Rat((&self.0).pow(e32))
    }

    /// 2^(-k) for k >= 0, the Baire-metric radius ladder.
    pub fn pow2_neg(k: u32) -> Rat {
        Rat(BigRational::new(BigInt::one(), BigInt::from(2u32).pow(k)))
    }

    /// Exact square root if `self` is a perfect square of a rational.
    pub fn sqrt_exact(&self) -> Option<Rat> {
        if self.is_negative() {
            return None;
        }
        let ns = self.0.numer().sqrt();
        let ds = self.0.denom().sqrt();
        if &(&ns * &ns) == self.0.numer() && &(&ds * &ds) == self.0.denom() {
            Some(Rat(BigRational::new(ns, ds)))
        } else {
            None
        }
    }

    pub fn square(&self) -> Rat {
        self * self
    }

    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Lossy; used only for diagnostics and float cross-checks, never verdicts.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn cmp_rat(&self, other: &Rat) -> Ordering {
        self.0.cmp(&other.0)
    }

    /// True if the denominator is a power of two (1 counts).
    pub fn is_dyadic(&self) -> bool {
        let mut d = self.0.denom().clone();
        let two = BigInt::from(2);
        while d.is_even() {
            d /= &two;
        }
        d.is_one()
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatParseError {
    pub input: String,
}

impl fmt::Display for RatParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?} (expected \"p\" or \"p/q\")", self.input)
    }
}

impl std::error::Error for RatParseError {}

impl FromStr for Rat {
    type Err = RatParseError;

    fn from_str(s: &str) -> Result<Rat, RatParseError> {
        let bad = || RatParseError { input: s.to_string() };
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            None => (t, "1"),
            Some((n, d)) => (n, d),
        };
        let n: BigInt = num.trim().parse().map_err(|_| bad())?;
        let d: BigInt = den.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rat(BigRational::new(n, d)))
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
impl_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl std::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

impl<'a> std::iter::Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |a, b| a + b)
    }
}

/// Shorthand used throughout the crate and its tests.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = rat(4, -6);
        assert_eq!(r, rat(-2, 3));
        assert_eq!(r.to_string(), "-2/3");
        assert_eq!(rat(7, 1).to_string(), "7");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-5", "3/4", "-22/7", "1000000000000000001/3"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("1/0".parse::<Rat>().is_err());
        assert!("a/b".parse::<Rat>().is_err());
        assert_eq!("6/8".parse::<Rat>().unwrap().to_string(), "3/4");
    }

    #[test]
    fn negative_pow() {
        let ab = rat(1, 8);
        assert_eq!(ab.pow(-1), rat(8, 1));
        assert_eq!(ab.pow(0), Rat::one());
        assert_eq!(ab.pow(2), rat(1, 64));
    }

    #[test]
    fn sqrt_exact_cases() {
        assert_eq!(rat(9, 16).sqrt_exact(), Some(rat(3, 4)));
        assert_eq!(rat(2, 1).sqrt_exact(), None);
        assert_eq!(rat(0, 1).sqrt_exact(), Some(Rat::zero()));
        assert_eq!(rat(-4, 1).sqrt_exact(), None);
    }

    #[test]
    fn dyadic_test() {
        assert!(rat(3, 8).is_dyadic());
        assert!(rat(5, 1).is_dyadic());
        assert!(!rat(1, 3).is_dyadic());
        assert!(!rat(1, 6).is_dyadic());
    }

    #[test]
    fn pow2_ladder() {
        assert_eq!(Rat::pow2_neg(0), Rat::one());
        assert_eq!(Rat::pow2_neg(3), rat(1, 8));
    }
}
