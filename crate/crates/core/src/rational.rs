use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Exact rational in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        ExactRational(BigRational::new(numer, denom))
    }

    pub fn from_biguints(numer: &BigUint, denom: &BigUint) -> Self {
        Self::new(BigInt::from(numer.clone()), BigInt::from(denom.clone()))
    }

    pub fn from_integer<T: Into<BigInt>>(n: T) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(numer: i64, denom: i64) -> Self {
        Self::new(numer.into(), denom.into())
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    /// `2^exp` for any signed exponent.
    pub fn pow2(exp: i64) -> Self {
        let p = BigInt::one() << exp.unsigned_abs();
        if exp >= 0 {
            ExactRational(BigRational::from_integer(p))
        } else {
            ExactRational(BigRational::new(BigInt::one(), p))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn recip(&self) -> Self {
        ExactRational(self.0.recip())
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    /// Nearest `f64`, for display only.
    pub fn approx(&self) -> f64 {
        let (n, d) = (self.numer(), self.denom());
        match (n.to_f64(), d.to_f64()) {
            (Some(a), Some(b)) if a.is_finite() && b.is_finite() && b != 0.0 => a / b,
            _ => {
                // scale both down so the quotient keeps its leading bits
                let shift = n.bits().max(d.bits()).saturating_sub(1000);
                let a = (n >> shift).to_f64().unwrap_or(f64::NAN);
                let b = (d >> shift).to_f64().unwrap_or(f64::NAN);
                a / b
            }
        }
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl std::iter::Product for ExactRational {
    fn product<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

/// `{"num": "...", "den": "...", "approx": f64}`; only the strings are authoritative.
impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ExactRational", 3)?;
        s.serialize_field("num", &self.numer().to_string())?;
        s.serialize_field("den", &self.denom().to_string())?;
        s.serialize_field("approx", &self.approx())?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = ExactRational::new(BigInt::from(16842752), BigInt::from(21299200));
        assert_eq!(r, ExactRational::ratio(257, 325));
        let n = ExactRational::ratio(3, -6);
        assert_eq!(n.to_string(), "-1/2");
        assert!(n.denom().is_positive());
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(ExactRational::pow2(-2), ExactRational::ratio(1, 4));
        assert_eq!(ExactRational::pow2(3), ExactRational::from_integer(8));
    }

    #[test]
    fn approx_handles_huge_operands() {
        let tiny = ExactRational::pow2(-3000) + ExactRational::one();
        assert!((tiny.approx() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn json_shape() {
        let v = serde_json::to_value(ExactRational::ratio(4, 5)).unwrap();
        assert_eq!(v["num"], "4");
        assert_eq!(v["den"], "5");
        assert!((v["approx"].as_f64().unwrap() - 0.8).abs() < 1e-15);
    }
}
