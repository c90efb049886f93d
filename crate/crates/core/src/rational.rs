//! Exact points of the unit interval.

use alloc::string::String;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// An exact point `x` of `[0,1)` as a reduced fraction `num/den`.
///
/// Invariants: `0 <= num < den`, `gcd(num, den) = 1`, `den >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitRational {
    num: BigInt,
    den: BigInt,
}

impl UnitRational {
    /// Build from a numerator/denominator pair, reducing to lowest terms.
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den < BigInt::one() || num.is_negative() || num >= den {
            return Err(Error::InvalidRational);
        }
        let g = num.gcd(&den);
        Ok(UnitRational {
            num: &num / &g,
            den: &den / &g,
        })
    }

    /// The point 0 = 0/1.
    pub fn zero() -> Self {
        UnitRational {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    /// Fractional part of an arbitrary rational.
    pub fn from_rational(r: &BigRational) -> Self {
        let f = frac(r);
        UnitRational {
            num: f.numer().clone(),
            den: f.denom().clone(),
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn as_rational(&self) -> BigRational {
        BigRational::new(self.num.clone(), self.den.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.as_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with 17 significant digits.
    pub fn to_decimal_string(&self) -> String {
        alloc::format!("{:.17}", self.to_f64())
    }
}

impl fmt::Display for UnitRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Fractional part of a rational, always in `[0,1)`.
pub fn frac(r: &BigRational) -> BigRational {
    let f = r - r.floor();
    debug_assert!(!f.is_negative() && f < BigRational::one());
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn reduces_on_construction() {
        let r = UnitRational::new(big(4), big(6)).unwrap();
        assert_eq!(r.numer(), &big(2));
        assert_eq!(r.denom(), &big(3));
    }

    #[test]
    fn rejects_out_of_range() {
        assert_eq!(
            UnitRational::new(big(3), big(3)),
            Err(Error::InvalidRational)
        );
        assert_eq!(
            UnitRational::new(big(-1), big(3)),
            Err(Error::InvalidRational)
        );
        assert_eq!(
            UnitRational::new(big(0), big(0)),
            Err(Error::InvalidRational)
        );
    }

    #[test]
    fn frac_of_negative() {
        let r = BigRational::new(big(-8), big(3));
        assert_eq!(frac(&r), BigRational::new(big(1), big(3)));
    }
}
