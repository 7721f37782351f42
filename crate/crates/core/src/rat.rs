//! Arbitrary-precision rational numbers in canonical form.
//!
//! Every value is kept reduced with a positive denominator. The string
//! form is `p/q` (or just `p` when the denominator is 1), sign on the
//! numerator.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact rational number, reduced, with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`, reduced. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    /// The value as a nonnegative machine integer, if it is one.
    pub fn to_usize(&self) -> Option<usize> {
        if !self.0.is_integer() || self.0.is_negative() {
            return None;
        }
        let digits = self.0.numer().to_u64_digits().1;
        match digits.len() {
            0 => Some(0),
            1 => usize::try_from(digits[0]).ok(),
            _ => None,
        }
    }

    /// The value as a signed machine integer, if it is one.
    pub fn to_i64(&self) -> Option<i64> {
        if !self.0.is_integer() {
            return None;
        }
        let (sign, digits) = self.0.numer().to_u64_digits();
        let mag = match digits.len() {
            0 => 0u64,
            1 => digits[0],
            _ => return None,
        };
        match sign {
            num_bigint::Sign::Minus => {
                if mag <= (i64::MAX as u64) + 1 {
                    Some((-(mag as i128)) as i64)
                } else {
                    None
                }
            }
            _ => i64::try_from(mag).ok(),
        }
    }

    /// 1/n! as an exact rational.
    pub fn recip_factorial(n: usize) -> Self {
        let mut f = BigInt::one();
        for k in 2..=n {
            f *= BigInt::from(k);
        }
        Rat(BigRational::new(BigInt::one(), f))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
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

/// Error parsing a `p/q` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRatError(pub String);

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal: {}", self.0)
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseRatError(s.to_string());
        let parts: Vec<&str> = s.split('/').collect();
        match parts.as_slice() {
            [n] => {
                let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                Ok(Rat(BigRational::from_integer(num)))
            }
            [n, d] => {
                let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let den = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(Rat(BigRational::new(num, den)))
            }
            _ => Err(bad()),
        }
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        Rat(self.0 + rhs.0)
    }
}

impl Sub for Rat {
    type Output = Rat;
    fn sub(self, rhs: Rat) -> Rat {
        Rat(self.0 - rhs.0)
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        Rat(self.0 * rhs.0)
    }
}

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl MulAssign for Rat {
    fn mul_assign(&mut self, rhs: Rat) {
        self.0 *= rhs.0;
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        assert_eq!(Rat::new(2, -4), Rat::new(-1, 2));
        assert_eq!(Rat::new(-6, -9), Rat::new(2, 3));
        assert_eq!(Rat::new(0, 5), Rat::zero());
    }

    #[test]
    fn display_and_parse_round_trip() {
        for s in ["1/24", "-1/24", "3", "0", "-7/3"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert_eq!("2/-4".parse::<Rat>().unwrap().to_string(), "-1/2");
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
        assert!("1/2/3".parse::<Rat>().is_err());
    }

    #[test]
    fn integer_extraction() {
        assert_eq!(Rat::new(6, 3).to_usize(), Some(2));
        assert_eq!(Rat::new(1, 2).to_usize(), None);
        assert_eq!(Rat::from_int(-1).to_usize(), None);
        assert_eq!(Rat::from_int(-5).to_i64(), Some(-5));
    }

    #[test]
    fn recip_factorial_values() {
        assert_eq!(Rat::recip_factorial(0), Rat::one());
        assert_eq!(Rat::recip_factorial(1), Rat::one());
        assert_eq!(Rat::recip_factorial(4), Rat::new(1, 24));
    }
}
