//! The quotient ring Q[z]/(z^N - 1) and rationality extraction.
//!
//! Character values live here: z stands for a fixed primitive N-th root
//! of unity, but arithmetic is done in the quotient ring so that sums
//! and products never need field inverses. Whether a value is actually
//! a rational number is decided on demand by reducing modulo the N-th
//! cyclotomic polynomial.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::rat::Rat;

/// A dense univariate polynomial over the rationals; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = UniPoly { coeffs };
        p.trim();
        p
    }

    /// x^n - 1.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); n + 1];
        coeffs[0] = -Rat::one();
        coeffs[n] = Rat::one();
        UniPoly { coeffs }
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a.clone() * b.clone();
            }
        }
        UniPoly::from_coeffs(out)
    }

    /// Euclidean division: returns (quotient, remainder).
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![Rat::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len();
            let c = rem[k - 1].clone() / lead.clone();
            quo[k - 1 - dd] = c.clone();
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k - 1 - dd + j] -= c.clone() * b.clone();
            }
            rem.pop();
            while matches!(rem.last(), Some(t) if t.is_zero()) {
                rem.pop();
            }
        }
        (UniPoly::from_coeffs(quo), UniPoly::from_coeffs(rem))
    }
}

/// The N-th cyclotomic polynomial, computed by dividing x^N - 1 by the
/// cyclotomic polynomials of all proper divisors of N.
pub fn cyclotomic_polynomial(n: usize) -> UniPoly {
    assert!(n >= 1, "cyclotomic index must be positive");
    // Build the table for all divisors of n, smallest first.
    let divisors: Vec<usize> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut table: Vec<(usize, UniPoly)> = Vec::with_capacity(divisors.len());
    for &d in &divisors {
        let mut denom = UniPoly::from_coeffs(vec![Rat::one()]);
        for (e, phi) in &table {
            if d % e == 0 {
                denom = denom.mul(phi);
            }
        }
        let (quo, rem) = UniPoly::x_pow_minus_one(d).div_rem(&denom);
        debug_assert!(rem.is_zero());
        table.push((d, quo));
    }
    table.pop().expect("n divides n").1
}

/// An element of Q[z]/(z^N - 1), stored as N coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CyclotomicValue {
    modulus: usize,
    coeffs: Vec<Rat>,
}

impl CyclotomicValue {
    pub fn zero(modulus: usize) -> Self {
        assert!(modulus >= 1);
        CyclotomicValue {
            modulus,
            coeffs: vec![Rat::zero(); modulus],
        }
    }

    pub fn from_rat(modulus: usize, value: Rat) -> Self {
        let mut v = CyclotomicValue::zero(modulus);
        v.coeffs[0] = value;
        v
    }

    /// z^k in the ring with the given modulus.
    pub fn root_power(modulus: usize, k: usize) -> Self {
        let mut v = CyclotomicValue::zero(modulus);
        v.coeffs[k % modulus] = Rat::one();
        v
    }

    /// Builds a value from an explicit coefficient list; the list length
    /// is the modulus.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidModel {
                detail: String::from("cyclotomic coefficient list must be nonempty"),
            });
        }
        Ok(CyclotomicValue {
            modulus: coeffs.len(),
            coeffs,
        })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Re-embeds into the ring of modulus `to`; requires N | to, since
    /// a primitive N-th root is the (to/N)-th power of a primitive
    /// to-th root.
    pub fn embed(&self, to: usize) -> Result<Self> {
        if to == self.modulus {
            return Ok(self.clone());
        }
        if to == 0 || !to.is_multiple_of(self.modulus) {
            return Err(Error::InvalidModel {
                detail: format!(
                    "cyclotomic modulus {} does not divide target modulus {}",
                    self.modulus, to
                ),
            });
        }
        let step = to / self.modulus;
        let mut out = CyclotomicValue::zero(to);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                out.coeffs[i * step] = c.clone();
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &CyclotomicValue) -> CyclotomicValue {
        assert_eq!(self.modulus, other.modulus, "cyclotomic modulus mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        CyclotomicValue {
            modulus: self.modulus,
            coeffs,
        }
    }

    /// Cyclic convolution: multiplication modulo z^N - 1.
    pub fn mul(&self, other: &CyclotomicValue) -> CyclotomicValue {
        assert_eq!(self.modulus, other.modulus, "cyclotomic modulus mismatch");
        let n = self.modulus;
        let mut out = CyclotomicValue::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[(i + j) % n] += a.clone() * b.clone();
            }
        }
        out
    }

    pub fn scale(&self, factor: &Rat) -> CyclotomicValue {
        CyclotomicValue {
            modulus: self.modulus,
            coeffs: self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect(),
        }
    }

    /// Extracts the rational constant this value represents, reducing
    /// modulo the N-th cyclotomic polynomial. Fails with `NotRational`
    /// if the residue is non-constant.
    pub fn rationalize(&self) -> Result<Rat> {
        let as_poly = UniPoly::from_coeffs(self.coeffs.clone());
        let phi = cyclotomic_polynomial(self.modulus);
        let (_, residue) = as_poly.div_rem(&phi);
        match residue.degree() {
            None => Ok(Rat::zero()),
            Some(0) => Ok(residue.coeff(0)),
            Some(_) => Err(Error::NotRational {
                detail: format!("{self} has a non-constant residue"),
            }),
        }
    }
}

impl fmt::Display for CyclotomicValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*z^{i}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " (mod z^{} - 1)", self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi_as_vec(n: usize) -> Vec<Rat> {
        cyclotomic_polynomial(n).coeffs().to_vec()
    }

    #[test]
    fn phi_base_cases() {
        // x - 1 and x + 1
        assert_eq!(phi_as_vec(1), vec![Rat::from_int(-1), Rat::one()]);
        assert_eq!(phi_as_vec(2), vec![Rat::one(), Rat::one()]);
    }

    #[test]
    fn phi_six_by_independent_division() {
        // Oracle: divide x^6 - 1 by the hand-written product
        // (x-1)(x+1)(x^2+x+1) and compare against the recursive builder.
        let phi1 = UniPoly::from_coeffs(vec![Rat::from_int(-1), Rat::one()]);
        let phi2 = UniPoly::from_coeffs(vec![Rat::one(), Rat::one()]);
        let phi3 = UniPoly::from_coeffs(vec![Rat::one(), Rat::one(), Rat::one()]);
        let denom = phi1.mul(&phi2).mul(&phi3);
        let (quo, rem) = UniPoly::x_pow_minus_one(6).div_rem(&denom);
        assert!(rem.is_zero());
        // x^2 - x + 1
        let expected = UniPoly::from_coeffs(vec![Rat::one(), Rat::from_int(-1), Rat::one()]);
        assert_eq!(quo, expected);
        assert_eq!(cyclotomic_polynomial(6), expected);
    }

    #[test]
    fn rationalize_examples() {
        // z + z^3 at N=4: z^2 = -1 mod phi_4, so the value is 0.
        let v = CyclotomicValue::root_power(4, 1).add(&CyclotomicValue::root_power(4, 3));
        assert_eq!(v.rationalize().unwrap(), Rat::zero());

        // constant 3 at N=2
        let v = CyclotomicValue::from_rat(2, Rat::from_int(3));
        assert_eq!(v.rationalize().unwrap(), Rat::from_int(3));

        // z + z^2 at N=3 reduces to -1 mod phi_3
        let v = CyclotomicValue::root_power(3, 1).add(&CyclotomicValue::root_power(3, 2));
        assert_eq!(v.rationalize().unwrap(), Rat::from_int(-1));

        // z alone at N=3 is irrational
        let v = CyclotomicValue::root_power(3, 1);
        assert!(matches!(v.rationalize(), Err(Error::NotRational { .. })));
    }

    #[test]
    fn embedding_preserves_value() {
        // omega = z at N=3 embeds to z^2 at N=6; both rationalize the
        // same sums.
        let omega = CyclotomicValue::root_power(3, 1);
        let omega6 = omega.embed(6).unwrap();
        assert_eq!(omega6.coeffs()[2], Rat::one());
        let sum3 = omega.add(&CyclotomicValue::root_power(3, 2));
        let sum6 = omega6.add(&CyclotomicValue::root_power(3, 2).embed(6).unwrap());
        assert_eq!(sum3.rationalize().unwrap(), sum6.rationalize().unwrap());
        assert!(omega.embed(4).is_err());
    }

    #[test]
    fn mul_wraps_cyclically() {
        // z^2 * z^2 = z^4 = z at N=3
        let z2 = CyclotomicValue::root_power(3, 2);
        assert_eq!(z2.mul(&z2), CyclotomicValue::root_power(3, 1));
    }
}
