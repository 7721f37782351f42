//! The square-zero extension by the descendant class.
//!
//! Values have the form a + pb where p is the pullback of the psi class
//! at the marked point and p^2 = 0: the underlying moduli curve space
//! is one-dimensional, so the class squares to zero rationally. The
//! integral of the psi class over that space is the constant 1/24.

use core::fmt;

use crate::poly::{TorusRationalFn, VarSet};
use crate::rat::Rat;

/// The integral of the psi class over the moduli space of one-pointed
/// genus-one stable curves: exactly 1/24.
pub fn psi_integral() -> Rat {
    Rat::new(1, 24)
}

/// a + pb with p^2 = 0.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PsiClass {
    a: TorusRationalFn,
    b: TorusRationalFn,
}

impl PsiClass {
    pub fn new(a: TorusRationalFn, b: TorusRationalFn) -> Self {
        assert_eq!(a.vars(), b.vars(), "variable layout mismatch");
        PsiClass { a, b }
    }

    pub fn from_ratfn(a: TorusRationalFn) -> Self {
        let vars = a.vars();
        PsiClass {
            a,
            b: TorusRationalFn::zero(vars),
        }
    }

    pub fn constant(vars: VarSet, value: Rat) -> Self {
        PsiClass::from_ratfn(TorusRationalFn::constant(vars, value))
    }

    pub fn one(vars: VarSet) -> Self {
        PsiClass::constant(vars, Rat::one())
    }

    /// The class p itself: 0 + p*1.
    pub fn psi(vars: VarSet) -> Self {
        PsiClass {
            a: TorusRationalFn::zero(vars),
            b: TorusRationalFn::one(vars),
        }
    }

    /// The p^0 part.
    pub fn base(&self) -> &TorusRationalFn {
        &self.a
    }

    /// The p^1 part: the only part surviving integration over a
    /// component, up to the 1/24 normalization.
    pub fn psi_coefficient(&self) -> &TorusRationalFn {
        &self.b
    }

    pub fn add(&self, other: &Self) -> Self {
        PsiClass {
            a: self.a.add(&other.a),
            b: self.b.add(&other.b),
        }
    }

    /// (a1 + pb1)(a2 + pb2) = a1 a2 + p (a1 b2 + a2 b1).
    pub fn mul(&self, other: &Self) -> Self {
        PsiClass {
            a: self.a.mul(&other.a),
            b: self.a.mul(&other.b).add(&other.a.mul(&self.b)),
        }
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        PsiClass {
            a: self.a.scale(factor),
            b: self.b.scale(factor),
        }
    }

    /// Division by an invertible scalar (a rational function with a
    /// nonzero base part would require inverting a + pb; only the
    /// scalar case is needed).
    pub fn div_ratfn(&self, divisor: &TorusRationalFn) -> Self {
        PsiClass {
            a: self.a.div(divisor),
            b: self.b.div(divisor),
        }
    }
}

impl fmt::Display for PsiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + p*({})", self.a, self.b)
    }
}
