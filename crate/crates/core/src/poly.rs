//! Multivariate polynomials and rational functions in the torus
//! parameters t_1..t_r and the twist parameters s_0..s_J.
//!
//! Terms are kept in a sorted map from exponent vectors to rational
//! coefficients; zero coefficients are never stored. Rational functions
//! are unreduced numerator/denominator pairs; equality is decided by
//! exact cross-multiplication, never by a gcd normal form.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::rat::Rat;

/// Variable layout shared by all polynomials of one run: exponent
/// vectors have length `rank + twist + 1`, slots 0..rank for t_1..t_r
/// followed by s_0..s_J.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct VarSet {
    pub rank: usize,
    pub twist: usize,
}

impl VarSet {
    pub fn new(rank: usize, twist: usize) -> Self {
        VarSet { rank, twist }
    }

    pub fn len(&self) -> usize {
        self.rank + self.twist + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Exponent-vector slot of s_j.
    pub fn s_slot(&self, j: usize) -> usize {
        assert!(j <= self.twist, "twist index out of range");
        self.rank + j
    }

    /// Human-readable variable name for a slot.
    pub fn name(&self, slot: usize) -> String {
        if slot < self.rank {
            format!("t{}", slot + 1)
        } else {
            format!("s{}", slot - self.rank)
        }
    }
}

/// An exact multivariate polynomial over the rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorusPolynomial {
    vars: VarSet,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl TorusPolynomial {
    pub fn zero(vars: VarSet) -> Self {
        TorusPolynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: VarSet, value: Rat) -> Self {
        let mut p = TorusPolynomial::zero(vars);
        if !value.is_zero() {
            p.terms.insert(vec![0; vars.len()], value);
        }
        p
    }

    pub fn one(vars: VarSet) -> Self {
        TorusPolynomial::constant(vars, Rat::one())
    }

    /// The linear form sum_k w_k t_k for an integer weight vector; the
    /// vector length must equal the torus rank.
    pub fn from_weight(vars: VarSet, weight: &[i64]) -> Self {
        assert_eq!(weight.len(), vars.rank, "weight length vs torus rank");
        let mut p = TorusPolynomial::zero(vars);
        for (k, &w) in weight.iter().enumerate() {
            if w != 0 {
                let mut exp = vec![0u32; vars.len()];
                exp[k] = 1;
                p.terms.insert(exp, Rat::from_int(w));
            }
        }
        p
    }

    /// The variable s_j.
    pub fn s_var(vars: VarSet, j: usize) -> Self {
        let mut exp = vec![0u32; vars.len()];
        exp[vars.s_slot(j)] = 1;
        let mut p = TorusPolynomial::zero(vars);
        p.terms.insert(exp, Rat::one());
        p
    }

    pub fn vars(&self) -> VarSet {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Some(c) when the polynomial is the constant c.
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (exp, c) = self.terms.iter().next().unwrap();
                if exp.iter().all(|&e| e == 0) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    fn insert_term(&mut self, exp: Vec<u32>, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "variable layout mismatch");
        let mut out = self.clone();
        for (exp, c) in &other.terms {
            out.insert_term(exp.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TorusPolynomial {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "variable layout mismatch");
        let mut out = TorusPolynomial::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.insert_term(exp, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        if factor.is_zero() {
            return TorusPolynomial::zero(self.vars);
        }
        TorusPolynomial {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c.clone() * factor.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut out = TorusPolynomial::one(self.vars);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Evaluates at a rational point (one value per slot).
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.vars.len());
        let mut total = Rat::zero();
        for (exp, c) in &self.terms {
            let mut term = c.clone();
            for (slot, &e) in exp.iter().enumerate() {
                for _ in 0..e {
                    term *= point[slot].clone();
                }
            }
            total += term;
        }
        total
    }

    /// Evaluation at s_0 = ... = s_J = 0: keeps the terms free of
    /// every twist parameter.
    pub fn at_s_zero(&self) -> Self {
        let rank = self.vars.rank;
        TorusPolynomial {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(exp, _)| exp[rank..].iter().all(|&e| e == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact division: Some(q) with self = q * divisor, when such a
    /// polynomial quotient exists.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert_eq!(self.vars, divisor.vars, "variable layout mismatch");
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quo = TorusPolynomial::zero(self.vars);
        let (dlead_exp, dlead_coeff) = divisor.terms.iter().next_back().unwrap();
        while !rem.is_zero() {
            let (rlead_exp, rlead_coeff) = rem.terms.iter().next_back().unwrap();
            let mut qexp = Vec::with_capacity(rlead_exp.len());
            for (r, d) in rlead_exp.iter().zip(dlead_exp) {
                if r < d {
                    return None;
                }
                qexp.push(r - d);
            }
            let qcoeff = rlead_coeff.clone() / dlead_coeff.clone();
            let mut mono = TorusPolynomial::zero(self.vars);
            mono.terms.insert(qexp, qcoeff);
            rem = rem.sub(&mono.mul(divisor));
            quo = quo.add(&mono);
        }
        Some(quo)
    }

    /// Serialized form: sorted (exponent string, coefficient string)
    /// pairs, exponents comma-joined.
    pub fn to_string_map(&self) -> Vec<(String, String)> {
        self.terms
            .iter()
            .map(|(exp, c)| {
                let key = exp
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                (key, format!("{c}"))
            })
            .collect()
    }
}

impl fmt::Display for TorusPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (slot, &e) in exp.iter().enumerate() {
                if e == 1 {
                    write!(f, "*{}", self.vars.name(slot))?;
                } else if e > 1 {
                    write!(f, "*{}^{}", self.vars.name(slot), e)?;
                }
            }
        }
        Ok(())
    }
}

/// An exact rational function: an unreduced fraction of polynomials.
#[derive(Clone, Debug)]
pub struct TorusRationalFn {
    num: TorusPolynomial,
    den: TorusPolynomial,
}

impl TorusRationalFn {
    pub fn new(num: TorusPolynomial, den: TorusPolynomial) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        assert_eq!(num.vars(), den.vars(), "variable layout mismatch");
        if num.is_zero() {
            let vars = num.vars();
            return TorusRationalFn {
                num,
                den: TorusPolynomial::one(vars),
            };
        }
        TorusRationalFn { num, den }
    }

    pub fn from_poly(p: TorusPolynomial) -> Self {
        let vars = p.vars();
        TorusRationalFn {
            num: p,
            den: TorusPolynomial::one(vars),
        }
    }

    pub fn zero(vars: VarSet) -> Self {
        TorusRationalFn::from_poly(TorusPolynomial::zero(vars))
    }

    pub fn one(vars: VarSet) -> Self {
        TorusRationalFn::from_poly(TorusPolynomial::one(vars))
    }

    pub fn constant(vars: VarSet, value: Rat) -> Self {
        TorusRationalFn::from_poly(TorusPolynomial::constant(vars, value))
    }

    pub fn num(&self) -> &TorusPolynomial {
        &self.num
    }

    pub fn den(&self) -> &TorusPolynomial {
        &self.den
    }

    pub fn vars(&self) -> VarSet {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        TorusRationalFn::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TorusRationalFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return TorusRationalFn::zero(self.vars());
        }
        TorusRationalFn::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, factor: &Rat) -> Self {
        TorusRationalFn::new(self.num.scale(factor), self.den.clone())
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero rational function");
        TorusRationalFn::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.recip())
    }

    /// Some(c) when the function equals the constant c: exact
    /// cross-multiplication test num = c * den.
    pub fn is_constant(&self) -> Option<Rat> {
        if self.num.is_zero() {
            return Some(Rat::zero());
        }
        if self.num.num_terms() != self.den.num_terms() {
            return None;
        }
        let (en, cn) = self.num.terms().next().unwrap();
        let (ed, cd) = self.den.terms().next().unwrap();
        if en != ed {
            return None;
        }
        let candidate = cn.clone() / cd.clone();
        if self.num == self.den.scale(&candidate) {
            Some(candidate)
        } else {
            None
        }
    }

    /// Some(p) when the function is a polynomial: exact division of the
    /// numerator by the denominator.
    pub fn to_polynomial(&self) -> Option<TorusPolynomial> {
        self.num.div_exact(&self.den)
    }

    /// Evaluation at s = 0; the denominator must survive (it always
    /// does for localization totals, whose denominators are products
    /// of tangent weights).
    pub fn at_s_zero(&self) -> Self {
        TorusRationalFn::new(self.num.at_s_zero(), self.den.at_s_zero())
    }
}

/// Cross-multiplication equality: num1*den2 = num2*den1 exactly.
impl PartialEq for TorusRationalFn {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for TorusRationalFn {}

impl fmt::Display for TorusRationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant() == Some(Rat::one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "[{}] / [{}]", self.num, self.den)
        }
    }
}
