//! Fixed-locus calculus for torus actions with isolated fixed points.
//!
//! A target is a list of fixed points, each a classifying stack of its
//! finite stabilizer with equivariant tangent (and optionally bundle
//! and divisor-lift) data. The double-inertia fixed locus over a point
//! splits into one component per bi-conjugacy class of the stabilizer;
//! each component carries the invariant tangent weights, and the
//! inverse Euler class of its virtual normal bundle is 1 - p*R where R
//! is the reciprocal-weight sum and p the (square-zero) psi class.
//!
//! Integration over a component keeps only the psi coefficient, scaled
//! by 1/(24 |C|) where C is the joint centralizer: 1/24 is the psi
//! integral over the genus-one moduli curve and 1/|C| the component's
//! degree over it.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group::{BiConjugacyClass, FiniteGroup};
use crate::poly::{TorusPolynomial, TorusRationalFn, VarSet};
use crate::psi::{psi_integral, PsiClass};
use crate::rat::Rat;
use crate::rep::{chern_component, invariant_weights, recip_sum, EquivariantRep};

/// Highest Chern order the expansion machinery will produce.
pub const MAX_CHERN_ORDER: usize = 16;

/// A torus-fixed point: a classifying stack of `stabilizer` with its
/// equivariant local data.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointDatum {
    pub label: String,
    pub stabilizer: FiniteGroup,
    pub tangent: EquivariantRep,
    pub bundle: Option<EquivariantRep>,
    /// Equivariant lift of the divisor class at this point: linear in
    /// the torus parameters.
    pub divisor_lift: Option<TorusPolynomial>,
}

/// A localization-model target: fixed points plus the variable layout.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetModelL {
    pub rank: usize,
    pub twist: usize,
    pub points: Vec<FixedPointDatum>,
}

impl TargetModelL {
    pub fn vars(&self) -> VarSet {
        VarSet::new(self.rank, self.twist)
    }

    /// Structural validation: nonempty, consistent ranks, admissible
    /// lifts, and isolated fixed loci on the double inertia stack (no
    /// zero invariant tangent weight on any component).
    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::InvalidModel {
                detail: "target has no fixed points".to_string(),
            });
        }
        let vars = self.vars();
        for p in &self.points {
            if p.tangent.rank != self.rank {
                return Err(Error::InvalidModel {
                    detail: format!("point {}: tangent rank mismatch", p.label),
                });
            }
            if let Some(b) = &p.bundle {
                if b.rank != self.rank {
                    return Err(Error::InvalidModel {
                        detail: format!("point {}: bundle rank mismatch", p.label),
                    });
                }
            }
            if let Some(lift) = &p.divisor_lift {
                if lift.vars() != vars {
                    return Err(Error::InvalidModel {
                        detail: format!("point {}: lift variable layout mismatch", p.label),
                    });
                }
                for (exp, _) in lift.terms() {
                    let t_degree: u32 = exp[..self.rank].iter().sum();
                    let s_degree: u32 = exp[self.rank..].iter().sum();
                    if s_degree != 0 || t_degree > 1 {
                        return Err(Error::InvalidModel {
                            detail: format!(
                                "point {}: divisor lift must be linear in t with no s",
                                p.label
                            ),
                        });
                    }
                }
            }
        }
        // forces the zero-weight check on every component
        self.components()?;
        Ok(())
    }

    /// All double-inertia fixed components, in (point, class) order.
    pub fn components(&self) -> Result<Vec<InertiaComponent>> {
        let mut out = Vec::new();
        for idx in 0..self.points.len() {
            out.extend(self.point_components(idx)?);
        }
        Ok(out)
    }

    /// The components lying over one fixed point: one per bi-conjugacy
    /// class of its stabilizer.
    pub fn point_components(&self, idx: usize) -> Result<Vec<InertiaComponent>> {
        let p = &self.points[idx];
        let group = &p.stabilizer;
        let mut out = Vec::new();
        for class in group.bi_conjugacy_classes() {
            let (g, h) = class.rep;
            let v_weights = invariant_weights(group, &p.tangent, g, h)?;
            if v_weights.iter().any(|w| w.iter().all(|&c| c == 0)) {
                return Err(Error::ZeroWeight {
                    detail: format!("point {}, class ({g}, {h})", p.label),
                });
            }
            let (f_inv_weights, f_full_weights) = match &p.bundle {
                Some(b) => (
                    Some(invariant_weights(group, b, g, h)?),
                    Some(b.full_weights()),
                ),
                None => (None, None),
            };
            out.push(InertiaComponent {
                point: idx,
                class,
                v_weights,
                f_inv_weights,
                f_full_weights,
            });
        }
        Ok(out)
    }
}

/// One component of the double-inertia fixed locus: a bi-conjugacy
/// class of a fixed point's stabilizer with its weight data.
#[derive(Clone, Debug)]
pub struct InertiaComponent {
    pub point: usize,
    pub class: BiConjugacyClass,
    /// Invariant tangent weights: the weights of the virtual normal
    /// bundle.
    pub v_weights: Vec<Vec<i64>>,
    /// Invariant bundle weights, when bundle data is present.
    pub f_inv_weights: Option<Vec<Vec<i64>>>,
    /// All bundle weights with multiplicity, when present.
    pub f_full_weights: Option<Vec<Vec<i64>>>,
}

impl InertiaComponent {
    pub fn centralizer_order(&self) -> usize {
        self.class.centralizer.order()
    }

    /// `"label:(g,h)"`, the canonical component key.
    pub fn key(&self, model: &TargetModelL) -> String {
        format!(
            "{}:({},{})",
            model.points[self.point].label, self.class.rep.0, self.class.rep.1
        )
    }
}

/// The inverse Euler class of the virtual normal bundle of a
/// component: 1 - p * (sum of reciprocal invariant tangent weights).
pub fn inverse_euler_vnormal(c: &InertiaComponent, vars: VarSet) -> Result<PsiClass> {
    let r = recip_sum(&c.v_weights, vars)?;
    Ok(PsiClass::new(TorusRationalFn::one(vars), r.neg()))
}

/// Contribution of one fixed point to the dilaton invariant:
/// (1/24) * #{commuting pairs of the stabilizer} / |stabilizer|.
pub fn dilaton_contribution(p: &FixedPointDatum) -> Rat {
    let pairs = p.stabilizer.commuting_pairs().len() as i64;
    psi_integral() * Rat::new(pairs, p.stabilizer.order() as i64)
}

/// Contribution of one fixed point to the divisor invariant, via the
/// psi expansion of (lift) * (1 - p R) on each component:
/// -(1/24) * sum over classes of lift * R / |C|.
pub fn divisor_contribution(model: &TargetModelL, idx: usize) -> Result<TorusRationalFn> {
    let vars = model.vars();
    let p = &model.points[idx];
    let lift = p.divisor_lift.as_ref().ok_or(Error::MissingLift {
        point: p.label.clone(),
    })?;
    let lift = TorusRationalFn::from_poly(lift.clone());
    let mut total = TorusRationalFn::zero(vars);
    for c in model.point_components(idx)? {
        let integrand = PsiClass::from_ratfn(lift.clone()).mul(&inverse_euler_vnormal(&c, vars)?);
        let term = integrand
            .psi_coefficient()
            .scale(&(psi_integral() * Rat::new(1, c.centralizer_order() as i64)));
        total = total.add(&term);
    }
    Ok(total)
}

/// Contribution of one fixed point to the twisted integral with index
/// k: per component, 1/(24 |C|) times the psi coefficient of
/// (ch(F) Td*(L1))_{k+1} * (1 + p S) * (1 - p R), where
/// S = sum_{j>=1} s_j ch_{j-1} of the invariant bundle weights and
/// Td*(L1) = 1 - p/2.
pub fn twisted_lhs_contribution(
    model: &TargetModelL,
    idx: usize,
    k: usize,
) -> Result<TorusRationalFn> {
    let vars = model.vars();
    check_order(k + 1)?;
    let label = &model.points[idx].label;
    if model.points[idx].bundle.is_none() {
        return Err(Error::MissingBundle {
            point: label.clone(),
        });
    }
    let mut total = TorusRationalFn::zero(vars);
    for c in model.point_components(idx)? {
        total = total.add(&twisted_component_term(model, &c, k)?);
    }
    Ok(total)
}

/// The single-component summand of `twisted_lhs_contribution`.
pub fn twisted_component_term(
    model: &TargetModelL,
    c: &InertiaComponent,
    k: usize,
) -> Result<TorusRationalFn> {
    let vars = model.vars();
    check_order(k + 1)?;
    let f_full = c.f_full_weights.as_ref().ok_or(Error::MissingBundle {
        point: model.points[c.point].label.clone(),
    })?;

    // (ch(F) Td*(L1))_{k+1} = ch_{k+1}(F) - p ch_k(F)/2
    let ch_td = PsiClass::new(
        TorusRationalFn::from_poly(chern_component(f_full, k + 1, vars)),
        TorusRationalFn::from_poly(chern_component(f_full, k, vars)).scale(&Rat::new(-1, 2)),
    );
    // the multiplicative twist: exp of p-linear classes collapses to 1 + p S
    let twist = PsiClass::new(
        TorusRationalFn::one(vars),
        TorusRationalFn::from_poly(twist_sum(c, vars)?),
    );
    let integrand = ch_td.mul(&twist).mul(&inverse_euler_vnormal(c, vars)?);
    Ok(integrand
        .psi_coefficient()
        .scale(&(psi_integral() * Rat::new(1, c.centralizer_order() as i64))))
}

/// S = sum_{j=1..J} s_j ch_{j-1}(invariant bundle weights); the j = 0
/// term vanishes because ch_{-1} is zero.
fn twist_sum(c: &InertiaComponent, vars: VarSet) -> Result<TorusPolynomial> {
    let f_inv = c.f_inv_weights.as_ref().ok_or(Error::MissingBundle {
        point: String::new(),
    })?;
    check_order(vars.twist.saturating_sub(1))?;
    let mut s = TorusPolynomial::zero(vars);
    for j in 1..=vars.twist {
        let sj = TorusPolynomial::s_var(vars, j);
        s = s.add(&sj.mul(&chern_component(f_inv, j - 1, vars)));
    }
    Ok(s)
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_CHERN_ORDER {
        return Err(Error::ExpansionCapExceeded {
            requested: n,
            cap: MAX_CHERN_ORDER,
        });
    }
    Ok(())
}

/// Integrand selectors for localization over the double inertia stack.
///
/// Localizing an integral of `a * c_top(T)` gives the sum of `a / |C|`
/// over components (the normal bundle of a component is the restriction
/// of the tangent bundle), and `a * c_{top-1}(T)` gives `a * R / |C|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    /// integral of c_top: sum of 1/|C|.
    CTop,
    /// integral of lift * c_{top-1}: sum of lift * R / |C|.
    DCtopM1,
    /// integral of ch_k(F) * c_top: sum of ch_k(full) / |C|.
    ChkCtop(usize),
    /// integral of ch_{k+1}(F) * S * c_top: sum of ch_{k+1} * S / |C|.
    Chk1SCtop(usize),
    /// integral of ch_{k+1}(F) * c_{top-1}: sum of ch_{k+1} * R / |C|.
    Chk1CtopM1(usize),
}

/// The single-component summand of `integrate_double_inertia`.
pub fn selector_term(
    model: &TargetModelL,
    c: &InertiaComponent,
    sel: Selector,
) -> Result<TorusRationalFn> {
    let vars = model.vars();
    let inv_centralizer = Rat::new(1, c.centralizer_order() as i64);
    let f_full = || {
        c.f_full_weights.as_ref().ok_or(Error::MissingBundle {
            point: model.points[c.point].label.clone(),
        })
    };
    let value = match sel {
        Selector::CTop => TorusRationalFn::one(vars),
        Selector::DCtopM1 => {
            let lift = model.points[c.point]
                .divisor_lift
                .as_ref()
                .ok_or(Error::MissingLift {
                    point: model.points[c.point].label.clone(),
                })?;
            TorusRationalFn::from_poly(lift.clone()).mul(&recip_sum(&c.v_weights, vars)?)
        }
        Selector::ChkCtop(k) => {
            check_order(k)?;
            TorusRationalFn::from_poly(chern_component(f_full()?, k, vars))
        }
        Selector::Chk1SCtop(k) => {
            check_order(k + 1)?;
            let ch = chern_component(f_full()?, k + 1, vars);
            TorusRationalFn::from_poly(ch.mul(&twist_sum(c, vars)?))
        }
        Selector::Chk1CtopM1(k) => {
            check_order(k + 1)?;
            let ch = chern_component(f_full()?, k + 1, vars);
            TorusRationalFn::from_poly(ch).mul(&recip_sum(&c.v_weights, vars)?)
        }
    };
    Ok(value.scale(&inv_centralizer))
}

/// Localization of the selected integrand over the double inertia
/// stack: the exact sum of per-component terms in canonical order.
pub fn integrate_double_inertia(model: &TargetModelL, sel: Selector) -> Result<TorusRationalFn> {
    let mut total = TorusRationalFn::zero(model.vars());
    for c in model.components()? {
        total = total.add(&selector_term(model, &c, sel)?);
    }
    Ok(total)
}
