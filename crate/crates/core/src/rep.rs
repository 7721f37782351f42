//! Stabilizer-group representations with a commuting torus action.
//!
//! A representation is supplied as a list of isotypic pieces, each a
//! torus weight together with an exact class-function character of the
//! finite stabilizer. Everything the localization formulas consume is
//! derived here: invariant dimensions by character averaging, invariant
//! weight multisets, Chern character components, and top Euler classes
//! with their reciprocal-weight sums.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::cyclotomic::CyclotomicValue;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::poly::{TorusPolynomial, TorusRationalFn, VarSet};
use crate::rat::Rat;

/// An exact class function: one cyclotomic value per conjugacy class,
/// all at the group-exponent modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    values: Vec<CyclotomicValue>,
}

impl ClassFunction {
    /// Builds from one value per conjugacy class (class order as in
    /// `FiniteGroup::conjugacy_classes`), re-embedding each into the
    /// exponent modulus.
    pub fn new(group: &FiniteGroup, values: Vec<CyclotomicValue>) -> Result<Self> {
        if values.len() != group.conjugacy_classes().len() {
            return Err(Error::InvalidModel {
                detail: format!(
                    "character has {} values but the group has {} conjugacy classes",
                    values.len(),
                    group.conjugacy_classes().len()
                ),
            });
        }
        let modulus = group.exponent();
        let values = values
            .into_iter()
            .map(|v| v.embed(modulus))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassFunction { values })
    }

    /// The constant character with value `dim`.
    pub fn trivial_scaled(group: &FiniteGroup, dim: i64) -> Self {
        let modulus = group.exponent();
        let v = CyclotomicValue::from_rat(modulus, Rat::from_int(dim));
        ClassFunction {
            values: (0..group.conjugacy_classes().len()).map(|_| v.clone()).collect(),
        }
    }

    pub fn value_at(&self, group: &FiniteGroup, element: usize) -> &CyclotomicValue {
        &self.values[group.class_index_of(element)]
    }

    pub fn values(&self) -> &[CyclotomicValue] {
        &self.values
    }
}

/// One isotypic piece of an equivariant representation: a torus weight
/// shared by a `dim`-dimensional character of the stabilizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicPiece {
    pub tweight: Vec<i64>,
    pub dim: usize,
    pub character: ClassFunction,
}

impl IsotypicPiece {
    /// Validates that the character value at the identity is exactly
    /// `dim`.
    pub fn new(
        group: &FiniteGroup,
        tweight: Vec<i64>,
        dim: usize,
        character: ClassFunction,
    ) -> Result<Self> {
        let at_identity = character
            .value_at(group, group.identity())
            .rationalize()
            .map_err(|_| Error::NotIntegral {
                detail: "character value at the identity is not rational".to_string(),
            })?;
        if at_identity.to_usize() != Some(dim) {
            return Err(Error::NotIntegral {
                detail: format!(
                    "character value {} at the identity does not equal the declared dimension {}",
                    at_identity, dim
                ),
            });
        }
        if dim == 0 {
            return Err(Error::InvalidModel {
                detail: "isotypic piece has dimension zero".to_string(),
            });
        }
        Ok(IsotypicPiece {
            tweight,
            dim,
            character,
        })
    }
}

/// A stabilizer representation split into isotypic pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantRep {
    pub rank: usize,
    pub pieces: Vec<IsotypicPiece>,
}

impl EquivariantRep {
    pub fn new(rank: usize, pieces: Vec<IsotypicPiece>) -> Result<Self> {
        for p in &pieces {
            if p.tweight.len() != rank {
                return Err(Error::InvalidModel {
                    detail: format!(
                        "piece weight {:?} does not match the torus rank {}",
                        p.tweight, rank
                    ),
                });
            }
        }
        Ok(EquivariantRep { rank, pieces })
    }

    pub fn empty(rank: usize) -> Self {
        EquivariantRep {
            rank,
            pieces: Vec::new(),
        }
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.iter().map(|p| p.dim).sum()
    }

    /// Every torus weight with its full multiplicity, sorted.
    pub fn full_weights(&self) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(self.total_dim());
        for p in &self.pieces {
            for _ in 0..p.dim {
                out.push(p.tweight.clone());
            }
        }
        out.sort_unstable();
        out
    }
}

/// Dimension of the H-fixed subspace of one piece, by exact character
/// averaging: (1/|H|) sum over H of the character.
pub fn invariant_dim(group: &FiniteGroup, piece: &IsotypicPiece, sub: &Subgroup) -> Result<usize> {
    let modulus = group.exponent();
    let mut sum = CyclotomicValue::zero(modulus);
    for &u in sub.elems() {
        sum = sum.add(piece.character.value_at(group, u));
    }
    let avg = sum.scale(&Rat::new(1, sub.order() as i64));
    let value = avg.rationalize().map_err(|_| Error::NotIntegral {
        detail: format!("average over subgroup {} is not rational", sub.key()),
    })?;
    match value.to_usize() {
        Some(d) if d <= piece.dim => Ok(d),
        _ => Err(Error::NotIntegral {
            detail: format!(
                "average {} over subgroup {} is not a dimension between 0 and {}",
                value,
                sub.key(),
                piece.dim
            ),
        }),
    }
}

/// The multiset of torus weights of the subspace fixed by <g, h>:
/// each piece contributes its weight with the invariant multiplicity.
pub fn invariant_weights(
    group: &FiniteGroup,
    rep: &EquivariantRep,
    g: usize,
    h: usize,
) -> Result<Vec<Vec<i64>>> {
    let sub = group.generated_bicyclic_subgroup(g, h)?;
    let mut out = Vec::new();
    for piece in &rep.pieces {
        let d = invariant_dim(group, piece, &sub)?;
        for _ in 0..d {
            out.push(piece.tweight.clone());
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// The n-th Chern character component of a sum of weight lines:
/// sum over weights w of w^n / n!.
pub fn chern_component(weights: &[Vec<i64>], n: usize, vars: VarSet) -> TorusPolynomial {
    let mut sum = TorusPolynomial::zero(vars);
    for w in weights {
        sum = sum.add(&TorusPolynomial::from_weight(vars, w).pow(n));
    }
    sum.scale(&Rat::recip_factorial(n))
}

/// Product of the weights; the top equivariant Euler class. Every
/// weight must be nonzero.
pub fn euler_top(weights: &[Vec<i64>], vars: VarSet) -> Result<TorusPolynomial> {
    let mut prod = TorusPolynomial::one(vars);
    for w in weights {
        let form = TorusPolynomial::from_weight(vars, w);
        if form.is_zero() {
            return Err(Error::ZeroWeight {
                detail: "weight multiset contains the zero vector".to_string(),
            });
        }
        prod = prod.mul(&form);
    }
    Ok(prod)
}

/// Sum of the reciprocals of the weights. Every weight must be
/// nonzero.
pub fn recip_sum(weights: &[Vec<i64>], vars: VarSet) -> Result<TorusRationalFn> {
    let mut sum = TorusRationalFn::zero(vars);
    for w in weights {
        let form = TorusPolynomial::from_weight(vars, w);
        if form.is_zero() {
            return Err(Error::ZeroWeight {
                detail: "weight multiset contains the zero vector".to_string(),
            });
        }
        sum = sum.add(&TorusRationalFn::from_poly(form).recip());
    }
    Ok(sum)
}
