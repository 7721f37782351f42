//! Error type shared by the calculator kernels.

use alloc::string::String;
use core::fmt;

/// Everything that can go wrong while building models or evaluating
/// invariants. All variants are data-driven: a well-formed target never
/// produces one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A cyclotomic value does not reduce to a rational constant.
    NotRational { detail: String },
    /// A Cayley table or generator set fails a group axiom.
    NotAGroup { detail: String },
    /// Group closure exceeded the configured order cap.
    OrderCapExceeded { cap: usize },
    /// An operation requiring `gh = hg` was given a non-commuting pair.
    NotCommuting { g: usize, h: usize },
    /// A subgroup is not abelian on at most two generators.
    NotBicyclic { detail: String },
    /// A character average failed to produce an admissible dimension.
    NotIntegral { detail: String },
    /// A weight that must be invertible vanished: the fixed locus is
    /// not isolated.
    ZeroWeight { detail: String },
    /// A divisor computation was requested without a lift.
    MissingLift { point: String },
    /// A twisted computation was requested without bundle data.
    MissingBundle { point: String },
    /// A divisor computation was requested on a quotient model without
    /// a divisor table.
    MissingDivisorTable,
    /// A table is missing the entry for a bicyclic subgroup class.
    MissingTableEntry { key: String },
    /// The assembled divisor total depends on the torus parameters.
    InvalidLift { total: String },
    /// Requested Chern order exceeds the configured expansion cap.
    ExpansionCapExceeded { requested: usize, cap: usize },
    /// Model-level validation failure (bad field combination).
    InvalidModel { detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotRational { detail } => {
                write!(f, "cyclotomic value is not rational: {detail}")
            }
            Error::NotAGroup { detail } => write!(f, "not a group: {detail}"),
            Error::OrderCapExceeded { cap } => {
                write!(f, "group closure exceeded the order cap {cap}")
            }
            Error::NotCommuting { g, h } => {
                write!(f, "elements {g} and {h} do not commute")
            }
            Error::NotBicyclic { detail } => write!(f, "subgroup is not bicyclic: {detail}"),
            Error::NotIntegral { detail } => {
                write!(f, "character average is not an admissible dimension: {detail}")
            }
            Error::ZeroWeight { detail } => write!(
                f,
                "zero weight ({detail}): fixed locus is not isolated"
            ),
            Error::MissingLift { point } => {
                write!(f, "fixed point {point} carries no divisor lift")
            }
            Error::MissingBundle { point } => {
                write!(f, "fixed point {point} carries no bundle data")
            }
            Error::MissingDivisorTable => {
                write!(f, "quotient model carries no divisor table")
            }
            Error::MissingTableEntry { key } => {
                write!(f, "table is missing the bicyclic subgroup class {key}")
            }
            Error::InvalidLift { total } => write!(
                f,
                "divisor total depends on the torus parameters (invalid lift): {total}"
            ),
            Error::ExpansionCapExceeded { requested, cap } => {
                write!(f, "Chern order {requested} exceeds the expansion cap {cap}")
            }
            Error::InvalidModel { detail } => write!(f, "invalid model: {detail}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
