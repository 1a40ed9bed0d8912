//! Exact dimensional analysis: unit parsing, the dimension matrix `D`, its
//! rational nullspace, and Buckingham-Pi groups.
//!
//! Everything here is computed over arbitrary-precision rationals, so
//! `D v = u` and `D U = 0` hold as identities rather than up to tolerance.

mod dimension;
mod matrix;
mod pi;

pub use dimension::{parse_unit_expression, BaseUnit, Dimension};
pub use matrix::{format_rational, rat, ratio, Rational, RationalMatrix};
pub use pi::{
    build_dimension_matrix, pi_groups, pi_groups_from_matrix, rational_nullspace, solve_particular,
    verify_pi_groups, DimensionMatrix, PiAudit, PiGroupSet, PiReport, QuantityEntry, QuantitySpec,
    QuantitySystem, QuantitySystemFile, Role,
};
