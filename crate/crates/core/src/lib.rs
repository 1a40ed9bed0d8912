//! Input-dimension reduction for deterministic physical models.
//!
//! Two routes are provided and cross-checked against each other:
//!
//! * [`units`]: exact Buckingham-Pi dimensional analysis over the rationals,
//!   from unit strings to Pi groups.
//! * [`subspace`]: gradient-based active subspaces, estimated by tensor
//!   Gauss-Legendre quadrature or seeded Monte Carlo.
//!
//! [`diagnostics`] connects the two through the log-ridge matrix `A = [v | U]`:
//! a unitless law is a ridge function of the logs of its inputs, so the active
//! subspace in log coordinates must lie inside the column space of `A`.
//! [`models`] ships the closed-form Hartmann duct-flow problem as the built-in
//! verification model, and [`ingest`] reads gradient samples from external
//! solvers.

pub mod diagnostics;
pub mod error;
pub mod ingest;
pub mod models;
pub mod quadrature;
pub mod seeding;
pub mod subspace;
pub mod units;

mod parallel;

pub use error::{Error, Result};
