//! Insight from subspaces: summary plots, sensitivities, ridge fits, and the
//! consistency check between dimensional analysis and active subspaces.

pub mod consistency;
pub mod plot;
pub mod ridge_fit;
pub mod sensitivity;
pub mod summary;

pub use consistency::{
    consistency_check, log_ridge_matrix, ConsistencyReport, LogRidgeMatrix, RestrictedLogRidge,
    CONTAINMENT_TOL, DEFAULT_ZERO_TOL,
};
pub use plot::{ramp_index, summary_csv, summary_svg, COLOR_RAMP};
pub use ridge_fit::{ridge_residual, RidgeFitReport};
pub use sensitivity::{eigenvector_sensitivities, SensitivityReport};
pub use summary::{
    functional_dependence, spearman, summary_1d, summary_2d, DependenceCheck, SummaryData,
    SummaryRow, SummarySource, DEFAULT_SUMMARY_COUNT,
};
