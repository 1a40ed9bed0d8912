//! Active subspaces: estimate `C`, eigendecompose, select a dimension, and
//! quantify estimation error.

pub mod bootstrap;
pub mod estimate;
pub mod report;
pub mod spectrum;

pub use bootstrap::{bootstrap_spectrum, BootstrapSummary, DistanceSummary, Interval};
pub use estimate::{
    estimate_c_from_samples, estimate_c_monte_carlo, estimate_c_quadrature, symmetrize,
    CMatrixEstimate, Estimator, GradientSampleSet, Provenance, SampleSource, QUADRATURE_BUDGET,
};
pub use report::{eigenvalue_csv, SpectrumReport};
pub use spectrum::{
    activity_identity_check, eigendecompose, gap_bound, largest_gap, normalize_sign,
    sample_count_heuristic, select_dimension, subspace_distance, ActiveSubspace, ActivityReport,
    Selection, Spectrum,
};
