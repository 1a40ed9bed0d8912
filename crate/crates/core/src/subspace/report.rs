//! Serializable spectrum report and eigenvalue CSV.

use serde::{Deserialize, Serialize};

use super::bootstrap::BootstrapSummary;
use super::estimate::{CMatrixEstimate, Estimator};
use super::spectrum::{ActiveSubspace, ActivityReport, Selection, Spectrum};
use crate::diagnostics::ConsistencyReport;
use crate::models::ParameterSpace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub model: String,
    pub space: String,
    pub parameters: Vec<String>,
    pub estimator: Estimator,
    pub m: usize,
    pub eigenvalues: Vec<f64>,
    /// `lambda_i / lambda_1`
    pub eigenvalue_ratios: Vec<f64>,
    /// Row-major; column `j` is the eigenvector of `eigenvalues[j]`.
    pub eigenvectors: Vec<Vec<f64>>,
    pub trace: f64,
    pub mean_sq_grad: f64,
    pub selection: Selection,
    pub selected_n: usize,
    /// Selected gap in decades (largest-gap selection only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gap_decades: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bootstrap: Option<BootstrapSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub activity: Option<ActivityReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consistency: Option<ConsistencyReport>,
}

impl SpectrumReport {
    pub fn new(
        model: &str,
        space: &ParameterSpace,
        estimate: &CMatrixEstimate,
        spectrum: &Spectrum,
        subspace: &ActiveSubspace,
    ) -> Self {
        let l1 = spectrum.leading();
        let m = spectrum.dim();
        Self {
            model: model.to_string(),
            space: space.name.clone(),
            parameters: space.names().into_iter().map(String::from).collect(),
            estimator: estimate.method,
            m,
            eigenvalues: spectrum.eigenvalues.clone(),
            eigenvalue_ratios: spectrum
                .eigenvalues
                .iter()
                .map(|l| if l1 != 0.0 { l / l1 } else { 0.0 })
                .collect(),
            eigenvectors: (0..m)
                .map(|i| spectrum.eigenvectors.row(i).iter().copied().collect())
                .collect(),
            trace: estimate.matrix.trace(),
            mean_sq_grad: estimate.mean_sq_grad,
            selection: subspace.selection,
            selected_n: subspace.n,
            gap_decades: subspace.gap,
            bootstrap: spectrum.bootstrap.clone(),
            activity: None,
            consistency: None,
        }
    }
}

/// `index,eigenvalue,ratio` plus bootstrap bounds when present.
pub fn eigenvalue_csv(spectrum: &Spectrum) -> String {
    let l1 = spectrum.leading();
    let boot = spectrum.bootstrap.as_ref();
    let mut out = String::from("index,eigenvalue,ratio");
    if boot.is_some() {
        out.push_str(",boot_min,boot_max,boot_lower,boot_upper");
    }
    out.push('\n');
    for (i, l) in spectrum.eigenvalues.iter().enumerate() {
        let ratio = if l1 != 0.0 { l / l1 } else { 0.0 };
        out.push_str(&format!("{},{l:e},{ratio:e}", i + 1));
        if let Some(b) = boot {
            let iv = &b.eigenvalues[i];
            out.push_str(&format!(
                ",{:e},{:e},{:e},{:e}",
                iv.min, iv.max, iv.lower, iv.upper
            ));
        }
        out.push('\n');
    }
    out
}
