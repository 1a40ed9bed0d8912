//! Per-parameter sensitivity scores from eigenvectors.

use serde::{Deserialize, Serialize};

use crate::subspace::Spectrum;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub n: usize,
    pub parameters: Vec<String>,
    /// `sum_{j<=n} lambda_j w_ij^2`
    pub raw_scores: Vec<f64>,
    /// Raw scores divided by their maximum.
    pub scores: Vec<f64>,
    /// Signed components of the first eigenvector.
    pub first_eigenvector: Vec<f64>,
}

/// Activity scores over the leading `n` eigenpairs. Slightly negative
/// eigenvalues from roundoff are treated as zero.
pub fn eigenvector_sensitivities(
    spectrum: &Spectrum,
    n: usize,
    parameters: &[String],
) -> Result<SensitivityReport> {
    let m = spectrum.dim();
    if n == 0 || n > m {
        return Err(Error::arg(format!("need 1 <= n <= {m}, got {n}")));
    }
    if parameters.len() != m {
        return Err(Error::arg(format!(
            "{} parameter names for a {m}-dimensional spectrum",
            parameters.len()
        )));
    }
    let w = &spectrum.eigenvectors;
    let raw_scores: Vec<f64> = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| spectrum.eigenvalues[j].max(0.0) * w[(i, j)] * w[(i, j)])
                .sum()
        })
        .collect();
    let max = raw_scores.iter().fold(0.0f64, |a, &b| a.max(b));
    let scores = raw_scores
        .iter()
        .map(|s| if max > 0.0 { s / max } else { 0.0 })
        .collect();
    Ok(SensitivityReport {
        n,
        parameters: parameters.to_vec(),
        raw_scores,
        scores,
        first_eigenvector: w.column(0).iter().copied().collect(),
    })
}

impl SensitivityReport {
    /// Parameter indices sorted by decreasing score.
    pub fn ranking(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.scores.len()).collect();
        idx.sort_by(|&a, &b| self.scores[b].total_cmp(&self.scores[a]).then(a.cmp(&b)));
        idx
    }

    pub fn to_text(&self) -> String {
        let width = self
            .parameters
            .iter()
            .map(String::len)
            .max()
            .unwrap_or(0)
            .max(9);
        let mut out = format!(
            "{:<width$}  {:>12}  {:>12}  {:>12}\n",
            "parameter", "score", "raw", "w1"
        );
        for i in 0..self.parameters.len() {
            out.push_str(&format!(
                "{:<width$}  {:>12.6e}  {:>12.6e}  {:>12.6e}\n",
                self.parameters[i], self.scores[i], self.raw_scores[i], self.first_eigenvector[i]
            ));
        }
        out
    }
}
