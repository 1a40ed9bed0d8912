//! Estimators of `C = E[grad f grad f^T]` under the uniform density on `[-1, 1]^m`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::models::{evaluate, EvaluationRecord, ModelFunction, ParameterSpace};
use crate::parallel::{chunked_sum, map_indexed};
use crate::quadrature::TensorRule;
use crate::seeding::{uniform_point, Purpose};
use crate::{Error, Result};

/// Quadrature runs above this many points are refused unless forced.
pub const QUADRATURE_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSource {
    Internal,
    External,
}

/// Where a sample set came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: SampleSource,
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<String>,
    /// Set when the records were read in physical coordinates and converted.
    #[serde(default)]
    pub converted_from_physical: bool,
}

impl Provenance {
    pub fn internal(model: impl Into<String>) -> Self {
        Self {
            source: SampleSource::Internal,
            model: model.into(),
            estimator: None,
            seed: None,
            solver: None,
            converted_from_physical: false,
        }
    }

    pub fn external(model: impl Into<String>) -> Self {
        Self {
            source: SampleSource::External,
            ..Self::internal(model)
        }
    }
}

/// Gradient samples on one parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSampleSet {
    pub space: ParameterSpace,
    pub records: Vec<EvaluationRecord>,
    pub provenance: Provenance,
}

impl GradientSampleSet {
    pub fn new(
        space: ParameterSpace,
        records: Vec<EvaluationRecord>,
        provenance: Provenance,
    ) -> Result<Self> {
        let m = space.dim();
        for (i, r) in records.iter().enumerate() {
            if r.x_normalized.len() != m || r.x_physical.len() != m || r.grad.len() != m {
                return Err(Error::arg(format!(
                    "sample {i} has dimension {} but the space has {m} parameters",
                    r.grad.len()
                )));
            }
            if !r.f.is_finite() || r.grad.iter().any(|g| !g.is_finite()) {
                return Err(Error::arg(format!("sample {i} has non-finite values")));
            }
        }
        Ok(Self {
            space,
            records,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Evaluates `model` at `count` seeded uniform points.
    pub fn draw(model: &dyn ModelFunction, count: usize, seed: u64) -> Result<Self> {
        let m = model.dim();
        let records = map_indexed(count, |i| {
            let xi = uniform_point(seed, Purpose::MonteCarloPoints, i as u64, m);
            evaluate(model, &xi, i)
        })?;
        let mut provenance = Provenance::internal(model.name());
        provenance.estimator = Some("monte_carlo".into());
        provenance.seed = Some(seed);
        Self::new(model.space().clone(), records, provenance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Estimator {
    Quadrature { points_per_dim: usize },
    MonteCarlo { samples: usize, seed: u64 },
    FromSamples { samples: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CMatrixEstimate {
    /// Symmetric `m x m` estimate.
    pub matrix: DMatrix<f64>,
    pub method: Estimator,
    pub space_id: String,
    /// Estimate of `E ||grad f||^2`, accumulated independently of `matrix`.
    pub mean_sq_grad: f64,
}

impl CMatrixEstimate {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

pub fn symmetrize(c: &DMatrix<f64>) -> DMatrix<f64> {
    (c + c.transpose()) * 0.5
}

/// Accumulates `w g g^T` into the row-major `m x m` block of `acc` and
/// `w ||g||^2` into its last slot.
fn add_outer(acc: &mut [f64], w: f64, g: &[f64]) {
    let m = g.len();
    for i in 0..m {
        let wi = w * g[i];
        for j in 0..m {
            acc[i * m + j] += wi * g[j];
        }
    }
    acc[m * m] += w * g.iter().map(|x| x * x).sum::<f64>();
}

fn finish(
    acc: Vec<f64>,
    m: usize,
    scale: f64,
    method: Estimator,
    space: &ParameterSpace,
) -> CMatrixEstimate {
    let raw = DMatrix::from_row_slice(m, m, &acc[..m * m]) * scale;
    CMatrixEstimate {
        matrix: symmetrize(&raw),
        method,
        space_id: space.name.clone(),
        mean_sq_grad: acc[m * m] * scale,
    }
}

fn check_budget(rule: &TensorRule, force: bool) -> Result<usize> {
    let points = rule.num_points();
    if points > QUADRATURE_BUDGET && !force {
        return Err(Error::Budget {
            points,
            limit: QUADRATURE_BUDGET,
        });
    }
    usize::try_from(points).map_err(|_| Error::Budget {
        points,
        limit: usize::MAX as u128,
    })
}

/// Tensor Gauss-Legendre estimate with `points_per_dim^m` gradient evaluations.
pub fn estimate_c_quadrature(
    model: &dyn ModelFunction,
    points_per_dim: usize,
    force: bool,
) -> Result<CMatrixEstimate> {
    let m = model.dim();
    let rule = TensorRule::new(points_per_dim, m)?;
    let count = check_budget(&rule, force)?;
    let acc = chunked_sum(count, m * m + 1, |i, acc| {
        let mut xi = vec![0.0; m];
        let w = rule.point(i, &mut xi);
        let g = evaluate(model, &xi, i)?.grad;
        add_outer(acc, w, &g);
        Ok(())
    })?;
    Ok(finish(
        acc,
        m,
        1.0,
        Estimator::Quadrature { points_per_dim },
        model.space(),
    ))
}

/// Monte Carlo estimate from `samples` seeded uniform draws. The drawn samples
/// are returned for reuse (bootstrap, export).
pub fn estimate_c_monte_carlo(
    model: &dyn ModelFunction,
    samples: usize,
    seed: u64,
) -> Result<(CMatrixEstimate, GradientSampleSet)> {
    if samples == 0 {
        return Err(Error::arg("Monte Carlo estimate needs at least one sample"));
    }
    let set = GradientSampleSet::draw(model, samples, seed)?;
    let mut est = estimate_c_from_samples(&set)?;
    est.method = Estimator::MonteCarlo { samples, seed };
    Ok((est, set))
}

/// `(1/M) sum g_i g_i^T` over the records.
pub fn estimate_c_from_samples(set: &GradientSampleSet) -> Result<CMatrixEstimate> {
    let indices: Vec<usize> = (0..set.len()).collect();
    estimate_c_from_indices(set, &indices)
}

/// Estimate from a multiset of record indices, summed in the given order.
pub(crate) fn estimate_c_from_indices(
    set: &GradientSampleSet,
    indices: &[usize],
) -> Result<CMatrixEstimate> {
    if indices.is_empty() {
        return Err(Error::arg("cannot estimate C from an empty sample set"));
    }
    let m = set.dim();
    if let Some(i) = set.records.iter().position(|r| r.grad.len() != m) {
        return Err(Error::arg(format!("sample {i} has the wrong dimension")));
    }
    let acc = chunked_sum(indices.len(), m * m + 1, |k, acc| {
        add_outer(acc, 1.0, &set.records[indices[k]].grad);
        Ok(())
    })?;
    Ok(finish(
        acc,
        m,
        1.0 / indices.len() as f64,
        Estimator::FromSamples {
            samples: indices.len(),
        },
        &set.space,
    ))
}

/// Quadrature integrals of `||W1^T grad f||^2` and `||W2^T grad f||^2`.
pub(crate) fn quadrature_split_norms(
    model: &dyn ModelFunction,
    w1: &DMatrix<f64>,
    w2: &DMatrix<f64>,
    points_per_dim: usize,
    force: bool,
) -> Result<(f64, f64)> {
    let m = model.dim();
    let rule = TensorRule::new(points_per_dim, m)?;
    let count = check_budget(&rule, force)?;
    let acc = chunked_sum(count, 2, |i, acc| {
        let mut xi = vec![0.0; m];
        let w = rule.point(i, &mut xi);
        let g = evaluate(model, &xi, i)?.grad;
        for (slot, basis) in acc.iter_mut().zip([w1, w2]) {
            for col in basis.column_iter() {
                let p: f64 = col.iter().zip(&g).map(|(a, b)| a * b).sum();
                *slot += w * p * p;
            }
        }
        Ok(())
    })?;
    Ok((acc[0], acc[1]))
}
