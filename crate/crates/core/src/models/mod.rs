//! Evaluatable models with gradients in normalized log coordinates.

pub mod fd;
pub mod hartmann;
pub mod ridge;
pub mod space;

pub use fd::{finite_difference_gradient, CorruptGradient, FdGradientModel, InertExtension};
pub use hartmann::{
    dimensionless_b_ind, dimensionless_inputs, dimensionless_u_avg, hartmann_b_ind,
    hartmann_number, hartmann_u_avg, mhd_pi_values, CharacteristicScales, DimensionlessInputs,
    HartmannConstants, HartmannInputs, HartmannModel, HartmannQoi, MhdPiValues,
};
pub use ridge::{RidgeProfile, SyntheticRidge};
pub use space::{ModelKind, Parameter, ParameterSpace, SpaceConfig, SpaceFile};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A scalar function of normalized coordinates `xi in [-1, 1]^m`.
///
/// Implementations must be deterministic: the same input gives bit-identical
/// output on every call and every thread.
pub trait ModelFunction: Send + Sync {
    fn name(&self) -> &str;

    fn space(&self) -> &ParameterSpace;

    fn dim(&self) -> usize {
        self.space().dim()
    }

    fn value(&self, xi: &[f64]) -> Result<f64>;

    /// Gradient with respect to `xi`.
    fn gradient(&self, xi: &[f64]) -> Result<Vec<f64>>;
}

/// One model evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub x_normalized: Vec<f64>,
    pub x_physical: Vec<f64>,
    pub f: f64,
    pub grad: Vec<f64>,
}

impl EvaluationRecord {
    pub fn dim(&self) -> usize {
        self.x_normalized.len()
    }
}

/// Evaluates value and gradient at `xi`, tagging failures with `index`.
pub fn evaluate(model: &dyn ModelFunction, xi: &[f64], index: usize) -> Result<EvaluationRecord> {
    let tag = |e: Error| match e {
        Error::Model { .. } => e,
        other => Error::Model {
            index,
            message: other.to_string(),
        },
    };
    let f = model.value(xi).map_err(tag)?;
    let grad = model.gradient(xi).map_err(tag)?;
    if !f.is_finite() || grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::Model {
            index,
            message: format!("non-finite output at {xi:?}"),
        });
    }
    Ok(EvaluationRecord {
        x_normalized: xi.to_vec(),
        x_physical: model.space().to_physical(xi),
        f,
        grad,
    })
}

/// Builds the model named by a space file.
pub fn build_model(kind: ModelKind, space: ParameterSpace) -> Result<Box<dyn ModelFunction>> {
    match kind {
        ModelKind::HartmannUAvg => Ok(Box::new(HartmannModel::new(
            HartmannQoi::AverageVelocity,
            space,
        )?)),
        ModelKind::HartmannBInd => Ok(Box::new(HartmannModel::new(
            HartmannQoi::InducedField,
            space,
        )?)),
        ModelKind::External => Err(Error::Config(
            "model `external` has no built-in evaluator; supply gradient samples instead".into(),
        )),
    }
}
