//! Synthetic ridge functions `f(xi) = g(A^T xi)` with known active subspace.

use nalgebra::{DMatrix, DVector};

use super::space::ParameterSpace;
use super::ModelFunction;
use crate::{Error, Result};

/// Profile `g: R^r -> R`.
#[derive(Debug, Clone, PartialEq)]
pub enum RidgeProfile {
    /// `g(t) = sum_j t_j`
    Linear,
    /// `g(t) = sum_j t_j^2`
    SumOfSquares,
    /// `g(t) = sum_j sum_k c_k t_j^k`
    Polynomial(Vec<f64>),
    /// `g(t) = sum_j exp(t_j)`
    Exponential,
    /// `g(t) = sum_j sin(t_j)`
    SineSum,
}

impl RidgeProfile {
    fn value(&self, t: f64) -> f64 {
        match self {
            RidgeProfile::Linear => t,
            RidgeProfile::SumOfSquares => t * t,
            RidgeProfile::Polynomial(c) => c.iter().rev().fold(0.0, |acc, c| acc * t + c),
            RidgeProfile::Exponential => t.exp(),
            RidgeProfile::SineSum => t.sin(),
        }
    }

    fn derivative(&self, t: f64) -> f64 {
        match self {
            RidgeProfile::Linear => 1.0,
            RidgeProfile::SumOfSquares => 2.0 * t,
            RidgeProfile::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(0.0, |acc, (k, c)| acc * t + k as f64 * c),
            RidgeProfile::Exponential => t.exp(),
            RidgeProfile::SineSum => t.cos(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticRidge {
    a: DMatrix<f64>,
    profile: RidgeProfile,
    space: ParameterSpace,
    name: String,
}

impl SyntheticRidge {
    /// `a` is `m x r` with full column rank.
    pub fn new(a: DMatrix<f64>, profile: RidgeProfile) -> Result<Self> {
        let (m, r) = a.shape();
        if r == 0 || r > m {
            return Err(Error::arg(format!(
                "ridge matrix must be m x r with 1 <= r <= m, got {m} x {r}"
            )));
        }
        if a.iter().any(|x| !x.is_finite()) {
            return Err(Error::arg("ridge matrix has non-finite entries"));
        }
        let sv = a.singular_values();
        let smax = sv.max();
        if sv.min().is_nan() || sv.min() <= smax * 1e-12 * m as f64 {
            return Err(Error::arg(format!(
                "ridge matrix is rank deficient (singular values {:?})",
                sv.as_slice()
            )));
        }
        Ok(Self {
            a,
            profile,
            space: ParameterSpace::standard(m),
            name: format!("ridge_rank{r}"),
        })
    }

    /// Re-homes the ridge on another space of the same dimension.
    pub fn with_space(mut self, space: ParameterSpace) -> Result<Self> {
        space.check_len(self.a.nrows())?;
        self.space = space;
        Ok(self)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn rank(&self) -> usize {
        self.a.ncols()
    }

    fn active(&self, xi: &[f64]) -> Result<DVector<f64>> {
        self.space.check_normalized(xi)?;
        Ok(self.a.tr_mul(&DVector::from_column_slice(xi)))
    }
}

impl ModelFunction for SyntheticRidge {
    fn name(&self) -> &str {
        &self.name
    }

    fn space(&self) -> &ParameterSpace {
        &self.space
    }

    fn value(&self, xi: &[f64]) -> Result<f64> {
        Ok(self
            .active(xi)?
            .iter()
            .map(|&t| self.profile.value(t))
            .sum())
    }

    fn gradient(&self, xi: &[f64]) -> Result<Vec<f64>> {
        let dg = self.active(xi)?.map(|t| self.profile.derivative(t));
        Ok((&self.a * dg).as_slice().to_vec())
    }
}
