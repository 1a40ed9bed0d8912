//! The log-ridge matrix `A = [v | U]` and the check that the active subspace
//! lies inside its column space.
//!
//! A unitless law `Pi = g(Pi_1, ..., Pi_n)` becomes, in logs of the inputs,
//! `f(x) = exp(v^T log x) g(exp(U^T log x))`, a function of `A^T log x` only.
//! Its gradient in log coordinates therefore lies in `col(A)`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::models::ParameterSpace;
use crate::subspace::spectrum::symmetric_norm;
use crate::subspace::Spectrum;
use crate::units::{PiGroupSet, RationalMatrix};
use crate::{Error, Result};

/// Default threshold, relative to `lambda_1`, below which eigenvalues are zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-10;

/// Containment distances above this fail the check.
pub const CONTAINMENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct LogRidgeMatrix {
    /// Exact `m x (n + 1)` matrix.
    pub exact: RationalMatrix,
    pub matrix: DMatrix<f64>,
    /// Row labels (input names).
    pub inputs: Vec<String>,
    /// `n + 1`.
    pub predicted_max_dim: usize,
}

pub fn log_ridge_matrix(pi: &PiGroupSet) -> Result<LogRidgeMatrix> {
    let m = pi.m();
    let exact = RationalMatrix::from_columns(m, std::slice::from_ref(&pi.v)).hstack(&pi.u);
    let rank = exact.rank();
    if rank != pi.n() + 1 {
        return Err(Error::Numeric(format!(
            "log-ridge matrix has rank {rank}, expected {}",
            pi.n() + 1
        )));
    }
    Ok(LogRidgeMatrix {
        matrix: exact.to_f64(),
        exact,
        inputs: pi.input_names.clone(),
        predicted_max_dim: rank,
    })
}

/// `A` with rows restricted to the varied parameters, in their order.
#[derive(Debug, Clone, PartialEq)]
pub struct RestrictedLogRidge {
    pub exact: RationalMatrix,
    pub matrix: DMatrix<f64>,
    pub rows: Vec<String>,
    /// Exact rank of the restricted matrix.
    pub rank: usize,
}

impl LogRidgeMatrix {
    /// Keeps the rows named by `names`, in that order. Rows of fixed inputs
    /// are dropped.
    pub fn restrict(&self, names: &[&str]) -> Result<RestrictedLogRidge> {
        let rows = names
            .iter()
            .map(|n| {
                self.inputs.iter().position(|i| i == n).ok_or_else(|| {
                    Error::Config(format!(
                        "parameter `{n}` is not an input of the quantity system (inputs: {})",
                        self.inputs.join(", ")
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let exact = self.exact.select_rows(&rows);
        Ok(RestrictedLogRidge {
            matrix: exact.to_f64(),
            rank: exact.rank(),
            exact,
            rows: names.iter().map(|s| s.to_string()).collect(),
        })
    }

    /// Restricts to the quantities behind the parameters of `space`.
    pub fn restrict_to_space(&self, space: &ParameterSpace) -> Result<RestrictedLogRidge> {
        let names: Vec<&str> = space.params().iter().map(|p| p.quantity_name()).collect();
        self.restrict(&names)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub zero_tol: f64,
    /// Eigenvalues above `zero_tol * lambda_1`.
    pub nonzero_eigenvalues: usize,
    pub restricted_rank: usize,
    pub rows: Vec<String>,
    pub count_ok: bool,
    /// `||(I - P_A) Q||_2` for an orthonormal basis `Q` of the leading
    /// eigenvectors mapped to log coordinates.
    pub containment_distance: f64,
    pub containment_ok: bool,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.count_ok && self.containment_ok
    }
}

/// Orthonormal basis of the column space (first `rank` left singular vectors).
fn column_basis(a: &DMatrix<f64>, rank: usize) -> DMatrix<f64> {
    if rank == 0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
    DMatrix::from_fn(a.nrows(), rank, |i, j| u[(i, order[j])])
}

pub fn consistency_check(
    spectrum: &Spectrum,
    space: &ParameterSpace,
    restricted: &RestrictedLogRidge,
    zero_tol: f64,
) -> Result<ConsistencyReport> {
    let m = spectrum.dim();
    if restricted.matrix.nrows() != m || space.dim() != m {
        return Err(Error::arg(format!(
            "shape mismatch: spectrum has dimension {m}, space {}, restricted A has {} rows",
            space.dim(),
            restricted.matrix.nrows()
        )));
    }
    let k = spectrum.numerical_rank(zero_tol);
    let half = space.half_widths();
    // d/dxi_i = hw_i d/dlog t_i, so directions map back by dividing by hw_i.
    let mapped = DMatrix::from_fn(m, k, |i, j| spectrum.eigenvectors[(i, j)] / half[i]);
    let distance = if k == 0 {
        0.0
    } else {
        let q = mapped.qr().q();
        let b = column_basis(&restricted.matrix, restricted.rank);
        let resid = &q - &b * (b.transpose() * &q);
        symmetric_norm(resid.transpose() * &resid)?.max(0.0).sqrt()
    };
    Ok(ConsistencyReport {
        zero_tol,
        nonzero_eigenvalues: k,
        restricted_rank: restricted.rank,
        rows: restricted.rows.clone(),
        count_ok: k <= restricted.rank,
        containment_distance: distance,
        containment_ok: distance < CONTAINMENT_TOL,
    })
}
