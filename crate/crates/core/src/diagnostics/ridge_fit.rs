//! Polynomial ridge approximation `f(xi) ~ g(W1^T xi)` and its test error.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::summary::spread;
use crate::models::ModelFunction;
use crate::parallel::map_indexed;
use crate::seeding::{uniform_point, Purpose};
use crate::{Error, Result};

/// Fits with a larger condition number are refused.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RidgeFitReport {
    pub n: usize,
    pub degree: usize,
    pub train_count: usize,
    pub test_count: usize,
    /// RMS residual over `spread(f)` on the training points.
    pub train_error: f64,
    /// RMS residual over `spread(f)` on the test points.
    pub test_error: f64,
}

fn legendre_values(t: f64, degree: usize) -> Vec<f64> {
    let mut p = vec![1.0; degree + 1];
    if degree >= 1 {
        p[1] = t;
    }
    for k in 2..=degree {
        let kf = k as f64;
        p[k] = ((2.0 * kf - 1.0) * t * p[k - 1] - (kf - 1.0) * p[k - 2]) / kf;
    }
    p
}

/// Tensor Legendre basis on active variables scaled to `[-1, 1]`.
fn design(ys: &[Vec<f64>], degree: usize) -> DMatrix<f64> {
    let n = ys.first().map_or(1, Vec::len);
    let per = degree + 1;
    let cols = per.pow(n as u32);
    DMatrix::from_fn(ys.len(), cols, |r, c| {
        let mut v = 1.0;
        let mut idx = c;
        for &y in &ys[r] {
            let p = legendre_values(y, degree);
            v *= p[idx % per];
            idx /= per;
        }
        v
    })
}

fn draw(
    model: &dyn ModelFunction,
    w1: &DMatrix<f64>,
    count: usize,
    seed: u64,
    purpose: Purpose,
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let m = model.dim();
    // |w^T xi| <= ||w||_1 on the hypercube
    let scales: Vec<f64> = w1
        .column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum())
        .collect();
    let pts = map_indexed(count, |i| {
        let xi = uniform_point(seed, purpose, i as u64, m);
        let y: Vec<f64> = w1
            .column_iter()
            .zip(&scales)
            .map(|(c, s)| c.iter().zip(&xi).map(|(a, b)| a * b).sum::<f64>() / s)
            .collect();
        Ok((y, model.value(&xi)?))
    })?;
    Ok(pts.into_iter().unzip())
}

fn rel_rms(a: &DMatrix<f64>, coef: &DVector<f64>, f: &[f64]) -> f64 {
    let pred = a * coef;
    let ss: f64 = pred.iter().zip(f).map(|(p, y)| (p - y) * (p - y)).sum();
    let rms = (ss / f.len() as f64).sqrt();
    let s = spread(f);
    if s > 0.0 {
        rms / s
    } else {
        rms
    }
}

/// Least-squares fit of a degree-`degree` tensor polynomial in the `n`
/// columns of `w1` (n in {1, 2}).
pub fn ridge_residual(
    model: &dyn ModelFunction,
    w1: &DMatrix<f64>,
    degree: usize,
    train_count: usize,
    test_count: usize,
    seed: u64,
) -> Result<RidgeFitReport> {
    let n = w1.ncols();
    if !(1..=2).contains(&n) {
        return Err(Error::arg(format!(
            "ridge fit supports 1 or 2 active variables, got {n}"
        )));
    }
    if degree == 0 {
        return Err(Error::arg("fit degree must be at least 1"));
    }
    model.space().check_len(w1.nrows())?;
    let cols = (degree + 1).pow(n as u32);
    if train_count < cols || test_count == 0 {
        return Err(Error::arg(format!(
            "need at least {cols} training points and one test point for degree {degree}"
        )));
    }
    let (ytr, ftr) = draw(model, w1, train_count, seed, Purpose::RidgeTrain)?;
    let (yte, fte) = draw(model, w1, test_count, seed, Purpose::RidgeTest)?;
    let a = design(&ytr, degree);
    let svd = a.clone().svd(true, true);
    let (smax, smin) = (svd.singular_values.max(), svd.singular_values.min());
    if !(smin > 0.0 && smax / smin < MAX_CONDITION) {
        return Err(Error::Numeric(format!(
            "ridge fit of degree {degree} is ill-conditioned (condition number {:e}); try a lower degree",
            smax / smin
        )));
    }
    let coef = svd
        .solve(&DVector::from_column_slice(&ftr), 0.0)
        .map_err(|e| Error::Numeric(format!("least-squares solve failed: {e}")))?;
    Ok(RidgeFitReport {
        n,
        degree,
        train_count,
        test_count,
        train_error: rel_rms(&a, &coef, &ftr),
        test_error: rel_rms(&design(&yte, degree), &coef, &fte),
    })
}
