//! Eigendecomposition of `C`, dimension selection, and subspace error measures.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::bootstrap::BootstrapSummary;
use super::estimate::{quadrature_split_norms, CMatrixEstimate};
use crate::models::ModelFunction;
use crate::{Error, Result};

/// Eigenvalues below this fraction of `lambda_1` count as zero when selecting
/// a dimension by the largest gap.
pub const GAP_FLOOR: f64 = 1e-12;

const MAX_SWEEPS: usize = 1000;

/// Descending eigenpairs of a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: DMatrix<f64>,
    pub bootstrap: Option<BootstrapSummary>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn leading(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// First `n` eigenvectors.
    pub fn w1(&self, n: usize) -> DMatrix<f64> {
        self.eigenvectors.columns(0, n).into_owned()
    }

    /// Remaining `m - n` eigenvectors.
    pub fn w2(&self, n: usize) -> DMatrix<f64> {
        self.eigenvectors.columns(n, self.dim() - n).into_owned()
    }

    /// Number of eigenvalues above `tol * lambda_1`.
    pub fn numerical_rank(&self, tol: f64) -> usize {
        let cut = tol * self.leading();
        self.eigenvalues.iter().filter(|&&l| l > cut).count()
    }
}

/// Flips `v` so its largest-magnitude entry is positive; near-ties go to the
/// lowest index.
pub fn normalize_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|x| x.abs() >= max * (1.0 - 1e-12))
        .expect("max attained");
    if v[pivot] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

pub fn eigendecompose(c: &DMatrix<f64>) -> Result<Spectrum> {
    if !c.is_square() {
        return Err(Error::arg(format!("C must be square, got {:?}", c.shape())));
    }
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("C has non-finite entries".into()));
    }
    let m = c.nrows();
    let eig = SymmetricEigen::try_new(c.clone(), f64::EPSILON, MAX_SWEEPS).ok_or_else(|| {
        Error::Numeric(format!(
            "symmetric eigensolver did not converge (m = {m}, max |C_ij| = {:e})",
            c.amax()
        ))
    })?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .total_cmp(&eig.eigenvalues[a])
            .then(a.cmp(&b))
    });
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(m, m);
    for (k, &i) in order.iter().enumerate() {
        let mut v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
        normalize_sign(&mut v);
        eigenvectors.set_column(k, &nalgebra::DVector::from_vec(v));
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        bootstrap: None,
    })
}

impl CMatrixEstimate {
    pub fn spectrum(&self) -> Result<Spectrum> {
        eigendecompose(&self.matrix)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Selection {
    Explicit { n: usize },
    LargestGap { max_n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSubspace {
    pub n: usize,
    pub w1: DMatrix<f64>,
    pub w2: DMatrix<f64>,
    pub selection: Selection,
    /// Size of the selected gap in decades, for largest-gap selection.
    pub gap: Option<f64>,
}

/// `log10` eigenvalues with everything below `GAP_FLOOR * lambda_1` clamped
/// to the floor.
fn log_spectrum(eigenvalues: &[f64]) -> Option<Vec<f64>> {
    let l1 = *eigenvalues.first()?;
    if l1.is_nan() || l1 <= 0.0 {
        return None;
    }
    let floor = GAP_FLOOR * l1;
    Some(eigenvalues.iter().map(|&l| l.max(floor).log10()).collect())
}

/// Largest gap in `log10` eigenvalues over `1 <= n <= max_n`.
pub fn largest_gap(eigenvalues: &[f64], max_n: usize) -> Result<(usize, f64)> {
    let m = eigenvalues.len();
    if m < 2 {
        return Err(Error::NoGap(format!(
            "need at least 2 eigenvalues, got {m}"
        )));
    }
    let max_n = max_n.clamp(1, m - 1);
    let logs = log_spectrum(eigenvalues)
        .ok_or_else(|| Error::NoGap("all eigenvalues are zero or negative".into()))?;
    let mut best = (0, 0.0);
    for n in 1..=max_n {
        let gap = logs[n - 1] - logs[n];
        if gap > best.1 {
            best = (n, gap);
        }
    }
    if best.0 == 0 {
        return Err(Error::NoGap("all eigenvalues are equal".into()));
    }
    Ok(best)
}

pub fn select_dimension(spectrum: &Spectrum, selection: Selection) -> Result<ActiveSubspace> {
    let m = spectrum.dim();
    let (n, gap) = match selection {
        Selection::Explicit { n } => {
            if n == 0 || n >= m {
                return Err(Error::arg(format!(
                    "active dimension must satisfy 1 <= n < {m}, got {n}"
                )));
            }
            (n, None)
        }
        Selection::LargestGap { max_n } => {
            let (n, gap) = largest_gap(&spectrum.eigenvalues, max_n)?;
            (n, Some(gap))
        }
    };
    Ok(ActiveSubspace {
        n,
        w1: spectrum.w1(n),
        w2: spectrum.w2(n),
        selection,
        gap,
    })
}

fn check_orthonormal(w: &DMatrix<f64>, label: &str) -> Result<()> {
    let dev = (w.tr_mul(w) - DMatrix::identity(w.ncols(), w.ncols())).amax();
    if dev.is_nan() || dev > 1e-8 {
        return Err(Error::arg(format!(
            "{label} columns are not orthonormal (max Gram deviation {dev:e})"
        )));
    }
    Ok(())
}

/// Spectral norm of a symmetric matrix.
pub(crate) fn symmetric_norm(p: DMatrix<f64>) -> Result<f64> {
    if p.nrows() == 0 {
        return Ok(0.0);
    }
    let eig = SymmetricEigen::try_new(p, f64::EPSILON, MAX_SWEEPS)
        .ok_or_else(|| Error::Numeric("eigensolver did not converge in norm evaluation".into()))?;
    Ok(eig.eigenvalues.amax())
}

/// `||W_a W_a^T - W_b W_b^T||_2`, the sine of the largest principal angle.
pub fn subspace_distance(wa: &DMatrix<f64>, wb: &DMatrix<f64>) -> Result<f64> {
    if wa.shape() != wb.shape() {
        return Err(Error::arg(format!(
            "subspace bases differ in shape: {:?} vs {:?}",
            wa.shape(),
            wb.shape()
        )));
    }
    check_orthonormal(wa, "first basis")?;
    check_orthonormal(wb, "second basis")?;
    let p = wa * wa.transpose() - wb * wb.transpose();
    Ok(symmetric_norm(p)?.min(1.0))
}

/// `4 lambda_1 delta / (lambda_n - lambda_(n+1))`.
pub fn gap_bound(eigenvalues: &[f64], n: usize, delta: f64) -> Result<f64> {
    if n == 0 || n >= eigenvalues.len() {
        return Err(Error::arg(format!(
            "gap index must satisfy 1 <= n < {}, got {n}",
            eigenvalues.len()
        )));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::arg(format!(
            "delta must be finite and nonnegative, got {delta}"
        )));
    }
    let gap = eigenvalues[n - 1] - eigenvalues[n];
    if gap.is_nan() || gap <= 0.0 {
        return Err(Error::domain(format!(
            "eigenvalue gap at n = {n} is {gap}, not positive"
        )));
    }
    Ok(4.0 * eigenvalues[0] * delta / gap)
}

/// `ceil(alpha k ln m)` Monte Carlo samples.
pub fn sample_count_heuristic(k: usize, m: usize, alpha: f64) -> Result<usize> {
    if k == 0 {
        return Err(Error::arg("k must be at least 1"));
    }
    if m < 2 {
        return Err(Error::arg(format!("m must be at least 2, got {m}")));
    }
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::arg(format!(
            "alpha must be positive and finite, got {alpha}"
        )));
    }
    Ok((alpha * k as f64 * (m as f64).ln()).ceil() as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActivityReport {
    pub n: usize,
    pub points_per_dim: usize,
    pub active_eigensum: f64,
    pub inactive_eigensum: f64,
    pub active_integral: f64,
    pub inactive_integral: f64,
    /// `|sum_{i<=n} lambda_i - E||W1^T grad f||^2| / lambda_1`
    pub active_residual: f64,
    /// `|sum_{i>n} lambda_i - E||W2^T grad f||^2| / lambda_1`
    pub inactive_residual: f64,
}

impl ActivityReport {
    pub fn max_residual(&self) -> f64 {
        self.active_residual.max(self.inactive_residual)
    }
}

/// Checks that the mean squared gradient along the active (inactive) subspace
/// equals the sum of the leading (trailing) eigenvalues.
pub fn activity_identity_check(
    model: &dyn ModelFunction,
    spectrum: &Spectrum,
    n: usize,
    points_per_dim: usize,
) -> Result<ActivityReport> {
    let m = spectrum.dim();
    model.space().check_len(m)?;
    if n > m {
        return Err(Error::arg(format!("n = {n} exceeds dimension {m}")));
    }
    let (active_integral, inactive_integral) = quadrature_split_norms(
        model,
        &spectrum.w1(n),
        &spectrum.w2(n),
        points_per_dim,
        false,
    )?;
    let active_eigensum: f64 = spectrum.eigenvalues[..n].iter().sum();
    let inactive_eigensum: f64 = spectrum.eigenvalues[n..].iter().sum();
    let scale = spectrum.leading().abs();
    let rel = |a: f64, b: f64| {
        let d = (a - b).abs();
        if scale > 0.0 {
            d / scale
        } else {
            d
        }
    };
    Ok(ActivityReport {
        n,
        points_per_dim,
        active_eigensum,
        inactive_eigensum,
        active_integral,
        inactive_integral,
        active_residual: rel(active_eigensum, active_integral),
        inactive_residual: rel(inactive_eigensum, inactive_integral),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn diagonal_matrix() {
        let s =
            eigendecompose(&DMatrix::from_diagonal(&nalgebra::dvector![1.0, 3.0, 2.0])).unwrap();
        assert_eq!(s.eigenvalues, vec![3.0, 2.0, 1.0]);
        let expect = DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        assert_eq!(s.eigenvectors, expect);
    }

    #[test]
    fn rank_one_sign_rule() {
        let a = [1.0, -3.0, 2.0];
        let c = DMatrix::from_fn(3, 3, |i, j| a[i] * a[j]);
        let s = eigendecompose(&c).unwrap();
        assert!((s.eigenvalues[0] - 14.0).abs() < 1e-13);
        let norm = 14f64.sqrt();
        for (i, ai) in a.iter().enumerate() {
            assert!((s.eigenvectors[(i, 0)] + ai / norm).abs() < 1e-14);
        }
    }

    #[test]
    fn sign_tie_goes_to_lowest_index() {
        let mut v = vec![-0.5, 0.5, 0.1];
        normalize_sign(&mut v);
        assert_eq!(v, vec![0.5, -0.5, -0.1]);
    }

    #[test]
    fn gap_selection() {
        let (n, _) = largest_gap(&[10.0, 9.0, 1e-8, 1e-9, 0.0], 4).unwrap();
        assert_eq!(n, 2);
        assert!(matches!(
            largest_gap(&[2.0, 2.0, 2.0], 2),
            Err(Error::NoGap(_))
        ));
        assert!(matches!(largest_gap(&[0.0, 0.0], 1), Err(Error::NoGap(_))));
        // equal gaps resolve to the smaller n
        assert_eq!(largest_gap(&[100.0, 10.0, 1.0], 2).unwrap().0, 1);
    }

    #[test]
    fn explicit_selection() {
        let s =
            eigendecompose(&DMatrix::from_diagonal(&nalgebra::dvector![3.0, 2.0, 1.0])).unwrap();
        let a = select_dimension(&s, Selection::Explicit { n: 1 }).unwrap();
        assert_eq!(
            a.w1.column(0).as_slice(),
            s.eigenvectors.column(0).as_slice()
        );
        assert_eq!(a.w2.ncols(), 2);
        assert!(select_dimension(&s, Selection::Explicit { n: 3 }).is_err());
        assert!(select_dimension(&s, Selection::Explicit { n: 0 }).is_err());
    }

    #[test]
    fn distances() {
        let e1 = DMatrix::from_column_slice(2, 1, &[1.0, 0.0]);
        let e2 = DMatrix::from_column_slice(2, 1, &[0.0, 1.0]);
        assert_eq!(subspace_distance(&e1, &e1).unwrap(), 0.0);
        assert!((subspace_distance(&e1, &e2).unwrap() - 1.0).abs() < 1e-15);
        let t = PI / 6.0;
        let r = DMatrix::from_column_slice(2, 1, &[t.cos(), t.sin()]);
        assert!((subspace_distance(&e1, &r).unwrap() - 0.5).abs() < 1e-15);
        let bad = DMatrix::from_column_slice(2, 1, &[1.0, 1.0]);
        assert!(matches!(
            subspace_distance(&e1, &bad),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn gap_bound_values() {
        let l = [1.0, 0.5, 0.1];
        assert!((gap_bound(&l, 1, 0.01).unwrap() - 0.08).abs() < 1e-15);
        assert_eq!(gap_bound(&l, 1, 0.0).unwrap(), 0.0);
        assert!(matches!(
            gap_bound(&[1.0, 1.0], 1, 0.1),
            Err(Error::Domain(_))
        ));
        let doubled = gap_bound(&[2.0, 1.5, 0.1], 1, 0.01).unwrap();
        assert!((doubled - 0.16).abs() < 1e-15);
    }

    #[test]
    fn heuristic_values() {
        assert_eq!(sample_count_heuristic(2, 5, 10.0).unwrap(), 33);
        assert_eq!(sample_count_heuristic(1, 3, 2.0).unwrap(), 3);
        assert!(sample_count_heuristic(0, 5, 2.0).is_err());
        assert!(sample_count_heuristic(1, 1, 2.0).is_err());
        assert!(sample_count_heuristic(1, 5, 0.0).is_err());
    }
}
