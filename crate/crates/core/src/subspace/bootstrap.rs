//! Nonparametric bootstrap of the eigenvalues and active subspaces.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::estimate::{estimate_c_from_indices, estimate_c_from_samples, GradientSampleSet};
use super::spectrum::{eigendecompose, subspace_distance, Spectrum};
use crate::parallel::map_indexed;
use crate::seeding::{stream, Purpose};
use crate::{Error, Result};

pub const DEFAULT_REPLICATES: usize = 500;

/// Percentile interval level.
pub const PERCENTILE_LOWER: f64 = 2.5;
pub const PERCENTILE_UPPER: f64 = 97.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub estimate: f64,
    pub min: f64,
    pub max: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Distances of bootstrap `W1(n)` to the full-sample `W1(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceSummary {
    pub n: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub replicates: usize,
    pub seed: u64,
    pub eigenvalues: Vec<Interval>,
    pub distances: Vec<DistanceSummary>,
}

/// Linear-interpolation percentile (`q` in percent) of sorted data.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * q / 100.0;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Resamples the records `replicates` times with replacement. Replicate `r`
/// draws its indices from stream `(seed, Bootstrap, r)`.
pub fn bootstrap_spectrum(
    samples: &GradientSampleSet,
    replicates: usize,
    seed: u64,
) -> Result<(Spectrum, BootstrapSummary)> {
    if replicates == 0 {
        return Err(Error::arg("bootstrap needs at least one replicate"));
    }
    let count = samples.len();
    if count < 2 {
        return Err(Error::arg(format!(
            "bootstrap needs at least 2 samples, got {count}"
        )));
    }
    let m = samples.dim();
    let full = eigendecompose(&estimate_c_from_samples(samples)?.matrix)?;
    let reps = map_indexed(replicates, |r| {
        let mut rng = stream(seed, Purpose::Bootstrap, r as u64);
        let idx: Vec<usize> = (0..count).map(|_| rng.random_range(0..count)).collect();
        let s = eigendecompose(&estimate_c_from_indices(samples, &idx)?.matrix)?;
        let d = (1..m)
            .map(|n| subspace_distance(&s.w1(n), &full.w1(n)))
            .collect::<Result<Vec<_>>>()?;
        Ok((s.eigenvalues, d))
    })?;

    let summarize = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        (
            v[0],
            v[v.len() - 1],
            percentile(&v, PERCENTILE_LOWER),
            percentile(&v, PERCENTILE_UPPER),
            v,
        )
    };
    let eigenvalues = (0..m)
        .map(|i| {
            let (min, max, lower, upper, _) = summarize(reps.iter().map(|r| r.0[i]).collect());
            Interval {
                estimate: full.eigenvalues[i],
                min,
                max,
                lower,
                upper,
            }
        })
        .collect();
    let distances = (1..m)
        .map(|n| {
            let (min, max, lower, upper, v) = summarize(reps.iter().map(|r| r.1[n - 1]).collect());
            DistanceSummary {
                n,
                mean: v.iter().sum::<f64>() / v.len() as f64,
                min,
                max,
                lower,
                upper,
            }
        })
        .collect();
    let summary = BootstrapSummary {
        replicates,
        seed,
        eigenvalues,
        distances,
    };
    let mut spectrum = full;
    spectrum.bootstrap = Some(summary.clone());
    Ok((spectrum, summary))
}
