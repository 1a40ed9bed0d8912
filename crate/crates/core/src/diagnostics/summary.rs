//! Summary-plot data: model output against one or two active variables.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::models::ModelFunction;
use crate::parallel::map_indexed;
use crate::seeding::{uniform_point, Purpose};
use crate::subspace::GradientSampleSet;
use crate::{Error, Result};

/// Default number of summary points.
pub const DEFAULT_SUMMARY_COUNT: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    /// Active variables `W1^T xi`.
    pub y: Vec<f64>,
    pub f: f64,
    pub x_normalized: Vec<f64>,
    pub x_physical: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryData {
    pub n: usize,
    pub parameters: Vec<String>,
    pub provenance: String,
    pub rows: Vec<SummaryRow>,
}

impl SummaryData {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.f).collect()
    }

    pub fn active(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.y[j]).collect()
    }

    /// `max f - min f`.
    pub fn spread(&self) -> f64 {
        spread(&self.values())
    }
}

pub(crate) fn spread(v: &[f64]) -> f64 {
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    if v.is_empty() {
        0.0
    } else {
        hi - lo
    }
}

/// Points for a summary plot.
pub enum SummarySource<'a> {
    /// Reuse stored samples.
    Samples(&'a GradientSampleSet),
    /// Fresh seeded uniform draws of the model value.
    Draw {
        model: &'a dyn ModelFunction,
        count: usize,
        seed: u64,
    },
}

fn project(w1: &DMatrix<f64>, n: usize, xi: &[f64]) -> Vec<f64> {
    (0..n)
        .map(|j| w1.column(j).iter().zip(xi).map(|(w, x)| w * x).sum())
        .collect()
}

fn summary(source: SummarySource<'_>, w1: &DMatrix<f64>, n: usize) -> Result<SummaryData> {
    if w1.ncols() < n {
        return Err(Error::arg(format!(
            "{n}-D summary needs an active subspace of dimension >= {n}, got {}",
            w1.ncols()
        )));
    }
    match source {
        SummarySource::Samples(set) => {
            set.space.check_len(w1.nrows())?;
            Ok(SummaryData {
                n,
                parameters: set.space.names().into_iter().map(String::from).collect(),
                provenance: format!("samples:{}", set.provenance.model),
                rows: set
                    .records
                    .iter()
                    .map(|r| SummaryRow {
                        y: project(w1, n, &r.x_normalized),
                        f: r.f,
                        x_normalized: r.x_normalized.clone(),
                        x_physical: r.x_physical.clone(),
                    })
                    .collect(),
            })
        }
        SummarySource::Draw { model, count, seed } => {
            let space = model.space();
            space.check_len(w1.nrows())?;
            let m = space.dim();
            let rows = map_indexed(count, |i| {
                let xi = uniform_point(seed, Purpose::SummaryPoints, i as u64, m);
                let f = model.value(&xi).map_err(|e| Error::Model {
                    index: i,
                    message: e.to_string(),
                })?;
                Ok(SummaryRow {
                    y: project(w1, n, &xi),
                    f,
                    x_physical: space.to_physical(&xi),
                    x_normalized: xi,
                })
            })?;
            Ok(SummaryData {
                n,
                parameters: space.names().into_iter().map(String::from).collect(),
                provenance: format!("draw:{}:seed={seed}", model.name()),
                rows,
            })
        }
    }
}

/// `(w1^T xi, f(xi))` rows.
pub fn summary_1d(source: SummarySource<'_>, w1: &DMatrix<f64>) -> Result<SummaryData> {
    summary(source, w1, 1)
}

/// `(w1^T xi, w2^T xi, f(xi))` rows; needs two active directions.
pub fn summary_2d(source: SummarySource<'_>, w1: &DMatrix<f64>) -> Result<SummaryData> {
    summary(source, w1, 2)
}

/// Result of checking that `f` is a function of the active variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DependenceCheck {
    /// Pairs whose active variables agree within the tolerance.
    pub close_pairs: usize,
    /// Largest `|f - f'| / spread(f)` over those pairs.
    pub worst_ratio: f64,
}

/// Compares all pairs of rows whose active variables all lie within `y_tol`.
pub fn functional_dependence(data: &SummaryData, y_tol: f64) -> DependenceCheck {
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.sort_by(|&a, &b| data.rows[a].y[0].total_cmp(&data.rows[b].y[0]));
    let spread = data.spread();
    let mut check = DependenceCheck {
        close_pairs: 0,
        worst_ratio: 0.0,
    };
    for (k, &a) in order.iter().enumerate() {
        let ra = &data.rows[a];
        for &b in &order[k + 1..] {
            let rb = &data.rows[b];
            if rb.y[0] - ra.y[0] > y_tol {
                break;
            }
            if ra.y.iter().zip(&rb.y).all(|(p, q)| (p - q).abs() <= y_tol) {
                check.close_pairs += 1;
                let diff = (ra.f - rb.f).abs();
                let ratio = if spread > 0.0 {
                    diff / spread
                } else if diff > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                };
                check.worst_ratio = check.worst_ratio.max(ratio);
            }
        }
    }
    check
}

/// Average ranks (1-based), ties share their mean rank.
fn ranks(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
            j += 1;
        }
        let mean = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            r[k] = mean;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::arg(
            "Spearman correlation needs two equal-length series of length >= 2",
        ));
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mean) * (b - mean);
        sxx += (a - mean) * (a - mean);
        syy += (b - mean) * (b - mean);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::domain(
            "Spearman correlation undefined for a constant series",
        ));
    }
    Ok(sxy / (sxx * syy).sqrt())
}
