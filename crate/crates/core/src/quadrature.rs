//! Gauss-Legendre rules and their tensor products on `[-1, 1]^m`.
//!
//! Weights are normalized to sum to one, i.e. the rules integrate against the
//! uniform probability density rather than Lebesgue measure.

use crate::{Error, Result};

/// One-dimensional Gauss-Legendre rule with weights summing to 1.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n`, started from the Chebyshev-like
    /// approximation `cos(pi (i - 1/4) / (n + 1/2))`.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("Gauss-Legendre rule needs at least one point"));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    break;
                }
            }
            let (_, d) = legendre_and_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            // Lebesgue weight is 2 / ((1 - x^2) P'(x)^2); halve it for the probability measure.
            let w = 1.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor-product rule: `points_per_dim^m` points enumerated in mixed-radix
/// order with the last coordinate varying fastest.
#[derive(Debug, Clone)]
pub struct TensorRule {
    pub rule: GaussLegendre,
    pub dim: usize,
}

impl TensorRule {
    pub fn new(points_per_dim: usize, dim: usize) -> Result<Self> {
        Ok(Self {
            rule: GaussLegendre::new(points_per_dim)?,
            dim,
        })
    }

    pub fn num_points(&self) -> u128 {
        (self.rule.len() as u128).pow(self.dim as u32)
    }

    /// Writes point `index` into `out` and returns its weight.
    pub fn point(&self, mut index: usize, out: &mut [f64]) -> f64 {
        let n = self.rule.len();
        let mut w = 1.0;
        for slot in out.iter_mut().rev() {
            let j = index % n;
            index /= n;
            *slot = self.rule.nodes[j];
            w *= self.rule.weights[j];
        }
        w
    }
}
