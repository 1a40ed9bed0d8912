//! Finite-difference gradients and model wrappers used in checks and tests.

use super::space::{Parameter, ParameterSpace};
use super::ModelFunction;
use crate::{Error, Result};

/// Central differences of step `h`, one-sided where a central step would
/// leave `[-1, 1]`.
pub fn finite_difference_gradient<F>(f: F, x: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::arg(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    let mut p = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    let mut f0 = None;
    for i in 0..x.len() {
        let xi = x[i];
        let up = xi + h <= 1.0;
        let down = xi - h >= -1.0;
        let g = if up && down {
            p[i] = xi + h;
            let fp = f(&p)?;
            p[i] = xi - h;
            let fm = f(&p)?;
            (fp - fm) / (2.0 * h)
        } else {
            let center = match f0 {
                Some(v) => v,
                None => *f0.insert(f(x)?),
            };
            if up {
                p[i] = xi + h;
                (f(&p)? - center) / h
            } else if down {
                p[i] = xi - h;
                (center - f(&p)?) / h
            } else {
                return Err(Error::arg(format!(
                    "step {h} does not fit inside [-1, 1] at coordinate {i}"
                )));
            }
        };
        p[i] = xi;
        grad.push(g);
    }
    Ok(grad)
}

/// Replaces a model's gradient with finite differences of its value.
pub struct FdGradientModel<M> {
    inner: M,
    step: f64,
}

impl<M: ModelFunction> FdGradientModel<M> {
    pub fn new(inner: M, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::arg(format!(
                "finite-difference step must be positive, got {step}"
            )));
        }
        Ok(Self { inner, step })
    }
}

impl<M: ModelFunction> ModelFunction for FdGradientModel<M> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn space(&self) -> &ParameterSpace {
        self.inner.space()
    }

    fn value(&self, xi: &[f64]) -> Result<f64> {
        self.inner.value(xi)
    }

    fn gradient(&self, xi: &[f64]) -> Result<Vec<f64>> {
        finite_difference_gradient(|x| self.inner.value(x), xi, self.step)
    }
}

/// Appends a parameter the model ignores.
pub struct InertExtension<M> {
    inner: M,
    space: ParameterSpace,
}

impl<M: ModelFunction> InertExtension<M> {
    pub fn new(inner: M, extra: Parameter) -> Result<Self> {
        let space = inner.space().with_parameter(extra)?;
        Ok(Self { inner, space })
    }
}

impl<M: ModelFunction> ModelFunction for InertExtension<M> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn space(&self) -> &ParameterSpace {
        &self.space
    }

    fn value(&self, xi: &[f64]) -> Result<f64> {
        self.space.check_len(xi.len())?;
        self.inner.value(&xi[..xi.len() - 1])
    }

    fn gradient(&self, xi: &[f64]) -> Result<Vec<f64>> {
        self.space.check_len(xi.len())?;
        let mut g = self.inner.gradient(&xi[..xi.len() - 1])?;
        g.push(0.0);
        Ok(g)
    }
}

/// Adds `offset` to one gradient component. Used to exercise gradient audits.
pub struct CorruptGradient<M> {
    inner: M,
    component: usize,
    offset: f64,
}

impl<M: ModelFunction> CorruptGradient<M> {
    pub fn new(inner: M, component: usize, offset: f64) -> Result<Self> {
        if component >= inner.dim() {
            return Err(Error::arg(format!(
                "component {component} out of range for {} parameters",
                inner.dim()
            )));
        }
        Ok(Self {
            inner,
            component,
            offset,
        })
    }
}

impl<M: ModelFunction> ModelFunction for CorruptGradient<M> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn space(&self) -> &ParameterSpace {
        self.inner.space()
    }

    fn value(&self, xi: &[f64]) -> Result<f64> {
        self.inner.value(xi)
    }

    fn gradient(&self, xi: &[f64]) -> Result<Vec<f64>> {
        let mut g = self.inner.gradient(xi)?;
        g[self.component] += self.offset;
        Ok(g)
    }
}

impl<T: ModelFunction + ?Sized> ModelFunction for Box<T> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn space(&self) -> &ParameterSpace {
        (**self).space()
    }

    fn value(&self, xi: &[f64]) -> Result<f64> {
        (**self).value(xi)
    }

    fn gradient(&self, xi: &[f64]) -> Result<Vec<f64>> {
        (**self).gradient(xi)
    }
}

impl<T: ModelFunction + ?Sized> ModelFunction for &T {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn space(&self) -> &ParameterSpace {
        (**self).space()
    }

    fn value(&self, xi: &[f64]) -> Result<f64> {
        (**self).value(xi)
    }

    fn gradient(&self, xi: &[f64]) -> Result<Vec<f64>> {
        (**self).gradient(xi)
    }
}
