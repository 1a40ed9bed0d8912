//! Log-uniform parameter spaces and the affine map to `[-1, 1]^m`.
//!
//! A physical value `t > 0` maps to `s = ln t` and then to
//! `xi = (2 s - (ln hi + ln lo)) / (ln hi - ln lo)`. Gradients are stored in
//! `xi`; the chain-rule factor from `df/dt` is `t * (ln hi - ln lo) / 2`.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Parameter {
    pub name: String,
    pub low: f64,
    pub high: f64,
    pub log_lower: f64,
    pub log_upper: f64,
    /// Name of the matching input in a quantity system, when it differs.
    pub quantity: Option<String>,
}

impl Parameter {
    pub fn new(name: impl Into<String>, low: f64, high: f64) -> Result<Self> {
        let name = name.into();
        if !(low > 0.0 && high.is_finite() && low.is_finite()) {
            return Err(Error::arg(format!(
                "parameter `{name}`: bounds must be finite and positive, got [{low}, {high}]"
            )));
        }
        let (log_lower, log_upper) = (low.ln(), high.ln());
        if log_lower >= log_upper {
            return Err(Error::arg(format!(
                "parameter `{name}`: lower bound {low} must be below upper bound {high}"
            )));
        }
        Ok(Self {
            name,
            low,
            high,
            log_lower,
            log_upper,
            quantity: None,
        })
    }

    pub fn from_log_bounds(
        name: impl Into<String>,
        log_lower: f64,
        log_upper: f64,
    ) -> Result<Self> {
        let name = name.into();
        if !(log_lower.is_finite() && log_upper.is_finite() && log_lower < log_upper) {
            return Err(Error::arg(format!(
                "parameter `{name}`: invalid log bounds [{log_lower}, {log_upper}]"
            )));
        }
        Ok(Self {
            name,
            low: log_lower.exp(),
            high: log_upper.exp(),
            log_lower,
            log_upper,
            quantity: None,
        })
    }

    pub fn with_quantity(mut self, quantity: impl Into<String>) -> Self {
        self.quantity = Some(quantity.into());
        self
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.log_upper - self.log_lower)
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.log_upper + self.log_lower)
    }

    pub fn quantity_name(&self) -> &str {
        self.quantity.as_deref().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParameterSpace {
    pub name: String,
    params: Vec<Parameter>,
    pub constants: BTreeMap<String, f64>,
}

impl ParameterSpace {
    pub fn new(name: impl Into<String>, params: Vec<Parameter>) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::arg("parameter space needs at least one parameter"));
        }
        let mut seen = HashSet::new();
        for p in &params {
            if !seen.insert(p.name.as_str()) {
                return Err(Error::arg(format!("duplicate parameter name `{}`", p.name)));
            }
        }
        Ok(Self {
            name: name.into(),
            params,
            constants: BTreeMap::new(),
        })
    }

    /// `m` parameters `x1..xm` whose log-coordinates are already `[-1, 1]`.
    pub fn standard(m: usize) -> Self {
        let params = (1..=m)
            .map(|i| Parameter::from_log_bounds(format!("x{i}"), -1.0, 1.0).expect("valid bounds"))
            .collect();
        Self::new(format!("standard{m}"), params).expect("nonempty")
    }

    /// Hartmann problem operating ranges.
    pub fn hartmann() -> Self {
        SpaceConfig::from_json_str(include_str!("../../fixtures/hartmann_space.json"))
            .expect("bundled space parses")
            .space
    }

    /// Idealized MHD generator operating ranges.
    pub fn generator() -> Self {
        SpaceConfig::from_json_str(include_str!("../../fixtures/generator_space.json"))
            .expect("bundled space parses")
            .space
    }

    pub fn with_constant(mut self, name: impl Into<String>, value: f64) -> Self {
        self.constants.insert(name.into(), value);
        self
    }

    /// Copy with an extra parameter appended.
    pub fn with_parameter(&self, param: Parameter) -> Result<Self> {
        let mut params = self.params.clone();
        params.push(param);
        let mut out = Self::new(self.name.clone(), params)?;
        out.constants = self.constants.clone();
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[Parameter] {
        &self.params
    }

    pub fn names(&self) -> Vec<&str> {
        self.params.iter().map(|p| p.name.as_str()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p.name == name)
    }

    pub fn half_widths(&self) -> Vec<f64> {
        self.params.iter().map(Parameter::half_width).collect()
    }

    pub fn constant(&self, name: &str) -> Option<f64> {
        self.constants.get(name).copied()
    }

    pub fn to_physical(&self, xi: &[f64]) -> Vec<f64> {
        self.params
            .iter()
            .zip(xi)
            .map(|(p, x)| (p.center() + p.half_width() * x).exp())
            .collect()
    }

    pub fn to_normalized(&self, t: &[f64]) -> Result<Vec<f64>> {
        self.check_len(t.len())?;
        self.params
            .iter()
            .zip(t)
            .map(|(p, &v)| {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(Error::domain(format!(
                        "parameter `{}` must be positive and finite, got {v}",
                        p.name
                    )));
                }
                Ok((2.0 * v.ln() - (p.log_upper + p.log_lower)) / (p.log_upper - p.log_lower))
            })
            .collect()
    }

    /// `df/dxi` from `df/dt` at physical point `t`.
    pub fn physical_to_normalized_gradient(&self, t: &[f64], grad_t: &[f64]) -> Vec<f64> {
        self.params
            .iter()
            .zip(t.iter().zip(grad_t))
            .map(|(p, (t, g))| g * t * p.half_width())
            .collect()
    }

    /// `df/dt` from `df/dxi` at physical point `t`.
    pub fn normalized_to_physical_gradient(&self, t: &[f64], grad_xi: &[f64]) -> Vec<f64> {
        self.params
            .iter()
            .zip(t.iter().zip(grad_xi))
            .map(|(p, (t, g))| g / (t * p.half_width()))
            .collect()
    }

    /// `df/dxi` from the gradient with respect to `ln t`.
    pub fn log_to_normalized_gradient(&self, grad_log: &[f64]) -> Vec<f64> {
        self.params
            .iter()
            .zip(grad_log)
            .map(|(p, g)| g * p.half_width())
            .collect()
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::arg(format!(
                "expected {} coordinates for space `{}`, got {len}",
                self.dim(),
                self.name
            )));
        }
        Ok(())
    }

    pub fn check_normalized(&self, xi: &[f64]) -> Result<()> {
        self.check_len(xi.len())?;
        if let Some((i, x)) = xi
            .iter()
            .enumerate()
            .find(|(_, x)| x.is_nan() || x.abs() > 1.0 + 1e-12)
        {
            return Err(Error::domain(format!(
                "normalized coordinate {i} = {x} outside [-1, 1]"
            )));
        }
        Ok(())
    }

    /// Same parameter names and physical bounds (bitwise).
    pub fn same_parameters(&self, other: &ParameterSpace) -> bool {
        self.params.len() == other.params.len()
            && self.params.iter().zip(&other.params).all(|(a, b)| {
                a.name == b.name
                    && a.low.to_bits() == b.low.to_bits()
                    && a.high.to_bits() == b.high.to_bits()
            })
    }
}

/// Which model a space file asks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "hartmann_u_avg")]
    HartmannUAvg,
    #[serde(rename = "hartmann_b_ind")]
    HartmannBInd,
    #[serde(rename = "external")]
    External,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::HartmannUAvg => "hartmann_u_avg",
            ModelKind::HartmannBInd => "hartmann_b_ind",
            ModelKind::External => "external",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            ModelKind::HartmannUAvg,
            ModelKind::HartmannBInd,
            ModelKind::External,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamEntry {
    pub name: String,
    pub low: f64,
    pub high: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantity: Option<String>,
}

/// On-disk parameter-space file. Bounds are physical (linear) values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceFile {
    #[serde(default)]
    pub name: Option<String>,
    pub params: Vec<ParamEntry>,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
    #[serde(default)]
    pub model: Option<ModelKind>,
}

#[derive(Debug, Clone)]
pub struct SpaceConfig {
    pub space: ParameterSpace,
    pub model: Option<ModelKind>,
}

impl SpaceConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: SpaceFile = serde_json::from_str(text)?;
        let params = file
            .params
            .iter()
            .map(|p| {
                let param = Parameter::new(&p.name, p.low, p.high)?;
                Ok(match &p.quantity {
                    Some(q) => param.with_quantity(q),
                    None => param,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut space = ParameterSpace::new(file.name.unwrap_or_else(|| "custom".into()), params)?;
        space.constants = file.constants;
        Ok(Self {
            space,
            model: file.model,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }
}

impl ParameterSpace {
    pub fn to_file(&self, model: Option<ModelKind>) -> SpaceFile {
        SpaceFile {
            name: Some(self.name.clone()),
            params: self
                .params
                .iter()
                .map(|p| ParamEntry {
                    name: p.name.clone(),
                    low: p.low,
                    high: p.high,
                    quantity: p.quantity.clone(),
                })
                .collect(),
            constants: self.constants.clone(),
            model,
        }
    }
}
