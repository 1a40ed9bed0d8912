//! Closed-form Hartmann duct flow: average velocity and induced field.
//!
//! With `Ha = B0 l / sqrt(eta mu)`:
//!
//! ```text
//! u_avg = -(dp/dx) (eta / B0^2) (1 - Ha coth Ha)
//! B_ind =  (dp/dx) (l mu0 / (2 B0)) (1 - (2 / Ha) tanh(Ha / 2))
//! ```
//!
//! Both brackets lose all precision as `Ha -> 0`, so they are evaluated as
//! power series below [`SERIES_SWITCH`] and in closed form above it. The
//! velocity is carried as `-(dp/dx) l^2 / mu * psi(Ha)` with
//! `psi(h) = (1 - h coth h) / h^2`, which is smooth at zero.

use super::space::ParameterSpace;
use super::ModelFunction;
use crate::{Error, Result};

/// Parameter names, in coordinate order.
pub const HARTMANN_PARAMS: [&str; 5] = ["mu", "rho", "dpdx", "eta", "B0"];

/// Below this Hartmann number the brackets use their Taylor series.
pub const SERIES_SWITCH: f64 = 1.0;

/// Taylor coefficients of `x coth x = sum_k c_k x^(2k)`,
/// `c_k = 2^(2k) B_(2k) / (2k)!`.
#[allow(clippy::excessive_precision)]
const COTH_SERIES: [f64; 22] = [
    1.0,
    0.333_333_333_333_333_333_33,
    -0.022_222_222_222_222_222_222,
    0.002_116_402_116_402_116_402_1,
    -0.000_211_640_211_640_211_640_21,
    0.000_021_377_799_155_576_933_355,
    -2.164_404_280_806_397_208_5e-6,
    2.192_594_785_187_377_78e-7,
    -2.221_460_878_997_967_907_6e-8,
    2.250_784_651_680_899_285_4e-9,
    -2.280_515_120_459_218_286_6e-10,
    2.310_643_259_900_262_409_7e-11,
    -2.341_170_681_982_488_395_9e-12,
    2.372_101_740_023_365_429_5e-13,
    -2.403_441_533_330_770_617_9e-14,
    2.435_195_402_918_336_873_1e-15,
    -2.467_368_804_517_207_470_6e-16,
    2.499_967_277_122_080_898e-17,
    -2.532_996_435_740_634_831_5e-18,
    2.566_461_970_282_628_661_1e-19,
    -2.600_369_646_013_727_358_9e-20,
    2.634_725_304_415_380_134_2e-21,
];

/// Horner evaluation of `sum_{k >= 2} coef(k) * z^(k-1)`.
fn series_tail(z: f64, coef: impl Fn(usize) -> f64) -> f64 {
    (2..COTH_SERIES.len())
        .rev()
        .fold(0.0, |acc, k| acc * z + coef(k))
        * z
}

/// `(psi(h), h psi'(h))` for `psi(h) = (1 - h coth h) / h^2`.
pub(crate) fn coth_bracket(h: f64) -> (f64, f64) {
    if h < SERIES_SWITCH {
        let z = h * h;
        // psi = -sum_{k>=1} c_k h^(2k-2);  h psi' = -sum_{k>=2} (2k-2) c_k h^(2k-2)
        let psi = -COTH_SERIES[1] - series_tail(z, |k| COTH_SERIES[k]);
        let h_dpsi = -series_tail(z, |k| (2 * k - 2) as f64 * COTH_SERIES[k]);
        (psi, h_dpsi)
    } else {
        let h_coth = h / h.tanh();
        let csch = 1.0 / h.sinh();
        let z = h * h;
        ((1.0 - h_coth) / z, (h_coth + z * csch * csch - 2.0) / z)
    }
}

/// `(theta(h), h theta'(h))` for `theta(h) = 1 - tanh(h/2) / (h/2)`.
pub(crate) fn tanh_bracket(h: f64) -> (f64, f64) {
    if h < SERIES_SWITCH {
        // tanh(x)/x = sum_{k>=1} c_k (4^k - 1) x^(2k-2) with x = h/2
        let a = |k: usize| COTH_SERIES[k] * (4.0 - 4f64.powi(1 - k as i32));
        let z = h * h;
        let theta = -series_tail(z, a);
        let h_dtheta = -series_tail(z, |k| (2 * k - 2) as f64 * a(k));
        (theta, h_dtheta)
    } else {
        let x = 0.5 * h;
        let t = x.tanh();
        let tau = t / x;
        (1.0 - tau, tau - (1.0 - t * t))
    }
}

/// Physical inputs of the Hartmann closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HartmannInputs {
    pub mu: f64,
    pub rho: f64,
    pub dpdx: f64,
    pub eta: f64,
    pub b0: f64,
}

impl HartmannInputs {
    pub fn from_slice(t: &[f64]) -> Result<Self> {
        let [mu, rho, dpdx, eta, b0] = <[f64; 5]>::try_from(t)
            .map_err(|_| Error::arg(format!("Hartmann model needs 5 inputs, got {}", t.len())))?;
        Ok(Self {
            mu,
            rho,
            dpdx,
            eta,
            b0,
        })
    }

    pub fn to_array(self) -> [f64; 5] {
        [self.mu, self.rho, self.dpdx, self.eta, self.b0]
    }

    fn validate(&self, c: &HartmannConstants) -> Result<()> {
        for (name, v) in HARTMANN_PARAMS.iter().zip(self.to_array()) {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        for (name, v) in [("l", c.length), ("mu0", c.mu0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Quantities held fixed in the Hartmann study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HartmannConstants {
    /// Channel half-width `l`.
    pub length: f64,
    /// Magnetic permeability `mu0`.
    pub mu0: f64,
}

impl Default for HartmannConstants {
    fn default() -> Self {
        Self {
            length: 1.0,
            mu0: 1.0,
        }
    }
}

impl HartmannConstants {
    pub fn from_space(space: &ParameterSpace) -> Self {
        let d = Self::default();
        Self {
            length: space.constant("l").unwrap_or(d.length),
            mu0: space.constant("mu0").unwrap_or(d.mu0),
        }
    }
}

pub fn hartmann_number(x: &HartmannInputs, length: f64) -> f64 {
    x.b0 * length / (x.eta * x.mu).sqrt()
}

pub fn hartmann_u_avg(x: &HartmannInputs, c: &HartmannConstants) -> Result<f64> {
    x.validate(c)?;
    let (psi, _) = coth_bracket(hartmann_number(x, c.length));
    Ok(-x.dpdx * c.length * c.length / x.mu * psi)
}

pub fn hartmann_b_ind(x: &HartmannInputs, c: &HartmannConstants) -> Result<f64> {
    x.validate(c)?;
    let (theta, _) = tanh_bracket(hartmann_number(x, c.length));
    Ok(x.dpdx * c.length * c.mu0 / (2.0 * x.b0) * theta)
}

/// Gradient of `u_avg` with respect to `ln(mu, rho, dpdx, eta, B0)`.
pub fn u_avg_log_gradient(x: &HartmannInputs, c: &HartmannConstants) -> Result<[f64; 5]> {
    x.validate(c)?;
    let prefactor = -x.dpdx * c.length * c.length / x.mu;
    let (psi, h_dpsi) = coth_bracket(hartmann_number(x, c.length));
    let u = prefactor * psi;
    let d = prefactor * h_dpsi;
    Ok([-u - 0.5 * d, 0.0, u, -0.5 * d, d])
}

/// Gradient of `B_ind` with respect to `ln(mu, rho, dpdx, eta, B0)`.
pub fn b_ind_log_gradient(x: &HartmannInputs, c: &HartmannConstants) -> Result<[f64; 5]> {
    x.validate(c)?;
    let prefactor = x.dpdx * c.length * c.mu0 / (2.0 * x.b0);
    let (theta, h_dtheta) = tanh_bracket(hartmann_number(x, c.length));
    let b = prefactor * theta;
    let e = prefactor * h_dtheta;
    Ok([-0.5 * e, 0.0, b, -0.5 * e, e - b])
}

/// `u*_avg = -dP* (Re / Ha^2) (1 - Ha coth Ha)`.
pub fn dimensionless_u_avg(re: f64, ha: f64, dp_star: f64) -> Result<f64> {
    check_groups(re, ha)?;
    Ok(-dp_star * re * coth_bracket(ha).0)
}

/// `B*_ind = dP* (Re / Ha) mu0* (1 - (2 / Ha) tanh(Ha / 2))`.
pub fn dimensionless_b_ind(re: f64, ha: f64, dp_star: f64, mu0_star: f64) -> Result<f64> {
    check_groups(re, ha)?;
    Ok(dp_star * re / ha * mu0_star * tanh_bracket(ha).0)
}

fn check_groups(re: f64, ha: f64) -> Result<()> {
    if !(ha > 0.0 && ha.is_finite()) {
        return Err(Error::domain(format!(
            "Hartmann number must be positive, got {ha}"
        )));
    }
    if !(re > 0.0 && re.is_finite()) {
        return Err(Error::domain(format!(
            "Reynolds number must be positive, got {re}"
        )));
    }
    Ok(())
}

/// Characteristic scales used to report Pi groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicScales {
    pub velocity: f64,
    /// Defaults to `l * |dp/dx|` when unset.
    pub pressure: Option<f64>,
}

impl Default for CharacteristicScales {
    fn default() -> Self {
        Self {
            velocity: 1.0,
            pressure: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MhdPiValues {
    pub reynolds: f64,
    pub hartmann: f64,
    pub pressure: f64,
}

/// `Re = rho v l / mu`, `Ha = B l / sqrt(eta mu)`, `Pi3 = p / (rho v^2)`.
pub fn mhd_pi_values(
    x: &HartmannInputs,
    length: f64,
    scales: CharacteristicScales,
) -> Result<MhdPiValues> {
    x.validate(&HartmannConstants {
        length,
        ..Default::default()
    })?;
    let v = scales.velocity;
    let p = scales.pressure.unwrap_or(length * x.dpdx.abs());
    if !(v > 0.0 && v.is_finite() && p > 0.0 && p.is_finite()) {
        return Err(Error::domain(format!(
            "characteristic velocity and pressure must be positive, got v = {v}, p = {p}"
        )));
    }
    Ok(MhdPiValues {
        reynolds: x.rho * v * length / x.mu,
        hartmann: hartmann_number(x, length),
        pressure: p / (x.rho * v * v),
    })
}

/// Unitless inputs of the dimensionless closed forms for velocity scale `v`.
///
/// `mu0*` is the magnetic Reynolds number `mu0 v l / eta`, and fields are
/// measured in units of `sqrt(eta mu) / l` (the field at which `Ha = 1`).
/// With these choices `u_avg = v u*_avg` and `B_ind = field_scale B*_ind / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessInputs {
    pub reynolds: f64,
    pub hartmann: f64,
    pub pressure_gradient: f64,
    pub mu0_star: f64,
    pub field_scale: f64,
}

pub fn dimensionless_inputs(
    x: &HartmannInputs,
    c: &HartmannConstants,
    velocity: f64,
) -> Result<DimensionlessInputs> {
    let pi = mhd_pi_values(
        x,
        c.length,
        CharacteristicScales {
            velocity,
            pressure: Some(c.length * x.dpdx),
        },
    )?;
    Ok(DimensionlessInputs {
        reynolds: pi.reynolds,
        hartmann: pi.hartmann,
        pressure_gradient: pi.pressure,
        mu0_star: c.mu0 * velocity * c.length / x.eta,
        field_scale: (x.eta * x.mu).sqrt() / c.length,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HartmannQoi {
    AverageVelocity,
    InducedField,
}

/// Hartmann closed form as a [`ModelFunction`] on normalized log coordinates.
#[derive(Debug, Clone)]
pub struct HartmannModel {
    qoi: HartmannQoi,
    space: ParameterSpace,
    constants: HartmannConstants,
}

impl HartmannModel {
    /// The space must list `mu, rho, dpdx, eta, B0` in that order; `l` and
    /// `mu0` are read from its constants (default 1).
    pub fn new(qoi: HartmannQoi, space: ParameterSpace) -> Result<Self> {
        if space.names() != HARTMANN_PARAMS {
            return Err(Error::Config(format!(
                "Hartmann model needs parameters {:?}, space has {:?}",
                HARTMANN_PARAMS,
                space.names()
            )));
        }
        let constants = HartmannConstants::from_space(&space);
        Ok(Self {
            qoi,
            space,
            constants,
        })
    }

    pub fn u_avg() -> Self {
        Self::new(HartmannQoi::AverageVelocity, ParameterSpace::hartmann()).expect("bundled space")
    }

    pub fn b_ind() -> Self {
        Self::new(HartmannQoi::InducedField, ParameterSpace::hartmann()).expect("bundled space")
    }

    pub fn qoi(&self) -> HartmannQoi {
        self.qoi
    }

    pub fn constants(&self) -> HartmannConstants {
        self.constants
    }

    fn inputs(&self, xi: &[f64]) -> Result<HartmannInputs> {
        self.space.check_normalized(xi)?;
        HartmannInputs::from_slice(&self.space.to_physical(xi))
    }

    pub fn physical_value(&self, x: &HartmannInputs) -> Result<f64> {
        match self.qoi {
            HartmannQoi::AverageVelocity => hartmann_u_avg(x, &self.constants),
            HartmannQoi::InducedField => hartmann_b_ind(x, &self.constants),
        }
    }

    pub fn log_gradient(&self, x: &HartmannInputs) -> Result<[f64; 5]> {
        match self.qoi {
            HartmannQoi::AverageVelocity => u_avg_log_gradient(x, &self.constants),
            HartmannQoi::InducedField => b_ind_log_gradient(x, &self.constants),
        }
    }

    /// Gradient with respect to the physical inputs themselves.
    pub fn physical_gradient(&self, x: &HartmannInputs) -> Result<[f64; 5]> {
        let g = self.log_gradient(x)?;
        let t = x.to_array();
        Ok(std::array::from_fn(|i| g[i] / t[i]))
    }
}

impl ModelFunction for HartmannModel {
    fn name(&self) -> &str {
        match self.qoi {
            HartmannQoi::AverageVelocity => "hartmann_u_avg",
            HartmannQoi::InducedField => "hartmann_b_ind",
        }
    }

    fn space(&self) -> &ParameterSpace {
        &self.space
    }

    fn value(&self, xi: &[f64]) -> Result<f64> {
        self.physical_value(&self.inputs(xi)?)
    }

    fn gradient(&self, xi: &[f64]) -> Result<Vec<f64>> {
        let g = self.log_gradient(&self.inputs(xi)?)?;
        Ok(self.space.log_to_normalized_gradient(&g))
    }
}
