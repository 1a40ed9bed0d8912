//! Dimension matrices, Pi groups and their exact audit.

use std::collections::HashSet;
use std::path::Path;

use num::Zero;
use serde::{Deserialize, Serialize};

use super::dimension::{BaseUnit, Dimension};
use super::matrix::{format_rational, rat, Rational, RationalMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Input,
    Output,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantitySpec {
    pub name: String,
    pub dimension: Dimension,
    pub role: Role,
}

impl QuantitySpec {
    pub fn input(name: impl Into<String>, units: &str) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            dimension: Dimension::parse(units)?,
            role: Role::Input,
        })
    }

    pub fn output(name: impl Into<String>, units: &str) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            dimension: Dimension::parse(units)?,
            role: Role::Output,
        })
    }
}

/// `D` (k x m) and `u` (k), restricted to the base units the system uses.
#[derive(Debug, Clone)]
pub struct DimensionMatrix {
    pub d: RationalMatrix,
    pub u: Vec<Rational>,
    pub base_units: Vec<BaseUnit>,
    pub input_names: Vec<String>,
    pub output_name: String,
}

impl DimensionMatrix {
    pub fn k(&self) -> usize {
        self.d.nrows()
    }

    pub fn m(&self) -> usize {
        self.d.ncols()
    }

    pub fn base_unit_labels(&self) -> Vec<&'static str> {
        self.base_units.iter().map(|u| u.label()).collect()
    }
}

pub fn build_dimension_matrix(
    inputs: &[QuantitySpec],
    output: &QuantitySpec,
) -> Result<DimensionMatrix> {
    if inputs.is_empty() {
        return Err(Error::arg("a quantity system needs at least one input"));
    }
    if let Some(q) = inputs.iter().find(|q| q.role != Role::Input) {
        return Err(Error::arg(format!(
            "`{}` is not declared as an input",
            q.name
        )));
    }
    if output.role != Role::Output {
        return Err(Error::arg(format!(
            "`{}` is not declared as an output",
            output.name
        )));
    }
    let mut seen = HashSet::new();
    for name in inputs
        .iter()
        .chain(std::iter::once(output))
        .map(|q| &q.name)
    {
        if !seen.insert(name.as_str()) {
            return Err(Error::arg(format!("duplicate quantity name `{name}`")));
        }
    }

    let base_units: Vec<BaseUnit> = BaseUnit::ALL
        .into_iter()
        .filter(|b| {
            inputs
                .iter()
                .chain(std::iter::once(output))
                .any(|q| !q.dimension.exponent(*b).is_zero())
        })
        .collect();

    let rows: Vec<Vec<Rational>> = base_units
        .iter()
        .map(|b| {
            inputs
                .iter()
                .map(|q| q.dimension.exponent(*b).clone())
                .collect()
        })
        .collect();
    let mut d = RationalMatrix::from_rows(&rows);
    if rows.is_empty() {
        d = RationalMatrix::zeros(0, inputs.len());
    }
    let u: Vec<Rational> = base_units
        .iter()
        .map(|b| output.dimension.exponent(*b).clone())
        .collect();

    let rank = d.rank();
    let augmented = d.hstack(&RationalMatrix::from_columns(
        base_units.len(),
        std::slice::from_ref(&u),
    ));
    if augmented.rank() > rank {
        return Err(Error::NotExpressible);
    }
    if rank < base_units.len() {
        return Err(Error::DegenerateUnits {
            rank,
            rows: base_units.len(),
        });
    }

    Ok(DimensionMatrix {
        d,
        u,
        base_units,
        input_names: inputs.iter().map(|q| q.name.clone()).collect(),
        output_name: output.name.clone(),
    })
}

/// Canonical RREF nullspace basis of `d`.
pub fn rational_nullspace(d: &RationalMatrix) -> RationalMatrix {
    d.nullspace()
}

/// Particular solution of `D v = u` with the free variables at zero.
pub fn solve_particular(d: &RationalMatrix, u: &[Rational]) -> Result<Vec<Rational>> {
    d.solve_particular(u).ok_or(Error::NotExpressible)
}

/// Unitless output group `Pi = y * prod x_i^(-v_i)` and input groups
/// `Pi_j = prod x_i^(U_ij)`.
#[derive(Debug, Clone)]
pub struct PiGroupSet {
    pub v: Vec<Rational>,
    pub u: RationalMatrix,
    pub input_names: Vec<String>,
    pub output_name: String,
    pub output_group: String,
    pub input_groups: Vec<String>,
}

impl PiGroupSet {
    /// Number of unitless input groups.
    pub fn n(&self) -> usize {
        self.u.ncols()
    }

    pub fn m(&self) -> usize {
        self.v.len()
    }

    /// Exponents of the output group over `[inputs..., output]`.
    pub fn output_exponents(&self) -> Vec<Rational> {
        let mut e: Vec<Rational> = self.v.iter().map(|x| -x.clone()).collect();
        e.push(rat(1));
        e
    }

    /// Dimension of input group `j`, computed from the declared quantities.
    pub fn group_dimension(&self, j: usize, inputs: &[QuantitySpec]) -> Dimension {
        inputs
            .iter()
            .enumerate()
            .fold(Dimension::unitless(), |acc, (i, q)| {
                &acc + &q.dimension.pow(&self.u[(i, j)])
            })
    }

    pub fn output_group_dimension(
        &self,
        inputs: &[QuantitySpec],
        output: &QuantitySpec,
    ) -> Dimension {
        inputs
            .iter()
            .zip(&self.v)
            .fold(output.dimension.clone(), |acc, (q, v)| {
                &acc - &q.dimension.pow(v)
            })
    }
}

fn render_factor(name: &str, e: &Rational) -> Option<String> {
    if e.is_zero() {
        None
    } else if e == &rat(1) {
        Some(name.to_string())
    } else {
        Some(format!("{name}^{}", format_rational(e)))
    }
}

fn render_product(factors: impl Iterator<Item = Option<String>>) -> String {
    let parts: Vec<String> = factors.flatten().collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

pub fn pi_groups(inputs: &[QuantitySpec], output: &QuantitySpec) -> Result<PiGroupSet> {
    let dm = build_dimension_matrix(inputs, output)?;
    pi_groups_from_matrix(&dm)
}

pub fn pi_groups_from_matrix(dm: &DimensionMatrix) -> Result<PiGroupSet> {
    let v = solve_particular(&dm.d, &dm.u)?;
    let u = rational_nullspace(&dm.d);

    let output_group = render_product(
        std::iter::once(render_factor(&dm.output_name, &rat(1))).chain(
            dm.input_names
                .iter()
                .zip(&v)
                .map(|(name, e)| render_factor(name, &-e.clone())),
        ),
    );
    let input_groups = (0..u.ncols())
        .map(|j| {
            render_product(
                dm.input_names
                    .iter()
                    .enumerate()
                    .map(|(i, name)| render_factor(name, &u[(i, j)])),
            )
        })
        .collect();

    Ok(PiGroupSet {
        v,
        u,
        input_names: dm.input_names.clone(),
        output_name: dm.output_name.clone(),
        output_group,
        input_groups,
    })
}

/// Result of re-checking a Pi group set in exact arithmetic.
#[derive(Debug, Clone, Serialize)]
pub struct PiAudit {
    pub particular_ok: bool,
    pub nullspace_ok: bool,
    pub independence_ok: bool,
    pub count_ok: bool,
    /// Human-readable description of every failed identity.
    pub failures: Vec<String>,
}

impl PiAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_pi_groups(set: &PiGroupSet, d: &RationalMatrix, u: &[Rational]) -> PiAudit {
    let mut failures = Vec::new();
    let labels = |i: usize| format!("row {i}");

    let shapes_ok = set.v.len() == d.ncols() && set.u.nrows() == d.ncols() && u.len() == d.nrows();
    if !shapes_ok {
        failures.push(format!(
            "shape mismatch: D is {}x{}, u has {}, v has {}, U is {}x{}",
            d.nrows(),
            d.ncols(),
            u.len(),
            set.v.len(),
            set.u.nrows(),
            set.u.ncols()
        ));
        return PiAudit {
            particular_ok: false,
            nullspace_ok: false,
            independence_ok: false,
            count_ok: false,
            failures,
        };
    }

    let dv = d.mul_vec(&set.v);
    let mut particular_ok = true;
    for (i, (lhs, rhs)) in dv.iter().zip(u).enumerate() {
        if lhs != rhs {
            particular_ok = false;
            failures.push(format!(
                "D v = u fails in {}: {} != {}",
                labels(i),
                format_rational(lhs),
                format_rational(rhs)
            ));
        }
    }

    let du = d.mul(&set.u);
    let mut nullspace_ok = true;
    for i in 0..du.nrows() {
        for j in 0..du.ncols() {
            if !du[(i, j)].is_zero() {
                nullspace_ok = false;
                failures.push(format!(
                    "D U = 0 fails at ({i}, {j}): {}",
                    format_rational(&du[(i, j)])
                ));
            }
        }
    }

    let rank_u = set.u.rank();
    let independence_ok = rank_u == set.u.ncols();
    if !independence_ok {
        failures.push(format!(
            "columns of U are dependent: rank {rank_u} < {}",
            set.u.ncols()
        ));
    }

    let expected_n = d.ncols() - d.rank();
    let count_ok = set.u.ncols() == expected_n;
    if !count_ok {
        failures.push(format!(
            "U has {} columns, expected m - rank(D) = {expected_n}",
            set.u.ncols()
        ));
    }

    PiAudit {
        particular_ok,
        nullspace_ok,
        independence_ok,
        count_ok,
        failures,
    }
}

/// On-disk quantity-system definition.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantitySystemFile {
    pub inputs: Vec<QuantityEntry>,
    pub output: QuantityEntry,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuantityEntry {
    pub name: String,
    pub units: String,
}

/// Parsed quantity system: declared inputs and the output.
#[derive(Debug, Clone)]
pub struct QuantitySystem {
    pub inputs: Vec<QuantitySpec>,
    pub output: QuantitySpec,
}

impl QuantitySystem {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: QuantitySystemFile = serde_json::from_str(text)?;
        Self::from_file_repr(&file)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn from_file_repr(file: &QuantitySystemFile) -> Result<Self> {
        let inputs = file
            .inputs
            .iter()
            .map(|q| QuantitySpec::input(&q.name, &q.units))
            .collect::<Result<Vec<_>>>()?;
        let output = QuantitySpec::output(&file.output.name, &file.output.units)?;
        Ok(Self { inputs, output })
    }

    pub fn dimension_matrix(&self) -> Result<DimensionMatrix> {
        build_dimension_matrix(&self.inputs, &self.output)
    }

    pub fn pi_groups(&self) -> Result<PiGroupSet> {
        pi_groups(&self.inputs, &self.output)
    }

    /// The seven-input MHD system with the average velocity as output.
    pub fn mhd_velocity() -> Self {
        Self::from_json_str(include_str!("../../fixtures/mhd_u_avg.json"))
            .expect("bundled MHD system parses")
    }

    /// The seven-input MHD system with the induced magnetic field as output.
    pub fn mhd_induced_field() -> Self {
        Self::from_json_str(include_str!("../../fixtures/mhd_b_ind.json"))
            .expect("bundled MHD system parses")
    }

    /// Pendulum period from length and gravity.
    pub fn pendulum() -> Self {
        Self::from_json_str(include_str!("../../fixtures/pendulum.json"))
            .expect("bundled pendulum system parses")
    }

    /// MHD induced-field system with the vacuum permeability as an eighth input.
    pub fn mhd_induced_field_with_permeability() -> Self {
        Self::from_json_str(include_str!("../../fixtures/mhd_b_ind_mu0.json"))
            .expect("bundled MHD system parses")
    }
}

/// Serializable Pi-group report with exact rationals as `"p/q"` strings.
#[derive(Debug, Clone, Serialize)]
pub struct PiReport {
    pub inputs: Vec<String>,
    pub output: String,
    pub base_units: Vec<String>,
    pub m: usize,
    pub k: usize,
    pub n: usize,
    pub d: Vec<Vec<String>>,
    pub u: Vec<String>,
    pub v: Vec<String>,
    /// Nullspace basis, one entry per column (group).
    pub nullspace: Vec<Vec<String>>,
    pub output_group: String,
    pub input_groups: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<PiAudit>,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

impl PiReport {
    pub fn new(dm: &DimensionMatrix, set: &PiGroupSet, audit: Option<PiAudit>) -> Self {
        Self {
            inputs: dm.input_names.clone(),
            output: dm.output_name.clone(),
            base_units: dm
                .base_unit_labels()
                .iter()
                .map(|s| s.to_string())
                .collect(),
            m: dm.m(),
            k: dm.k(),
            n: set.n(),
            d: (0..dm.k()).map(|i| strings(dm.d.row(i))).collect(),
            u: strings(&dm.u),
            v: strings(&set.v),
            nullspace: set.u.columns().iter().map(|c| strings(c)).collect(),
            output_group: set.output_group.clone(),
            input_groups: set.input_groups.clone(),
            audit,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "inputs: {}\noutput: {}\n",
            self.inputs.join(", "),
            self.output
        ));
        s.push_str(&format!(
            "m = {}, k = {} (base units: {}), n = m - k = {}\n\n",
            self.m,
            self.k,
            self.base_units.join(", "),
            self.n
        ));
        s.push_str("D (rows = base units, columns = inputs):\n");
        for (label, row) in self.base_units.iter().zip(&self.d) {
            s.push_str(&format!("  {label:>5} [{}]\n", row.join(", ")));
        }
        s.push_str(&format!(
            "u = [{}]\nv = [{}]\n\n",
            self.u.join(", "),
            self.v.join(", ")
        ));
        s.push_str(&format!("Pi = {}\n", self.output_group));
        for (j, g) in self.input_groups.iter().enumerate() {
            s.push_str(&format!("Pi_{} = {}\n", j + 1, g));
        }
        if let Some(audit) = &self.audit {
            s.push('\n');
            if audit.passed() {
                s.push_str("audit: D v = u, D U = 0, rank(U) = n all hold exactly\n");
            } else {
                s.push_str("audit FAILED:\n");
                for f in &audit.failures {
                    s.push_str(&format!("  {f}\n"));
                }
            }
        }
        s
    }
}
