//! Gradient-sample files: CSV preceded by a JSON header in `#` comment lines.
//!
//! ```text
//! # {"format_version":1,"m":2,"names":["a","b"],"bounds":[[0.1,1.0],[1.0,5.0]],
//! #  "coordinates":"normalized_log","model":"...","provenance":{...}}
//! x1,x2,f,g1,g2
//! -0.25,0.5,1.75,0.1,-2.0
//! ```
//!
//! All header lines are stripped of their leading `#` and concatenated before
//! JSON parsing. In `normalized_log` files `x` holds normalized coordinates
//! and `g` the gradient with respect to them; in `physical` files `x` holds
//! physical values and `g = df/dt`. Floats are written in shortest round-trip
//! form, so save followed by load is lossless.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::models::{EvaluationRecord, Parameter, ParameterSpace};
use crate::subspace::{GradientSampleSet, Provenance};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Coordinates {
    NormalizedLog,
    Physical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleFileHeader {
    pub format_version: u32,
    pub m: usize,
    pub names: Vec<String>,
    /// Physical `[low, high]` per parameter.
    pub bounds: Vec<[f64; 2]>,
    pub coordinates: Coordinates,
    pub model: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constants: BTreeMap<String, f64>,
    /// Quantity-system names of parameters whose names differ from them.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub quantities: BTreeMap<String, String>,
    pub provenance: Provenance,
}

impl SampleFileHeader {
    fn for_set(set: &GradientSampleSet, coordinates: Coordinates) -> Self {
        let space = &set.space;
        Self {
            format_version: FORMAT_VERSION,
            m: space.dim(),
            names: space.names().into_iter().map(String::from).collect(),
            bounds: space.params().iter().map(|p| [p.low, p.high]).collect(),
            coordinates,
            model: set.provenance.model.clone(),
            space: Some(space.name.clone()),
            constants: space.constants.clone(),
            quantities: space
                .params()
                .iter()
                .filter_map(|p| p.quantity.clone().map(|q| (p.name.clone(), q)))
                .collect(),
            provenance: set.provenance.clone(),
        }
    }

    /// Parameter space described by the header.
    pub fn space(&self) -> Result<ParameterSpace> {
        let params = self
            .names
            .iter()
            .zip(&self.bounds)
            .map(|(n, [lo, hi])| {
                let p = Parameter::new(n, *lo, *hi)?;
                Ok(match self.quantities.get(n) {
                    Some(q) => p.with_quantity(q),
                    None => p,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut space = ParameterSpace::new(
            self.space.clone().unwrap_or_else(|| "samples".into()),
            params,
        )?;
        space.constants = self.constants.clone();
        Ok(space)
    }
}

fn fmt(v: f64) -> String {
    format!("{v:?}")
}

/// Renders a sample set in the given coordinates.
pub fn render_samples(set: &GradientSampleSet, coordinates: Coordinates) -> Result<String> {
    let header = SampleFileHeader::for_set(set, coordinates);
    let m = set.dim();
    let mut out = format!("# {}\n", serde_json::to_string(&header)?);
    let cols: Vec<String> = (1..=m)
        .map(|i| format!("x{i}"))
        .chain(std::iter::once("f".to_string()))
        .chain((1..=m).map(|i| format!("g{i}")))
        .collect();
    out.push_str(&cols.join(","));
    out.push('\n');
    for r in &set.records {
        let (x, g) = match coordinates {
            Coordinates::NormalizedLog => (r.x_normalized.clone(), r.grad.clone()),
            Coordinates::Physical => (
                r.x_physical.clone(),
                set.space
                    .normalized_to_physical_gradient(&r.x_physical, &r.grad),
            ),
        };
        let cells: Vec<String> = x
            .iter()
            .chain(std::iter::once(&r.f))
            .chain(&g)
            .map(|v| fmt(*v))
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Writes `set` to a new file; existing files are never overwritten.
pub fn save_samples(set: &GradientSampleSet, path: impl AsRef<Path>) -> Result<()> {
    save_samples_as(set, path, Coordinates::NormalizedLog)
}

pub fn save_samples_as(
    set: &GradientSampleSet,
    path: impl AsRef<Path>,
    coordinates: Coordinates,
) -> Result<()> {
    let path = path.as_ref();
    let text = render_samples(set, coordinates)?;
    let mut file = OpenOptions::new()
        .write(true)
        .create_new(true)
        .open(path)
        .map_err(|e| {
            if e.kind() == std::io::ErrorKind::AlreadyExists {
                Error::SampleFile {
                    path: path.to_path_buf(),
                    message: "file exists; sample files are immutable snapshots".into(),
                }
            } else {
                Error::Io(e)
            }
        })?;
    file.write_all(text.as_bytes())?;
    Ok(())
}

/// Reads a sample file. When `expected` is given, the header's parameter
/// names and bounds must match it exactly.
pub fn load_samples(
    path: impl AsRef<Path>,
    expected: Option<&ParameterSpace>,
) -> Result<GradientSampleSet> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::SampleFile {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_samples(&text, path, expected)
}

pub fn parse_samples(
    text: &str,
    path: &Path,
    expected: Option<&ParameterSpace>,
) -> Result<GradientSampleSet> {
    let fail = |message: String| Error::SampleFile {
        path: path.to_path_buf(),
        message,
    };
    let mut header_json = String::new();
    let mut body_start = 0;
    for line in text.split_inclusive('\n') {
        match line.strip_prefix('#') {
            Some(rest) => {
                header_json.push_str(rest);
                body_start += line.len();
            }
            None => break,
        }
    }
    if header_json.trim().is_empty() {
        return Err(fail("missing `#` JSON header".into()));
    }
    let header: SampleFileHeader =
        serde_json::from_str(&header_json).map_err(|e| fail(format!("invalid header: {e}")))?;
    if header.format_version != FORMAT_VERSION {
        return Err(fail(format!(
            "unsupported format version {} (expected {FORMAT_VERSION})",
            header.format_version
        )));
    }
    let m = header.m;
    if header.names.len() != m || header.bounds.len() != m {
        return Err(fail(format!(
            "header declares m = {m} but lists {} names and {} bounds",
            header.names.len(),
            header.bounds.len()
        )));
    }
    let space = header
        .space()
        .map_err(|e| fail(format!("invalid header space: {e}")))?;
    if let Some(exp) = expected {
        if !space.same_parameters(exp) {
            return Err(fail(format!(
                "header parameters {:?} / bounds do not match the space `{}` ({:?})",
                header.names,
                exp.name,
                exp.names()
            )));
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(&text.as_bytes()[body_start..]);
    let expected_cols: Vec<String> = (1..=m)
        .map(|i| format!("x{i}"))
        .chain(std::iter::once("f".to_string()))
        .chain((1..=m).map(|i| format!("g{i}")))
        .collect();
    let cols: Vec<String> = reader
        .headers()?
        .iter()
        .map(|s| s.trim().to_string())
        .collect();
    if cols != expected_cols {
        return Err(fail(format!(
            "column header {:?} does not match expected {:?}",
            cols, expected_cols
        )));
    }

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row?;
        if row.len() != 2 * m + 1 {
            return Err(fail(format!(
                "data row {row_no} has {} fields, expected {}",
                row.len(),
                2 * m + 1
            )));
        }
        let vals = row
            .iter()
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .map_err(|_| fail(format!("data row {row_no}: cannot parse `{c}` as a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                path: path.to_path_buf(),
                row: row_no,
            });
        }
        let (x, rest) = vals.split_at(m);
        let (f, g) = (rest[0], &rest[1..]);
        let record = match header.coordinates {
            Coordinates::NormalizedLog => {
                space
                    .check_normalized(x)
                    .map_err(|e| fail(format!("data row {row_no}: {e}")))?;
                EvaluationRecord {
                    x_normalized: x.to_vec(),
                    x_physical: space.to_physical(x),
                    f,
                    grad: g.to_vec(),
                }
            }
            Coordinates::Physical => {
                let xi = space
                    .to_normalized(x)
                    .map_err(|e| fail(format!("data row {row_no}: {e}")))?;
                space
                    .check_normalized(&xi)
                    .map_err(|e| fail(format!("data row {row_no}: {e}")))?;
                EvaluationRecord {
                    grad: space.physical_to_normalized_gradient(x, g),
                    x_normalized: xi,
                    x_physical: x.to_vec(),
                    f,
                }
            }
        };
        records.push(record);
    }
    if records.is_empty() {
        return Err(fail("no data rows".into()));
    }
    let mut provenance = header.provenance.clone();
    if header.coordinates == Coordinates::Physical {
        provenance.converted_from_physical = true;
    }
    GradientSampleSet::new(space, records, provenance).map_err(|e| fail(e.to_string()))
}
