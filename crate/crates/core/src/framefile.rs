//! On-disk frame format.
//!
//! A frame file is a JSON document. Matrices are row-major nested arrays;
//! real-field entries are numbers and complex-field entries are `[re, im]`
//! pairs. Every float is written with 17 significant digits so a reload is
//! bit-exact.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::gframe::{FrameError, GFrame};
use crate::gfusion::{FusionComponent, GFusionFrame};
use crate::linops::{Field, LinTol, Operator, Scalar};
use crate::verify::LoadedFrame;

pub const FRAME_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FrameFileError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed frame file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid frame file: {0}")]
    Invalid(String),
    #[error("frame file does not describe a valid frame: {0}")]
    Frame(#[from] FrameError),
}

pub type Result<T> = std::result::Result<T, FrameFileError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrameKind {
    Gframe,
    Gfusion,
}

/// Matrix entry: a bare number in real files, an `[re, im]` pair in complex ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

pub type Matrix = Vec<Vec<Entry>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentRecord {
    pub lambda: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Matrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameFile {
    pub format_version: u32,
    pub field: Field,
    pub dim_h: usize,
    pub kind: FrameKind,
    pub components: Vec<ComponentRecord>,
}

fn encode(field: Field, op: &Operator) -> Matrix {
    (0..op.rows())
        .map(|i| {
            (0..op.cols())
                .map(|j| {
                    let z = op.entry(i, j);
                    match field {
                        Field::Real => Entry::Real(z.re),
                        Field::Complex => Entry::Complex([z.re, z.im]),
                    }
                })
                .collect()
        })
        .collect()
}

fn decode(field: Field, m: &Matrix, what: &str) -> Result<Operator> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(FrameFileError::Invalid(format!("{what} is an empty matrix")));
    }
    if m.iter().any(|r| r.len() != cols) {
        return Err(FrameFileError::Invalid(format!("{what} has ragged rows")));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for row in m {
        for e in row {
            let z = match (field, e) {
                (Field::Real, Entry::Real(x)) => Scalar::new(*x, 0.0),
                (Field::Complex, Entry::Complex([re, im])) => Scalar::new(*re, *im),
                (Field::Real, Entry::Complex(_)) => {
                    return Err(FrameFileError::Invalid(format!(
                        "{what} has a complex entry in a real frame"
                    )))
                }
                (Field::Complex, Entry::Real(_)) => {
                    return Err(FrameFileError::Invalid(format!(
                        "{what} has a bare number in a complex frame; use [re, im]"
                    )))
                }
            };
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(FrameFileError::Invalid(format!("{what} has a non-finite entry")));
            }
            entries.push(z);
        }
    }
    Operator::new(field, DMatrix::from_row_slice(rows, cols, &entries))
        .map_err(|e| FrameFileError::Frame(e.into()))
}

impl FrameFile {
    pub fn from_gframe(g: &GFrame) -> Self {
        FrameFile {
            format_version: FRAME_FORMAT_VERSION,
            field: g.field(),
            dim_h: g.dim_h(),
            kind: FrameKind::Gframe,
            components: g
                .blocks()
                .iter()
                .map(|b| ComponentRecord {
                    lambda: encode(g.field(), b),
                    basis: None,
                    weight: None,
                })
                .collect(),
        }
    }

    pub fn from_gfusion(f: &GFusionFrame) -> Self {
        FrameFile {
            format_version: FRAME_FORMAT_VERSION,
            field: f.field(),
            dim_h: f.dim_h(),
            kind: FrameKind::Gfusion,
            components: f
                .components()
                .iter()
                .map(|c| ComponentRecord {
                    lambda: encode(f.field(), c.lambda()),
                    basis: Some(encode(f.field(), c.basis())),
                    weight: Some(c.weight()),
                })
                .collect(),
        }
    }

    pub fn from_frame(frame: &LoadedFrame) -> Self {
        match frame {
            LoadedFrame::GFrame(g) => FrameFile::from_gframe(g),
            LoadedFrame::GFusion(f) => FrameFile::from_gfusion(f),
        }
    }

    /// Builds the frame, validating shapes, weights and orthonormality.
    pub fn to_frame(&self, tol: &LinTol) -> Result<LoadedFrame> {
        if self.format_version != FRAME_FORMAT_VERSION {
            return Err(FrameFileError::Invalid(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        if self.components.is_empty() {
            return Err(FrameFileError::Invalid("no components".into()));
        }
        let mut lambdas = Vec::with_capacity(self.components.len());
        for (j, c) in self.components.iter().enumerate() {
            let lambda = decode(self.field, &c.lambda, &format!("component {j} lambda"))?;
            if lambda.cols() != self.dim_h {
                return Err(FrameFileError::Invalid(format!(
                    "component {j} lambda has {} columns, expected dim_h = {}",
                    lambda.cols(),
                    self.dim_h
                )));
            }
            lambdas.push(lambda);
        }
        match self.kind {
            FrameKind::Gframe => {
                if self.components.iter().any(|c| c.basis.is_some() || c.weight.is_some()) {
                    return Err(FrameFileError::Invalid(
                        "basis and weight are only allowed in gfusion files".into(),
                    ));
                }
                Ok(LoadedFrame::GFrame(GFrame::new(lambdas, *tol)?))
            }
            FrameKind::Gfusion => {
                let mut comps = Vec::with_capacity(lambdas.len());
                for (j, (c, lambda)) in self.components.iter().zip(lambdas).enumerate() {
                    let basis = c.basis.as_ref().ok_or_else(|| {
                        FrameFileError::Invalid(format!("component {j} has no basis"))
                    })?;
                    let basis = decode(self.field, basis, &format!("component {j} basis"))?;
                    let weight = c.weight.ok_or_else(|| {
                        FrameFileError::Invalid(format!("component {j} has no weight"))
                    })?;
                    comps.push(FusionComponent::new(basis, lambda, weight, tol)?);
                }
                Ok(LoadedFrame::GFusion(GFusionFrame::new(comps, *tol)?))
            }
        }
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("frame file serializes");
        let mut out = String::new();
        write_value(&mut out, &value, 0);
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|source| FrameFileError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| FrameFileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        FrameFile::from_json(&text)
    }
}

/// Reads and builds a frame in one step.
pub fn load_frame(path: &Path, tol: &LinTol) -> Result<LoadedFrame> {
    FrameFile::load(path)?.to_frame(tol)
}

/// Float with 17 significant digits, which always round-trips.
pub(crate) fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn is_flat(items: &[Value]) -> bool {
    items.iter().all(|v| match v {
        Value::Array(a) => a.iter().all(|x| !x.is_array() && !x.is_object()),
        Value::Object(_) => false,
        _ => true,
    })
}

fn write_inline(out: &mut String, v: &Value) {
    match v {
        Value::Array(items) => {
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str(", ");
                }
                write_inline(out, item);
            }
            out.push(']');
        }
        other => write_scalar(out, other),
    }
}

fn write_scalar(out: &mut String, v: &Value) {
    match v {
        Value::Number(n) if n.is_f64() => out.push_str(&format_f64(n.as_f64().unwrap())),
        other => {
            let _ = write!(out, "{other}");
        }
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth + 1);
    let close = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", Value::String(key.clone()));
                write_value(out, item, depth + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{close}}}");
        }
        // Matrix rows (arrays of scalars or of [re, im] pairs) stay on one line.
        Value::Array(items) if is_flat(items) => write_inline(out, v),
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_value(out, item, depth + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            let _ = write!(out, "{close}]");
        }
        other => write_scalar(out, other),
    }
}
