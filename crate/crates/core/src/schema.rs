//! JSON document formats for structures, immersions, and curves, plus the
//! sweep CSV writer.
//!
//! A structure is either a registry reference or an inline matrix pair:
//!
//! ```json
//! { "registry": "S1" }
//! { "dim": 4, "J": [[...], ...], "g": [[...], ...] }
//! ```
//!
//! An immersion document:
//!
//! ```json
//! {
//!   "name": "my-surface",
//!   "ambient": "S6",
//!   "variables": ["u", "v"],
//!   "constants": { "beta": 0.5 },
//!   "components": ["u", "v*cos(beta)", "v*sin(beta)", "0"],
//!   "domain": [[-1.0, 1.0], [-1.0, 1.0]],
//!   "jacobian": "fd"
//! }
//! ```
//!
//! A curve document:
//!
//! ```json
//! {
//!   "ambient": "S5",
//!   "variable": "s",
//!   "components": ["2*s", "s"],
//!   "domain": [-1.0, 1.0],
//!   "samples": 64
//! }
//! ```

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::curves::Curve;
use crate::error::{Error, Result};
use crate::immersion::Immersion;
use crate::semiriemann::Metric;
use crate::structure::{classify_structure, registry_get, CompatibleStructure};

/// Registry key or inline (J, g) pair.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ManifoldDoc {
    Registry {
        registry: String,
    },
    Inline {
        dim: usize,
        #[serde(rename = "J")]
        j: Vec<Vec<f64>>,
        g: Vec<Vec<f64>>,
    },
    Key(String),
}

impl ManifoldDoc {
    /// Validates and resolves into a structure. Errors name the violated
    /// invariant together with its residual.
    pub fn resolve(&self) -> Result<CompatibleStructure> {
        match self {
            ManifoldDoc::Registry { registry } | ManifoldDoc::Key(registry) => {
                Ok(registry_get(registry)?.structure)
            }
            ManifoldDoc::Inline { dim, j, g } => {
                let j = rows_to_matrix(*dim, j, "J")?;
                let g = Metric::new(rows_to_matrix(*dim, g, "g")?)?;
                classify_structure(j, g)
            }
        }
    }
}

fn rows_to_matrix(dim: usize, rows: &[Vec<f64>], what: &str) -> Result<DMatrix<f64>> {
    if rows.len() != dim {
        return Err(Error::InvalidInput(format!(
            "{what} has {} rows, expected {dim}",
            rows.len()
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::InvalidInput(format!(
                "{what} row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum JacobianSpec {
    /// `"fd"`: central differences with the default step.
    Tag(String),
    /// `{"fd": h}`: central differences with an explicit step.
    Step { fd: f64 },
}

/// Immersion JSON document.
#[derive(Debug, Clone, Deserialize)]
pub struct ImmersionDoc {
    pub name: String,
    pub ambient: ManifoldDoc,
    pub variables: Vec<String>,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
    pub components: Vec<String>,
    pub domain: Vec<[f64; 2]>,
    #[serde(default)]
    pub jacobian: Option<JacobianSpec>,
}

impl ImmersionDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(describe_json_error(text, &e)))
    }

    /// Builds the immersion and its ambient structure.
    pub fn build(&self) -> Result<(Immersion, CompatibleStructure)> {
        let structure = self.ambient.resolve()?;
        if self.components.len() != structure.dim() {
            return Err(Error::InvalidInput(format!(
                "immersion `{}` has {} components, ambient dimension is {}",
                self.name,
                self.components.len(),
                structure.dim()
            )));
        }
        let step = match &self.jacobian {
            None => None,
            Some(JacobianSpec::Tag(tag)) if tag == "fd" => None,
            Some(JacobianSpec::Tag(tag)) => {
                return Err(Error::InvalidInput(format!(
                    "unknown jacobian provider `{tag}` (expected \"fd\" or {{\"fd\": h}})"
                )))
            }
            Some(JacobianSpec::Step { fd }) => {
                if *fd <= 0.0 {
                    return Err(Error::InvalidInput(
                        "finite-difference step must be positive".into(),
                    ));
                }
                Some(*fd)
            }
        };
        let exprs: Vec<&str> = self.components.iter().map(|s| s.as_str()).collect();
        let imm = Immersion::from_expressions(
            self.name.clone(),
            self.variables.clone(),
            &exprs,
            self.domain.iter().map(|[lo, hi]| (*lo, *hi)).collect(),
            self.constants.clone(),
            step,
        )?;
        Ok((imm, structure))
    }
}

/// Curve JSON document.
#[derive(Debug, Clone, Deserialize)]
pub struct CurveDoc {
    pub ambient: ManifoldDoc,
    pub variable: String,
    pub components: Vec<String>,
    pub domain: [f64; 2],
    #[serde(default = "default_curve_samples")]
    pub samples: usize,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
}

fn default_curve_samples() -> usize {
    64
}

impl CurveDoc {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(describe_json_error(text, &e)))
    }

    pub fn build(&self) -> Result<(Curve, CompatibleStructure)> {
        let structure = self.ambient.resolve()?;
        let exprs: Vec<&str> = self.components.iter().map(|s| s.as_str()).collect();
        let curve = Curve::from_expressions(
            "curve",
            &self.variable,
            &exprs,
            self.constants.clone(),
            (self.domain[0], self.domain[1]),
            self.samples,
            None,
        )?;
        Ok((curve, structure))
    }
}

/// Converts serde_json's line/column into a byte offset in the source text.
pub fn describe_json_error(text: &str, err: &serde_json::Error) -> String {
    let (line, column) = (err.line(), err.column());
    let offset: usize = text
        .lines()
        .take(line.saturating_sub(1))
        .map(|l| l.len() + 1)
        .sum::<usize>()
        + column.saturating_sub(1);
    format!("malformed JSON at byte {offset} (line {line}, column {column}): {err}")
}

/// Formats a float with 17 significant digits, enough to round-trip f64.
pub fn format_float(value: f64) -> String {
    format!("{value:.16e}")
}

/// Writes sweep rows as CSV with a fixed header and '.' decimal separator.
pub fn sweep_to_csv(rows: &[crate::slant::SweepRow]) -> String {
    let mut out = String::from("paramValue,lambda,type,theta,residualP2,excludedReason\n");
    for row in rows {
        let lambda = row.lambda.map(format_float).unwrap_or_default();
        let ty = row
            .slant_type
            .map(|t| t.label().to_string())
            .unwrap_or_default();
        let theta = row.theta.map(format_float).unwrap_or_default();
        let residual = row.residual_p2.map(format_float).unwrap_or_default();
        let reason = row.excluded_reason.clone().unwrap_or_default();
        // Reasons are free text; quote them to keep the CSV well-formed.
        let reason = if reason.is_empty() {
            reason
        } else {
            format!("\"{}\"", reason.replace('"', "\"\""))
        };
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            format_float(row.param_value),
            lambda,
            ty,
            theta,
            residual,
            reason
        ));
    }
    out
}
