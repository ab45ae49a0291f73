//! Bundles: a construction serialised as tensors, representations and a
//! free-form parameter record.

use std::fs;
use std::path::Path;

use gauge_mps_core::group_rep::{Catalog, FiniteGroup, Rep};
use gauge_mps_core::linalg::CMat;
use gauge_mps_core::mpv_core::MpsTensor;
use gauge_mps_core::symmetry::{GaussOperators, LieAlgebra};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::dto::{matrices_from_json, matrices_to_json, rep_from_json, GroupJson, MatrixJson, TensorJson};
use crate::error::CliError;

pub const BUNDLE_FORMAT: &str = "gauge-mps-bundle/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussJson {
    /// `"su2"` or `"abelian"`.
    pub algebra: String,
    pub r: Vec<MatrixJson>,
    pub q: Vec<MatrixJson>,
    pub l: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleJson {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Absent for sampled Lie-group elements.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<TensorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<TensorJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauss: Option<GaussJson>,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub parameters: Value,
}

/// A validated bundle.
#[derive(Debug, Clone)]
pub struct Bundle {
    pub name: Option<String>,
    pub catalog: Option<Catalog>,
    pub a: Option<MpsTensor>,
    pub b: Option<MpsTensor>,
    pub theta: Option<Rep>,
    pub r: Option<Rep>,
    pub l: Option<Rep>,
    pub x: Option<Vec<CMat>>,
    pub y: Option<Vec<CMat>>,
    pub gauss: Option<GaussOperators>,
    pub parameters: Value,
}

impl Default for Bundle {
    fn default() -> Self {
        Bundle {
            name: None,
            catalog: None,
            a: None,
            b: None,
            theta: None,
            r: None,
            l: None,
            x: None,
            y: None,
            gauss: None,
            parameters: Value::Null,
        }
    }
}

impl Bundle {
    pub fn group(&self) -> Option<&FiniteGroup> {
        self.catalog.as_ref().map(|c| &c.group)
    }

    pub fn require<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
        field.as_ref().ok_or_else(|| CliError::schema(format!("/{name}"), "required field is missing"))
    }

    pub fn to_json(&self) -> BundleJson {
        let reps = |r: &Option<Rep>| r.as_ref().map(|r| matrices_to_json(r.matrices()));
        BundleJson {
            format: BUNDLE_FORMAT.into(),
            name: self.name.clone(),
            group: self.catalog.as_ref().map(GroupJson::from_catalog),
            a: self.a.as_ref().map(TensorJson::from_tensor),
            b: self.b.as_ref().map(TensorJson::from_tensor),
            theta: reps(&self.theta),
            r: reps(&self.r),
            l: reps(&self.l),
            x: self.x.as_deref().map(matrices_to_json),
            y: self.y.as_deref().map(matrices_to_json),
            gauss: self.gauss.as_ref().map(|g| GaussJson {
                algebra: match g.algebra {
                    LieAlgebra::Su2 => "su2".into(),
                    LieAlgebra::Abelian => "abelian".into(),
                },
                r: matrices_to_json(&g.r),
                q: matrices_to_json(&g.q),
                l: matrices_to_json(&g.l),
            }),
            parameters: self.parameters.clone(),
        }
    }

    pub fn from_json(json: &BundleJson) -> Result<Bundle, CliError> {
        if json.format != BUNDLE_FORMAT {
            return Err(CliError::schema("/format", format!("expected {BUNDLE_FORMAT:?}, found {:?}", json.format)));
        }
        let catalog = json.group.as_ref().map(|g| g.to_catalog("/group")).transpose()?;
        let group = catalog.as_ref().map(|c| &c.group);
        let rep = |v: &Option<Vec<MatrixJson>>, name: &str| {
            v.as_ref().map(|m| rep_from_json(m, group, &format!("/{name}"))).transpose()
        };
        let plain = |v: &Option<Vec<MatrixJson>>, name: &str| {
            v.as_ref().map(|m| matrices_from_json(m, &format!("/{name}"))).transpose()
        };
        let gauss = match &json.gauss {
            Some(g) => {
                let algebra = match g.algebra.as_str() {
                    "su2" => LieAlgebra::Su2,
                    "abelian" => LieAlgebra::Abelian,
                    other => return Err(CliError::schema("/gauss/algebra", format!("unknown algebra {other:?}"))),
                };
                let ops = GaussOperators::new(
                    algebra,
                    matrices_from_json(&g.r, "/gauss/r")?,
                    matrices_from_json(&g.q, "/gauss/q")?,
                    matrices_from_json(&g.l, "/gauss/l")?,
                )
                .map_err(|e| CliError::schema("/gauss", e.to_string()))?;
                Some(ops)
            }
            None => None,
        };
        Ok(Bundle {
            name: json.name.clone(),
            a: json.a.as_ref().map(|t| t.to_tensor("/a")).transpose()?,
            b: json.b.as_ref().map(|t| t.to_tensor("/b")).transpose()?,
            theta: rep(&json.theta, "theta")?,
            r: rep(&json.r, "r")?,
            l: rep(&json.l, "l")?,
            x: plain(&json.x, "x")?,
            y: plain(&json.y, "y")?,
            gauss,
            parameters: json.parameters.clone(),
            catalog,
        })
    }
}

/// `serde_path_to_error` path as a JSON pointer.
fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

/// Parses JSON text, reporting the JSON pointer of the first offending value.
pub fn parse_json<T: DeserializeOwned>(text: &str, path: &Path) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        pointer: pointer_of(e.path()),
        message: e.inner().to_string(),
    })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    parse_json(&text, path)
}

pub fn load_bundle(path: &Path) -> Result<Bundle, CliError> {
    let json: BundleJson = read_json(path)?;
    Bundle::from_json(&json).map_err(|e| e.in_file(path))
}

pub fn bundle_text(bundle: &Bundle) -> String {
    let mut s = serde_json::to_string_pretty(&bundle.to_json()).expect("bundles serialise");
    s.push('\n');
    s
}
