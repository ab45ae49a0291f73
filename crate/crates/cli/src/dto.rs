//! JSON shapes of tensors, matrices and groups. Complex numbers are
//! `[re, im]` pairs; tensor entries are indexed `(physical, left, right)`.

use gauge_mps_core::group_rep::{validate_group, Catalog, FiniteGroup, Irrep, Multiplier, Rep};
use gauge_mps_core::linalg::{c, CMat, C64};
use gauge_mps_core::mpv_core::MpsTensor;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub type Pair = [f64; 2];
pub type MatrixJson = Vec<Vec<Pair>>;

fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

pub fn complex(p: Pair) -> C64 {
    c(p[0], p[1])
}

pub fn complex_to_json(z: C64) -> Pair {
    pair(z)
}

pub fn matrix_to_json(m: &CMat) -> MatrixJson {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| pair(m[(i, j)])).collect()).collect()
}

pub fn matrix_from_json(rows: &MatrixJson, pointer: &str) -> Result<CMat, CliError> {
    let nrows = rows.len();
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    if nrows == 0 || ncols == 0 {
        return Err(CliError::schema(pointer, "matrix must be non-empty"));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != ncols) {
        return Err(CliError::schema(
            format!("{pointer}/{i}"),
            format!("row has {} entries, expected {ncols}", rows[i].len()),
        ));
    }
    check_finite(rows.iter().flatten(), pointer)?;
    Ok(CMat::from_fn(nrows, ncols, |i, j| complex(rows[i][j])))
}

fn check_finite<'a>(mut values: impl Iterator<Item = &'a Pair>, pointer: &str) -> Result<(), CliError> {
    if values.any(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(CliError::schema(pointer, "entries must be finite"));
    }
    Ok(())
}

pub fn matrices_to_json(ms: &[CMat]) -> Vec<MatrixJson> {
    ms.iter().map(matrix_to_json).collect()
}

pub fn matrices_from_json(list: &[MatrixJson], pointer: &str) -> Result<Vec<CMat>, CliError> {
    if list.is_empty() {
        return Err(CliError::schema(pointer, "at least one matrix is required"));
    }
    let out = list
        .iter()
        .enumerate()
        .map(|(k, m)| matrix_from_json(m, &format!("{pointer}/{k}")))
        .collect::<Result<Vec<_>, _>>()?;
    let shape = (out[0].nrows(), out[0].ncols());
    if let Some(k) = out.iter().position(|m| (m.nrows(), m.ncols()) != shape) {
        return Err(CliError::schema(format!("{pointer}/{k}"), "matrices must share one shape"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorJson {
    pub phys_dim: usize,
    pub left_dim: usize,
    pub right_dim: usize,
    pub entries: Vec<Vec<Vec<Pair>>>,
}

impl TensorJson {
    pub fn from_tensor(t: &MpsTensor) -> Self {
        TensorJson {
            phys_dim: t.phys_dim(),
            left_dim: t.left_dim(),
            right_dim: t.right_dim(),
            entries: t.matrices().iter().map(matrix_to_json).collect(),
        }
    }

    pub fn to_tensor(&self, pointer: &str) -> Result<MpsTensor, CliError> {
        if self.entries.len() != self.phys_dim {
            return Err(CliError::schema(
                format!("{pointer}/entries"),
                format!("{} physical slices, phys_dim is {}", self.entries.len(), self.phys_dim),
            ));
        }
        let mut mats = Vec::with_capacity(self.phys_dim);
        for (i, slice) in self.entries.iter().enumerate() {
            let p = format!("{pointer}/entries/{i}");
            let m = matrix_from_json(slice, &p)?;
            if (m.nrows(), m.ncols()) != (self.left_dim, self.right_dim) {
                return Err(CliError::schema(
                    p,
                    format!("slice is {}x{}, expected {}x{}", m.nrows(), m.ncols(), self.left_dim, self.right_dim),
                ));
            }
            mats.push(m);
        }
        MpsTensor::new(mats).map_err(|e| CliError::schema(pointer, e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrrepJson {
    pub label: String,
    pub dim: usize,
    pub matrices: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: usize,
    pub mult_table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element_names: Option<Vec<String>>,
    /// Shared multiplier `γ[g][h]` of projective irreps.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<Vec<Vec<Pair>>>,
    #[serde(default)]
    pub irreps: Vec<IrrepJson>,
}

impl GroupJson {
    pub fn from_catalog(cat: &Catalog) -> Self {
        let n = cat.group.order();
        let multiplier = cat
            .irreps
            .first()
            .and_then(|irr| irr.multiplier())
            .filter(|m| !m.is_trivial(1e-12))
            .map(|m| (0..n).map(|g| (0..n).map(|h| pair(m.get(g, h))).collect()).collect());
        GroupJson {
            name: Some(cat.name.clone()),
            order: n,
            mult_table: cat.group.mult_table(),
            element_names: cat.group.names().map(<[String]>::to_vec),
            multiplier,
            irreps: cat
                .irreps
                .iter()
                .map(|irr| IrrepJson {
                    label: irr.label.clone(),
                    dim: irr.dim(),
                    matrices: matrices_to_json(irr.rep.matrices()),
                })
                .collect(),
        }
    }

    fn group(&self, pointer: &str) -> Result<FiniteGroup, CliError> {
        if self.mult_table.len() != self.order {
            return Err(CliError::schema(
                format!("{pointer}/mult_table"),
                format!("table has {} rows, order is {}", self.mult_table.len(), self.order),
            ));
        }
        let group = validate_group(&self.mult_table)
            .map_err(|e| CliError::schema(format!("{pointer}/mult_table"), e.to_string()))?;
        match &self.element_names {
            Some(names) => group
                .with_names(names.clone())
                .map_err(|e| CliError::schema(format!("{pointer}/element_names"), e.to_string())),
            None => Ok(group),
        }
    }

    pub fn to_catalog(&self, pointer: &str) -> Result<Catalog, CliError> {
        let group = self.group(pointer)?;
        let n = group.order();
        let multiplier = match &self.multiplier {
            Some(rows) => {
                let p = format!("{pointer}/multiplier");
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(CliError::schema(p, format!("expected an {n}x{n} table")));
                }
                let values = rows.iter().flatten().map(|&z| complex(z)).collect();
                Some(Multiplier::new(&group, values, 1e-9).map_err(|e| CliError::schema(p, e.to_string()))?)
            }
            None => None,
        };
        let mut irreps = Vec::with_capacity(self.irreps.len());
        for (k, irr) in self.irreps.iter().enumerate() {
            let p = format!("{pointer}/irreps/{k}");
            let mats = matrices_from_json(&irr.matrices, &format!("{p}/matrices"))?;
            if mats.len() != n {
                return Err(CliError::schema(
                    format!("{p}/matrices"),
                    format!("{} matrices for a group of order {n}", mats.len()),
                ));
            }
            if mats[0].nrows() != irr.dim || !mats[0].is_square() {
                return Err(CliError::schema(format!("{p}/dim"), "matrices do not match the stated dimension"));
            }
            let irrep = Irrep::new(irr.label.clone(), mats, &group).map_err(|e| CliError::schema(&p, e.to_string()))?;
            let expected = multiplier.clone().unwrap_or_else(|| Multiplier::trivial(n));
            if !irrep.multiplier().map(|m| m.approx_eq(&expected, 1e-9)).unwrap_or(false) {
                return Err(CliError::schema(p, "irrep multiplier differs from the group multiplier"));
            }
            irreps.push(irrep);
        }
        Ok(Catalog::new(self.name.clone().unwrap_or_else(|| format!("G{n}")), group, irreps))
    }
}

/// Matrices of a representation, validated against `group` when present.
pub fn rep_from_json(list: &[MatrixJson], group: Option<&FiniteGroup>, pointer: &str) -> Result<Rep, CliError> {
    let mats = matrices_from_json(list, pointer)?;
    if !mats[0].is_square() {
        return Err(CliError::schema(pointer, "representation matrices must be square"));
    }
    match group {
        Some(g) => {
            if mats.len() != g.order() {
                return Err(CliError::schema(
                    pointer,
                    format!("{} matrices for a group of order {}", mats.len(), g.order()),
                ));
            }
            Rep::new(mats, g).map_err(|e| CliError::schema(pointer, e.to_string()))
        }
        None => Ok(Rep::from_samples(mats)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gauge_mps_core::linalg;

    #[test]
    fn tensors_round_trip_exactly() {
        let m = CMat::from_fn(2, 3, |i, j| c(0.1 * i as f64 + 1.0 / 3.0, -(j as f64) / 7.0));
        let t = MpsTensor::new(vec![m.clone(), m * c(0.0, 1.0)]).unwrap();
        let text = serde_json::to_string(&TensorJson::from_tensor(&t)).unwrap();
        let back: TensorJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_tensor("/a").unwrap(), t);
    }

    #[test]
    fn ragged_matrix_reports_the_row() {
        let rows: MatrixJson = vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[1.0, 0.0]]];
        match matrix_from_json(&rows, "/x/0") {
            Err(CliError::Schema { pointer, .. }) => assert_eq!(pointer, "/x/0/1"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn slice_shape_is_checked_against_declared_dims() {
        let json =
            TensorJson { phys_dim: 1, left_dim: 2, right_dim: 2, entries: vec![matrix_to_json(&linalg::identity(3))] };
        assert!(matches!(json.to_tensor("/b"), Err(CliError::Schema { pointer, .. }) if pointer == "/b/entries/0"));
    }

    #[test]
    fn catalogs_round_trip() {
        for cat in [Catalog::dihedral(5), Catalog::klein_pauli(), Catalog::quaternion()] {
            let back = GroupJson::from_catalog(&cat).to_catalog("/group").unwrap();
            assert_eq!(back.group.mult_table(), cat.group.mult_table());
            assert_eq!(back.irreps.len(), cat.irreps.len());
            for (a, b) in back.irreps.iter().zip(&cat.irreps) {
                assert_eq!(a.label, b.label);
                assert_eq!(a.rep.matrices(), b.rep.matrices());
            }
        }
    }

    #[test]
    fn projective_irrep_without_group_multiplier_is_rejected() {
        let mut json = GroupJson::from_catalog(&Catalog::klein_pauli());
        json.multiplier = None;
        assert!(
            matches!(json.to_catalog("/group"), Err(CliError::Schema { pointer, .. }) if pointer == "/group/irreps/0")
        );
    }

    #[test]
    fn broken_table_is_a_schema_error() {
        let mut json = GroupJson::from_catalog(&Catalog::cyclic(3));
        json.mult_table[1][1] = 1;
        assert!(matches!(json.to_catalog(""), Err(CliError::Schema { pointer, .. }) if pointer == "/mult_table"));
    }
}
