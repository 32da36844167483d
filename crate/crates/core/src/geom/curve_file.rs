//! JSON curve files:
//!
//! ```json
//! { "ambient": "s3",
//!   "curves": [ { "name": "a", "vertices": [[1, 0, 0, 0], ...], "normals": [...] } ] }
//! ```
//!
//! Vertices have three coordinates for `"r3"` and four for `"s3"`. The optional
//! `normals` array holds one framing vector per vertex, in the same dimension.

use std::path::Path;

use nalgebra::Vector4;
use serde::{Deserialize, Serialize};

use super::curve::{Ambient, PolyCurve};
use crate::{Error, Result, Tolerances};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    ambient: Ambient,
    curves: Vec<RawCurve>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    name: String,
    vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normals: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone)]
pub struct CurveRecord {
    pub curve: PolyCurve,
    pub normals: Option<Vec<Vector4<f64>>>,
}

#[derive(Debug, Clone)]
pub struct CurveFile {
    pub ambient: Ambient,
    pub curves: Vec<CurveRecord>,
}

impl CurveFile {
    pub fn from_curves(curves: Vec<PolyCurve>) -> Result<Self> {
        let ambient = curves
            .first()
            .map(PolyCurve::ambient)
            .ok_or_else(|| Error::InvalidInput("no curves".into()))?;
        if curves.iter().any(|c| c.ambient() != ambient) {
            return Err(Error::InvalidInput("mixed ambients".into()));
        }
        Ok(CurveFile {
            ambient,
            curves: curves
                .into_iter()
                .map(|curve| CurveRecord { curve, normals: None })
                .collect(),
        })
    }

    pub fn parse(text: &str, tol: &Tolerances) -> Result<Self> {
        let raw: RawFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("curve file: {e}")))?;
        if raw.curves.is_empty() {
            return Err(Error::InvalidInput("curve file has no curves".into()));
        }
        let dim = match raw.ambient {
            Ambient::R3 => 3,
            Ambient::S3 => 4,
        };
        let mut curves = Vec::with_capacity(raw.curves.len());
        for rc in raw.curves {
            let vertices = rc
                .vertices
                .iter()
                .enumerate()
                .map(|(i, row)| read_row(&rc.name, "vertex", i, row, dim))
                .collect::<Result<Vec<_>>>()?;
            if raw.ambient == Ambient::S3 {
                for (i, v) in vertices.iter().enumerate() {
                    if (v.norm() - 1.0).abs() > tol.eps_norm_input {
                        return Err(Error::InvalidInput(format!(
                            "{}: vertex {i} has norm {}, not on the unit sphere",
                            rc.name,
                            v.norm()
                        )));
                    }
                }
            }
            let normals = match rc.normals {
                None => None,
                Some(rows) => {
                    if rows.len() != vertices.len() {
                        return Err(Error::InvalidInput(format!(
                            "{}: {} normals for {} vertices",
                            rc.name,
                            rows.len(),
                            vertices.len()
                        )));
                    }
                    Some(
                        rows.iter()
                            .enumerate()
                            .map(|(i, row)| read_row(&rc.name, "normal", i, row, dim))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
            };
            let curve = PolyCurve::build(rc.name, raw.ambient, vertices, None)?;
            curve.validate(tol)?;
            curves.push(CurveRecord { curve, normals });
        }
        Ok(CurveFile {
            ambient: raw.ambient,
            curves,
        })
    }

    pub fn read(path: &Path, tol: &Tolerances) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::parse(&text, tol)
    }

    pub fn to_json(&self) -> String {
        let dim = match self.ambient {
            Ambient::R3 => 3,
            Ambient::S3 => 4,
        };
        let row = |v: &Vector4<f64>| v.as_slice()[..dim].to_vec();
        let raw = RawFile {
            ambient: self.ambient,
            curves: self
                .curves
                .iter()
                .map(|r| RawCurve {
                    name: r.curve.name().to_string(),
                    vertices: r.curve.vertices().iter().map(row).collect(),
                    normals: r.normals.as_ref().map(|ns| ns.iter().map(row).collect()),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("curve file serializes")
    }
}

fn read_row(name: &str, what: &str, i: usize, row: &[f64], dim: usize) -> Result<Vector4<f64>> {
    if row.len() != dim {
        return Err(Error::InvalidInput(format!(
            "{name}: {what} {i} has {} coordinates, expected {dim}",
            row.len()
        )));
    }
    if !row.iter().all(|c| c.is_finite()) {
        return Err(Error::InvalidInput(format!("{name}: {what} {i} is not finite")));
    }
    let mut v = Vector4::zeros();
    v.as_mut_slice()[..dim].copy_from_slice(row);
    Ok(v)
}
