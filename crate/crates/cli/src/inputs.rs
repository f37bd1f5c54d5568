//! Coefficient and point files.

use std::path::Path;

use gsb_core::group::Mat2;
use gsb_core::{CoefVec, GroupElement, GroupSpec, IrrepLabel, C64};
use nalgebra::DMatrix;
use serde::Deserialize;

use crate::config::ConfigError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefFile {
    group: String,
    entries: Vec<Entry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    label: String,
    /// Row-major `[re, im]` pairs.
    matrix: Vec<[f64; 2]>,
}

fn read(path: &Path, what: &str) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| ConfigError(format!("cannot read {what} {}: {e}", path.display())))
}

pub fn parse_coefs(text: &str) -> Result<CoefVec, ConfigError> {
    let file: CoefFile =
        serde_json::from_str(text).map_err(|e| ConfigError(format!("invalid coefficient file: {e}")))?;
    let spec: GroupSpec = file.group.parse().map_err(|e: gsb_core::GsbError| ConfigError(e.to_string()))?;
    let mut f = CoefVec::new(spec);
    for e in file.entries {
        let label: IrrepLabel = e.label.parse().map_err(|e: gsb_core::GsbError| ConfigError(e.to_string()))?;
        let d = label.dim();
        if e.matrix.len() != d * d {
            return Err(ConfigError(format!(
                "label {label}: expected {} matrix entries, got {}",
                d * d,
                e.matrix.len()
            )));
        }
        if e.matrix.iter().flatten().any(|v| !v.is_finite()) {
            return Err(ConfigError(format!("label {label}: non-finite matrix entry")));
        }
        if f.get(&label).is_some() {
            return Err(ConfigError(format!("label {label} listed twice")));
        }
        let block = DMatrix::from_row_iterator(d, d, e.matrix.iter().map(|[re, im]| C64::new(*re, *im)));
        f.insert(label, block).map_err(|e| ConfigError(e.to_string()))?;
    }
    Ok(f)
}

pub fn load_coefs(path: &Path) -> Result<CoefVec, ConfigError> {
    parse_coefs(&read(path, "coefficient file")?)
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum PointFile {
    List(Vec<Vec<f64>>),
    Wrapped {
        points: Vec<Vec<f64>>,
    },
}

/// Points of `K`: torus angles, or SU(2) as `(Re a, Im a, Re b, Im b)` for
/// `[[a, -conj b], [b, conj a]]`, normalized to unit length.
pub fn parse_points(text: &str, spec: GroupSpec) -> Result<Vec<GroupElement>, ConfigError> {
    let file: PointFile = serde_json::from_str(text).map_err(|e| ConfigError(format!("invalid point file: {e}")))?;
    let raw = match file {
        PointFile::List(v) | PointFile::Wrapped { points: v } => v,
    };
    raw.iter()
        .enumerate()
        .map(|(k, p)| {
            if p.iter().any(|v| !v.is_finite()) {
                return Err(ConfigError(format!("point {k}: non-finite coordinate")));
            }
            match spec {
                GroupSpec::Torus { rank } => {
                    if p.len() != rank {
                        return Err(ConfigError(format!("point {k}: expected {rank} angles, got {}", p.len())));
                    }
                    Ok(GroupElement::Torus(p.iter().map(|v| C64::new(*v, 0.0)).collect()))
                }
                GroupSpec::Su2 => {
                    if p.len() != 4 {
                        return Err(ConfigError(format!("point {k}: expected 4 numbers, got {}", p.len())));
                    }
                    let n = p.iter().map(|v| v * v).sum::<f64>().sqrt();
                    if n < 1e-12 {
                        return Err(ConfigError(format!("point {k}: zero quaternion")));
                    }
                    let a = C64::new(p[0] / n, p[1] / n);
                    let b = C64::new(p[2] / n, p[3] / n);
                    Ok(GroupElement::Su2(Mat2::new(a, -b.conj(), b, a.conj())))
                }
            }
        })
        .collect()
}

pub fn load_points(path: &Path, spec: GroupSpec) -> Result<Vec<GroupElement>, ConfigError> {
    parse_points(&read(path, "point file")?, spec)
}
