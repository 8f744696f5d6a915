use std::fs;
use std::io::Write;
use std::path::Path;

use ndarray::{Array2, Array3};
use serde::{Deserialize, Serialize};

use crate::contour::{ContourDomain, SamplingConfig};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::paaa::{BarycentricModel2D, VectorBarycentricModel};

use super::{ModelMetadata, OfflineModel};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    problem_name: String,
    domain: ContourDomain,
    sampling: SamplingConfig,
    m: usize,
    scalar_nodes: ScalarNodes,
    alpha: Vec<Vec<C64>>,
    /// Node vectors `[i][j][.]` of each `L_k`.
    left_models: Vec<Vec<Vec<Vec<C64>>>>,
    right_models: Vec<Vec<Vec<Vec<C64>>>>,
    metadata: MetadataRecord,
}

#[derive(Serialize, Deserialize)]
struct ScalarNodes {
    z: Vec<C64>,
    p: Vec<C64>,
    values: Vec<Vec<C64>>,
}

/// Non-finite errors are written as `null`.
#[derive(Serialize, Deserialize)]
struct MetadataRecord {
    quadrature_nodes: usize,
    rank_tol: f64,
    fit_tol: f64,
    converged: bool,
    degrees: [usize; 2],
    max_fit_error: Option<f64>,
    fit_history: Vec<Option<f64>>,
    z_node_indices: Vec<usize>,
    p_node_indices: Vec<usize>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn rows(m: &Array2<C64>) -> Vec<Vec<C64>> {
    m.rows().into_iter().map(|r| r.to_vec()).collect()
}

fn nested(v: &Array3<C64>) -> Vec<Vec<Vec<C64>>> {
    v.outer_iter().map(|plane| rows(&plane.to_owned())).collect()
}

fn matrix(rows: &[Vec<C64>], what: &str) -> Result<Array2<C64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Malformed(format!("{what}: ragged rows")));
    }
    Ok(Array2::from_shape_fn((rows.len(), ncols), |(i, j)| rows[i][j]))
}

fn tensor(planes: &[Vec<Vec<C64>>], what: &str) -> Result<Array3<C64>> {
    let a = planes.len();
    let b = planes.first().map_or(0, Vec::len);
    let c = planes.first().and_then(|p| p.first()).map_or(0, Vec::len);
    if planes.iter().any(|p| p.len() != b || p.iter().any(|v| v.len() != c)) {
        return Err(Error::Malformed(format!("{what}: ragged node vectors")));
    }
    Ok(Array3::from_shape_fn((a, b, c), |(i, j, k)| planes[i][j][k]))
}

impl From<&OfflineModel> for ModelFile {
    fn from(m: &OfflineModel) -> Self {
        let md = &m.metadata;
        let (dz, dp) = m.degrees();
        ModelFile {
            format_version: FORMAT_VERSION,
            problem_name: m.problem_name.clone(),
            domain: m.domain,
            sampling: m.sampling.clone(),
            m: m.m,
            scalar_nodes: ScalarNodes {
                z: m.scalar.z_nodes().to_vec(),
                p: m.scalar.p_nodes().to_vec(),
                values: rows(m.scalar.values()),
            },
            alpha: rows(m.scalar.alpha()),
            left_models: m.left_models.iter().map(|v| nested(v.vectors())).collect(),
            right_models: m.right_models.iter().map(|v| nested(v.vectors())).collect(),
            metadata: MetadataRecord {
                quadrature_nodes: md.nodes,
                rank_tol: md.rank_tol,
                fit_tol: md.fit_tol,
                converged: md.converged,
                degrees: [dz, dp],
                max_fit_error: finite(md.max_fit_error),
                fit_history: md.fit_history.iter().map(|&e| finite(e)).collect(),
                z_node_indices: md.z_node_indices.clone(),
                p_node_indices: md.p_node_indices.clone(),
            },
        }
    }
}

impl TryFrom<ModelFile> for OfflineModel {
    type Error = Error;

    fn try_from(f: ModelFile) -> Result<Self> {
        let malformed = |e: Error| Error::Malformed(e.to_string());
        let alpha = matrix(&f.alpha, "alpha")?;
        let values = matrix(&f.scalar_nodes.values, "scalar node values")?;
        let scalar = BarycentricModel2D::new(f.scalar_nodes.z.clone(), f.scalar_nodes.p.clone(), alpha.clone(), values)
            .map_err(malformed)?;
        let r = f.sampling.r();
        if f.left_models.len() != r || f.right_models.len() != r {
            return Err(Error::Malformed(format!(
                "expected {r} left and right models, found {} and {}",
                f.left_models.len(),
                f.right_models.len()
            )));
        }
        let n = f.sampling.dim();
        let lift = |planes: &Vec<Vec<Vec<C64>>>| -> Result<VectorBarycentricModel> {
            let t = tensor(planes, "vector model")?;
            if t.dim().2 != n {
                return Err(Error::Malformed(format!("node vectors must have length {n}")));
            }
            VectorBarycentricModel::new(f.scalar_nodes.z.clone(), f.scalar_nodes.p.clone(), alpha.clone(), t)
                .map_err(malformed)
        };
        let left_models = f.left_models.iter().map(lift).collect::<Result<_>>()?;
        let right_models = f.right_models.iter().map(lift).collect::<Result<_>>()?;
        let md = f.metadata;
        Ok(OfflineModel {
            problem_name: f.problem_name,
            domain: f.domain,
            sampling: f.sampling,
            m: f.m,
            scalar,
            left_models,
            right_models,
            metadata: ModelMetadata {
                nodes: md.quadrature_nodes,
                rank_tol: md.rank_tol,
                fit_tol: md.fit_tol,
                converged: md.converged,
                max_fit_error: md.max_fit_error.unwrap_or(f64::INFINITY),
                fit_history: md.fit_history.into_iter().map(|e| e.unwrap_or(f64::INFINITY)).collect(),
                z_node_indices: md.z_node_indices,
                p_node_indices: md.p_node_indices,
            },
        })
    }
}

/// Writes `model` as JSON; the file appears atomically or not at all.
/// Writes through a temporary file in the target directory and renames it
/// into place, so `path` never holds a partial file.
pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn save_model(model: &OfflineModel, path: impl AsRef<Path>) -> Result<()> {
    let mut text = serde_json::to_string(&ModelFile::from(model)).map_err(|e| Error::Malformed(e.to_string()))?;
    text.push('\n');
    write_atomic(path.as_ref(), text.as_bytes())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<OfflineModel> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Malformed(e.to_string()))?;
    let version = value
        .get("format_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::Malformed("missing format_version".into()))?;
    if version != u64::from(FORMAT_VERSION) {
        return Err(Error::VersionMismatch { found: version.try_into().unwrap_or(u32::MAX), expected: FORMAT_VERSION });
    }
    let file: ModelFile = serde_json::from_value(value).map_err(|e| Error::Malformed(e.to_string()))?;
    OfflineModel::try_from(file)
}
