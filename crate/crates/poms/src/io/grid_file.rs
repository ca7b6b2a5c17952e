use std::path::Path;

use poms_model::{Dims, GridState};
use serde::{Deserialize, Serialize};

use crate::io::{atomic_write, IoError};

/// Version-1 grid snapshot: dims, one entry per cell in row-major order
/// (`-1` marks an indeterminate cell), plus provenance.
#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct GridSnapshotV1 {
    format_version: u32,
    dims: [usize; 3],
    cells: Vec<i32>,
    round: u64,
    seed: u64,
    config_digest: String,
}

/// Provenance recorded alongside the cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMeta {
    pub round: u64,
    pub seed: u64,
    pub config_digest: String,
}

pub fn save_grid(path: &Path, grid: &GridState, meta: &GridMeta) -> Result<(), IoError> {
    let dims = grid.dims();
    let doc = GridSnapshotV1 {
        format_version: 1,
        dims: [dims.x, dims.y, dims.z],
        cells: grid.raw_cells().to_vec(),
        round: meta.round,
        seed: meta.seed,
        config_digest: meta.config_digest.clone(),
    };
    let mut bytes = serde_json::to_vec(&doc)?;
    bytes.push(b'\n');
    atomic_write(path, &bytes)
}

pub fn load_grid(path: &Path) -> Result<(GridState, GridMeta), IoError> {
    let bytes = std::fs::read(path)?;
    let doc: GridSnapshotV1 = serde_json::from_slice(&bytes)?;
    if doc.format_version != 1 {
        return Err(IoError::Format(format!(
            "unsupported grid format version {}",
            doc.format_version
        )));
    }
    let dims = Dims::new(doc.dims[0], doc.dims[1], doc.dims[2]);
    let cells = doc.dims[0]
        .checked_mul(doc.dims[1])
        .and_then(|v| v.checked_mul(doc.dims[2]))
        .filter(|&v| v > 0 && v <= (1 << 31));
    if cells.is_none() {
        return Err(IoError::Format(format!(
            "grid dims {}x{}x{} out of range",
            doc.dims[0], doc.dims[1], doc.dims[2]
        )));
    }
    let grid = GridState::from_raw(dims, doc.cells)
        .ok_or_else(|| IoError::Format("cell array does not match dims".to_string()))?;
    Ok((
        grid,
        GridMeta {
            round: doc.round,
            seed: doc.seed,
            config_digest: doc.config_digest,
        },
    ))
}
