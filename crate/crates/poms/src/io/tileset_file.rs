use std::collections::BTreeMap;
use std::path::Path;

use poms_model::{BoundaryPolicy, Direction, RenderTable, Rule, TileSet};
use serde::{Deserialize, Serialize};

use crate::io::{atomic_write, IoError};

/// Version-1 tileset document. Rules are stored canonically: all
/// `(a, b, dir)` with `a <= b`, sorted; the loader applies the symmetric
/// closure. `dir` indexes the fixed direction order `+X,-X,+Y,-Y,+Z,-Z`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct TilesetFileV1 {
    format_version: u32,
    name: String,
    dim: u8,
    tile_count: usize,
    weights: Vec<f64>,
    rules: Vec<(u32, u32, u8)>,
    boundary: BoundaryV1,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    render: Option<RenderV1>,
    /// Free-form metadata about representative-tile indexing; not used by
    /// the solver.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    representative: Option<serde_json::Value>,
    #[serde(flatten)]
    extra: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct BoundaryV1 {
    mode: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zero_tile: Option<u32>,
    #[serde(flatten)]
    extra: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct RenderV1 {
    tile_sheet: String,
    tile_pixels: u32,
    rects: Vec<(u32, u32)>,
    #[serde(flatten)]
    extra: BTreeMap<String, serde_json::Value>,
}

/// A tileset loaded from disk plus whatever the file carried that the
/// in-memory model does not: representative metadata and, in lax mode,
/// unknown fields preserved for re-serialization.
#[derive(Debug)]
pub struct LoadedTileset {
    pub tileset: TileSet,
    pub representative: Option<serde_json::Value>,
    pub extra: BTreeMap<String, serde_json::Value>,
}

pub fn save_tileset(
    path: &Path,
    ts: &TileSet,
    representative: Option<&serde_json::Value>,
) -> Result<(), IoError> {
    save_tileset_full(path, ts, representative, &BTreeMap::new())
}

/// Save including unknown fields carried through a lax load.
pub fn save_tileset_full(
    path: &Path,
    ts: &TileSet,
    representative: Option<&serde_json::Value>,
    extra: &BTreeMap<String, serde_json::Value>,
) -> Result<(), IoError> {
    let boundary = match ts.boundary() {
        BoundaryPolicy::Open => BoundaryV1 {
            mode: "open".to_string(),
            zero_tile: None,
            extra: BTreeMap::new(),
        },
        BoundaryPolicy::Zero { zero_tile } => BoundaryV1 {
            mode: "zero".to_string(),
            zero_tile: Some(zero_tile),
            extra: BTreeMap::new(),
        },
    };
    let doc = TilesetFileV1 {
        format_version: 1,
        name: ts.name().to_string(),
        dim: ts.dim(),
        tile_count: ts.tile_count(),
        weights: ts.weights().to_vec(),
        rules: ts.canonical_rules(),
        boundary,
        render: ts.render_table().map(|r| RenderV1 {
            tile_sheet: r.tile_sheet.clone(),
            tile_pixels: r.tile_pixels,
            rects: r.rects.clone(),
            extra: BTreeMap::new(),
        }),
        representative: representative.cloned(),
        extra: extra.clone(),
    };
    let mut bytes = serde_json::to_vec_pretty(&doc)?;
    bytes.push(b'\n');
    atomic_write(path, &bytes)
}

/// Strict load: unknown fields are rejected.
pub fn load_tileset(path: &Path) -> Result<LoadedTileset, IoError> {
    load_inner(path, true)
}

/// Lax load: unknown fields are preserved in [`LoadedTileset::extra`].
pub fn load_tileset_lax(path: &Path) -> Result<LoadedTileset, IoError> {
    load_inner(path, false)
}

fn load_inner(path: &Path, strict: bool) -> Result<LoadedTileset, IoError> {
    let bytes = std::fs::read(path)?;
    let doc: TilesetFileV1 = serde_json::from_slice(&bytes)?;
    if doc.format_version != 1 {
        return Err(IoError::Format(format!(
            "unsupported tileset format version {}",
            doc.format_version
        )));
    }
    if strict {
        let unknown: Vec<&String> = doc
            .extra
            .keys()
            .chain(doc.boundary.extra.keys())
            .chain(doc.render.iter().flat_map(|r| r.extra.keys()))
            .collect();
        if !unknown.is_empty() {
            return Err(IoError::Format(format!(
                "unknown fields in tileset file: {}",
                unknown
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            )));
        }
    }

    let boundary = match doc.boundary.mode.as_str() {
        "open" => BoundaryPolicy::Open,
        "zero" => BoundaryPolicy::Zero {
            zero_tile: doc.boundary.zero_tile.ok_or_else(|| {
                IoError::Format("boundary mode 'zero' requires zeroTile".to_string())
            })?,
        },
        other => return Err(IoError::Format(format!("unknown boundary mode '{other}'"))),
    };

    let mut rules: Vec<Rule> = Vec::with_capacity(doc.rules.len());
    for &(a, b, d) in &doc.rules {
        let dir = Direction::from_index(d as usize)
            .ok_or_else(|| IoError::Format(format!("rule direction {d} out of range")))?;
        rules.push((a, b, dir));
    }

    let mut tileset = TileSet::new(
        doc.name,
        doc.dim,
        doc.tile_count,
        &rules,
        Some(doc.weights),
        boundary,
    )?;
    tileset.validate_symmetry()?;

    if let Some(r) = doc.render {
        if r.rects.len() != tileset.tile_count() {
            return Err(IoError::Format(format!(
                "render table has {} rects for {} tiles",
                r.rects.len(),
                tileset.tile_count()
            )));
        }
        tileset.set_render_table(Some(RenderTable {
            tile_sheet: r.tile_sheet,
            tile_pixels: r.tile_pixels,
            rects: r.rects,
        }));
    }

    Ok(LoadedTileset {
        tileset,
        representative: doc.representative,
        extra: doc.extra,
    })
}
