//! File formats and rendering: tileset JSON, grid snapshot JSON, PNG pixmaps
//! and the tile renderer. All writes are atomic (temp file + rename) and all
//! serialization is canonical, so identical inputs produce byte-identical
//! outputs.

mod grid_file;
mod pixmap;
mod render;
mod tileset_file;

pub use grid_file::{load_grid, save_grid, GridMeta};
pub use pixmap::Pixmap;
pub use render::{load_sheet, render_slices, INDETERMINATE_DARK, INDETERMINATE_MAGENTA};
pub use tileset_file::{
    load_tileset, load_tileset_lax, save_tileset, save_tileset_full, LoadedTileset,
};

use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("png decode: {0}")]
    PngDecode(#[from] png::DecodingError),
    #[error("png encode: {0}")]
    PngEncode(#[from] png::EncodingError),
    #[error(transparent)]
    Model(#[from] poms_model::ModelError),
    #[error("{0}")]
    Format(String),
    #[error("tileset has no render table; extract one with a tile sheet or add a render section")]
    MissingRenderTable,
}

/// Write via a temporary file in the same directory plus a rename, so
/// readers never observe partial contents.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}
