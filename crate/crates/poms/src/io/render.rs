use std::path::Path;

use poms_model::{Coord, GridState, TileSet};

use crate::io::{IoError, Pixmap};

pub const INDETERMINATE_MAGENTA: [u8; 4] = [255, 0, 255, 255];
pub const INDETERMINATE_DARK: [u8; 4] = [24, 24, 24, 255];

/// Load the tile sheet referenced by the tileset's render table, resolving a
/// relative path against `base_dir` (normally the tileset file's directory).
pub fn load_sheet(ts: &TileSet, base_dir: &Path) -> Result<Pixmap, IoError> {
    let render = ts.render_table().ok_or(IoError::MissingRenderTable)?;
    let sheet_path = Path::new(&render.tile_sheet);
    let resolved = if sheet_path.is_absolute() {
        sheet_path.to_path_buf()
    } else {
        base_dir.join(sheet_path)
    };
    Pixmap::load_png(&resolved)
}

/// Render a grid to one pixmap per Z slice. Resolved cells show their
/// representative tile from the sheet; indeterminate cells show a
/// magenta checker placeholder.
pub fn render_slices(
    grid: &GridState,
    ts: &TileSet,
    sheet: &Pixmap,
) -> Result<Vec<Pixmap>, IoError> {
    let render = ts.render_table().ok_or(IoError::MissingRenderTable)?;
    let t = render.tile_pixels;
    if render.rects.len() != ts.tile_count() {
        return Err(IoError::Format(format!(
            "render table has {} rects for {} tiles",
            render.rects.len(),
            ts.tile_count()
        )));
    }
    for &(rx, ry) in &render.rects {
        if rx + t > sheet.width || ry + t > sheet.height {
            return Err(IoError::Format(format!(
                "tile rect ({rx},{ry}) leaves the {}x{} sheet",
                sheet.width, sheet.height
            )));
        }
    }

    let dims = grid.dims();
    let mut slices = Vec::with_capacity(dims.z);
    for z in 0..dims.z {
        let mut out = Pixmap::new(dims.x as u32 * t, dims.y as u32 * t);
        for y in 0..dims.y {
            for x in 0..dims.x {
                let px = x as u32 * t;
                let py = y as u32 * t;
                match grid.get_at(Coord::new(x, y, z)) {
                    Some(tile) => {
                        let (rx, ry) = render.rects[tile as usize];
                        out.blit(sheet, rx, ry, t, t, px, py);
                    }
                    None => draw_placeholder(&mut out, px, py, t),
                }
            }
        }
        slices.push(out);
    }
    Ok(slices)
}

/// 2x2 checker of magenta and near-black over the tile's square.
fn draw_placeholder(out: &mut Pixmap, px: u32, py: u32, t: u32) {
    let half = (t / 2).max(1);
    for dy in 0..t {
        for dx in 0..t {
            let checker = (dx / half + dy / half).is_multiple_of(2);
            let color = if checker {
                INDETERMINATE_MAGENTA
            } else {
                INDETERMINATE_DARK
            };
            out.set_pixel(px + dx, py + dy, color);
        }
    }
}
