//! Automatic tile constraint creation from exemplar images.
//!
//! The exemplar is cut into raw tiles of `tile_pixels` square, deduplicated
//! by exact byte equality. A `window x window` super-tile slides over the
//! tile grid at a stride of one tile; the deduplicated super tiles become
//! the tile domain. Two super tiles are admissible neighbors when the band
//! they would share after a one-tile shift is identical — for a `W x W`
//! window that is a `(W-1) x W` overlap. With a window of one, adjacency
//! falls back to the pairs actually observed in the exemplar.
//!
//! Boundary handling is either wrap-around (window coordinates wrap, open
//! grid boundary) or hard-zero: the exemplar is virtually padded with a
//! synthetic zero tile so edge windows produce zero-ward constraints, the
//! all-zero super tile gets id 0, and the resulting tileset uses the zero
//! boundary policy.

use std::collections::HashMap;

use poms_model::{BoundaryPolicy, Direction, Rule, TileId, TileSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::Pixmap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryMode {
    HardZero,
    Wrap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representative {
    UpperLeft,
    Middle,
}

#[derive(Debug, Clone)]
pub struct ExtractConfig {
    pub name: String,
    pub tile_pixels: u32,
    /// Super-tile window extent in tiles; 1 selects direct-adjacency mode.
    pub window: usize,
    pub boundary: BoundaryMode,
    pub representative: Representative,
}

#[derive(Debug, Error, PartialEq)]
pub enum ExtractError {
    #[error("image is empty")]
    EmptyImage,
    #[error("image {width}x{height} px is not divisible by the tile size {tile_pixels}")]
    NotDivisible {
        width: u32,
        height: u32,
        tile_pixels: u32,
    },
    #[error("window must be at least 1")]
    BadWindow,
    #[error("middle representative requires an odd window, got {0}")]
    MiddleNeedsOddWindow(usize),
}

/// Everything extraction produces: the tileset, the packed sheet of
/// representative tiles with one rect per tile, and, per tile, the window
/// placements it was seen at (tile coordinates; negative under zero padding).
#[derive(Debug)]
pub struct Extraction {
    pub tileset: TileSet,
    pub sheet: Pixmap,
    pub rects: Vec<(u32, u32)>,
    pub placements: Vec<Vec<(i64, i64)>>,
}

/// Synthetic raw-tile id for the zero padding; never collides with real
/// tiles, which are numbered from zero upward.
const ZERO_RAW: u32 = u32::MAX;
const ZERO_GRAY: [u8; 4] = [128, 128, 128, 255];

pub fn extract_tile_set(image: &Pixmap, cfg: &ExtractConfig) -> Result<Extraction, ExtractError> {
    if image.width == 0 || image.height == 0 {
        return Err(ExtractError::EmptyImage);
    }
    if cfg.tile_pixels == 0
        || !image.width.is_multiple_of(cfg.tile_pixels)
        || !image.height.is_multiple_of(cfg.tile_pixels)
    {
        return Err(ExtractError::NotDivisible {
            width: image.width,
            height: image.height,
            tile_pixels: cfg.tile_pixels,
        });
    }
    let w = cfg.window;
    if w == 0 {
        return Err(ExtractError::BadWindow);
    }
    if cfg.representative == Representative::Middle && w.is_multiple_of(2) {
        return Err(ExtractError::MiddleNeedsOddWindow(w));
    }

    let t = cfg.tile_pixels;
    let tiles_x = (image.width / t) as i64;
    let tiles_y = (image.height / t) as i64;

    // Raw tiles, deduplicated by exact pixel bytes, ids by first occurrence
    // in row-major order.
    let mut raw_ids: HashMap<Vec<u8>, u32> = HashMap::new();
    let mut raw_pixels: Vec<Vec<u8>> = Vec::new();
    let mut raw_grid: Vec<u32> = Vec::with_capacity((tiles_x * tiles_y) as usize);
    for ty in 0..tiles_y {
        for tx in 0..tiles_x {
            let bytes = image.rect_bytes(tx as u32 * t, ty as u32 * t, t, t);
            let next = raw_pixels.len() as u32;
            let id = *raw_ids.entry(bytes.clone()).or_insert_with(|| {
                raw_pixels.push(bytes);
                next
            });
            raw_grid.push(id);
        }
    }

    // Raw tile at tile coordinates, honoring the boundary mode.
    let raw_at = |tx: i64, ty: i64| -> u32 {
        match cfg.boundary {
            BoundaryMode::Wrap => {
                let x = tx.rem_euclid(tiles_x);
                let y = ty.rem_euclid(tiles_y);
                raw_grid[(y * tiles_x + x) as usize]
            }
            BoundaryMode::HardZero => {
                if tx < 0 || ty < 0 || tx >= tiles_x || ty >= tiles_y {
                    ZERO_RAW
                } else {
                    raw_grid[(ty * tiles_x + tx) as usize]
                }
            }
        }
    };

    // Window origins, row-major. Hard-zero pads by W-1 on the leading sides
    // so every edge pair appears; each placement still covers at least one
    // real tile.
    let pad = if cfg.boundary == BoundaryMode::HardZero {
        w as i64 - 1
    } else {
        0
    };

    let mut super_ids: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut supers: Vec<Vec<u32>> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut placements: Vec<Vec<(i64, i64)>> = Vec::new();
    let mut intern = |cells: Vec<u32>,
                      supers: &mut Vec<Vec<u32>>,
                      weights: &mut Vec<f64>,
                      placements: &mut Vec<Vec<(i64, i64)>>|
     -> u32 {
        let next = supers.len() as u32;
        *super_ids.entry(cells.clone()).or_insert_with(|| {
            supers.push(cells);
            weights.push(0.0);
            placements.push(Vec::new());
            next
        })
    };

    if cfg.boundary == BoundaryMode::HardZero {
        // Reserve id 0 for the all-zero super tile; it never occurs as a
        // placement, so its weight stays zero.
        let zero_super = vec![ZERO_RAW; w * w];
        let id = intern(zero_super, &mut supers, &mut weights, &mut placements);
        debug_assert_eq!(id, 0);
    }

    for oy in -pad..tiles_y {
        for ox in -pad..tiles_x {
            let mut cells = Vec::with_capacity(w * w);
            for r in 0..w as i64 {
                for c in 0..w as i64 {
                    cells.push(raw_at(ox + c, oy + r));
                }
            }
            let id = intern(cells, &mut supers, &mut weights, &mut placements);
            weights[id as usize] += 1.0;
            placements[id as usize].push((ox, oy));
        }
    }

    let tile_count = supers.len();
    let mut rules: Vec<Rule> = Vec::new();
    if w == 1 {
        // Direct adjacency: only pairs observed in the exemplar (plus
        // zero-padding pairs at the borders under hard-zero).
        let single = |raw: u32| -> u32 {
            if raw == ZERO_RAW {
                0
            } else {
                super_ids[&vec![raw]]
            }
        };
        for oy in 0..tiles_y {
            for ox in 0..tiles_x {
                let here = single(raw_at(ox, oy));
                match cfg.boundary {
                    BoundaryMode::Wrap => {
                        rules.push((here, single(raw_at(ox + 1, oy)), Direction::XPlus));
                        rules.push((here, single(raw_at(ox, oy + 1)), Direction::YPlus));
                    }
                    BoundaryMode::HardZero => {
                        for (d, nx, ny) in [
                            (Direction::XPlus, ox + 1, oy),
                            (Direction::XMinus, ox - 1, oy),
                            (Direction::YPlus, ox, oy + 1),
                            (Direction::YMinus, ox, oy - 1),
                        ] {
                            rules.push((here, single(raw_at(nx, ny)), d));
                        }
                    }
                }
            }
        }
    } else {
        // Band adjacency: a's trailing band equals b's leading band after a
        // one-tile shift. Bucket by leading band to avoid the quadratic
        // pairwise scan.
        let leading_x = |s: &[u32]| -> Vec<u32> {
            let mut band = Vec::with_capacity(w * (w - 1));
            for r in 0..w {
                for c in 0..w - 1 {
                    band.push(s[r * w + c]);
                }
            }
            band
        };
        let trailing_x = |s: &[u32]| -> Vec<u32> {
            let mut band = Vec::with_capacity(w * (w - 1));
            for r in 0..w {
                for c in 1..w {
                    band.push(s[r * w + c]);
                }
            }
            band
        };
        let leading_y = |s: &[u32]| s[..w * (w - 1)].to_vec();
        let trailing_y = |s: &[u32]| s[w..].to_vec();

        let mut by_leading_x: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
        let mut by_leading_y: HashMap<Vec<u32>, Vec<u32>> = HashMap::new();
        for (id, s) in supers.iter().enumerate() {
            by_leading_x
                .entry(leading_x(s))
                .or_default()
                .push(id as u32);
            by_leading_y
                .entry(leading_y(s))
                .or_default()
                .push(id as u32);
        }
        for (a, s) in supers.iter().enumerate() {
            if let Some(bs) = by_leading_x.get(&trailing_x(s)) {
                for &b in bs {
                    rules.push((a as u32, b, Direction::XPlus));
                }
            }
            if let Some(bs) = by_leading_y.get(&trailing_y(s)) {
                for &b in bs {
                    rules.push((a as u32, b, Direction::YPlus));
                }
            }
        }
    }

    let boundary = match cfg.boundary {
        BoundaryMode::Wrap => BoundaryPolicy::Open,
        BoundaryMode::HardZero => {
            // The exterior must be tileable by the zero tile itself.
            for d in [
                Direction::XPlus,
                Direction::XMinus,
                Direction::YPlus,
                Direction::YMinus,
            ] {
                rules.push((0, 0, d));
            }
            BoundaryPolicy::Zero { zero_tile: 0 }
        }
    };

    let tileset = TileSet::new(
        cfg.name.clone(),
        2,
        tile_count,
        &rules,
        Some(weights),
        boundary,
    )
    .expect("extraction produces a valid tileset");

    // Representative raw tile per super tile; pack the distinct ones into a
    // square-ish sheet.
    let rep_index = match cfg.representative {
        Representative::UpperLeft => 0,
        Representative::Middle => (w / 2) * w + w / 2,
    };
    let rep_raw: Vec<u32> = supers.iter().map(|s| s[rep_index]).collect();

    let mut packed: HashMap<u32, u32> = HashMap::new();
    let mut packed_order: Vec<u32> = Vec::new();
    for &raw in &rep_raw {
        let next = packed_order.len() as u32;
        packed.entry(raw).or_insert_with(|| {
            packed_order.push(raw);
            next
        });
    }
    let cols = (packed_order.len() as f64).sqrt().ceil().max(1.0) as u32;
    let rows = (packed_order.len() as u32).div_ceil(cols);
    let mut sheet = Pixmap::new(cols * t, rows * t);
    let zero_tile_pixels: Vec<u8> = (0..t * t).flat_map(|_| ZERO_GRAY).collect();
    for (slot, &raw) in packed_order.iter().enumerate() {
        let sx = (slot as u32 % cols) * t;
        let sy = (slot as u32 / cols) * t;
        let bytes = if raw == ZERO_RAW {
            &zero_tile_pixels
        } else {
            &raw_pixels[raw as usize]
        };
        let tile = Pixmap {
            width: t,
            height: t,
            rgba: bytes.clone(),
        };
        sheet.blit(&tile, 0, 0, t, t, sx, sy);
    }
    let rects: Vec<(u32, u32)> = rep_raw
        .iter()
        .map(|raw| {
            let slot = packed[raw];
            ((slot % cols) * t, (slot / cols) * t)
        })
        .collect();

    Ok(Extraction {
        tileset,
        sheet,
        rects,
        placements,
    })
}

/// Per-tile pixel blocks cut from a sheet, for matching tiles across
/// independently extracted tilesets.
pub fn sheet_tile_pixels(sheet: &Pixmap, rects: &[(u32, u32)], tile_pixels: u32) -> Vec<Vec<u8>> {
    rects
        .iter()
        .map(|&(x, y)| sheet.rect_bytes(x, y, tile_pixels, tile_pixels))
        .collect()
}

/// Map each tile of `sub` to the tile of `sup` with identical representative
/// pixels, then check that every rule of `sub` is a rule of `sup`. Returns
/// `None` when some tile has no pixel-identical counterpart.
pub fn mapped_rule_subset(
    sub: &TileSet,
    sub_pixels: &[Vec<u8>],
    sup: &TileSet,
    sup_pixels: &[Vec<u8>],
) -> Option<bool> {
    let index: HashMap<&[u8], TileId> = sup_pixels
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i as TileId))
        .collect();
    let mut map = Vec::with_capacity(sub_pixels.len());
    for p in sub_pixels {
        map.push(*index.get(p.as_slice())?);
    }
    for (a, b, d) in sub.canonical_rules() {
        let dir = Direction::from_index(d as usize).expect("canonical rules store valid dirs");
        if !sup.rule(map[a as usize], map[b as usize], dir) {
            return Some(false);
        }
    }
    Some(true)
}
