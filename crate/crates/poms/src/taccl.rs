//! Tile correlation-length probing.
//!
//! For each tile in isolation: resolve the center cell of an otherwise
//! indeterminate scratch block, propagate to a fixpoint and take the minimal
//! bounding box of every cell whose domain changed. The maximum extent over
//! all tiles and axes estimates how far one tile choice reaches, which in
//! turn informs the block size: blocks smaller than this length risk getting
//! stuck. A bounding box that touches a scratch face means the extent is not
//! bounded by this scratch size — either genuinely unbounded or the scratch
//! is too small.
//!
//! The probe runs under an open boundary regardless of the tileset's policy,
//! and a finite result here does not rule out longer-range correlations
//! implied by the constraint structure; treat it as a coarse measure.

use poms_model::{BlockRegion, Coord, Dims, GridState, SetupRestriction, TileId, TileSet};
use serde::Serialize;
use thiserror::Error;

use crate::propagator::{BlockState, Propagation};

#[derive(Debug, Error, PartialEq)]
pub enum TacclError {
    #[error("scratch extent {0} is even; every used axis needs a unique center")]
    EvenScratchAxis(usize),
    #[error("a 2D tileset requires a scratch with z extent 1, got {0}")]
    DimMismatch(usize),
}

#[derive(Debug, Clone)]
pub struct TacclConfig {
    pub scratch: Dims,
    pub restrictions: Vec<SetupRestriction>,
}

impl TacclConfig {
    /// Default scratch: 65 cells per used axis, comfortably above the finite
    /// correlation lengths of typical extracted tilesets.
    pub fn for_tileset(ts: &TileSet) -> TacclConfig {
        let z = if ts.dim() == 2 { 1 } else { 65 };
        TacclConfig {
            scratch: Dims::new(65, 65, z),
            restrictions: Vec::new(),
        }
    }

    pub fn with_scratch(ts: &TileSet, extent: usize) -> TacclConfig {
        let z = if ts.dim() == 2 { 1 } else { extent };
        TacclConfig {
            scratch: Dims::new(extent, extent, z),
            restrictions: Vec::new(),
        }
    }
}

/// Propagation footprint of resolving one tile at the scratch center.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TileProbe {
    pub tile: TileId,
    /// Bounding-box extent per axis; an unbounded axis reports the full
    /// scratch extent.
    pub extents: [usize; 3],
    /// Per axis: the bounding box touched a scratch face on this axis.
    pub unbounded: [bool; 3],
    /// Resolving this tile centrally contradicted; extents cover the cells
    /// altered before detection.
    pub centrally_unplaceable: bool,
}

impl TileProbe {
    pub fn unbounded_any(&self) -> bool {
        self.unbounded.iter().any(|&b| b)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TacclReport {
    pub scratch: [usize; 3],
    pub per_tile: Vec<TileProbe>,
    /// Max extent over all tiles and axes.
    pub length: usize,
    /// Some tile's propagation reached a scratch face.
    pub unbounded: bool,
    pub axis_length: [usize; 3],
    pub axis_unbounded: [bool; 3],
    pub centrally_unplaceable: Vec<TileId>,
}

impl TacclReport {
    /// `"42"`, or `"inf"` when any probe hit a scratch face.
    pub fn length_label(&self) -> String {
        if self.unbounded {
            "inf".to_string()
        } else {
            self.length.to_string()
        }
    }
}

/// Measure the propagation extent of every tile on a fresh scratch block.
pub fn compute_taccl(ts: &TileSet, cfg: &TacclConfig) -> Result<TacclReport, TacclError> {
    let scratch = cfg.scratch;
    for axis in 0..3 {
        if scratch.axis(axis).is_multiple_of(2) {
            return Err(TacclError::EvenScratchAxis(scratch.axis(axis)));
        }
    }
    if ts.dim() == 2 && scratch.z != 1 {
        return Err(TacclError::DimMismatch(scratch.z));
    }

    let open = ts.with_open_boundary();
    let grid = GridState::new(scratch);
    let region = BlockRegion::new(Coord::new(0, 0, 0), scratch, scratch).expect("scratch region");
    let center = Coord::new(scratch.x / 2, scratch.y / 2, scratch.z / 2);
    let center_idx = scratch.index(center);

    let mut per_tile = Vec::with_capacity(ts.tile_count());
    for tile in 0..ts.tile_count() as TileId {
        let mut block = BlockState::init_block(region, &open, &grid, &cfg.restrictions);
        let baseline = block.snapshot();

        let placeable = block.contradiction_cell().is_none()
            && !block.is_pinned(center_idx)
            && block.mask(center_idx).contains(tile);
        let contradicted = if placeable {
            let r1 = block.resolve_cell(&open, center_idx, tile);
            let r2 = match r1 {
                Propagation::Consistent => block.make_arc_consistent(&open),
                contradiction => contradiction,
            };
            matches!(r2, Propagation::Contradiction { .. })
        } else {
            true
        };

        // The center always counts as altered, so the minimum extent is 1.
        let mut min = [center.x, center.y, center.z];
        let mut max = min;
        for cell in block.altered_cells(&baseline) {
            let c = scratch.coord(cell);
            for (axis, v) in [c.x, c.y, c.z].into_iter().enumerate() {
                min[axis] = min[axis].min(v);
                max[axis] = max[axis].max(v);
            }
        }

        let mut extents = [0usize; 3];
        let mut unbounded = [false; 3];
        for axis in 0..3 {
            let len = scratch.axis(axis);
            let touched = len > 1 && (min[axis] == 0 || max[axis] == len - 1);
            unbounded[axis] = touched;
            extents[axis] = if touched {
                len
            } else {
                max[axis] - min[axis] + 1
            };
        }

        per_tile.push(TileProbe {
            tile,
            extents,
            unbounded,
            centrally_unplaceable: contradicted,
        });
    }

    let mut axis_length = [1usize; 3];
    let mut axis_unbounded = [false; 3];
    for probe in &per_tile {
        for axis in 0..3 {
            axis_length[axis] = axis_length[axis].max(probe.extents[axis]);
            axis_unbounded[axis] |= probe.unbounded[axis];
        }
    }
    let length = axis_length.iter().copied().max().unwrap_or(1);
    let unbounded = axis_unbounded.iter().any(|&b| b);
    let centrally_unplaceable = per_tile
        .iter()
        .filter(|p| p.centrally_unplaceable)
        .map(|p| p.tile)
        .collect();

    Ok(TacclReport {
        scratch: [scratch.x, scratch.y, scratch.z],
        per_tile,
        length,
        unbounded,
        axis_length,
        axis_unbounded,
        centrally_unplaceable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use poms_model::samples::{chain3, checkerboard2, free};
    use poms_model::{CellSelector, RestrictionAction};

    #[test]
    fn free_tileset_has_length_one() {
        let ts = free(2);
        let report = compute_taccl(&ts, &TacclConfig::with_scratch(&ts, 9)).unwrap();
        assert_eq!(report.length, 1);
        assert!(!report.unbounded);
        assert_eq!(report.length_label(), "1");
        for probe in &report.per_tile {
            assert_eq!(probe.extents, [1, 1, 1]);
            assert!(!probe.unbounded_any());
            assert!(!probe.centrally_unplaceable);
        }
    }

    #[test]
    fn checkerboard_alternation_reaches_every_face() {
        let ts = checkerboard2();
        let report = compute_taccl(&ts, &TacclConfig::with_scratch(&ts, 9)).unwrap();
        assert!(report.unbounded);
        assert_eq!(report.length, 9);
        assert_eq!(report.length_label(), "inf");
        assert_eq!(report.axis_unbounded, [true, true, false]);
        for probe in &report.per_tile {
            assert_eq!(probe.unbounded, [true, true, false]);
            assert_eq!(probe.extents, [9, 9, 1]);
        }
    }

    #[test]
    fn chain_tileset_has_a_small_finite_length() {
        let ts = chain3();
        let report = compute_taccl(&ts, &TacclConfig::with_scratch(&ts, 9)).unwrap();
        assert!(!report.unbounded);
        // One resolution prunes only the face neighbors: a 3x3 footprint.
        assert_eq!(report.length, 3);
        assert_eq!(report.axis_length, [3, 3, 1]);
    }

    #[test]
    fn three_dimensional_probes_measure_all_axes() {
        // Chain rules extended to all six directions: the footprint is a
        // 3x3x3 cross section around the center.
        let mut rules = Vec::new();
        for d in poms_model::DIRECTIONS {
            rules.push((0, 0, d));
            rules.push((0, 1, d));
            rules.push((1, 2, d));
            rules.push((2, 2, d));
        }
        let ts = poms_model::TileSet::new(
            "chain-3d",
            3,
            3,
            &rules,
            None,
            poms_model::BoundaryPolicy::Open,
        )
        .unwrap();
        let report = compute_taccl(&ts, &TacclConfig::with_scratch(&ts, 9)).unwrap();
        assert!(!report.unbounded);
        assert_eq!(report.length, 3);
        assert_eq!(report.axis_length, [3, 3, 3]);
    }

    #[test]
    fn restriction_can_make_a_tile_centrally_unplaceable() {
        let ts = checkerboard2();
        let mut cfg = TacclConfig::with_scratch(&ts, 5);
        // The +X neighbor of the center may only hold tile 0, so resolving
        // the center to 0 contradicts there.
        cfg.restrictions = vec![poms_model::SetupRestriction {
            selector: CellSelector::Cell(poms_model::Coord::new(3, 2, 0)),
            action: RestrictionAction::RemoveTiles(vec![1]),
        }];
        let report = compute_taccl(&ts, &cfg).unwrap();
        assert_eq!(report.centrally_unplaceable, vec![0]);
        assert!(report.per_tile[0].centrally_unplaceable);
        assert!(!report.per_tile[1].centrally_unplaceable);
    }

    #[test]
    fn scratch_validation() {
        let ts = checkerboard2();
        let bad = TacclConfig {
            scratch: poms_model::Dims::new(8, 9, 1),
            restrictions: Vec::new(),
        };
        assert!(matches!(
            compute_taccl(&ts, &bad),
            Err(TacclError::EvenScratchAxis(8))
        ));
        let bad_z = TacclConfig {
            scratch: poms_model::Dims::new(9, 9, 9),
            restrictions: Vec::new(),
        };
        assert!(matches!(
            compute_taccl(&ts, &bad_z),
            Err(TacclError::DimMismatch(9))
        ));
    }
}
