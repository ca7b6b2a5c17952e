use serde::{Deserialize, Serialize};

use crate::geom::{Coord, Dims};
use crate::tileset::TileId;

/// Which cells a setup restriction applies to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellSelector {
    Cell(Coord),
    /// Inclusive coordinate range.
    Range {
        min: Coord,
        max: Coord,
    },
    /// The outer one-cell shell of the grid. Axes of extent one do not count
    /// toward frame membership, so the frame of a 2D grid is its border ring.
    GridFrame,
}

impl CellSelector {
    pub fn matches(&self, c: Coord, grid: Dims) -> bool {
        match self {
            CellSelector::Cell(sel) => *sel == c,
            CellSelector::Range { min, max } => {
                c.x >= min.x
                    && c.x <= max.x
                    && c.y >= min.y
                    && c.y <= max.y
                    && c.z >= min.z
                    && c.z <= max.z
            }
            CellSelector::GridFrame => {
                (grid.x > 1 && (c.x == 0 || c.x == grid.x - 1))
                    || (grid.y > 1 && (c.y == 0 || c.y == grid.y - 1))
                    || (grid.z > 1 && (c.z == 0 || c.z == grid.z - 1))
            }
        }
    }
}

/// What a setup restriction does to a matched cell. Actions are idempotent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RestrictionAction {
    AddTiles(Vec<TileId>),
    RemoveTiles(Vec<TileId>),
    /// Fix the cell's domain to exactly this set and exempt the cell from
    /// constraint propagation. Pinning the full domain keeps a cell
    /// permanently unresolved.
    Pin(Vec<TileId>),
}

/// A setup rule applied to block cells after grid pinning, in list order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetupRestriction {
    pub selector: CellSelector,
    pub action: RestrictionAction,
}

impl SetupRestriction {
    pub fn pin_cell(c: Coord, tiles: Vec<TileId>) -> SetupRestriction {
        SetupRestriction {
            selector: CellSelector::Cell(c),
            action: RestrictionAction::Pin(tiles),
        }
    }

    /// Pin the grid's outer frame to the full domain: the frame constrains
    /// its neighbors but never resolves.
    pub fn pinned_frame(domain: usize) -> SetupRestriction {
        SetupRestriction {
            selector: CellSelector::GridFrame,
            action: RestrictionAction::Pin((0..domain as TileId).collect()),
        }
    }
}
