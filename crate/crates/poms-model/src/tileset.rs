use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Direction, DIRECTIONS};
use crate::mask::TileMask;

pub type TileId = u32;

/// A pairwise adjacency rule: tile `b` is admissible at the `dir` neighbor of
/// a cell holding tile `a`.
pub type Rule = (TileId, TileId, Direction);

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("tile id {id} out of range for domain of {domain} tiles")]
    TileIdOutOfRange { id: TileId, domain: usize },
    #[error("tile count must be at least 1")]
    EmptyDomain,
    #[error("dimension must be 2 or 3, got {0}")]
    BadDimension(u8),
    #[error("rule in direction {0} not allowed in a 2D tileset")]
    RuleDirectionForDim(Direction),
    #[error("expected {expected} weights, got {got}")]
    WeightCountMismatch { expected: usize, got: usize },
    #[error("weight for tile {0} is negative or not finite")]
    BadWeight(TileId),
    #[error("all tile weights are zero")]
    AllZeroWeights,
    #[error("rule symmetry violated for tiles {a}, {b} in direction {dir}")]
    AsymmetricRules {
        a: TileId,
        b: TileId,
        dir: Direction,
    },
}

/// What supports a tile whose neighbor constraint falls outside the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryPolicy {
    /// Out-of-grid neighbors impose no constraint.
    Open,
    /// Out-of-grid neighbors behave as a fixed tile; a tile survives at the
    /// grid edge only if it admits `zero_tile` in the outward direction.
    Zero { zero_tile: TileId },
}

/// Per-tile display information: pixel rectangles into a packed tile sheet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderTable {
    /// Path of the tile-sheet image, as stored in the tileset file. Relative
    /// paths are resolved against the tileset file's directory at load site.
    pub tile_sheet: String,
    pub tile_pixels: u32,
    /// Upper-left pixel corner of each tile's rectangle in the sheet.
    pub rects: Vec<(u32, u32)>,
}

/// The tile domain: `D` tiles, their directional adjacency rules stored as
/// `D x 6` neighbor masks, sampling weights and the grid boundary policy.
///
/// The rule relation is kept symmetric at all times:
/// `R(a, b, d) <=> R(b, a, d.opposite())`.
#[derive(Debug, Clone, PartialEq)]
pub struct TileSet {
    name: String,
    dim: u8,
    tile_count: usize,
    /// `adjacency[a * 6 + d]` = tiles admissible at the `d` neighbor of `a`.
    adjacency: Vec<TileMask>,
    weights: Vec<f64>,
    boundary: BoundaryPolicy,
    render: Option<RenderTable>,
}

impl TileSet {
    /// Build a tileset from a rule list. The symmetric closure of the rules
    /// is applied: each supplied `(a, b, d)` also admits `(b, a, d.opposite())`.
    /// Duplicate rules collapse. Weights default to 1 per tile.
    pub fn new(
        name: impl Into<String>,
        dim: u8,
        tile_count: usize,
        rules: &[Rule],
        weights: Option<Vec<f64>>,
        boundary: BoundaryPolicy,
    ) -> Result<TileSet, ModelError> {
        if tile_count == 0 {
            return Err(ModelError::EmptyDomain);
        }
        if dim != 2 && dim != 3 {
            return Err(ModelError::BadDimension(dim));
        }
        if let BoundaryPolicy::Zero { zero_tile } = boundary {
            if zero_tile as usize >= tile_count {
                return Err(ModelError::TileIdOutOfRange {
                    id: zero_tile,
                    domain: tile_count,
                });
            }
        }
        let weights = match weights {
            Some(w) => {
                if w.len() != tile_count {
                    return Err(ModelError::WeightCountMismatch {
                        expected: tile_count,
                        got: w.len(),
                    });
                }
                for (t, &v) in w.iter().enumerate() {
                    if !v.is_finite() || v < 0.0 {
                        return Err(ModelError::BadWeight(t as TileId));
                    }
                }
                if w.iter().all(|&v| v == 0.0) {
                    return Err(ModelError::AllZeroWeights);
                }
                w
            }
            None => vec![1.0; tile_count],
        };

        let mut adjacency = vec![TileMask::empty(tile_count); tile_count * 6];
        for &(a, b, dir) in rules {
            for id in [a, b] {
                if id as usize >= tile_count {
                    return Err(ModelError::TileIdOutOfRange {
                        id,
                        domain: tile_count,
                    });
                }
            }
            if dim == 2 && dir.is_z() {
                return Err(ModelError::RuleDirectionForDim(dir));
            }
            adjacency[a as usize * 6 + dir.index()].insert(b);
            adjacency[b as usize * 6 + dir.opposite().index()].insert(a);
        }

        Ok(TileSet {
            name: name.into(),
            dim,
            tile_count,
            adjacency,
            weights,
            boundary,
            render: None,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// 2 or 3; 2D tilesets constrain only the X and Y directions.
    pub fn dim(&self) -> u8 {
        self.dim
    }

    /// Size of the tile domain, `D`.
    pub fn tile_count(&self) -> usize {
        self.tile_count
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, tile: TileId) -> f64 {
        self.weights[tile as usize]
    }

    pub fn boundary(&self) -> BoundaryPolicy {
        self.boundary
    }

    pub fn render_table(&self) -> Option<&RenderTable> {
        self.render.as_ref()
    }

    pub fn set_render_table(&mut self, render: Option<RenderTable>) {
        self.render = render;
    }

    /// Whether tile `b` may sit at the `dir` neighbor of a cell holding `a`.
    pub fn rule(&self, a: TileId, b: TileId, dir: Direction) -> bool {
        self.adjacency[a as usize * 6 + dir.index()].contains(b)
    }

    /// Tiles admissible at the `dir` neighbor of a cell holding `tile`.
    pub fn support_mask(&self, tile: TileId, dir: Direction) -> &TileMask {
        &self.adjacency[tile as usize * 6 + dir.index()]
    }

    /// Whether `tile` is supported when its `dir` neighbor falls outside the
    /// grid. Z faces of 2D problems are always supported.
    pub fn boundary_supports(&self, tile: TileId, dir: Direction) -> bool {
        if self.dim == 2 && dir.is_z() {
            return true;
        }
        match self.boundary {
            BoundaryPolicy::Open => true,
            BoundaryPolicy::Zero { zero_tile } => self.rule(tile, zero_tile, dir),
        }
    }

    /// Same rules with the boundary policy replaced by `Open`; used for
    /// correlation-length probes on scratch blocks.
    pub fn with_open_boundary(&self) -> TileSet {
        let mut ts = self.clone();
        ts.boundary = BoundaryPolicy::Open;
        ts
    }

    /// Check `R(a, b, d) <=> R(b, a, d.opposite())` over all rules; violations
    /// can only come from hand-assembled or corrupted data.
    pub fn validate_symmetry(&self) -> Result<(), ModelError> {
        for a in 0..self.tile_count as TileId {
            for dir in DIRECTIONS {
                for b in self.support_mask(a, dir).iter() {
                    if !self.rule(b, a, dir.opposite()) {
                        return Err(ModelError::AsymmetricRules { a, b, dir });
                    }
                }
            }
        }
        Ok(())
    }

    /// The rule relation in canonical form: all `(a, b, dir)` with `a <= b`,
    /// sorted. The dropped mirror entries are implied by symmetry.
    pub fn canonical_rules(&self) -> Vec<(TileId, TileId, u8)> {
        let mut out = Vec::new();
        for a in 0..self.tile_count as TileId {
            for dir in DIRECTIONS {
                for b in self.support_mask(a, dir).iter() {
                    if a <= b {
                        out.push((a, b, dir.index() as u8));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Whether every rule of `self` is also a rule of `other`. Both tilesets
    /// must share tile identity.
    pub fn is_rule_subset_of(&self, other: &TileSet) -> bool {
        if self.tile_count != other.tile_count {
            return false;
        }
        self.adjacency
            .iter()
            .zip(&other.adjacency)
            .all(|(a, b)| a.is_subset_of(b))
    }
}

/// Small built-in tilesets used in tests, examples and documentation.
pub mod samples {
    use super::*;

    fn all_2d_dirs() -> [Direction; 4] {
        [
            Direction::XPlus,
            Direction::XMinus,
            Direction::YPlus,
            Direction::YMinus,
        ]
    }

    /// `D` tiles where every pairing is admissible in every 2D direction.
    pub fn free(tile_count: usize) -> TileSet {
        let mut rules = Vec::new();
        for a in 0..tile_count as TileId {
            for b in 0..tile_count as TileId {
                for d in all_2d_dirs() {
                    rules.push((a, b, d));
                }
            }
        }
        TileSet::new(
            format!("free-{tile_count}"),
            2,
            tile_count,
            &rules,
            None,
            BoundaryPolicy::Open,
        )
        .expect("free tileset is valid")
    }

    /// Two tiles that must alternate in every 2D direction; valid grids are
    /// the two checkerboard colorings.
    pub fn checkerboard2() -> TileSet {
        let rules: Vec<Rule> = all_2d_dirs().iter().map(|&d| (0, 1, d)).collect();
        TileSet::new("checkerboard-2", 2, 2, &rules, None, BoundaryPolicy::Open)
            .expect("checkerboard tileset is valid")
    }

    /// Three tiles forming a chain: 0-0, 0-1, 1-2 and 2-2 are admissible in
    /// every 2D direction. Constraint propagation dies out at distance one,
    /// so the correlation probe reports a small finite length.
    pub fn chain3() -> TileSet {
        let mut rules = Vec::new();
        for d in all_2d_dirs() {
            rules.push((0, 0, d));
            rules.push((0, 1, d));
            rules.push((1, 2, d));
            rules.push((2, 2, d));
        }
        TileSet::new("chain-3", 2, 3, &rules, None, BoundaryPolicy::Open)
            .expect("chain tileset is valid")
    }
}
