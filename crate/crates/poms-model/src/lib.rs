//! Shared domain types for constraint based tiling generation.
//!
//! A tiling problem assigns one tile out of a domain of `D` tiles to every
//! cell of a rectangular cuboid grid, subject to pairwise nearest-neighbor
//! adjacency rules in each of the six axis directions. This crate holds the
//! vocabulary shared by the solvers, the extraction pipeline and the file
//! formats: [`TileSet`], [`TileMask`], [`GridState`], [`BlockRegion`] and
//! [`SetupRestriction`].
//!
//! Two-dimensional problems are represented as 3D with a Z extent of one;
//! tilesets carry their dimensionality so that Z faces of 2D problems are
//! treated as unconditionally supported.

mod geom;
mod grid;
mod mask;
mod restrict;
mod tileset;

pub use geom::{BlockRegion, Coord, Dims, Direction, DIRECTIONS};
pub use grid::GridState;
pub use mask::TileMask;
pub use restrict::{CellSelector, RestrictionAction, SetupRestriction};
pub use tileset::{samples, BoundaryPolicy, ModelError, RenderTable, Rule, TileId, TileSet};
