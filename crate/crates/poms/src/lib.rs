//! Constraint based tiling generation built around punch out model
//! synthesis: a grid-level loop that progressively resolves blocks with a
//! breakout block solver over AC4 constraint propagation, plus tile
//! constraint extraction from exemplar images, a tile correlation-length
//! probe and the file formats tying it all together.
//!
//! The high-level entry points:
//!
//! * [`synthesis::run`] solves a grid from a [`poms_model::TileSet`].
//! * [`extract::extract_tile_set`] infers a tileset from an exemplar image.
//! * [`taccl::compute_taccl`] measures per-tile propagation extents to guide
//!   block sizing.
//! * [`registry`] names the pluggable scheduler and solver strategies.

pub mod extract;
pub mod io;
pub mod propagator;
pub mod registry;
pub mod schedule;
pub mod solver;
pub mod synthesis;
pub mod taccl;

pub use poms_model as model;
