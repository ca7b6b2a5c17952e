//! Scheduler strategies, each family behind a common trait.
//!
//! The grid-level loop is parameterized over a block choice scheduler and an
//! erosion choice scheduler; the breakout block solver over a tile choice
//! scheduler and a soften choice scheduler. Every variant is a trait object
//! so alternates can be registered by name and selected from configuration;
//! see [`crate::registry`].

mod block_choice;
mod erosion;
mod soften;
mod tile_choice;

pub use block_choice::{region_for_center, BlockChoice, CenterOut, Diagonal, Uniform};
pub use erosion::{ErosionChoice, EscalatingErosion};
pub use soften::{CenteredSoften, SoftenChoice};
pub use tile_choice::{MinEntropy, TileChoice, UniformCell};
