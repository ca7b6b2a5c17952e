//! Block-level solvers. The grid loop is generic over [`BlockSolver`]; the
//! breakout solver is the one that ships, selected through
//! [`crate::registry::make_block_solver`].

mod bms;

pub use bms::{BmsConfig, BreakoutSolver};

use poms_model::TileSet;
use rand::RngCore;

use crate::propagator::BlockState;

/// How a block-level solve ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockOutcome {
    /// Every unpinned cell holds a supported singleton.
    Success,
    /// The block could not even be made arc consistent under its pins and
    /// restrictions; the grid loop reverts the whole region.
    InitialAcFailure,
    /// Arc consistency held but no full resolution was found within the
    /// iteration budget; the grid loop erodes resolved boundaries.
    IterationExhausted,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveReport {
    pub outcome: BlockOutcome,
    /// Resolution steps attempted.
    pub iterations: u64,
    /// Contradictions hit (and softened) along the way.
    pub contradictions: u64,
}

/// A block-level resolution algorithm: takes a freshly initialized block and
/// tries to fully resolve it in place.
pub trait BlockSolver: Send + Sync {
    fn solve(&self, block: &mut BlockState, ts: &TileSet, rng: &mut dyn RngCore) -> SolveReport;
}
