use poms_model::{Dims, TileSet};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::propagator::{BlockState, Propagation};
use crate::schedule::{SoftenChoice, TileChoice};
use crate::solver::{BlockOutcome, BlockSolver, SolveReport};

/// Configuration for the breakout solver.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BmsConfig {
    /// Resolution step budget; defaults to ten times the block cell count.
    pub max_iterations: Option<u64>,
    /// Per-axis extent of the region softened around a contradiction;
    /// defaults to three quarters of the block extent per axis.
    pub soften: Option<Dims>,
    /// Tile choice scheduler name, resolved via the registry.
    pub tile_choice: String,
    /// ChaCha stream id for the solver's randomness, decorrelating it from
    /// the grid-level scheduling stream.
    pub rng_stream: u64,
}

impl Default for BmsConfig {
    fn default() -> BmsConfig {
        BmsConfig {
            max_iterations: None,
            soften: None,
            tile_choice: "min-entropy".to_string(),
            rng_stream: 1,
        }
    }
}

/// Breakout model synthesis: repeatedly resolve a chosen cell and propagate;
/// on contradiction, revert the step, soften a region around the
/// contradiction back to the initial arc consistent state and continue.
///
/// The block must be freshly initialized (restrictions applied, nothing
/// propagated). A block that cannot reach an initial arc consistent state
/// fails with [`BlockOutcome::InitialAcFailure`]; a contradiction hit while
/// re-propagating after a soften, or running out of iterations, fails with
/// [`BlockOutcome::IterationExhausted`].
pub struct BreakoutSolver {
    max_iterations: Option<u64>,
    tile_choice: Box<dyn TileChoice>,
    soften: Box<dyn SoftenChoice>,
}

impl BreakoutSolver {
    pub fn new(
        max_iterations: Option<u64>,
        tile_choice: Box<dyn TileChoice>,
        soften: Box<dyn SoftenChoice>,
    ) -> BreakoutSolver {
        BreakoutSolver {
            max_iterations,
            tile_choice,
            soften,
        }
    }
}

impl BlockSolver for BreakoutSolver {
    fn solve(&self, block: &mut BlockState, ts: &TileSet, rng: &mut dyn RngCore) -> SolveReport {
        let mut iterations = 0;
        let mut contradictions = 0;

        if let Propagation::Contradiction { .. } = block.make_arc_consistent(ts) {
            return SolveReport {
                outcome: BlockOutcome::InitialAcFailure,
                iterations,
                contradictions,
            };
        }

        let initial = block.snapshot();
        let mut before = block.snapshot();
        let budget = self
            .max_iterations
            .unwrap_or(10 * block.cell_count() as u64)
            .max(1);

        while !block.is_fully_resolved() {
            if iterations >= budget {
                return SolveReport {
                    outcome: BlockOutcome::IterationExhausted,
                    iterations,
                    contradictions,
                };
            }
            iterations += 1;

            block.snapshot_into(&mut before);
            let (cell, tile) = self
                .tile_choice
                .choose(block, ts, rng)
                .expect("unresolved block has a choosable cell");

            if let Propagation::Contradiction { cell: conflict } =
                block.resolve_cell(ts, cell, tile)
            {
                contradictions += 1;
                let region = self.soften.region(block, conflict, rng);
                block.restore_with_region(&before, &initial, &region, ts);
                if let Propagation::Contradiction { .. } = block.make_arc_consistent(ts) {
                    return SolveReport {
                        outcome: BlockOutcome::IterationExhausted,
                        iterations,
                        contradictions,
                    };
                }
            }
        }

        SolveReport {
            outcome: BlockOutcome::Success,
            iterations,
            contradictions,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry;
    use poms_model::samples::{checkerboard2, free};
    use poms_model::{BlockRegion, Coord, GridState, SetupRestriction, TileId};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn solver(cfg: &BmsConfig) -> Box<dyn BlockSolver> {
        registry::make_block_solver("bms", cfg).unwrap()
    }

    fn fresh(ts: &TileSet, dims: Dims, restrictions: &[SetupRestriction]) -> BlockState {
        let grid = GridState::new(dims);
        let region = BlockRegion::new(Coord::new(0, 0, 0), dims, dims).unwrap();
        BlockState::init_block(region, ts, &grid, restrictions)
    }

    #[test]
    fn free_block_resolves_in_one_step_per_cell() {
        let ts = free(2);
        let mut block = fresh(&ts, Dims::new(4, 4, 1), &[]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let report = solver(&BmsConfig::default()).solve(&mut block, &ts, &mut rng);
        assert_eq!(report.outcome, BlockOutcome::Success);
        assert_eq!(report.iterations, 16);
        assert_eq!(report.contradictions, 0);
    }

    #[test]
    fn opposite_parity_pins_fail_initial_ac() {
        let ts = checkerboard2();
        let pins = [
            SetupRestriction::pin_cell(Coord::new(0, 0, 0), vec![0]),
            SetupRestriction::pin_cell(Coord::new(2, 0, 0), vec![1]),
        ];
        let mut block = fresh(&ts, Dims::new(3, 1, 1), &pins);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let report = solver(&BmsConfig::default()).solve(&mut block, &ts, &mut rng);
        assert_eq!(report.outcome, BlockOutcome::InitialAcFailure);
        assert_eq!(report.iterations, 0);
    }

    #[test]
    fn checkerboard_8x8_yields_an_alternating_coloring() {
        let ts = checkerboard2();
        let dims = Dims::new(8, 8, 1);
        let mut block = fresh(&ts, dims, &[]);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let report = solver(&BmsConfig::default()).solve(&mut block, &ts, &mut rng);
        assert_eq!(report.outcome, BlockOutcome::Success);
        // Exactly two valid realizations exist: the two parities.
        let parity = block.mask(0).sole_tile().unwrap();
        for i in 0..dims.cell_count() {
            let c = dims.coord(i);
            let expected = (parity + (c.x + c.y) as TileId) % 2;
            assert_eq!(block.mask(i).sole_tile(), Some(expected));
        }
    }

    #[test]
    fn iteration_budget_of_one_exhausts_on_nontrivial_blocks() {
        // The free tileset never cascades, so one step resolves one cell
        // and 63 stay open.
        let ts = free(2);
        let mut block = fresh(&ts, Dims::new(8, 8, 1), &[]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cfg = BmsConfig {
            max_iterations: Some(1),
            ..BmsConfig::default()
        };
        let report = solver(&cfg).solve(&mut block, &ts, &mut rng);
        assert_eq!(report.outcome, BlockOutcome::IterationExhausted);
        assert_eq!(report.iterations, 1);
    }

    #[test]
    fn identical_seed_gives_identical_resolution() {
        let ts = checkerboard2();
        let dims = Dims::new(6, 6, 1);
        let run = |seed: u64| {
            let mut block = fresh(&ts, dims, &[]);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let report = solver(&BmsConfig::default()).solve(&mut block, &ts, &mut rng);
            let masks: Vec<Option<u32>> = (0..dims.cell_count())
                .map(|i| block.mask(i).sole_tile())
                .collect();
            (report.outcome, masks)
        };
        assert_eq!(run(9), run(9));
    }
}
