//! The grid-level solving loop.
//!
//! Each round punches a block out of the grid: the block's edge cells take
//! pinned copies of adjacent resolved grid values, the block solver tries to
//! fully resolve the block, and on success the resolved tiles are written
//! back. A block that cannot reach an initial arc consistent state reverts
//! its grid region to indeterminate; a solver that gives up triggers
//! probabilistic erosion of resolved region boundaries. The grid itself
//! stores one tile (or an indeterminate mark) per cell, so memory scales
//! with the block size, not the grid size.

use poms_model::{
    Coord, Dims, GridState, RestrictionAction, SetupRestriction, TileSet, DIRECTIONS,
};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::propagator::BlockState;
use crate::registry::{self, BlockChoiceParams, UnknownStrategy};
use crate::schedule::{region_for_center, ErosionChoice, EscalatingErosion};
use crate::solver::{BlockOutcome, BmsConfig};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ErosionConfig {
    /// Erosion probability on the first failure.
    pub base_probability: f64,
    /// Cap reached after repeated failures.
    pub max_probability: f64,
}

impl Default for ErosionConfig {
    fn default() -> ErosionConfig {
        ErosionConfig {
            base_probability: 0.02,
            max_probability: 0.5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PomsConfig {
    pub block_size: Dims,
    /// Block choice scheduler name (see the registry).
    pub block_choice: String,
    /// Decay length for distance-weighted block choice; defaults to a
    /// quarter of the largest grid extent.
    pub bcs_lambda: Option<f64>,
    pub erosion: ErosionConfig,
    /// Round budget; defaults to 64 coverage passes worth of blocks.
    pub max_rounds: Option<u64>,
    /// Emit a grid snapshot to the observer every this many rounds.
    pub snapshot_interval: Option<u64>,
    pub seed: u64,
    pub restrictions: Vec<SetupRestriction>,
    /// Block solver name (see the registry).
    pub solver: String,
    pub bms: BmsConfig,
}

impl PomsConfig {
    pub fn new(block_size: Dims, seed: u64) -> PomsConfig {
        PomsConfig {
            block_size,
            block_choice: "uniform".to_string(),
            bcs_lambda: None,
            erosion: ErosionConfig::default(),
            max_rounds: None,
            snapshot_interval: None,
            seed,
            restrictions: Vec::new(),
            solver: "bms".to_string(),
            bms: BmsConfig::default(),
        }
    }

    /// Stable hex digest of the canonical JSON form, recorded in snapshot
    /// files so outputs can be traced back to their configuration.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        // FNV-1a 64.
        let mut h = 0xcbf29ce484222325u64;
        for b in json.as_bytes() {
            h ^= u64::from(*b);
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("block size {block} does not fit grid {grid}")]
    BlockTooLarge { block: Dims, grid: Dims },
    #[error("erosion probabilities must satisfy 0 <= base <= max <= 1")]
    BadErosion,
    #[error("soften extent must be at least 1 per axis")]
    BadSoften,
    #[error("a {dim}D tileset requires a grid with z extent {expected}, got {got}")]
    DimMismatch {
        dim: u8,
        expected: &'static str,
        got: usize,
    },
    #[error("restriction references tile id {id} outside the domain of {domain} tiles")]
    BadRestrictionTile { id: u32, domain: usize },
    #[error("pin restriction with an empty tile list can never be satisfied")]
    EmptyPin,
    #[error("pinned tiles at adjacent cells ({0},{1},{2}) and ({3},{4},{5}) violate the rules")]
    ConflictingPins(usize, usize, usize, usize, usize, usize),
    #[error(transparent)]
    UnknownStrategy(#[from] UnknownStrategy),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FinalStatus {
    Resolved,
    RoundsExhausted,
}

/// Grid-level view of a round's block outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RoundOutcome {
    Success,
    InitialAcFailure,
    SolverFailure,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundReport {
    pub round: u64,
    pub region: poms_model::BlockRegion,
    pub outcome: RoundOutcome,
    /// Cells newly written into the grid this round.
    pub cells_resolved: usize,
    /// Resolved cells reverted by region reversion.
    pub cells_reverted: usize,
    /// Resolved cells reverted by erosion.
    pub cells_eroded: usize,
    pub solver_iterations: u64,
    pub solver_contradictions: u64,
    pub resolved_fraction: f64,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct RunStats {
    /// Largest block-proportional allocation seen across all rounds.
    pub max_block_bytes: usize,
    /// Grid storage footprint.
    pub grid_bytes: usize,
    pub rounds: u64,
    pub erosion_invocations: u64,
}

#[derive(Debug)]
pub struct RunOutput {
    pub grid: GridState,
    pub reports: Vec<RoundReport>,
    pub status: FinalStatus,
    pub stats: RunStats,
}

/// Hooks into the running loop, e.g. for slideshow snapshots.
pub trait RoundObserver {
    fn on_round(&mut self, _grid: &GridState, _report: &RoundReport) {}
    /// Called every `snapshot_interval` rounds when configured.
    fn on_snapshot(&mut self, _grid: &GridState, _round: u64) {}
}

struct NoopObserver;
impl RoundObserver for NoopObserver {}

/// Solve a fresh, fully indeterminate grid of `dims`.
pub fn run(ts: &TileSet, dims: Dims, cfg: &PomsConfig) -> Result<RunOutput, ConfigError> {
    run_observed(ts, dims, cfg, &mut NoopObserver)
}

pub fn run_observed(
    ts: &TileSet,
    dims: Dims,
    cfg: &PomsConfig,
    observer: &mut dyn RoundObserver,
) -> Result<RunOutput, ConfigError> {
    run_grid(ts, GridState::new(dims), cfg, observer)
}

/// Solve starting from an existing grid state.
pub fn run_grid(
    ts: &TileSet,
    mut grid: GridState,
    cfg: &PomsConfig,
    observer: &mut dyn RoundObserver,
) -> Result<RunOutput, ConfigError> {
    let dims = grid.dims();
    validate(ts, dims, cfg)?;

    let lambda = cfg
        .bcs_lambda
        .unwrap_or_else(|| (dims.x.max(dims.y).max(dims.z) as f64 / 4.0).max(1.0));
    let bcs = registry::make_block_choice(&cfg.block_choice, &BlockChoiceParams { lambda })?;
    let solver = registry::make_block_solver(&cfg.solver, &cfg.bms)?;
    let ecs = EscalatingErosion {
        base: cfg.erosion.base_probability,
        max: cfg.erosion.max_probability,
    };

    // Cells under a Pin restriction are owned by the restriction: they are
    // never eroded or reverted, singleton pins resolve up front, and
    // multi-tile pins stay indeterminate without blocking termination.
    let mut restriction_pinned = vec![false; dims.cell_count()];
    let mut never_resolves = 0usize;
    for r in &cfg.restrictions {
        if let RestrictionAction::Pin(tiles) = &r.action {
            for c in dims.iter() {
                if !r.selector.matches(c, dims) {
                    continue;
                }
                let idx = dims.index(c);
                if !restriction_pinned[idx] {
                    restriction_pinned[idx] = true;
                    if tiles.len() == 1 {
                        grid.set(idx, Some(tiles[0]));
                    } else if !grid.is_resolved(idx) {
                        never_resolves += 1;
                    }
                }
            }
        }
    }
    let target_resolved = dims.cell_count() - never_resolves;

    // Pre-resolved pins bypass the block solver, so conflicting adjacent
    // pins must be rejected up front rather than poisoning every round.
    for c in dims.iter() {
        let idx = dims.index(c);
        if !restriction_pinned[idx] {
            continue;
        }
        let Some(t) = grid.get(idx) else { continue };
        for d in DIRECTIONS {
            if let Some(n) = c.neighbor(d, dims) {
                if let Some(u) = grid.get_at(n) {
                    if !ts.rule(t, u, d) {
                        return Err(ConfigError::ConflictingPins(c.x, c.y, c.z, n.x, n.y, n.z));
                    }
                }
            }
        }
    }

    let max_rounds = cfg
        .max_rounds
        .unwrap_or_else(|| 64 * dims.cell_count().div_ceil(cfg.block_size.cell_count()) as u64)
        .max(1);

    let mut sched_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut solver_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    solver_rng.set_stream(cfg.bms.rng_stream);

    let mut reports = Vec::new();
    let mut stats = RunStats {
        grid_bytes: grid.storage_bytes(),
        ..RunStats::default()
    };
    let mut status = FinalStatus::RoundsExhausted;

    for round in 0..max_rounds {
        if grid.resolved_count() >= target_resolved {
            status = FinalStatus::Resolved;
            break;
        }

        let center = bcs
            .choose_center(&grid, &mut sched_rng)
            .expect("incomplete grid has indeterminate cells");
        let region = region_for_center(dims.coord(center), cfg.block_size, dims);

        let mut block = BlockState::init_block(region, ts, &grid, &cfg.restrictions);
        stats.max_block_bytes = stats.max_block_bytes.max(block.domain_bytes());
        let solve = solver.solve(&mut block, ts, &mut solver_rng);

        let (outcome, resolved, reverted, eroded) = match solve.outcome {
            BlockOutcome::Success => {
                let written = write_back(&mut grid, &block, ts);
                grid.consecutive_failures = 0;
                (RoundOutcome::Success, written, 0, 0)
            }
            BlockOutcome::InitialAcFailure => {
                let mut reverted = 0;
                for c in region.iter_grid_coords() {
                    let idx = dims.index(c);
                    if restriction_pinned[idx] {
                        continue;
                    }
                    if grid.is_resolved(idx) {
                        grid.set(idx, None);
                        reverted += 1;
                    }
                }
                (RoundOutcome::InitialAcFailure, 0, reverted, 0)
            }
            BlockOutcome::IterationExhausted => {
                let p = ecs.probability(grid.consecutive_failures);
                let eroded = erode(&mut grid, p, &restriction_pinned, &mut sched_rng);
                grid.consecutive_failures += 1;
                stats.erosion_invocations += 1;
                (RoundOutcome::SolverFailure, 0, 0, eroded)
            }
        };

        debug_assert!(
            region_pairs_sound(&grid, ts, region),
            "write-back broke resolved-pair soundness in round {round}"
        );

        grid.rounds += 1;
        stats.rounds = round + 1;
        let report = RoundReport {
            round,
            region,
            outcome,
            cells_resolved: resolved,
            cells_reverted: reverted,
            cells_eroded: eroded,
            solver_iterations: solve.iterations,
            solver_contradictions: solve.contradictions,
            resolved_fraction: grid.resolved_fraction(),
        };
        observer.on_round(&grid, &report);
        if let Some(interval) = cfg.snapshot_interval {
            if interval > 0 && report.round.is_multiple_of(interval) {
                observer.on_snapshot(&grid, report.round);
            }
        }
        reports.push(report);
    }

    if status != FinalStatus::Resolved && grid.resolved_count() >= target_resolved {
        status = FinalStatus::Resolved;
    }

    Ok(RunOutput {
        grid,
        reports,
        status,
        stats,
    })
}

fn validate(ts: &TileSet, dims: Dims, cfg: &PomsConfig) -> Result<(), ConfigError> {
    let b = cfg.block_size;
    if b.x == 0 || b.y == 0 || b.z == 0 || b.x > dims.x || b.y > dims.y || b.z > dims.z {
        return Err(ConfigError::BlockTooLarge {
            block: b,
            grid: dims,
        });
    }
    let e = &cfg.erosion;
    let sane = e.base_probability >= 0.0
        && e.base_probability <= e.max_probability
        && e.max_probability <= 1.0;
    if !sane {
        return Err(ConfigError::BadErosion);
    }
    if let Some(s) = cfg.bms.soften {
        if s.x == 0 || s.y == 0 || s.z == 0 {
            return Err(ConfigError::BadSoften);
        }
    }
    if ts.dim() == 2 && dims.z != 1 {
        return Err(ConfigError::DimMismatch {
            dim: 2,
            expected: "1",
            got: dims.z,
        });
    }
    for r in &cfg.restrictions {
        let tiles = match &r.action {
            RestrictionAction::AddTiles(t)
            | RestrictionAction::RemoveTiles(t)
            | RestrictionAction::Pin(t) => t,
        };
        if tiles.is_empty() && matches!(r.action, RestrictionAction::Pin(_)) {
            return Err(ConfigError::EmptyPin);
        }
        for &id in tiles {
            if id as usize >= ts.tile_count() {
                return Err(ConfigError::BadRestrictionTile {
                    id,
                    domain: ts.tile_count(),
                });
            }
        }
    }
    Ok(())
}

/// Copy the block's resolved tiles into the grid. Pinned cells are never
/// rewritten. An unpinned cell whose tile conflicts with a resolved grid
/// neighbor outside the block is skipped (left indeterminate) so that
/// adjacent resolved grid cells always satisfy the rules.
pub fn write_back(grid: &mut GridState, block: &BlockState, ts: &TileSet) -> usize {
    let region = block.region();
    let dims = grid.dims();
    let mut written = 0;
    for local in 0..block.cell_count() {
        if block.is_pinned(local) {
            continue;
        }
        let Some(tile) = block.mask(local).sole_tile() else {
            continue;
        };
        let g = region.grid_coord(local);
        let compatible = DIRECTIONS.iter().all(|&d| match g.neighbor(d, dims) {
            Some(n) if !region.contains(n) => match grid.get_at(n) {
                Some(u) => ts.rule(tile, u, d),
                None => true,
            },
            _ => true,
        });
        if compatible {
            grid.set_at(g, Some(tile));
            written += 1;
        }
    }
    written
}

/// Probabilistically revert resolved cells that touch an indeterminate face
/// neighbor. The candidate set is fixed before any reversion, so one pass
/// cannot cascade. Cells marked in `protected` are never eroded. Returns the
/// number of cells reverted.
pub fn erode(
    grid: &mut GridState,
    probability: f64,
    protected: &[bool],
    rng: &mut dyn RngCore,
) -> usize {
    let dims = grid.dims();
    let candidates: Vec<usize> = (0..grid.cell_count())
        .filter(|&i| {
            grid.is_resolved(i)
                && !protected[i]
                && DIRECTIONS.iter().any(|&d| {
                    dims.coord(i)
                        .neighbor(d, dims)
                        .is_some_and(|n| !grid.is_resolved(dims.index(n)))
                })
        })
        .collect();
    let mut reverted = 0;
    for i in candidates {
        if rng.random::<f64>() < probability {
            grid.set(i, None);
            reverted += 1;
        }
    }
    reverted
}

/// Check resolved-pair soundness for all pairs with at least one cell in the
/// region (writes elsewhere cannot break pairs outside it).
pub fn region_pairs_sound(grid: &GridState, ts: &TileSet, region: poms_model::BlockRegion) -> bool {
    let dims = grid.dims();
    for g in region.iter_grid_coords() {
        let Some(t) = grid.get_at(g) else { continue };
        for d in DIRECTIONS {
            if let Some(n) = g.neighbor(d, dims) {
                if let Some(u) = grid.get_at(n) {
                    if !ts.rule(t, u, d) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Resolved-pair soundness over the whole grid: every pair of adjacent
/// resolved cells satisfies the rules.
pub fn resolved_pairs_sound(grid: &GridState, ts: &TileSet) -> bool {
    let all = poms_model::BlockRegion::new(Coord::new(0, 0, 0), grid.dims(), grid.dims())
        .expect("full region");
    region_pairs_sound(grid, ts, all)
}
