//! Helpers shared by the integration suites: random symmetric tilesets and
//! independent re-implementations of the measurements under test.
//!
//! Each test binary compiles this module separately and uses a subset.
#![allow(dead_code)]

use poms_model::{
    BlockRegion, BoundaryPolicy, Coord, Dims, Direction, GridState, Rule, SetupRestriction,
    TileMask, TileSet, DIRECTIONS,
};
use poms_oracle::FixpointOutcome;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use poms::propagator::{BlockState, Propagation};

/// A random symmetric tileset: each unordered rule candidate is included
/// with a density drawn from `0.3..0.9`. `dim` 2 restricts rules to the X
/// and Y directions.
pub fn random_tileset(rng: &mut dyn RngCore, dim: u8, max_tiles: usize) -> TileSet {
    let d = rng.random_range(2..=max_tiles);
    let density = rng.random_range(0.3..0.9);
    let dirs: &[Direction] = if dim == 2 {
        &DIRECTIONS[..4]
    } else {
        &DIRECTIONS
    };
    let mut rules: Vec<Rule> = Vec::new();
    for a in 0..d as u32 {
        for b in a..d as u32 {
            for &dir in dirs {
                if rng.random::<f64>() < density {
                    rules.push((a, b, dir));
                }
            }
        }
    }
    TileSet::new(
        format!("random-{d}"),
        dim,
        d,
        &rules,
        None,
        BoundaryPolicy::Open,
    )
    .expect("random tileset is valid")
}

/// Run one AC4-vs-naive comparison on a random instance; panics on any
/// divergence. Returns whether the instance was consistent.
pub fn check_ac4_matches_naive(rng: &mut ChaCha8Rng) -> bool {
    let ts = random_tileset(rng, 3, 6);
    let dims = Dims::new(
        rng.random_range(1..=5),
        rng.random_range(1..=5),
        rng.random_range(1..=2),
    );
    let grid = GridState::new(dims);
    let region = BlockRegion::new(Coord::new(0, 0, 0), dims, dims).unwrap();

    // Pin a random sprinkling of cells to random non-empty subsets.
    let mut restrictions: Vec<SetupRestriction> = Vec::new();
    for c in dims.iter() {
        if rng.random::<f64>() < 0.25 {
            let mut tiles: Vec<u32> = (0..ts.tile_count() as u32)
                .filter(|_| rng.random::<f64>() < 0.4)
                .collect();
            if tiles.is_empty() {
                tiles.push(rng.random_range(0..ts.tile_count() as u32));
            }
            restrictions.push(SetupRestriction::pin_cell(c, tiles));
        }
    }

    let mut block = BlockState::init_block(region, &ts, &grid, &restrictions);
    let initial_masks: Vec<TileMask> = (0..block.cell_count())
        .map(|i| block.mask(i).clone())
        .collect();
    let pins: Vec<bool> = (0..block.cell_count())
        .map(|i| block.is_pinned(i))
        .collect();

    let verdict = block.make_arc_consistent(&ts);
    let oracle = poms_oracle::naive_fixpoint(dims, &initial_masks, &pins, &ts);

    match (verdict, oracle) {
        (Propagation::Consistent, FixpointOutcome::Consistent(expected)) => {
            for i in 0..block.cell_count() {
                assert_eq!(
                    *block.mask(i),
                    expected[i],
                    "mask divergence at cell {i} on {}",
                    ts.name()
                );
                assert!(
                    block.mask(i).is_subset_of(&initial_masks[i]),
                    "mask grew at cell {i}"
                );
            }
            assert!(
                block.support_counts_consistent(&ts),
                "incremental support counts diverged from a recount"
            );
            true
        }
        (Propagation::Contradiction { .. }, FixpointOutcome::Contradiction { .. }) => false,
        (got, expected) => panic!("verdict divergence: ac4={got:?} naive={expected:?}"),
    }
}

/// Independent correlation-length measurement: for each tile, naive
/// fixpoint on a fresh full scratch field with the center forced, bounding
/// box over differing cells (center always included). Mirrors the report
/// normalization: an axis whose box touches a face reports the full extent.
pub fn taccl_by_naive_fixpoint(ts: &TileSet, scratch: Dims) -> Vec<([usize; 3], [bool; 3], bool)> {
    let open = ts.with_open_boundary();
    let center = Coord::new(scratch.x / 2, scratch.y / 2, scratch.z / 2);
    let center_idx = scratch.index(center);
    let pins = vec![false; scratch.cell_count()];

    (0..ts.tile_count() as u32)
        .map(|tile| {
            let mut masks = vec![TileMask::full(ts.tile_count()); scratch.cell_count()];
            masks[center_idx] = TileMask::from_tiles(ts.tile_count(), [tile]);
            let (final_masks, contradicted) =
                match poms_oracle::naive_fixpoint(scratch, &masks, &pins, &open) {
                    FixpointOutcome::Consistent(m) => (m, false),
                    FixpointOutcome::Contradiction { .. } => {
                        // The naive oracle does not expose partial state;
                        // report the extent as unknown-contradicted.
                        return ([0, 0, 0], [false, false, false], true);
                    }
                };
            let full = TileMask::full(ts.tile_count());
            let mut min = [center.x, center.y, center.z];
            let mut max = min;
            for (i, m) in final_masks.iter().enumerate() {
                if *m != full || i == center_idx {
                    let c = scratch.coord(i);
                    for (axis, v) in [c.x, c.y, c.z].into_iter().enumerate() {
                        min[axis] = min[axis].min(v);
                        max[axis] = max[axis].max(v);
                    }
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
            (extents, unbounded, contradicted)
        })
        .collect()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
