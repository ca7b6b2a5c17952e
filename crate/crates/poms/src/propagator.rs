//! Block-scale constraint propagation.
//!
//! A [`BlockState`] carries the full per-cell tile domains of one block,
//! together with the AC4 support table: for every unpinned cell, tile and
//! in-block direction, the number of tiles in the neighboring cell that
//! admit the tile. Removals are queued and propagated incrementally; each
//! tile removal costs work proportional to the actual support lost rather
//! than a rescan, which is what keeps large tile domains tractable.
//!
//! Pinned cells supply support to their neighbors from their pinned masks
//! but are never themselves reduced.

use std::collections::VecDeque;

use poms_model::{
    BlockRegion, Dims, GridState, RestrictionAction, SetupRestriction, TileMask, TileSet,
    DIRECTIONS,
};

/// Outcome of running propagation to a fixpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    Consistent,
    Contradiction { cell: usize },
}

/// Neighbor classification per cell and direction.
const OUT_OF_GRID: i32 = -2;
const IN_GRID_OUT_OF_BLOCK: i32 = -1;

/// Full per-cell domain state for one block of the grid.
pub struct BlockState {
    region: BlockRegion,
    domain: usize,
    masks: Vec<TileMask>,
    pinned: Vec<bool>,
    /// `support[(cell * domain + tile) * 6 + dir]`: number of supporters of
    /// `tile` at `cell` from the in-block neighbor in `dir`. Entries for
    /// removed tiles go stale; the invariant covers in-domain tiles only.
    support: Vec<u32>,
    /// `neighbors[cell * 6 + dir]`: in-block local index, or a sentinel for
    /// faces leaving the block.
    neighbors: Vec<i32>,
    queue: VecDeque<(u32, u32)>,
    contradiction: Option<usize>,
    scratch: Vec<u32>,
}

/// Bit-exact copy of all cell masks, used for breakout backtracking.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    masks: Vec<TileMask>,
}

impl BlockState {
    /// Initialize a block over `region`.
    ///
    /// Every cell starts with the full domain. Cells with a face toward the
    /// grid interior outside the block are pinned to their grid value when
    /// the grid has one there; indeterminate edge cells stay unpinned. Setup
    /// restrictions are applied afterward in list order. The support table
    /// is built from the resulting masks; no propagation happens here.
    pub fn init_block(
        region: BlockRegion,
        ts: &TileSet,
        grid: &GridState,
        restrictions: &[SetupRestriction],
    ) -> BlockState {
        let grid_dims = grid.dims();
        let cells = region.cell_count();
        let domain = ts.tile_count();

        let mut neighbors = vec![0i32; cells * 6];
        for local in 0..cells {
            let g = region.grid_coord(local);
            for d in DIRECTIONS {
                neighbors[local * 6 + d.index()] = match g.neighbor(d, grid_dims) {
                    None => OUT_OF_GRID,
                    Some(n) => match region.local_index(n) {
                        Some(j) => j as i32,
                        None => IN_GRID_OUT_OF_BLOCK,
                    },
                };
            }
        }

        let mut masks = vec![TileMask::full(domain); cells];
        let mut pinned = vec![false; cells];
        let mut contradiction = None;

        for local in 0..cells {
            let on_block_edge = DIRECTIONS
                .iter()
                .any(|&d| neighbors[local * 6 + d.index()] == IN_GRID_OUT_OF_BLOCK);
            if !on_block_edge {
                continue;
            }
            if let Some(t) = grid.get_at(region.grid_coord(local)) {
                masks[local] = TileMask::from_tiles(domain, [t]);
                pinned[local] = true;
            }
        }

        for r in restrictions {
            for local in 0..cells {
                if !r.selector.matches(region.grid_coord(local), grid_dims) {
                    continue;
                }
                match &r.action {
                    RestrictionAction::AddTiles(tiles) => {
                        for &t in tiles {
                            masks[local].insert(t);
                        }
                    }
                    RestrictionAction::RemoveTiles(tiles) => {
                        for &t in tiles {
                            masks[local].remove(t);
                        }
                    }
                    RestrictionAction::Pin(tiles) => {
                        masks[local] = TileMask::from_tiles(domain, tiles.iter().copied());
                        pinned[local] = true;
                    }
                }
                if masks[local].is_empty() && contradiction.is_none() {
                    contradiction = Some(local);
                }
            }
        }

        let mut block = BlockState {
            region,
            domain,
            masks,
            pinned,
            support: vec![0; cells * domain * 6],
            neighbors,
            queue: VecDeque::new(),
            contradiction,
            scratch: Vec::new(),
        };
        block.rebuild_support(ts);
        block
    }

    pub fn region(&self) -> BlockRegion {
        self.region
    }

    pub fn dims(&self) -> Dims {
        self.region.dims
    }

    pub fn cell_count(&self) -> usize {
        self.masks.len()
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn mask(&self, cell: usize) -> &TileMask {
        &self.masks[cell]
    }

    pub fn is_pinned(&self, cell: usize) -> bool {
        self.pinned[cell]
    }

    pub fn contradiction_cell(&self) -> Option<usize> {
        self.contradiction
    }

    /// All unpinned cells resolved to supported singletons.
    pub fn is_fully_resolved(&self) -> bool {
        self.masks
            .iter()
            .zip(&self.pinned)
            .all(|(m, &pin)| pin || m.len() == 1)
    }

    /// Cells still open to the tile chooser: unpinned, more than one tile.
    pub fn unresolved_cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.masks.len()).filter(|&i| !self.pinned[i] && self.masks[i].len() > 1)
    }

    fn rebuild_support(&mut self, ts: &TileSet) {
        self.support.iter_mut().for_each(|s| *s = 0);
        for cell in 0..self.masks.len() {
            if self.pinned[cell] {
                continue;
            }
            for t in self.masks[cell].iter() {
                for d in DIRECTIONS {
                    let class = self.neighbors[cell * 6 + d.index()];
                    if class >= 0 {
                        let count =
                            self.masks[class as usize].intersect_count(ts.support_mask(t, d));
                        self.support[(cell * self.domain + t as usize) * 6 + d.index()] = count;
                    }
                }
            }
        }
    }

    /// Whether `tile` at `cell` currently has support in every direction.
    fn tile_supported(&self, ts: &TileSet, cell: usize, tile: u32) -> bool {
        DIRECTIONS.iter().all(|&d| {
            match self.neighbors[cell * 6 + d.index()] {
                OUT_OF_GRID => ts.boundary_supports(tile, d),
                // The pinned boundary layer mediates all coupling with the
                // rest of the grid; faces into it impose nothing here.
                IN_GRID_OUT_OF_BLOCK => true,
                _ => self.support[(cell * self.domain + tile as usize) * 6 + d.index()] > 0,
            }
        })
    }

    fn remove_tile(&mut self, cell: usize, tile: u32) {
        let removed = self.masks[cell].remove(tile);
        debug_assert!(removed, "tile {tile} was not present at cell {cell}");
        self.queue.push_back((cell as u32, tile));
        if self.masks[cell].is_empty() && self.contradiction.is_none() {
            self.contradiction = Some(cell);
        }
    }

    /// Run constraint propagation to a fixpoint: every tile of every
    /// unpinned cell ends up with at least one supporter in each direction,
    /// or a contradiction is reported. After a contradiction the block is
    /// left dirty; callers restore from a snapshot.
    pub fn make_arc_consistent(&mut self, ts: &TileSet) -> Propagation {
        if let Some(cell) = self.contradiction {
            return Propagation::Contradiction { cell };
        }
        debug_assert!(self.queue.is_empty());

        let mut doomed = std::mem::take(&mut self.scratch);
        for cell in 0..self.masks.len() {
            if self.pinned[cell] {
                continue;
            }
            doomed.clear();
            doomed.extend(
                self.masks[cell]
                    .iter()
                    .filter(|&t| !self.tile_supported(ts, cell, t)),
            );
            for &t in &doomed {
                self.remove_tile(cell, t);
            }
            if let Some(cell) = self.contradiction {
                self.scratch = doomed;
                return Propagation::Contradiction { cell };
            }
        }
        self.scratch = doomed;
        self.drain(ts)
    }

    /// Collapse `cell` to exactly `tile` and propagate to a fixpoint.
    /// The cell must be unpinned and the tile in its domain.
    pub fn resolve_cell(&mut self, ts: &TileSet, cell: usize, tile: u32) -> Propagation {
        assert!(self.contradiction.is_none(), "block is contradicted");
        assert!(!self.pinned[cell], "cannot resolve a pinned cell");
        assert!(self.masks[cell].contains(tile), "tile not in cell domain");

        let mut doomed = std::mem::take(&mut self.scratch);
        doomed.clear();
        doomed.extend(self.masks[cell].iter().filter(|&t| t != tile));
        for &t in &doomed {
            self.remove_tile(cell, t);
        }
        self.scratch = doomed;
        // The chosen tile itself may lack support when the block has not
        // been made arc consistent yet, e.g. against a pinned neighbor.
        if !self.tile_supported(ts, cell, tile) {
            self.remove_tile(cell, tile);
            return Propagation::Contradiction { cell };
        }
        debug_assert!(self.contradiction.is_none());
        self.drain(ts)
    }

    fn drain(&mut self, ts: &TileSet) -> Propagation {
        let mut affected = std::mem::take(&mut self.scratch);
        while let Some((cell, tile)) = self.queue.pop_front() {
            let cell = cell as usize;
            for d in DIRECTIONS {
                let class = self.neighbors[cell * 6 + d.index()];
                if class < 0 {
                    continue;
                }
                let j = class as usize;
                if self.pinned[j] {
                    continue;
                }
                affected.clear();
                self.masks[j].intersection_into(ts.support_mask(tile, d), &mut affected);
                let opp = d.opposite().index();
                for &t2 in &affected {
                    let s = &mut self.support[(j * self.domain + t2 as usize) * 6 + opp];
                    debug_assert!(*s > 0);
                    *s -= 1;
                    if *s == 0 {
                        self.remove_tile(j, t2);
                        if let Some(cell) = self.contradiction {
                            self.queue.clear();
                            self.scratch = affected;
                            return Propagation::Contradiction { cell };
                        }
                    }
                }
            }
        }
        self.scratch = affected;
        Propagation::Consistent
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            masks: self.masks.clone(),
        }
    }

    /// Overwrite an existing snapshot in place, reusing its allocations.
    pub fn snapshot_into(&self, snap: &mut Snapshot) {
        snap.masks.clone_from(&self.masks);
    }

    /// Restore all masks from a snapshot; the support table is rebuilt to
    /// match and any contradiction is cleared.
    pub fn restore(&mut self, snap: &Snapshot, ts: &TileSet) {
        assert_eq!(
            snap.masks.len(),
            self.masks.len(),
            "snapshot shape mismatch"
        );
        self.masks.clone_from(&snap.masks);
        self.queue.clear();
        self.contradiction = None;
        self.rebuild_support(ts);
    }

    /// Restore only the given cells from a snapshot. The result is generally
    /// not arc consistent; run [`make_arc_consistent`](Self::make_arc_consistent)
    /// afterward.
    pub fn restore_region(&mut self, snap: &Snapshot, cells: &[usize], ts: &TileSet) {
        assert_eq!(
            snap.masks.len(),
            self.masks.len(),
            "snapshot shape mismatch"
        );
        for &c in cells {
            self.masks[c].clone_from(&snap.masks[c]);
        }
        self.queue.clear();
        self.contradiction = None;
        self.rebuild_support(ts);
    }

    /// Restore everything from `full`, then the given cells from `older`,
    /// with a single support rebuild. This is the breakout backtrack: undo
    /// the failed step, then soften a region back to the initial state.
    pub fn restore_with_region(
        &mut self,
        full: &Snapshot,
        older: &Snapshot,
        cells: &[usize],
        ts: &TileSet,
    ) {
        assert_eq!(
            full.masks.len(),
            self.masks.len(),
            "snapshot shape mismatch"
        );
        assert_eq!(
            older.masks.len(),
            self.masks.len(),
            "snapshot shape mismatch"
        );
        self.masks.clone_from(&full.masks);
        for &c in cells {
            self.masks[c].clone_from(&older.masks[c]);
        }
        self.queue.clear();
        self.contradiction = None;
        self.rebuild_support(ts);
    }

    /// Cells whose mask differs from the snapshot.
    pub fn altered_cells(&self, since: &Snapshot) -> Vec<usize> {
        assert_eq!(
            since.masks.len(),
            self.masks.len(),
            "snapshot shape mismatch"
        );
        (0..self.masks.len())
            .filter(|&i| self.masks[i] != since.masks[i])
            .collect()
    }

    /// Recompute the support table from scratch and compare with the
    /// incrementally maintained entries for all in-domain tiles.
    pub fn support_counts_consistent(&self, ts: &TileSet) -> bool {
        for cell in 0..self.masks.len() {
            if self.pinned[cell] {
                continue;
            }
            for t in self.masks[cell].iter() {
                for d in DIRECTIONS {
                    let class = self.neighbors[cell * 6 + d.index()];
                    if class < 0 {
                        continue;
                    }
                    let expected =
                        self.masks[class as usize].intersect_count(ts.support_mask(t, d));
                    let got = self.support[(cell * self.domain + t as usize) * 6 + d.index()];
                    if expected != got {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Bytes of block-proportional state: masks, support table, pin flags
    /// and the neighbor classification table.
    pub fn domain_bytes(&self) -> usize {
        self.masks.iter().map(TileMask::heap_bytes).sum::<usize>()
            + self.support.len() * std::mem::size_of::<u32>()
            + self.neighbors.len() * std::mem::size_of::<i32>()
            + self.pinned.len()
    }
}
