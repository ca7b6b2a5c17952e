use crate::geom::{Coord, Dims};
use crate::tileset::TileId;

const INDETERMINATE: i32 = -1;

/// Grid-scale state: one resolved tile or an indeterminate marker per cell.
///
/// Storage is a constant four bytes per cell regardless of the tile domain
/// size; full per-cell domains exist only at block scale.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    dims: Dims,
    cells: Vec<i32>,
    resolved: usize,
    /// Rounds of grid-level solving performed so far.
    pub rounds: u64,
    /// Consecutive block-solver failures since the last success.
    pub consecutive_failures: u32,
}

impl GridState {
    /// A fully indeterminate grid.
    pub fn new(dims: Dims) -> GridState {
        GridState {
            dims,
            cells: vec![INDETERMINATE; dims.cell_count()],
            resolved: 0,
            rounds: 0,
            consecutive_failures: 0,
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    pub fn get(&self, index: usize) -> Option<TileId> {
        let v = self.cells[index];
        (v >= 0).then_some(v as TileId)
    }

    pub fn get_at(&self, c: Coord) -> Option<TileId> {
        self.get(self.dims.index(c))
    }

    pub fn is_resolved(&self, index: usize) -> bool {
        self.cells[index] >= 0
    }

    pub fn set(&mut self, index: usize, value: Option<TileId>) {
        let old = self.cells[index];
        let new = match value {
            Some(t) => t as i32,
            None => INDETERMINATE,
        };
        if old >= 0 && new < 0 {
            self.resolved -= 1;
        } else if old < 0 && new >= 0 {
            self.resolved += 1;
        }
        self.cells[index] = new;
    }

    pub fn set_at(&mut self, c: Coord, value: Option<TileId>) {
        self.set(self.dims.index(c), value)
    }

    pub fn resolved_count(&self) -> usize {
        self.resolved
    }

    pub fn indeterminate_count(&self) -> usize {
        self.cells.len() - self.resolved
    }

    pub fn is_fully_resolved(&self) -> bool {
        self.resolved == self.cells.len()
    }

    pub fn resolved_fraction(&self) -> f64 {
        self.resolved as f64 / self.cells.len() as f64
    }

    /// Raw per-cell entries; `-1` marks an indeterminate cell.
    pub fn raw_cells(&self) -> &[i32] {
        &self.cells
    }

    /// Rebuild from raw entries, e.g. when loading a snapshot file.
    pub fn from_raw(dims: Dims, cells: Vec<i32>) -> Option<GridState> {
        if cells.len() != dims.cell_count() || cells.iter().any(|&v| v < -1) {
            return None;
        }
        let resolved = cells.iter().filter(|&&v| v >= 0).count();
        Some(GridState {
            dims,
            cells,
            resolved,
            rounds: 0,
            consecutive_failures: 0,
        })
    }

    /// Fixed per-cell footprint, independent of the tile domain size.
    pub const fn bytes_per_cell() -> usize {
        std::mem::size_of::<i32>()
    }

    pub fn storage_bytes(&self) -> usize {
        self.cells.len() * Self::bytes_per_cell()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolved_count_tracks_sets() {
        let mut g = GridState::new(Dims::new(3, 3, 1));
        assert_eq!(g.indeterminate_count(), 9);
        g.set(4, Some(2));
        g.set(4, Some(1));
        g.set(0, Some(0));
        assert_eq!(g.resolved_count(), 2);
        g.set(4, None);
        assert_eq!(g.resolved_count(), 1);
        assert_eq!(g.get(0), Some(0));
        assert_eq!(g.get(4), None);
    }

    #[test]
    fn per_cell_storage_is_constant_size() {
        // The footprint per cell must not depend on the tile domain size.
        assert_eq!(GridState::bytes_per_cell(), 4);
        let g = GridState::new(Dims::new(16, 16, 1));
        assert_eq!(g.storage_bytes(), 16 * 16 * 4);
    }

    #[test]
    fn from_raw_validates() {
        let dims = Dims::new(2, 2, 1);
        assert!(GridState::from_raw(dims, vec![0, -1, 3, 2]).is_some());
        assert!(GridState::from_raw(dims, vec![0, -2, 3, 2]).is_none());
        assert!(GridState::from_raw(dims, vec![0, 1]).is_none());
    }
}
