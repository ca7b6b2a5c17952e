use poms_model::{Dims, TileMask, TileSet, DIRECTIONS};

/// Result of running constraint propagation to a fixpoint.
#[derive(Debug, Clone, PartialEq)]
pub enum FixpointOutcome {
    Consistent(Vec<TileMask>),
    Contradiction { cell: usize },
}

/// Remove-until-no-change constraint propagation over a standalone mask
/// field, recomputing support by scanning neighbor masks on every sweep.
/// No counters, no worklist; quadratic and obviously correct.
///
/// Out-of-field neighbors are judged by the tileset's boundary policy, i.e.
/// the field edges are grid edges. Pinned cells are never reduced but their
/// masks do support neighbors.
pub fn naive_fixpoint(
    dims: Dims,
    masks: &[TileMask],
    pins: &[bool],
    ts: &TileSet,
) -> FixpointOutcome {
    let order: Vec<usize> = (0..dims.cell_count()).collect();
    naive_fixpoint_ordered(dims, masks, pins, ts, &order)
}

/// Same as [`naive_fixpoint`] with an explicit cell visit order per sweep.
/// Arc consistency has a unique maximal fixpoint, so every order must yield
/// the same result; tests exploit this to check confluence.
pub fn naive_fixpoint_ordered(
    dims: Dims,
    masks: &[TileMask],
    pins: &[bool],
    ts: &TileSet,
    order: &[usize],
) -> FixpointOutcome {
    assert_eq!(masks.len(), dims.cell_count());
    assert_eq!(pins.len(), dims.cell_count());
    let mut masks = masks.to_vec();

    for (cell, mask) in masks.iter().enumerate() {
        if mask.is_empty() {
            return FixpointOutcome::Contradiction { cell };
        }
    }

    loop {
        let mut changed = false;
        for &cell in order {
            if pins[cell] {
                continue;
            }
            let coord = dims.coord(cell);
            let doomed: Vec<u32> = masks[cell]
                .iter()
                .filter(|&t| {
                    DIRECTIONS.iter().any(|&d| match coord.neighbor(d, dims) {
                        Some(n) => !masks[dims.index(n)].intersects(ts.support_mask(t, d)),
                        None => !ts.boundary_supports(t, d),
                    })
                })
                .collect();
            for t in doomed {
                masks[cell].remove(t);
                changed = true;
            }
            if masks[cell].is_empty() {
                return FixpointOutcome::Contradiction { cell };
            }
        }
        if !changed {
            return FixpointOutcome::Consistent(masks);
        }
    }
}
