use poms_model::{Dims, TileId, TileSet, DIRECTIONS};
use thiserror::Error;

/// Refuse instances whose raw assignment space exceeds this bound; pruning
/// keeps real instances far below it, but the guard caps degenerate inputs.
pub const ENUMERATION_GUARD: f64 = 1e8;

#[derive(Debug, Error, PartialEq)]
pub enum EnumerateError {
    #[error("assignment space {space:.3e} exceeds enumeration guard {guard:.0e}")]
    TooLarge { space: f64, guard: f64 },
}

/// Exhaustively enumerate every valid realization of `dims` under `ts` by
/// depth-first assignment in row-major order, pruning against already
/// assigned neighbors and the boundary policy.
pub fn enumerate_realizations(
    ts: &TileSet,
    dims: Dims,
) -> Result<Vec<Vec<TileId>>, EnumerateError> {
    let cells = dims.cell_count();
    let space = (ts.tile_count() as f64).powi(cells as i32);
    if space > ENUMERATION_GUARD {
        return Err(EnumerateError::TooLarge {
            space,
            guard: ENUMERATION_GUARD,
        });
    }

    let mut out = Vec::new();
    let mut assignment: Vec<TileId> = Vec::with_capacity(cells);
    descend(ts, dims, &mut assignment, &mut out);
    Ok(out)
}

fn descend(ts: &TileSet, dims: Dims, assignment: &mut Vec<TileId>, out: &mut Vec<Vec<TileId>>) {
    if assignment.len() == dims.cell_count() {
        out.push(assignment.clone());
        return;
    }
    let cell = assignment.len();
    let coord = dims.coord(cell);
    'tiles: for t in 0..ts.tile_count() as TileId {
        for d in DIRECTIONS {
            match coord.neighbor(d, dims) {
                Some(n) => {
                    let n_idx = dims.index(n);
                    // Only neighbors assigned earlier in row-major order
                    // constrain this choice; later ones are checked when
                    // they are assigned.
                    if n_idx < cell && !ts.rule(t, assignment[n_idx], d) {
                        continue 'tiles;
                    }
                }
                None => {
                    if !ts.boundary_supports(t, d) {
                        continue 'tiles;
                    }
                }
            }
        }
        assignment.push(t);
        descend(ts, dims, assignment, out);
        assignment.pop();
    }
}
