use poms_model::{Coord, Direction, GridState, TileId, TileSet, DIRECTIONS};

/// A single constraint violation found in a grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Unresolved {
        cell: Coord,
    },
    Pair {
        cell: Coord,
        neighbor: Coord,
        dir: Direction,
        tile: TileId,
        neighbor_tile: TileId,
    },
    Boundary {
        cell: Coord,
        dir: Direction,
        tile: TileId,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Unresolved { cell } => {
                write!(f, "cell ({},{},{}) is unresolved", cell.x, cell.y, cell.z)
            }
            Violation::Pair {
                cell,
                neighbor,
                dir,
                tile,
                neighbor_tile,
            } => write!(
                f,
                "tiles {tile} at ({},{},{}) and {neighbor_tile} at ({},{},{}) violate the {dir} rule",
                cell.x, cell.y, cell.z, neighbor.x, neighbor.y, neighbor.z
            ),
            Violation::Boundary { cell, dir, tile } => write!(
                f,
                "tile {tile} at ({},{},{}) violates the {dir} boundary policy",
                cell.x, cell.y, cell.z
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check that a grid is a realization: every cell resolved, every adjacent
/// pair admissible and every grid-edge cell compatible with the boundary
/// policy. Each unordered pair is reported at most once.
pub fn verify_realization(grid: &GridState, ts: &TileSet) -> VerifyReport {
    let dims = grid.dims();
    let mut violations = Vec::new();
    let positive = [Direction::XPlus, Direction::YPlus, Direction::ZPlus];

    for cell in dims.iter() {
        let Some(tile) = grid.get_at(cell) else {
            violations.push(Violation::Unresolved { cell });
            continue;
        };
        for d in DIRECTIONS {
            match cell.neighbor(d, dims) {
                Some(n) => {
                    if !positive.contains(&d) {
                        continue;
                    }
                    if let Some(neighbor_tile) = grid.get_at(n) {
                        if !ts.rule(tile, neighbor_tile, d) {
                            violations.push(Violation::Pair {
                                cell,
                                neighbor: n,
                                dir: d,
                                tile,
                                neighbor_tile,
                            });
                        }
                    }
                }
                None => {
                    if !ts.boundary_supports(tile, d) {
                        violations.push(Violation::Boundary { cell, dir: d, tile });
                    }
                }
            }
        }
    }

    VerifyReport { violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use poms_model::samples::checkerboard2;
    use poms_model::{BoundaryPolicy, Dims, Rule};

    fn alternating(dims: Dims) -> GridState {
        let mut g = GridState::new(dims);
        for c in dims.iter() {
            g.set_at(c, Some(((c.x + c.y + c.z) % 2) as TileId));
        }
        g
    }

    #[test]
    fn alternating_checkerboard_passes() {
        let g = alternating(Dims::new(16, 16, 1));
        assert!(verify_realization(&g, &checkerboard2()).pass());
    }

    #[test]
    fn single_flip_reports_incident_pairs_only() {
        let mut g = alternating(Dims::new(16, 16, 1));
        let flipped = Coord::new(5, 7, 0);
        g.set_at(flipped, Some(1 - g.get_at(flipped).unwrap()));
        let report = verify_realization(&g, &checkerboard2());
        assert_eq!(report.violations.len(), 4);
        for v in &report.violations {
            match v {
                Violation::Pair { cell, neighbor, .. } => {
                    assert!(*cell == flipped || *neighbor == flipped)
                }
                other => panic!("unexpected violation {other:?}"),
            }
        }
    }

    #[test]
    fn unresolved_cell_fails() {
        let mut g = alternating(Dims::new(4, 4, 1));
        g.set_at(Coord::new(2, 2, 0), None);
        let report = verify_realization(&g, &checkerboard2());
        assert!(!report.pass());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Unresolved { cell } if *cell == Coord::new(2, 2, 0))));
    }

    #[test]
    fn zero_boundary_is_enforced() {
        // Tiles may only touch the grid edge where they admit the zero tile.
        let rules: Vec<Rule> = DIRECTIONS[..4].iter().map(|&d| (0, 1, d)).collect();
        let ts = TileSet::new(
            "c2-zero",
            2,
            2,
            &rules,
            None,
            BoundaryPolicy::Zero { zero_tile: 0 },
        )
        .unwrap();
        // 1 admits 0 in every direction, 0 does not admit itself: a valid
        // bordered grid must put tile 1 on the frame.
        let g = alternating(Dims::new(3, 3, 1));
        let report = verify_realization(&g, &ts);
        // Cells on the frame holding tile 0 violate the boundary.
        assert!(!report.pass());
        assert!(report
            .violations
            .iter()
            .all(|v| matches!(v, Violation::Boundary { tile: 0, .. })));
    }
}
