use poms_model::{BlockRegion, Coord, Dims, GridState};
use rand::{Rng, RngCore};

/// Block choice scheduler: picks the center cell of the next block to solve
/// from the indeterminate cells of the grid.
pub trait BlockChoice: Send + Sync {
    fn choose_center(&self, grid: &GridState, rng: &mut dyn RngCore) -> Option<usize>;
}

/// Centers sampled uniformly from the indeterminate cells.
pub struct Uniform;

impl BlockChoice for Uniform {
    fn choose_center(&self, grid: &GridState, rng: &mut dyn RngCore) -> Option<usize> {
        let open = grid.indeterminate_count();
        if open == 0 {
            return None;
        }
        let pick = rng.random_range(0..open);
        (0..grid.cell_count())
            .filter(|&i| !grid.is_resolved(i))
            .nth(pick)
    }
}

/// Centers weighted by `exp(-d / lambda)` with `d` the Euclidean distance to
/// the upper-left grid corner; resolution grows diagonally from that corner.
pub struct Diagonal {
    pub lambda: f64,
}

impl BlockChoice for Diagonal {
    fn choose_center(&self, grid: &GridState, rng: &mut dyn RngCore) -> Option<usize> {
        weighted_center(grid, rng, self.lambda, |c, _| {
            let (x, y, z) = (c.x as f64, c.y as f64, c.z as f64);
            (x * x + y * y + z * z).sqrt()
        })
    }
}

/// Centers weighted by `exp(-d / lambda)` with `d` the distance to the grid
/// center; resolution grows outward as one contiguous region.
pub struct CenterOut {
    pub lambda: f64,
}

impl BlockChoice for CenterOut {
    fn choose_center(&self, grid: &GridState, rng: &mut dyn RngCore) -> Option<usize> {
        weighted_center(grid, rng, self.lambda, |c, dims| {
            let dx = c.x as f64 - (dims.x as f64 - 1.0) / 2.0;
            let dy = c.y as f64 - (dims.y as f64 - 1.0) / 2.0;
            let dz = c.z as f64 - (dims.z as f64 - 1.0) / 2.0;
            (dx * dx + dy * dy + dz * dz).sqrt()
        })
    }
}

/// Sample an indeterminate cell with weight `exp(-(d - d_min) / lambda)`.
/// Shifting by the minimum distance leaves the distribution unchanged and
/// keeps the weights in range for any lambda; as lambda approaches zero the
/// choice degenerates to the cells nearest the anchor.
fn weighted_center(
    grid: &GridState,
    rng: &mut dyn RngCore,
    lambda: f64,
    distance: impl Fn(Coord, Dims) -> f64,
) -> Option<usize> {
    let dims = grid.dims();
    let lambda = lambda.max(1e-12);

    let mut d_min = f64::INFINITY;
    for i in 0..grid.cell_count() {
        if !grid.is_resolved(i) {
            d_min = d_min.min(distance(dims.coord(i), dims));
        }
    }
    if d_min.is_infinite() {
        return None;
    }

    let weight = |i: usize| {
        let d = distance(dims.coord(i), dims);
        (-(d - d_min) / lambda).exp()
    };
    let total: f64 = (0..grid.cell_count())
        .filter(|&i| !grid.is_resolved(i))
        .map(weight)
        .sum();

    let mut x = rng.random::<f64>() * total;
    let mut last = None;
    for i in (0..grid.cell_count()).filter(|&i| !grid.is_resolved(i)) {
        let w = weight(i);
        if w <= 0.0 {
            continue;
        }
        last = Some(i);
        x -= w;
        if x <= 0.0 {
            return Some(i);
        }
    }
    last
}

/// The block of `block` dims centered on `center`, shifted where necessary
/// to lie fully inside the grid. Clamping rather than truncating keeps the
/// block size, and so the per-round solver cost, uniform.
pub fn region_for_center(center: Coord, block: Dims, grid: Dims) -> BlockRegion {
    let clamp = |c: usize, b: usize, g: usize| c.saturating_sub(b / 2).min(g - b);
    let origin = Coord::new(
        clamp(center.x, block.x, grid.x),
        clamp(center.y, block.y, grid.y),
        clamp(center.z, block.z, grid.z),
    );
    BlockRegion::new(origin, block, grid).expect("clamped region fits the grid")
}
