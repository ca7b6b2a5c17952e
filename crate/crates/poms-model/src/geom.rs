use serde::{Deserialize, Serialize};

/// The six axis directions, in the fixed serialization order
/// `+X, -X, +Y, -Y, +Z, -Z`. `+Y` points down in image space so that cell
/// `(0, 0)` is the upper-left corner of a rendered grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Direction {
    XPlus = 0,
    XMinus = 1,
    YPlus = 2,
    YMinus = 3,
    ZPlus = 4,
    ZMinus = 5,
}

/// All six directions in index order.
pub const DIRECTIONS: [Direction; 6] = [
    Direction::XPlus,
    Direction::XMinus,
    Direction::YPlus,
    Direction::YMinus,
    Direction::ZPlus,
    Direction::ZMinus,
];

impl Direction {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Direction> {
        DIRECTIONS.get(i).copied()
    }

    /// The opposing direction; an involution (`d.opposite().opposite() == d`).
    pub fn opposite(self) -> Direction {
        DIRECTIONS[self.index() ^ 1]
    }

    /// Unit offset of the neighboring cell in this direction.
    pub fn offset(self) -> (i64, i64, i64) {
        match self {
            Direction::XPlus => (1, 0, 0),
            Direction::XMinus => (-1, 0, 0),
            Direction::YPlus => (0, 1, 0),
            Direction::YMinus => (0, -1, 0),
            Direction::ZPlus => (0, 0, 1),
            Direction::ZMinus => (0, 0, -1),
        }
    }

    /// Axis of this direction: 0 for X, 1 for Y, 2 for Z.
    pub fn axis(self) -> usize {
        self.index() / 2
    }

    pub fn is_z(self) -> bool {
        self.axis() == 2
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Direction::XPlus => "+X",
            Direction::XMinus => "-X",
            Direction::YPlus => "+Y",
            Direction::YMinus => "-Y",
            Direction::ZPlus => "+Z",
            Direction::ZMinus => "-Z",
        };
        f.write_str(s)
    }
}

/// Extents of a grid or block along each axis. 2D problems use `z == 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dims {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl Dims {
    pub fn new(x: usize, y: usize, z: usize) -> Dims {
        Dims { x, y, z }
    }

    pub fn cell_count(&self) -> usize {
        self.x * self.y * self.z
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.x < self.x && c.y < self.y && c.z < self.z
    }

    /// Row-major cell index (x fastest, then y, then z).
    pub fn index(&self, c: Coord) -> usize {
        (c.z * self.y + c.y) * self.x + c.x
    }

    pub fn coord(&self, index: usize) -> Coord {
        let x = index % self.x;
        let y = (index / self.x) % self.y;
        let z = index / (self.x * self.y);
        Coord { x, y, z }
    }

    pub fn axis(&self, axis: usize) -> usize {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    /// Iterate all coordinates in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = Coord> + '_ {
        let dims = *self;
        (0..self.cell_count()).map(move |i| dims.coord(i))
    }
}

impl std::fmt::Display for Dims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.z == 1 {
            write!(f, "{}x{}", self.x, self.y)
        } else {
            write!(f, "{}x{}x{}", self.x, self.y, self.z)
        }
    }
}

/// A cell position in grid coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coord {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl Coord {
    pub fn new(x: usize, y: usize, z: usize) -> Coord {
        Coord { x, y, z }
    }

    /// The neighboring coordinate in direction `d`, or `None` when it falls
    /// outside `bounds`.
    pub fn neighbor(&self, d: Direction, bounds: Dims) -> Option<Coord> {
        let (dx, dy, dz) = d.offset();
        let x = self.x as i64 + dx;
        let y = self.y as i64 + dy;
        let z = self.z as i64 + dz;
        if x < 0 || y < 0 || z < 0 {
            return None;
        }
        let c = Coord::new(x as usize, y as usize, z as usize);
        bounds.contains(c).then_some(c)
    }
}

/// A rectangular cuboid sub-region of a grid, in grid coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRegion {
    pub origin: Coord,
    pub dims: Dims,
}

impl BlockRegion {
    /// Build a region, checking it lies fully inside `grid`.
    pub fn new(origin: Coord, dims: Dims, grid: Dims) -> Option<BlockRegion> {
        let fits = dims.x >= 1
            && dims.y >= 1
            && dims.z >= 1
            && origin.x + dims.x <= grid.x
            && origin.y + dims.y <= grid.y
            && origin.z + dims.z <= grid.z;
        fits.then_some(BlockRegion { origin, dims })
    }

    pub fn cell_count(&self) -> usize {
        self.dims.cell_count()
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.x >= self.origin.x
            && c.y >= self.origin.y
            && c.z >= self.origin.z
            && c.x < self.origin.x + self.dims.x
            && c.y < self.origin.y + self.dims.y
            && c.z < self.origin.z + self.dims.z
    }

    /// Grid coordinate of the block-local cell index.
    pub fn grid_coord(&self, local: usize) -> Coord {
        let c = self.dims.coord(local);
        Coord::new(
            self.origin.x + c.x,
            self.origin.y + c.y,
            self.origin.z + c.z,
        )
    }

    /// Block-local index of a grid coordinate, if it lies in the region.
    pub fn local_index(&self, c: Coord) -> Option<usize> {
        if !self.contains(c) {
            return None;
        }
        let local = Coord::new(
            c.x - self.origin.x,
            c.y - self.origin.y,
            c.z - self.origin.z,
        );
        Some(self.dims.index(local))
    }

    /// Iterate grid coordinates of the region in block-local row-major order.
    pub fn iter_grid_coords(&self) -> impl Iterator<Item = Coord> + '_ {
        let region = *self;
        (0..self.cell_count()).map(move |i| region.grid_coord(i))
    }
}
