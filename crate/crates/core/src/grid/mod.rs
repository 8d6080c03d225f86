//! Dense voxel grid storage, index mapping and the sliding-window shift.

mod dump;
mod shift;

pub use dump::{read_dump, write_dump, DUMP_MAGIC};

use crate::error::{Error, Result};
use crate::math::Vec3;
use crate::scalar::Real;

/// Occupancy state of one voxel, stored as a single byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
#[repr(u8)]
pub enum VoxelState {
    #[default]
    Unknown = 0,
    Free = 1,
    Occupied = 2,
    /// Traversed by a ray after it passed an occupied voxel in this measurement.
    UnknownTraced = 3,
}

impl VoxelState {
    pub const ALL: [VoxelState; 4] = [
        VoxelState::Unknown,
        VoxelState::Free,
        VoxelState::Occupied,
        VoxelState::UnknownTraced,
    ];

    #[inline]
    pub fn from_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(Self::Unknown),
            1 => Some(Self::Free),
            2 => Some(Self::Occupied),
            3 => Some(Self::UnknownTraced),
            _ => None,
        }
    }
}

/// Integer voxel coordinate in the grid frame. May lie outside the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VoxelCoord {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl VoxelCoord {
    #[inline]
    pub const fn new(x: i64, y: i64, z: i64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn to_array(self) -> [i64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn from_array(a: [i64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    #[inline]
    pub fn offset(self, dx: i64, dy: i64, dz: i64) -> Self {
        Self::new(self.x + dx, self.y + dy, self.z + dz)
    }
}

/// Extent, resolution and placement of a voxel grid.
///
/// `origin` is the world position of the grid's minimum corner, so a point
/// `p` expressed in the grid frame (`p_world - origin`) falls into voxel
/// `floor(p / vox_size)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    grid_size: Vec3<T>,
    vox_size: T,
    dims: [usize; 3],
    origin: Vec3<T>,
}

impl<T: Real> GridSpec<T> {
    /// Grid of `grid_size` meters per axis; dims are `round(grid_size / vox_size)`.
    pub fn new(grid_size: [T; 3], vox_size: T, origin: Vec3<T>) -> Result<Self> {
        if !(vox_size > T::zero()) || !vox_size.is_finite() {
            return Err(Error::InvalidGrid(format!("vox_size must be positive, got {vox_size}")));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        let mut dims = [0usize; 3];
        for (d, s) in dims.iter_mut().zip(grid_size) {
            if !(s > T::zero()) || !s.is_finite() {
                return Err(Error::InvalidGrid(format!("grid size must be positive, got {s}")));
            }
            *d = (s / vox_size).round().to_usize().unwrap_or(0);
            if *d == 0 {
                return Err(Error::InvalidGrid(format!(
                    "grid size {s} is less than half a voxel of {vox_size}"
                )));
            }
        }
        Ok(Self {
            grid_size: Vec3::from_array(grid_size),
            vox_size,
            dims,
            origin,
        })
    }

    /// Grid with `dims` voxels per axis.
    pub fn from_dims(dims: [usize; 3], vox_size: T, origin: Vec3<T>) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::InvalidGrid(format!("dims must be >= 1, got {dims:?}")));
        }
        let size = dims.map(|d| T::from_usize(d).expect("dims fit in a float") * vox_size);
        let spec = Self::new(size, vox_size, origin)?;
        debug_assert_eq!(spec.dims, dims);
        Ok(spec)
    }

    /// Grid placed so that `center` sits `dims / 2` whole voxels above the origin.
    pub fn centered(grid_size: [T; 3], vox_size: T, center: Vec3<T>) -> Result<Self> {
        let spec = Self::new(grid_size, vox_size, Vec3::zeros())?;
        Ok(spec.recentered(center))
    }

    /// Same extent, moved so that [`center`](Self::center) equals `center`.
    pub fn recentered(&self, center: Vec3<T>) -> Self {
        let half = self.half_extent();
        Self {
            origin: center - half,
            ..*self
        }
    }

    pub fn with_origin(&self, origin: Vec3<T>) -> Self {
        Self { origin, ..*self }
    }

    #[inline]
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    #[inline]
    pub fn vox_size(&self) -> T {
        self.vox_size
    }

    #[inline]
    pub fn origin(&self) -> Vec3<T> {
        self.origin
    }

    #[inline]
    pub fn grid_size(&self) -> Vec3<T> {
        self.grid_size
    }

    #[inline]
    pub fn num_voxels(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    /// Vector from the origin to the grid center, a whole number of voxels per axis.
    pub fn half_extent(&self) -> Vec3<T> {
        let h = self.dims.map(|d| T::from_usize(d / 2).unwrap() * self.vox_size);
        Vec3::from_array(h)
    }

    /// World position the grid is centered on.
    pub fn center(&self) -> Vec3<T> {
        self.origin + self.half_extent()
    }

    /// Extent actually covered by the voxels, `dims * vox_size`.
    pub fn extent(&self) -> Vec3<T> {
        Vec3::from_array(self.dims.map(|d| T::from_usize(d).unwrap() * self.vox_size))
    }

    #[inline]
    pub fn contains(&self, c: VoxelCoord) -> bool {
        c.x >= 0
            && c.y >= 0
            && c.z >= 0
            && (c.x as u64) < self.dims[0] as u64
            && (c.y as u64) < self.dims[1] as u64
            && (c.z as u64) < self.dims[2] as u64
    }

    /// `idx = x + y·dims_x + z·dims_x·dims_y`.
    #[inline]
    pub fn linear_index(&self, c: VoxelCoord) -> Result<usize> {
        if !self.contains(c) {
            return Err(self.out_of_bounds(c));
        }
        Ok(self.index_unchecked(c))
    }

    #[inline]
    pub(crate) fn index_unchecked(&self, c: VoxelCoord) -> usize {
        c.x as usize + self.dims[0] * (c.y as usize + self.dims[1] * c.z as usize)
    }

    /// Inverse of [`linear_index`](Self::linear_index).
    pub fn coord_of(&self, idx: usize) -> Option<VoxelCoord> {
        if idx >= self.num_voxels() {
            return None;
        }
        let [dx, dy, _] = self.dims;
        Some(VoxelCoord::new(
            (idx % dx) as i64,
            ((idx / dx) % dy) as i64,
            (idx / (dx * dy)) as i64,
        ))
    }

    /// Voxel containing a grid-frame point: `floor(component / vox_size)` per axis.
    /// Points on a face belong to the higher voxel. The result may be out of bounds.
    #[inline]
    pub fn world_to_voxel(&self, p: Vec3<T>) -> Result<VoxelCoord> {
        if !p.is_finite() {
            return Err(Error::NonFinite);
        }
        let f = |v: T| (v / self.vox_size).floor_i64();
        Ok(VoxelCoord::new(f(p.x), f(p.y), f(p.z)))
    }

    /// Voxel containing a world-frame point.
    pub fn world_point_to_voxel(&self, p: Vec3<T>) -> Result<VoxelCoord> {
        self.world_to_voxel(p - self.origin)
    }

    /// Grid-frame center of a voxel.
    pub fn voxel_center(&self, c: VoxelCoord) -> Vec3<T> {
        let h = T::lit(0.5);
        let f = |i: i64| (T::from_i64(i).unwrap() + h) * self.vox_size;
        Vec3::new(f(c.x), f(c.y), f(c.z))
    }

    /// True when both specs describe the same voxels at the same place.
    pub fn same_layout(&self, other: &Self) -> bool {
        self.dims == other.dims && self.vox_size == other.vox_size && self.origin == other.origin
    }

    fn out_of_bounds(&self, c: VoxelCoord) -> Error {
        Error::OutOfBounds {
            x: c.x,
            y: c.y,
            z: c.z,
            dx: self.dims[0],
            dy: self.dims[1],
            dz: self.dims[2],
        }
    }
}

/// `linear_index` as a free function.
pub fn linear_index<T: Real>(coord: VoxelCoord, spec: &GridSpec<T>) -> Result<usize> {
    spec.linear_index(coord)
}

/// `world_to_voxel` as a free function.
pub fn world_to_voxel<T: Real>(point: Vec3<T>, spec: &GridSpec<T>) -> Result<VoxelCoord> {
    spec.world_to_voxel(point)
}

/// Dense voxel grid: one [`VoxelState`] byte per voxel in `idx` order.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid<T> {
    spec: GridSpec<T>,
    cells: Vec<VoxelState>,
}

impl<T: Real> VoxelGrid<T> {
    /// All-unknown grid.
    pub fn new(spec: GridSpec<T>) -> Self {
        Self {
            cells: vec![VoxelState::Unknown; spec.num_voxels()],
            spec,
        }
    }

    pub fn from_cells(spec: GridSpec<T>, cells: Vec<VoxelState>) -> Result<Self> {
        if cells.len() != spec.num_voxels() {
            return Err(Error::InvalidGrid(format!(
                "{} cells for a grid of {} voxels",
                cells.len(),
                spec.num_voxels()
            )));
        }
        Ok(Self { spec, cells })
    }

    #[inline]
    pub fn spec(&self) -> &GridSpec<T> {
        &self.spec
    }

    #[inline]
    pub fn cells(&self) -> &[VoxelState] {
        &self.cells
    }

    #[inline]
    pub fn cells_mut(&mut self) -> &mut [VoxelState] {
        &mut self.cells
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn get(&self, c: VoxelCoord) -> Option<VoxelState> {
        self.spec.contains(c).then(|| self.cells[self.spec.index_unchecked(c)])
    }

    pub fn set(&mut self, c: VoxelCoord, state: VoxelState) -> Result<()> {
        let idx = self.spec.linear_index(c)?;
        self.cells[idx] = state;
        Ok(())
    }

    /// Sets every voxel to [`VoxelState::Unknown`].
    pub fn reset(&mut self) {
        self.cells.fill(VoxelState::Unknown);
    }

    /// Moves the grid without touching cell contents. Used to keep a scratch
    /// grid aligned with a grid that was shifted.
    pub fn relocate(&mut self, spec: GridSpec<T>) -> Result<()> {
        if spec.dims() != self.spec.dims() {
            return Err(Error::SpecMismatch(format!(
                "cannot relocate {:?} grid onto {:?}",
                self.spec.dims(),
                spec.dims()
            )));
        }
        self.spec = spec;
        Ok(())
    }

    pub fn count(&self, state: VoxelState) -> usize {
        self.cells.iter().filter(|&&c| c == state).count()
    }

    /// Voxel counts indexed by `VoxelState as usize`.
    pub fn state_counts(&self) -> [usize; 4] {
        let mut n = [0usize; 4];
        for &c in &self.cells {
            n[c as usize] += 1;
        }
        n
    }

    /// Coordinates of every voxel in `state`, in `idx` order.
    pub fn coords_in_state(&self, state: VoxelState) -> Vec<VoxelCoord> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == state)
            .map(|(i, _)| self.spec.coord_of(i).unwrap())
            .collect()
    }
}
