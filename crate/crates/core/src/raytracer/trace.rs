use rayon::prelude::*;

use crate::exec::{atomic_view, cell_view, CellStore, Parallelism};
use crate::geometry::{camera_center_in_grid, RigidTransform};
use crate::grid::{GridSpec, VoxelGrid, VoxelState};
use crate::math::Vec3;
#[cfg(doc)]
use crate::raytracer::generate_rays;
use crate::raytracer::{Ray, RayBundle, VoxelWalker};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TraceStats {
    pub rays_traced: usize,
    /// Writes of [`VoxelState::Free`].
    pub voxels_freed: usize,
    /// Writes of [`VoxelState::UnknownTraced`].
    pub voxels_marked_unknown_traced: usize,
    /// Voxels the full segment crosses outside the grid.
    pub voxels_skipped_out_of_bounds: usize,
}

impl std::ops::Add for TraceStats {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            rays_traced: self.rays_traced + o.rays_traced,
            voxels_freed: self.voxels_freed + o.voxels_freed,
            voxels_marked_unknown_traced: self.voxels_marked_unknown_traced + o.voxels_marked_unknown_traced,
            voxels_skipped_out_of_bounds: self.voxels_skipped_out_of_bounds + o.voxels_skipped_out_of_bounds,
        }
    }
}

impl std::ops::AddAssign for TraceStats {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

/// Walks one ray: non-occupied voxels take the current value, which starts
/// as free and turns to unknown-and-traced once an occupied voxel is passed.
/// Occupied voxels are never written.
pub(crate) fn trace_into<T: Real, S: CellStore + ?Sized>(cells: &S, spec: &GridSpec<T>, ray: &Ray<T>) -> TraceStats {
    trace_walk(cells, spec, VoxelWalker::new(spec, ray))
}

#[inline]
fn trace_walk<T: Real, S: CellStore + ?Sized>(cells: &S, spec: &GridSpec<T>, walker: VoxelWalker<T>) -> TraceStats {
    let mut stats = TraceStats {
        rays_traced: 1,
        ..Default::default()
    };
    let mut value = VoxelState::Free;
    let mut visited = 0usize;
    let span = walker.unclipped_span();
    walker.for_each_index(spec, |idx| {
        visited += 1;
        if cells.load(idx) == VoxelState::Occupied {
            value = VoxelState::UnknownTraced;
        } else {
            cells.store(idx, value);
            match value {
                VoxelState::Free => stats.voxels_freed += 1,
                _ => stats.voxels_marked_unknown_traced += 1,
            }
        }
    });
    stats.voxels_skipped_out_of_bounds = span.saturating_sub(visited);
    stats
}

pub fn traverse_ray<T: Real>(grid: &mut VoxelGrid<T>, ray: &Ray<T>) -> TraceStats {
    let spec = *grid.spec();
    trace_into(cell_view(grid.cells_mut()), &spec, ray)
}

/// Traces `rays` into `grid`. Sequential mode processes them in order and is
/// deterministic; in data-parallel mode a voxel reached by several rays with
/// different values ends up holding one of them.
pub fn trace_rays<T: Real>(grid: &mut VoxelGrid<T>, rays: &[Ray<T>], mode: Parallelism) -> TraceStats {
    let spec = *grid.spec();
    match mode {
        Parallelism::Sequential => {
            let cells = cell_view(grid.cells_mut());
            rays.iter()
                .fold(TraceStats::default(), |acc, r| acc + trace_into(cells, &spec, r))
        }
        Parallelism::DataParallel => {
            let cells = atomic_view(grid.cells_mut());
            rays.par_iter()
                .fold(TraceStats::default, |acc, r| acc + trace_into(cells, &spec, r))
                .reduce(TraceStats::default, |a, b| a + b)
        }
    }
}

/// Traces every ray of `bundle` from the camera pose `t_vc` (camera to grid).
/// Same result as [`generate_rays`] followed by [`trace_rays`], without
/// materializing the rays.
pub fn trace_bundle<T: Real>(
    grid: &mut VoxelGrid<T>,
    bundle: &RayBundle,
    t_vc: &RigidTransform<T>,
    mode: Parallelism,
) -> TraceStats {
    let spec = *grid.spec();
    let hh = (bundle.vox_height() as i64 - 1) / 2;
    match mode {
        Parallelism::Sequential => {
            let cells = cell_view(grid.cells_mut());
            (-hh..=hh).fold(TraceStats::default(), |acc, y| {
                acc + trace_bundle_row(cells, &spec, bundle, t_vc, y)
            })
        }
        Parallelism::DataParallel => {
            let cells = atomic_view(grid.cells_mut());
            (-hh..=hh)
                .into_par_iter()
                .map(|y| trace_bundle_row(cells, &spec, bundle, t_vc, y))
                .reduce(TraceStats::default, |a, b| a + b)
        }
    }
}

fn trace_bundle_row<T: Real, S: CellStore + ?Sized>(
    cells: &S,
    spec: &GridSpec<T>,
    bundle: &RayBundle,
    t_vc: &RigidTransform<T>,
    y: i64,
) -> TraceStats {
    let vox = spec.vox_size();
    let start = camera_center_in_grid(t_vc);
    let hw = (bundle.vox_width() as i64 - 1) / 2;
    let ty = T::from_i64(y).unwrap() * vox;
    let tz = T::from_u32(bundle.vox_depth()).unwrap() * vox;
    (-hw..=hw).fold(TraceStats::default(), |acc, x| {
        let target = Vec3::new(T::from_i64(x).unwrap() * vox, ty, tz);
        let walker = VoxelWalker::from_parts(spec, start, t_vc.transform_vector(target), target.norm());
        acc + trace_walk(cells, spec, walker)
    })
}
