use rayon::prelude::*;

use crate::exec::{atomic_view, cell_view, CellStore, Parallelism};
use crate::geometry::{camera_center_in_grid, PointCloud, RigidTransform};
use crate::grid::{GridSpec, VoxelCoord, VoxelGrid, VoxelState};
use crate::math::Vec3;
use crate::raytracer::TraceStats;
use crate::scalar::Real;

/// Integer 3D Bresenham line from `from` to `to`, both ends included.
///
/// Steps one voxel per increment of the driving (longest) axis, so it can
/// jump diagonally past voxels the continuous segment clips.
#[derive(Debug, Clone)]
pub struct BresenhamLine {
    cur: [i64; 3],
    step: [i64; 3],
    delta: [i64; 3],
    major: usize,
    minor: [usize; 2],
    err: [i64; 2],
    remaining: u64,
}

pub fn bresenham_line(from: VoxelCoord, to: VoxelCoord) -> BresenhamLine {
    let (a, b) = (from.to_array(), to.to_array());
    let delta = [0, 1, 2].map(|i| (b[i] - a[i]).abs());
    let step = [0, 1, 2].map(|i| if b[i] >= a[i] { 1 } else { -1 });
    let major = if delta[0] >= delta[1] && delta[0] >= delta[2] {
        0
    } else if delta[1] >= delta[2] {
        1
    } else {
        2
    };
    let minor = match major {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    let err = minor.map(|m| 2 * delta[m] - delta[major]);
    BresenhamLine {
        cur: a,
        step,
        delta,
        major,
        minor,
        err,
        remaining: delta[major] as u64 + 1,
    }
}

impl Iterator for BresenhamLine {
    type Item = VoxelCoord;

    #[inline]
    fn next(&mut self) -> Option<VoxelCoord> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = VoxelCoord::from_array(self.cur);
        if self.remaining > 0 {
            for k in 0..2 {
                let m = self.minor[k];
                if self.err[k] >= 0 {
                    self.cur[m] += self.step[m];
                    self.err[k] -= 2 * self.delta[self.major];
                }
                self.err[k] += 2 * self.delta[m];
            }
            self.cur[self.major] += self.step[self.major];
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

fn trace_points<T: Real, S: CellStore + ?Sized>(
    cells: &S,
    spec: &GridSpec<T>,
    camera: VoxelCoord,
    points: &[Vec3<T>],
    t_vc: &RigidTransform<T>,
) -> TraceStats {
    let mut stats = TraceStats::default();
    for &p in points {
        let Ok(end) = spec.world_to_voxel(t_vc.transform_point(p)) else {
            continue;
        };
        stats.rays_traced += 1;
        let mut line = bresenham_line(camera, end);
        let steps = line.size_hint().0.saturating_sub(1);
        for c in line.by_ref().take(steps) {
            if !spec.contains(c) {
                stats.voxels_skipped_out_of_bounds += 1;
                continue;
            }
            let idx = spec.index_unchecked(c);
            if cells.load(idx) != VoxelState::Occupied {
                cells.store(idx, VoxelState::Free);
                stats.voxels_freed += 1;
            }
        }
    }
    stats
}

/// Per-pixel baseline: one Bresenham line from the camera voxel to each
/// point's voxel, freeing every voxel on it except the endpoint. Occupied
/// voxels are left alone.
pub fn bresenham_trace_image<T: Real>(
    grid: &mut VoxelGrid<T>,
    cloud: &PointCloud<T>,
    t_vc: &RigidTransform<T>,
    mode: Parallelism,
) -> TraceStats {
    let spec = *grid.spec();
    let Ok(camera) = spec.world_to_voxel(camera_center_in_grid(t_vc)) else {
        return TraceStats::default();
    };
    match mode {
        Parallelism::Sequential => trace_points(cell_view(grid.cells_mut()), &spec, camera, cloud.points(), t_vc),
        Parallelism::DataParallel => {
            let cells = atomic_view(grid.cells_mut());
            cloud
                .points()
                .par_chunks(256)
                .map(|chunk| trace_points(cells, &spec, camera, chunk, t_vc))
                .reduce(TraceStats::default, |a, b| a + b)
        }
    }
}
