//! Marks voxels containing measurement points as occupied, with optional
//! cubic inflation.

use rayon::prelude::*;

use crate::exec::{atomic_view, cell_view, CellStore, Parallelism};
use crate::geometry::{PointCloud, RigidTransform};
use crate::grid::{GridSpec, VoxelCoord, VoxelGrid, VoxelState};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IntegratorConfig {
    /// Voxels to inflate by along each axis.
    pub vox_inf: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PopulateStats {
    pub points: usize,
    /// Points whose containing voxel lies outside the grid.
    pub points_out_of_bounds: usize,
}

impl std::ops::Add for PopulateStats {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            points: self.points + o.points,
            points_out_of_bounds: self.points_out_of_bounds + o.points_out_of_bounds,
        }
    }
}

const CHUNK: usize = 1024;

/// Sets the voxel of every point, plus the `(2·vox_inf+1)³` cube around it,
/// to occupied. Cube cells outside the grid are skipped. No other cell changes.
pub fn populate_occupied<T: Real>(
    grid: &mut VoxelGrid<T>,
    cloud: &PointCloud<T>,
    t_vc: &RigidTransform<T>,
    cfg: IntegratorConfig,
    mode: Parallelism,
) -> PopulateStats {
    let spec = *grid.spec();
    match mode {
        Parallelism::Sequential => {
            let cells = cell_view(grid.cells_mut());
            populate_chunk(cells, &spec, cloud.points(), t_vc, cfg.vox_inf)
        }
        Parallelism::DataParallel => {
            let cells = atomic_view(grid.cells_mut());
            cloud
                .points()
                .par_chunks(CHUNK)
                .map(|chunk| populate_chunk(cells, &spec, chunk, t_vc, cfg.vox_inf))
                .reduce(PopulateStats::default, |a, b| a + b)
        }
    }
}

fn populate_chunk<T: Real, S: CellStore + ?Sized>(
    cells: &S,
    spec: &GridSpec<T>,
    points: &[crate::math::Vec3<T>],
    t_vc: &RigidTransform<T>,
    vox_inf: u32,
) -> PopulateStats {
    let mut stats = PopulateStats {
        points: points.len(),
        points_out_of_bounds: 0,
    };
    let r = vox_inf as i64;
    let [dx, dy, dz] = spec.dims().map(|d| d as i64);
    for &p in points {
        let Ok(c) = spec.world_to_voxel(t_vc.transform_point(p)) else {
            stats.points_out_of_bounds += 1;
            continue;
        };
        if !spec.contains(c) {
            stats.points_out_of_bounds += 1;
        }
        if r == 0 {
            if spec.contains(c) {
                cells.store(spec.index_unchecked(c), VoxelState::Occupied);
            }
            continue;
        }
        // Clip the inflation cube to the grid once, then fill rows.
        let lo = |v: i64| v.saturating_sub(r).max(0);
        let hi = |v: i64, d: i64| v.saturating_add(r).min(d - 1);
        let (x0, x1) = (lo(c.x), hi(c.x, dx));
        let (y0, y1) = (lo(c.y), hi(c.y, dy));
        let (z0, z1) = (lo(c.z), hi(c.z, dz));
        if x0 > x1 || y0 > y1 || z0 > z1 {
            continue;
        }
        for z in z0..=z1 {
            for y in y0..=y1 {
                let row = spec.index_unchecked(VoxelCoord::new(x0, y, z));
                for i in 0..=(x1 - x0) as usize {
                    cells.store(row + i, VoxelState::Occupied);
                }
            }
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Vec3;

    fn grid(dims: [usize; 3]) -> VoxelGrid<f64> {
        VoxelGrid::new(GridSpec::from_dims(dims, 0.15, Vec3::zeros()).unwrap())
    }

    fn run(g: &mut VoxelGrid<f64>, pts: Vec<Vec3<f64>>, vox_inf: u32) -> PopulateStats {
        populate_occupied(
            g,
            &PointCloud::new(pts),
            &RigidTransform::identity(),
            IntegratorConfig { vox_inf },
            Parallelism::Sequential,
        )
    }

    #[test]
    fn single_point_marks_its_voxel() {
        let mut g = grid([10, 10, 10]);
        run(&mut g, vec![Vec3::new(0.05, 0.05, 0.05)], 0);
        assert_eq!(g.coords_in_state(VoxelState::Occupied), vec![VoxelCoord::new(0, 0, 0)]);
    }

    #[test]
    fn inflation_marks_full_cube_and_clips() {
        // enumeration oracle: every voxel within Chebyshev distance 2
        let mut g = grid([10, 10, 10]);
        run(&mut g, vec![Vec3::new(0.75, 0.75, 0.75)], 2); // voxel (5,5,5)
        assert_eq!(g.count(VoxelState::Occupied), 125);
        for c in g.coords_in_state(VoxelState::Occupied) {
            assert!((c.x - 5).abs() <= 2 && (c.y - 5).abs() <= 2 && (c.z - 5).abs() <= 2);
        }

        let mut g = grid([10, 10, 10]);
        run(&mut g, vec![Vec3::new(0.05, 0.05, 0.05)], 2); // corner voxel
        assert_eq!(g.count(VoxelState::Occupied), 27);
    }

    #[test]
    fn empty_cloud_is_noop_and_duplicates_are_idempotent() {
        let mut g = grid([6, 6, 6]);
        g.set(VoxelCoord::new(1, 1, 1), VoxelState::Free).unwrap();
        let before = g.clone();
        run(&mut g, vec![], 1);
        assert_eq!(g, before);

        let mut a = grid([6, 6, 6]);
        let mut b = grid([6, 6, 6]);
        run(&mut a, vec![Vec3::new(0.4, 0.4, 0.4)], 1);
        run(&mut b, vec![Vec3::new(0.4, 0.4, 0.4), Vec3::new(0.44, 0.31, 0.35)], 1);
        assert_eq!(a, b);
    }

    #[test]
    fn out_of_bounds_points_are_counted_and_clipped() {
        let mut g = grid([6, 6, 6]);
        // voxel (-1, 2, 2): outside, but its inflated cube reaches x = 0
        let stats = run(&mut g, vec![Vec3::new(-0.1, 0.35, 0.35), Vec3::new(50.0, 0.0, 0.0)], 1);
        assert_eq!(stats.points, 2);
        assert_eq!(stats.points_out_of_bounds, 2);
        assert_eq!(g.count(VoxelState::Occupied), 9);
        assert!(g.coords_in_state(VoxelState::Occupied).iter().all(|c| c.x == 0));
    }

    #[test]
    fn transform_is_applied() {
        let mut g = grid([10, 10, 10]);
        let t = RigidTransform::from_translation(Vec3::new(0.75, 0.0, 0.0));
        populate_occupied(
            &mut g,
            &PointCloud::new(vec![Vec3::new(0.05, 0.05, 0.05)]),
            &t,
            IntegratorConfig::default(),
            Parallelism::DataParallel,
        );
        assert_eq!(g.coords_in_state(VoxelState::Occupied), vec![VoxelCoord::new(5, 0, 0)]);
    }
}
