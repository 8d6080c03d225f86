//! Scaling sweeps: one pipeline step timed against the quantity that drives
//! its cost.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use voxgrid_core::{
    merge_grids, populate_occupied, trace_bundle, trace_rays, GridSpec, Parallelism, PipelineConfig, PointCloud,
    RayBundle, Result, RigidTransform, Vec3, VoxelGrid, VoxelState,
};

use crate::report::BenchmarkReport;
use crate::scene::camera_pose;
use crate::timing::{measure, TimingOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepOptions {
    pub timing: TimingOptions,
    pub mode: Parallelism,
    pub seed: u64,
}

pub const DEFAULT_POINT_COUNTS: [usize; 8] = [0, 1_000, 3_000, 10_000, 30_000, 60_000, 100_000, 300_000];

/// Square bundle half-widths; `(2h+1)²` rays each.
pub const DEFAULT_RAY_HALF_WIDTHS: [u32; 11] = [0, 1, 2, 4, 7, 11, 16, 22, 31, 40, 49];

/// Grids cannot be empty; the single-voxel grid is the near-zero row.
pub const DEFAULT_GRID_DIMS: [[usize; 3]; 8] = [
    [1, 1, 1],
    [40, 40, 15],
    [50, 50, 20],
    [60, 60, 25],
    [80, 80, 30],
    [100, 100, 40],
    [120, 120, 35],
    [150, 150, 30],
];

/// Times populate on the configured grid for each point count. Points are
/// uniform over the image and over depth in `[0.3, cfg.depth]`, seen from
/// a camera at the grid center.
pub fn sweep_points_benchmark(
    cfg: &PipelineConfig<f64>,
    counts: &[usize],
    opts: &SweepOptions,
) -> Result<BenchmarkReport> {
    let spec = cfg.grid.recentered(Vec3::zeros());
    let t_wc = camera_pose(Vec3::zeros(), 0.0);
    let t_vc = voxgrid_core::camera_to_grid_transform(&t_wc, spec.origin());
    let cam = cfg.camera;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let max = counts.iter().copied().max().unwrap_or(0);
    let points: Vec<Vec3<f64>> = (0..max)
        .map(|_| {
            let u = rng.gen_range(0..cam.width());
            let v = rng.gen_range(0..cam.height());
            cam.pixel_ray(u, v).scale(rng.gen_range(0.3..cfg.depth.max(0.31)))
        })
        .collect();

    let empty = VoxelGrid::new(spec);
    let mut report = BenchmarkReport::default();
    for &n in counts {
        let cloud = PointCloud::new(points[..n].to_vec());
        let summary = measure(
            opts.timing,
            || empty.clone(),
            |mut g| {
                populate_occupied(&mut g, &cloud, &t_vc, cfg.integrator, opts.mode);
                g
            },
        );
        report.push("points", n as f64, "populate", n as u64, summary);
    }
    Ok(report)
}

/// Times tracing square bundles of depth `vox_depth(cfg)` with the given
/// half-widths, from the center of a cube grid large enough that no ray is
/// clipped.
pub fn sweep_rays_benchmark(
    cfg: &PipelineConfig<f64>,
    half_widths: &[u32],
    opts: &SweepOptions,
) -> Result<BenchmarkReport> {
    let vox = cfg.grid.vox_size();
    let vox_depth = (cfg.depth / vox).round() as u32;
    let widest = half_widths.iter().copied().max().unwrap_or(0);
    let half = vox_depth.max(widest) as usize + 1;
    let spec = GridSpec::from_dims([2 * half; 3], vox, Vec3::splat(-(half as f64) * vox))?;
    let t_vc = RigidTransform::from_translation(Vec3::splat(half as f64 * vox));

    let empty = VoxelGrid::new(spec);
    let mut report = BenchmarkReport::default();
    if half_widths.is_empty() {
        return Ok(report);
    }
    let zero = measure(
        opts.timing,
        || empty.clone(),
        |mut g| {
            trace_rays(&mut g, &[], opts.mode);
            g
        },
    );
    report.push("rays", 0.0, "trace", 0, zero);
    for &h in half_widths {
        let bundle = RayBundle::new(vox_depth, 2 * h + 1, 2 * h + 1)?;
        let mut visited = 0;
        let summary = measure(
            opts.timing,
            || empty.clone(),
            |mut g| {
                visited = trace_bundle(&mut g, &bundle, &t_vc, opts.mode).voxels_freed;
                g
            },
        );
        report.push("rays", bundle.ray_count() as f64, "trace", visited as u64, summary);
    }
    Ok(report)
}

/// Times merge across grid sizes. Measurement grids are seeded noise with
/// 40 % observed cells.
pub fn sweep_voxels_benchmark(
    cfg: &PipelineConfig<f64>,
    dims: &[[usize; 3]],
    opts: &SweepOptions,
) -> Result<BenchmarkReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut report = BenchmarkReport::default();
    for &d in dims {
        let spec = GridSpec::from_dims(d, cfg.grid.vox_size(), Vec3::zeros())?;
        let n = spec.num_voxels();
        let local = VoxelGrid::from_cells(spec, (0..n).map(|_| random_state(&mut rng, 0.5)).collect())?;
        let ms = VoxelGrid::from_cells(spec, (0..n).map(|_| random_state(&mut rng, 0.6)).collect())?;
        let summary = measure(
            opts.timing,
            || local.clone(),
            |mut g| {
                merge_grids(&mut g, &ms, opts.mode).expect("same layout");
                g
            },
        );
        report.push("voxels", n as f64, "merge", n as u64, summary);
    }
    Ok(report)
}

fn random_state(rng: &mut ChaCha8Rng, unknown: f64) -> VoxelState {
    let r: f64 = rng.gen();
    if r < unknown {
        VoxelState::Unknown
    } else if r < unknown + (1.0 - unknown) * 0.6 {
        VoxelState::Free
    } else if r < unknown + (1.0 - unknown) * 0.85 {
        VoxelState::Occupied
    } else {
        VoxelState::UnknownTraced
    }
}
