//! Bundled tracing against the per-pixel baseline on the same frames.

use voxgrid_core::{
    LocalMapper, MeasurementFrame, PipelineConfig, PipelineStats, Result, TracerMode, VoxelGrid, VoxelState,
};

use crate::report::BenchmarkReport;
use crate::scene::{render_depth, Scene};
use crate::timing::Summary;
use crate::trajectory::Trajectory;

/// Measurement-grid agreement for one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameAgreement {
    pub occupied_equal: bool,
    pub bundled_free: usize,
    pub per_pixel_free: usize,
    /// Cells whose states match, unknown-and-traced counted as unknown.
    pub equal_state_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Agreement {
    pub frames: Vec<FrameAgreement>,
    /// Same comparison on the final local grids.
    pub local_equal_state_fraction: f64,
}

impl Agreement {
    pub fn occupied_sets_equal(&self) -> bool {
        self.frames.iter().all(|f| f.occupied_equal)
    }

    pub fn bundled_free(&self) -> usize {
        self.frames.iter().map(|f| f.bundled_free).sum()
    }

    pub fn per_pixel_free(&self) -> usize {
        self.frames.iter().map(|f| f.per_pixel_free).sum()
    }

    /// Bundled over per-pixel free voxels, summed over frames.
    pub fn free_ratio(&self) -> f64 {
        match (self.bundled_free(), self.per_pixel_free()) {
            (0, 0) => 1.0,
            (b, p) => b as f64 / p as f64,
        }
    }

    pub fn equal_state_fraction(&self) -> f64 {
        if self.frames.is_empty() {
            return 1.0;
        }
        self.frames.iter().map(|f| f.equal_state_fraction).sum::<f64>() / self.frames.len() as f64
    }
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub report: BenchmarkReport,
    pub agreement: Agreement,
    pub bundled: Vec<PipelineStats>,
    pub per_pixel: Vec<PipelineStats>,
}

impl Comparison {
    /// Per-pixel over bundled median trace time.
    pub fn trace_speedup(&self) -> f64 {
        median(&self.per_pixel, |s| s.trace_us) / median(&self.bundled, |s| s.trace_us)
    }
}

fn median(stats: &[PipelineStats], f: impl Fn(&PipelineStats) -> f64) -> f64 {
    let v: Vec<f64> = stats.iter().map(f).collect();
    Summary::from_samples(&v).map_or(f64::NAN, |s| s.median)
}

fn normalized(s: VoxelState) -> VoxelState {
    match s {
        VoxelState::UnknownTraced => VoxelState::Unknown,
        s => s,
    }
}

pub fn grid_agreement(a: &VoxelGrid<f64>, b: &VoxelGrid<f64>) -> FrameAgreement {
    let mut occupied_equal = true;
    let mut equal = 0usize;
    for (&x, &y) in a.cells().iter().zip(b.cells()) {
        if (x == VoxelState::Occupied) != (y == VoxelState::Occupied) {
            occupied_equal = false;
        }
        if normalized(x) == normalized(y) {
            equal += 1;
        }
    }
    FrameAgreement {
        occupied_equal,
        bundled_free: a.count(VoxelState::Free),
        per_pixel_free: b.count(VoxelState::Free),
        equal_state_fraction: equal as f64 / a.len().max(1) as f64,
    }
}

type StepTime = fn(&PipelineStats) -> f64;

/// Runs the bundled and per-pixel pipelines on depth images rendered from
/// `scene` along `trajectory`, both with `cfg.parallelism`.
pub fn compare_methods(cfg: &PipelineConfig<f64>, scene: &Scene, trajectory: &Trajectory) -> Result<Comparison> {
    let start = trajectory
        .poses
        .first()
        .map_or(voxgrid_core::Vec3::zeros(), |p| p.translation());
    let mut bundled = LocalMapper::new(
        PipelineConfig {
            tracer: TracerMode::Bundled,
            ..*cfg
        },
        start,
    )?;
    let mut per_pixel = LocalMapper::new(
        PipelineConfig {
            tracer: TracerMode::PerPixel,
            ..*cfg
        },
        start,
    )?;

    let mut frames = Vec::with_capacity(trajectory.len());
    let (mut b_stats, mut p_stats) = (Vec::new(), Vec::new());
    for (k, pose) in trajectory.poses.iter().enumerate() {
        let img = render_depth(scene, pose, &cfg.camera);
        let frame = MeasurementFrame::from_depth(img, *pose).with_timestamp(trajectory.timestamp(k));
        b_stats.push(bundled.integrate(&frame)?);
        p_stats.push(per_pixel.integrate(&frame)?);
        frames.push(grid_agreement(bundled.measurement_grid(), per_pixel.measurement_grid()));
    }
    let local = grid_agreement(bundled.local_grid(), per_pixel.local_grid());

    let mut report = BenchmarkReport::default();
    let n = trajectory.len() as f64;
    for (name, stats) in [("compare_bundled", &b_stats), ("compare_per_pixel", &p_stats)] {
        let rays: u64 = stats.iter().map(|s| s.trace.rays_traced as u64).sum();
        let steps: [(&str, u64, StepTime); 5] = [
            ("populate", 0, |s| s.populate_us),
            ("trace", rays, |s| s.trace_us),
            ("merge", 0, |s| s.merge_us),
            ("shift", 0, |s| s.shift_us),
            ("latency", 0, |s| s.latency_us()),
        ];
        for (step, work, f) in steps {
            let v: Vec<f64> = stats.iter().map(f).collect();
            if let Some(summary) = Summary::from_samples(&v) {
                report.push(name, n, step, work, summary);
            }
        }
    }

    Ok(Comparison {
        report,
        agreement: Agreement {
            frames,
            local_equal_state_fraction: local.equal_state_fraction,
        },
        bundled: b_stats,
        per_pixel: p_stats,
    })
}
