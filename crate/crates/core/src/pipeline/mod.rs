//! Per-measurement pipeline: reset the measurement grid, populate occupied
//! voxels, carve free space, merge into the local grid, recenter.

mod config;
mod merge;

use std::time::Instant;

pub use config::{ConfigFile, PipelineConfig, TracerMode};
pub use merge::merge_grids;

use crate::error::{Error, Result};
use crate::geometry::{depth_to_cloud, DepthImage, PointCloud, RigidTransform};
use crate::grid::{VoxelGrid, VoxelState};
use crate::integrator::{populate_occupied, PopulateStats};
use crate::math::Vec3;
use crate::raytracer::{bresenham_trace_image, bundle_dimensions, trace_bundle, RayBundle, TraceStats};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub enum Measurement<T> {
    Cloud(PointCloud<T>),
    Depth(DepthImage<T>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementFrame<T> {
    pub measurement: Measurement<T>,
    /// Camera to world.
    pub t_wc: RigidTransform<T>,
    /// Seconds.
    pub timestamp: f64,
}

impl<T: Real> MeasurementFrame<T> {
    pub fn from_cloud(cloud: PointCloud<T>, t_wc: RigidTransform<T>) -> Self {
        Self {
            measurement: Measurement::Cloud(cloud),
            t_wc,
            timestamp: 0.0,
        }
    }

    pub fn from_depth(img: DepthImage<T>, t_wc: RigidTransform<T>) -> Self {
        Self {
            measurement: Measurement::Depth(img),
            t_wc,
            timestamp: 0.0,
        }
    }

    pub fn with_timestamp(mut self, timestamp: f64) -> Self {
        self.timestamp = timestamp;
        self
    }
}

/// Wall time per step (microseconds) and counters for one measurement.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineStats {
    pub convert_us: f64,
    pub populate_us: f64,
    pub trace_us: f64,
    pub merge_us: f64,
    pub shift_us: f64,
    pub populate: PopulateStats,
    pub trace: TraceStats,
    /// Occupied voxels in the measurement grid.
    pub occupied: usize,
    /// Free voxels in the measurement grid.
    pub freed: usize,
    /// Whole-voxel shift applied to the local grid.
    pub shift: [i64; 3],
}

impl PipelineStats {
    /// Populate + trace + merge, the latency-relevant steps.
    pub fn latency_us(&self) -> f64 {
        self.populate_us + self.trace_us + self.merge_us
    }
}

/// Camera-to-grid transform: world-to-grid (a translation by `-grid_origin`,
/// axes aligned with the world) composed with `t_wc`.
pub fn camera_to_grid_transform<T: Real>(t_wc: &RigidTransform<T>, grid_origin: Vec3<T>) -> RigidTransform<T> {
    RigidTransform::from_translation(-grid_origin).compose(t_wc)
}

fn elapsed_us(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e6
}

fn run_steps<T: Real>(
    local: &mut VoxelGrid<T>,
    scratch: &mut VoxelGrid<T>,
    bundle: &RayBundle,
    cfg: &PipelineConfig<T>,
    frame: &MeasurementFrame<T>,
) -> Result<PipelineStats> {
    let mut stats = PipelineStats::default();
    let mode = cfg.parallelism;

    let t = Instant::now();
    let converted;
    let cloud = match &frame.measurement {
        Measurement::Cloud(c) => c,
        Measurement::Depth(img) => {
            converted = depth_to_cloud(img, &cfg.camera)?;
            &converted
        }
    };
    stats.convert_us = elapsed_us(t);

    scratch.relocate(*local.spec())?;
    scratch.reset();
    let t_vc = camera_to_grid_transform(&frame.t_wc, local.spec().origin());

    let t = Instant::now();
    stats.populate = populate_occupied(scratch, cloud, &t_vc, cfg.integrator, mode);
    stats.populate_us = elapsed_us(t);

    let t = Instant::now();
    stats.trace = match cfg.tracer {
        crate::pipeline::TracerMode::Bundled => trace_bundle(scratch, bundle, &t_vc, mode),
        crate::pipeline::TracerMode::PerPixel => bresenham_trace_image(scratch, cloud, &t_vc, mode),
    };
    stats.trace_us = elapsed_us(t);

    let t = Instant::now();
    merge_grids(local, scratch, mode)?;
    stats.merge_us = elapsed_us(t);

    let t = Instant::now();
    stats.shift = local.shift_grid(frame.t_wc.translation())?;
    stats.shift_us = elapsed_us(t);

    let counts = scratch.state_counts();
    stats.occupied = counts[VoxelState::Occupied as usize];
    stats.freed = counts[VoxelState::Free as usize];
    Ok(stats)
}

/// Runs all steps for one frame against `local`, allocating a fresh
/// measurement grid. [`LocalMapper`] reuses one across frames.
pub fn integrate_measurement<T: Real>(
    local: &mut VoxelGrid<T>,
    frame: &MeasurementFrame<T>,
    cfg: &PipelineConfig<T>,
) -> Result<PipelineStats> {
    cfg.validate()?;
    check_grid(local, cfg)?;
    let bundle = bundle_dimensions(&cfg.camera, cfg.depth, local.spec().vox_size())?;
    let mut scratch = VoxelGrid::new(*local.spec());
    run_steps(local, &mut scratch, &bundle, cfg, frame)
}

fn check_grid<T: Real>(local: &VoxelGrid<T>, cfg: &PipelineConfig<T>) -> Result<()> {
    if local.spec().dims() != cfg.grid.dims() || local.spec().vox_size() != cfg.grid.vox_size() {
        return Err(Error::SpecMismatch(format!(
            "local grid {:?} does not match configured {:?}",
            local.spec().dims(),
            cfg.grid.dims()
        )));
    }
    Ok(())
}

/// Owns the local and measurement grids of one robot.
#[derive(Debug, Clone)]
pub struct LocalMapper<T> {
    cfg: PipelineConfig<T>,
    bundle: RayBundle,
    local: VoxelGrid<T>,
    scratch: VoxelGrid<T>,
}

impl<T: Real> LocalMapper<T> {
    /// All-unknown local grid centered on `initial_center`.
    pub fn new(cfg: PipelineConfig<T>, initial_center: Vec3<T>) -> Result<Self> {
        cfg.validate()?;
        if !initial_center.is_finite() {
            return Err(Error::NonFinite);
        }
        let spec = cfg.grid.recentered(initial_center);
        let bundle = bundle_dimensions(&cfg.camera, cfg.depth, spec.vox_size())?;
        Ok(Self {
            cfg,
            bundle,
            local: VoxelGrid::new(spec),
            scratch: VoxelGrid::new(spec),
        })
    }

    pub fn integrate(&mut self, frame: &MeasurementFrame<T>) -> Result<PipelineStats> {
        run_steps(&mut self.local, &mut self.scratch, &self.bundle, &self.cfg, frame)
    }

    #[inline]
    pub fn local_grid(&self) -> &VoxelGrid<T> {
        &self.local
    }

    /// Measurement grid of the last integrated frame.
    #[inline]
    pub fn measurement_grid(&self) -> &VoxelGrid<T> {
        &self.scratch
    }

    #[inline]
    pub fn config(&self) -> &PipelineConfig<T> {
        &self.cfg
    }

    #[inline]
    pub fn bundle(&self) -> &RayBundle {
        &self.bundle
    }

    pub fn into_local_grid(self) -> VoxelGrid<T> {
        self.local
    }
}
