//! Sliding local voxel grid mapping for dense depth sensors.
//!
//! Each measurement runs five steps against two equally sized grids: the
//! persistent local grid centered on the robot and a per-frame measurement
//! grid.
//!
//! 1. reset the measurement grid to unknown,
//! 2. mark voxels containing measurement points occupied ([`integrator`]),
//! 3. carve free space with one ray per far-plane voxel of the camera
//!    frustum ([`raytracer`]),
//! 4. merge the measurement grid into the local grid ([`pipeline`]),
//! 5. shift the local grid to stay centered on the robot ([`grid`]).
//!
//! All geometry is generic over [`Real`] (`f32` or `f64`); the `*F32` and
//! `*F64` aliases below name the concrete instantiations.

// `!(x > 0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod geometry;
pub mod grid;
pub mod integrator;
pub mod math;
pub mod pipeline;
pub mod raytracer;
pub mod scalar;

pub use error::{Error, Result};
pub use exec::Parallelism;
pub use geometry::{depth_to_cloud, CameraModel, DepthImage, PointCloud, RigidTransform};
pub use grid::{GridSpec, VoxelCoord, VoxelGrid, VoxelState};
pub use integrator::{populate_occupied, IntegratorConfig, PopulateStats};
pub use math::{Mat3, Vec3};
pub use pipeline::{
    camera_to_grid_transform, integrate_measurement, merge_grids, ConfigFile, LocalMapper, Measurement,
    MeasurementFrame, PipelineConfig, PipelineStats, TracerMode,
};
pub use raytracer::{
    bresenham_line, bresenham_trace_image, bundle_dimensions, generate_rays, trace_bundle, trace_rays, traverse_ray,
    Ray, RayBundle, TraceStats, VoxelWalker,
};
pub use scalar::Real;

pub type Vec3F32 = Vec3<f32>;
pub type Vec3F64 = Vec3<f64>;
pub type GridSpecF32 = GridSpec<f32>;
pub type GridSpecF64 = GridSpec<f64>;
pub type VoxelGridF32 = VoxelGrid<f32>;
pub type VoxelGridF64 = VoxelGrid<f64>;
pub type RigidTransformF32 = RigidTransform<f32>;
pub type RigidTransformF64 = RigidTransform<f64>;
pub type CameraModelF32 = CameraModel<f32>;
pub type CameraModelF64 = CameraModel<f64>;
pub type PointCloudF32 = PointCloud<f32>;
pub type PointCloudF64 = PointCloud<f64>;
pub type DepthImageF32 = DepthImage<f32>;
pub type DepthImageF64 = DepthImage<f64>;
pub type RayF32 = Ray<f32>;
pub type RayF64 = Ray<f64>;
pub type PipelineConfigF32 = PipelineConfig<f32>;
pub type PipelineConfigF64 = PipelineConfig<f64>;
pub type LocalMapperF32 = LocalMapper<f32>;
pub type LocalMapperF64 = LocalMapper<f64>;
