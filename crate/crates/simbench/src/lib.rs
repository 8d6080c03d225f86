//! Synthetic depth scenes, scripted trajectories and the benchmark harness
//! for `voxgrid-core`.

pub mod compare;
pub mod report;
pub mod scene;
pub mod sweeps;
pub mod timing;
pub mod trajectory;

pub use compare::{compare_methods, grid_agreement, Agreement, Comparison, FrameAgreement};
pub use report::{BenchmarkReport, ReportRow};
pub use scene::{camera_pose, render_depth, Aabb, Scene};
pub use sweeps::{sweep_points_benchmark, sweep_rays_benchmark, sweep_voxels_benchmark, SweepOptions};
pub use timing::{loglog_slope, measure, top_decade_slope, Summary, TimingOptions};
pub use trajectory::{Trajectory, Waypoint};
