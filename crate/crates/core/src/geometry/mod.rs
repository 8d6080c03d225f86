//! Frames, camera model and depth-image conversion.

mod camera;
pub mod io;
mod transform;

pub use camera::{depth_to_cloud, CameraModel, DepthImage, PointCloud};
pub use transform::{apply, camera_center_in_grid, compose, RigidTransform};
