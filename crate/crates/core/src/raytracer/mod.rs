//! Free-space carving: bundled rays walked with Amanatides–Woo traversal,
//! and the per-pixel Bresenham tracer kept as a baseline.

mod bresenham;
mod bundle;
mod trace;
mod walker;

pub use bresenham::{bresenham_line, bresenham_trace_image, BresenhamLine};
pub use bundle::{bundle_dimensions, generate_rays, RayBundle};
pub use trace::{trace_bundle, trace_rays, traverse_ray, TraceStats};
pub use walker::{Ray, VoxelWalker};
