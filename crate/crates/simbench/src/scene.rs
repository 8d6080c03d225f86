//! Box worlds and a pinhole depth renderer.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use voxgrid_core::{CameraModel, DepthImage, Error, Real, Result, RigidTransform, Vec3};

/// Axis-aligned box in world coordinates (meters).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3<f64>,
    pub max: Vec3<f64>,
}

impl Aabb {
    pub fn new(min: Vec3<f64>, max: Vec3<f64>) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(Error::NonFinite);
        }
        if (0..3).any(|a| min[a] >= max[a]) {
            return Err(Error::Format {
                what: "box",
                detail: format!("min {:?} not below max {:?}", min.to_array(), max.to_array()),
            });
        }
        Ok(Self { min, max })
    }

    pub fn from_bounds(min: [f64; 3], max: [f64; 3]) -> Result<Self> {
        Self::new(Vec3::from_array(min), Vec3::from_array(max))
    }

    pub fn contains(&self, p: Vec3<f64>) -> bool {
        (0..3).all(|a| p[a] >= self.min[a] && p[a] <= self.max[a])
    }

    /// Entry parameter of `o + t·d` for `t > 0`, or `None` on a miss or
    /// when `o` is inside the box.
    pub fn ray_entry(&self, o: Vec3<f64>, d: Vec3<f64>) -> Option<f64> {
        let mut t0 = f64::NEG_INFINITY;
        let mut t1 = f64::INFINITY;
        for a in 0..3 {
            if d[a] == 0.0 {
                if o[a] < self.min[a] || o[a] > self.max[a] {
                    return None;
                }
                continue;
            }
            let inv = 1.0 / d[a];
            let ta = (self.min[a] - o[a]) * inv;
            let tb = (self.max[a] - o[a]) * inv;
            t0 = t0.max(ta.min(tb));
            t1 = t1.min(ta.max(tb));
        }
        (t0 <= t1 && t0 > 0.0).then_some(t0)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scene {
    pub boxes: Vec<Aabb>,
}

impl Scene {
    pub fn empty() -> Self {
        Self::default()
    }

    /// A 0.3 m thick wall at x = 3 m, wide and tall enough to fill the view
    /// of a camera near the origin looking along +x.
    pub fn wall() -> Self {
        Self {
            boxes: vec![Aabb::from_bounds([3.0, -20.0, -6.0], [3.3, 20.0, 6.0]).unwrap()],
        }
    }

    /// 8×8 m room, floor at -1.2 m and ceiling at 1.2 m, with `n` random
    /// boxes between 1.5 m and 3.5 m from the z axis. Every view direction
    /// from near the origin hits something within 6.5 m.
    pub fn box_field(seed: u64, n: usize) -> Self {
        let mut boxes = room(4.0, 1.2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..n {
            let r = rng.gen_range(1.5..3.5);
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            let c = Vec3::new(r * phi.cos(), r * phi.sin(), rng.gen_range(-0.8..0.8));
            let h = Vec3::new(
                rng.gen_range(0.1..0.4),
                rng.gen_range(0.1..0.4),
                rng.gen_range(0.1..0.4),
            );
            boxes.push(Aabb::new(c - h, c + h).unwrap());
        }
        Self { boxes }
    }

    /// Two-frame dynamic obstacle: a 1.2 m square panel in front of a
    /// camera at the origin looking along +x, at 1.5 m for `frame == 0`
    /// and at 3.0 m afterwards.
    pub fn receding_obstacle(frame: usize) -> Self {
        let x = if frame == 0 { 1.5 } else { 3.0 };
        Self {
            boxes: vec![Aabb::from_bounds([x, -0.6, -0.6], [x + 0.3, 0.6, 0.6]).unwrap()],
        }
    }

    /// One box per line: `min_x min_y min_z max_x max_y max_z`. Blank lines
    /// and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut boxes = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let vals: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Format {
                    what: "scene",
                    detail: format!("line {}: {e}", n + 1),
                })?;
            if vals.len() != 6 {
                return Err(Error::Format {
                    what: "scene",
                    detail: format!("line {}: expected 6 numbers, got {}", n + 1, vals.len()),
                });
            }
            boxes.push(Aabb::from_bounds(
                [vals[0], vals[1], vals[2]],
                [vals[3], vals[4], vals[5]],
            )?);
        }
        Ok(Self { boxes })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// `empty`, `wall`, `box-field` (seeded), or a path to a scene file.
    pub fn from_name(name: &str, seed: u64) -> Result<Self> {
        match name {
            "empty" => Ok(Self::empty()),
            "wall" => Ok(Self::wall()),
            "box-field" | "box_field" => Ok(Self::box_field(seed, 12)),
            path => Self::load(Path::new(path)),
        }
    }

    /// Nearest entry parameter over all boxes.
    pub fn first_hit(&self, o: Vec3<f64>, d: Vec3<f64>) -> Option<f64> {
        self.boxes
            .iter()
            .filter_map(|b| b.ray_entry(o, d))
            .min_by(f64::total_cmp)
    }
}

fn room(half: f64, height: f64) -> Vec<Aabb> {
    let (h, t, z) = (half, 0.3, height);
    let b = |min: [f64; 3], max: [f64; 3]| Aabb::from_bounds(min, max).unwrap();
    vec![
        b([-h - t, -h - t, -z - t], [h + t, h + t, -z]),
        b([-h - t, -h - t, z], [h + t, h + t, z + t]),
        b([h, -h - t, -z], [h + t, h + t, z]),
        b([-h - t, -h - t, -z], [-h, h + t, z]),
        b([-h, h, -z], [h, h + t, z]),
        b([-h, -h - t, -z], [h, -h, z]),
    ]
}

/// Camera-to-world pose of a level camera at `position` whose optical
/// axis points along `yaw` (radians from +x toward +y). Image rows point
/// down.
pub fn camera_pose(position: Vec3<f64>, yaw: f64) -> RigidTransform<f64> {
    let (s, c) = yaw.sin_cos();
    let right = Vec3::new(s, -c, 0.0);
    let down = Vec3::new(0.0, 0.0, -1.0);
    let forward = Vec3::new(c, s, 0.0);
    RigidTransform::new(voxgrid_core::Mat3::from_columns(right, down, forward), position)
        .expect("camera basis is orthonormal")
}

/// Depth along the optical axis of the nearest box surface per pixel.
/// Pixels that hit nothing, or only beyond `max_depth`, are invalid (0).
pub fn render_depth<T: Real>(scene: &Scene, pose: &RigidTransform<T>, cam: &CameraModel<T>) -> DepthImage<T> {
    let (w, h) = (cam.width(), cam.height());
    let o = pose.translation().cast::<f64>();
    let max_depth = cam.max_depth().as_f64();
    let mut depths = vec![T::zero(); w * h];
    depths.par_chunks_mut(w).enumerate().for_each(|(v, row)| {
        for (u, out) in row.iter_mut().enumerate() {
            // Camera ray with unit z, so the hit parameter is the depth.
            let d = pose.transform_vector(cam.pixel_ray(u, v)).cast::<f64>();
            if let Some(t) = scene.first_hit(o, d) {
                if t <= max_depth {
                    *out = T::lit(t);
                }
            }
        }
    });
    DepthImage::new(w, h, depths).expect("buffer sized to the camera")
}
