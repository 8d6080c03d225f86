//! Scripted camera paths.

use voxgrid_core::{RigidTransform, Vec3};

use crate::scene::camera_pose;

/// A level camera pose: position plus heading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub position: Vec3<f64>,
    /// Radians from +x toward +y.
    pub yaw: f64,
}

impl Waypoint {
    pub fn new(position: Vec3<f64>, yaw: f64) -> Self {
        Self { position, yaw }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// Camera-to-world pose per frame.
    pub poses: Vec<RigidTransform<f64>>,
    /// Seconds between frames.
    pub dt: f64,
}

impl Trajectory {
    pub fn stationary(pose: RigidTransform<f64>, frames: usize) -> Self {
        Self {
            poses: vec![pose; frames],
            dt: 1.0 / 30.0,
        }
    }

    /// `frames` poses spaced evenly in arc length along the polyline through
    /// `waypoints`, heading interpolated linearly.
    pub fn through(waypoints: &[Waypoint], frames: usize) -> Self {
        let mut poses = Vec::with_capacity(frames);
        let seg: Vec<f64> = waypoints
            .windows(2)
            .map(|w| (w[1].position - w[0].position).norm().max(1e-12))
            .collect();
        let total: f64 = seg.iter().sum();
        for k in 0..frames {
            let s = if frames > 1 {
                total * k as f64 / (frames - 1) as f64
            } else {
                0.0
            };
            poses.push(match waypoints {
                [] => RigidTransform::identity(),
                [only] => camera_pose(only.position, only.yaw),
                _ => {
                    let (mut i, mut acc) = (0, 0.0);
                    while i + 1 < seg.len() && acc + seg[i] < s {
                        acc += seg[i];
                        i += 1;
                    }
                    let f = ((s - acc) / seg[i]).clamp(0.0, 1.0);
                    let (a, b) = (waypoints[i], waypoints[i + 1]);
                    camera_pose(
                        a.position + (b.position - a.position).scale(f),
                        a.yaw + (b.yaw - a.yaw) * f,
                    )
                }
            });
        }
        Self { poses, dt: 1.0 / 30.0 }
    }

    /// Slow diagonal pass across the origin while panning ±30°.
    pub fn sweep(frames: usize) -> Self {
        let d = 30f64.to_radians();
        Self::through(
            &[
                Waypoint::new(Vec3::new(-0.5, -0.5, 0.0), -d),
                Waypoint::new(Vec3::new(0.5, 0.5, 0.0), d),
            ],
            frames,
        )
    }

    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }

    pub fn timestamp(&self, frame: usize) -> f64 {
        frame as f64 * self.dt
    }
}
