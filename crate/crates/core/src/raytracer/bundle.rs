use crate::error::{Error, Result};
use crate::geometry::{camera_center_in_grid, CameraModel, RigidTransform};
use crate::math::Vec3;
use crate::raytracer::Ray;
use crate::scalar::Real;

/// One ray per voxel on the far plane of the camera frustum.
///
/// Targets are the camera-aligned voxel offsets `(x, y, vox_depth)` with
/// `|x| <= (vox_width-1)/2` and `|y| <= (vox_height-1)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RayBundle {
    vox_depth: u32,
    vox_width: u32,
    vox_height: u32,
}

impl RayBundle {
    pub fn new(vox_depth: u32, vox_width: u32, vox_height: u32) -> Result<Self> {
        if vox_depth == 0 {
            return Err(Error::InvalidBundle("vox_depth must be at least 1".into()));
        }
        if vox_width.is_multiple_of(2) || vox_height.is_multiple_of(2) {
            return Err(Error::InvalidBundle(format!(
                "width and height must be odd, got {vox_width}x{vox_height}"
            )));
        }
        Ok(Self {
            vox_depth,
            vox_width,
            vox_height,
        })
    }

    #[inline]
    pub fn vox_depth(&self) -> u32 {
        self.vox_depth
    }
    #[inline]
    pub fn vox_width(&self) -> u32 {
        self.vox_width
    }
    #[inline]
    pub fn vox_height(&self) -> u32 {
        self.vox_height
    }

    pub fn ray_count(&self) -> usize {
        self.vox_width as usize * self.vox_height as usize
    }

    /// Target offsets in row-major order (y outer, x inner).
    pub fn targets(&self) -> impl Iterator<Item = [i64; 3]> + '_ {
        let hw = (self.vox_width as i64 - 1) / 2;
        let hh = (self.vox_height as i64 - 1) / 2;
        let d = self.vox_depth as i64;
        (-hh..=hh).flat_map(move |y| (-hw..=hw).map(move |x| [x, y, d]))
    }
}

/// Bundle covering the frustum of `cam` out to `depth` meters.
///
/// `vox_depth = round(depth / vox_size)` and each lateral size is
/// `2·round(tan(fov/2)·vox_depth) + 1`, which is always odd.
pub fn bundle_dimensions<T: Real>(cam: &CameraModel<T>, depth: T, vox_size: T) -> Result<RayBundle> {
    if !(depth > T::zero()) || !depth.is_finite() {
        return Err(Error::InvalidBundle(format!("depth must be positive, got {depth}")));
    }
    if !(vox_size > T::zero()) || !vox_size.is_finite() {
        return Err(Error::InvalidBundle(format!(
            "vox_size must be positive, got {vox_size}"
        )));
    }
    let half_pi = T::FRAC_PI_2();
    let two = T::lit(2.0);
    let vox_depth = (depth / vox_size).round();
    let lateral = |fov: T, name: &str| -> Result<u32> {
        if !(fov / two < half_pi) {
            return Err(Error::InvalidBundle(format!("{name} must be below pi, got {fov}")));
        }
        let half = ((fov / two).tan() * vox_depth).round();
        half.to_u32()
            .and_then(|h| h.checked_mul(2))
            .and_then(|w| w.checked_add(1))
            .ok_or_else(|| Error::InvalidBundle(format!("{name} gives an unbounded bundle")))
    };
    let width = lateral(cam.fov_x(), "fov_x")?;
    let height = lateral(cam.fov_y(), "fov_y")?;
    let vox_depth = vox_depth
        .to_u32()
        .ok_or_else(|| Error::InvalidBundle("vox_depth does not fit in u32".into()))?;
    RayBundle::new(vox_depth, width, height)
}

/// Rays from the camera center toward every bundle target, in grid frame.
pub fn generate_rays<T: Real>(bundle: &RayBundle, t_vc: &RigidTransform<T>, vox_size: T) -> Vec<Ray<T>> {
    let start = camera_center_in_grid(t_vc);
    bundle
        .targets()
        .map(|[x, y, z]| {
            let target = Vec3::new(
                T::from_i64(x).unwrap() * vox_size,
                T::from_i64(y).unwrap() * vox_size,
                T::from_i64(z).unwrap() * vox_size,
            );
            let dir = t_vc.transform_vector(target);
            Ray::new(start, dir, target.norm()).expect("bundle targets are non-zero and finite")
        })
        .collect()
}
