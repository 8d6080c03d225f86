use crate::error::{Error, Result};
use crate::math::Vec3;
use crate::scalar::Real;

/// Symmetric pinhole camera parameterized by its fields of view.
///
/// Camera frame: `z` along the optical axis, `x` along image columns, `y`
/// along image rows. The principal point is the image center and pixel
/// `(u, v)` is sampled at its center `(u + 0.5, v + 0.5)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraModel<T> {
    fov_x: T,
    fov_y: T,
    width: usize,
    height: usize,
    max_depth: T,
}

impl<T: Real> CameraModel<T> {
    pub fn new(fov_x: T, fov_y: T, width: usize, height: usize, max_depth: T) -> Result<Self> {
        let pi = T::PI();
        for (name, fov) in [("fov_x", fov_x), ("fov_y", fov_y)] {
            if !(fov > T::zero() && fov < pi) {
                return Err(Error::InvalidCamera(format!("{name} must be in (0, pi), got {fov}")));
            }
        }
        if width == 0 || height == 0 {
            return Err(Error::InvalidCamera(format!("resolution {width}x{height}")));
        }
        if !(max_depth > T::zero()) || !max_depth.is_finite() {
            return Err(Error::InvalidCamera(format!(
                "max_depth must be positive, got {max_depth}"
            )));
        }
        Ok(Self {
            fov_x,
            fov_y,
            width,
            height,
            max_depth,
        })
    }

    pub fn from_degrees(fov_x_deg: T, fov_y_deg: T, width: usize, height: usize, max_depth: T) -> Result<Self> {
        Self::new(fov_x_deg.to_radians(), fov_y_deg.to_radians(), width, height, max_depth)
    }

    #[inline]
    pub fn fov_x(&self) -> T {
        self.fov_x
    }
    #[inline]
    pub fn fov_y(&self) -> T {
        self.fov_y
    }
    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }
    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }
    #[inline]
    pub fn max_depth(&self) -> T {
        self.max_depth
    }

    pub fn focal_x(&self) -> T {
        T::from_usize(self.width).unwrap() / T::lit(2.0) / (self.fov_x / T::lit(2.0)).tan()
    }

    pub fn focal_y(&self) -> T {
        T::from_usize(self.height).unwrap() / T::lit(2.0) / (self.fov_y / T::lit(2.0)).tan()
    }

    /// Camera-frame direction through the center of pixel `(u, v)`, scaled so `z = 1`.
    #[inline]
    pub fn pixel_ray(&self, u: usize, v: usize) -> Vec3<T> {
        self.pixel_ray_with(u, v, self.focal_x(), self.focal_y())
    }

    #[inline]
    pub(crate) fn pixel_ray_with(&self, u: usize, v: usize, fx: T, fy: T) -> Vec3<T> {
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        let w = T::from_usize(self.width).unwrap();
        let h = T::from_usize(self.height).unwrap();
        let x = (T::from_usize(u).unwrap() + half - w / two) / fx;
        let y = (T::from_usize(v).unwrap() + half - h / two) / fy;
        Vec3::new(x, y, T::one())
    }
}

/// Camera-frame obstacle points. Non-finite points never make it in.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PointCloud<T> {
    points: Vec<Vec3<T>>,
}

impl<T: Real> PointCloud<T> {
    /// Drops any point with a non-finite component.
    pub fn new(points: Vec<Vec3<T>>) -> Self {
        let mut points = points;
        points.retain(|p| p.is_finite());
        Self { points }
    }

    pub fn empty() -> Self {
        Self { points: Vec::new() }
    }

    #[inline]
    pub fn points(&self) -> &[Vec3<T>] {
        &self.points
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.points.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<Vec3<T>> {
        self.points
    }
}

impl<T: Real> FromIterator<Vec3<T>> for PointCloud<T> {
    fn from_iter<I: IntoIterator<Item = Vec3<T>>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Row-major depth image in meters; values `<= 0` or non-finite are invalid.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthImage<T> {
    width: usize,
    height: usize,
    depths: Vec<T>,
}

impl<T: Real> DepthImage<T> {
    pub fn new(width: usize, height: usize, depths: Vec<T>) -> Result<Self> {
        if depths.len() != width * height {
            return Err(Error::Format {
                what: "depth image",
                detail: format!("{} values for {width}x{height}", depths.len()),
            });
        }
        Ok(Self { width, height, depths })
    }

    /// Image with every pixel invalid.
    pub fn invalid(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            depths: vec![T::zero(); width * height],
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }
    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }
    #[inline]
    pub fn depths(&self) -> &[T] {
        &self.depths
    }
    #[inline]
    pub fn depths_mut(&mut self) -> &mut [T] {
        &mut self.depths
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> T {
        self.depths[v * self.width + u]
    }

    #[inline]
    pub fn set(&mut self, u: usize, v: usize, d: T) {
        self.depths[v * self.width + u] = d;
    }

    #[inline]
    pub fn is_valid_depth(d: T) -> bool {
        d.is_finite() && d > T::zero()
    }

    pub fn valid_count(&self) -> usize {
        self.depths.iter().filter(|&&d| Self::is_valid_depth(d)).count()
    }
}

/// Back-projects every valid pixel with depth at most `max_depth`.
/// Output is in row-major pixel order.
pub fn depth_to_cloud<T: Real>(img: &DepthImage<T>, cam: &CameraModel<T>) -> Result<PointCloud<T>> {
    if img.width() != cam.width() || img.height() != cam.height() {
        return Err(Error::DimensionMismatch {
            got_w: img.width(),
            got_h: img.height(),
            want_w: cam.width(),
            want_h: cam.height(),
        });
    }
    let (fx, fy) = (cam.focal_x(), cam.focal_y());
    let mut points = Vec::with_capacity(img.valid_count());
    for v in 0..img.height() {
        for u in 0..img.width() {
            let d = img.get(u, v);
            if DepthImage::is_valid_depth(d) && d <= cam.max_depth() {
                points.push(cam.pixel_ray_with(u, v, fx, fy).scale(d));
            }
        }
    }
    Ok(PointCloud { points })
}
