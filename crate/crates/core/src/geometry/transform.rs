use crate::error::{Error, Result};
use crate::math::{Mat3, Vec3};
use crate::scalar::Real;

/// Rotation plus translation mapping points from one frame into another.
///
/// Naming follows the usual superscript/subscript convention: `t_wc` maps
/// camera-frame points into the world frame, `t_vc` into the grid frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform<T> {
    rotation: Mat3<T>,
    translation: Vec3<T>,
}

impl<T: Real> RigidTransform<T> {
    pub fn identity() -> Self {
        Self {
            rotation: Mat3::identity(),
            translation: Vec3::zeros(),
        }
    }

    /// Validates that `rotation` is orthonormal with determinant +1.
    pub fn new(rotation: Mat3<T>, translation: Vec3<T>) -> Result<Self> {
        if !rotation.is_finite() || !translation.is_finite() {
            return Err(Error::InvalidTransform("non-finite entries".into()));
        }
        let ortho = rotation.orthogonality_error();
        if ortho > T::ORTHO_TOL {
            return Err(Error::InvalidTransform(format!(
                "rotation is not orthonormal (error {ortho})"
            )));
        }
        let det = rotation.determinant();
        if (det - T::one()).abs() > T::ORTHO_TOL {
            return Err(Error::InvalidTransform(format!("rotation determinant is {det}")));
        }
        Ok(Self { rotation, translation })
    }

    pub fn from_translation(t: Vec3<T>) -> Self {
        Self {
            rotation: Mat3::identity(),
            translation: t,
        }
    }

    pub fn from_axis_angle(axis: Vec3<T>, angle: T, translation: Vec3<T>) -> Self {
        Self {
            rotation: Mat3::from_axis_angle(axis, angle),
            translation,
        }
    }

    #[inline]
    pub fn rotation(&self) -> &Mat3<T> {
        &self.rotation
    }

    #[inline]
    pub fn translation(&self) -> Vec3<T> {
        self.translation
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            rotation: self.rotation.mul_mat(&other.rotation),
            translation: self.rotation.mul_vec(other.translation) + self.translation,
        }
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rotation.transpose();
        Self {
            rotation: rt,
            translation: -rt.mul_vec(self.translation),
        }
    }

    /// `R·p + t`, rejecting non-finite input.
    pub fn apply(&self, p: Vec3<T>) -> Result<Vec3<T>> {
        if !p.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(self.transform_point(p))
    }

    #[inline]
    pub fn transform_point(&self, p: Vec3<T>) -> Vec3<T> {
        self.rotation.mul_vec(p) + self.translation
    }

    /// Rotates a direction; translation does not apply.
    #[inline]
    pub fn transform_vector(&self, v: Vec3<T>) -> Vec3<T> {
        self.rotation.mul_vec(v)
    }
}

pub fn compose<T: Real>(a: &RigidTransform<T>, b: &RigidTransform<T>) -> RigidTransform<T> {
    a.compose(b)
}

pub fn apply<T: Real>(t: &RigidTransform<T>, p: Vec3<T>) -> Result<Vec3<T>> {
    t.apply(p)
}

/// Camera position in the grid frame, i.e. `t_vc` applied to the camera origin.
pub fn camera_center_in_grid<T: Real>(t_vc: &RigidTransform<T>) -> Vec3<T> {
    t_vc.translation()
}
