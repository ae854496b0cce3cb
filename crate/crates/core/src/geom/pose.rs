use nalgebra::{Matrix3, Rotation3};

use super::{Mat3, Mat6, Vec3, EXACT_TOL};
use crate::error::{Result, RiskError};

/// Rigid transform: `x' = rotation * x + translation`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    rotation: Mat3,
    translation: Vec3,
}

impl Default for Pose {
    fn default() -> Self {
        Self::identity()
    }
}

impl Pose {
    pub fn identity() -> Self {
        Pose {
            rotation: Mat3::identity(),
            translation: Vec3::zeros(),
        }
    }

    /// Builds a pose, rejecting rotations that are not proper orthonormal within 1e-9.
    pub fn new(rotation: Mat3, translation: Vec3) -> Result<Self> {
        if !rotation
            .iter()
            .chain(translation.iter())
            .all(|v| v.is_finite())
        {
            return Err(RiskError::validation("", "pose contains non-finite values"));
        }
        let ortho = (rotation.transpose() * rotation - Mat3::identity()).amax();
        if ortho > EXACT_TOL {
            return Err(RiskError::validation(
                "rotation",
                format!("rotation is not orthonormal (max deviation {ortho:e})"),
            ));
        }
        let det = rotation.determinant();
        if (det - 1.0).abs() > EXACT_TOL {
            return Err(RiskError::validation(
                "rotation",
                format!("rotation determinant is {det}, expected +1"),
            ));
        }
        Ok(Pose {
            rotation,
            translation,
        })
    }

    pub fn from_translation(translation: Vec3) -> Self {
        Pose {
            rotation: Mat3::identity(),
            translation,
        }
    }

    /// Fixed-axis roll (x), pitch (y), yaw (z), applied in that order.
    pub fn from_rpy(roll: f64, pitch: f64, yaw: f64) -> Self {
        Pose {
            rotation: Rotation3::from_euler_angles(roll, pitch, yaw).into_inner(),
            translation: Vec3::zeros(),
        }
    }

    /// Rotation by `angle` radians about `axis` (need not be normalized).
    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Self {
        let rotation = match nalgebra::Unit::try_new(axis, 0.0) {
            Some(axis) => Rotation3::from_axis_angle(&axis, angle).into_inner(),
            None => Matrix3::identity(),
        };
        Pose {
            rotation,
            translation: Vec3::zeros(),
        }
    }

    pub fn with_translation(mut self, translation: Vec3) -> Self {
        self.translation = translation;
        self
    }

    pub fn rotation(&self) -> &Mat3 {
        &self.rotation
    }

    pub fn translation(&self) -> &Vec3 {
        &self.translation
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Pose) -> Pose {
        Pose {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> Pose {
        let rt = self.rotation.transpose();
        Pose {
            rotation: rt,
            translation: -(rt * self.translation),
        }
    }

    pub fn transform_point(&self, p: &Vec3) -> Vec3 {
        self.rotation * p + self.translation
    }

    pub fn transform_vector(&self, v: &Vec3) -> Vec3 {
        self.rotation * v
    }
}

/// Rigid-body velocity, angular part first.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Twist {
    pub angular: Vec3,
    pub linear: Vec3,
}

impl Twist {
    pub fn new(angular: Vec3, linear: Vec3) -> Self {
        Twist { angular, linear }
    }

    pub fn to_vector(&self) -> nalgebra::Vector6<f64> {
        nalgebra::Vector6::new(
            self.angular.x,
            self.angular.y,
            self.angular.z,
            self.linear.x,
            self.linear.y,
            self.linear.z,
        )
    }

    pub fn from_vector(v: &nalgebra::Vector6<f64>) -> Self {
        Twist {
            angular: Vec3::new(v[0], v[1], v[2]),
            linear: Vec3::new(v[3], v[4], v[5]),
        }
    }

    /// Re-expresses a twist given in the frame `pose` maps from, in the frame it maps to.
    pub fn transformed(&self, pose: &Pose) -> Twist {
        Twist::from_vector(&(adjoint(pose) * self.to_vector()))
    }
}

pub(crate) fn skew(v: &Vec3) -> Mat3 {
    Mat3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Adjoint of a rigid transform acting on `(angular, linear)` twists:
///
/// ```text
/// Ad(R, p) = | R      0 |
///            | [p]R   R |
/// ```
pub fn adjoint(pose: &Pose) -> Mat6 {
    let r = pose.rotation;
    let pr = skew(&pose.translation) * r;
    let mut ad = Mat6::zeros();
    ad.fixed_view_mut::<3, 3>(0, 0).copy_from(&r);
    ad.fixed_view_mut::<3, 3>(3, 0).copy_from(&pr);
    ad.fixed_view_mut::<3, 3>(3, 3).copy_from(&r);
    ad
}
