//! SE(2) rigid transforms with tangent ordering `[theta; vx; vy]`.

use super::so3::BRANCH_MARGIN;
use super::{ensure_finite, wrap_angle, LieGroup, Pose3, Rotation3};
use crate::error::{Error, Result};
use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

/// SE(2) tangent vector `[theta (rad); vx; vy (m)]`.
pub type Tangent3 = Vector3<f64>;

const SMALL_ANGLE: f64 = 1e-6;

/// A planar rotation stored as an angle in `(-pi, pi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation2 {
    theta: f64,
}

impl Rotation2 {
    pub fn new(theta: f64) -> Self {
        Rotation2 {
            theta: wrap_angle(theta),
        }
    }

    pub fn angle(&self) -> f64 {
        self.theta
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        let (s, c) = self.theta.sin_cos();
        Matrix2::new(c, -s, s, c)
    }

    pub fn rotate(&self, v: &Vector2<f64>) -> Vector2<f64> {
        let (s, c) = self.theta.sin_cos();
        Vector2::new(c * v.x - s * v.y, s * v.x + c * v.y)
    }
}

/// A rigid transform in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose2 {
    pub rotation: Rotation2,
    pub translation: Vector2<f64>,
}

impl Pose2 {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Pose2 {
            rotation: Rotation2::new(theta),
            translation: Vector2::new(x, y),
        }
    }

    pub fn theta(&self) -> f64 {
        self.rotation.angle()
    }

    /// Homogeneous 3x3 matrix representation.
    pub fn matrix(&self) -> Matrix3<f64> {
        let mut m = Matrix3::identity();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(&self.rotation.matrix());
        m.fixed_view_mut::<2, 1>(0, 2).copy_from(&self.translation);
        m
    }
}

/// `V(theta)` such that `Exp([theta; v])` has translation `V(theta) v`.
fn se2_v(theta: f64) -> Matrix2<f64> {
    if theta.abs() < SMALL_ANGLE {
        let a = 1.0 - theta * theta / 6.0;
        let b = 0.5 * theta - theta * theta * theta / 24.0;
        Matrix2::new(a, -b, b, a)
    } else {
        let (s, c) = theta.sin_cos();
        Matrix2::new(s / theta, -(1.0 - c) / theta, (1.0 - c) / theta, s / theta)
    }
}

fn se2_v_inv(theta: f64) -> Matrix2<f64> {
    let v = se2_v(theta);
    let det = v[(0, 0)] * v[(0, 0)] + v[(1, 0)] * v[(1, 0)];
    Matrix2::new(v[(0, 0)], v[(1, 0)], -v[(1, 0)], v[(0, 0)]) / det
}

/// Left Jacobian of the SE(2) exponential in `[theta; v]` ordering.
fn se2_left_jacobian(xi: &Tangent3) -> Matrix3<f64> {
    let theta = xi[0];
    let (v1, v2) = (xi[1], xi[2]);
    let (a, b) = if theta.abs() < SMALL_ANGLE {
        (0.5 - theta * theta / 24.0, theta / 6.0 - theta * theta * theta / 120.0)
    } else {
        let (s, c) = theta.sin_cos();
        ((1.0 - c) / (theta * theta), (theta - s) / (theta * theta))
    };
    let v = se2_v(theta);
    Matrix3::new(
        1.0,
        0.0,
        0.0,
        b * v1 + a * v2,
        v[(0, 0)],
        v[(0, 1)],
        -a * v1 + b * v2,
        v[(1, 0)],
        v[(1, 1)],
    )
}

impl LieGroup<3> for Pose2 {
    const ROT_DOF: usize = 1;

    fn identity() -> Self {
        Pose2::new(0.0, 0.0, 0.0)
    }

    fn compose(&self, other: &Self) -> Self {
        Pose2 {
            rotation: Rotation2::new(self.theta() + other.theta()),
            translation: self.rotation.rotate(&other.translation) + self.translation,
        }
    }

    fn inverse(&self) -> Self {
        let rot_inv = Rotation2::new(-self.theta());
        Pose2 {
            translation: -rot_inv.rotate(&self.translation),
            rotation: rot_inv,
        }
    }

    fn exp(xi: &Tangent3) -> Result<Self> {
        ensure_finite(xi, "se2 tangent")?;
        let t = se2_v(xi[0]) * Vector2::new(xi[1], xi[2]);
        Ok(Pose2 {
            rotation: Rotation2::new(xi[0]),
            translation: t,
        })
    }

    fn log(&self) -> Result<Tangent3> {
        let theta = self.theta();
        if theta.abs() > std::f64::consts::PI - BRANCH_MARGIN {
            return Err(Error::BranchAmbiguity { angle: theta.abs() });
        }
        let v = se2_v_inv(theta) * self.translation;
        Ok(Tangent3::new(theta, v.x, v.y))
    }

    fn adjoint(&self) -> Matrix3<f64> {
        let r = self.rotation.matrix();
        let t = &self.translation;
        Matrix3::new(1.0, 0.0, 0.0, t.y, r[(0, 0)], r[(0, 1)], -t.x, r[(1, 0)], r[(1, 1)])
    }

    fn right_jacobian_inv(xi: &Tangent3) -> Matrix3<f64> {
        se2_left_jacobian(&(-xi))
            .try_inverse()
            .expect("SE(2) left Jacobian is invertible away from the branch cut")
    }

    fn from_planar(x: f64, y: f64, yaw: f64) -> Self {
        Pose2::new(x, y, yaw)
    }

    fn embed_se3(&self) -> Pose3 {
        Pose3 {
            rotation: Rotation3::from_yaw(self.theta()),
            translation: Vector3::new(self.translation.x, self.translation.y, 0.0),
        }
    }
}
