//! Lie-group types for rigid transforms: SO(3)/SE(3) and SE(2).
//!
//! Conventions used everywhere in this crate:
//!
//! * Tangent vectors are ordered rotation-first: `[omega; v]` for SE(3)
//!   (`Tangent6`) and `[theta; vx; vy]` for SE(2) (`Tangent3`). Robustness
//!   thresholds that split rotation/translation components rely on this.
//! * Retraction is the right (local) perturbation `x * Exp(delta)`.
//! * Quaternions are stored with `w >= 0` so serialization is bit-stable.

mod se2;
mod se3;
mod so3;

pub use se2::{Pose2, Rotation2, Tangent3};
pub use se3::{Pose3, Tangent6};
pub use so3::Rotation3;

use crate::error::{Error, Result};
use nalgebra::{Matrix3, SMatrix, SVector, Vector3};

/// A matrix Lie group with a `D`-dimensional tangent space.
///
/// The rotation block occupies the first [`LieGroup::ROT_DOF`] tangent
/// entries, translation the rest.
pub trait LieGroup<const D: usize>:
    Copy + Clone + std::fmt::Debug + PartialEq + Send + Sync + 'static
{
    /// Tangent entries belonging to the rotation block.
    const ROT_DOF: usize;

    fn identity() -> Self;

    /// Group composition `self * other`.
    fn compose(&self, other: &Self) -> Self;

    fn inverse(&self) -> Self;

    /// Relative transform `self^-1 * other`, the prediction used by
    /// relative-pose factors.
    fn between(&self, other: &Self) -> Self {
        self.inverse().compose(other)
    }

    /// Exponential map. Fails on non-finite input.
    fn exp(xi: &SVector<f64, D>) -> Result<Self>;

    /// Logarithm map on the principal branch. Fails near the pi branch cut.
    fn log(&self) -> Result<SVector<f64, D>>;

    /// Adjoint matrix satisfying `self * Exp(xi) * self^-1 = Exp(Ad * xi)`.
    fn adjoint(&self) -> SMatrix<f64, D, D>;

    /// Inverse right Jacobian of the exponential at `xi`:
    /// `d/d(delta) Log(Exp(xi) * Exp(delta))` at `delta = 0`.
    fn right_jacobian_inv(xi: &SVector<f64, D>) -> SMatrix<f64, D, D>;

    /// Geodesic interpolation `self * Exp(t * Log(self^-1 * other))`.
    fn interpolate(&self, other: &Self, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!(
                "interpolation fraction {t} outside [0, 1]"
            )));
        }
        let xi = self.between(other).log()?;
        self.retract(&(xi * t))
    }

    /// Right-perturbation retraction `self * Exp(xi)`.
    fn retract(&self, xi: &SVector<f64, D>) -> Result<Self> {
        Ok(self.compose(&Self::exp(xi)?))
    }

    /// Planar pose constructor; SE(3) embeds it in the z = 0 plane.
    fn from_planar(x: f64, y: f64, yaw: f64) -> Self;

    /// Embedding into SE(3), used for trajectory export and metrics.
    fn embed_se3(&self) -> Pose3;
}

/// Rotation-angle and translation norms of a tangent vector.
pub fn tangent_split_norms<const D: usize>(xi: &SVector<f64, D>, rot_dof: usize) -> (f64, f64) {
    let rot: f64 = xi.iter().take(rot_dof).map(|a| a * a).sum::<f64>().sqrt();
    let trans: f64 = xi.iter().skip(rot_dof).map(|a| a * a).sum::<f64>().sqrt();
    (rot, trans)
}

/// Skew-symmetric matrix of a 3-vector.
pub(crate) fn skew(v: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -v.z, v.y, v.z, 0.0, -v.x, -v.y, v.x, 0.0)
}

/// Wrap an angle to the principal interval `(-pi, pi]`.
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    let r = (theta + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI)
        - std::f64::consts::PI;
    if r <= -std::f64::consts::PI {
        r + 2.0 * std::f64::consts::PI
    } else {
        r
    }
}

pub(crate) fn ensure_finite<const D: usize>(xi: &SVector<f64, D>, what: &str) -> Result<()> {
    if xi.iter().all(|a| a.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} has non-finite entries")))
    }
}
