//! SO(3) as a canonicalized unit quaternion, with the closed-form maps and
//! Jacobians the SE(3) layer builds on.

use super::skew;
use crate::error::{Error, Result};
use nalgebra::{Matrix3, Quaternion, UnitQuaternion, Vector3};

/// Angle below which Taylor series replace the trigonometric closed forms.
pub(crate) const SMALL_ANGLE: f64 = 1e-6;

/// Margin kept from the `pi` branch cut of the logarithm.
pub(crate) const BRANCH_MARGIN: f64 = 1e-9;

/// A 3D rotation stored as a unit quaternion with `w >= 0`.
///
/// The canonical sign resolves the double cover so that equal rotations have
/// bitwise-equal representations after serialization round-trips.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation3 {
    q: UnitQuaternion<f64>,
}

impl Rotation3 {
    pub fn identity() -> Self {
        Rotation3 {
            q: UnitQuaternion::identity(),
        }
    }

    /// Build from quaternion coefficients in `(w, x, y, z)` order.
    ///
    /// The input is normalized; fails on non-finite or near-zero norm.
    pub fn from_quaternion_wxyz(w: f64, x: f64, y: f64, z: f64) -> Result<Self> {
        if ![w, x, y, z].iter().all(|a| a.is_finite()) {
            return Err(Error::InvalidArgument(
                "quaternion has non-finite coefficients".into(),
            ));
        }
        let norm_sq = w * w + x * x + y * y + z * z;
        if norm_sq < 1e-24 {
            return Err(Error::InvalidArgument("quaternion has zero norm".into()));
        }
        Ok(Self::canonicalize(Quaternion::new(w, x, y, z)))
    }

    /// Rotation about the z axis.
    pub fn from_yaw(yaw: f64) -> Self {
        Self::exp(&Vector3::new(0.0, 0.0, yaw))
    }

    fn canonicalize(q: Quaternion<f64>) -> Self {
        let mut q = q;
        let norm_sq = q.norm_squared();
        // Skip renormalization when already unit to keep round-trips bit-exact.
        if (norm_sq - 1.0).abs() > 1e-14 {
            q /= norm_sq.sqrt();
        }
        let flip = if q.w != 0.0 {
            q.w < 0.0
        } else if q.i != 0.0 {
            q.i < 0.0
        } else if q.j != 0.0 {
            q.j < 0.0
        } else {
            q.k < 0.0
        };
        if flip {
            q = -q;
        }
        Rotation3 {
            q: UnitQuaternion::new_unchecked(q),
        }
    }

    /// Quaternion coefficients `(w, x, y, z)`.
    pub fn wxyz(&self) -> (f64, f64, f64, f64) {
        let q = self.q.quaternion();
        (q.w, q.i, q.j, q.k)
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        self.q.to_rotation_matrix().into_inner()
    }

    pub fn compose(&self, other: &Rotation3) -> Rotation3 {
        Self::canonicalize(self.q.quaternion() * other.q.quaternion())
    }

    pub fn inverse(&self) -> Rotation3 {
        Self::canonicalize(self.q.conjugate().into_inner())
    }

    pub fn rotate(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.q * v
    }

    /// Rotation angle in `[0, pi]`.
    pub fn angle(&self) -> f64 {
        let q = self.q.quaternion();
        2.0 * q.imag().norm().atan2(q.w.abs())
    }

    /// SO(3) exponential via the quaternion closed form.
    pub fn exp(omega: &Vector3<f64>) -> Rotation3 {
        let theta_sq = omega.norm_squared();
        let (re, im) = if theta_sq < SMALL_ANGLE * SMALL_ANGLE {
            (1.0 - theta_sq / 8.0, 0.5 - theta_sq / 48.0)
        } else {
            let theta = theta_sq.sqrt();
            ((0.5 * theta).cos(), (0.5 * theta).sin() / theta)
        };
        Self::canonicalize(Quaternion::from_parts(re, omega * im))
    }

    /// SO(3) logarithm on the principal branch.
    ///
    /// Fails when the rotation angle is within [`BRANCH_MARGIN`] of `pi`,
    /// where the axis is ambiguous.
    pub fn log(&self) -> Result<Vector3<f64>> {
        let q = self.q.quaternion();
        let im = q.imag();
        let n = im.norm();
        let theta = 2.0 * n.atan2(q.w);
        if theta > std::f64::consts::PI - BRANCH_MARGIN {
            return Err(Error::BranchAmbiguity { angle: theta });
        }
        if n < 1e-9 {
            // theta/sin(theta/2) ~ 2/w * (1 - n^2 / (3 w^2)); w ~ 1 here.
            Ok(im * (2.0 / q.w) * (1.0 - n * n / (3.0 * q.w * q.w)))
        } else {
            Ok(im * (theta / n))
        }
    }
}

/// Left Jacobian of the SO(3) exponential.
pub(crate) fn so3_left_jacobian(omega: &Vector3<f64>) -> Matrix3<f64> {
    let theta_sq = omega.norm_squared();
    let k = skew(omega);
    let (a, b) = if theta_sq < SMALL_ANGLE * SMALL_ANGLE {
        (0.5 - theta_sq / 24.0, 1.0 / 6.0 - theta_sq / 120.0)
    } else {
        let theta = theta_sq.sqrt();
        (
            (1.0 - theta.cos()) / theta_sq,
            (theta - theta.sin()) / (theta_sq * theta),
        )
    };
    Matrix3::identity() + k * a + k * k * b
}

/// Inverse left Jacobian of the SO(3) exponential.
pub(crate) fn so3_left_jacobian_inv(omega: &Vector3<f64>) -> Matrix3<f64> {
    let theta_sq = omega.norm_squared();
    let k = skew(omega);
    let c = if theta_sq < SMALL_ANGLE * SMALL_ANGLE {
        1.0 / 12.0 + theta_sq / 720.0
    } else {
        let theta = theta_sq.sqrt();
        1.0 / theta_sq - (1.0 + theta.cos()) / (2.0 * theta * theta.sin())
    };
    Matrix3::identity() - k * 0.5 + k * k * c
}

/// Inverse right Jacobian: `Jr^-1(omega) = Jl^-1(-omega)`.
pub(crate) fn so3_right_jacobian_inv(omega: &Vector3<f64>) -> Matrix3<f64> {
    so3_left_jacobian_inv(&(-omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Independent Rodrigues-formula oracle.
    fn rodrigues(omega: &Vector3<f64>) -> Matrix3<f64> {
        let theta = omega.norm();
        if theta < 1e-12 {
            return Matrix3::identity();
        }
        let k = skew(&(omega / theta));
        Matrix3::identity() + k * theta.sin() + k * k * (1.0 - theta.cos())
    }

    #[test]
    fn exp_matches_rodrigues() {
        let cases = [
            Vector3::new(0.0, 0.0, std::f64::consts::FRAC_PI_2),
            Vector3::new(0.3, -1.2, 0.7),
            Vector3::new(1e-8, -2e-8, 3e-8),
            Vector3::new(2.0, 2.0, -1.0),
        ];
        for omega in cases {
            let r = Rotation3::exp(&omega);
            assert_relative_eq!(r.matrix(), rodrigues(&omega), epsilon = 1e-12);
        }
    }

    #[test]
    fn log_round_trip() {
        let mut rng_state = 0x2545f491_u64;
        let mut next = move || {
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1);
            (rng_state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..1000 {
            let omega = Vector3::new(next(), next(), next()) * 1.5;
            let back = Rotation3::exp(&omega).log().unwrap();
            assert_relative_eq!(omega, back, epsilon = 1e-9);
        }
    }

    #[test]
    fn log_rejects_pi() {
        let r = Rotation3::exp(&Vector3::new(std::f64::consts::PI, 0.0, 0.0));
        assert!(matches!(r.log(), Err(Error::BranchAmbiguity { .. })));
    }

    #[test]
    fn canonical_w_nonnegative() {
        let r = Rotation3::from_quaternion_wxyz(-0.5, 0.5, 0.5, 0.5).unwrap();
        let (w, x, ..) = r.wxyz();
        assert!(w >= 0.0);
        assert!(x < 0.0);
    }

    #[test]
    fn jacobian_identities() {
        let omega = Vector3::new(0.4, -0.2, 0.9);
        let jl = so3_left_jacobian(&omega);
        let jl_inv = so3_left_jacobian_inv(&omega);
        assert_relative_eq!(jl * jl_inv, Matrix3::identity(), epsilon = 1e-10);
        // Jl(omega) * omega = omega holds for every angle.
        assert_relative_eq!(jl * omega, omega, epsilon = 1e-12);
    }
}
