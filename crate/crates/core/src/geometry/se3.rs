//! SE(3) rigid transforms with tangent ordering `[omega; v]`.

use super::so3::{so3_left_jacobian, so3_left_jacobian_inv, so3_right_jacobian_inv, SMALL_ANGLE};
use super::{ensure_finite, skew, LieGroup, Rotation3};
use crate::error::Result;
use nalgebra::{Matrix3, Matrix6, Vector3, Vector6};

/// SE(3) tangent vector `[omega (rad); v (m)]`.
pub type Tangent6 = Vector6<f64>;

/// A rigid transform in 3D.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pose3 {
    pub rotation: Rotation3,
    pub translation: Vector3<f64>,
}

impl Pose3 {
    pub fn new(rotation: Rotation3, translation: Vector3<f64>) -> Self {
        Pose3 {
            rotation,
            translation,
        }
    }

    pub fn from_translation(x: f64, y: f64, z: f64) -> Self {
        Pose3 {
            rotation: Rotation3::identity(),
            translation: Vector3::new(x, y, z),
        }
    }

    /// Apply the transform to a point.
    pub fn transform(&self, p: &Vector3<f64>) -> Vector3<f64> {
        self.rotation.rotate(p) + self.translation
    }

    /// Homogeneous 4x4 matrix representation.
    pub fn matrix(&self) -> nalgebra::Matrix4<f64> {
        let mut m = nalgebra::Matrix4::identity();
        m.fixed_view_mut::<3, 3>(0, 0).copy_from(&self.rotation.matrix());
        m.fixed_view_mut::<3, 1>(0, 3).copy_from(&self.translation);
        m
    }
}

impl LieGroup<6> for Pose3 {
    const ROT_DOF: usize = 3;

    fn identity() -> Self {
        Pose3 {
            rotation: Rotation3::identity(),
            translation: Vector3::zeros(),
        }
    }

    fn compose(&self, other: &Self) -> Self {
        Pose3 {
            rotation: self.rotation.compose(&other.rotation),
            translation: self.rotation.rotate(&other.translation) + self.translation,
        }
    }

    fn inverse(&self) -> Self {
        let rot_inv = self.rotation.inverse();
        Pose3 {
            translation: -rot_inv.rotate(&self.translation),
            rotation: rot_inv,
        }
    }

    fn exp(xi: &Tangent6) -> Result<Self> {
        ensure_finite(xi, "se3 tangent")?;
        let omega = xi.fixed_rows::<3>(0).into_owned();
        let v = xi.fixed_rows::<3>(3).into_owned();
        Ok(Pose3 {
            rotation: Rotation3::exp(&omega),
            translation: so3_left_jacobian(&omega) * v,
        })
    }

    fn log(&self) -> Result<Tangent6> {
        let omega = self.rotation.log()?;
        let v = so3_left_jacobian_inv(&omega) * self.translation;
        let mut xi = Tangent6::zeros();
        xi.fixed_rows_mut::<3>(0).copy_from(&omega);
        xi.fixed_rows_mut::<3>(3).copy_from(&v);
        Ok(xi)
    }

    fn adjoint(&self) -> Matrix6<f64> {
        let r = self.rotation.matrix();
        let mut ad = Matrix6::zeros();
        ad.fixed_view_mut::<3, 3>(0, 0).copy_from(&r);
        ad.fixed_view_mut::<3, 3>(3, 3).copy_from(&r);
        ad.fixed_view_mut::<3, 3>(3, 0)
            .copy_from(&(skew(&self.translation) * r));
        ad
    }

    fn right_jacobian_inv(xi: &Tangent6) -> Matrix6<f64> {
        let omega = xi.fixed_rows::<3>(0).into_owned();
        let v = xi.fixed_rows::<3>(3).into_owned();
        let jr_inv = so3_right_jacobian_inv(&omega);
        // Right variants evaluate the left-Jacobian blocks at the negated tangent.
        let q = se3_jacobian_q(&(-omega), &(-v));
        let mut out = Matrix6::zeros();
        out.fixed_view_mut::<3, 3>(0, 0).copy_from(&jr_inv);
        out.fixed_view_mut::<3, 3>(3, 3).copy_from(&jr_inv);
        out.fixed_view_mut::<3, 3>(3, 0)
            .copy_from(&(-jr_inv * q * jr_inv));
        out
    }

    fn from_planar(x: f64, y: f64, yaw: f64) -> Self {
        Pose3 {
            rotation: Rotation3::from_yaw(yaw),
            translation: Vector3::new(x, y, 0.0),
        }
    }

    fn embed_se3(&self) -> Pose3 {
        *self
    }
}

/// Translation-rotation coupling block of the SE(3) left Jacobian.
///
/// `omega` is the rotation block, `v` the translation block of the tangent.
fn se3_jacobian_q(omega: &Vector3<f64>, v: &Vector3<f64>) -> Matrix3<f64> {
    let w = skew(omega);
    let vs = skew(v);
    let theta_sq = omega.norm_squared();
    if theta_sq < SMALL_ANGLE * SMALL_ANGLE {
        return vs * 0.5;
    }
    let theta = theta_sq.sqrt();
    let (s, c) = theta.sin_cos();
    let c1 = (theta - s) / (theta_sq * theta);
    let c2 = (1.0 - 0.5 * theta_sq - c) / (theta_sq * theta_sq);
    let c3 = c2 - 3.0 * (theta - s - theta_sq * theta / 6.0) / (theta_sq * theta_sq * theta);
    vs * 0.5 + (w * vs + vs * w + w * vs * w) * c1 - (w * w * vs + vs * w * w - w * vs * w * 3.0) * c2
        - (w * vs * w * w + w * w * vs * w) * (0.5 * c3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::Matrix4;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn sample_poses() -> Vec<Pose3> {
        let xis = [
            Tangent6::zeros(),
            Tangent6::new(0.1, -0.2, 0.3, 1.0, 2.0, 3.0),
            Tangent6::new(0.0, 0.0, FRAC_PI_2, 0.5, 0.0, -0.5),
            Tangent6::new(2.0, -1.0, 0.5, -3.0, 0.2, 0.1),
            Tangent6::new(1e-8, 2e-8, -1e-8, 0.4, 0.4, 0.4),
        ];
        xis.iter().map(|xi| Pose3::exp(xi).unwrap()).collect()
    }

    #[test]
    fn exp_identity_and_pure_translation() {
        let id = Pose3::exp(&Tangent6::zeros()).unwrap();
        assert_eq!(id, <Pose3 as LieGroup<6>>::identity());

        let p = Pose3::exp(&Tangent6::new(0.0, 0.0, 0.0, 1.0, 2.0, 3.0)).unwrap();
        assert_eq!(p.rotation, Rotation3::identity());
        assert_relative_eq!(p.translation, Vector3::new(1.0, 2.0, 3.0));
    }

    #[test]
    fn exp_quarter_turn_yaw() {
        let p = Pose3::exp(&Tangent6::new(0.0, 0.0, FRAC_PI_2, 0.0, 0.0, 0.0)).unwrap();
        let expected = Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert_relative_eq!(p.rotation.matrix(), expected, epsilon = 1e-15);
        assert_relative_eq!(p.translation.norm(), 0.0);
    }

    #[test]
    fn log_pure_translation() {
        let xi = Pose3::from_translation(1.0, 0.0, 0.0).log().unwrap();
        assert_relative_eq!(xi, Tangent6::new(0.0, 0.0, 0.0, 1.0, 0.0, 0.0));
    }

    #[test]
    fn compose_matches_homogeneous_matrix_oracle() {
        let poses = sample_poses();
        for a in &poses {
            for b in &poses {
                let ab = a.compose(b);
                let oracle: Matrix4<f64> = a.matrix() * b.matrix();
                assert_relative_eq!(ab.matrix(), oracle, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn between_and_inverse() {
        let poses = sample_poses();
        for a in &poses {
            let id = a.inverse().compose(a);
            assert_relative_eq!(id.translation.norm(), 0.0, epsilon = 1e-12);
            assert!(id.rotation.angle() < 1e-12);
            let b = poses[1];
            let oracle = a.matrix().try_inverse().unwrap() * b.matrix();
            assert_relative_eq!(a.between(&b).matrix(), oracle, epsilon = 1e-12);
        }
    }

    #[test]
    fn interpolate_endpoints_and_midpoint() {
        let a = Pose3::from_translation(0.0, 0.0, 0.0);
        let b = Pose3::from_translation(1.0, 0.0, 0.0);
        assert_relative_eq!(
            a.interpolate(&b, 0.5).unwrap().translation,
            Vector3::new(0.5, 0.0, 0.0),
            epsilon = 1e-15
        );
        let c = Pose3::from_planar(0.0, 0.0, FRAC_PI_2);
        let mid = Pose3::from_planar(0.0, 0.0, 0.0).interpolate(&c, 0.5).unwrap();
        // Quaternion slerp oracle for a yaw-only pair: half the yaw angle.
        assert_relative_eq!(mid.rotation.angle(), FRAC_PI_4, epsilon = 1e-12);
        assert!(a.interpolate(&b, 1.5).is_err());
    }

    #[test]
    fn adjoint_identity() {
        let poses = sample_poses();
        let xi = Tangent6::new(0.2, -0.1, 0.4, 0.3, -0.6, 0.9);
        for t in &poses {
            let lhs = t
                .compose(&Pose3::exp(&xi).unwrap())
                .compose(&t.inverse());
            let rhs = Pose3::exp(&(t.adjoint() * xi)).unwrap();
            assert_relative_eq!(lhs.matrix(), rhs.matrix(), epsilon = 1e-9);
        }
    }

    #[test]
    fn right_jacobian_inv_matches_finite_differences() {
        let xis = [
            Tangent6::new(0.3, -0.5, 0.8, 1.0, -2.0, 0.4),
            Tangent6::new(1e-8, 0.0, -1e-8, 0.5, 0.5, 0.5),
            Tangent6::new(-1.2, 0.4, 0.9, 0.0, 1.0, -1.0),
        ];
        let h = 1e-6;
        for xi in xis {
            let base = Pose3::exp(&xi).unwrap();
            let analytic = Pose3::right_jacobian_inv(&xi);
            for k in 0..6 {
                let mut d = Tangent6::zeros();
                d[k] = h;
                let plus = base.compose(&Pose3::exp(&d).unwrap()).log().unwrap();
                let minus = base.compose(&Pose3::exp(&(-d)).unwrap()).log().unwrap();
                let fd = (plus - minus) / (2.0 * h);
                assert_relative_eq!(analytic.column(k).into_owned(), fd, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn exp_rejects_non_finite() {
        let mut xi = Tangent6::zeros();
        xi[2] = f64::NAN;
        assert!(Pose3::exp(&xi).is_err());
    }
}
