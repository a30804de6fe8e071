//! Pose variables and relative-pose factors with residual/Jacobian
//! evaluation.
//!
//! Residual convention for a binary factor with measurement `z` between
//! variables `x_i -> x_j`:
//!
//! ```text
//! r = Log(z^-1 * (x_i^-1 * x_j))
//! ```
//!
//! whitened by the upper Cholesky factor of the information matrix, so the
//! squared whitened norm is the factor's chi-squared contribution. Jacobians
//! are with respect to right perturbations `x * Exp(delta)` and are exact
//! (inverse right Jacobian of the log composed with adjoints).

use crate::error::{Error, Result};
use crate::geometry::LieGroup;
use indexmap::IndexMap;
use nalgebra::{SMatrix, SVector};

/// Variable identifier; matches the vertex id in g2o files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Key(pub u64);

impl std::fmt::Display for Key {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Ordered variable assignment (insertion order is the elimination order).
pub type Values<P> = IndexMap<Key, P>;

/// Factor classification. External odometry is distinct from visual
/// odometry so ablations can toggle it independently.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    Prior,
    Odometry,
    LoopClosure,
    ExternalOdometry,
}

/// Gaussian noise stored as an information matrix plus its upper-triangular
/// whitener `W` with `W^T W = information`.
#[derive(Clone, Copy, Debug)]
pub struct NoiseModel<const D: usize> {
    information: SMatrix<f64, D, D>,
    whitener: SMatrix<f64, D, D>,
}

impl<const D: usize> NoiseModel<D> {
    /// Build from a symmetric positive-definite information matrix.
    pub fn from_information(information: SMatrix<f64, D, D>) -> Result<Self> {
        for r in 0..D {
            for c in 0..r {
                if (information[(r, c)] - information[(c, r)]).abs() > 1e-12 {
                    return Err(Error::InvalidArgument(
                        "information matrix is not symmetric".into(),
                    ));
                }
            }
        }
        let lower = cholesky_lower(&information).ok_or_else(|| {
            Error::InvalidArgument("information matrix is not positive-definite".into())
        })?;
        Ok(NoiseModel {
            information,
            whitener: lower.transpose(),
        })
    }

    /// Diagonal information from per-block standard deviations. The rotation
    /// block occupies the first `rot_dof` tangent entries.
    pub fn from_sigmas(sigma_rot: f64, sigma_trans: f64, rot_dof: usize) -> Result<Self> {
        if sigma_rot <= 0.0 || sigma_trans <= 0.0 {
            return Err(Error::InvalidArgument(
                "noise sigmas must be positive".into(),
            ));
        }
        let mut info = SMatrix::<f64, D, D>::zeros();
        for d in 0..D {
            let sigma = if d < rot_dof { sigma_rot } else { sigma_trans };
            info[(d, d)] = 1.0 / (sigma * sigma);
        }
        Self::from_information(info)
    }

    /// Isotropic information `s * I`.
    pub fn isotropic(s: f64) -> Result<Self> {
        if s <= 0.0 {
            return Err(Error::InvalidArgument(
                "information scale must be positive".into(),
            ));
        }
        Self::from_information(SMatrix::<f64, D, D>::identity() * s)
    }

    pub fn information(&self) -> &SMatrix<f64, D, D> {
        &self.information
    }

    /// Upper-triangular whitener `W` with `W^T W = information`.
    pub fn whitener(&self) -> &SMatrix<f64, D, D> {
        &self.whitener
    }

    pub fn whiten(&self, r: &SVector<f64, D>) -> SVector<f64, D> {
        self.whitener * r
    }
}

/// Dense Cholesky `M = L L^T`; `None` if not positive-definite.
fn cholesky_lower<const D: usize>(m: &SMatrix<f64, D, D>) -> Option<SMatrix<f64, D, D>> {
    let mut l = SMatrix::<f64, D, D>::zeros();
    for j in 0..D {
        let mut diag = m[(j, j)];
        for k in 0..j {
            diag -= l[(j, k)] * l[(j, k)];
        }
        if diag <= 0.0 || !diag.is_finite() {
            return None;
        }
        l[(j, j)] = diag.sqrt();
        for i in (j + 1)..D {
            let mut v = m[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / l[(j, j)];
        }
    }
    Some(l)
}

/// A prior or relative-pose constraint.
#[derive(Clone, Debug)]
pub struct Factor<P, const D: usize> {
    pub kind: FactorKind,
    /// `(key,)` for priors, `(from, to)` for relative-pose factors.
    pub keys: (Key, Option<Key>),
    pub measurement: P,
    pub noise: NoiseModel<D>,
}

/// Whitened Jacobian blocks and residual of one factor.
#[derive(Clone, Debug)]
pub struct FactorLinearization<const D: usize> {
    pub keys: (Key, Option<Key>),
    /// Whitened Jacobian w.r.t. the first key.
    pub jac_first: SMatrix<f64, D, D>,
    /// Whitened Jacobian w.r.t. the second key, for binary factors.
    pub jac_second: Option<SMatrix<f64, D, D>>,
    pub whitened_residual: SVector<f64, D>,
}

impl<P: LieGroup<D>, const D: usize> Factor<P, D> {
    pub fn prior(key: Key, measurement: P, noise: NoiseModel<D>) -> Self {
        Factor {
            kind: FactorKind::Prior,
            keys: (key, None),
            measurement,
            noise,
        }
    }

    pub fn between(
        kind: FactorKind,
        from: Key,
        to: Key,
        measurement: P,
        noise: NoiseModel<D>,
    ) -> Self {
        debug_assert!(kind != FactorKind::Prior);
        Factor {
            kind,
            keys: (from, Some(to)),
            measurement,
            noise,
        }
    }

    pub fn is_binary(&self) -> bool {
        self.keys.1.is_some()
    }

    fn value<'a>(values: &'a Values<P>, key: Key) -> Result<&'a P> {
        values.get(&key).ok_or(Error::KeyNotFound(key.0))
    }

    /// Unwhitened residual `Log(z^-1 * prediction)`.
    pub fn residual(&self, values: &Values<P>) -> Result<SVector<f64, D>> {
        let first = Self::value(values, self.keys.0)?;
        let prediction = match self.keys.1 {
            Some(to) => first.between(Self::value(values, to)?),
            None => *first,
        };
        self.measurement.inverse().compose(&prediction).log()
    }

    pub fn whitened_residual(&self, values: &Values<P>) -> Result<SVector<f64, D>> {
        Ok(self.noise.whiten(&self.residual(values)?))
    }

    /// Chi-squared contribution `||W r||^2`.
    pub fn error(&self, values: &Values<P>) -> Result<f64> {
        Ok(self.whitened_residual(values)?.norm_squared())
    }

    /// Whitened Jacobians and residual at the current values.
    pub fn linearize(&self, values: &Values<P>) -> Result<FactorLinearization<D>> {
        let first = Self::value(values, self.keys.0)?;
        match self.keys.1 {
            None => {
                let r = self.measurement.inverse().compose(first).log()?;
                let jr_inv = P::right_jacobian_inv(&r);
                Ok(FactorLinearization {
                    keys: self.keys,
                    jac_first: self.noise.whitener * jr_inv,
                    jac_second: None,
                    whitened_residual: self.noise.whiten(&r),
                })
            }
            Some(to_key) => {
                let second = Self::value(values, to_key)?;
                let r = self
                    .measurement
                    .inverse()
                    .compose(&first.between(second))
                    .log()?;
                let jr_inv = P::right_jacobian_inv(&r);
                let j_to = jr_inv;
                let j_from = -jr_inv * second.between(first).adjoint();
                Ok(FactorLinearization {
                    keys: self.keys,
                    jac_first: self.noise.whitener * j_from,
                    jac_second: Some(self.noise.whitener * j_to),
                    whitened_residual: self.noise.whiten(&r),
                })
            }
        }
    }
}

/// Container for pose variables (insertion-ordered) and factors.
#[derive(Clone, Debug, Default)]
pub struct PoseGraph<P, const D: usize> {
    values: Values<P>,
    factors: Vec<Factor<P, D>>,
}

impl<P: LieGroup<D>, const D: usize> PoseGraph<P, D> {
    pub fn new() -> Self {
        PoseGraph {
            values: IndexMap::new(),
            factors: Vec::new(),
        }
    }

    /// Insert a variable with its initial value.
    pub fn add_variable(&mut self, key: Key, initial: P) -> Result<()> {
        if self.values.insert(key, initial).is_some() {
            return Err(Error::InvalidArgument(format!(
                "duplicate variable key {key}"
            )));
        }
        Ok(())
    }

    /// Add a factor. Keys must already exist; loop closures between adjacent
    /// keyframes are rejected (use [`PoseGraph::add_factor_unchecked`] when
    /// adjacency is intended).
    pub fn add_factor(&mut self, factor: Factor<P, D>) -> Result<()> {
        self.check_keys(&factor)?;
        if factor.kind == FactorKind::LoopClosure {
            let i = self.values.get_index_of(&factor.keys.0).unwrap();
            let j = self.values.get_index_of(&factor.keys.1.unwrap()).unwrap();
            if i.abs_diff(j) <= 1 {
                return Err(Error::InvalidArgument(format!(
                    "loop closure between adjacent keyframes {} and {}",
                    factor.keys.0,
                    factor.keys.1.unwrap()
                )));
            }
        }
        self.factors.push(factor);
        Ok(())
    }

    /// Add a factor checking only key existence.
    pub fn add_factor_unchecked(&mut self, factor: Factor<P, D>) -> Result<()> {
        self.check_keys(&factor)?;
        self.factors.push(factor);
        Ok(())
    }

    fn check_keys(&self, factor: &Factor<P, D>) -> Result<()> {
        if !self.values.contains_key(&factor.keys.0) {
            return Err(Error::KeyNotFound(factor.keys.0 .0));
        }
        if let Some(to) = factor.keys.1 {
            if !self.values.contains_key(&to) {
                return Err(Error::KeyNotFound(to.0));
            }
        }
        Ok(())
    }

    pub fn values(&self) -> &Values<P> {
        &self.values
    }

    pub fn factors(&self) -> &[Factor<P, D>] {
        &self.factors
    }

    pub fn num_variables(&self) -> usize {
        self.values.len()
    }

    pub fn has_prior(&self) -> bool {
        self.factors.iter().any(|f| f.kind == FactorKind::Prior)
    }

    /// Position of `key` in the insertion (elimination) order.
    pub fn variable_index(&self, key: Key) -> Option<usize> {
        self.values.get_index_of(&key)
    }

    /// Indices of factors of the given kind.
    pub fn factor_indices(&self, kind: FactorKind) -> Vec<usize> {
        self.factors
            .iter()
            .enumerate()
            .filter(|(_, f)| f.kind == kind)
            .map(|(i, _)| i)
            .collect()
    }

    /// Retain only the factors accepted by the predicate.
    pub fn filtered(&self, mut keep: impl FnMut(usize, &Factor<P, D>) -> bool) -> Self {
        PoseGraph {
            values: self.values.clone(),
            factors: self
                .factors
                .iter()
                .enumerate()
                .filter(|(i, f)| keep(*i, f))
                .map(|(_, f)| f.clone())
                .collect(),
        }
    }

    /// Total (optionally per-factor weighted) chi-squared at `values`.
    pub fn graph_error(&self, values: &Values<P>, weights: Option<&[f64]>) -> Result<f64> {
        if let Some(w) = weights {
            if w.len() != self.factors.len() {
                return Err(Error::InvalidArgument(format!(
                    "{} weights for {} factors",
                    w.len(),
                    self.factors.len()
                )));
            }
        }
        let mut total = 0.0;
        for (i, f) in self.factors.iter().enumerate() {
            let w = weights.map_or(1.0, |w| w[i]);
            if w == 0.0 {
                continue;
            }
            total += w * f.error(values)?;
        }
        Ok(total)
    }
}
