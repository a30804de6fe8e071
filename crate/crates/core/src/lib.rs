//! Pose-graph optimization backend with robust loop-closure rejection.
//!
//! The crate is organized around a small set of layers:
//!
//! * [`geometry`] — SE(2)/SE(3) Lie-group types and maps.
//! * [`factorgraph`] — pose variables, relative-pose factors, residuals and
//!   Jacobians.
//! * [`optimizer`] — Gauss-Newton / Levenberg-Marquardt with per-factor
//!   weights.
//! * [`robustness`] — graduated non-convexity and pairwise-consistency
//!   (maximum clique) loop-closure rejection.
//! * [`frontend`] — keyframe selection, feature binning, non-max suppression
//!   over abstract keypoint tracks.
//! * [`odometry`] — external odometry streams resampled into relative-pose
//!   factors.
//! * [`evaluation`] — trajectory association and ATE metrics.
//! * [`synth`] — seeded synthetic datasets with labeled loop-closure
//!   outliers.
//! * [`io`] — g2o / TUM / feature-stream file formats.

pub mod error;
pub mod evaluation;
pub mod factorgraph;
pub mod frontend;
pub mod geometry;
pub mod io;
pub mod odometry;
pub mod optimizer;
pub mod robustness;
pub mod synth;

pub use error::{Error, Result};
pub use evaluation::{associate, ate_rmse, AlignMode, AlignedErrorReport};
pub use factorgraph::{Factor, FactorKind, Key, NoiseModel, PoseGraph};
pub use geometry::{LieGroup, Pose2, Pose3, Rotation2, Rotation3, Tangent3, Tangent6};
pub use odometry::{ExternalOdomConfig, OdometrySample};
pub use optimizer::{optimize, OptimizeMethod, OptimizerConfig, OptimizeResult};
pub use robustness::{
    gnc_optimize, max_clique, pcm_select, GncConfig, GncState, LoopCandidate, PcmConfig,
};
pub use synth::{SynthConfig, SynthDataset};
