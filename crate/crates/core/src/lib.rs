//! Sparse linear regression with the TWIN family of nonconvex penalties.
//!
//! The crate is organized by task:
//!
//! * [`penalty`]: penalty values, derivatives and exact thresholding operators
//!   for TWIN-a, TWIN-b, the Lasso, MCP and SCAD.
//! * [`solver`]: coordinate descent and the mixed coordinate LLA solver,
//!   regularization paths with warm starts, and a KKT checker.
//! * [`tuning`]: universal tuning parameters, orthogonal-design FDR/FWER
//!   calibration and K-fold cross-validation.
//! * [`simulate`]: synthetic designs, coefficient schemes, SNR-calibrated
//!   noise and a replication harness.
//! * [`metrics`]: FDR, TDR, FWER, RMSE/MSPE and cross-replication aggregation.

pub mod dataio;
pub mod error;
pub mod kvconfig;
pub mod linalg;
pub mod metrics;
pub mod penalty;
pub mod rng;
pub mod simulate;
pub mod solver;
pub mod tuning;

pub use error::{Error, Result};
pub use penalty::{ComparatorKind, ComparatorParams, GammaRegion, PenaltySpec, TwinAParams, TwinBParams};
pub use solver::{
    fit, fit_cd, fit_mclla, fit_path, kkt_check, Algorithm, CoordinateOrder, FitResult, PathConfig,
    PathResult, Problem, SolverConfig,
};
