//! Tuning parameters: universal rules, orthogonal-design calibration,
//! cross-validation and a noise-level plug-in.
//!
//! Universal and calibrated values are on the scale of unit-norm columns,
//! i.e. the scale of a standardized [`crate::Problem`].

mod calibrate;
mod cv;
mod normal;
mod sigma;
mod universal;

pub use calibrate::{calibrate_orthogonal, calibrate_orthogonal_with_data, tau_grid, CalibrationTarget, TwinFamily, TAU_GRID_LEN};
pub use cv::{cross_validate, CvConfig, CvResult};
pub use normal::{normal_cdf_complement, normal_quantile};
pub use sigma::estimate_sigma;
pub use universal::{universal_twin_a, universal_twin_b, UniversalInputs};
