//! Function point weight calibration.
//!
//! * [`fp_model`]: crisp IFPUG complexity matrices, weight tables and UFP.
//! * [`fuzzy`]: Mamdani inference giving a continuous weight per component.
//! * [`effort`]: the `effort = A * ufp^B` model and its log-space fit.
//! * [`calibration`]: gradient descent on the fifteen weights through that model.
//! * [`dataset`]: project CSV ingestion, filtering, splitting, outliers, synthetic corpora.
//! * [`metrics`]: MRE, MMRE, PRED and the comparison report.
//! * [`experiment`]: the repeated split/fit/calibrate/evaluate protocol.

pub mod calibration;
pub mod config;
pub mod dataset;
pub mod effort;
pub mod error;
pub mod experiment;
pub mod fp_model;
pub mod fuzzy;
pub mod metrics;

pub use error::{Error, Result};
