//! The JSON run configuration shared by every subcommand.
//!
//! ```json
//! {"matrices": {...}, "weights": {...},
//!  "fuzzy": {"spread": 0.15, "centroid_samples": 10001},
//!  "calibration": {"learning_rate": 0.01, ...}}
//! ```
//!
//! Every section is optional and falls back to the IFPUG defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::calibration::CalibrationConfig;
use crate::error::Result;
use crate::fp_model::{ComplexityMatrix, WeightTable};
use crate::fuzzy::FuzzyConfig;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub matrices: ComplexityMatrix,
    pub weights: WeightTable,
    pub fuzzy: FuzzyConfig,
    pub calibration: CalibrationConfig,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text)?;
        cfg.calibration.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}
