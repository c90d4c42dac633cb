//! Estimation accuracy: MRE, MMRE, PRED(p) and the original-vs-calibrated
//! comparison report.

use serde::{Deserialize, Serialize};

use crate::effort::RegressionModel;
use crate::error::{Error, Result};
use crate::fp_model::{compute_ufp, WeightTable};

pub const DEFAULT_PRED_LEVELS: [f64; 4] = [0.25, 0.50, 0.75, 1.00];

/// Magnitude of relative error `|estimated - actual| / actual`.
pub fn mre(estimated: f64, actual: f64) -> Result<f64> {
    if !(actual.is_finite() && actual > 0.0) {
        return Err(Error::invalid(format!("actual must be positive, got {actual}")));
    }
    Ok((estimated - actual).abs() / actual)
}

fn mres(pairs: &[(f64, f64)]) -> Result<Vec<f64>> {
    if pairs.is_empty() {
        return Err(Error::invalid("no (estimated, actual) pairs"));
    }
    pairs
        .iter()
        .enumerate()
        .map(|(i, &(e, a))| mre(e, a).map_err(|err| Error::at(i, err)))
        .collect()
}

pub fn mmre(pairs: &[(f64, f64)]) -> Result<f64> {
    let m = mres(pairs)?;
    Ok(m.iter().sum::<f64>() / m.len() as f64)
}

/// Fraction of pairs with MRE at most `p`.
pub fn pred(pairs: &[(f64, f64)], p: f64) -> Result<f64> {
    if !(p >= 0.0) {
        return Err(Error::invalid(format!("PRED level must be nonnegative, got {p}")));
    }
    let m = mres(pairs)?;
    Ok(m.iter().filter(|&&x| x <= p).count() as f64 / m.len() as f64)
}

/// Relative MMRE reduction, positive when the calibrated variant is better.
pub fn improvement(mmre_original: f64, mmre_calibrated: f64) -> Result<f64> {
    if !(mmre_original > 0.0) {
        return Err(Error::invalid(format!("original MMRE must be positive, got {mmre_original}")));
    }
    Ok((mmre_original - mmre_calibrated) / mmre_original)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub n_test: usize,
    pub mmre_original: f64,
    pub mmre_calibrated: f64,
    pub improvement: f64,
    pub pred_levels: Vec<f64>,
    pub pred_original: Vec<f64>,
    pub pred_calibrated: Vec<f64>,
}

impl EvaluationReport {
    /// Two rows, one per variant: `variant,mmre,pred_25,...`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("variant,mmre");
        for p in &self.pred_levels {
            out.push_str(&format!(",pred_{}", (p * 100.0).round()));
        }
        out.push('\n');
        for (name, mmre, preds) in [
            ("original", self.mmre_original, &self.pred_original),
            ("calibrated", self.mmre_calibrated, &self.pred_calibrated),
        ] {
            out.push_str(&format!("{name},{mmre}"));
            for p in preds {
                out.push_str(&format!(",{p}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Predicts each test project's effort under both weight tables through
/// the same power-law model and compares the two.
pub fn evaluate(
    test: &[crate::calibration::Observation],
    original: &WeightTable,
    calibrated: &WeightTable,
    model: &RegressionModel,
    levels: &[f64],
) -> Result<EvaluationReport> {
    if test.is_empty() {
        return Err(Error::invalid("evaluation needs a nonempty test set"));
    }
    let pairs = |table: &WeightTable| -> Result<Vec<(f64, f64)>> {
        test.iter()
            .enumerate()
            .map(|(i, o)| {
                model
                    .predict(compute_ufp(&o.breakdown, table))
                    .map(|est| (est, o.effort))
                    .map_err(|e| Error::at(i, e))
            })
            .collect()
    };
    let orig = pairs(original)?;
    let cal = pairs(calibrated)?;
    let mmre_original = mmre(&orig)?;
    let mmre_calibrated = mmre(&cal)?;
    Ok(EvaluationReport {
        n_test: test.len(),
        mmre_original,
        mmre_calibrated,
        improvement: improvement(mmre_original, mmre_calibrated)?,
        pred_levels: levels.to_vec(),
        pred_original: levels.iter().map(|&p| pred(&orig, p)).collect::<Result<_>>()?,
        pred_calibrated: levels.iter().map(|&p| pred(&cal, p)).collect::<Result<_>>()?,
    })
}
