//! The repeated split / fit / calibrate / evaluate protocol.
//!
//! For repetition `r` the filtered corpus is split with seed
//! `seed_base + r`. The power law is fit on the training half with the
//! original weights, training outliers are dropped and the law is refit on
//! what remains. Calibration runs on that cleaned set with `(A, B)` held
//! fixed, and both weight tables are scored on the untouched test half
//! through the same refit model.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::calibration::{train, CalibrationConfig, CalibrationResult};
use crate::dataset::{detect_outliers, filter_isbsg, observations, split, FilterCriteria, ProjectRecord, SplitSpec};
use crate::effort::{fit_power_law, RegressionModel};
use crate::error::{Error, Result};
use crate::fp_model::{compute_ufp, WeightTable};
use crate::metrics::{evaluate, EvaluationReport, DEFAULT_PRED_LEVELS};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub repetitions: usize,
    pub seed_base: u64,
    pub train_count: usize,
    pub outlier_k: f64,
    pub original_weights: WeightTable,
    pub calibration: CalibrationConfig,
    pub filter: FilterCriteria,
    pub pred_levels: Vec<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            repetitions: 5,
            seed_base: 0,
            train_count: 100,
            outlier_k: crate::dataset::DEFAULT_OUTLIER_K,
            original_weights: WeightTable::default(),
            calibration: CalibrationConfig::default(),
            filter: FilterCriteria::default(),
            pred_levels: DEFAULT_PRED_LEVELS.to_vec(),
        }
    }
}

/// A model fit on a training set after outlier removal.
#[derive(Clone, Debug, PartialEq)]
pub struct CleanFit {
    pub model: RegressionModel,
    pub cleaned: Vec<ProjectRecord>,
    pub outliers: BTreeSet<String>,
}

/// Fits `effort = A * ufp^B` with `weights`.
pub fn fit_records(records: &[ProjectRecord], weights: &WeightTable) -> Result<RegressionModel> {
    let points = observations(records)?
        .iter()
        .map(|o| (compute_ufp(&o.breakdown, weights), o.effort))
        .collect::<Vec<_>>();
    fit_power_law(&points)
}

/// Fit, drop records beyond `k` residual deviations, refit.
pub fn fit_without_outliers(records: &[ProjectRecord], weights: &WeightTable, k: f64) -> Result<CleanFit> {
    let first = fit_records(records, weights)?;
    let outliers = detect_outliers(records, &first, weights, k)?;
    let cleaned: Vec<ProjectRecord> = records.iter().filter(|r| !outliers.contains(&r.id)).cloned().collect();
    let model = fit_records(&cleaned, weights)?;
    Ok(CleanFit { model, cleaned, outliers })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepetitionReport {
    pub repetition: usize,
    pub seed: u64,
    pub n_train: usize,
    pub outliers: Vec<String>,
    pub model: RegressionModel,
    pub calibration: CalibrationResult,
    pub evaluation: EvaluationReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub repetitions: Vec<RepetitionReport>,
    pub mean_mmre_original: f64,
    pub mean_mmre_calibrated: f64,
    pub mean_improvement: f64,
    pub mean_calibrated_weights: WeightTable,
}

impl ExperimentReport {
    /// One row per repetition.
    pub fn to_csv(&self) -> String {
        let levels = self
            .repetitions
            .first()
            .map(|r| r.evaluation.pred_levels.clone())
            .unwrap_or_default();
        let mut out = String::from("repetition,seed,n_train,n_outliers,A,B,epochs_run,initial_loss,final_loss,mmre_original,mmre_calibrated,improvement");
        for variant in ["original", "calibrated"] {
            for p in &levels {
                out.push_str(&format!(",pred_{}_{variant}", (p * 100.0).round()));
            }
        }
        out.push('\n');
        for r in &self.repetitions {
            let e = &r.evaluation;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                r.repetition,
                r.seed,
                r.n_train,
                r.outliers.len(),
                r.model.a,
                r.model.b,
                r.calibration.epochs_run,
                r.calibration.initial_loss,
                r.calibration.final_loss,
                e.mmre_original,
                e.mmre_calibrated,
                e.improvement
            ));
            for p in e.pred_original.iter().chain(&e.pred_calibrated) {
                out.push_str(&format!(",{p}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Runs one repetition on an already filtered corpus.
pub fn run_repetition(records: &[ProjectRecord], repetition: usize, config: &ExperimentConfig) -> Result<RepetitionReport> {
    let seed = config.seed_base.wrapping_add(repetition as u64);
    let (train_set, test_set) = split(records, &SplitSpec { seed, train_count: config.train_count })?;
    let fit = fit_without_outliers(&train_set, &config.original_weights, config.outlier_k)?;
    let calibration = train(
        &config.original_weights,
        &observations(&fit.cleaned)?,
        &fit.model,
        &config.calibration,
    )?;
    let evaluation = evaluate(
        &observations(&test_set)?,
        &config.original_weights,
        &calibration.calibrated,
        &fit.model,
        &config.pred_levels,
    )?;
    Ok(RepetitionReport {
        repetition,
        seed,
        n_train: fit.cleaned.len(),
        outliers: fit.outliers.into_iter().collect(),
        model: fit.model,
        calibration,
        evaluation,
    })
}

/// Filters `corpus` and runs every repetition.
pub fn run_experiment(corpus: &[ProjectRecord], config: &ExperimentConfig) -> Result<ExperimentReport> {
    if config.repetitions < 1 {
        return Err(Error::config("repetitions must be at least 1"));
    }
    let records = filter_isbsg(corpus, &config.filter);
    if records.len() < config.train_count + 1 {
        return Err(Error::invalid(format!(
            "{} records pass the filter; need at least {}",
            records.len(),
            config.train_count + 1
        )));
    }

    let repetitions = (0..config.repetitions)
        .map(|r| run_repetition(&records, r, config))
        .collect::<Result<Vec<_>>>()?;

    let n = repetitions.len() as f64;
    let mean = |f: &dyn Fn(&RepetitionReport) -> f64| repetitions.iter().map(f).sum::<f64>() / n;
    let tables: Vec<WeightTable> = repetitions.iter().map(|r| r.calibration.calibrated.clone()).collect();
    Ok(ExperimentReport {
        mean_mmre_original: mean(&|r| r.evaluation.mmre_original),
        mean_mmre_calibrated: mean(&|r| r.evaluation.mmre_calibrated),
        mean_improvement: mean(&|r| r.evaluation.improvement),
        mean_calibrated_weights: WeightTable::mean(&tables)?,
        repetitions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{gen_synthetic, SyntheticSpec};

    #[test]
    fn small_corpus_is_rejected() {
        let corpus = gen_synthetic(&SyntheticSpec { project_count: 50, ..Default::default() }).unwrap();
        assert!(run_experiment(&corpus, &ExperimentConfig::default()).is_err());
        let cfg = ExperimentConfig { repetitions: 0, ..Default::default() };
        assert!(run_experiment(&corpus, &cfg).is_err());
    }

    #[test]
    fn one_row_per_repetition() {
        let corpus = gen_synthetic(&SyntheticSpec { project_count: 60, noise_sigma: 0.2, ..Default::default() }).unwrap();
        let cfg = ExperimentConfig {
            repetitions: 3,
            train_count: 40,
            calibration: CalibrationConfig { max_epochs: 50, ..Default::default() },
            ..Default::default()
        };
        let report = run_experiment(&corpus, &cfg).unwrap();
        assert_eq!(report.repetitions.len(), 3);
        let seeds: Vec<u64> = report.repetitions.iter().map(|r| r.seed).collect();
        assert_eq!(seeds, [0, 1, 2]);
        assert_eq!(report.to_csv().lines().count(), 4);
    }
}
