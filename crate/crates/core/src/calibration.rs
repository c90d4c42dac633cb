//! Gradient calibration of the fifteen UFP weights.
//!
//! The model is a single linear layer (the weights) feeding the fixed link
//! `A * u^B`: for a project with breakdown `n` the predicted effort is
//! `A * (w · n)^B`. Training minimises the mean squared relative error
//!
//! ```text
//! L(w) = 1/m * Σ_i ((A * U_i^B - e_i) / e_i)^2,   U_i = w · n_i
//! ```
//!
//! by batch gradient descent. After each step the weights are projected onto
//! the feasible set (every weight at least `weight_floor`, and optionally
//! `Low <= Average <= High` per kind). A step that raises the loss is
//! discarded and the learning rate halved; an accepted step grows it by
//! `step_growth`.

use serde::{Deserialize, Serialize};

use crate::effort::RegressionModel;
use crate::error::{Error, Result};
use crate::fp_model::{UfpBreakdown, WeightTable, CELLS};

/// One training example: a project's breakdown and its actual effort.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observation {
    pub breakdown: UfpBreakdown,
    pub effort: f64,
}

impl Observation {
    pub fn new(breakdown: UfpBreakdown, effort: f64) -> Self {
        Observation { breakdown, effort }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CalibrationConfig {
    pub learning_rate: f64,
    pub max_epochs: usize,
    /// Stop once an accepted step improves the loss by less than this
    /// fraction of its previous value.
    pub tolerance: f64,
    pub weight_floor: f64,
    pub enforce_ordering: bool,
    /// Learning-rate multiplier applied after every accepted step. 1.0
    /// gives plain descent with halving on rejection.
    pub step_growth: f64,
    /// Kept with the run configuration; batch descent draws no random numbers.
    pub seed: u64,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        CalibrationConfig {
            learning_rate: 0.01,
            max_epochs: 5000,
            tolerance: 1e-9,
            weight_floor: 0.1,
            enforce_ordering: true,
            step_growth: 1.1,
            seed: 0,
        }
    }
}

impl CalibrationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::config(format!("learning_rate must be positive, got {}", self.learning_rate)));
        }
        if !(self.weight_floor.is_finite() && self.weight_floor > 0.0) {
            return Err(Error::config(format!("weight_floor must be positive, got {}", self.weight_floor)));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::config(format!("tolerance must be nonnegative, got {}", self.tolerance)));
        }
        if !(self.step_growth.is_finite() && self.step_growth >= 1.0) {
            return Err(Error::config(format!("step_growth must be at least 1, got {}", self.step_growth)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    #[serde(flatten)]
    pub calibrated: WeightTable,
    pub epochs_run: usize,
    pub initial_loss: f64,
    pub final_loss: f64,
    /// Loss at the start and after every epoch.
    #[serde(skip)]
    pub loss_history: Vec<f64>,
}

impl CalibrationResult {
    /// `epoch,loss` rows, epoch 0 being the starting point.
    pub fn loss_history_csv(&self) -> String {
        let mut out = String::from("epoch,loss\n");
        for (i, l) in self.loss_history.iter().enumerate() {
            out.push_str(&format!("{i},{l}\n"));
        }
        out
    }
}

/// Checked, flattened view of a training set.
struct Problem {
    counts: Vec<[f64; CELLS]>,
    efforts: Vec<f64>,
    a: f64,
    b: f64,
}

impl Problem {
    fn new(projects: &[Observation], model: &RegressionModel) -> Result<Self> {
        model.validate()?;
        if projects.is_empty() {
            return Err(Error::invalid("calibration needs at least one project"));
        }
        for (i, p) in projects.iter().enumerate() {
            if !(p.effort.is_finite() && p.effort > 0.0) {
                return Err(Error::at(i, Error::invalid(format!("effort must be positive, got {}", p.effort))));
            }
            if p.breakdown.is_zero() {
                return Err(Error::at(i, Error::invalid("breakdown is all zero, so its UFP is 0")));
            }
        }
        Ok(Problem {
            counts: projects.iter().map(|p| p.breakdown.as_f64()).collect(),
            efforts: projects.iter().map(|p| p.effort).collect(),
            a: model.a,
            b: model.b,
        })
    }

    fn ufp(&self, i: usize, w: &[f64; CELLS]) -> f64 {
        self.counts[i].iter().zip(w).map(|(n, w)| n * w).sum()
    }

    fn loss(&self, w: &[f64; CELLS]) -> Result<f64> {
        let mut acc = 0.0;
        for (i, &e) in self.efforts.iter().enumerate() {
            let u = self.ufp(i, w);
            if !(u > 0.0) {
                return Err(Error::at(i, Error::invalid(format!("UFP must be positive, got {u}"))));
            }
            let r = (self.a * u.powf(self.b) - e) / e;
            acc += r * r;
        }
        Ok(acc / self.efforts.len() as f64)
    }

    fn gradient(&self, w: &[f64; CELLS]) -> Result<[f64; CELLS]> {
        let mut g = [0.0; CELLS];
        for (i, &e) in self.efforts.iter().enumerate() {
            let u = self.ufp(i, w);
            if !(u > 0.0) {
                return Err(Error::at(i, Error::invalid(format!("UFP must be positive, got {u}"))));
            }
            let r = (self.a * u.powf(self.b) - e) / e;
            let scale = r * self.a * self.b * u.powf(self.b - 1.0) / e;
            for (gj, n) in g.iter_mut().zip(&self.counts[i]) {
                *gj += scale * n;
            }
        }
        let m = self.efforts.len() as f64;
        g.iter_mut().for_each(|gj| *gj *= 2.0 / m);
        Ok(g)
    }
}

pub fn loss(weights: &WeightTable, projects: &[Observation], model: &RegressionModel) -> Result<f64> {
    Problem::new(projects, model)?.loss(&weights.as_vector())
}

/// Analytic gradient of [`loss`] in [`crate::fp_model::cell_index`] order.
pub fn gradient(weights: &WeightTable, projects: &[Observation], model: &RegressionModel) -> Result<[f64; CELLS]> {
    Problem::new(projects, model)?.gradient(&weights.as_vector())
}

/// Least-squares nondecreasing fit (equal weights) by pool adjacent violators.
pub fn pool_adjacent_violators(values: &mut [f64]) {
    // (sum, count) blocks
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values.iter() {
        blocks.push((v, 1));
        while blocks.len() > 1 {
            let (s1, c1) = blocks[blocks.len() - 1];
            let (s0, c0) = blocks[blocks.len() - 2];
            if s0 / c0 as f64 <= s1 / c1 as f64 {
                break;
            }
            blocks.pop();
            *blocks.last_mut().unwrap() = (s0 + s1, c0 + c1);
        }
    }
    let mut i = 0;
    for (s, c) in blocks {
        let mean = s / c as f64;
        values[i..i + c].fill(mean);
        i += c;
    }
}

/// Projects a weight vector onto the feasible set.
fn project(w: &mut [f64; CELLS], config: &CalibrationConfig) {
    for x in w.iter_mut() {
        *x = x.max(config.weight_floor);
    }
    if config.enforce_ordering {
        for row in w.chunks_mut(3) {
            pool_adjacent_violators(row);
        }
    }
}

pub fn train(
    initial: &WeightTable,
    projects: &[Observation],
    model: &RegressionModel,
    config: &CalibrationConfig,
) -> Result<CalibrationResult> {
    config.validate()?;
    let problem = Problem::new(projects, model)?;

    let mut w = initial.as_vector();
    project(&mut w, config);
    let initial_loss = problem.loss(&w)?;
    let mut current = initial_loss;
    let mut history = vec![initial_loss];
    let mut lr = config.learning_rate;
    let mut epochs = 0;

    while epochs < config.max_epochs && current > 0.0 {
        epochs += 1;
        let g = problem.gradient(&w)?;
        let mut candidate = w;
        for (c, gj) in candidate.iter_mut().zip(&g) {
            *c -= lr * gj;
        }
        project(&mut candidate, config);
        if candidate == w {
            // projected gradient is zero: a constrained stationary point
            history.push(current);
            break;
        }

        let next = problem.loss(&candidate)?;
        if next <= current {
            let improvement = (current - next) / current;
            w = candidate;
            current = next;
            history.push(current);
            lr *= config.step_growth;
            if improvement < config.tolerance {
                break;
            }
        } else {
            // also covers next = NaN from an overflowing step
            history.push(current);
            lr *= 0.5;
            if lr < f64::MIN_POSITIVE {
                break;
            }
        }
    }

    Ok(CalibrationResult {
        calibrated: WeightTable::from_vector_unchecked(&w),
        epochs_run: epochs,
        initial_loss,
        final_loss: current,
        loss_history: history,
    })
}
