//! Power-law effort model `effort = A * ufp^B`, fit by ordinary least
//! squares on `(ln ufp, ln effort)`. Effort is in person-hours.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressionModel {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(default = "unfit_n")]
    pub n_fit: usize,
    /// Coefficient of determination of the log-space fit.
    #[serde(default = "unfit_r_squared")]
    pub r_squared: f64,
}

// Hand-written models carry only A and B.
fn unfit_n() -> usize {
    2
}

fn unfit_r_squared() -> f64 {
    1.0
}

impl RegressionModel {
    /// A model with given coefficients and no fit statistics attached.
    pub fn from_coefficients(a: f64, b: f64) -> Result<Self> {
        let m = RegressionModel { a, b, n_fit: 2, r_squared: 1.0 };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > 0.0) || !self.b.is_finite() {
            return Err(Error::config(format!(
                "model needs finite A > 0 and finite B, got A={} B={}",
                self.a, self.b
            )));
        }
        if self.n_fit < 2 {
            return Err(Error::config(format!("model n_fit must be at least 2, got {}", self.n_fit)));
        }
        Ok(())
    }

    pub fn predict(&self, ufp: f64) -> Result<f64> {
        predict_effort(self, ufp)
    }
}

pub fn fit_power_law(points: &[(f64, f64)]) -> Result<RegressionModel> {
    if points.len() < 2 {
        return Err(Error::invalid(format!(
            "power-law fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    if let Some((i, p)) = points
        .iter()
        .enumerate()
        .find(|(_, (u, e))| !(u.is_finite() && *u > 0.0 && e.is_finite() && *e > 0.0))
    {
        return Err(Error::at(
            i,
            Error::invalid(format!("ufp and effort must be positive, got {p:?}")),
        ));
    }

    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|&(u, e)| (u.ln(), e.ln())).collect();
    let mean_x = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in &logs {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::numeric("all ufp values are identical; slope is undetermined"));
    }

    let b = sxy / sxx;
    let intercept = mean_y - b * mean_x;
    let ss_res: f64 = logs
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + b * x);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 { (1.0 - ss_res / syy).clamp(0.0, 1.0) } else { 1.0 };

    Ok(RegressionModel {
        a: intercept.exp(),
        b,
        n_fit: points.len(),
        r_squared,
    })
}

pub fn predict_effort(model: &RegressionModel, ufp: f64) -> Result<f64> {
    if !(ufp.is_finite() && ufp > 0.0) {
        return Err(Error::invalid(format!("ufp must be positive, got {ufp}")));
    }
    Ok(model.a * ufp.powf(model.b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn two_point_fits() {
        let m = fit_power_law(&[(100.0, 1000.0), (200.0, 2000.0)]).unwrap();
        assert!(close(m.a, 10.0, 1e-12) && close(m.b, 1.0, 1e-12), "{m:?}");
        assert_eq!(m.n_fit, 2);
        assert_eq!(m.r_squared, 1.0);

        let m = fit_power_law(&[(100.0, 20.0), (400.0, 40.0)]).unwrap();
        assert!(close(m.a, 2.0, 1e-12) && close(m.b, 0.5, 1e-12), "{m:?}");
    }

    #[test]
    fn fit_errors() {
        assert!(fit_power_law(&[(1.0, 1.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 1.0), (2.0, -2.0)]).is_err());
        let err = fit_power_law(&[(5.0, 1.0), (5.0, 2.0)]).unwrap_err();
        assert!(err.is_numeric());
    }

    #[test]
    fn predictions() {
        let m = RegressionModel::from_coefficients(10.0, 1.0).unwrap();
        assert_eq!(m.predict(100.0).unwrap(), 1000.0);
        let m = RegressionModel::from_coefficients(2.0, 0.5).unwrap();
        assert_eq!(m.predict(400.0).unwrap(), 40.0);
        let m = RegressionModel::from_coefficients(1.0, 0.0).unwrap();
        assert_eq!(m.predict(1234.5).unwrap(), 1.0);
        assert!(m.predict(0.0).is_err());
        assert!(m.predict(-3.0).is_err());
    }

    #[test]
    fn json_keys() {
        let m = RegressionModel { a: 2.5, b: 1.1, n_fit: 40, r_squared: 0.8 };
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"A":2.5,"B":1.1,"n_fit":40,"r_squared":0.8}"#);
        assert_eq!(serde_json::from_str::<RegressionModel>(&s).unwrap(), m);
    }
}
