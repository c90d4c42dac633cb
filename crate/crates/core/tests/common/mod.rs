//! Oracles shared by the integration tests. Each is written independently
//! of the library code path it checks.
#![allow(dead_code)]

use fpcal::calibration::Observation;
use fpcal::effort::RegressionModel;
use fpcal::fp_model::{ComplexityLevel, ComponentKind, UfpBreakdown, WeightTable, CELLS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ComplexityLevel::{Average, High, Low};
use ComponentKind::*;

/// IFPUG complexity tables written out as explicit inclusive ranges.
pub fn range_table_level(kind: ComponentKind, det: u32, secondary: u32) -> ComplexityLevel {
    let (row, col) = match kind {
        ILF | EIF => (
            match secondary {
                1 => 0,
                2..=5 => 1,
                _ => 2,
            },
            match det {
                1..=19 => 0,
                20..=50 => 1,
                _ => 2,
            },
        ),
        EI => (
            match secondary {
                0 | 1 => 0,
                2 => 1,
                _ => 2,
            },
            match det {
                1..=4 => 0,
                5..=15 => 1,
                _ => 2,
            },
        ),
        EO | EQ => (
            match secondary {
                0 | 1 => 0,
                2 | 3 => 1,
                _ => 2,
            },
            match det {
                1..=5 => 0,
                6..=19 => 1,
                _ => 2,
            },
        ),
    };
    let table = [[Low, Low, Average], [Low, Average, High], [Average, High, High]];
    table[row][col]
}

/// Solves the 2×2 normal equations [n Σx; Σx Σx²][c; b] = [Σy; Σxy] by
/// Cramer's rule on raw (uncentred) sums.
pub fn normal_equations(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(u, e) in points {
        let (x, y) = (u.ln(), e.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let det = n * sxx - sx * sx;
    let intercept = (sy * sxx - sx * sxy) / det;
    let slope = (n * sxy - sx * sy) / det;
    (intercept.exp(), slope)
}

pub fn random_table(rng: &mut ChaCha8Rng) -> WeightTable {
    let mut v = [0.0; CELLS];
    v.iter_mut().for_each(|x| *x = rng.random_range(0.5..20.0));
    for row in v.chunks_mut(3) {
        row.sort_by(f64::total_cmp);
    }
    WeightTable::from_vector(&v).unwrap()
}

pub fn random_projects(rng: &mut ChaCha8Rng, n: usize, model: &RegressionModel, table: &WeightTable) -> Vec<Observation> {
    (0..n)
        .map(|_| {
            let mut counts = [0u32; CELLS];
            counts.iter_mut().for_each(|c| *c = rng.random_range(0..8));
            counts[rng.random_range(0..CELLS)] += 1;
            let b = UfpBreakdown::from_vector(&counts);
            let u: f64 = b.as_f64().iter().zip(table.as_vector()).map(|(n, w)| n * w).sum();
            let noise: f64 = rng.random_range(-0.8..0.8);
            Observation::new(b, model.a * u.powf(model.b) * noise.exp())
        })
        .collect()
}

pub fn random_instance(seed: u64) -> (WeightTable, Vec<Observation>, RegressionModel) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let model = RegressionModel::from_coefficients(rng.random_range(1.0..30.0), rng.random_range(0.6..1.4)).unwrap();
    let truth = random_table(&mut rng);
    let n = rng.random_range(1..40);
    let projects = random_projects(&mut rng, n, &model, &truth);
    (random_table(&mut rng), projects, model)
}

/// Direct recomputation of the mean squared relative error from a raw
/// weight vector (perturbed vectors may break per-kind ordering).
pub fn loss_oracle(w: &[f64; CELLS], projects: &[Observation], model: &RegressionModel) -> f64 {
    let mut total = 0.0;
    for p in projects {
        let counts = p.breakdown.counts();
        let u: f64 = (0..CELLS).map(|j| w[j] * f64::from(counts[j])).sum();
        let pred = model.a * u.powf(model.b);
        total += ((pred - p.effort) / p.effort).powi(2);
    }
    total / projects.len() as f64
}

/// Central difference `(L(w + h e_j) - L(w - h e_j)) / 2h` with
/// `h = 1e-6 * max(1, |w_j|)`. The loss difference is summed per project as
/// `(r+ - r-)(r+ + r-)`, and `r+ - r-` comes from the exact difference of
/// powers `U-^B * expm1(B * ln1p(2h n / U-))`, so subtracting two nearly
/// equal losses never loses digits.
pub fn central_difference(table: &WeightTable, projects: &[Observation], model: &RegressionModel) -> [f64; CELLS] {
    let w = table.as_vector();
    let mut g = [0.0; CELLS];
    for j in 0..CELLS {
        let h = 1e-6 * w[j].abs().max(1.0);
        let mut diff = 0.0;
        for p in projects {
            let counts = p.breakdown.counts();
            let n_j = f64::from(counts[j]);
            if n_j == 0.0 {
                continue;
            }
            let u: f64 = (0..CELLS).map(|k| w[k] * f64::from(counts[k])).sum();
            let (up, down) = (u + h * n_j, u - h * n_j);
            let r_up = (model.a * up.powf(model.b) - p.effort) / p.effort;
            let r_down = (model.a * down.powf(model.b) - p.effort) / p.effort;
            let r_gap = model.a / p.effort * down.powf(model.b) * (model.b * (2.0 * h * n_j / down).ln_1p()).exp_m1();
            diff += r_gap * (r_up + r_down);
        }
        g[j] = diff / projects.len() as f64 / (2.0 * h);
    }
    g
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-12 {
        (a - b).abs()
    } else {
        (a - b).abs() / scale
    }
}

/// Rank of a dense matrix by Gaussian elimination with partial pivoting.
pub fn rank(mut rows: Vec<Vec<f64>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let pivot = (rank..rows.len()).max_by(|&a, &b| rows[a][c].abs().total_cmp(&rows[b][c].abs()));
        let Some(p) = pivot else { break };
        if rows[p][c].abs() < 1e-9 {
            continue;
        }
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank {
                let f = rows[r][c] / rows[rank][c];
                for k in c..cols {
                    rows[r][k] -= f * rows[rank][k];
                }
            }
        }
        rank += 1;
    }
    rank
}
