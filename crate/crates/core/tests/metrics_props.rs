use fpcal::calibration::Observation;
use fpcal::dataset::{gen_synthetic, observations, SyntheticSpec};
use fpcal::effort::RegressionModel;
use fpcal::fp_model::{WeightTable, CELLS};
use fpcal::metrics::{evaluate, improvement, mmre, pred, DEFAULT_PRED_LEVELS};
use proptest::prelude::*;

fn pairs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((0.0f64..1e4, 1e-3f64..1e4), 1..80)
}

fn hidden() -> WeightTable {
    WeightTable::new([
        [2.0, 3.5, 7.0],
        [4.5, 6.0, 6.5],
        [1.0, 3.0, 5.0],
        [9.0, 12.0, 20.0],
        [3.0, 4.0, 8.0],
    ])
    .unwrap()
}

fn test_set(sigma: f64, seed: u64) -> Vec<Observation> {
    let spec = SyntheticSpec { project_count: 84, hidden_weights: hidden(), noise_sigma: sigma, seed, ..Default::default() };
    observations(&gen_synthetic(&spec).unwrap()).unwrap()
}

#[test]
fn identical_tables_do_not_improve() {
    let t = WeightTable::default();
    let model = RegressionModel::from_coefficients(10.0, 1.05).unwrap();
    let r = evaluate(&test_set(0.3, 1), &t, &t, &model, &DEFAULT_PRED_LEVELS).unwrap();
    assert_eq!(r.improvement, 0.0);
    assert_eq!(r.mmre_original, r.mmre_calibrated);
    assert_eq!(r.pred_original, r.pred_calibrated);
}

#[test]
fn true_weights_score_perfectly_on_exact_data() {
    let model = RegressionModel::from_coefficients(10.0, 1.05).unwrap();
    let r = evaluate(&test_set(0.0, 2), &WeightTable::default(), &hidden(), &model, &DEFAULT_PRED_LEVELS).unwrap();
    assert!(r.mmre_calibrated < 1e-12, "{}", r.mmre_calibrated);
    assert_eq!(r.pred_calibrated, vec![1.0; 4]);
    assert!(r.improvement > 0.0);
}

/// Spreadsheet-style recomputation straight from raw predictions.
#[test]
fn report_matches_recomputation() {
    let test = test_set(0.4, 3);
    let model = RegressionModel::from_coefficients(8.0, 1.1).unwrap();
    let (orig, cal) = (WeightTable::default(), hidden());
    let r = evaluate(&test, &orig, &cal, &model, &DEFAULT_PRED_LEVELS).unwrap();

    let column = |t: &WeightTable| -> Vec<f64> {
        let w = t.as_vector();
        test.iter()
            .map(|o| {
                let counts = o.breakdown.as_f64();
                let ufp: f64 = (0..CELLS).map(|j| w[j] * counts[j]).sum();
                let est = 8.0 * ufp.powf(1.1);
                (est - o.effort).abs() / o.effort
            })
            .collect()
    };
    let (mo, mc) = (column(&orig), column(&cal));
    let n = test.len() as f64;
    let mmre_o = mo.iter().sum::<f64>() / n;
    let mmre_c = mc.iter().sum::<f64>() / n;
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1.0);
    assert_eq!(r.n_test, test.len());
    assert!(close(r.mmre_original, mmre_o));
    assert!(close(r.mmre_calibrated, mmre_c));
    assert!(close(r.improvement, (mmre_o - mmre_c) / mmre_o));
    for (i, p) in DEFAULT_PRED_LEVELS.iter().enumerate() {
        assert_eq!(r.pred_original[i], mo.iter().filter(|&&m| m <= *p).count() as f64 / n);
        assert_eq!(r.pred_calibrated[i], mc.iter().filter(|&&m| m <= *p).count() as f64 / n);
    }

    let csv = r.to_csv();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("original,") && lines[2].starts_with("calibrated,"));
    let json = serde_json::to_string_pretty(&r).unwrap();
    assert_eq!(serde_json::from_str::<fpcal::metrics::EvaluationReport>(&json).unwrap(), r);
}

proptest! {
    #[test]
    fn pred_is_monotone_in_level(ps in pairs(), p1 in 0.0f64..3.0, p2 in 0.0f64..3.0) {
        let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        prop_assert!(pred(&ps, lo).unwrap() <= pred(&ps, hi).unwrap());
        prop_assert_eq!(pred(&ps, f64::INFINITY).unwrap(), 1.0);
    }

    #[test]
    fn metrics_ignore_per_pair_scale(ps in pairs(), scales in proptest::collection::vec(1e-3f64..1e3, 80), p in 0.0f64..2.0) {
        let scaled: Vec<(f64, f64)> = ps.iter().zip(&scales).map(|(&(e, a), &s)| (e * s, a * s)).collect();
        let (m1, m2) = (mmre(&ps).unwrap(), mmre(&scaled).unwrap());
        prop_assert!((m1 - m2).abs() <= 1e-9 * m1.max(1.0));
        // a pair whose MRE sits on the threshold may flip under rounding
        let on_edge = ps.iter().any(|&(e, a)| ((e - a).abs() / a - p).abs() < 1e-9);
        prop_assert!(on_edge || pred(&ps, p).unwrap() == pred(&scaled, p).unwrap());
    }

    #[test]
    fn improvement_sign(o in 1e-6f64..10.0, c in 0.0f64..10.0) {
        let i = improvement(o, c).unwrap();
        prop_assert_eq!(i > 0.0, c < o);
        prop_assert_eq!(improvement(o, o).unwrap(), 0.0);
    }
}
