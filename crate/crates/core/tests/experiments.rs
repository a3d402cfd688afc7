use necklace_core::experiments::{
    check_log_law, concentration_check, estimate_distribution, interval_trend,
    lower_bound_check, moment_check, moment_check_exhaustive, sweep_exponent, walk_nonreturn,
    ExperimentResult,
};
use necklace_core::ExactProbability;

fn four_sigma(r: &necklace_core::experiments::ResultRow<f64>, expected: f64) -> bool {
    let sigma = (expected * (1.0 - expected) / r.trials as f64).sqrt();
    (r.estimate - expected).abs() <= 4.0 * sigma
}

fn masses(r: &ExperimentResult<f64>) -> Vec<(usize, f64)> {
    r.rows_named("P(X=s)")
        .map(|row| (row.s.unwrap(), row.estimate))
        .collect()
}

#[test]
fn distribution_of_single_type() {
    let r = estimate_distribution::<f64>(2, 1, 1, 1000, 1).unwrap();
    assert_eq!(masses(&r), vec![(1, 1.0)]);
}

#[test]
fn distribution_two_types_one_each() {
    let r = estimate_distribution::<f64>(2, 2, 1, 100_000, 2).unwrap();
    let rows: Vec<_> = r.rows_named("P(X=s)").collect();
    assert!(four_sigma(rows[0], 2.0 / 3.0), "{:?}", rows[0]);
    assert!(four_sigma(rows[1], 1.0 / 3.0), "{:?}", rows[1]);
}

#[test]
fn histogram_masses_sum_to_one() {
    for (k, t, m) in [(2, 3, 4), (2, 4, 3), (3, 2, 1), (3, 2, 2), (4, 2, 1)] {
        let r = estimate_distribution::<f64>(k, t, m, 500, 3).unwrap();
        let counts: u64 = r.rows_named("P(X=s)").map(|row| row.count).sum();
        assert_eq!(counts, 500);
        let total: f64 = masses(&r).iter().map(|m| m.1).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(masses(&r).iter().all(|&(s, _)| s >= 1 && s <= (k - 1) * t));
        for row in &r.rows {
            assert!(row.ci_low <= row.estimate && row.estimate <= row.ci_high);
        }
    }
}

#[test]
fn distribution_guard_for_many_thieves() {
    let err = estimate_distribution::<f64>(3, 3, 3, 10, 0).unwrap_err();
    assert!(err.is_too_large());
}

#[test]
fn five_types_one_cut_sweep() {
    let r = sweep_exponent::<f64>(5, 1, &[4, 8, 16], 100_000, 4).unwrap();
    let slope = r.fit.unwrap().slope;
    assert!((slope + 2.0).abs() <= 0.4, "{slope}");
}

#[test]
fn three_cut_control_is_nearly_flat() {
    // P(X = 3) = 1 - P(X <= 2) still creeps up like 1 - c / ln m on this grid
    let r = sweep_exponent::<f64>(3, 3, &[8, 16, 32, 64], 20_000, 5).unwrap();
    let slope = r.fit.unwrap().slope;
    assert!((-0.3..=0.3).contains(&slope), "{slope}");
}

#[test]
fn zero_cells_are_left_out_of_the_fit() {
    let r = sweep_exponent::<f64>(5, 1, &[4, 64, 128], 200, 6).unwrap();
    assert!(!r.warnings.is_empty());
    assert!(r.to_csv().contains("# warning: "));
}

#[test]
fn log_law_summary_rows() {
    let r = check_log_law::<f64>(3, &[16, 64], 2000, 7).unwrap();
    assert!(r.row("ratio_max_min").is_some());
    assert_eq!(r.rows_named("P(X<=s)*ln(m)").count(), 2);
    assert!(check_log_law::<f64>(4, &[16], 10, 7).is_err());
}

#[test]
fn first_moment_exhaustive() {
    let e = moment_check_exhaustive(3, 1, 2).unwrap();
    assert_eq!(e.necklaces, 90);
    assert_eq!(e.mean, ExactProbability::new(4, 5));
    assert_eq!(e.mean, e.oracle_mean);
    assert!(e.second_moment.to_f64() >= e.mean.to_f64().powi(2));
    for (t, m, s) in [(2, 1, 1), (2, 2, 1), (2, 2, 2), (3, 2, 2), (3, 2, 3)] {
        let e = moment_check_exhaustive(t, m, s).unwrap();
        assert_eq!(e.mean, e.oracle_mean, "t={t} m={m} s={s}");
    }
}

#[test]
fn first_moment_sampled() {
    let r = moment_check::<f64>(3, 8, 2, 10_000, 8).unwrap();
    let mean = r.row("E(Y)").unwrap();
    let exact = r.row("E(Y)_exact").unwrap().estimate;
    let sigma = (mean.ci_high - mean.ci_low) / (2.0 * 1.959_963_984_540_054);
    assert!((mean.estimate - exact).abs() <= 4.0 * sigma);
    assert!(r.row("E(Y^2)").unwrap().estimate >= mean.estimate.powi(2));
}

#[test]
fn lower_bound_shares_decay() {
    let r = lower_bound_check::<f64>(2, 2, &[4, 16, 64], 10_000, 9).unwrap();
    let p: Vec<f64> = r.rows_named("P(X<s)").map(|row| row.estimate).collect();
    assert!(p.windows(2).all(|w| w[1] < w[0]), "{p:?}");
    assert_eq!(r.row("above_ceiling").unwrap().estimate, 0.0);
    let slope = r.fit.unwrap().slope;
    assert!((slope + 0.5).abs() <= 0.15, "{slope}");

    let r = lower_bound_check::<f64>(2, 3, &[4, 16, 64], 10_000, 9).unwrap();
    let p: Vec<f64> = r.rows_named("P(X<s)").map(|row| row.estimate).collect();
    assert!(p.windows(2).all(|w| w[1] < w[0]), "{p:?}");

    let r = lower_bound_check::<f64>(3, 2, &[1, 2], 300, 9).unwrap();
    assert_eq!(r.row("above_ceiling").unwrap().estimate, 0.0);
}

#[test]
fn concentration_of_the_incremental_count() {
    let r = concentration_check::<f64>(&[64, 128, 256, 512], 200, 10).unwrap();
    let ratios: Vec<f64> = r.rows_named("std_over_sqrt_t").map(|row| row.estimate).collect();
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    assert!(max / min <= 3.0, "{ratios:?}");
    let last = r.rows_named("mean_over_t").last().unwrap().estimate;
    assert!((0.20..=0.45).contains(&last));
    assert!(r.rows_named("within_4_sd").all(|row| row.estimate >= 0.95));
    assert!(r.rows_named("fair_fraction").all(|row| row.estimate == 1.0));
}

#[test]
fn interval_heuristic_small_grid() {
    let r = interval_trend::<f64>(300, 4, &[4, 16], 5, 11).unwrap();
    assert!(r.rows_named("fair_fraction").all(|row| row.estimate == 1.0));
    assert_eq!(r.rows_named("cut_fraction").count(), 2);
}

#[test]
fn walk_experiment_rows() {
    let (r, curve) = walk_nonreturn::<f64>(2, &[1, 8, 64], 2000, 12).unwrap();
    assert_eq!(curve.points.len(), 3);
    assert_eq!(r.rows_named("nonreturn").count(), 3);
    assert_eq!(r.rows_named("nonreturn*ln(N)").count(), 2);
}

#[test]
fn runs_are_reproducible_and_seed_sensitive() {
    let a = sweep_exponent::<f64>(3, 1, &[4, 8], 3000, 13).unwrap().to_csv();
    let b = sweep_exponent::<f64>(3, 1, &[4, 8], 3000, 13).unwrap().to_csv();
    let c = sweep_exponent::<f64>(3, 1, &[4, 8], 3000, 14).unwrap().to_csv();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                let d = estimate_distribution::<f64>(2, 3, 6, 4000, 15).unwrap();
                let c = concentration_check::<f64>(&[32], 300, 15).unwrap();
                let (w, _) = walk_nonreturn::<f64>(2, &[16, 64], 1000, 15).unwrap();
                format!("{}{}{}", d.to_csv(), c.to_json(), w.to_csv())
            })
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn single_precision_runs() {
    let r = estimate_distribution::<f32>(2, 2, 1, 20_000, 16).unwrap();
    let p = r.rows_named("P(X=s)").next().unwrap().estimate;
    assert!((p - 2.0 / 3.0).abs() < 0.02);
}
