use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::heuristics::{incremental_two_thief, interval_hypergraph_partition};
use crate::necklace::{check_params, enumerate_all, generate_uniform, Necklace};
use crate::oracles::{expected_fair_scut, ExactProbability};
use crate::partition::is_fair;
use crate::rng::{cell_seed, RngSeed};
use crate::scalar::Scalar;
use crate::solver::{
    count_fair_scut_with, cut_ceiling, exists_fair_with_cuts_with, min_cut_count,
    min_cut_count_two_below, typical_lower_bound, SolverLimits,
};
use crate::stats::{fit_power_law, log_proportion_sd, mean_and_sd, Estimate};
use crate::walks::{nonreturn_probability, single_nonreturn, single_nonreturn_conditioned, NonReturnCurve};

use super::{Cell, ExperimentKind, ExperimentResult, ExperimentSpec, ResultRow};

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    Ok(())
}

fn check_grid(name: &str, grid: &[usize]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::invalid(format!("{name} grid is empty")));
    }
    Ok(())
}

/// Runs `f` on the necklace of every trial of a cell and returns the values in trial order.
fn per_trial<T, F>(k: usize, t: usize, m: usize, trials: u64, cell: RngSeed, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Necklace) -> Result<T> + Sync,
{
    check_params(k, t, m)?;
    (0..trials)
        .into_par_iter()
        .map(|i| f(&generate_uniform(k, t, m, cell.trial(i))?))
        .collect()
}

/// `min(X, cap + 1)` for two thieves, using that `X <= t`.
fn x_capped(necklace: &Necklace, cap: usize) -> usize {
    let t = necklace.t();
    match min_cut_count_two_below(necklace, cap.min(t - 1) + 1) {
        Some(x) => x,
        None if cap >= t => t,
        None => cap + 1,
    }
}

fn check_two_thief_solver(k: usize, t: usize, m: usize, limits: &SolverLimits) -> Result<()> {
    if k >= 3 && k * t * m > limits.exact_len_general {
        return Err(Error::too_large("necklace length", k * t * m, limits.exact_len_general));
    }
    Ok(())
}

/// Histogram of `X(k, t, m)` over uniform necklaces.
pub fn estimate_distribution<S: Scalar + Serialize>(
    k: usize,
    t: usize,
    m: usize,
    trials: u64,
    seed: u64,
) -> Result<ExperimentResult<S>> {
    estimate_distribution_with(k, t, m, trials, seed, &SolverLimits::default())
}

pub fn estimate_distribution_with<S: Scalar + Serialize>(
    k: usize,
    t: usize,
    m: usize,
    trials: u64,
    seed: u64,
    limits: &SolverLimits,
) -> Result<ExperimentResult<S>> {
    check_trials(trials)?;
    check_params(k, t, m)?;
    check_two_thief_solver(k, t, m, limits)?;
    let backend = if k == 2 { "dfs" } else { "enumeration" };
    let mut spec = ExperimentSpec::new(ExperimentKind::Distribution, trials, seed, backend);
    (spec.k, spec.t, spec.m) = (vec![k], vec![t], vec![m]);
    let xs = per_trial(k, t, m, trials, cell_seed(seed, 0), |n| min_cut_count(n, limits))?;

    let ceiling = cut_ceiling(k, t);
    let mut hist = vec![0u64; ceiling + 1];
    for &x in &xs {
        hist[x] += 1;
    }
    let mut result = ExperimentResult::new(spec);
    let base = Cell {
        k: Some(k),
        t: Some(t),
        m: Some(m),
        ..Cell::default()
    };
    let low = usize::from(k > 1);
    for (s, &count) in hist.iter().enumerate().skip(low) {
        let cell = Cell { s: Some(s), ..base };
        result
            .rows
            .push(ResultRow::from_estimate("P(X=s)", cell, &Estimate::wilson(count, trials)));
    }
    let values: Vec<S> = xs.iter().map(|&x| S::of_count(x as u64)).collect();
    result
        .rows
        .push(ResultRow::from_estimate("mean_X", base, &Estimate::mean_of(&values)));
    Ok(result)
}

/// Adds a weighted log-log fit over the rows named `stat`, leaving out zero cells.
fn fit_rows<S: Scalar + Serialize>(result: &mut ExperimentResult<S>, stat: &str) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut sds = Vec::new();
    let mut warnings = Vec::new();
    for r in result.rows_named(stat) {
        let m = r.m.expect("fitted rows carry m");
        if r.count == 0 {
            warnings.push(format!("{stat} has no successes at m = {m}; left out of the fit"));
            continue;
        }
        xs.push(S::of_count(m as u64));
        ys.push(r.estimate);
        sds.push(log_proportion_sd::<S>(r.count, r.trials));
    }
    result.warnings.extend(warnings);
    result.fit = fit_power_law(&xs, &ys, Some(&sds));
    if result.fit.is_none() {
        result
            .warnings
            .push(format!("fewer than two usable cells for {stat}; no fit"));
    }
}

/// `P(X(2, t, m) = s)` along a grid of `m`, with a log-log fit against `m`.
pub fn sweep_exponent<S: Scalar + Serialize>(
    t: usize,
    s: usize,
    m_grid: &[usize],
    trials: u64,
    seed: u64,
) -> Result<ExperimentResult<S>> {
    check_trials(trials)?;
    check_grid("m", m_grid)?;
    if s == 0 || s > t {
        return Err(Error::invalid(format!("s must lie in 1..={t}, got {s}")));
    }
    let mut spec = ExperimentSpec::new(ExperimentKind::Sweep, trials, seed, "dfs");
    (spec.k, spec.t, spec.m, spec.s) = (vec![2], vec![t], m_grid.to_vec(), Some(s));
    let mut result = ExperimentResult::new(spec);
    for (c, &m) in m_grid.iter().enumerate() {
        let hits = per_trial(2, t, m, trials, cell_seed(seed, c as u64), |n| Ok(x_capped(n, s) == s))?;
        let count = hits.iter().filter(|&&h| h).count() as u64;
        let cell = Cell {
            k: Some(2),
            t: Some(t),
            m: Some(m),
            s: Some(s),
            n: None,
        };
        result
            .rows
            .push(ResultRow::from_estimate("P(X=s)", cell, &Estimate::wilson(count, trials)));
    }
    fit_rows(&mut result, "P(X=s)");
    Ok(result)
}

/// `P(X(2, t, m) <= (t + 1) / 2)` along a grid of `m`, scaled by `ln m`.
///
/// Summary rows: `ratio_max_min` of the scaled values, and `decreasing_within_ci`, which
/// is 1 when every estimate stays below the upper confidence limit of the previous cell.
pub fn check_log_law<S: Scalar + Serialize>(
    t: usize,
    m_grid: &[usize],
    trials: u64,
    seed: u64,
) -> Result<ExperimentResult<S>> {
    check_trials(trials)?;
    check_grid("m", m_grid)?;
    if t.is_multiple_of(2) {
        return Err(Error::invalid(format!("the log law needs odd t, got {t}")));
    }
    if m_grid.contains(&1) {
        return Err(Error::invalid("ln m vanishes at m = 1"));
    }
    let s = t.div_ceil(2);
    let mut spec = ExperimentSpec::new(ExperimentKind::LogLaw, trials, seed, "dfs");
    (spec.k, spec.t, spec.m, spec.s) = (vec![2], vec![t], m_grid.to_vec(), Some(s));
    let mut result = ExperimentResult::new(spec);
    let mut scaled = Vec::new();
    let mut estimates = Vec::new();
    for (c, &m) in m_grid.iter().enumerate() {
        let hits = per_trial(2, t, m, trials, cell_seed(seed, c as u64), |n| Ok(x_capped(n, s) <= s))?;
        let count = hits.iter().filter(|&&h| h).count() as u64;
        let cell = Cell {
            k: Some(2),
            t: Some(t),
            m: Some(m),
            s: Some(s),
            n: None,
        };
        let e = Estimate::<S>::wilson(count, trials);
        let log_m = S::of_count(m as u64).ln();
        let mut row = ResultRow::from_estimate("P(X<=s)*ln(m)", cell, &e);
        row.estimate = e.estimate * log_m;
        row.ci_low = e.ci_low * log_m;
        row.ci_high = e.ci_high * log_m;
        scaled.push(row.estimate);
        estimates.push(e);
        result.rows.push(ResultRow::from_estimate("P(X<=s)", cell, &e));
        result.rows.push(row);
    }
    let max = scaled.iter().copied().fold(S::neg_infinity(), S::max);
    let min = scaled.iter().copied().fold(S::infinity(), S::min);
    let ratio = if min > S::zero() { max / min } else { S::infinity() };
    let decreasing = estimates
        .windows(2)
        .all(|w| w[1].estimate < w[0].ci_high);
    result.rows.push(ResultRow::value("ratio_max_min", Cell::default(), ratio, trials));
    result.rows.push(ResultRow::value(
        "decreasing_within_ci",
        Cell::default(),
        if decreasing { S::one() } else { S::zero() },
        trials,
    ));
    fit_rows(&mut result, "P(X<=s)");
    Ok(result)
}

/// Exact moments of `Y`, the number of fair `s`-cut partitions, over all `(2, t, m)`
/// necklaces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExhaustiveMoments {
    pub necklaces: u64,
    pub mean: ExactProbability,
    pub second_moment: ExactProbability,
    pub oracle_mean: ExactProbability,
}

pub fn moment_check_exhaustive(t: usize, m: usize, s: usize) -> Result<ExhaustiveMoments> {
    let limits = SolverLimits::default();
    let mut count = 0u64;
    let mut sum = BigInt::zero();
    let mut sum_sq = BigInt::zero();
    for n in enumerate_all(2, t, m)? {
        let y = BigInt::from(count_fair_scut_with(&n, s, &limits)?);
        sum_sq += &y * &y;
        sum += y;
        count += 1;
    }
    Ok(ExhaustiveMoments {
        necklaces: count,
        mean: ExactProbability::new(sum, count),
        second_moment: ExactProbability::new(sum_sq, count),
        oracle_mean: expected_fair_scut(t, m, s)?,
    })
}

/// Sample mean and second moment of `Y` next to the exact `E(Y)`.
pub fn moment_check<S: Scalar + Serialize>(
    t: usize,
    m: usize,
    s: usize,
    trials: u64,
    seed: u64,
) -> Result<ExperimentResult<S>> {
    check_trials(trials)?;
    let limits = SolverLimits::default();
    let n = 2 * t * m;
    let candidates = crate::oracles::factorial::binomial(n as u64 - 1, s as u64);
    if candidates > limits.count_candidates.into() {
        return Err(Error::too_large("C(n-1, s)", candidates, limits.count_candidates));
    }
    let mut spec = ExperimentSpec::new(ExperimentKind::Moments, trials, seed, "dfs");
    (spec.k, spec.t, spec.m, spec.s) = (vec![2], vec![t], vec![m], Some(s));
    let ys = per_trial(2, t, m, trials, cell_seed(seed, 0), |n| count_fair_scut_with(n, s, &limits))?;
    let first: Vec<S> = ys.iter().map(|&y| S::of_count(y)).collect();
    let second: Vec<S> = ys.iter().map(|&y| S::of_count(y) * S::of_count(y)).collect();
    let cell = Cell {
        k: Some(2),
        t: Some(t),
        m: Some(m),
        s: Some(s),
        n: None,
    };
    let oracle = expected_fair_scut(t, m, s)?.to_scalar::<S>();
    let mut result = ExperimentResult::new(spec);
    result.rows.push(ResultRow::from_estimate("E(Y)", cell, &Estimate::mean_of(&first)));
    result.rows.push(ResultRow::from_estimate("E(Y^2)", cell, &Estimate::mean_of(&second)));
    result.rows.push(ResultRow::value("E(Y)_exact", cell, oracle, trials));
    Ok(result)
}

/// Share of necklaces splittable with fewer than `ceil((k-1)(t+1)/2)` cuts, per `m`,
/// plus the number of trials above the `(k-1)t` ceiling (always zero).
pub fn lower_bound_check<S: Scalar + Serialize>(
    k: usize,
    t: usize,
    m_grid: &[usize],
    trials: u64,
    seed: u64,
) -> Result<ExperimentResult<S>> {
    check_trials(trials)?;
    check_grid("m", m_grid)?;
    let limits = SolverLimits::default();
    for &m in m_grid {
        check_params(k, t, m)?;
        check_two_thief_solver(k, t, m, &limits)?;
    }
    if k < 2 {
        return Err(Error::invalid("the lower bound needs k >= 2"));
    }
    let threshold = typical_lower_bound(k, t);
    let ceiling = cut_ceiling(k, t);
    let backend = if k == 2 { "dfs" } else { "enumeration" };
    let mut spec = ExperimentSpec::new(ExperimentKind::LowerBound, trials, seed, backend);
    (spec.k, spec.t, spec.m, spec.s) = (vec![k], vec![t], m_grid.to_vec(), Some(threshold));
    let mut result = ExperimentResult::new(spec);
    let mut above = 0u64;
    for (c, &m) in m_grid.iter().enumerate() {
        let xs = per_trial(k, t, m, trials, cell_seed(seed, c as u64), |n| {
            if k == 2 {
                Ok(x_capped(n, threshold))
            } else {
                let below = exists_fair_with_cuts_with(n, k, threshold.saturating_sub(1), &limits)?;
                Ok(below.map_or(threshold, |w| w.cut_count))
            }
        })?;
        let count = xs.iter().filter(|&&x| x < threshold).count() as u64;
        above += xs.iter().filter(|&&x| x > ceiling).count() as u64;
        let cell = Cell {
            k: Some(k),
            t: Some(t),
            m: Some(m),
            s: Some(threshold),
            n: None,
        };
        result
            .rows
            .push(ResultRow::from_estimate("P(X<s)", cell, &Estimate::wilson(count, trials)));
    }
    result.rows.push(ResultRow::value(
        "above_ceiling",
        Cell::default(),
        S::of_count(above),
        trials * m_grid.len() as u64,
    ));
    fit_rows(&mut result, "P(X<s)");
    Ok(result)
}

/// Spread of the incremental heuristic's cut count across `t`.
pub fn concentration_check<S: Scalar + Serialize>(
    t_grid: &[usize],
    trials: u64,
    seed: u64,
) -> Result<ExperimentResult<S>> {
    check_trials(trials)?;
    check_grid("t", t_grid)?;
    let mut spec = ExperimentSpec::new(ExperimentKind::Concentration, trials, seed, "incremental");
    (spec.k, spec.t, spec.m) = (vec![2], t_grid.to_vec(), vec![1]);
    let mut result = ExperimentResult::new(spec);
    for (c, &t) in t_grid.iter().enumerate() {
        let runs = per_trial(2, t, 1, trials, cell_seed(seed, c as u64), |n| {
            let sol = incremental_two_thief(n)?;
            Ok((sol.cut_count, is_fair(n, &sol.partition)?))
        })?;
        let cuts: Vec<S> = runs.iter().map(|&(x, _)| S::of_count(x as u64)).collect();
        let fair = runs.iter().filter(|r| r.1).count() as u64;
        let max = runs.iter().map(|r| r.0).max().unwrap_or(0);
        let (mean, sd) = mean_and_sd(&cuts);
        let within = if sd > S::zero() {
            cuts.iter()
                .filter(|&&x| ((x - mean) / sd).abs() <= S::of(4.0))
                .count() as u64
        } else {
            trials
        };
        let tf = S::of_count(t as u64);
        let cell = Cell {
            k: Some(2),
            t: Some(t),
            m: Some(1),
            s: None,
            n: None,
        };
        let mean_e = Estimate::mean_of(&cuts);
        let mut over_t = ResultRow::from_estimate("mean_over_t", cell, &mean_e);
        over_t.estimate = mean_e.estimate / tf;
        over_t.ci_low = mean_e.ci_low / tf;
        over_t.ci_high = mean_e.ci_high / tf;
        result.rows.push(ResultRow::from_estimate("mean_cuts", cell, &mean_e));
        result.rows.push(over_t);
        result.rows.push(ResultRow::value("std_cuts", cell, sd, trials));
        result
            .rows
            .push(ResultRow::value("std_over_sqrt_t", cell, sd / tf.sqrt(), trials));
        result
            .rows
            .push(ResultRow::value("max_over_t", cell, S::of_count(max as u64) / tf, trials));
        result
            .rows
            .push(ResultRow::from_estimate("fair_fraction", cell, &Estimate::wilson(fair, trials)));
        result.rows.push(ResultRow::from_estimate(
            "within_4_sd",
            cell,
            &Estimate::wilson(within, trials),
        ));
    }
    Ok(result)
}

/// Cut fraction `cuts / (kt)` of the window/matching heuristic across `k`.
pub fn interval_trend<S: Scalar + Serialize>(
    t: usize,
    c: usize,
    k_grid: &[usize],
    trials: u64,
    seed: u64,
) -> Result<ExperimentResult<S>> {
    check_trials(trials)?;
    check_grid("k", k_grid)?;
    let mut spec = ExperimentSpec::new(ExperimentKind::HeuristicStat, trials, seed, "interval");
    (spec.k, spec.t, spec.m, spec.c) = (k_grid.to_vec(), vec![t], vec![1], Some(c));
    let mut result = ExperimentResult::new(spec);
    for (ci, &k) in k_grid.iter().enumerate() {
        let runs = per_trial(k, t, 1, trials, cell_seed(seed, ci as u64), |n| {
            let sol = interval_hypergraph_partition(n, k, c)?;
            Ok((sol.cut_count, sol.stats.matchings, is_fair(n, &sol.partition)?))
        })?;
        let kt = S::of_count((k * t) as u64);
        let fractions: Vec<S> = runs.iter().map(|r| S::of_count(r.0 as u64) / kt).collect();
        let matchings: Vec<S> = runs.iter().map(|r| S::of_count(r.1 as u64)).collect();
        let fair = runs.iter().filter(|r| r.2).count() as u64;
        let cell = Cell {
            k: Some(k),
            t: Some(t),
            m: Some(1),
            s: None,
            n: None,
        };
        result
            .rows
            .push(ResultRow::from_estimate("cut_fraction", cell, &Estimate::mean_of(&fractions)));
        result
            .rows
            .push(ResultRow::from_estimate("matchings", cell, &Estimate::mean_of(&matchings)));
        result
            .rows
            .push(ResultRow::from_estimate("fair_fraction", cell, &Estimate::wilson(fair, trials)));
    }
    Ok(result)
}

fn curve_rows<S: Scalar + Serialize>(result: &mut ExperimentResult<S>, curve: &NonReturnCurve<S>) {
    let mut scaled = Vec::new();
    for p in &curve.points {
        let cell = Cell {
            t: Some(curve.t),
            s: Some(curve.walks),
            n: Some(p.n),
            ..Cell::default()
        };
        result
            .rows
            .push(ResultRow::from_estimate("nonreturn", cell, &p.estimate));
        if p.n > 1 {
            let log_n = S::of_count(p.n as u64).ln();
            let mut row = ResultRow::from_estimate("nonreturn*ln(N)", cell, &p.estimate);
            row.estimate = p.estimate.estimate * log_n;
            row.ci_low = p.estimate.ci_low * log_n;
            row.ci_high = p.estimate.ci_high * log_n;
            scaled.push(row.estimate);
            result.rows.push(row);
        }
    }
    if !scaled.is_empty() {
        let max = scaled.iter().copied().fold(S::neg_infinity(), S::max);
        let min = scaled.iter().copied().fold(S::infinity(), S::min);
        let ratio = if min > S::zero() { max / min } else { S::infinity() };
        result
            .rows
            .push(ResultRow::value("ratio_max_min", Cell::default(), ratio, curve.trials));
    }
}

/// Non-return probability of sums of `s` two-sided walks along a grid of `N`.
pub fn walk_nonreturn<S: Scalar + Serialize>(
    s: usize,
    n_grid: &[usize],
    trials: u64,
    seed: u64,
) -> Result<(ExperimentResult<S>, NonReturnCurve<S>)> {
    let curve = nonreturn_probability::<S>(s, n_grid, trials, cell_seed(seed, 0))?;
    let mut spec = ExperimentSpec::new(ExperimentKind::Walk, trials, seed, "two-sided");
    (spec.t, spec.s, spec.n) = (vec![curve.t], Some(s), n_grid.to_vec());
    let mut result = ExperimentResult::new(spec);
    curve_rows(&mut result, &curve);
    Ok((result, curve))
}

/// Non-return probability of one difference walk along a grid of step counts: the
/// memoryless model, or the exact conditioned model when `m` is given.
pub fn walk_single<S: Scalar + Serialize>(
    t: usize,
    m: Option<usize>,
    steps: &[usize],
    trials: u64,
    seed: u64,
) -> Result<(ExperimentResult<S>, NonReturnCurve<S>)> {
    let cell = cell_seed(seed, 0);
    let (curve, backend) = match m {
        None => (single_nonreturn::<S>(t, steps, trials, cell)?, "memoryless"),
        Some(m) => (
            single_nonreturn_conditioned::<S>(t, m, steps, trials, cell)?,
            "conditioned",
        ),
    };
    let mut spec = ExperimentSpec::new(ExperimentKind::Walk, trials, seed, backend);
    spec.t = vec![t];
    spec.m = m.into_iter().collect();
    spec.s = Some(1);
    spec.n = steps.to_vec();
    let mut result = ExperimentResult::new(spec);
    curve_rows(&mut result, &curve);
    Ok((result, curve))
}

