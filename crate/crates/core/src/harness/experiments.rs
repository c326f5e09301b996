//! The four Monte Carlo experiments.
//!
//! Random streams: coefficients are keyed by replication and shared across
//! the `n` grid; innovations are keyed by `(n, replication)`; limit samples
//! are keyed by their own index and shared across the grid. Replications run
//! in parallel and are collected in index order, so reports do not depend on
//! the number of worker threads.

use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind};
use super::report::ExperimentReport;
use crate::cadlag::{d_m2, levy_distance, m2_within, product_m2_within, MultiPath, OscillationProfile, StepFunction};
use crate::error::Result;
use crate::innovations::{sample_path_with, InnovationPath, InnovationSpec};
use crate::limit::{joint_limit_values, sample_point_set, truncation_variance};
use crate::linear::{
    build_ma, finite_order_approx, h_event_window, h_events, partial_max_path, partial_sum_path, sample_coeffs,
    small_jump_diagnostic, tilde_paths, CoefficientModel, CoefficientSample, HEvents,
};
use crate::rng::{stream, Domain, StreamKey};
use crate::stats::{
    binomial_std_error, ks_distance_std_error, ks_two_sample, mean, median, median_std_error, non_decreasing_within,
    non_increasing_within, skewness, std_error,
};

/// Interval half-width, in standard errors, for trend checks.
pub const TREND_SLACK: f64 = 2.0;

pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    match cfg.experiment {
        ExperimentKind::MarginalConvergence => run_marginal_convergence(cfg),
        ExperimentKind::Negligibility => run_negligibility(cfg),
        ExperimentKind::M1Counterexample => run_m1_counterexample(cfg),
        ExperimentKind::InfiniteOrder => run_infinite_order(cfg),
    }
}

fn par_reps<T: Send>(reps: usize, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..reps as u64).into_par_iter().map(f).collect()
}

fn coeffs_for(cfg: &ExperimentConfig, rep: u64) -> Result<CoefficientSample> {
    sample_coeffs(&cfg.coefficients, &mut stream(cfg.seed, Domain::Coefficients, rep))
}

fn innovations_for(cfg: &ExperimentConfig, spec: &InnovationSpec, n: usize, rep: u64, pre: usize, post: usize) -> Result<InnovationPath> {
    let mut rng = StreamKey::new(cfg.seed).with(Domain::Innovations).index(n as u64).index(rep).rng();
    sample_path_with(spec, n, pre, post, &mut rng)
}

fn new_report(cfg: &ExperimentConfig) -> ExperimentReport {
    let mut report = ExperimentReport::new(cfg.experiment.name(), cfg.seed);
    report.meta("config", cfg);
    report
}

fn tag(t: f64) -> String {
    format!("{t}")
}

/// `(V_n(t), M_n(t))` at each `t`, straight from the moving average.
fn prelimit_marginals(x: &[f64], a_n: f64, t_grid: &[f64]) -> Vec<(f64, f64)> {
    let n = x.len();
    let mut out = Vec::with_capacity(t_grid.len());
    let (mut sum, mut max) = (0.0, x[0] / a_n);
    let mut i = 0;
    for &t in t_grid {
        let k = ((n as f64 * t).floor() as usize).min(n);
        while i < k {
            let y = x[i] / a_n;
            sum += y;
            max = max.max(y);
            i += 1;
        }
        out.push((sum, max));
    }
    out
}

pub fn run_marginal_convergence(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let tail = cfg.tail_model()?;
    let spec = cfg.innovation_spec()?;
    let mut report = new_report(cfg);
    let t_grid = &cfg.t_grid;

    let limit_reps = cfg.limit_reps();
    let limit: Vec<(Vec<(f64, f64)>, f64)> = par_reps(limit_reps, |j| {
        let points = sample_point_set(&tail, cfg.limit_atoms, &mut stream(cfg.seed, Domain::LimitPoints, j))?;
        let c = sample_coeffs(&cfg.coefficients, &mut stream(cfg.seed, Domain::LimitCoefficients, j))?;
        let triple = (c.c_sum(), c.c_plus(), c.c_minus());
        let vals = t_grid
            .iter()
            .map(|&t| joint_limit_values(&points, triple, &tail, t))
            .collect::<Result<Vec<_>>>()?;
        Ok((vals, points.u_min()))
    })?;
    let worst_floor = limit.iter().map(|l| l.1).fold(0.0f64, f64::max);
    report.meta("limit_atoms", cfg.limit_atoms);
    report.meta("limit_truncation_floor_max", worst_floor);
    report.meta("limit_truncation_variance", truncation_variance(&tail, cfg.limit_atoms));
    report.meta("ks_bonferroni_level", 0.01 / t_grid.len() as f64);

    let limit_v: Vec<Vec<f64>> = (0..t_grid.len()).map(|ti| limit.iter().map(|l| l.0[ti].0).collect()).collect();
    let limit_m: Vec<Vec<f64>> = (0..t_grid.len()).map(|ti| limit.iter().map(|l| l.0[ti].1).collect()).collect();

    let mut ks = vec![(Vec::new(), Vec::new()); t_grid.len()];
    for &n in &cfg.n_grid {
        let a_n = tail.a_n(n as u64)?;
        let samples: Vec<Vec<(f64, f64)>> = par_reps(cfg.reps, |rep| {
            let c = coeffs_for(cfg, rep)?;
            let z = innovations_for(cfg, &spec, n, rep, c.order(), 0)?;
            let x = build_ma(&c, &z)?;
            Ok(prelimit_marginals(x.values(), a_n, t_grid))
        })?;
        for (ti, &t) in t_grid.iter().enumerate() {
            let v: Vec<f64> = samples.iter().map(|s| s[ti].0).collect();
            let m: Vec<f64> = samples.iter().map(|s| s[ti].1).collect();
            let se = ks_distance_std_error(v.len(), limit_v[ti].len());
            let kv = ks_two_sample(&v, &limit_v[ti]);
            let km = ks_two_sample(&m, &limit_m[ti]);
            report.row(n, None, Some(t), "ks_v", kv.statistic, Some(se), cfg.reps);
            report.row(n, None, Some(t), "ks_m", km.statistic, Some(se), cfg.reps);
            report.row(n, None, Some(t), "ks_p_v", kv.p_value, None, cfg.reps);
            report.row(n, None, Some(t), "ks_p_m", km.p_value, None, cfg.reps);
            report.row(n, None, Some(t), "mean_v", mean(&v), Some(std_error(&v)), cfg.reps);
            report.row(n, None, Some(t), "skewness_v", skewness(&v), None, cfg.reps);
            ks[ti].0.push(kv.statistic);
            ks[ti].1.push(km.statistic);
            report.raw_sample(format!("n{n}_t{}_v", tag(t)), v);
            report.raw_sample(format!("n{n}_t{}_m", tag(t)), m);
        }
    }
    for (ti, &t) in t_grid.iter().enumerate() {
        report.raw_sample(format!("limit_t{}_v", tag(t)), limit_v[ti].clone());
        report.raw_sample(format!("limit_t{}_m", tag(t)), limit_m[ti].clone());
        let ses = vec![ks_distance_std_error(cfg.reps, limit_reps); cfg.n_grid.len()];
        for (coord, values) in [("v", &ks[ti].0), ("m", &ks[ti].1)] {
            report.check(
                format!("ks_{coord}_non_increasing_t{}", tag(t)),
                non_increasing_within(values, &ses, TREND_SLACK),
                format!("KS distances over n: {values:?}"),
            );
        }
    }
    Ok(report)
}

fn exceed_frequency(flags: &[bool]) -> (f64, f64) {
    let f = flags.iter().filter(|&&b| b).count() as f64 / flags.len() as f64;
    (f, binomial_std_error(f, flags.len()))
}

struct NegligibilityRep {
    v_exceeds: bool,
    m_exceeds: bool,
    d_m: f64,
    h: HEvents,
}

pub fn run_negligibility(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let tail = cfg.tail_model()?;
    let spec = cfg.innovation_spec()?;
    let mut report = new_report(cfg);
    let delta = cfg.delta;
    let (mut freq_v, mut se_v, mut freq_m, mut se_m) = (vec![], vec![], vec![], vec![]);
    let mut violations = 0usize;
    for &n in &cfg.n_grid {
        let a_n = tail.a_n(n as u64)?;
        let reps: Vec<NegligibilityRep> = par_reps(cfg.reps, |rep| {
            let c = coeffs_for(cfg, rep)?;
            let (pre, post) = h_event_window(c.order());
            let z = innovations_for(cfg, &spec, n, rep, pre, post)?;
            let x = build_ma(&c, &z)?;
            let v = partial_sum_path(x.values(), a_n)?;
            let m = partial_max_path(x.values(), a_n)?;
            let (vt, mt) = tilde_paths(&z, &c, a_n)?;
            Ok(NegligibilityRep {
                v_exceeds: !m2_within(&v, &vt, delta),
                m_exceeds: !m2_within(&m, &mt, delta),
                d_m: d_m2(&m, &mt, cfg.tol)?,
                h: h_events(&z, &c, a_n, delta)?,
            })
        })?;
        let v_flags: Vec<bool> = reps.iter().map(|r| r.v_exceeds).collect();
        let m_flags: Vec<bool> = reps.iter().map(|r| r.m_exceeds).collect();
        let h_flags: Vec<bool> = reps.iter().map(|r| r.h.any()).collect();
        violations += reps.iter().filter(|r| r.m_exceeds && !r.h.any()).count();
        let (fv, sv) = exceed_frequency(&v_flags);
        let (fm, sm) = exceed_frequency(&m_flags);
        let (fh, sh) = exceed_frequency(&h_flags);
        report.row(n, None, None, "freq_v_exceeds", fv, Some(sv), cfg.reps);
        report.row(n, None, None, "freq_m_exceeds", fm, Some(sm), cfg.reps);
        report.row(n, None, None, "freq_h_union", fh, Some(sh), cfg.reps);
        for (name, pick) in [
            ("freq_h_boundary", (|h: &HEvents| h.boundary) as fn(&HEvents) -> bool),
            ("freq_h_close_pair", |h: &HEvents| h.close_pair),
            ("freq_h_pair_and_separate", |h: &HEvents| h.pair_and_separate),
        ] {
            let flags: Vec<bool> = reps.iter().map(|r| pick(&r.h)).collect();
            let (f, s) = exceed_frequency(&flags);
            report.row(n, None, None, name, f, Some(s), cfg.reps);
        }
        let d: Vec<f64> = reps.iter().map(|r| r.d_m).collect();
        report.row(n, None, None, "mean_d_m2_m", mean(&d), Some(std_error(&d)), cfg.reps);
        report.row(n, None, None, "median_d_m2_m", median(&d), Some(median_std_error(&d)), cfg.reps);
        report.raw_sample(format!("n{n}_d_m2_m"), d);
        freq_v.push(fv);
        se_v.push(sv);
        freq_m.push(fm);
        se_m.push(sm);
    }
    report.check(
        "freq_m_non_increasing",
        non_increasing_within(&freq_m, &se_m, TREND_SLACK),
        format!("P(d_M2(M_n, M~_n) > delta) over n: {freq_m:?}"),
    );
    report.check(
        "freq_v_non_increasing",
        non_increasing_within(&freq_v, &se_v, TREND_SLACK),
        format!("P(d_M2(V_n, V~_n) > delta) over n: {freq_v:?}"),
    );
    report.check(
        "h_events_cover_exceedances",
        violations == 0,
        format!("{violations} replications exceed delta with no covering event"),
    );
    Ok(report)
}

/// Sign pattern of a deterministic coefficient list.
fn deterministic_signs(model: &CoefficientModel) -> Option<bool> {
    match model {
        CoefficientModel::Deterministic { coeffs } => {
            let mixed = coeffs.iter().any(|&c| c > 0.0) && coeffs.iter().any(|&c| c < 0.0);
            Some(mixed)
        }
        _ => None,
    }
}

pub fn run_m1_counterexample(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let tail = cfg.tail_model()?;
    let spec = cfg.innovation_spec()?;
    let mut report = new_report(cfg);
    let (mut med2, mut se2, mut med1, mut se1) = (vec![], vec![], vec![], vec![]);
    let mut ordered = true;
    let mut last_ratio = f64::NAN;
    for &n in &cfg.n_grid {
        let a_n = tail.a_n(n as u64)?;
        let pairs: Vec<(f64, f64)> = par_reps(cfg.reps, |rep| {
            let c = coeffs_for(cfg, rep)?;
            let z = innovations_for(cfg, &spec, n, rep, c.order(), 0)?;
            let x = build_ma(&c, &z)?;
            let v = partial_sum_path(x.values(), a_n)?;
            let (vt, _) = tilde_paths(&z, &c, a_n)?;
            let d2 = d_m2(&v, &vt, cfg.tol)?;
            let lambda = levy_distance(
                &OscillationProfile::of(&v).log_scale(),
                &OscillationProfile::of(&vt).log_scale(),
                cfg.tol,
            )?;
            Ok((d2, d2 + lambda))
        })?;
        let d2: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let d1: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        ordered &= pairs.iter().all(|p| p.1 >= p.0);
        let (m2v, m1v) = (median(&d2), median(&d1));
        report.row(n, None, None, "median_d_m2", m2v, Some(median_std_error(&d2)), cfg.reps);
        report.row(n, None, None, "median_d_m1_star", m1v, Some(median_std_error(&d1)), cfg.reps);
        report.row(n, None, None, "mean_d_m2", mean(&d2), Some(std_error(&d2)), cfg.reps);
        report.row(n, None, None, "mean_d_m1_star", mean(&d1), Some(std_error(&d1)), cfg.reps);
        med2.push(m2v);
        se2.push(median_std_error(&d2));
        med1.push(m1v);
        se1.push(median_std_error(&d1));
        last_ratio = m1v / m2v;
        report.raw_sample(format!("n{n}_d_m2"), d2);
        report.raw_sample(format!("n{n}_d_m1_star"), d1);
    }
    report.check("m1_star_dominates_m2", ordered, "d_M1* >= d_M2 on every replication");
    let m2_decreases = med2.windows(2).all(|w| w[1] < w[0]);
    match deterministic_signs(&cfg.coefficients) {
        Some(true) => {
            report.check("median_d_m2_decreasing", m2_decreases, format!("medians over n: {med2:?}"));
            report.check(
                "median_d_m1_star_not_decreasing",
                non_decreasing_within(&med1, &se1, TREND_SLACK),
                format!("medians over n: {med1:?}"),
            );
            report.check(
                "m1_star_to_m2_ratio",
                last_ratio >= 2.0,
                format!("median ratio at the largest n: {last_ratio}"),
            );
        }
        Some(false) => {
            report.check("median_d_m2_decreasing", m2_decreases, format!("medians over n: {med2:?}"));
            report.check(
                "median_d_m1_star_decreasing",
                med1.windows(2).all(|w| w[1] < w[0]),
                format!("medians over n: {med1:?}"),
            );
        }
        None => {}
    }
    report.meta("median_se_d_m2", &se2);
    Ok(report)
}

pub fn run_infinite_order(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let tail = cfg.tail_model()?;
    let spec = cfg.innovation_spec()?;
    let mut report = new_report(cfg);
    let q_grid = &cfg.q_grid;
    let support = cfg.coefficients.len() - 1;
    let pre = support.max(*q_grid.last().expect("validated q grid"));
    report.meta("truncation", support);
    let small_jump_u: Vec<f64> = if tail.alpha() >= 1.0 { cfg.u_grid.clone() } else { Vec::new() };

    for &n in &cfg.n_grid {
        let a_n = tail.a_n(n as u64)?;
        let per_rep: Vec<(Vec<bool>, Vec<f64>)> = par_reps(cfg.reps, |rep| {
            let c = coeffs_for(cfg, rep)?;
            let z = innovations_for(cfg, &spec, n, rep, pre, 0)?;
            let x = build_ma(&c, &z)?;
            let full = MultiPath::new(vec![partial_sum_path(x.values(), a_n)?, partial_max_path(x.values(), a_n)?])?;
            let flags = q_grid
                .iter()
                .map(|&q| {
                    let xq = build_ma(&finite_order_approx(&c, q)?, &z)?;
                    let approx: Vec<StepFunction> = vec![partial_sum_path(xq.values(), a_n)?, partial_max_path(xq.values(), a_n)?];
                    Ok(!product_m2_within(&full, &MultiPath::new(approx)?, cfg.epsilon)?)
                })
                .collect::<Result<Vec<bool>>>()?;
            let diag = small_jump_u
                .iter()
                .map(|&u| small_jump_diagnostic(&z, &tail, a_n, u))
                .collect::<Result<Vec<f64>>>()?;
            Ok((flags, diag))
        })?;
        let (mut freqs, mut ses) = (vec![], vec![]);
        for (qi, &q) in q_grid.iter().enumerate() {
            let flags: Vec<bool> = per_rep.iter().map(|r| r.0[qi]).collect();
            let (f, s) = exceed_frequency(&flags);
            report.row(n, Some(q), None, "freq_product_m2_exceeds", f, Some(s), cfg.reps);
            freqs.push(f);
            ses.push(s);
        }
        report.check(
            format!("freq_non_increasing_in_q_n{n}"),
            non_increasing_within(&freqs, &ses, TREND_SLACK) && freqs.last() <= freqs.first(),
            format!("exceedance frequencies over q: {freqs:?}"),
        );
        if !small_jump_u.is_empty() {
            let (mut means, mut sds) = (vec![], vec![]);
            for (ui, &u) in small_jump_u.iter().enumerate() {
                let d: Vec<f64> = per_rep.iter().map(|r| r.1[ui]).collect();
                report.row(n, None, None, &format!("small_jump_max_u{u}"), mean(&d), Some(std_error(&d)), cfg.reps);
                means.push(mean(&d));
                sds.push(std_error(&d));
            }
            report.check(
                format!("small_jump_shrinks_with_u_n{n}"),
                non_decreasing_within(&means, &sds, TREND_SLACK),
                format!("mean small-jump maxima over increasing u: {means:?}"),
            );
        }
    }
    Ok(report)
}
