//! Distributional checks of the samplers against closed forms and
//! independent Monte Carlo oracles. Fixed seeds; tolerances are stated in
//! standard errors.

use heavyma::harness::{run, ExperimentConfig};
use heavyma::innovations::{
    dprime_iid_exact, dprime_statistic, normal_cdf_pair, sample_path_with, InnovationKind, InnovationSpec,
};
use heavyma::limit::{
    extremal_paths, extremal_values, joint_limit_sample, joint_limit_values, sample_point_set, stable_levy_value,
};
use heavyma::linear::CoefficientSample;
use heavyma::rng::{stream, Domain, StreamKey};
use heavyma::stats::{binomial_std_error, ks_one_sample, ks_two_sample, mean, non_increasing_within, std_error};
use heavyma::tail::TailModel;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

const SEED: u64 = 4_242;

fn within(value: f64, target: f64, se: f64, k: f64) -> bool {
    (value - target).abs() <= k * se
}

#[test]
fn sampler_tail_slope_matches_index() {
    for (case, &(alpha, p)) in [(0.8, 0.7), (1.5, 0.5)].iter().enumerate() {
        let tail = TailModel::new(alpha, p).unwrap();
        let mut rng = stream(SEED, Domain::Fixtures, case as u64);
        let mut abs: Vec<f64> = (0..1_000_000)
            .map(|_| tail.quantile(rng.random_range(f64::EPSILON..1.0)).unwrap().abs())
            .collect();
        abs.sort_by(f64::total_cmp);
        // least squares of log survival on log x over thresholds 1.5 .. 500
        let n = abs.len() as f64;
        let pts: Vec<(f64, f64)> = (0..40)
            .map(|i| 1.5 * (500.0f64 / 1.5).powf(i as f64 / 39.0))
            .map(|x| {
                let above = abs.len() - abs.partition_point(|&v| v <= x);
                (x.ln(), (above as f64 / n).ln())
            })
            .collect();
        let (mx, my) = (
            pts.iter().map(|p| p.0).sum::<f64>() / 40.0,
            pts.iter().map(|p| p.1).sum::<f64>() / 40.0,
        );
        let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
            / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
        assert!((slope + alpha).abs() <= 0.05, "alpha {alpha}: slope {slope}");
    }
}

#[test]
fn iid_marginal_passes_ks() {
    let tail = TailModel::new(0.8, 0.7).unwrap();
    let spec = InnovationSpec::iid(tail);
    let path = sample_path_with(&spec, 1_000_000, 0, 0, &mut stream(SEED, Domain::Innovations, 0)).unwrap();
    let r = ks_one_sample(path.sample(), |x| tail.cdf(x));
    assert!(r.p_value > 0.01, "{r:?}");
}

#[test]
fn copula_marginal_passes_ks_on_thinned_path() {
    // lag-20 thinning leaves correlation 0.5^20 between retained Gaussians
    let tail = TailModel::new(1.2, 0.5).unwrap();
    let spec = InnovationSpec::new(InnovationKind::GaussCopulaAr1 { phi: 0.5 }, tail).unwrap();
    let path = sample_path_with(&spec, 2_000_000, 0, 0, &mut stream(SEED, Domain::Innovations, 1)).unwrap();
    let thinned: Vec<f64> = path.sample().iter().step_by(20).copied().collect();
    let r = ks_one_sample(&thinned, |x| tail.cdf(x));
    assert!(r.p_value > 0.01, "{r:?}");
}

/// Replays the Gaussian driver from a cloned stream: the path must be the
/// probability-integral transform of an AR(1) with the requested coefficient.
#[test]
fn copula_driver_is_ar1_with_requested_correlation() {
    let phi = 0.5;
    let tail = TailModel::new(0.8, 0.5).unwrap();
    let spec = InnovationSpec::new(InnovationKind::GaussCopulaAr1 { phi }, tail).unwrap();
    let rng = stream(SEED, Domain::Innovations, 2);
    let n = 1_000_000;
    let path = sample_path_with(&spec, n, 0, 0, &mut rng.clone()).unwrap();

    let mut replay = rng;
    let mut g: f64 = replay.sample(StandardNormal);
    let mut gs = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            let e: f64 = replay.sample(StandardNormal);
            g = phi * g + (1.0 - phi * phi).sqrt() * e;
        }
        gs.push(g);
    }
    for (i, &gi) in gs.iter().enumerate().step_by(997) {
        let (lo, hi) = normal_cdf_pair(gi);
        assert_eq!(path.sample()[i], tail.quantile_split(lo, hi));
    }
    let m = mean(&gs);
    let var = gs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n as f64;
    let cov = gs.windows(2).map(|w| (w[0] - m) * (w[1] - m)).sum::<f64>() / (n - 1) as f64;
    assert!((cov / var - phi).abs() <= 0.01, "lag-1 correlation {}", cov / var);
}

#[test]
fn copula_uniforms_are_stationary() {
    let tail = TailModel::symmetric(1.5).unwrap();
    let spec = InnovationSpec::new(InnovationKind::GaussCopulaAr1 { phi: 0.9 }, tail).unwrap();
    let reps = 20_000;
    let len = 6;
    // U_i = F(Z_i) recovers the copula uniforms; F is continuous
    let columns: Vec<Vec<f64>> = (0..reps as u64)
        .map(|rep| {
            let path = sample_path_with(&spec, len, 0, 0, &mut stream(SEED, Domain::Innovations, 100 + rep)).unwrap();
            path.sample().iter().map(|&z| tail.cdf(z)).collect()
        })
        .collect();
    for i in 0..len {
        let col: Vec<f64> = columns.iter().map(|c| c[i]).collect();
        let se = (1.0 / 12.0 / reps as f64).sqrt();
        assert!(within(mean(&col), 0.5, se, 4.0), "index {i}: mean {}", mean(&col));
        let var = col.iter().map(|u| (u - 0.5).powi(2)).sum::<f64>() / reps as f64;
        // Var of (U - 1/2)^2 is 1/180
        assert!(within(var, 1.0 / 12.0, (1.0 / 180.0 / reps as f64).sqrt(), 4.0), "index {i}: var {var}");
    }
}

#[test]
fn dprime_iid_closed_form() {
    let tail = TailModel::symmetric(1.0).unwrap();
    assert!((dprime_iid_exact(&tail, 10_000, 10, 1.0).unwrap() - 0.1).abs() < 1e-15);
    assert_eq!(dprime_iid_exact(&tail, 10_000, 10, 1e300).unwrap(), 0.0);
    let est = dprime_statistic(&InnovationSpec::iid(tail), 10_000, 10, 1.0, 4_000, SEED).unwrap();
    assert!(within(est.mean, 0.1, est.std_error, 3.0), "{est:?}");
    let far = dprime_statistic(&InnovationSpec::iid(tail), 10_000, 10, 1e12, 50, SEED).unwrap();
    assert_eq!(far.mean, 0.0);
}

#[test]
fn dprime_copula_decreases_with_n() {
    let tail = TailModel::symmetric(1.0).unwrap();
    let spec = InnovationSpec::new(InnovationKind::GaussCopulaAr1 { phi: 0.5 }, tail).unwrap();
    let est: Vec<_> = [1_000, 10_000, 100_000]
        .iter()
        .map(|&n| dprime_statistic(&spec, n, 10, 1.0, 10_000, SEED).unwrap())
        .collect();
    let values: Vec<f64> = est.iter().map(|e| e.mean).collect();
    let ses: Vec<f64> = est.iter().map(|e| e.std_error).collect();
    assert!(non_increasing_within(&values, &ses, 2.0), "{est:?}");
    assert!(values[2] < values[0], "{est:?}");
}

#[test]
fn point_set_counts_are_poisson() {
    let (alpha, p) = (0.8, 0.7);
    let tail = TailModel::new(alpha, p).unwrap();
    let seeds = 10_000u64;
    let (mut all, mut pos) = (Vec::new(), Vec::new());
    let mut signs = (0usize, 0usize);
    for s in 0..seeds {
        let set = sample_point_set(&tail, 200, &mut stream(SEED, Domain::LimitPoints, s)).unwrap();
        let atoms = set.atoms();
        assert!(atoms.windows(2).all(|w| w[1].magnitude < w[0].magnitude));
        assert_eq!(set.u_min(), atoms.last().unwrap().magnitude);
        all.push(atoms.iter().filter(|a| a.magnitude > 1.0).count() as f64);
        pos.push(atoms.iter().filter(|a| a.magnitude > 0.5 && a.sign > 0.0).count() as f64);
        if signs.1 < 100_000 {
            signs.0 += atoms.iter().filter(|a| a.sign > 0.0).count();
            signs.1 += atoms.len();
        }
    }
    // x = 1: mean x^-alpha = 1; Poisson variance equals the mean
    assert!(within(mean(&all), 1.0, (1.0 / seeds as f64).sqrt(), 3.0), "{}", mean(&all));
    let thinned = p * 0.5f64.powf(-alpha);
    assert!(within(mean(&pos), thinned, (thinned / seeds as f64).sqrt(), 3.0), "{}", mean(&pos));
    let m = mean(&pos);
    let var = pos.iter().map(|c| (c - m).powi(2)).sum::<f64>() / (seeds - 1) as f64;
    // dispersion index of a Poisson count: (k - 1) * var / mean ~ chi-square(k - 1)
    let z = ((seeds - 1) as f64 * var / m - (seeds - 1) as f64) / (2.0 * (seeds - 1) as f64).sqrt();
    assert!(z.abs() <= 3.0, "dispersion z = {z}");
    let frac = signs.0 as f64 / signs.1 as f64;
    assert!(within(frac, p, binomial_std_error(p, signs.1), 3.0), "{frac}");
}

#[test]
fn truncation_does_not_move_a_large_maximum() {
    let tail = TailModel::new(0.8, 0.3).unwrap();
    for s in 0..200 {
        let full = sample_point_set(&tail, 1_000, &mut stream(SEED, Domain::LimitPoints, s)).unwrap();
        let short = sample_point_set(&tail, 100, &mut stream(SEED, Domain::LimitPoints, s)).unwrap();
        assert_eq!(short.atoms(), &full.atoms()[..100]);
        let (m_short, m_full) = (extremal_values(&short, 1.0).0, extremal_values(&full, 1.0).0);
        if m_short > short.u_min() {
            assert_eq!(m_short, m_full);
        }
    }
}

#[test]
fn symmetric_levy_value_has_mean_zero() {
    let tail = TailModel::symmetric(0.7).unwrap();
    let v: Vec<f64> = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let set = sample_point_set(&tail, 2_000, &mut stream(SEED, Domain::LimitPoints, i)).unwrap();
            stable_levy_value(&set, &tail, 1.0).unwrap()
        })
        .collect();
    assert!(within(mean(&v), 0.0, std_error(&v), 3.0), "mean {} se {}", mean(&v), std_error(&v));
}

#[test]
fn levy_increments_are_independent_in_sign() {
    let tail = TailModel::new(0.7, 0.7).unwrap();
    let pairs: Vec<(f64, f64)> = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let set = sample_point_set(&tail, 2_000, &mut stream(SEED, Domain::LimitPoints, 50_000 + i)).unwrap();
            let half = stable_levy_value(&set, &tail, 0.5).unwrap();
            let full = stable_levy_value(&set, &tail, 1.0).unwrap();
            (half.signum(), (full - half).signum())
        })
        .collect();
    let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let (ma, mb) = (mean(&a), mean(&b));
    let n = pairs.len() as f64;
    let cov = pairs.iter().map(|p| (p.0 - ma) * (p.1 - mb)).sum::<f64>() / n;
    let sd = |x: &[f64], m: f64| (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n).sqrt();
    let corr = cov / (sd(&a, ma) * sd(&b, mb));
    assert!(corr.abs() <= 3.0 / n.sqrt(), "correlation {corr}");
}

#[test]
fn joint_max_marginal_closed_form() {
    let (alpha, p) = (0.8, 0.7);
    let tail = TailModel::new(alpha, p).unwrap();
    let c = CoefficientSample::new(vec![2.0, -0.5, 0.25]).unwrap();
    let (cp, cm) = (c.c_plus(), c.c_minus());
    let samples: Vec<f64> = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let set = sample_point_set(&tail, 1_000, &mut stream(SEED, Domain::LimitPoints, 90_000 + i)).unwrap();
            // brute force over the atoms of this single point set
            let brute = set
                .atoms()
                .iter()
                .map(|a| a.magnitude * if a.sign > 0.0 { cp } else { cm })
                .fold(0.0f64, f64::max);
            let (_, m) = joint_limit_values(&set, (c.c_sum(), cp, cm), &tail, 1.0).unwrap();
            assert_eq!(m, brute);
            let path = joint_limit_sample(&set, &c, &tail, 100).unwrap();
            assert_eq!(path.m.eval(1.0).unwrap(), brute);
            brute
        })
        .collect();
    let rate = p * cp.powf(alpha) + (1.0 - p) * cm.powf(alpha);
    let r = ks_one_sample(&samples, |x| if x <= 0.0 { 0.0 } else { (-rate * x.powf(-alpha)).exp() });
    assert!(r.p_value > 0.01, "{r:?}");
}

#[test]
fn positive_coefficients_reduce_to_first_extremal_process() {
    let tail = TailModel::new(0.8, 0.6).unwrap();
    let set = sample_point_set(&tail, 500, &mut stream(SEED, Domain::LimitPoints, 7)).unwrap();
    let one = CoefficientSample::new(vec![1.0]).unwrap();
    let joint = joint_limit_sample(&set, &one, &tail, 50).unwrap();
    let (m1, _) = extremal_paths(&set);
    assert_eq!(joint.m, m1);
}

fn marginal_config(innovations: &str, n_grid: &str, reps: usize, alpha: f64, p: f64, coeffs: &str) -> ExperimentConfig {
    ExperimentConfig::from_json(&format!(
        r#"{{
            "experiment": "marginal_convergence",
            "tail": {{"alpha": {alpha}, "p": {p}}},
            "innovations": {innovations},
            "coefficients": {coeffs},
            "n_grid": {n_grid},
            "reps": {reps},
            "t_grid": [1.0],
            "seed": {SEED}
        }}"#
    ))
    .unwrap()
}

#[test]
fn frechet_marginal_distance_does_not_grow() {
    let cfg = marginal_config(
        r#"{"kind": "iid"}"#,
        "[100, 1000, 10000]",
        1000,
        0.7,
        1.0,
        r#"{"kind": "deterministic", "coeffs": [1]}"#,
    );
    let report = run(&cfg).unwrap();
    let (ks, se): (Vec<f64>, Vec<f64>) = report
        .rows_for("ks_m")
        .map(|r| (r.value, heavyma::stats::ks_distance_std_error(cfg.reps, cfg.limit_reps())))
        .unzip();
    assert!(non_increasing_within(&ks, &se, 2.0), "{ks:?}");
    // the prelimit maximum itself has an exact law; compare it directly
    let raw = report.find_raw("n10000_t1_m").unwrap();
    let r = ks_one_sample(&raw.values, |x| {
        let n = 10_000f64;
        let a = n.powf(1.0 / 0.7);
        if x * a < 1.0 {
            0.0
        } else {
            (1.0 - (x * a).powf(-0.7)).powf(n)
        }
    });
    assert!(r.p_value > 0.01, "{r:?}");
}

#[test]
fn copula_and_iid_share_the_limit() {
    let coeffs = r#"{"kind": "random_bridge", "q": 2}"#;
    let iid = run(&marginal_config(r#"{"kind": "iid"}"#, "[10000]", 2000, 0.8, 0.7, coeffs)).unwrap();
    let ar = run(&marginal_config(
        r#"{"kind": "gauss_copula_ar1", "phi": 0.5}"#,
        "[10000]",
        2000,
        0.8,
        0.7,
        coeffs,
    ))
    .unwrap();
    for name in ["n10000_t1_v", "n10000_t1_m"] {
        let r = ks_two_sample(&iid.find_raw(name).unwrap().values, &ar.find_raw(name).unwrap().values);
        assert!(r.p_value > 0.01, "{name}: {r:?}");
    }
}

#[test]
fn streams_are_keyed_not_sequential() {
    let a = StreamKey::new(1).with(Domain::Innovations).index(3).rng().random::<u64>();
    let b = StreamKey::new(1).with(Domain::Innovations).index(3).rng().random::<u64>();
    let c = StreamKey::new(1).with(Domain::Coefficients).index(3).rng().random::<u64>();
    assert_eq!(a, b);
    assert_ne!(a, c);
}
