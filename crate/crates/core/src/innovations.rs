//! Innovation sequences: i.i.d. Pareto draws and a stationary Gaussian-copula
//! AR(1) sequence with the same marginal law, plus a Monte Carlo estimate of
//! the short-lag joint exceedance sum that the anti-clustering condition
//! requires to vanish.
//!
//! Both kinds draw one standard normal per index and push it through the
//! normal CDF and the Pareto quantile, so the AR(1) kind with `phi = 0`
//! reproduces the i.i.d. kind bit for bit.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{Domain, StreamKey};
use crate::tail::TailModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InnovationKind {
    Iid,
    /// `Z_i = F^{-1}(Phi(G_i))` with `G` a stationary AR(1), `corr(G_0, G_k) = phi^k`.
    GaussCopulaAr1 { phi: f64 },
}

impl InnovationKind {
    pub fn validate(&self) -> Result<()> {
        if let InnovationKind::GaussCopulaAr1 { phi } = *self {
            if !(0.0..1.0).contains(&phi) {
                return Err(Error::param("phi", format!("must lie in [0, 1), got {phi}")));
            }
        }
        Ok(())
    }

    fn phi(&self) -> f64 {
        match *self {
            InnovationKind::Iid => 0.0,
            InnovationKind::GaussCopulaAr1 { phi } => phi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnovationSpec {
    pub kind: InnovationKind,
    pub tail: TailModel,
}

impl InnovationSpec {
    pub fn new(kind: InnovationKind, tail: TailModel) -> Result<Self> {
        kind.validate()?;
        Ok(InnovationSpec { kind, tail })
    }

    pub fn iid(tail: TailModel) -> Self {
        InnovationSpec {
            kind: InnovationKind::Iid,
            tail,
        }
    }
}

/// Standard normal CDF as the pair `(Phi(x), 1 - Phi(x))`, each accurate in
/// its own tail.
#[inline]
pub fn normal_cdf_pair(x: f64) -> (f64, f64) {
    let c = 0.5 * libm::erfc(x.abs() * std::f64::consts::FRAC_1_SQRT_2);
    if x < 0.0 {
        (c, 1.0 - c)
    } else {
        (1.0 - c, c)
    }
}

/// `Z_i` for `i` in `1 - pre ..= n + post`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnovationPath {
    values: Vec<f64>,
    pre: usize,
    n: usize,
}

impl InnovationPath {
    /// Wraps explicit values; `values[0]` is `Z_{1 - pre}`.
    pub fn from_values(values: Vec<f64>, pre: usize, n: usize) -> Result<Self> {
        if values.len() < pre + n {
            return Err(Error::param(
                "values",
                format!("need at least pre + n = {} values, got {}", pre + n, values.len()),
            ));
        }
        Ok(InnovationPath { values, pre, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pre(&self) -> usize {
        self.pre
    }

    pub fn post(&self) -> usize {
        self.values.len() - self.pre - self.n
    }

    /// `Z_i`; panics outside the stored window.
    #[inline]
    pub fn at(&self, i: i64) -> f64 {
        self.values[(i + self.pre as i64 - 1) as usize]
    }

    /// `Z_1, ..., Z_n`.
    pub fn sample(&self) -> &[f64] {
        &self.values[self.pre..self.pre + self.n]
    }

    /// The whole stored window starting at `Z_{1 - pre}`.
    pub fn window(&self) -> &[f64] {
        &self.values
    }

    pub fn first_index(&self) -> i64 {
        1 - self.pre as i64
    }
}

/// Draws `Z_{1-pre}, ..., Z_{n+post}` from `rng`.
pub fn sample_path_with<R: Rng + ?Sized>(
    spec: &InnovationSpec,
    n: usize,
    pre: usize,
    post: usize,
    rng: &mut R,
) -> Result<InnovationPath> {
    if n < 1 {
        return Err(Error::param("n", "must be at least 1"));
    }
    spec.kind.validate()?;
    let len = pre + n + post;
    let phi = spec.kind.phi();
    let innov_scale = (1.0 - phi * phi).sqrt();
    let mut values = Vec::with_capacity(len);
    let mut g: f64 = rng.sample(StandardNormal);
    for idx in 0..len {
        if idx > 0 {
            let eps: f64 = rng.sample(StandardNormal);
            g = phi * g + innov_scale * eps;
        }
        let (lower, upper) = normal_cdf_pair(g);
        values.push(spec.tail.quantile_split(lower, upper));
    }
    Ok(InnovationPath { values, pre, n })
}

/// Reproducible path keyed by `seed` alone.
pub fn sample_path(spec: &InnovationSpec, n: usize, pre: usize, seed: u64) -> Result<InnovationPath> {
    let mut rng = StreamKey::new(seed).with(Domain::Innovations).rng();
    sample_path_with(spec, n, pre, 0, &mut rng)
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub reps: usize,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let reps = xs.len();
        let mean = xs.iter().sum::<f64>() / reps as f64;
        let var = if reps > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (reps - 1) as f64
        } else {
            0.0
        };
        Estimate {
            mean,
            std_error: (var / reps as f64).sqrt(),
            reps,
        }
    }
}

/// Number of pairs `(s, s + i)` with `1 <= s <= n`, `1 <= i <= window`, both
/// exceeding `level` in absolute value. `z` must hold `Z_1..Z_{n + window}`.
pub fn exceedance_pairs(z: &[f64], n: usize, window: usize, level: f64) -> u64 {
    assert!(z.len() >= n + window);
    let mut prefix = Vec::with_capacity(z.len() + 1);
    prefix.push(0u64);
    for v in z {
        prefix.push(prefix.last().unwrap() + u64::from(v.abs() > level));
    }
    (0..n)
        .filter(|&s| z[s].abs() > level)
        .map(|s| prefix[s + window + 1] - prefix[s + 1])
        .sum()
}

/// Estimates `n * sum_{i=1}^{floor(n/k)} P(|Z_0| > x a_n, |Z_i| > x a_n)`
/// by the mean number of exceedance pairs over `reps` paths of length
/// `n + floor(n/k)`.
pub fn dprime_statistic(
    spec: &InnovationSpec,
    n: usize,
    k: usize,
    x: f64,
    reps: usize,
    seed: u64,
) -> Result<Estimate> {
    if k < 1 {
        return Err(Error::param("k", "must be at least 1"));
    }
    if reps < 1 {
        return Err(Error::param("reps", "must be at least 1"));
    }
    if !(x > 0.0) {
        return Err(Error::param("x", format!("must be positive, got {x}")));
    }
    use rayon::prelude::*;
    let window = n / k;
    let level = x * spec.tail.a_n(n as u64)?;
    let key = StreamKey::new(seed).with(Domain::Diagnostics);
    let counts: Vec<f64> = (0..reps as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = key.index(rep).rng();
            let path = sample_path_with(spec, n + window, 0, 0, &mut rng)?;
            Ok(exceedance_pairs(path.sample(), n, window, level) as f64)
        })
        .collect::<Result<_>>()?;
    Ok(Estimate::from_samples(&counts))
}

/// Exact value of the statistic for i.i.d. innovations:
/// `n * floor(n/k) * P(|Z| > x a_n)^2`.
pub fn dprime_iid_exact(tail: &TailModel, n: usize, k: usize, x: f64) -> Result<f64> {
    if k < 1 {
        return Err(Error::param("k", "must be at least 1"));
    }
    let pr = tail.abs_tail(x * tail.a_n(n as u64)?);
    Ok(n as f64 * (n / k) as f64 * pr * pr)
}
