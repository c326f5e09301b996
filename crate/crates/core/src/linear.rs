//! Random coefficients, moving averages and the pre-limit paths built from
//! them: partial sums, partial maxima, their single-coefficient
//! approximations, and the truncated sums of the innovations.

use rand::Rng;
use rand_distr::{Distribution, LogNormal};
use serde::{Deserialize, Serialize};

use crate::cadlag::{MultiPath, StepFunction};
use crate::error::{Error, Result};
use crate::innovations::InnovationPath;
use crate::tail::TailModel;

/// Law of the common scale factor `S` of a random coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScaleLaw {
    /// `S = 1`.
    Unit,
    /// Random sign times `LogNormal(0, sigma)`.
    SignedLogNormal { sigma: f64 },
}

impl Default for ScaleLaw {
    fn default() -> Self {
        ScaleLaw::SignedLogNormal { sigma: 1.0 }
    }
}

impl ScaleLaw {
    fn validate(&self) -> Result<()> {
        if let ScaleLaw::SignedLogNormal { sigma } = *self {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(Error::param("sigma", format!("must be positive, got {sigma}")));
            }
        }
        Ok(())
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            ScaleLaw::Unit => 1.0,
            ScaleLaw::SignedLogNormal { sigma } => {
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                let mag = LogNormal::new(0.0, sigma).expect("validated sigma").sample(rng);
                sign * mag
            }
        }
    }
}

/// Truncation level of a geometric sequence: `rho^J <= 1e-8`.
pub fn geometric_truncation(rho: f64) -> usize {
    ((1e-8f64).ln() / rho.ln()).ceil() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientModel {
    Deterministic {
        coeffs: Vec<f64>,
    },
    /// `C_s = S (R_s - R_{s-1})` with `R_{-1} = 0`, `R_q = 1` and the other
    /// `R_s` i.i.d. uniform, so every partial-sum ratio is some `R_s`.
    RandomBridge {
        q: usize,
        #[serde(default)]
        scale: ScaleLaw,
    },
    /// `C_j = S (1 - rho) rho^j`, kept for `j <= J`.
    InfiniteGeometric {
        rho: f64,
        #[serde(default)]
        scale: ScaleLaw,
        #[serde(default)]
        truncation: Option<usize>,
    },
}

impl CoefficientModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            CoefficientModel::Deterministic { coeffs } => {
                CoefficientSample::new(coeffs.clone())?;
            }
            CoefficientModel::RandomBridge { q, scale } => {
                if *q < 1 {
                    return Err(Error::param("q", "must be at least 1"));
                }
                scale.validate()?;
            }
            CoefficientModel::InfiniteGeometric { rho, scale, truncation } => {
                if !(*rho > 0.0 && *rho < 1.0) {
                    return Err(Error::param("rho", format!("must lie in (0, 1), got {rho}")));
                }
                if *truncation == Some(0) {
                    return Err(Error::param("truncation", "must be at least 1"));
                }
                scale.validate()?;
            }
        }
        Ok(())
    }

    /// Number of coefficients every sample has.
    pub fn len(&self) -> usize {
        match self {
            CoefficientModel::Deterministic { coeffs } => coeffs.len(),
            CoefficientModel::RandomBridge { q, .. } => q + 1,
            CoefficientModel::InfiniteGeometric { rho, truncation, .. } => {
                truncation.unwrap_or_else(|| geometric_truncation(*rho)) + 1
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, CoefficientModel::InfiniteGeometric { .. })
    }
}

/// Realized coefficients `C_0..C_J` with their derived constants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSample {
    coeffs: Vec<f64>,
    sum: f64,
    plus: f64,
    minus: f64,
}

impl CoefficientSample {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::param("coeffs", "must contain at least one coefficient"));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::param("coeffs", format!("coefficient {c} is not finite")));
        }
        let sum = coeffs.iter().sum();
        let plus = coeffs.iter().fold(0.0f64, |m, &c| m.max(c));
        let minus = coeffs.iter().fold(0.0f64, |m, &c| m.max(-c));
        Ok(CoefficientSample {
            coeffs,
            sum,
            plus,
            minus,
        })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Largest lag with a stored coefficient.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `C = sum_j C_j`.
    pub fn c_sum(&self) -> f64 {
        self.sum
    }

    pub fn c_plus(&self) -> f64 {
        self.plus
    }

    pub fn c_minus(&self) -> f64 {
        self.minus
    }

    /// `C_+ v C_-`.
    pub fn c_star(&self) -> f64 {
        self.plus.max(self.minus)
    }

    /// `sum_{j >= q} C_j` over the stored coefficients.
    pub fn tail_sum(&self, q: usize) -> f64 {
        self.coeffs.iter().skip(q).sum()
    }

    pub fn scaled(&self, a: f64) -> CoefficientSample {
        CoefficientSample::new(self.coeffs.iter().map(|c| a * c).collect()).expect("finite scaling")
    }
}

/// `S (R_s - R_{s-1})` for `R = (ratios..., 1)` and `R_{-1} = 0`.
pub fn bridge_coeffs(ratios: &[f64], scale: f64) -> Result<CoefficientSample> {
    if let Some(r) = ratios.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(Error::param("ratios", format!("{r} is outside [0, 1]")));
    }
    let mut prev = 0.0;
    let mut coeffs = Vec::with_capacity(ratios.len() + 1);
    for &r in ratios.iter().chain(std::iter::once(&1.0)) {
        coeffs.push(scale * (r - prev));
        prev = r;
    }
    CoefficientSample::new(coeffs)
}

pub fn sample_coeffs<R: Rng + ?Sized>(model: &CoefficientModel, rng: &mut R) -> Result<CoefficientSample> {
    model.validate()?;
    match model {
        CoefficientModel::Deterministic { coeffs } => CoefficientSample::new(coeffs.clone()),
        CoefficientModel::RandomBridge { q, scale } => {
            let s = scale.draw(rng);
            let ratios: Vec<f64> = (0..*q).map(|_| rng.random::<f64>()).collect();
            bridge_coeffs(&ratios, s)
        }
        CoefficientModel::InfiniteGeometric { rho, scale, .. } => {
            let s = scale.draw(rng);
            let coeffs = (0..model.len()).map(|j| s * (1.0 - rho) * rho.powi(j as i32)).collect();
            CoefficientSample::new(coeffs)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialSumCheck {
    pub holds: bool,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl PartialSumCheck {
    /// The ratio farthest outside `[0, 1]`, or the nearer extreme if none is.
    pub fn worst_ratio(&self) -> f64 {
        if -self.min_ratio >= self.max_ratio - 1.0 {
            self.min_ratio
        } else {
            self.max_ratio
        }
    }
}

/// Whether `0 <= (C_0 + ... + C_s) / C <= 1` for every `s`, with `1e-12` slack.
pub fn check_partial_sum_condition(coeffs: &CoefficientSample) -> Result<PartialSumCheck> {
    let c = coeffs.c_sum();
    if c == 0.0 {
        return Err(Error::DegenerateCoefficients);
    }
    let mut cum = 0.0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &x in coeffs.coeffs() {
        cum += x;
        let r = cum / c;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    const SLACK: f64 = 1e-12;
    Ok(PartialSumCheck {
        holds: lo >= -SLACK && hi <= 1.0 + SLACK,
        min_ratio: lo,
        max_ratio: hi,
    })
}

/// Coefficients `(C_0, ..., C_{q-1}, sum_{j >= q} C_j)` of the order-`q`
/// approximation; zero-padded when `q` exceeds the stored support.
pub fn finite_order_approx(coeffs: &CoefficientSample, q: usize) -> Result<CoefficientSample> {
    if q < 1 {
        return Err(Error::param("q", "must be at least 1"));
    }
    let c = coeffs.coeffs();
    let mut out: Vec<f64> = (0..q).map(|j| c.get(j).copied().unwrap_or(0.0)).collect();
    out.push(coeffs.tail_sum(q));
    CoefficientSample::new(out)
}

/// `X_1, ..., X_n` of a moving average.
#[derive(Debug, Clone, PartialEq)]
pub struct MaPath {
    values: Vec<f64>,
}

impl MaPath {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }
}

/// `X_i = sum_j C_j Z_{i-j}` for `i = 1..n`.
pub fn build_ma(coeffs: &CoefficientSample, z: &InnovationPath) -> Result<MaPath> {
    let order = coeffs.order();
    if z.pre() < order {
        return Err(Error::InsufficientHistory {
            needed: order,
            available: z.pre(),
        });
    }
    let c = coeffs.coeffs();
    let w = z.window();
    // Z_i sits at w[base + i - 1].
    let base = z.pre();
    let values = (1..=z.n())
        .map(|i| {
            let at = base + i - 1;
            let mut acc = c[0] * w[at];
            for (j, &cj) in c.iter().enumerate().skip(1) {
                acc += cj * w[at - j];
            }
            acc
        })
        .collect();
    Ok(MaPath { values })
}

#[inline]
fn grid_time(i: usize, n: usize) -> f64 {
    i as f64 / n as f64
}

fn check_scale(a_n: f64) -> Result<()> {
    if a_n > 0.0 && a_n.is_finite() {
        Ok(())
    } else {
        Err(Error::param("a_n", format!("must be positive, got {a_n}")))
    }
}

/// `t -> sum_{i <= nt} x_i / a_n`, jumping at `i / n`.
pub fn partial_sum_path(x: &[f64], a_n: f64) -> Result<StepFunction> {
    check_scale(a_n)?;
    let n = x.len();
    let mut cum = 0.0;
    let jumps = x.iter().enumerate().map(|(k, &v)| {
        cum += v / a_n;
        (grid_time(k + 1, n), cum)
    });
    Ok(StepFunction::from_sorted_unchecked(0.0, jumps))
}

/// Running maximum of `x_i / a_n`, equal to `x_1 / a_n` before `1 / n`.
pub fn partial_max_path(x: &[f64], a_n: f64) -> Result<StepFunction> {
    check_scale(a_n)?;
    running_max(x.iter().map(|&v| v / a_n), x.len())
}

fn running_max(values: impl Iterator<Item = f64>, n: usize) -> Result<StepFunction> {
    let mut values = values.peekable();
    let Some(&first) = values.peek() else {
        return Err(Error::param("n", "path must have at least one value"));
    };
    let mut best = first;
    let jumps = values.enumerate().map(|(k, v)| {
        best = best.max(v);
        (grid_time(k + 1, n), best)
    });
    Ok(StepFunction::from_sorted_unchecked(first, jumps))
}

/// `(V~_n, M~_n)`: the partial sums of `C Z_i / a_n` and the running maximum
/// of `|Z_i| / a_n (C_+ 1{Z_i > 0} + C_- 1{Z_i < 0})`, the latter equal to its
/// `i = 1` value before `1 / n`.
pub fn tilde_paths(z: &InnovationPath, coeffs: &CoefficientSample, a_n: f64) -> Result<(StepFunction, StepFunction)> {
    check_scale(a_n)?;
    let zs = z.sample();
    let n = zs.len();
    let c = coeffs.c_sum();
    let mut cum = 0.0;
    let v = StepFunction::from_sorted_unchecked(
        0.0,
        zs.iter().enumerate().map(|(k, &zi)| {
            cum += c * zi / a_n;
            (grid_time(k + 1, n), cum)
        }),
    );
    let (cp, cm) = (coeffs.c_plus(), coeffs.c_minus());
    let weighted = zs.iter().map(|&zi| {
        let w = if zi > 0.0 {
            cp
        } else if zi < 0.0 {
            cm
        } else {
            0.0
        };
        zi.abs() / a_n * w
    });
    let m = running_max(weighted, n)?;
    Ok((v, m))
}

/// Truncated partial sums, one-sided running maxima, and the number of
/// summands, computed directly from the innovations:
/// `(sum_{i<=nt} y_i 1{|y_i| > u}, max_{i<=nt} y_i^+, max_{i<=nt} y_i^-)` with
/// `y_i = Z_i / a_n` and empty maxima equal to zero.
pub fn empirical_sum_max(z: &InnovationPath, a_n: f64, u: f64) -> Result<MultiPath> {
    check_scale(a_n)?;
    if !(u > 0.0) {
        return Err(Error::param("u", format!("must be positive, got {u}")));
    }
    let zs = z.sample();
    let n = zs.len();
    let (mut sum, mut pos, mut neg) = (0.0f64, 0.0f64, 0.0f64);
    let (mut js, mut jp, mut jn) = (Vec::new(), Vec::new(), Vec::new());
    for (k, &zi) in zs.iter().enumerate() {
        let t = grid_time(k + 1, n);
        let y = zi / a_n;
        if y.abs() > u {
            sum += y;
            js.push((t, sum));
        }
        if y > 0.0 && y > pos {
            pos = y;
            jp.push((t, pos));
        }
        if y < 0.0 && -y > neg {
            neg = -y;
            jn.push((t, neg));
        }
    }
    MultiPath::new(vec![
        StepFunction::from_sorted_unchecked(0.0, js),
        StepFunction::from_sorted_unchecked(0.0, jp),
        StepFunction::from_sorted_unchecked(0.0, jn),
    ])
}

/// `sum_{i<=nt} (Z_i / a_n) 1{|Z_i| / a_n > u} - floor(nt) b_n^(u)`.
pub fn truncated_centered_sum(z: &InnovationPath, tail: &TailModel, a_n: f64, u: f64) -> Result<StepFunction> {
    check_scale(a_n)?;
    if !(u > 0.0 && u <= 1.0) {
        return Err(Error::Domain {
            what: "u",
            value: u,
            domain: "(0, 1]",
        });
    }
    let zs = z.sample();
    let n = zs.len();
    let b = tail.centering_b_n(n as u64, u)?;
    let mut cum = 0.0;
    let jumps = zs.iter().enumerate().map(|(k, &zi)| {
        let y = zi / a_n;
        if y.abs() > u {
            cum += y;
        }
        (grid_time(k + 1, n), cum - (k + 1) as f64 * b)
    });
    Ok(StepFunction::from_sorted_unchecked(0.0, jumps))
}

/// Indicators of the three events that together cover
/// `{d_M2(M~_n, M_n) > delta}` for an order-`q` moving average.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct HEvents {
    /// A large innovation near either end of the sample.
    pub boundary: bool,
    /// Two large innovations within `q` steps, one of them inside `1..=n`.
    pub close_pair: bool,
    /// A close pair sharing a window with a third, separate large innovation.
    pub pair_and_separate: bool,
}

impl HEvents {
    pub fn any(&self) -> bool {
        self.boundary || self.close_pair || self.pair_and_separate
    }
}

/// Innovation window needed by [`h_events`]: `(pre, post)`.
pub fn h_event_window(q: usize) -> (usize, usize) {
    (q + 1, q)
}

/// Evaluates the events with threshold `delta / (4 (q + 1))` on
/// `C_* |Z_l| / a_n`. Requires `Z_{-q} .. Z_{n+q}`.
pub fn h_events(z: &InnovationPath, coeffs: &CoefficientSample, a_n: f64, delta: f64) -> Result<HEvents> {
    check_scale(a_n)?;
    let q = coeffs.order();
    let (pre, post) = h_event_window(q);
    if z.pre() < pre || z.post() < post {
        return Err(Error::InsufficientHistory {
            needed: pre.max(post),
            available: z.pre().min(z.post()),
        });
    }
    let n = z.n() as i64;
    let qi = q as i64;
    let theta = delta / (4.0 * (q as f64 + 1.0));
    let cs = coeffs.c_star();
    let big_at = |l: i64| cs * z.at(l).abs() / a_n > theta;
    let big: Vec<i64> = (-qi..=n + qi).filter(|&l| big_at(l)).collect();

    let boundary = big.iter().any(|&l| (-qi..=qi).contains(&l) || (n - qi + 1..=n).contains(&l));

    let inside = |l: i64| (1..=n).contains(&l);
    let close_pair = big
        .windows(2)
        .any(|w| w[1] - w[0] <= qi && (inside(w[0]) || inside(w[1])));

    let inner: Vec<i64> = big.iter().copied().filter(|&l| inside(l)).collect();
    let mut pair_and_separate = false;
    if let (Some(&kmin), Some(&kmax)) = (inner.first(), inner.last()) {
        'pairs: for (a, &s1) in big.iter().enumerate() {
            for &s2 in &big[a + 1..] {
                if s2 - s1 > qi {
                    break;
                }
                if s1 < 1 - qi {
                    continue;
                }
                // j ranges over [s2, s1 + q] within 1..=n; a large k in 1..=n
                // must avoid j in {k, ..., k + q}.
                let (jmin, jmax) = (s2.max(1), (s1 + qi).min(n));
                if jmin > jmax {
                    continue;
                }
                if kmax > jmin || kmin + qi < jmax {
                    pair_and_separate = true;
                    break 'pairs;
                }
            }
        }
    }
    Ok(HEvents {
        boundary,
        close_pair,
        pair_and_separate,
    })
}

/// `max_k |sum_{i<=k} y_i 1{|y_i| <= u} - k E[y 1{|y| <= u}]|` with
/// `y_i = Z_i / a_n`: the small-jump fluctuation of one sample.
pub fn small_jump_diagnostic(z: &InnovationPath, tail: &TailModel, a_n: f64, u: f64) -> Result<f64> {
    check_scale(a_n)?;
    if !(u > 0.0) {
        return Err(Error::param("u", format!("must be positive, got {u}")));
    }
    let zs = z.sample();
    let mean = tail.small_mean_b_n(zs.len() as u64, u)?;
    let mut cum = 0.0;
    let mut worst = 0.0f64;
    for (k, &zi) in zs.iter().enumerate() {
        let y = zi / a_n;
        if y.abs() <= u {
            cum += y;
        }
        worst = worst.max((cum - (k + 1) as f64 * mean).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(pre: &[f64], body: &[f64]) -> InnovationPath {
        let mut v = pre.to_vec();
        v.extend_from_slice(body);
        InnovationPath::from_values(v, pre.len(), body.len()).unwrap()
    }

    #[test]
    fn equal_ratio_bridge() {
        let q = 4;
        let ratios: Vec<f64> = (0..q).map(|s| s as f64 / q as f64).collect();
        let c = bridge_coeffs(&ratios, 1.0).unwrap();
        assert_eq!(c.coeffs(), &[0.0, 0.25, 0.25, 0.25, 0.25]);
        let chk = check_partial_sum_condition(&c).unwrap();
        assert!(chk.holds);
        assert_eq!(chk.min_ratio, 0.0);
        assert_eq!(chk.max_ratio, 1.0);
    }

    #[test]
    fn counterexample_coefficients() {
        let c = CoefficientSample::new(vec![1.0, -1.0, 1.0]).unwrap();
        assert_eq!((c.c_sum(), c.c_plus(), c.c_minus(), c.c_star()), (1.0, 1.0, 1.0, 1.0));
        let chk = check_partial_sum_condition(&c).unwrap();
        assert!(chk.holds);
        assert_eq!((chk.min_ratio, chk.max_ratio), (0.0, 1.0));
    }

    #[test]
    fn partial_sum_condition_examples() {
        assert!(check_partial_sum_condition(&CoefficientSample::new(vec![1.0, 1.0]).unwrap()).unwrap().holds);
        let chk = check_partial_sum_condition(&CoefficientSample::new(vec![1.0, -2.0]).unwrap()).unwrap();
        assert!(!chk.holds);
        assert_eq!(chk.worst_ratio(), -1.0);
        assert!(matches!(
            check_partial_sum_condition(&CoefficientSample::new(vec![1.0, -1.0]).unwrap()),
            Err(Error::DegenerateCoefficients)
        ));
    }

    #[test]
    fn convolution_by_hand() {
        // Z_0 = 2, Z_1 = 5, Z_2 = 1, Z_3 = 0 with two pre-sample values.
        let z = path(&[7.0, 2.0], &[5.0, 1.0, 0.0]);
        let c = CoefficientSample::new(vec![1.0, -1.0, 1.0]).unwrap();
        let x = build_ma(&c, &z).unwrap();
        // X_1 = 5 - 2 + 7, X_2 = 1 - 5 + 2, X_3 = 0 - 1 + 5
        assert_eq!(x.values(), &[10.0, -2.0, 4.0]);
        let short = path(&[2.0], &[5.0, 1.0, 0.0]);
        assert!(matches!(build_ma(&c, &short), Err(Error::InsufficientHistory { .. })));
    }

    #[test]
    fn identity_and_delay_filters() {
        let z = path(&[9.0, 8.0], &[1.0, 2.0, 3.0]);
        let id = build_ma(&CoefficientSample::new(vec![1.0]).unwrap(), &z).unwrap();
        assert_eq!(id.values(), z.sample());
        let delay = build_ma(&CoefficientSample::new(vec![0.0, 0.0, 1.0]).unwrap(), &z).unwrap();
        assert_eq!(delay.values(), &[9.0, 8.0, 1.0]);
    }

    #[test]
    fn sum_and_max_paths_by_hand() {
        let v = partial_sum_path(&[1.0, 2.0, -3.0], 1.0).unwrap();
        assert_eq!(v.initial(), 0.0);
        assert_eq!(v.jumps(), &[(1.0 / 3.0, 1.0), (2.0 / 3.0, 3.0), (1.0, 0.0)]);
        let m = partial_max_path(&[1.0, 2.0, -3.0], 1.0).unwrap();
        assert_eq!(m.initial(), 1.0);
        assert_eq!(m.jumps(), &[(2.0 / 3.0, 2.0)]);
        let single = partial_sum_path(&[4.0], 2.0).unwrap();
        assert_eq!(single.jumps(), &[(1.0, 2.0)]);
        assert_eq!(partial_max_path(&[4.0], 2.0).unwrap(), StepFunction::constant(2.0));
        assert_eq!(partial_sum_path(&[0.0; 5], 1.0).unwrap(), StepFunction::constant(0.0));
    }

    #[test]
    fn tilde_max_by_hand() {
        let z = path(&[], &[-2.0, 3.0]);
        let c = CoefficientSample::new(vec![1.0, -0.5, 0.5]).unwrap();
        assert_eq!((c.c_plus(), c.c_minus()), (1.0, 0.5));
        let (v, m) = tilde_paths(&z, &c, 1.0).unwrap();
        assert_eq!(m.initial(), 1.0);
        assert_eq!(m.jumps(), &[(1.0, 3.0)]);
        assert_eq!(v.jumps(), &[(0.5, -2.0), (1.0, 1.0)]);
    }

    #[test]
    fn geometric_approximation() {
        let rho: f64 = 0.5;
        assert_eq!(geometric_truncation(rho), 27);
        let c = CoefficientSample::new((0..=27).map(|j| 2.0 * (1.0 - rho) * rho.powi(j)).collect()).unwrap();
        let a = finite_order_approx(&c, 2).unwrap();
        assert_eq!(&a.coeffs()[..2], &c.coeffs()[..2]);
        // 2 rho^2 minus the neglected tail 2 rho^28 beyond the truncation level
        assert!((a.coeffs()[2] - (2.0 * rho * rho - 2.0 * rho.powi(28))).abs() < 1e-16);
        assert!(check_partial_sum_condition(&a).unwrap().holds);
        let padded = finite_order_approx(&CoefficientSample::new(vec![1.0, 2.0]).unwrap(), 4).unwrap();
        assert_eq!(padded.coeffs(), &[1.0, 2.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn truncated_sum_with_single_exceedance() {
        let tail = TailModel::symmetric(0.8).unwrap();
        let z = path(&[], &[1.5, -20.0, 2.0, 1.0]);
        let a = 2.0;
        let f = truncated_centered_sum(&z, &tail, a, 1.0).unwrap();
        assert_eq!(f.jumps(), &[(0.5, -10.0)]);
        let quiet = path(&[], &[1.5, -3.0, 1.0]);
        assert_eq!(truncated_centered_sum(&quiet, &tail, 4.0, 1.0).unwrap(), StepFunction::constant(0.0));
    }

    #[test]
    fn h_events_by_hand() {
        // q = 1, delta = 8, C_* = 1: threshold 1 on |Z| / a_n with a_n = 1.
        let c = CoefficientSample::new(vec![1.0, 1.0]).unwrap();
        let mk = |body: &[f64]| {
            let v = [&[0.0, 0.0][..], body, &[0.0]].concat();
            InnovationPath::from_values(v, 2, body.len()).unwrap()
        };
        let quiet = mk(&[0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(h_events(&quiet, &c, 1.0, 8.0).unwrap(), HEvents::default());

        let edge = mk(&[5.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(h_events(&edge, &c, 1.0, 8.0).unwrap().boundary);

        let lone = mk(&[0.0, 0.0, 5.0, 0.0, 0.0, 0.0]);
        assert!(!h_events(&lone, &c, 1.0, 8.0).unwrap().any());

        let pair = mk(&[0.0, 0.0, 5.0, 5.0, 0.0, 0.0]);
        let h = h_events(&pair, &c, 1.0, 8.0).unwrap();
        assert!(h.close_pair && !h.boundary);

        let far = mk(&[0.0, 0.0, 5.0, 0.0, 5.0, 0.0]);
        assert!(!h_events(&far, &c, 1.0, 8.0).unwrap().any());
    }
}
