//! Oscillation function, its log-scale profile, the Lévy metric between
//! profiles, and the M1-equivalent metric built from them.
//!
//! For a step function with plateau values `v_0, ..., v_m` and plateau start
//! times `s_0 = 0 < s_1 < ... < s_m`, three times `t1 < t2 < t3` on plateaus
//! `i < j < k` fit in a window of half-width `rho` iff `s_k - s_{i+1} < 2 rho`
//! (`t1` can approach the right end of its plateau but not reach it). So
//! `omega(x, rho)` is the largest value of `dist(v_j, [v_i, v_k])` over index
//! triples whose span `s_k - s_{i+1}` is below `2 rho`.

use super::m2::{check_tol, d_m2};
use super::step::StepFunction;
use crate::error::{Error, Result};

/// `rho -> omega(x, rho)` as a nondecreasing step function: breakpoints are
/// spans `s` with `omega(x, rho) >= value` as soon as `2 rho > s`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillationProfile {
    /// Strictly increasing in both span and value.
    steps: Vec<(f64, f64)>,
}

impl OscillationProfile {
    pub fn of(f: &StepFunction) -> Self {
        let values: Vec<f64> = f.values().collect();
        let mut starts = Vec::with_capacity(values.len());
        starts.push(0.0);
        starts.extend(f.jumps().iter().map(|&(t, _)| t));

        let mut events = Vec::new();
        peak_events(&values, &starts, &mut events);
        let negated: Vec<f64> = values.iter().map(|v| -v).collect();
        peak_events(&negated, &starts, &mut events);

        // Spans are positive, so their bit patterns sort like the floats; the
        // scan below keeps the largest value among equal spans in any order.
        events.sort_unstable_by_key(|e| e.0.to_bits());
        let mut steps: Vec<(f64, f64)> = Vec::new();
        for (span, value) in events {
            if steps.last().is_none_or(|&(_, best)| value > best) {
                if steps.last().is_some_and(|&(s, _)| s == span) {
                    steps.pop();
                }
                steps.push((span, value));
            }
        }
        OscillationProfile { steps }
    }

    /// `omega(x, rho)`.
    pub fn at(&self, rho: f64) -> f64 {
        let k = self.steps.partition_point(|&(s, _)| s < 2.0 * rho);
        if k == 0 {
            0.0
        } else {
            self.steps[k - 1].1
        }
    }

    /// `omega(x, 1)`, the largest oscillation at any scale.
    pub fn total(&self) -> f64 {
        self.steps.last().map_or(0.0, |&(_, v)| v)
    }

    pub fn is_zero(&self) -> bool {
        self.steps.is_empty()
    }

    /// The profile on the log scale, `z -> omega(x, e^z)` for `z < 0` and
    /// `omega(x, 1)` for `z >= 0`.
    pub fn log_scale(&self) -> LogProfile {
        LogProfile {
            steps: self.steps.iter().map(|&(s, v)| ((0.5 * s).ln(), v)).collect(),
        }
    }
}

/// Collects `(span, value)` candidates for triples whose middle plateau is a
/// local peak above both outer plateaus.
///
/// For a middle index `j` and a level `w`, the shortest triple reaching `w`
/// pairs the nearest `i < j` and nearest `k > j` with values `<= v_j - w`.
/// Walking the previous-smaller / next-smaller chains from `j` enumerates
/// exactly the levels where one of those nearest indices changes.
fn peak_events(values: &[f64], starts: &[f64], out: &mut Vec<(f64, f64)>) {
    let m = values.len();
    if m < 3 {
        return;
    }
    let prev_smaller = smaller_chain(values, false);
    let next_smaller = smaller_chain(values, true);

    for j in 1..m - 1 {
        let vj = values[j];
        let (mut i, mut k) = (prev_smaller[j], next_smaller[j]);
        while i != usize::MAX && k != usize::MAX {
            let (li, lk) = (vj - values[i], vj - values[k]);
            out.push((starts[k] - starts[i + 1], li.min(lk)));
            if li <= lk {
                i = prev_smaller[i];
            }
            if lk <= li {
                k = next_smaller[k];
            }
        }
    }
}

/// For each index, the nearest index on one side holding a strictly smaller
/// value (`usize::MAX` when there is none).
fn smaller_chain(values: &[f64], forward: bool) -> Vec<usize> {
    let m = values.len();
    let mut out = vec![usize::MAX; m];
    let mut stack: Vec<usize> = Vec::new();
    let order: Box<dyn Iterator<Item = usize>> = if forward {
        Box::new((0..m).rev())
    } else {
        Box::new(0..m)
    };
    for idx in order {
        while stack.last().is_some_and(|&s| values[s] >= values[idx]) {
            stack.pop();
        }
        if let Some(&s) = stack.last() {
            out[idx] = s;
        }
        stack.push(idx);
    }
    out
}

/// `omega(x, rho) = sup_t sup { |x(t2) - [x(t1), x(t3)]| }` over
/// `t - rho <= t1 < t2 < t3 <= t + rho` within `[0, 1]`.
pub fn oscillation(f: &StepFunction, rho: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::param("rho", format!("must be positive, got {rho}")));
    }
    Ok(OscillationProfile::of(f).at(rho))
}

/// Nondecreasing, left-continuous step function of `z` on the real line:
/// `F(z) = max { v_b : z_b < z }`, zero below the first breakpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct LogProfile {
    steps: Vec<(f64, f64)>,
}

impl LogProfile {
    pub fn new(mut steps: Vec<(f64, f64)>) -> Self {
        steps.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(steps.len());
        for (z, v) in steps {
            if out.last().is_none_or(|&(_, best)| v > best) {
                out.push((z, v));
            }
        }
        LogProfile { steps: out }
    }

    pub fn eval(&self, z: f64) -> f64 {
        let k = self.steps.partition_point(|&(b, _)| b < z);
        if k == 0 {
            0.0
        } else {
            self.steps[k - 1].1
        }
    }

    pub fn sup(&self) -> f64 {
        self.steps.last().map_or(0.0, |&(_, v)| v)
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.steps.iter().map(|&(z, _)| z)
    }
}

/// Exact test of the Lévy condition
/// `G(z - eps) - eps <= F(z) <= G(z + eps) + eps` for all `z`.
pub fn levy_within(f: &LogProfile, g: &LogProfile, eps: f64) -> bool {
    let mut pts: Vec<f64> = f
        .breakpoints()
        .chain(g.breakpoints().map(|z| z + eps))
        .chain(g.breakpoints().map(|z| z - eps))
        .collect();
    if pts.is_empty() {
        return true;
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let holds = |z: f64| g.eval(z - eps) - eps <= f.eval(z) && f.eval(z) <= g.eval(z + eps) + eps;
    if !holds(pts[0] - 1.0) || !holds(pts[pts.len() - 1] + 1.0) {
        return false;
    }
    for w in pts.windows(2) {
        if !holds(w[0]) || !holds(0.5 * (w[0] + w[1])) {
            return false;
        }
    }
    holds(pts[pts.len() - 1])
}

/// Lévy distance between two log-scale oscillation profiles, to within `tol`.
pub fn levy_distance(f: &LogProfile, g: &LogProfile, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if f == g {
        return Ok(0.0);
    }
    // eps = max(sup F, sup G) always satisfies the condition.
    let mut hi = f.sup().max(g.sup());
    let mut lo = 0.0;
    while !levy_within(f, g, hi) {
        lo = hi;
        hi = 2.0 * hi + tol;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if levy_within(f, g, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `d_M2(f, g) + lambda(omega_hat(f, .), omega_hat(g, .))`, a complete metric
/// topologically equivalent to the M1 metric.
pub fn d_m1_star(f: &StepFunction, g: &StepFunction, tol: f64) -> Result<f64> {
    let m2 = d_m2(f, g, tol)?;
    let pf = OscillationProfile::of(f).log_scale();
    let pg = OscillationProfile::of(g).log_scale();
    Ok(m2 + levy_distance(&pf, &pg, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zigzag() -> StepFunction {
        StepFunction::new(0.0, [(0.4, 1.0), (0.5, -1.0), (0.6, 1.0)]).unwrap()
    }

    #[test]
    fn zigzag_oscillation() {
        assert_eq!(oscillation(&zigzag(), 0.2).unwrap(), 2.0);
        // The (1, -1, 1) triple needs a window wider than 0.6 - 0.5.
        assert_eq!(oscillation(&zigzag(), 0.0499).unwrap(), 0.0);
        assert_eq!(oscillation(&zigzag(), 0.0500001).unwrap(), 2.0);
    }

    #[test]
    fn monotone_and_constant_have_no_oscillation() {
        let f = StepFunction::new(0.0, [(0.1, 1.0), (0.2, 5.0), (0.9, 7.0)]).unwrap();
        assert_eq!(oscillation(&f, 0.5).unwrap(), 0.0);
        assert_eq!(oscillation(&StepFunction::constant(3.0), 1.0).unwrap(), 0.0);
        assert!(oscillation(&f, 0.0).is_err());
    }

    #[test]
    fn levy_distance_for_zigzag_against_zero() {
        let f = OscillationProfile::of(&zigzag()).log_scale();
        let g = OscillationProfile::of(&StepFunction::constant(0.0)).log_scale();
        let d = levy_distance(&f, &g, 1e-9).unwrap();
        assert!((d - 2.0).abs() <= 1e-9, "{d}");
    }

    #[test]
    fn levy_shift_of_a_single_step() {
        // F jumps to 5 at z = -3, G at z = -3.5: a horizontal shift of 0.5.
        let f = LogProfile::new(vec![(-3.0, 5.0)]);
        let g = LogProfile::new(vec![(-3.5, 5.0)]);
        let d = levy_distance(&f, &g, 1e-10).unwrap();
        assert!((d - 0.5).abs() <= 1e-10, "{d}");
        assert_eq!(levy_distance(&f, &f, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn m1_star_exceeds_m2_on_zigzag() {
        let f = zigzag();
        let g = StepFunction::constant(0.0);
        let m2 = d_m2(&f, &g, 1e-9).unwrap();
        let m1 = d_m1_star(&f, &g, 1e-9).unwrap();
        assert!(m1 > m2 + 1.0);
        assert_eq!(d_m1_star(&f, &f, 1e-9).unwrap(), 0.0);
    }
}
