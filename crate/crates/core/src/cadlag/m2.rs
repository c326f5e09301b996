//! Uniform and M2 distances between step functions.
//!
//! The M2 distance is the Hausdorff distance between completed graphs under
//! the max-norm on `[0, 1] x R`. For a step function `g` and a point `(t, z)`
//! the part of the graph of `g` inside the time slab `[t - e, t + e]` is
//! connected, so its projection on the value axis is an interval
//! `[lo_e(t), hi_e(t)]` spanned by the plateaus of `g` that meet the slab.
//! Hence `dist((t, z), graph g) <= e` iff `lo_e(t) - e <= z <= hi_e(t) + e`.
//! That turns "Hausdorff distance at most `e`" into a sweep over the plateaus
//! of both functions with sliding-window extrema, which is exact and linear
//! in the number of jumps. The distance itself is bracketed by bisection.

use std::collections::VecDeque;

use super::step::{merged_jump_times, MultiPath, Plateau, StepFunction};
use crate::error::{Error, Result};

/// `sup_t |f(t) - g(t)|`, evaluated on the merged jump grid.
pub fn d_uniform(f: &StepFunction, g: &StepFunction) -> f64 {
    let mut best = (f.initial() - g.initial()).abs();
    let (fj, gj) = (f.jumps(), g.jumps());
    let (mut i, mut j) = (0, 0);
    let (mut a, mut b) = (f.initial(), g.initial());
    for t in merged_jump_times(f, g) {
        while i < fj.len() && fj[i].0 <= t {
            a = fj[i].1;
            i += 1;
        }
        while j < gj.len() && gj[j].0 <= t {
            b = gj[j].1;
            j += 1;
        }
        best = best.max((a - b).abs());
    }
    best
}

/// Plateau data of one function in structure-of-arrays form.
struct Plateaus {
    start: Vec<f64>,
    end: Vec<f64>,
    value: Vec<f64>,
}

impl Plateaus {
    fn of(f: &StepFunction) -> Self {
        let ps: Vec<Plateau> = f.plateaus();
        Plateaus {
            start: ps.iter().map(|p| p.start).collect(),
            end: ps.iter().map(|p| p.end).collect(),
            value: ps.iter().map(|p| p.value).collect(),
        }
    }

    fn len(&self) -> usize {
        self.value.len()
    }
}

/// Sliding-window max and min over plateau values whose index window
/// `[lo, hi]` only moves forward.
struct WindowExtrema<'a> {
    values: &'a [f64],
    pushed: usize,
    maxq: VecDeque<usize>,
    minq: VecDeque<usize>,
}

impl<'a> WindowExtrema<'a> {
    fn new(values: &'a [f64]) -> Self {
        WindowExtrema {
            values,
            pushed: 0,
            maxq: VecDeque::new(),
            minq: VecDeque::new(),
        }
    }

    /// Extrema over `values[lo..=hi]`; both bounds must be nondecreasing
    /// across calls.
    fn query(&mut self, lo: usize, hi: usize) -> (f64, f64) {
        while self.pushed <= hi {
            let v = self.values[self.pushed];
            while self.maxq.back().is_some_and(|&k| self.values[k] <= v) {
                self.maxq.pop_back();
            }
            self.maxq.push_back(self.pushed);
            while self.minq.back().is_some_and(|&k| self.values[k] >= v) {
                self.minq.pop_back();
            }
            self.minq.push_back(self.pushed);
            self.pushed += 1;
        }
        while self.maxq.front().is_some_and(|&k| k < lo) {
            self.maxq.pop_front();
        }
        while self.minq.front().is_some_and(|&k| k < lo) {
            self.minq.pop_front();
        }
        (self.values[self.maxq[0]], self.values[self.minq[0]])
    }
}

/// Every point of the graph of `src` lies within `eps` of the graph of `dst`.
fn directed_within(src: &Plateaus, dst: &Plateaus, eps: f64) -> bool {
    let m = dst.len();
    // Plateau k of dst meets the slab around t iff
    // start_k - eps <= t <= end_k + eps; both bounds are sorted in k.
    let entry = |k: usize| dst.start[k] - eps;
    let exit = |k: usize| dst.end[k] + eps;
    let mut ext = WindowExtrema::new(&dst.value);
    let (mut ie, mut ix) = (0usize, 0usize);

    let ok = |hi: f64, lo: f64, v: f64| v <= hi + eps && v >= lo - eps;

    for s in 0..src.len() {
        let (a, b, v) = (src.start[s], src.end[s], src.value[s]);
        if a == b {
            // Degenerate plateau {1}: evaluate the slab at the point itself.
            let lo = (ix..m).find(|&k| exit(k) >= a).unwrap_or(m - 1);
            let mut hi = ie.saturating_sub(1);
            while hi + 1 < m && entry(hi + 1) <= a {
                hi += 1;
            }
            let hi = hi.max(lo);
            let (mx, mn) = ext.query(lo, hi);
            if !ok(mx, mn, v) {
                return false;
            }
            continue;
        }
        // Walk the open pieces of (a, b) between consecutive slab events. The
        // active set at an event point contains those of the neighbouring
        // pieces, so the open pieces carry the binding constraints.
        let mut x = a;
        loop {
            while ie < m && entry(ie) <= x {
                ie += 1;
            }
            while ix < m && exit(ix) <= x {
                ix += 1;
            }
            let mut y = b;
            if ie < m {
                y = y.min(entry(ie));
            }
            if ix < m {
                y = y.min(exit(ix));
            }
            if y > x {
                // Active plateaus on (x, y): indices ix ..= ie - 1.
                let (lo, hi) = (ix, ie.saturating_sub(1).max(ix));
                let (mx, mn) = ext.query(lo, hi);
                if !ok(mx, mn, v) {
                    return false;
                }
            }
            if y >= b {
                break;
            }
            x = y;
        }
    }
    true
}

/// Precomputed plateau data for repeated M2 decisions on one pair.
pub struct M2Pair {
    f: Plateaus,
    g: Plateaus,
}

impl M2Pair {
    pub fn new(f: &StepFunction, g: &StepFunction) -> Self {
        M2Pair {
            f: Plateaus::of(f),
            g: Plateaus::of(g),
        }
    }

    /// Exact test of `d_M2(f, g) <= eps`.
    pub fn within(&self, eps: f64) -> bool {
        directed_within(&self.f, &self.g, eps) && directed_within(&self.g, &self.f, eps)
    }
}

/// Exact decision `d_M2(f, g) <= eps`.
pub fn m2_within(f: &StepFunction, g: &StepFunction, eps: f64) -> bool {
    M2Pair::new(f, g).within(eps)
}

/// M2 (Hausdorff) distance between the completed graphs, to within `tol`.
///
/// The returned value `d` satisfies `d - tol <= d_M2 <= d` and never exceeds
/// the uniform distance.
pub fn d_m2(f: &StepFunction, g: &StepFunction, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let mut hi = d_uniform(f, g);
    if hi == 0.0 {
        return Ok(0.0);
    }
    let pair = M2Pair::new(f, g);
    let mut lo = 0.0;
    // Rounding in the sweep can in principle reject the uniform bound.
    while !pair.within(hi) {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pair.within(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::param("tol", format!("must be positive and finite, got {tol}")))
    }
}

/// Product M2 metric: the largest coordinatewise M2 distance.
pub fn d_product_m2(x: &MultiPath, y: &MultiPath, tol: f64) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let mut best = 0.0f64;
    for (a, b) in x.components().iter().zip(y.components()) {
        best = best.max(d_m2(a, b, tol)?);
    }
    Ok(best)
}

/// Exact decision `d_p^M2(x, y) <= eps`.
pub fn product_m2_within(x: &MultiPath, y: &MultiPath, eps: f64) -> Result<bool> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    Ok(x
        .components()
        .iter()
        .zip(y.components())
        .all(|(a, b)| m2_within(a, b, eps)))
}
