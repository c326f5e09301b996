use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A càdlàg, piecewise-constant function on `[0, 1]`.
///
/// The function starts at `initial` and at each jump time `t` switches to the
/// paired value. Jump times are strictly increasing and lie in `(0, 1]`.
/// Jumps that do not change the value are dropped at construction, so two
/// step functions are equal as functions iff their representations are equal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStep", into = "RawStep")]
pub struct StepFunction {
    initial: f64,
    jumps: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
struct RawStep {
    initial: f64,
    #[serde(default)]
    jumps: Vec<[f64; 2]>,
}

impl TryFrom<RawStep> for StepFunction {
    type Error = Error;

    fn try_from(raw: RawStep) -> Result<Self> {
        StepFunction::new(raw.initial, raw.jumps.into_iter().map(|[t, v]| (t, v)))
    }
}

impl From<StepFunction> for RawStep {
    fn from(f: StepFunction) -> Self {
        RawStep {
            initial: f.initial,
            jumps: f.jumps.into_iter().map(|(t, v)| [t, v]).collect(),
        }
    }
}

/// One constant piece of a step function, as a closed time interval.
///
/// The last plateau is degenerate (`start == end == 1`) when the function
/// jumps at `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    pub start: f64,
    pub end: f64,
    pub value: f64,
}

impl StepFunction {
    /// Validates and normalizes `(time, new_value)` pairs.
    pub fn new(initial: f64, jumps: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        if !initial.is_finite() {
            return Err(Error::StepFunction(format!("initial value {initial} is not finite")));
        }
        let mut out = Vec::new();
        let mut current = initial;
        let mut last_t = 0.0;
        for (t, v) in jumps {
            if !(t > last_t && t <= 1.0) {
                return Err(Error::StepFunction(format!(
                    "jump time {t} must be in (0, 1] and exceed the previous jump time {last_t}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::StepFunction(format!("value {v} at time {t} is not finite")));
            }
            last_t = t;
            if v != current {
                out.push((t, v));
                current = v;
            }
        }
        Ok(StepFunction { initial, jumps: out })
    }

    /// Builds a function from an already sorted sequence of strictly increasing
    /// times in `(0, 1]`, skipping validation. Used on hot simulation paths.
    pub(crate) fn from_sorted_unchecked(initial: f64, jumps: impl IntoIterator<Item = (f64, f64)>) -> Self {
        let mut out = Vec::new();
        let mut current = initial;
        for (t, v) in jumps {
            debug_assert!(t > 0.0 && t <= 1.0);
            if v != current {
                out.push((t, v));
                current = v;
            }
        }
        StepFunction { initial, jumps: out }
    }

    pub fn constant(value: f64) -> Self {
        StepFunction {
            initial: value,
            jumps: Vec::new(),
        }
    }

    /// Indicator of `[t, 1]`.
    pub fn indicator_from(t: f64) -> Result<Self> {
        StepFunction::new(0.0, [(t, 1.0)])
    }

    pub fn initial(&self) -> f64 {
        self.initial
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    pub fn jump_count(&self) -> usize {
        self.jumps.len()
    }

    fn check_time(t: f64) -> Result<()> {
        if (0.0..=1.0).contains(&t) {
            Ok(())
        } else {
            Err(Error::Domain {
                what: "t",
                value: t,
                domain: "[0, 1]",
            })
        }
    }

    /// Right-continuous evaluation.
    pub fn eval(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        Ok(self.value_at(t))
    }

    /// Left limit `f(t-)`; at `t = 0` this is the initial value.
    pub fn left_limit(&self, t: f64) -> Result<f64> {
        Self::check_time(t)?;
        let k = self.jumps.partition_point(|&(s, _)| s < t);
        Ok(if k == 0 { self.initial } else { self.jumps[k - 1].1 })
    }

    #[inline]
    pub(crate) fn value_at(&self, t: f64) -> f64 {
        let k = self.jumps.partition_point(|&(s, _)| s <= t);
        if k == 0 {
            self.initial
        } else {
            self.jumps[k - 1].1
        }
    }

    /// Value at `t = 1`.
    pub fn terminal(&self) -> f64 {
        self.jumps.last().map_or(self.initial, |&(_, v)| v)
    }

    /// Plateau values in time order (`jump_count() + 1` entries).
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(self.initial).chain(self.jumps.iter().map(|&(_, v)| v))
    }

    /// Closed plateaus `[start, end]`, consecutive ones sharing an endpoint.
    pub fn plateaus(&self) -> Vec<Plateau> {
        let mut out = Vec::with_capacity(self.jumps.len() + 1);
        let mut start = 0.0;
        let mut value = self.initial;
        for &(t, v) in &self.jumps {
            out.push(Plateau { start, end: t, value });
            start = t;
            value = v;
        }
        out.push(Plateau { start, end: 1.0, value });
        out
    }

    pub fn sup(&self) -> f64 {
        self.values().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn inf(&self) -> f64 {
        self.values().fold(f64::INFINITY, f64::min)
    }

    pub fn is_nondecreasing(&self) -> bool {
        let mut prev = self.initial;
        self.jumps.iter().all(|&(_, v)| {
            let ok = v >= prev;
            prev = v;
            ok
        })
    }

    /// `c * f`.
    pub fn scaled(&self, c: f64) -> StepFunction {
        StepFunction::from_sorted_unchecked(c * self.initial, self.jumps.iter().map(|&(t, v)| (t, c * v)))
    }

    /// Combines two functions pointwise over their merged jump grid.
    pub fn zip_with(&self, other: &StepFunction, op: impl Fn(f64, f64) -> f64) -> StepFunction {
        let times = merged_jump_times(self, other);
        let (mut i, mut j) = (0, 0);
        let (mut a, mut b) = (self.initial, other.initial);
        let mut jumps = Vec::with_capacity(times.len());
        for t in times {
            while i < self.jumps.len() && self.jumps[i].0 <= t {
                a = self.jumps[i].1;
                i += 1;
            }
            while j < other.jumps.len() && other.jumps[j].0 <= t {
                b = other.jumps[j].1;
                j += 1;
            }
            jumps.push((t, op(a, b)));
        }
        StepFunction::from_sorted_unchecked(op(self.initial, other.initial), jumps)
    }

    /// Pointwise maximum.
    pub fn max_with(&self, other: &StepFunction) -> StepFunction {
        self.zip_with(other, f64::max)
    }
}

/// Sorted union of the jump times of two functions.
pub(crate) fn merged_jump_times(f: &StepFunction, g: &StepFunction) -> Vec<f64> {
    let (a, b) = (f.jumps(), g.jumps());
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&(s, _)), Some(&(t, _))) if s < t => {
                i += 1;
                s
            }
            (Some(&(s, _)), Some(&(t, _))) if t < s => {
                j += 1;
                t
            }
            (Some(&(s, _)), Some(_)) => {
                i += 1;
                j += 1;
                s
            }
            (Some(&(s, _)), None) => {
                i += 1;
                s
            }
            (None, Some(&(t, _))) => {
                j += 1;
                t
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

/// A vector-valued step path `x = (x_1, ..., x_d)` on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiPath {
    components: Vec<StepFunction>,
}

impl MultiPath {
    pub fn new(components: Vec<StepFunction>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::param("components", "a multi-path needs at least one component"));
        }
        Ok(MultiPath { components })
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[StepFunction] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &StepFunction {
        &self.components[i]
    }

    pub fn into_components(self) -> Vec<StepFunction> {
        self.components
    }
}
