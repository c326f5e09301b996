//! The marked Poisson point set behind the limit, the sum-maximum functional,
//! and the stable Lévy / extremal limit paths.
//!
//! Atoms are generated in decreasing order of magnitude from Poisson arrival
//! times, `P_i = Gamma_i^(-1/alpha)`, so keeping the first `K` atoms keeps
//! exactly the atoms above `u_min = P_K`.

use rand::Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::cadlag::{MultiPath, StepFunction};
use crate::error::{Error, Result};
use crate::linear::CoefficientSample;
use crate::tail::TailModel;

/// Default number of atoms kept per sample.
pub const DEFAULT_ATOMS: usize = 10_000;

/// Largest admissible truncation level for the Lévy path.
pub const MAX_TRUNCATION: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub time: f64,
    pub magnitude: f64,
    /// `+1` or `-1`.
    pub sign: f64,
}

impl Atom {
    pub fn value(&self) -> f64 {
        self.sign * self.magnitude
    }
}

/// Atoms in decreasing order of magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    atoms: Vec<Atom>,
    u_min: f64,
}

impl PointSet {
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Smallest retained magnitude.
    pub fn u_min(&self) -> f64 {
        self.u_min
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

pub fn sample_point_set<R: Rng + ?Sized>(model: &TailModel, k: usize, rng: &mut R) -> Result<PointSet> {
    if k < 1 {
        return Err(Error::param("K", "must be at least 1"));
    }
    let inv_alpha = -1.0 / model.alpha();
    let mut gamma = 0.0;
    let mut atoms = Vec::with_capacity(k);
    for _ in 0..k {
        let e: f64 = rng.sample(Exp1);
        gamma += e;
        let time: f64 = rng.random();
        let sign = if rng.random_bool(model.p()) { 1.0 } else { -1.0 };
        atoms.push(Atom {
            time,
            magnitude: gamma.powf(inv_alpha),
            sign,
        });
    }
    let u_min = atoms.last().map(|a| a.magnitude).unwrap_or(f64::INFINITY);
    Ok(PointSet { atoms, u_min })
}

/// Finite point measure `sum_i delta_(t_i, x_i)` on `[0, 1] x R\{0}`,
/// stored in time order.
#[derive(Debug, Clone, PartialEq)]
pub struct PointMeasure {
    points: Vec<(f64, f64)>,
}

impl PointMeasure {
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if let Some(&(t, x)) = points
            .iter()
            .find(|(t, x)| !(0.0..=1.0).contains(t) || !x.is_finite())
        {
            return Err(Error::param("points", format!("atom ({t}, {x}) is outside [0, 1] x R")));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(PointMeasure { points })
    }

    pub fn from_point_set(points: &PointSet) -> Self {
        let mut pts: Vec<(f64, f64)> = points.atoms.iter().map(|a| (a.time, a.value())).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        PointMeasure { points: pts }
    }

    /// `N_n = sum_{i=1}^n delta_(i/n, Z_i/a_n)`.
    pub fn empirical(z: &[f64], a_n: f64) -> Self {
        let n = z.len();
        PointMeasure {
            points: z
                .iter()
                .enumerate()
                .map(|(k, &zi)| ((k + 1) as f64 / n as f64, zi / a_n))
                .collect(),
        }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// Pushes `(t, value)` so that several atoms at one time collapse into the
/// last value recorded for that time.
fn push_collapsing(jumps: &mut Vec<(f64, f64)>, t: f64, v: f64) {
    match jumps.last_mut() {
        Some(last) if last.0 == t => last.1 = v,
        _ => jumps.push((t, v)),
    }
}

/// `(sum_{t_i <= t} x_i 1{|x_i| > u}, max_{t_i <= t} x_i^+, max_{t_i <= t} x_i^-)`
/// with empty maxima equal to zero. Atoms at time 0 enter the initial values.
pub fn sum_max_functional(measure: &PointMeasure, u: f64) -> Result<MultiPath> {
    if !(u > 0.0) {
        return Err(Error::param("u", format!("must be positive, got {u}")));
    }
    let (mut sum, mut pos, mut neg) = (0.0f64, 0.0f64, 0.0f64);
    let (mut init_s, mut init_p, mut init_n) = (0.0, 0.0, 0.0);
    let (mut js, mut jp, mut jn) = (Vec::new(), Vec::new(), Vec::new());
    for &(t, x) in &measure.points {
        if x.abs() > u {
            sum += x;
            if t == 0.0 {
                init_s = sum;
            } else {
                push_collapsing(&mut js, t, sum);
            }
        }
        if x > 0.0 && x > pos {
            pos = x;
            if t == 0.0 {
                init_p = pos;
            } else {
                push_collapsing(&mut jp, t, pos);
            }
        }
        if x < 0.0 && -x > neg {
            neg = -x;
            if t == 0.0 {
                init_n = neg;
            } else {
                push_collapsing(&mut jn, t, neg);
            }
        }
    }
    MultiPath::new(vec![
        StepFunction::from_sorted_unchecked(init_s, js),
        StepFunction::from_sorted_unchecked(init_p, jp),
        StepFunction::from_sorted_unchecked(init_n, jn),
    ])
}

fn check_truncation(points: &PointSet) -> Result<()> {
    if points.u_min > MAX_TRUNCATION {
        return Err(Error::InsufficientAtoms {
            u_min: points.u_min,
            max_u: MAX_TRUNCATION,
        });
    }
    Ok(())
}

/// Slope of the linear part of the truncated Lévy path: the drift minus the
/// compensator of the jumps in `(u_min, 1]`.
fn linear_slope(points: &PointSet, model: &TailModel) -> f64 {
    model.small_jump_rate(points.u_min)
}

/// `V(t)` evaluated exactly: retained jumps up to `t` plus `t` times the
/// linear slope.
pub fn stable_levy_value(points: &PointSet, model: &TailModel, t: f64) -> Result<f64> {
    check_truncation(points)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain {
            what: "t",
            value: t,
            domain: "[0, 1]",
        });
    }
    let jumps: f64 = points.atoms.iter().filter(|a| a.time <= t).map(Atom::value).sum();
    Ok(jumps + t * linear_slope(points, model))
}

/// Truncated stable Lévy path: jumps `P_i Q_i` at `T_i`, plus the linear
/// drift-minus-compensator term stepped at the nodes `g / grid`.
pub fn stable_levy_path(points: &PointSet, model: &TailModel, grid: usize) -> Result<StepFunction> {
    check_truncation(points)?;
    if grid < 1 {
        return Err(Error::param("grid", "must be at least 1"));
    }
    let slope = linear_slope(points, model);
    let mut atoms: Vec<(f64, f64)> = points.atoms.iter().map(|a| (a.time, a.value())).collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut jumps = Vec::with_capacity(atoms.len() + grid);
    let mut jump_sum = 0.0;
    let mut initial = 0.0;
    let mut k = 0;
    let mut g = 1;
    while k < atoms.len() || g <= grid {
        let node = g as f64 / grid as f64;
        let next_atom = atoms.get(k).map_or(f64::INFINITY, |a| a.0);
        let t = if g <= grid { next_atom.min(node) } else { next_atom };
        while k < atoms.len() && atoms[k].0 == t {
            jump_sum += atoms[k].1;
            k += 1;
        }
        if g <= grid && node == t {
            g += 1;
        }
        let drift_steps = (g - 1) as f64 / grid as f64;
        let v = jump_sum + slope * drift_steps;
        if t == 0.0 {
            initial = v;
        } else {
            jumps.push((t, v));
        }
    }
    Ok(StepFunction::from_sorted_unchecked(initial, jumps))
}

/// Largest-atom running maxima `(M1, M2)` over positive and negative marks,
/// starting at zero.
pub fn extremal_paths(points: &PointSet) -> (StepFunction, StepFunction) {
    let measure = PointMeasure::from_point_set(points);
    let mut comps = sum_max_functional(&measure, f64::INFINITY)
        .expect("positive threshold")
        .into_components();
    let m2 = comps.pop().expect("three components");
    let m1 = comps.pop().expect("three components");
    (m1, m2)
}

/// `(M1(t), M2(t))` evaluated directly from the atoms.
pub fn extremal_values(points: &PointSet, t: f64) -> (f64, f64) {
    let (mut m1, mut m2) = (0.0f64, 0.0f64);
    for a in points.atoms.iter().filter(|a| a.time <= t) {
        if a.sign > 0.0 {
            m1 = m1.max(a.magnitude);
        } else {
            m2 = m2.max(a.magnitude);
        }
    }
    (m1, m2)
}

/// Variance of the neglected jumps after `K` atoms,
/// `sum_{i > K} E P_i^2 ~ alpha / (2 - alpha) K^(1 - 2/alpha)`.
pub fn truncation_variance(model: &TailModel, k: usize) -> f64 {
    let a = model.alpha();
    a / (2.0 - a) * (k as f64).powf(1.0 - 2.0 / a)
}

/// `(C0 V, C1 M1 v C2 M2)` with the coefficient triple `(C, C_+, C_-)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointLimitSample {
    pub v: StepFunction,
    pub m: StepFunction,
    pub coeffs: (f64, f64, f64),
}

pub fn joint_limit_sample(
    points: &PointSet,
    coeffs: &CoefficientSample,
    model: &TailModel,
    grid: usize,
) -> Result<JointLimitSample> {
    let triple = (coeffs.c_sum(), coeffs.c_plus(), coeffs.c_minus());
    let v = stable_levy_path(points, model, grid)?.scaled(triple.0);
    let (m1, m2) = extremal_paths(points);
    let m = m1.scaled(triple.1).max_with(&m2.scaled(triple.2));
    Ok(JointLimitSample { v, m, coeffs: triple })
}

/// `(C0 V(t), C1 M1(t) v C2 M2(t))` evaluated exactly.
pub fn joint_limit_values(
    points: &PointSet,
    coeffs: (f64, f64, f64),
    model: &TailModel,
    t: f64,
) -> Result<(f64, f64)> {
    let v = stable_levy_value(points, model, t)?;
    let (m1, m2) = extremal_values(points, t);
    Ok((coeffs.0 * v, (coeffs.1 * m1).max(coeffs.2 * m2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Domain};

    #[test]
    fn sum_max_by_hand() {
        let m = PointMeasure::new(vec![(0.7, -0.5), (0.3, 2.0)]).unwrap();
        let out = sum_max_functional(&m, 1.0).unwrap();
        assert_eq!(out.component(0).jumps(), &[(0.3, 2.0)]);
        assert_eq!(out.component(1).jumps(), &[(0.3, 2.0)]);
        assert_eq!(out.component(2).jumps(), &[(0.7, 0.5)]);
        let empty = sum_max_functional(&PointMeasure::new(vec![]).unwrap(), 0.5).unwrap();
        for c in empty.components() {
            assert_eq!(c, &StepFunction::constant(0.0));
        }
        assert!(sum_max_functional(&m, 0.0).is_err());
    }

    #[test]
    fn magnitudes_decrease_and_floor_is_last() {
        let model = TailModel::new(0.7, 0.6).unwrap();
        let ps = sample_point_set(&model, 500, &mut stream(1, Domain::LimitPoints, 0)).unwrap();
        assert!(ps.atoms().windows(2).all(|w| w[0].magnitude > w[1].magnitude));
        assert_eq!(ps.u_min(), ps.atoms()[499].magnitude);
    }

    #[test]
    fn levy_path_matches_exact_values_on_grid_nodes() {
        let model = TailModel::new(1.2, 0.7).unwrap();
        let ps = sample_point_set(&model, 2000, &mut stream(3, Domain::LimitPoints, 0)).unwrap();
        let path = stable_levy_path(&ps, &model, 2000).unwrap();
        for &t in &[0.25, 0.5, 1.0] {
            let exact = stable_levy_value(&ps, &model, t).unwrap();
            let stepped = path.eval(t).unwrap();
            assert!((exact - stepped).abs() < 1e-9 * (1.0 + exact.abs()), "{t}: {exact} vs {stepped}");
        }
        let atom_times: Vec<f64> = ps.atoms().iter().map(|a| a.time).collect();
        for &(t, _) in path.jumps() {
            let on_grid = (t * 2000.0).round() / 2000.0 == t;
            assert!(on_grid || atom_times.contains(&t));
        }
    }

    #[test]
    fn too_few_atoms_are_rejected() {
        let model = TailModel::symmetric(1.5).unwrap();
        let ps = sample_point_set(&model, 3, &mut stream(3, Domain::LimitPoints, 0)).unwrap();
        assert!(matches!(stable_levy_path(&ps, &model, 10), Err(Error::InsufficientAtoms { .. })));
    }

    #[test]
    fn extremal_paths_split_by_sign() {
        let model = TailModel::new(0.9, 1.0).unwrap();
        let ps = sample_point_set(&model, 200, &mut stream(5, Domain::LimitPoints, 0)).unwrap();
        let (m1, m2) = extremal_paths(&ps);
        assert_eq!(m2, StepFunction::constant(0.0));
        assert!(m1.is_nondecreasing());
        assert_eq!(m1.initial(), 0.0);
        assert_eq!(m1.terminal(), ps.atoms()[0].magnitude);
        assert_eq!(extremal_values(&ps, 1.0), (m1.terminal(), 0.0));
    }

    #[test]
    fn joint_sample_scales_linearly() {
        let model = TailModel::new(0.8, 0.6).unwrap();
        let ps = sample_point_set(&model, 3000, &mut stream(9, Domain::LimitPoints, 0)).unwrap();
        let c = CoefficientSample::new(vec![0.5, -0.25, 1.0]).unwrap();
        let a = joint_limit_sample(&ps, &c, &model, 100).unwrap();
        let b = joint_limit_sample(&ps, &c.scaled(2.0), &model, 100).unwrap();
        assert_eq!(b.v, a.v.scaled(2.0));
        assert_eq!(b.m, a.m.scaled(2.0));
        let one = CoefficientSample::new(vec![1.0]).unwrap();
        let j = joint_limit_sample(&ps, &one, &model, 100).unwrap();
        assert_eq!(j.m, extremal_paths(&ps).0);
        assert_eq!(j.v, stable_levy_path(&ps, &model, 100).unwrap());
    }
}
