use super::step::StepFunction;

/// Axis-aligned piece of a completed graph in `[0, 1] x R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    /// `[t0, t1] x {z}`
    Horizontal { t0: f64, t1: f64, z: f64 },
    /// `{t} x [z0, z1]`, traversed from `z0 = x(t-)` to `z1 = x(t)`.
    Vertical { t: f64, z0: f64, z1: f64 },
}

#[inline]
fn gap(x: f64, a: f64, b: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if x < lo {
        lo - x
    } else if x > hi {
        x - hi
    } else {
        0.0
    }
}

impl Segment {
    /// Max-norm distance from `(t, z)` to the segment.
    pub fn distance_to(&self, t: f64, z: f64) -> f64 {
        match *self {
            Segment::Horizontal { t0, t1, z: zs } => gap(t, t0, t1).max((z - zs).abs()),
            Segment::Vertical { t: ts, z0, z1 } => (t - ts).abs().max(gap(z, z0, z1)),
        }
    }
}

/// The completed graph of a step function: plateaus joined by vertical
/// segments at the jump times, listed in graph order.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletedGraph {
    segments: Vec<Segment>,
}

impl CompletedGraph {
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Max-norm distance from a point to the graph.
    pub fn distance_to(&self, t: f64, z: f64) -> f64 {
        self.segments
            .iter()
            .map(|s| s.distance_to(t, z))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn completed_graph(f: &StepFunction) -> CompletedGraph {
    let mut segments = Vec::with_capacity(2 * f.jump_count() + 1);
    let mut start = 0.0;
    let mut value = f.initial();
    for &(t, v) in f.jumps() {
        segments.push(Segment::Horizontal { t0: start, t1: t, z: value });
        segments.push(Segment::Vertical { t, z0: value, z1: v });
        start = t;
        value = v;
    }
    segments.push(Segment::Horizontal { t0: start, t1: 1.0, z: value });
    CompletedGraph { segments }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_graph_is_one_segment() {
        let g = completed_graph(&StepFunction::constant(0.0));
        assert_eq!(g.segments(), &[Segment::Horizontal { t0: 0.0, t1: 1.0, z: 0.0 }]);
    }

    #[test]
    fn indicator_graph() {
        let g = completed_graph(&StepFunction::indicator_from(0.5).unwrap());
        assert_eq!(
            g.segments(),
            &[
                Segment::Horizontal { t0: 0.0, t1: 0.5, z: 0.0 },
                Segment::Vertical { t: 0.5, z0: 0.0, z1: 1.0 },
                Segment::Horizontal { t0: 0.5, t1: 1.0, z: 1.0 },
            ]
        );
    }

    #[test]
    fn segment_count_and_connectivity() {
        let f = StepFunction::new(0.3, [(0.1, -2.0), (0.4, 5.0), (0.9, 1.0), (1.0, 2.0)]).unwrap();
        let g = completed_graph(&f);
        assert_eq!(g.len(), 2 * f.jump_count() + 1);
        let ends = |s: &Segment| match *s {
            Segment::Horizontal { t0, t1, z } => ((t0, z), (t1, z)),
            Segment::Vertical { t, z0, z1 } => ((t, z0), (t, z1)),
        };
        for w in g.segments().windows(2) {
            assert_eq!(ends(&w[0]).1, ends(&w[1]).0);
        }
        for s in g.segments() {
            if let Segment::Vertical { t, z0, z1 } = *s {
                assert_eq!(z0, f.left_limit(t).unwrap());
                assert_eq!(z1, f.eval(t).unwrap());
            }
        }
    }

    #[test]
    fn point_distance_uses_max_norm() {
        let g = completed_graph(&StepFunction::indicator_from(0.5).unwrap());
        assert!((g.distance_to(0.6, 0.0) - 0.1).abs() < 1e-15);
        assert_eq!(g.distance_to(0.5, 0.4), 0.0);
        assert!((g.distance_to(0.2, 0.7) - 0.3).abs() < 1e-15);
    }
}
