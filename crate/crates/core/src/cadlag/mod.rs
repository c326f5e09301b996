//! Càdlàg step paths on `[0, 1]` and distances between them.

mod graph;
mod m2;
mod oscillation;
mod step;

pub use graph::{completed_graph, CompletedGraph, Segment};
pub use m2::{d_m2, d_product_m2, d_uniform, m2_within, product_m2_within, M2Pair};
pub use oscillation::{d_m1_star, levy_distance, levy_within, oscillation, LogProfile, OscillationProfile};
pub use step::{MultiPath, Plateau, StepFunction};

/// Tolerance used for distances inside Monte Carlo experiments.
pub const MC_TOL: f64 = 1e-6;
