//! Shared fixtures for the benchmark suite: one mid-coupling parameter
//! point with its normalization precomputed, so individual benches measure
//! the stage under test rather than the setup.

use entlab_core::model::{EvalMode, ModelParams, Normalization};

pub const BENCH_LAMBDA: f64 = 10.0;
pub const BENCH_TOL: f64 = 1e-10;

/// Parameters and exact normalization at the standard bench coupling.
pub fn standard_point() -> (ModelParams, Normalization) {
    let params = ModelParams::new(BENCH_LAMBDA, 1.0).expect("valid bench parameters");
    let norm = Normalization::compute(&params, EvalMode::Exact, BENCH_TOL).expect("normalization");
    (params, norm)
}
