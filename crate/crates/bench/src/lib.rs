//! Shared fixtures for the benchmarks in `benches/`.

use antirainbow_core::experiments::sample_gnp;
use antirainbow_core::Graph;

/// `G(n, p)` with a fixed seed, so every run measures the same inputs.
pub fn fixture(n: usize, p: f64) -> Graph {
    sample_gnp(n, p, 0x5EED ^ n as u64).expect("probability in range")
}

/// Sizes and densities used across the benchmark groups.
pub const CASES: [(usize, f64); 4] = [(50, 0.2), (100, 0.1), (200, 0.05), (200, 0.3)];
