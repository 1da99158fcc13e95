//! Fixtures shared by the benchmarks in `benches/`.

use greedymod::{generate_ba, Graph};

/// Preferential-attachment graph with five edges per new node, the shape
/// used throughout the benchmarks.
pub fn ba_fixture(n: usize, seed: u64) -> Graph {
    generate_ba(n, 5, seed).expect("valid fixture spec")
}
