//! Grids shared by the criterion benchmarks.

use hypersum_core::GridSpec;

/// Small grid: every method finishes in milliseconds.
pub fn small_grid() -> GridSpec {
    GridSpec::new(30, 4, 3).unwrap()
}

/// Wider grid in `n`, where the closed sum's per-point cost dominates.
pub fn wide_grid() -> GridSpec {
    GridSpec::new(200, 5, 4).unwrap()
}
