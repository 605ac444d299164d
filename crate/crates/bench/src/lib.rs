//! Shared inputs for the benchmarks in `benches/`.

use ontic_core::{QSqrt3, Ray};

/// `n` real qubit rays `(3, 4)`-style with rational pairwise overlaps: the
/// two Pauli-z rays, then Pythagorean directions.
pub fn rational_rays(n: usize) -> Vec<(String, Ray<QSqrt3>)> {
    const COMPONENTS: [(i64, i64); 6] = [(1, 0), (0, 1), (3, 4), (4, -3), (5, 12), (12, -5)];
    COMPONENTS
        .iter()
        .cycle()
        .take(n)
        .enumerate()
        .map(|(i, &(a, b))| {
            let ray = Ray::from_real(&[QSqrt3::ratio(a, 1), QSqrt3::ratio(b, 1)]).expect("nonzero");
            (format!("g{}", i + 1), ray)
        })
        .collect()
}
