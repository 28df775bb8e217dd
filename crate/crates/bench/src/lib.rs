//! Fixtures shared by the benchmarks.

use shuffles_core::series::MultiplicativeFunction;
use shuffles_core::ShufflePoset;

/// Poset sizes `(M, N)` the enumeration benchmarks sweep over.
pub const SIZES: [(u16, u16); 4] = [(2, 2), (3, 2), (3, 3), (4, 3)];

pub fn poset(m: u16, n: u16) -> ShufflePoset {
    ShufflePoset::with_sizes(m, n)
}

/// A pair of seeded random multiplicative functions at a square truncation.
pub fn random_pair(trunc: usize) -> (MultiplicativeFunction, MultiplicativeFunction) {
    (
        MultiplicativeFunction::random((trunc, trunc), 1),
        MultiplicativeFunction::random((trunc, trunc), 2),
    )
}

pub fn label(m: u16, n: u16) -> String {
    format!("W({m},{n})")
}
