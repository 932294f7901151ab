//! Fixtures shared by the benchmarks.

use hypervol::oracle::pin_for_oracle;
use hypervol::{random_generic_configuration, Configuration, Hypergraph, PinnedConfiguration};

/// A bipyramid on `n` vertices with a seeded random configuration.
pub fn bipyramid_framework(n: usize, seed: u64) -> (Hypergraph, Configuration) {
    let theta = Hypergraph::bipyramid(n).expect("n >= 5");
    let p = random_generic_configuration(2, n, seed, 100).expect("valid bound");
    (theta, p)
}

/// The same framework pinned on its first hyperedge, as the oracle expects.
pub fn pinned_bipyramid(n: usize, seed: u64) -> (Hypergraph, PinnedConfiguration) {
    let (theta, p) = bipyramid_framework(n, seed);
    let pinned = pin_for_oracle(&theta, &p).expect("generic base");
    (theta, pinned)
}
