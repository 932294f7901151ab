//! Exact algorithms for volume rigidity of hypergraph frameworks.
//!
//! A framework assigns a point in `R^d` to each vertex of a `(d+1)`-uniform
//! hypergraph and is measured by the signed volumes of its hyperedges.

pub mod bipyramid;
pub mod bounds;
pub mod error;
pub mod framework;
pub mod hypergraph;
pub mod matrix;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod rigidity;

pub use error::{Error, ErrorCategory, Result};
pub use framework::{
    are_congruent, are_equivalent, find_congruence_transform, measure, random_generic_configuration, standard_pinning,
    AffineTransform, Configuration, Framework, MeasurementVector, PinnedConfiguration,
};
pub use hypergraph::{Hyperedge, Hypergraph};
pub use matrix::RationalMatrix;
pub use poly::{RationalFunction, RealRoot, UnivariatePolynomial};
pub use rational::Rational;
pub use rigidity::{
    flex_space, generic_rank, is_generically_rigid, is_infinitesimally_rigid, is_minimally_rigid, max_rank,
    rank_report, rigidity_matrix, FlexSpace, RankReport, RigidityMatrix,
};
