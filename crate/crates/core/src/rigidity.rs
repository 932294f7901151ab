//! Rigidity matrices, exact rank and infinitesimal flexes.

use std::ops::Deref;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::framework::{random_generic_configuration, Configuration};
use crate::hypergraph::Hypergraph;
use crate::matrix::{minor, RationalMatrix};
use crate::rational::Rational;

/// Default number of random configurations used to certify a generic rank.
pub const DEFAULT_TRIALS: usize = 3;

/// Numerator bound for the random configurations behind generic-rank checks.
pub const GENERIC_BOUND: i64 = 997;

/// Dimension of the trivial flex space of a non-flat framework.
pub fn trivial_flex_dimension(d: usize) -> usize {
    d * d + d - 1
}

/// The maximum possible rank `dn − (d² + d − 1)` (zero if negative).
pub fn max_rank(d: usize, n: usize) -> usize {
    (d * n).saturating_sub(trivial_flex_dimension(d))
}

/// Jacobian of the measurement map: one row per hyperedge, `d` columns per
/// vertex (vertex-major).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityMatrix {
    d: usize,
    n: usize,
    matrix: RationalMatrix,
}

impl RigidityMatrix {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    /// The `d` entries of row `h` belonging to vertex `v` (1-based).
    pub fn block(&self, h: usize, v: usize) -> &[Rational] {
        &self.matrix.row(h)[(v - 1) * self.d..v * self.d]
    }
}

impl Deref for RigidityMatrix {
    type Target = RationalMatrix;
    fn deref(&self) -> &RationalMatrix {
        &self.matrix
    }
}

pub fn rigidity_matrix(theta: &Hypergraph, p: &Configuration) -> Result<RigidityMatrix> {
    if theta.d() != p.d() || theta.n() != p.n() {
        return Err(Error::InvalidParameters("hypergraph and configuration sizes differ".into()));
    }
    let (d, n) = (p.d(), p.n());
    let mut matrix = RationalMatrix::zeros(theta.m(), d * n);
    for (row, h) in theta.hyperedges().iter().enumerate() {
        let c = p.simplex_matrix(h.vertices());
        for (col, &v) in h.vertices().iter().enumerate() {
            for k in 0..d {
                // ∂ det C / ∂ C[k+1][col] is the (k+1, col) cofactor.
                let cof = minor(&c, k + 1, col).determinant();
                let entry = if (k + 1 + col) % 2 == 0 { cof } else { -cof };
                matrix[(row, (v - 1) * d + k)] = entry;
            }
        }
    }
    Ok(RigidityMatrix { d, n, matrix })
}

pub fn rank(m: &RationalMatrix) -> usize {
    m.rank()
}

pub fn is_infinitesimally_rigid(theta: &Hypergraph, p: &Configuration) -> Result<bool> {
    let r = rigidity_matrix(theta, p)?;
    Ok(r.rank() == max_rank(theta.d(), theta.n()))
}

/// Seed of the `i`-th trial configuration.
fn trial_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Maximum rank of `R(Θ, p)` over `trials` random rational configurations.
/// Rank is lower semicontinuous, so this never over-reports the generic rank.
pub fn generic_rank(theta: &Hypergraph, trials: usize, seed: u64) -> Result<usize> {
    if trials == 0 {
        return Err(Error::InvalidParameters("trials must be at least 1".into()));
    }
    let ranks: Result<Vec<usize>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let p = random_generic_configuration(theta.d(), theta.n(), trial_seed(seed, i), GENERIC_BOUND)?;
            Ok(rigidity_matrix(theta, &p)?.rank())
        })
        .collect();
    Ok(ranks?.into_iter().max().unwrap_or(0))
}

pub fn is_generically_rigid(theta: &Hypergraph, trials: usize, seed: u64) -> Result<bool> {
    Ok(generic_rank(theta, trials, seed)? == max_rank(theta.d(), theta.n()))
}

pub fn is_minimally_rigid(theta: &Hypergraph, trials: usize, seed: u64) -> Result<bool> {
    Ok(theta.m() == max_rank(theta.d(), theta.n()) && is_generically_rigid(theta, trials, seed)?)
}

/// Kernel of a rigidity matrix together with the dimension of its trivial
/// part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlexSpace {
    pub basis: Vec<Vec<Rational>>,
    pub trivial_dimension: usize,
}

impl FlexSpace {
    pub fn nullity(&self) -> usize {
        self.basis.len()
    }

    pub fn nontrivial_dimension(&self) -> usize {
        self.nullity() - self.trivial_dimension
    }
}

/// Infinitesimal flexes of `(Θ, p)`. The trivial dimension is the nullity of
/// the complete hypergraph's rigidity matrix at the same `p`.
pub fn flex_space(theta: &Hypergraph, p: &Configuration) -> Result<FlexSpace> {
    if p.is_flat() {
        return Err(Error::FlatConfiguration);
    }
    let r = rigidity_matrix(theta, p)?;
    let complete = Hypergraph::complete(p.d(), p.n())?;
    let trivial_rank = rigidity_matrix(&complete, p)?.rank();
    Ok(FlexSpace { basis: r.kernel_basis(), trivial_dimension: p.d() * p.n() - trivial_rank })
}

/// Rank summary emitted by the `rank` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub rank: usize,
    pub max_rank: usize,
    pub nullity: usize,
    pub trivial_dim: usize,
    pub nontrivial_flex_dim: usize,
}

pub fn rank_report(theta: &Hypergraph, p: &Configuration) -> Result<RankReport> {
    let flex = flex_space(theta, p)?;
    let nullity = flex.nullity();
    Ok(RankReport {
        rank: theta.d() * theta.n() - nullity,
        max_rank: max_rank(theta.d(), theta.n()),
        nullity,
        trivial_dim: flex.trivial_dimension,
        nontrivial_flex_dim: flex.nontrivial_dimension(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framework::measure;
    use crate::hypergraph::{fan_around, homology_coefficients, subdivision_family};
    use crate::matrix::is_zero_vec;
    use crate::rational::{int, rat};
    use num_traits::Zero;

    fn unit_triangle() -> Configuration {
        Configuration::new(2, vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![int(0), int(1)]]).unwrap()
    }

    #[test]
    fn single_triangle_row() {
        let t = Hypergraph::simplex(2).unwrap();
        let r = rigidity_matrix(&t, &unit_triangle()).unwrap();
        let expected: Vec<Rational> = [-1, -1, 1, 0, 0, 1].iter().map(|&v| int(v)).collect();
        assert_eq!(r.row(0), expected.as_slice());
        assert!(is_infinitesimally_rigid(&t, &unit_triangle()).unwrap());
        let flex = flex_space(&t, &unit_triangle()).unwrap();
        assert_eq!((flex.nullity(), flex.nontrivial_dimension()), (5, 0));
    }

    /// The volume is affine in each coordinate separately, so a one-sided
    /// difference quotient is the exact partial derivative.
    #[test]
    fn rows_match_difference_quotients() {
        let theta = Hypergraph::bipyramid(6).unwrap();
        let p = random_generic_configuration(2, 6, 9, 50).unwrap();
        let r = rigidity_matrix(&theta, &p).unwrap();
        let base = measure(&theta, &p).unwrap();
        let step = rat(1, 7);
        for v in 1..=6 {
            for k in 0..2 {
                let mut pts = p.points().to_vec();
                pts[v - 1][k] += &step;
                let moved = measure(&theta, &Configuration::new(2, pts).unwrap()).unwrap();
                for (row, (a, b)) in moved.values.iter().zip(&base.values).enumerate() {
                    assert_eq!((a - b) / &step, r[(row, (v - 1) * 2 + k)]);
                }
            }
        }
    }

    #[test]
    fn translations_are_flexes_and_blocks_are_sparse() {
        let theta = Hypergraph::bipyramid(7).unwrap();
        let p = random_generic_configuration(2, 7, 4, 20).unwrap();
        let r = rigidity_matrix(&theta, &p).unwrap();
        let tx: Vec<Rational> = (0..14).map(|i| if i % 2 == 0 { int(1) } else { int(0) }).collect();
        assert!(is_zero_vec(&r.mul_vec(&tx)));
        for (i, h) in theta.hyperedges().iter().enumerate() {
            for v in (1..=7).filter(|&v| !h.contains(v)) {
                assert!(r.block(i, v).iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn sphere_rows_satisfy_homology_relation() {
        let theta = Hypergraph::bipyramid(8).unwrap();
        let c = homology_coefficients(&theta).unwrap();
        let weights: Vec<Rational> = c.coefficients.iter().map(|&x| int(x.into())).collect();
        for seed in 0..3 {
            let p = random_generic_configuration(2, 8, seed, 100).unwrap();
            let r = rigidity_matrix(&theta, &p).unwrap();
            assert!(is_zero_vec(&r.left_mul_vec(&weights)));
            assert_eq!(r.rank(), 2 * 8 - 5);
        }
    }

    #[test]
    fn tetrahedron_rank_and_flexes() {
        let k4 = Hypergraph::complete(2, 4).unwrap();
        let p = random_generic_configuration(2, 4, 1, 100).unwrap();
        assert_eq!(rigidity_matrix(&k4, &p).unwrap().rank(), 3);
        assert!(is_infinitesimally_rigid(&k4, &p).unwrap());
        let flex = flex_space(&k4, &p).unwrap();
        assert_eq!((flex.nullity(), flex.trivial_dimension, flex.nontrivial_dimension()), (5, 5, 0));
    }

    #[test]
    fn octahedron_minus_two_adjacent_faces_flexes() {
        let oct = Hypergraph::bipyramid(6).unwrap();
        let fan = fan_around(&oct, 6, 2, 2).unwrap();
        let cut = oct.without(&fan).unwrap();
        let p = random_generic_configuration(2, 6, 2, 100).unwrap();
        assert!(!is_infinitesimally_rigid(&cut, &p).unwrap());
        assert_eq!(rigidity_matrix(&cut, &p).unwrap().rank(), 2 * 6 - 5 - 1);
        assert_eq!(flex_space(&cut, &p).unwrap().nontrivial_dimension(), 1);
    }

    #[test]
    fn generic_rigidity_decisions() {
        assert!(is_generically_rigid(&Hypergraph::bipyramid(7).unwrap(), 3, 0).unwrap());
        let k5 = Hypergraph::complete(2, 5).unwrap();
        let isolated: Vec<Vec<usize>> =
            k5.hyperedges().iter().filter(|h| h.contains(5)).map(|h| h.vertices().to_vec()).collect();
        assert!(!is_generically_rigid(&k5.without(&isolated).unwrap(), 3, 0).unwrap());
        let two = Hypergraph::new(2, 6, [vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert!(!is_generically_rigid(&two, 3, 0).unwrap());
        assert!(generic_rank(&two, 0, 0).is_err());
    }

    #[test]
    fn minimal_rigidity() {
        for n in 3..9 {
            assert!(is_minimally_rigid(&subdivision_family(2, n).unwrap(), 3, 5).unwrap());
        }
        for n in 5..9 {
            assert!(!is_minimally_rigid(&Hypergraph::bipyramid(n).unwrap(), 3, 5).unwrap());
        }
        let k4_minus = Hypergraph::complete(2, 4).unwrap().without(&[vec![2, 3, 4]]).unwrap();
        assert!(is_minimally_rigid(&k4_minus, 3, 5).unwrap());
    }

    #[test]
    fn three_dimensional_family() {
        for n in 4..8 {
            let theta = subdivision_family(3, n).unwrap();
            assert!(is_minimally_rigid(&theta, 3, 1).unwrap());
        }
        let p = random_generic_configuration(3, 6, 3, 100).unwrap();
        let flex = flex_space(&subdivision_family(3, 6).unwrap(), &p).unwrap();
        assert_eq!(flex.trivial_dimension, trivial_flex_dimension(3));
        assert_eq!(flex.nontrivial_dimension(), 0);
    }

    #[test]
    fn flat_configurations_are_rejected() {
        let t = Hypergraph::simplex(2).unwrap();
        let flat =
            Configuration::new(2, vec![vec![int(0), int(0)], vec![int(1), int(1)], vec![int(2), int(2)]]).unwrap();
        assert!(matches!(flex_space(&t, &flat), Err(Error::FlatConfiguration)));
    }

    #[test]
    fn report_fields() {
        let k4 = Hypergraph::complete(2, 4).unwrap();
        let p = random_generic_configuration(2, 4, 8, 100).unwrap();
        let rep = rank_report(&k4, &p).unwrap();
        assert_eq!(rep, RankReport { rank: 3, max_rank: 3, nullity: 5, trivial_dim: 5, nontrivial_flex_dim: 0 });
    }
}
