//! Triangulations of the 2-sphere and their top homology class.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::Hypergraph;
use crate::error::{Error, Result};

/// Coefficients `c_h ∈ {−1, +1}` (parallel to the hyperedge list) of the
/// fundamental 2-cycle, normalised so the first entry is `+1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationVector {
    pub coefficients: Vec<i8>,
}

impl OrientationVector {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn negated(&self) -> Self {
        Self { coefficients: self.coefficients.iter().map(|c| -c).collect() }
    }

    pub fn is_canonical(&self) -> bool {
        self.coefficients.first() == Some(&1)
    }
}

/// `∂₂(Σ c_h [h])` as a map from oriented edge `(a, b)`, `a < b`, to its
/// integer coefficient; zero coefficients are dropped.
pub fn boundary_chain(theta: &Hypergraph, coefficients: &[i8]) -> BTreeMap<(usize, usize), i64> {
    let mut chain = BTreeMap::new();
    for (h, &c) in theta.hyperedges().iter().zip(coefficients) {
        let v = h.vertices();
        // ∂[v0 v1 v2] = [v1 v2] − [v0 v2] + [v0 v1]
        for (skip, sign) in [(0usize, 1i64), (1, -1), (2, 1)] {
            let e: Vec<usize> = (0..3).filter(|&i| i != skip).map(|i| v[i]).collect();
            *chain.entry((e[0], e[1])).or_insert(0) += sign * i64::from(c);
        }
    }
    chain.retain(|_, c| *c != 0);
    chain
}

/// Hyperedge indices incident to each edge.
fn edge_incidence(theta: &Hypergraph) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut inc: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, h) in theta.hyperedges().iter().enumerate() {
        let v = h.vertices();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            inc.entry((v[a], v[b])).or_default().push(i);
        }
    }
    inc
}

fn require_planar_dimension(theta: &Hypergraph) -> Result<()> {
    if theta.d() != 2 {
        return Err(Error::UnsupportedDimension { expected: 2, found: theta.d() });
    }
    Ok(())
}

/// Whether `theta` triangulates S²: every edge lies in exactly two
/// hyperedges, hyperedges are connected through shared edges, every vertex
/// link is one cycle, and `m = 2n − 4`, `s = 3n − 6`.
pub fn is_triangulation_of_s2(theta: &Hypergraph) -> Result<bool> {
    require_planar_dimension(theta)?;
    let n = theta.n();
    let m = theta.m();
    if n < 4 || m != 2 * n - 4 {
        return Ok(false);
    }
    let inc = edge_incidence(theta);
    if inc.len() != 3 * n - 6 || inc.values().any(|faces| faces.len() != 2) {
        return Ok(false);
    }
    // Connectivity of the dual graph.
    let mut seen = vec![false; m];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(f) = queue.pop_front() {
        for g in dual_neighbours(theta, &inc, f) {
            if !seen[g] {
                seen[g] = true;
                reached += 1;
                queue.push_back(g);
            }
        }
    }
    if reached != m {
        return Ok(false);
    }
    Ok((1..=n).all(|v| super::link_cycle(theta, v).is_some()))
}

fn dual_neighbours<'a>(
    theta: &'a Hypergraph,
    inc: &'a BTreeMap<(usize, usize), Vec<usize>>,
    f: usize,
) -> impl Iterator<Item = usize> + 'a {
    let v = theta.hyperedges()[f].vertices();
    [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])]
        .into_iter()
        .flat_map(move |e| inc[&e].iter().copied().filter(move |&g| g != f))
}

/// Sign with which the oriented edge `(a, b)`, `a < b`, appears in `∂[h]`.
fn induced_sign(h: &[usize], a: usize, b: usize) -> i8 {
    let third = h.iter().position(|&v| v != a && v != b).expect("edge inside face");
    // Removing position 0 or 2 gives +, removing position 1 gives −.
    if third == 1 {
        -1
    } else {
        1
    }
}

/// The canonical fundamental cycle of a triangulation of S², found by
/// propagating a coherent orientation across shared edges.
pub fn homology_coefficients(theta: &Hypergraph) -> Result<OrientationVector> {
    if !is_triangulation_of_s2(theta)? {
        return Err(Error::Topology("hypergraph is not a triangulation of S²".into()));
    }
    let m = theta.m();
    let inc = edge_incidence(theta);
    let mut coeff = vec![0i8; m];
    coeff[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        let v = theta.hyperedges()[f].vertices();
        for (a, b) in [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])] {
            let g = inc[&(a, b)].iter().copied().find(|&g| g != f).expect("two faces per edge");
            // c_f·σ_f + c_g·σ_g = 0 on the shared edge.
            let want = -coeff[f] * induced_sign(v, a, b) * induced_sign(theta.hyperedges()[g].vertices(), a, b);
            if coeff[g] == 0 {
                coeff[g] = want;
                queue.push_back(g);
            } else if coeff[g] != want {
                return Err(Error::Topology("surface is not orientable".into()));
            }
        }
    }
    Ok(OrientationVector { coefficients: coeff })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent check: expand each face into its three signed edges with
    /// the permutation-sign definition and sum.
    fn boundary_by_permutation_sign(theta: &Hypergraph, c: &[i8]) -> bool {
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (h, &ch) in theta.hyperedges().iter().zip(c) {
            let v = h.vertices();
            for k in 0..3 {
                let e: Vec<usize> = v.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, &x)| x).collect();
                let sign = if k % 2 == 0 { 1 } else { -1 };
                *acc.entry((e[0], e[1])).or_default() += sign * i64::from(ch);
            }
        }
        acc.values().all(|&x| x == 0)
    }

    #[test]
    fn tetrahedron_is_sphere() {
        let k4 = Hypergraph::complete(2, 4).unwrap();
        assert!(is_triangulation_of_s2(&k4).unwrap());
        let c = homology_coefficients(&k4).unwrap();
        assert_eq!(c.coefficients, vec![1, -1, 1, -1]);
        assert!(boundary_by_permutation_sign(&k4, &c.coefficients));
        assert!(boundary_chain(&k4, &c.coefficients).is_empty());
    }

    #[test]
    fn bipyramids_are_spheres() {
        for n in 5..12 {
            let b = Hypergraph::bipyramid(n).unwrap();
            assert!(is_triangulation_of_s2(&b).unwrap(), "n = {n}");
            let c = homology_coefficients(&b).unwrap();
            assert!(c.is_canonical());
            assert!(boundary_by_permutation_sign(&b, &c.coefficients));
            // Flipping every sign keeps the cycle but breaks canonical form.
            let neg = c.negated();
            assert!(boundary_by_permutation_sign(&b, &neg.coefficients));
            assert!(!neg.is_canonical());
        }
    }

    #[test]
    fn non_spheres_rejected() {
        let k5 = Hypergraph::complete(2, 5).unwrap();
        assert!(!is_triangulation_of_s2(&k5).unwrap());
        assert!(matches!(homology_coefficients(&k5), Err(Error::Topology(_))));
        // Two tetrahedra sharing only vertex 1: right counts fail already.
        let two = Hypergraph::new(
            2,
            7,
            [
                vec![1, 2, 3],
                vec![1, 2, 4],
                vec![1, 3, 4],
                vec![2, 3, 4],
                vec![1, 5, 6],
                vec![1, 5, 7],
                vec![1, 6, 7],
                vec![5, 6, 7],
            ],
        )
        .unwrap();
        assert!(!is_triangulation_of_s2(&two).unwrap());
        let k3 = Hypergraph::complete(3, 5).unwrap();
        assert!(matches!(is_triangulation_of_s2(&k3), Err(Error::UnsupportedDimension { .. })));
    }
}
