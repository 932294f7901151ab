//! Uniform hypergraphs with a canonical, lexicographically sorted hyperedge
//! list and 1-based vertex labels.

mod ops;
mod sphere;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ops::{
    fan_around, glue_at_hyperedge, glue_at_hyperedge_with_map, link_cycle, simplex_subdivision_split,
    subdivision_family, vertex_split_2d, Glued,
};
pub use sphere::{boundary_chain, homology_coefficients, is_triangulation_of_s2, OrientationVector};

/// A hyperedge: a strictly increasing tuple of 1-based vertex labels.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Hyperedge(Vec<usize>);

impl Hyperedge {
    /// Sorts the given labels; rejects repeated labels and label 0.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameters(format!("hyperedge {vertices:?} repeats a vertex")));
        }
        if vertices.first() == Some(&0) {
            return Err(Error::InvalidParameters("vertex labels are 1-based".into()));
        }
        Ok(Self(vertices))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position of `v` inside the tuple.
    pub fn position(&self, v: usize) -> Option<usize> {
        self.0.binary_search(&v).ok()
    }

    /// The hyperedge with `v` removed (not itself a valid hyperedge).
    pub(crate) fn without(&self, v: usize) -> Vec<usize> {
        self.0.iter().copied().filter(|&u| u != v).collect()
    }
}

impl From<Hyperedge> for Vec<usize> {
    fn from(h: Hyperedge) -> Self {
        h.0
    }
}

impl TryFrom<Vec<usize>> for Hyperedge {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Hyperedge::new(v)
    }
}

impl fmt::Debug for Hyperedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Hyperedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        if self.0.iter().all(|&v| v < 10) {
            write!(f, "{}", parts.concat())
        } else {
            write!(f, "{{{}}}", parts.join(","))
        }
    }
}

/// A `(d+1)`-uniform hypergraph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(into = "HypergraphRepr", try_from = "HypergraphRepr")]
pub struct Hypergraph {
    d: usize,
    n: usize,
    hyperedges: Vec<Hyperedge>,
}

/// On-disk layout: `{"d": 2, "n": 4, "hyperedges": [[1,2,3], ...]}`.
#[derive(Serialize, Deserialize)]
struct HypergraphRepr {
    d: usize,
    n: usize,
    hyperedges: Vec<Vec<usize>>,
}

impl From<Hypergraph> for HypergraphRepr {
    fn from(h: Hypergraph) -> Self {
        Self { d: h.d, n: h.n, hyperedges: h.hyperedges.into_iter().map(Into::into).collect() }
    }
}

impl TryFrom<HypergraphRepr> for Hypergraph {
    type Error = Error;
    fn try_from(r: HypergraphRepr) -> Result<Self> {
        Hypergraph::new(r.d, r.n, r.hyperedges)
    }
}

impl Hypergraph {
    /// Validates and canonicalises: each hyperedge is sorted, the list is
    /// sorted lexicographically, duplicates are rejected.
    pub fn new<I>(d: usize, n: usize, hyperedges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        if d == 0 {
            return Err(Error::InvalidParameters("dimension must be positive".into()));
        }
        let mut edges = Vec::new();
        for raw in hyperedges {
            let h = Hyperedge::new(raw)?;
            if h.len() != d + 1 {
                return Err(Error::InvalidParameters(format!(
                    "hyperedge {h} has {} vertices, expected {}",
                    h.len(),
                    d + 1
                )));
            }
            if h.vertices().last().is_some_and(|&v| v > n) {
                return Err(Error::InvalidParameters(format!("hyperedge {h} uses a vertex outside 1..={n}")));
            }
            edges.push(h);
        }
        edges.sort();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameters(format!("duplicate hyperedge {}", w[0])));
        }
        Ok(Self { d, n, hyperedges: edges })
    }

    pub(crate) fn from_sorted_unchecked(d: usize, n: usize, hyperedges: Vec<Hyperedge>) -> Self {
        debug_assert!(hyperedges.windows(2).all(|w| w[0] < w[1]));
        Self { d, n, hyperedges }
    }

    /// `K_n^{d+1}`: every `(d+1)`-subset of `1..=n`.
    pub fn complete(d: usize, n: usize) -> Result<Self> {
        if d == 0 || n < d + 1 {
            return Err(Error::InvalidParameters(format!(
                "complete hypergraph needs d >= 1 and n >= d+1 (d = {d}, n = {n})"
            )));
        }
        let edges = combinations(n, d + 1).into_iter().map(Hyperedge).collect();
        Ok(Self::from_sorted_unchecked(d, n, edges))
    }

    /// The `(n-2)`-gonal bipyramid: apexes `1` and `n`, equator cycle
    /// `2, 3, …, n-1`.
    pub fn bipyramid(n: usize) -> Result<Self> {
        if n < 5 {
            return Err(Error::InvalidParameters(format!("bipyramid needs n >= 5, got {n}")));
        }
        let mut edges = Vec::with_capacity(2 * n - 4);
        for apex in [1, n] {
            for i in 2..n - 1 {
                edges.push(vec![apex, i, i + 1]);
            }
            edges.push(vec![apex, 2, n - 1]);
        }
        Self::new(2, n, edges)
    }

    /// A single hyperedge on `d+1` vertices.
    pub fn simplex(d: usize) -> Result<Self> {
        Self::new(d, d + 1, [(1..=d + 1).collect()])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.hyperedges.len()
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.hyperedges
    }

    /// Index of the hyperedge with the given vertex set (any order).
    pub fn index_of(&self, vertices: &[usize]) -> Option<usize> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.hyperedges.binary_search_by(|h| h.0.as_slice().cmp(&key)).ok()
    }

    pub fn contains(&self, vertices: &[usize]) -> bool {
        self.index_of(vertices).is_some()
    }

    /// The distinct 2-subsets covered by some hyperedge (the number `s`).
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for h in &self.hyperedges {
            let v = h.vertices();
            for a in 0..v.len() {
                for b in a + 1..v.len() {
                    out.insert((v[a], v[b]));
                }
            }
        }
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.hyperedges.iter().filter(|h| h.contains(v)).count()
    }

    /// Copy with the listed hyperedges deleted.
    pub fn without(&self, remove: &[Vec<usize>]) -> Result<Self> {
        let mut idx = Vec::new();
        for r in remove {
            idx.push(self.index_of(r).ok_or_else(|| Error::MissingHyperedge(r.clone()))?);
        }
        let edges =
            self.hyperedges.iter().enumerate().filter(|(i, _)| !idx.contains(i)).map(|(_, h)| h.clone()).collect();
        Ok(Self::from_sorted_unchecked(self.d, self.n, edges))
    }

    /// Applies the relabelling `old ↦ map[old - 1]`, which must be a
    /// permutation of `1..=n`.
    pub fn relabel(&self, map: &[usize]) -> Result<Self> {
        check_permutation(map, self.n)?;
        Self::new(self.d, self.n, self.hyperedges.iter().map(|h| h.vertices().iter().map(|&v| map[v - 1]).collect()))
    }
}

pub(crate) fn check_permutation(map: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if map.len() != n {
        return Err(Error::InvalidParameters(format!("relabelling has length {} not {n}", map.len())));
    }
    for &v in map {
        if v == 0 || v > n || std::mem::replace(&mut seen[v - 1], true) {
            return Err(Error::InvalidParameters("relabelling is not a permutation".into()));
        }
    }
    Ok(())
}

/// All `k`-subsets of `1..=n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - (k - 1 - i)) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
