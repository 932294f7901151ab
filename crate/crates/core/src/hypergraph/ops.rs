//! Constructive operations: simplex subdivision, planar vertex splits and
//! gluing at a common hyperedge.

use std::collections::{BTreeMap, BTreeSet};

use super::{Hyperedge, Hypergraph};
use crate::error::{Error, Result};

/// The cyclic order of the link of `v` in a 2-dimensional hypergraph, or
/// `None` when the link is empty or not a single cycle. The walk starts at
/// the smallest neighbour and first steps to the smaller of its two link
/// neighbours.
pub fn link_cycle(theta: &Hypergraph, v: usize) -> Option<Vec<usize>> {
    if theta.d() != 2 {
        return None;
    }
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for h in theta.hyperedges().iter().filter(|h| h.contains(v)) {
        let e = h.without(v);
        adj.entry(e[0]).or_default().push(e[1]);
        adj.entry(e[1]).or_default().push(e[0]);
    }
    if adj.len() < 3 || adj.values().any(|nb| nb.len() != 2) {
        return None;
    }
    let start = *adj.keys().next()?;
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = *adj[&start].iter().min()?;
    while cur != start {
        cycle.push(cur);
        let next = adj[&cur].iter().copied().find(|&x| x != prev)?;
        prev = cur;
        cur = next;
    }
    (cycle.len() == adj.len()).then_some(cycle)
}

/// `len` consecutive hyperedges around `v`, walking its link from `start`.
/// The result is a valid fan for [`vertex_split_2d`] when `1 <= len < deg(v)`.
pub fn fan_around(theta: &Hypergraph, v: usize, start: usize, len: usize) -> Result<Vec<Vec<usize>>> {
    let cycle = link_cycle(theta, v).ok_or_else(|| Error::InvalidFan(format!("link of vertex {v} is not a cycle")))?;
    let k = cycle.len();
    let pos = cycle
        .iter()
        .position(|&u| u == start)
        .ok_or_else(|| Error::InvalidFan(format!("{start} is not a neighbour of {v}")))?;
    if len == 0 || len >= k {
        return Err(Error::InvalidFan(format!("fan length {len} must be in 1..{k}")));
    }
    Ok((0..len)
        .map(|i| {
            let mut h = vec![v, cycle[(pos + i) % k], cycle[(pos + i + 1) % k]];
            h.sort_unstable();
            h
        })
        .collect())
}

/// Replaces hyperedge `h` by the `d+1` simplices obtained by coning its
/// facets to a new vertex `n+1`.
pub fn simplex_subdivision_split(theta: &Hypergraph, h: &[usize]) -> Result<Hypergraph> {
    let idx = theta.index_of(h).ok_or_else(|| Error::MissingHyperedge(h.to_vec()))?;
    let target = theta.hyperedges()[idx].clone();
    let new = theta.n() + 1;
    let mut edges: Vec<Vec<usize>> =
        theta.hyperedges().iter().filter(|e| **e != target).map(|e| e.vertices().to_vec()).collect();
    for &j in target.vertices() {
        let mut e = target.without(j);
        e.push(new);
        edges.push(e);
    }
    Hypergraph::new(theta.d(), new, edges)
}

/// Minimally rigid family grown from a single simplex by repeatedly
/// subdividing the lexicographically last hyperedge until there are `n`
/// vertices.
pub fn subdivision_family(d: usize, n: usize) -> Result<Hypergraph> {
    if n < d + 1 {
        return Err(Error::InvalidParameters(format!("need n >= d+1, got n = {n}, d = {d}")));
    }
    let mut theta = Hypergraph::simplex(d)?;
    while theta.n() < n {
        let last = theta.hyperedges().last().expect("non-empty").vertices().to_vec();
        theta = simplex_subdivision_split(&theta, &last)?;
    }
    Ok(theta)
}

/// Planar vertex split at `v`.
///
/// `fan` lists hyperedges around `v`, consecutive ones sharing an edge
/// through `v`. Its outer boundary is a path `a_0, …, a_j`. The fan is
/// deleted and a new vertex `w = n+1` is joined to every path edge and to
/// the two edges `a_0 v`, `a_j v`, so `m` grows by two.
pub fn vertex_split_2d(theta: &Hypergraph, v: usize, fan: &[Vec<usize>]) -> Result<Hypergraph> {
    if theta.d() != 2 {
        return Err(Error::UnsupportedDimension { expected: 2, found: theta.d() });
    }
    if fan.is_empty() {
        return Err(Error::InvalidFan("fan is empty".into()));
    }
    let mut members = Vec::with_capacity(fan.len());
    for raw in fan {
        let idx = theta.index_of(raw).ok_or_else(|| Error::MissingHyperedge(raw.clone()))?;
        let h = theta.hyperedges()[idx].clone();
        if !h.contains(v) {
            return Err(Error::InvalidFan(format!("{h} does not contain vertex {v}")));
        }
        if members.contains(&h) {
            return Err(Error::InvalidFan(format!("{h} repeated")));
        }
        members.push(h);
    }

    let path = fan_path(v, &members)?;
    let distinct: BTreeSet<usize> = path.iter().copied().collect();
    if distinct.len() != path.len() {
        return Err(Error::InvalidFan("fan closes up around the vertex".into()));
    }

    let w = theta.n() + 1;
    let mut edges: Vec<Vec<usize>> =
        theta.hyperedges().iter().filter(|h| !members.contains(h)).map(|h| h.vertices().to_vec()).collect();
    for pair in path.windows(2) {
        edges.push(vec![pair[0], pair[1], w]);
    }
    edges.push(vec![path[0], v, w]);
    edges.push(vec![*path.last().expect("non-empty path"), v, w]);
    Hypergraph::new(2, w, edges)
}

/// Boundary path `a_0 … a_j` of a fan around `v`.
fn fan_path(v: usize, fan: &[Hyperedge]) -> Result<Vec<usize>> {
    if fan.len() == 1 {
        return Ok(fan[0].without(v));
    }
    let mut shared = Vec::with_capacity(fan.len() - 1);
    for pair in fan.windows(2) {
        let common: Vec<usize> =
            pair[0].vertices().iter().copied().filter(|&u| u != v && pair[1].contains(u)).collect();
        if common.len() != 1 {
            return Err(Error::InvalidFan(format!("{} and {} do not share an edge through {v}", pair[0], pair[1])));
        }
        shared.push(common[0]);
    }
    let other = |h: &Hyperedge, known: usize| -> usize {
        h.vertices().iter().copied().find(|&u| u != v && u != known).expect("triangle")
    };
    let mut path = vec![other(&fan[0], shared[0])];
    path.extend_from_slice(&shared);
    path.push(other(fan.last().expect("non-empty"), *shared.last().expect("non-empty")));
    Ok(path)
}

/// Result of gluing: the merged hypergraph and where each vertex of the
/// second input ended up (`second_map[v - 1]` is the new label of `v`).
/// Vertices of the first input keep their labels.
#[derive(Clone, Debug)]
pub struct Glued {
    pub hypergraph: Hypergraph,
    pub second_map: Vec<usize>,
}

/// Glues `theta2` onto `theta1` by identifying `h2[k]` with `h1[k]`. The
/// remaining vertices of `theta2` are numbered after `theta1`'s in ascending
/// order. With `keep_common == false` the identified hyperedge is deleted.
pub fn glue_at_hyperedge_with_map(
    theta1: &Hypergraph,
    h1: &[usize],
    theta2: &Hypergraph,
    h2: &[usize],
    keep_common: bool,
) -> Result<Glued> {
    if theta1.d() != theta2.d() {
        return Err(Error::InvalidParameters(format!("cannot glue d = {} to d = {}", theta1.d(), theta2.d())));
    }
    if h1.len() != h2.len() || h1.len() != theta1.d() + 1 {
        return Err(Error::InvalidParameters("gluing hyperedges must have d+1 vertices".into()));
    }
    if !theta1.contains(h1) {
        return Err(Error::MissingHyperedge(h1.to_vec()));
    }
    if !theta2.contains(h2) {
        return Err(Error::MissingHyperedge(h2.to_vec()));
    }
    let n1 = theta1.n();
    let mut second_map = vec![0; theta2.n()];
    for (&a, &b) in h1.iter().zip(h2) {
        second_map[b - 1] = a;
    }
    let mut next = n1;
    for slot in second_map.iter_mut().filter(|s| **s == 0) {
        next += 1;
        *slot = next;
    }

    let mut edges: BTreeSet<Vec<usize>> = theta1.hyperedges().iter().map(|h| h.vertices().to_vec()).collect();
    for h in theta2.hyperedges() {
        let mut e: Vec<usize> = h.vertices().iter().map(|&u| second_map[u - 1]).collect();
        e.sort_unstable();
        edges.insert(e);
    }
    if !keep_common {
        let mut common = h1.to_vec();
        common.sort_unstable();
        edges.remove(&common);
    }
    Ok(Glued { hypergraph: Hypergraph::new(theta1.d(), next, edges)?, second_map })
}

pub fn glue_at_hyperedge(
    theta1: &Hypergraph,
    h1: &[usize],
    theta2: &Hypergraph,
    h2: &[usize],
    keep_common: bool,
) -> Result<Hypergraph> {
    glue_at_hyperedge_with_map(theta1, h1, theta2, h2, keep_common).map(|g| g.hypergraph)
}
