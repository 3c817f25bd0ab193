//! Graph substrates: labeled base graphs, their cyclic covers, and
//! shortest-path metric spaces on complexes.

use std::collections::{HashSet, VecDeque};

use super::{Geometry, MetricMeasureSpace};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// A finite multigraph whose oriented edges carry integer labels (the data of
/// a Z-cover). Loops and parallel edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub n_vertices: usize,
    /// `(tail, head, label)`.
    pub edges: Vec<(usize, usize, i64)>,
}

impl LabeledGraph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize, i64)>) -> Result<Self> {
        if let Some(&(u, v, _)) = edges.iter().find(|(u, v, _)| *u >= n_vertices || *v >= n_vertices) {
            return Err(Error::PointOutOfRange(u.max(v)));
        }
        Ok(Self { n_vertices, edges })
    }

    /// One vertex with one loop per label: a bouquet of circles.
    pub fn bouquet(labels: &[i64]) -> Self {
        Self { n_vertices: 1, edges: labels.iter().map(|&l| (0, 0, l)).collect() }
    }

    /// The 1-skeleton of `complex` with a label per edge (in the complex's
    /// edge order, oriented from smaller to larger vertex).
    pub fn from_complex(complex: &SimplicialComplex, labels: &[i64]) -> Result<Self> {
        let edges = complex.simplices(1);
        if labels.len() != edges.len() {
            return Err(Error::InvalidArgument(format!("{} labels for {} edges", labels.len(), edges.len())));
        }
        let edges = edges.iter().zip(labels).map(|(e, &l)| (e[0] as usize, e[1] as usize, l)).collect();
        Ok(Self { n_vertices: complex.n_vertices(), edges })
    }

    /// Realizes the multigraph as a simplicial 1-complex: a loop becomes a
    /// triangle boundary (two new vertices), a repeated parallel edge gets one
    /// subdivision vertex. New vertices are numbered after the originals.
    pub fn to_complex(&self) -> SimplicialComplex {
        realize(self.n_vertices, self.edges.iter().map(|&(u, v, _)| (u, v)))
    }
}

fn realize(n_vertices: usize, edges: impl Iterator<Item = (usize, usize)>) -> SimplicialComplex {
    let mut n = n_vertices;
    let mut seen: HashSet<(usize, usize)> = HashSet::new();
    let mut out: Vec<(u32, u32)> = Vec::new();
    for (u, v) in edges {
        if u == v {
            let (a, b) = (n, n + 1);
            n += 2;
            out.extend([(u as u32, a as u32), (a as u32, b as u32), (b as u32, u as u32)]);
        } else if !seen.insert((u.min(v), u.max(v))) {
            let m = n;
            n += 1;
            out.extend([(u as u32, m as u32), (m as u32, v as u32)]);
        } else {
            out.push((u as u32, v as u32));
        }
    }
    SimplicialComplex::from_edges(n, &out).expect("realized edges are valid")
}

/// The `n`-fold cyclic cover of `base`: vertex `(u, k)` is `u * n + k`, and each
/// base edge `u -> v` with label `l` lifts to `(u, k) -> (v, k + l mod n)`.
pub fn make_cyclic_cover(base: &LabeledGraph, n: i64) -> Result<SimplicialComplex> {
    if n <= 0 {
        return Err(Error::InvalidArgument(format!("cover degree must be positive, got {n}")));
    }
    let n_us = n as usize;
    let lifted = base.edges.iter().flat_map(|&(u, v, l)| {
        (0..n).map(move |k| (u * n_us + k as usize, v * n_us + (k + l).rem_euclid(n) as usize))
    });
    Ok(realize(base.n_vertices * n_us, lifted))
}

/// Vertices of `complex` with the shortest-path metric of its 1-skeleton
/// scaled by `edge_length`, unit weight per vertex, and injectivity radius
/// half the shortest cycle through each vertex (infinite on acyclic parts).
/// Vertices in different components are at infinite distance.
pub fn make_graph_space(complex: &SimplicialComplex, edge_length: f64) -> Result<MetricMeasureSpace> {
    if !(edge_length > 0.0 && edge_length.is_finite()) {
        return Err(Error::InvalidArgument(format!("edge length must be positive, got {edge_length}")));
    }
    let n = complex.n_vertices();
    if n == 0 {
        return Err(Error::EmptySpace);
    }
    let adj = complex.adjacency();
    let mut dist = vec![f64::INFINITY; n * n];
    let mut inj = vec![f64::INFINITY; n];
    for s in 0..n {
        let (hops, girth) = bfs_with_girth(&adj, s);
        for (t, h) in hops.into_iter().enumerate() {
            if let Some(h) = h {
                dist[s * n + t] = h as f64 * edge_length;
            }
        }
        if let Some(g) = girth {
            inj[s] = g as f64 * edge_length / 2.0;
        }
    }
    MetricMeasureSpace::from_parts(Geometry::Explicit { n, dist, geodesic: true }, vec![1.0; n], Some(inj))
}

/// BFS hop counts from `s` and the length of the shortest cycle through `s`.
fn bfs_with_girth(adj: &[Vec<u32>], s: usize) -> (Vec<Option<usize>>, Option<usize>) {
    let n = adj.len();
    let mut hops = vec![None; n];
    // Which neighbour of `s` each vertex was reached through.
    let mut branch = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    hops[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    let mut best: Option<usize> = None;
    while let Some(u) = queue.pop_front() {
        let hu = hops[u].unwrap();
        for &w in &adj[u] {
            let w = w as usize;
            match hops[w] {
                None => {
                    hops[w] = Some(hu + 1);
                    parent[w] = u;
                    branch[w] = if u == s { w } else { branch[u] };
                    queue.push_back(w);
                }
                Some(hw) => {
                    if w == parent[u] || u == parent[w] || w == s || u == s {
                        continue;
                    }
                    if branch[u] != branch[w] {
                        let len = hu + hw + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
    }
    (hops, best)
}
