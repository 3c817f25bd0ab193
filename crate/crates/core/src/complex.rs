//! Finite abstract simplicial complexes with a dimension cap.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A simplex as its sorted vertex list.
pub type Simplex = Vec<u32>;

/// A downward-closed family of simplices on vertices `0..n_vertices`.
///
/// `simplices[d]` holds the `d`-simplices in lexicographic order, so lookups
/// are binary searches. Simplices above `k_max` were never enumerated; a
/// complex built from an explicit facet list is complete and gets
/// `k_max = dim + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    n_vertices: usize,
    k_max: usize,
    simplices: Vec<Vec<Simplex>>,
    vertex_labels: Option<Vec<usize>>,
}

impl SimplicialComplex {
    /// Closure of `facets`, capped at dimension `k_max`.
    pub fn from_facets_capped<I, S>(n_vertices: usize, k_max: usize, facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let mut levels: Vec<BTreeSet<Simplex>> = vec![BTreeSet::new(); k_max + 1];
        for v in 0..n_vertices as u32 {
            levels[0].insert(vec![v]);
        }
        for facet in facets {
            let mut s: Simplex = facet.as_ref().to_vec();
            s.sort_unstable();
            if s.is_empty() {
                continue;
            }
            if s.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidArgument(format!("repeated vertex in simplex {s:?}")));
            }
            if let Some(&v) = s.last() {
                if v as usize >= n_vertices {
                    return Err(Error::PointOutOfRange(v as usize));
                }
            }
            if s.len() - 1 > k_max {
                return Err(Error::InvalidArgument(format!(
                    "simplex {s:?} exceeds dimension cap {k_max}"
                )));
            }
            insert_closure(&mut levels, &s);
        }
        Ok(Self::from_levels(n_vertices, k_max, levels.into_iter().map(|l| l.into_iter().collect()).collect()))
    }

    /// Closure of `facets`; the result is complete, so `k_max = dim + 1`.
    pub fn from_facets<I, S>(n_vertices: usize, facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let facets: Vec<Simplex> = facets.into_iter().map(|f| f.as_ref().to_vec()).collect();
        let top = facets.iter().map(|f| f.len().saturating_sub(1)).max().unwrap_or(0);
        Self::from_facets_capped(n_vertices, top + 1, facets)
    }

    /// A graph as a complete 1-complex.
    pub fn from_edges(n_vertices: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let facets: Vec<[u32; 2]> = edges.iter().map(|&(a, b)| [a, b]).collect();
        Self::from_facets_capped(n_vertices, 2, facets)
    }

    /// Cycle graph `C_n` (n >= 3).
    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
        Self::from_edges(n, &edges).expect("valid cycle")
    }

    /// Trusted constructor; `levels` must already be sorted and downward closed.
    pub(crate) fn from_levels(n_vertices: usize, k_max: usize, mut levels: Vec<Vec<Simplex>>) -> Self {
        levels.resize(k_max + 1, Vec::new());
        Self { n_vertices, k_max, simplices: levels, vertex_labels: None }
    }

    pub fn with_vertex_labels(mut self, labels: Vec<usize>) -> Self {
        assert_eq!(labels.len(), self.n_vertices);
        self.vertex_labels = Some(labels);
        self
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn vertex_labels(&self) -> Option<&[usize]> {
        self.vertex_labels.as_deref()
    }

    /// Highest dimension with at least one simplex; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().rposition(|l| !l.is_empty())
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.simplices.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    /// Number of stored simplices of every dimension, `0..=k_max`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, simplex: &[u32]) -> Option<usize> {
        let d = simplex.len().checked_sub(1)?;
        self.simplices.get(d)?.binary_search_by(|s| s.as_slice().cmp(simplex)).ok()
    }

    pub fn contains(&self, simplex: &[u32]) -> bool {
        self.index_of(simplex).is_some()
    }

    /// Adjacency lists of the 1-skeleton, sorted.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for e in self.simplices(1) {
            adj[e[0] as usize].push(e[1]);
            adj[e[1] as usize].push(e[0]);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Checks that every codimension-1 face of every stored simplex is stored.
    pub fn is_downward_closed(&self) -> bool {
        for d in 1..self.simplices.len() {
            for s in &self.simplices[d] {
                for skip in 0..s.len() {
                    let face: Simplex = face_without(s, skip);
                    if !self.contains(&face) {
                        return false;
                    }
                }
            }
        }
        self.simplices(0).iter().all(|v| (v[0] as usize) < self.n_vertices)
    }

    /// Simplices that are not a face of any stored higher simplex.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut covered: Vec<Vec<bool>> = self.simplices.iter().map(|l| vec![false; l.len()]).collect();
        for d in 1..self.simplices.len() {
            for s in &self.simplices[d] {
                for skip in 0..s.len() {
                    let face = face_without(s, skip);
                    if let Some(i) = self.index_of(&face) {
                        covered[d - 1][i] = true;
                    }
                }
            }
        }
        let mut out = Vec::new();
        for (d, level) in self.simplices.iter().enumerate() {
            for (i, s) in level.iter().enumerate() {
                if !covered[d][i] {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Induced subcomplex on `vertices` (given in the new vertex order).
    /// Returns the subcomplex with vertices renumbered `0..vertices.len()`.
    pub fn induced(&self, vertices: &[u32]) -> SimplicialComplex {
        let mut local = vec![u32::MAX; self.n_vertices];
        for (i, &v) in vertices.iter().enumerate() {
            local[v as usize] = i as u32;
        }
        let mut levels: Vec<Vec<Simplex>> = vec![Vec::new(); self.k_max + 1];
        for (d, level) in self.simplices.iter().enumerate() {
            for s in level {
                if s.iter().all(|&v| local[v as usize] != u32::MAX) {
                    let mut t: Simplex = s.iter().map(|&v| local[v as usize]).collect();
                    t.sort_unstable();
                    levels[d].push(t);
                }
            }
        }
        for l in &mut levels {
            l.sort_unstable();
        }
        SimplicialComplex::from_levels(vertices.len(), self.k_max, levels)
    }

    /// Serializes as `cplx v1 <nverts> <kmax>` followed by one maximal simplex per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("cplx v1 {} {}\n", self.n_vertices, self.k_max);
        for s in self.maximal_simplices() {
            let line: Vec<String> = s.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 4 || h[0] != "cplx" || h[1] != "v1" {
            return Err(Error::parse(1, format!("bad header {header:?}")));
        }
        let n: usize = h[2].parse().map_err(|_| Error::parse(1, "bad vertex count"))?;
        let k_max: usize = h[3].parse().map_err(|_| Error::parse(1, "bad kmax"))?;
        let mut facets = Vec::new();
        for (i, line) in lines {
            let s: std::result::Result<Simplex, _> = line.split_whitespace().map(str::parse::<u32>).collect();
            facets.push(s.map_err(|_| Error::parse(i + 1, "bad vertex id"))?);
        }
        Self::from_facets_capped(n, k_max, facets)
    }
}

pub(crate) fn face_without(s: &[u32], skip: usize) -> Simplex {
    s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect()
}

fn insert_closure(levels: &mut [BTreeSet<Simplex>], s: &[u32]) {
    let d = s.len() - 1;
    if !levels[d].insert(s.to_vec()) || d == 0 {
        return;
    }
    for skip in 0..s.len() {
        insert_closure(levels, &face_without(s, skip));
    }
}
