//! Nerves of weighted ball covers.
//!
//! Vertex `i` of the nerve is the net point `x_i` with ball `B_E(x_i, rho_i)`
//! taken in the ball space `E` of the net's space (its ambient space when it
//! has one). A set of vertices spans a simplex when some sample point of `E`
//! lies in all of their balls.
//!
//! On geodesic substrates [`NerveOptions::edge_shortcut`] also admits an edge
//! when `d(x, y) < rho(x) + rho(y)`. That test is exact for edges, but the
//! triangles over such an edge still need a sample witness, so at coarse
//! resolution every shortcut edge can open a spurious 1-cycle. It is off by
//! default.

use rayon::prelude::*;

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::mmspace::MetricMeasureSpace;
use crate::netgen::WeightedNet;

/// Why a simplex is in the nerve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// Vertices are always present.
    Vertex,
    /// A point of the ball space lying in every ball.
    Sample(usize),
    /// An edge admitted by `d(x, y) < rho(x) + rho(y)` on a geodesic space.
    Shortcut,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Nerve {
    /// Vertex labels are the net points.
    pub complex: SimplicialComplex,
    /// `witnesses[d][i]` certifies `complex.simplices(d)[i]`.
    pub witnesses: Vec<Vec<Witness>>,
}

impl Nerve {
    /// Edges whose only certificate is the shortcut; many of these signal
    /// that the sample resolution is too coarse for the radii.
    pub fn shortcut_edges(&self) -> usize {
        self.witnesses.get(1).map_or(0, |w| w.iter().filter(|w| **w == Witness::Shortcut).count())
    }

    /// Re-checks every recorded witness against the space and radii.
    pub fn verify(&self, space: &MetricMeasureSpace, net: &WeightedNet) -> std::result::Result<(), String> {
        let rho = net.rho.as_deref().ok_or("net has no radii")?;
        let e = space.ball_space();
        let centre = |v: u32| space.ambient_index(net.points[v as usize]);
        if !self.complex.is_downward_closed() {
            return Err("complex is not downward closed".into());
        }
        for d in 0..=self.complex.k_max() {
            let simplices = self.complex.simplices(d);
            let witnesses = self.witnesses.get(d).map(Vec::as_slice).unwrap_or(&[]);
            if simplices.len() != witnesses.len() {
                return Err(format!("dimension {d}: {} simplices but {} witnesses", simplices.len(), witnesses.len()));
            }
            for (s, w) in simplices.iter().zip(witnesses) {
                let ok = match *w {
                    Witness::Vertex => d == 0,
                    Witness::Sample(p) => {
                        d > 0 && p < e.len() && s.iter().all(|&v| e.dist(p, centre(v)) < rho[v as usize])
                    }
                    Witness::Shortcut => {
                        d == 1
                            && e.has_geodesic_midpoints()
                            && e.dist(centre(s[0]), centre(s[1])) < rho[s[0] as usize] + rho[s[1] as usize]
                    }
                };
                if !ok {
                    return Err(format!("witness {w:?} does not certify {s:?}"));
                }
            }
        }
        Ok(())
    }
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

struct Expansion<'a> {
    k_max: usize,
    balls: &'a [Vec<usize>],
    /// Higher neighbours of each vertex in the edge graph, with edge witnesses.
    up: &'a [Vec<(u32, Witness)>],
}

impl Expansion<'_> {
    /// Depth-first clique expansion from `simplex`, whose common witnesses are
    /// `common`. Output per dimension stays lexicographically sorted.
    fn grow(&self, simplex: &mut Simplex, common: &[usize], out: &mut Vec<Vec<(Simplex, Witness)>>) {
        let d = simplex.len() - 1;
        if d >= self.k_max {
            return;
        }
        let last = *simplex.last().unwrap() as usize;
        for &(v, edge_witness) in &self.up[last] {
            if !simplex[..d].iter().all(|&u| self.up[u as usize].binary_search_by_key(&v, |e| e.0).is_ok()) {
                continue;
            }
            let shared = intersect(common, &self.balls[v as usize]);
            let witness = match shared.first() {
                Some(&p) => Witness::Sample(p),
                None if d == 0 => edge_witness,
                None => continue,
            };
            simplex.push(v);
            out[d + 1].push((simplex.clone(), witness));
            self.grow(simplex, &shared, out);
            simplex.pop();
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NerveOptions {
    /// Admit edges by `d(x, y) < rho(x) + rho(y)` on geodesic spaces.
    pub edge_shortcut: bool,
}

/// The nerve of `{B_E(x, rho(x))}` over the net, with simplices up to
/// dimension `k_max`. `space` is the space the net indexes into.
pub fn build_nerve(space: &MetricMeasureSpace, net: &WeightedNet, k_max: usize) -> Result<Nerve> {
    build_nerve_with(space, net, k_max, NerveOptions::default())
}

pub fn build_nerve_with(space: &MetricMeasureSpace, net: &WeightedNet, k_max: usize, opts: NerveOptions) -> Result<Nerve> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be positive".into()));
    }
    let rho = net.rho.as_deref().ok_or_else(|| Error::InvalidArgument("net has no radii".into()))?;
    if rho.len() != net.len() {
        return Err(Error::InvalidArgument(format!("{} radii for {} net points", rho.len(), net.len())));
    }
    if let Some(&p) = net.points.iter().find(|&&p| p >= space.len()) {
        return Err(Error::PointOutOfRange(p));
    }
    let e = space.ball_space();
    let centres: Vec<usize> = net.points.iter().map(|&p| space.ambient_index(p)).collect();
    let balls: Vec<Vec<usize>> = centres.par_iter().zip(rho).map(|(&c, &r)| e.neighbors_within(c, r)).collect();

    let mut vertex_at = vec![None; e.len()];
    for (i, &c) in centres.iter().enumerate() {
        vertex_at[c].get_or_insert(i as u32);
    }
    let rho_max = rho.iter().copied().fold(0.0, f64::max);
    let shortcut = opts.edge_shortcut && e.has_geodesic_midpoints();
    let up: Vec<Vec<(u32, Witness)>> = (0..net.len())
        .into_par_iter()
        .map(|i| {
            let mut nbrs: Vec<(u32, Witness)> = Vec::new();
            let mut candidates: Vec<u32> = Vec::new();
            for p in e.neighbors_within(centres[i], rho[i] + rho_max) {
                if let Some(j) = vertex_at[p] {
                    candidates.push(j);
                }
            }
            // Net points sharing an ambient point collapse onto one vertex
            // in `vertex_at`; pick up the rest directly.
            candidates.extend((0..net.len() as u32).filter(|&j| {
                let c = centres[j as usize];
                vertex_at[c] != Some(j) && e.dist(centres[i], c) < rho[i] + rho_max
            }));
            candidates.sort_unstable();
            candidates.dedup();
            for j in candidates.into_iter().filter(|&j| j as usize > i) {
                let ju = j as usize;
                let within = e.dist(centres[i], centres[ju]) < rho[i] + rho[ju];
                if !within {
                    continue;
                }
                let shared = intersect(&balls[i], &balls[ju]);
                match shared.first() {
                    Some(&p) => nbrs.push((j, Witness::Sample(p))),
                    None if shortcut => nbrs.push((j, Witness::Shortcut)),
                    None => {}
                }
            }
            nbrs
        })
        .collect();

    let expansion = Expansion { k_max, balls: &balls, up: &up };
    let parts: Vec<Vec<Vec<(Simplex, Witness)>>> = (0..net.len())
        .into_par_iter()
        .map(|i| {
            let mut out = vec![Vec::new(); k_max + 1];
            out[0].push((vec![i as u32], Witness::Vertex));
            expansion.grow(&mut vec![i as u32], &balls[i], &mut out);
            out
        })
        .collect();

    let mut levels: Vec<Vec<Simplex>> = vec![Vec::new(); k_max + 1];
    let mut witnesses: Vec<Vec<Witness>> = vec![Vec::new(); k_max + 1];
    for part in parts {
        for (d, list) in part.into_iter().enumerate() {
            for (s, w) in list {
                levels[d].push(s);
                witnesses[d].push(w);
            }
        }
    }
    let complex = SimplicialComplex::from_levels(net.len(), k_max, levels).with_vertex_labels(net.points.clone());
    Ok(Nerve { complex, witnesses })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub max_degree: usize,
    /// `histogram[k]` vertices have exactly `k` neighbours.
    pub histogram: Vec<usize>,
}

pub fn degree_stats(complex: &SimplicialComplex) -> DegreeStats {
    let degrees: Vec<usize> = complex.adjacency().iter().map(Vec::len).collect();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);
    let mut histogram = vec![0; max_degree + 1];
    for d in degrees {
        histogram[d] += 1;
    }
    DegreeStats { max_degree, histogram }
}

/// Packing bound on nerve degree for nets with separation `r0` and radii at
/// most `r3`: the largest measure of a ball of radius `2 r3 + r0` over the
/// smallest measure of a ball of radius `r0 / 2`.
pub fn packing_degree_bound(space: &MetricMeasureSpace, r0: f64, r3: f64) -> usize {
    let (mut big, mut small) = (0.0f64, f64::INFINITY);
    for x in 0..space.len() {
        big = big.max(space.measure(&space.neighbors_within(x, 2.0 * r3 + r0)));
        small = small.min(space.measure(&space.neighbors_within(x, r0 / 2.0)));
    }
    if space.is_empty() {
        return 0;
    }
    (big / small).floor() as usize
}
