//! Rooted R-balls, exact canonical forms, and empirical ball distributions.
//!
//! The canonical form of a rooted ball is the lexicographically smallest
//! serialization over all root-fixing relabelings that survive colour
//! refinement. Refinement starts from root distance and simplex counts and
//! propagates through every simplex, not just edges; ties left after
//! refinement are broken by individualizing each vertex of the first
//! non-singleton cell in turn.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

#[derive(Debug, Clone, PartialEq)]
pub struct RootedBall {
    /// Induced complex; local vertex `i` is `vertices[i]` of the parent.
    pub complex: SimplicialComplex,
    pub vertices: Vec<u32>,
    /// Local index of the root; 0 for extracted balls.
    pub root: u32,
    pub radius: usize,
    /// Graph distance from the root, per local vertex.
    pub depth: Vec<usize>,
}

fn bfs(adj: &[Vec<u32>], v: u32, radius: usize) -> (Vec<u32>, Vec<usize>) {
    let mut seen = BTreeMap::new();
    seen.insert(v, 0usize);
    let mut order = vec![v];
    let mut depth = vec![0];
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        let du = seen[&u];
        if du == radius {
            continue;
        }
        for &w in &adj[u as usize] {
            if !seen.contains_key(&w) {
                seen.insert(w, du + 1);
                order.push(w);
                depth.push(du + 1);
                queue.push_back(w);
            }
        }
    }
    (order, depth)
}

/// Induced subcomplex on `vertices`, found by scanning only simplices whose
/// smallest vertex is in the set.
fn induced_local(complex: &SimplicialComplex, vertices: &[u32]) -> SimplicialComplex {
    let local: BTreeMap<u32, u32> = vertices.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    let mut levels: Vec<Vec<Simplex>> = vec![Vec::new(); complex.k_max() + 1];
    for (d, level) in levels.iter_mut().enumerate() {
        let all = complex.simplices(d);
        for &u in local.keys() {
            let lo = all.partition_point(|s| s[0] < u);
            let hi = lo + all[lo..].partition_point(|s| s[0] <= u);
            for s in &all[lo..hi] {
                let t: Option<Simplex> = s.iter().map(|v| local.get(v).copied()).collect();
                if let Some(mut t) = t {
                    t.sort_unstable();
                    level.push(t);
                }
            }
        }
        level.sort_unstable();
    }
    SimplicialComplex::from_levels(vertices.len(), complex.k_max(), levels)
}

/// Induced subcomplex on the vertices within 1-skeleton distance `radius` of `v`.
pub fn extract_ball(complex: &SimplicialComplex, v: u32, radius: usize) -> Result<RootedBall> {
    extract_ball_with(complex, &complex.adjacency(), v, radius)
}

fn extract_ball_with(complex: &SimplicialComplex, adj: &[Vec<u32>], v: u32, radius: usize) -> Result<RootedBall> {
    if v as usize >= complex.n_vertices() {
        return Err(Error::PointOutOfRange(v as usize));
    }
    let (vertices, depth) = bfs(adj, v, radius);
    let complex = induced_local(complex, &vertices);
    Ok(RootedBall { complex, vertices, root: 0, radius, depth })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CanonOptions {
    /// Balls with more vertices are rejected.
    pub max_vertices: usize,
    /// Bound on the number of complete labelings examined.
    pub max_leaves: usize,
}

impl Default for CanonOptions {
    fn default() -> Self {
        CanonOptions { max_vertices: 512, max_leaves: 1 << 20 }
    }
}

/// Replaces each colour by the rank of `key(v)` among all keys.
fn rank_by<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap() as u32).collect()
}

struct Canon<'a> {
    ball: &'a RootedBall,
    /// `incidence[v]` lists `(dim, simplex index)` for simplices through `v`, dim >= 1.
    incidence: Vec<Vec<(usize, usize)>>,
    best: Option<Vec<Vec<Simplex>>>,
    leaves: usize,
    max_leaves: usize,
}

impl Canon<'_> {
    fn refine(&self, mut colours: Vec<u32>) -> Vec<u32> {
        let c = &self.ball.complex;
        let mut classes = colours.iter().collect::<std::collections::BTreeSet<_>>().len();
        loop {
            let keys: Vec<(u32, Vec<(usize, Vec<u32>)>)> = (0..colours.len())
                .map(|v| {
                    let mut sig: Vec<(usize, Vec<u32>)> = self.incidence[v]
                        .iter()
                        .map(|&(d, i)| {
                            let mut others: Vec<u32> =
                                c.simplices(d)[i].iter().filter(|&&w| w as usize != v).map(|&w| colours[w as usize]).collect();
                            others.sort_unstable();
                            (d, others)
                        })
                        .collect();
                    sig.sort_unstable();
                    (colours[v], sig)
                })
                .collect();
            colours = rank_by(&keys);
            let now = colours.iter().collect::<std::collections::BTreeSet<_>>().len();
            if now == classes {
                return colours;
            }
            classes = now;
        }
    }

    fn relabel(&self, colours: &[u32]) -> Vec<Vec<Simplex>> {
        let c = &self.ball.complex;
        (0..=c.k_max())
            .map(|d| {
                let mut level: Vec<Simplex> = c
                    .simplices(d)
                    .iter()
                    .map(|s| {
                        let mut t: Simplex = s.iter().map(|&v| colours[v as usize]).collect();
                        t.sort_unstable();
                        t
                    })
                    .collect();
                level.sort_unstable();
                level
            })
            .collect()
    }

    fn search(&mut self, colours: Vec<u32>) -> Result<()> {
        let colours = self.refine(colours);
        let n = colours.len();
        let mut size = vec![0usize; n];
        for &c in &colours {
            size[c as usize] += 1;
        }
        let Some(target) = (0..n).find(|&c| size[c] > 1) else {
            self.leaves += 1;
            if self.leaves > self.max_leaves {
                return Err(Error::SearchLimit(self.max_leaves));
            }
            let form = self.relabel(&colours);
            if self.best.as_ref().is_none_or(|b| form < *b) {
                self.best = Some(form);
            }
            return Ok(());
        };
        let cell: Vec<usize> = (0..n).filter(|&v| colours[v] as usize == target).collect();
        for &v in &cell {
            // Give `v` a colour just below the rest of its cell.
            let keys: Vec<(u32, bool)> = (0..n).map(|w| (colours[w], w != v)).collect();
            self.search(rank_by(&keys))?;
        }
        Ok(())
    }
}

/// Canonical serialization of a rooted ball: equal for two balls iff they are
/// isomorphic by a map taking root to root.
pub fn canonical_id(ball: &RootedBall) -> Result<String> {
    canonical_id_with(ball, &CanonOptions::default())
}

pub fn canonical_id_with(ball: &RootedBall, opts: &CanonOptions) -> Result<String> {
    let c = &ball.complex;
    let n = c.n_vertices();
    if n > opts.max_vertices {
        return Err(Error::BallTooLarge(n, opts.max_vertices));
    }
    let mut incidence = vec![Vec::new(); n];
    for d in 1..=c.k_max() {
        for (i, s) in c.simplices(d).iter().enumerate() {
            for &v in s {
                incidence[v as usize].push((d, i));
            }
        }
    }
    let initial: Vec<(bool, usize)> = (0..n).map(|v| (v as u32 != ball.root, ball.depth[v])).collect();
    let mut canon = Canon { ball, incidence, best: None, leaves: 0, max_leaves: opts.max_leaves };
    canon.search(rank_by(&initial))?;
    let form = canon.best.unwrap_or_default();
    let mut id = format!("r{}v{}", ball.radius, n);
    for level in form.iter().skip(1) {
        id.push('/');
        let parts: Vec<String> =
            level.iter().map(|s| s.iter().map(u32::to_string).collect::<Vec<_>>().join(".")).collect();
        id.push_str(&parts.join(";"));
    }
    Ok(id)
}

/// Which vertices a profile looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Every vertex once.
    Exhaustive,
    /// This many vertices, uniformly with replacement.
    Uniform(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalProfile {
    pub radius: usize,
    pub class_weights: BTreeMap<String, f64>,
    pub sample_size: usize,
}

impl LocalProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class_id,frequency\n");
        for (id, w) in &self.class_weights {
            let _ = writeln!(out, "{id},{w}");
        }
        out
    }
}

/// Empirical distribution of canonical `radius`-balls.
pub fn local_profile(complex: &SimplicialComplex, radius: usize, sampling: Sampling, seed: u64) -> Result<LocalProfile> {
    let n = complex.n_vertices();
    let roots: Vec<u32> = match sampling {
        Sampling::Exhaustive => (0..n as u32).collect(),
        Sampling::Uniform(k) => {
            if n == 0 {
                Vec::new()
            } else {
                let mut rng = rng::stream(seed, 0, Purpose::Sampling);
                (0..k).map(|_| (rng::unit_closed_open(&mut rng) * n as f64) as u32).collect()
            }
        }
    };
    if roots.is_empty() {
        return Err(Error::EmptySpace);
    }
    let adj = complex.adjacency();
    let ids: Vec<String> = roots
        .par_iter()
        .map(|&v| canonical_id(&extract_ball_with(complex, &adj, v, radius)?))
        .collect::<Result<_>>()?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for id in ids {
        *counts.entry(id).or_default() += 1;
    }
    let total = roots.len() as f64;
    Ok(LocalProfile {
        radius,
        class_weights: counts.into_iter().map(|(k, c)| (k, c as f64 / total)).collect(),
        sample_size: roots.len(),
    })
}

/// Total variation distance `1/2 sum |a - b|`.
pub fn profile_distance(a: &LocalProfile, b: &LocalProfile) -> Result<f64> {
    if a.radius != b.radius {
        return Err(Error::RadiusMismatch(a.radius, b.radius));
    }
    let mut sum = 0.0;
    for (k, wa) in &a.class_weights {
        sum += (wa - b.class_weights.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, wb) in &b.class_weights {
        if !a.class_weights.contains_key(k) {
            sum += wb;
        }
    }
    Ok((sum / 2.0).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> SimplicialComplex {
        let edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
        SimplicialComplex::from_edges(n, &edges).unwrap()
    }

    fn profile(weights: &[(&str, f64)]) -> LocalProfile {
        LocalProfile { radius: 1, class_weights: weights.iter().map(|(k, w)| (k.to_string(), *w)).collect(), sample_size: 2 }
    }

    #[test]
    fn radius_zero_is_a_point() {
        let b = extract_ball(&SimplicialComplex::cycle(10), 3, 0).unwrap();
        assert_eq!(b.vertices, vec![3]);
        assert_eq!(b.complex.f_vector(), vec![1, 0, 0]);
    }

    #[test]
    fn cycle_ball_is_a_path() {
        let b = extract_ball(&SimplicialComplex::cycle(10), 0, 2).unwrap();
        assert_eq!(b.complex.f_vector(), vec![5, 4, 0]);
        assert_eq!(b.depth, vec![0, 1, 1, 2, 2]);
        let direct = extract_ball(&path(5), 2, 2).unwrap();
        assert_eq!(canonical_id(&b).unwrap(), canonical_id(&direct).unwrap());
    }

    #[test]
    fn root_position_matters() {
        let p = path(3);
        let end = canonical_id(&extract_ball(&p, 0, 2).unwrap()).unwrap();
        let mid = canonical_id(&extract_ball(&p, 1, 2).unwrap()).unwrap();
        assert_ne!(end, mid);
    }

    #[test]
    fn filled_and_hollow_triangles_differ() {
        let hollow = SimplicialComplex::cycle(3);
        let filled = SimplicialComplex::from_facets(3, [[0u32, 1, 2]]).unwrap();
        let a = canonical_id(&extract_ball(&hollow, 0, 1).unwrap()).unwrap();
        let b = canonical_id(&extract_ball(&filled, 0, 1).unwrap()).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn vertex_transitive_gives_one_class() {
        let p = local_profile(&SimplicialComplex::cycle(12), 1, Sampling::Exhaustive, 0).unwrap();
        assert_eq!(p.class_weights.len(), 1);
        assert!((p.class_weights.values().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn size_cap() {
        let b = extract_ball(&SimplicialComplex::cycle(20), 0, 5).unwrap();
        let opts = CanonOptions { max_vertices: 4, ..CanonOptions::default() };
        assert!(matches!(canonical_id_with(&b, &opts), Err(Error::BallTooLarge(11, 4))));
    }

    #[test]
    fn uniform_sampling_is_seeded() {
        let c = path(30);
        let a = local_profile(&c, 2, Sampling::Uniform(50), 7).unwrap();
        let b = local_profile(&c, 2, Sampling::Uniform(50), 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.sample_size, 50);
        assert!((a.class_weights.values().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tv_distance_cases() {
        let a = profile(&[("x", 0.5), ("y", 0.5)]);
        assert_eq!(profile_distance(&a, &a).unwrap(), 0.0);
        let b = profile(&[("z", 1.0)]);
        assert_eq!(profile_distance(&a, &b).unwrap(), 1.0);
        let c = profile(&[("x", 1.0)]);
        assert!((profile_distance(&a, &c).unwrap() - 0.5).abs() < 1e-15);
        let mut d = c.clone();
        d.radius = 2;
        assert!(matches!(profile_distance(&a, &d), Err(Error::RadiusMismatch(1, 2))));
    }

    #[test]
    fn profile_csv() {
        let p = local_profile(&SimplicialComplex::cycle(6), 1, Sampling::Exhaustive, 0).unwrap();
        let csv = p.to_csv();
        assert!(csv.starts_with("class_id,frequency\n"));
        assert_eq!(csv.lines().count(), 2);
    }
}
