//! Finite metric-measure spaces.
//!
//! A space is a finite point cloud with a distance oracle, a positive weight
//! per point and optionally an injectivity radius per point. Volumes of sets
//! are sums of weights. A space may be a subspace of a larger *ambient*
//! space; nerves built from nets in the subspace take their balls in the
//! ambient space.

mod graph;
mod io;
mod relation;
mod torus;

use std::sync::Arc;

pub use graph::{make_cyclic_cover, make_graph_space, LabeledGraph};
pub use relation::{check_relation, Condition, PointMap, RelationCertificate, Violation};
pub use torus::{make_flat_torus, SampleMode};

use crate::error::{Error, Result};
use torus::Torus;

#[derive(Debug, Clone)]
pub(crate) enum Geometry {
    Torus(Torus),
    /// Dense row-major distance matrix. `geodesic` marks path metrics where
    /// `d(x,y) < a + b` guarantees the open balls of radius `a`, `b` meet.
    Explicit { n: usize, dist: Vec<f64>, geodesic: bool },
}

#[derive(Debug, Clone)]
struct Ambient {
    space: Arc<MetricMeasureSpace>,
    index: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct MetricMeasureSpace {
    geometry: Geometry,
    weights: Vec<f64>,
    inj: Option<Vec<f64>>,
    ambient: Option<Ambient>,
}

/// A space with a distinguished base point.
#[derive(Debug, Clone)]
pub struct PointedSpace {
    pub space: Arc<MetricMeasureSpace>,
    pub basepoint: usize,
}

impl PointedSpace {
    pub fn new(space: Arc<MetricMeasureSpace>, basepoint: usize) -> Result<Self> {
        if basepoint >= space.len() {
            return Err(Error::PointOutOfRange(basepoint));
        }
        Ok(Self { space, basepoint })
    }
}

impl MetricMeasureSpace {
    pub(crate) fn from_parts(geometry: Geometry, weights: Vec<f64>, inj: Option<Vec<f64>>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptySpace);
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidArgument(format!("weights must be positive and finite, got {w}")));
        }
        if let Some(inj) = &inj {
            if inj.len() != weights.len() || inj.iter().any(|r| !(*r > 0.0)) {
                return Err(Error::InvalidArgument("injectivity radii must be positive, one per point".into()));
            }
        }
        Ok(Self { geometry, weights, inj, ambient: None })
    }

    /// Space from an explicit symmetric distance matrix (row-major, `n*n`).
    pub fn from_distance_matrix(dist: Vec<f64>, weights: Vec<f64>, inj: Option<Vec<f64>>) -> Result<Self> {
        let n = weights.len();
        if dist.len() != n * n {
            return Err(Error::InvalidArgument(format!("distance matrix has {} entries, expected {}", dist.len(), n * n)));
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::InvalidArgument(format!("d({i},{i}) != 0")));
            }
            for j in 0..i {
                let d = dist[i * n + j];
                if d != dist[j * n + i] || d.is_nan() || d < 0.0 {
                    return Err(Error::InvalidArgument(format!("d({i},{j}) is not symmetric and nonnegative")));
                }
            }
        }
        Self::from_parts(Geometry::Explicit { n, dist, geodesic: false }, weights, inj)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dist(&self, x: usize, y: usize) -> f64 {
        match &self.geometry {
            Geometry::Torus(t) => t.dist(x, y),
            Geometry::Explicit { n, dist, .. } => dist[x * n + y],
        }
    }

    pub fn weight(&self, x: usize) -> f64 {
        self.weights[x]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn measure(&self, points: &[usize]) -> f64 {
        points.iter().map(|&p| self.weights[p]).sum()
    }

    pub fn inj(&self) -> Option<&[f64]> {
        self.inj.as_deref()
    }

    /// The flat-torus side lengths, if this is a torus sample.
    pub fn torus_sides(&self) -> Option<&[f64]> {
        match &self.geometry {
            Geometry::Torus(t) => Some(t.sides()),
            Geometry::Explicit { .. } => None,
        }
    }

    /// Coordinates of point `x` on the torus.
    pub fn coords(&self, x: usize) -> Option<&[f64]> {
        match &self.geometry {
            Geometry::Torus(t) => Some(t.coords(x)),
            Geometry::Explicit { .. } => None,
        }
    }

    /// Whether `d(x,y) < a + b` certifies that `B(x,a)` and `B(y,b)` meet.
    pub fn has_geodesic_midpoints(&self) -> bool {
        match &self.geometry {
            Geometry::Torus(_) => true,
            Geometry::Explicit { geodesic, .. } => *geodesic,
        }
    }

    pub(crate) fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    /// The space this one is a distinguished subspace of, if any.
    pub fn ambient_of(&self) -> Option<&MetricMeasureSpace> {
        self.ambient.as_ref().map(|a| a.space.as_ref())
    }

    /// Index of point `x` in the ambient space (identity without an ambient).
    pub fn ambient_index(&self, x: usize) -> usize {
        match &self.ambient {
            Some(a) => a.index[x],
            None => x,
        }
    }

    /// The space whose balls are used for nerves: the ambient space if set, else `self`.
    pub fn ball_space(&self) -> &MetricMeasureSpace {
        self.ambient_of().unwrap_or(self)
    }

    /// Restriction to `points`, remembering `parent` as the ambient space.
    pub fn subspace(parent: &Arc<MetricMeasureSpace>, points: &[usize]) -> Result<MetricMeasureSpace> {
        if points.is_empty() {
            return Err(Error::EmptySpace);
        }
        if let Some(&p) = points.iter().find(|&&p| p >= parent.len()) {
            return Err(Error::PointOutOfRange(p));
        }
        let geometry = match &parent.geometry {
            Geometry::Torus(t) => Geometry::Torus(t.restrict(points)),
            Geometry::Explicit { n, dist, geodesic } => {
                let m = points.len();
                let mut sub = Vec::with_capacity(m * m);
                for &i in points {
                    sub.extend(points.iter().map(|&j| dist[i * n + j]));
                }
                Geometry::Explicit { n: m, dist: sub, geodesic: *geodesic }
            }
        };
        let weights = points.iter().map(|&p| parent.weights[p]).collect();
        let inj = parent.inj.as_ref().map(|inj| points.iter().map(|&p| inj[p]).collect());
        // Keep the chain flat: the ambient of a subspace is the root space.
        let (space, index) = match &parent.ambient {
            Some(a) => (a.space.clone(), points.iter().map(|&p| a.index[p]).collect()),
            None => (parent.clone(), points.to_vec()),
        };
        Ok(MetricMeasureSpace { geometry, weights, inj, ambient: Some(Ambient { space, index }) })
    }

    /// Points at distance `< r` from `x`, ascending.
    pub fn neighbors_within(&self, x: usize, r: f64) -> Vec<usize> {
        match &self.geometry {
            Geometry::Torus(t) => t.neighbors_within(x, r),
            Geometry::Explicit { n, dist, .. } => {
                let row = &dist[x * n..(x + 1) * n];
                row.iter().enumerate().filter(|(_, &d)| d < r).map(|(i, _)| i).collect()
            }
        }
    }

    /// The open ball `B(center, r)` and its measure.
    pub fn ball(&self, center: usize, r: f64) -> Result<(Vec<usize>, f64)> {
        if center >= self.len() {
            return Err(Error::PointOutOfRange(center));
        }
        let pts = self.neighbors_within(center, r);
        let m = self.measure(&pts);
        Ok((pts, m))
    }

    /// The thick part `{x : inj(x) >= epsilon / 2}`.
    pub fn thick_part(&self, epsilon: f64) -> Result<Vec<usize>> {
        let inj = self.inj.as_ref().ok_or(Error::MissingInjectivity)?;
        Ok((0..self.len()).filter(|&x| inj[x] >= epsilon / 2.0).collect())
    }

    /// Points of `subset` at distance `>= xi` from every point outside `subset`.
    pub fn shrink(&self, subset: &[usize], xi: f64) -> Vec<usize> {
        let mut inside = vec![false; self.len()];
        for &p in subset {
            inside[p] = true;
        }
        let mut out: Vec<usize> = subset
            .iter()
            .copied()
            .filter(|&a| self.neighbors_within(a, xi).into_iter().all(|q| inside[q]))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn to_text(&self) -> String {
        io::write_space(self)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        io::read_space(text)
    }
}

/// Free-function form of [`MetricMeasureSpace::ball`].
pub fn ball(space: &MetricMeasureSpace, center: usize, r: f64) -> Result<(Vec<usize>, f64)> {
    space.ball(center, r)
}

/// Free-function form of [`MetricMeasureSpace::thick_part`].
pub fn thick_part(space: &MetricMeasureSpace, epsilon: f64) -> Result<Vec<usize>> {
    space.thick_part(epsilon)
}

/// Free-function form of [`MetricMeasureSpace::shrink`].
pub fn shrink(space: &MetricMeasureSpace, subset: &[usize], xi: f64) -> Vec<usize> {
    space.shrink(subset, xi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed_inj_space() -> MetricMeasureSpace {
        // Four points on a line, inj alternating 0.1 / 2.0.
        let xs = [0.0f64, 1.0, 2.0, 3.0];
        let dist: Vec<f64> = xs.iter().flat_map(|a| xs.iter().map(move |b| (a - b).abs())).collect();
        MetricMeasureSpace::from_distance_matrix(dist, vec![1.0; 4], Some(vec![0.1, 2.0, 0.1, 2.0])).unwrap()
    }

    #[test]
    fn ball_edge_cases() {
        let s = make_flat_torus(&[2.0, 3.0], SampleMode::Grid, 4.0, 0).unwrap();
        let (all, m) = s.ball(0, 100.0).unwrap();
        assert_eq!(all.len(), s.len());
        assert!((m - s.total_weight()).abs() < 1e-12);
        let (none, m0) = s.ball(0, 0.0).unwrap();
        assert!(none.is_empty());
        assert_eq!(m0, 0.0);
        assert!(s.ball(s.len(), 1.0).is_err());
    }

    #[test]
    fn thick_part_thresholds() {
        let s = make_flat_torus(&[2.0, 3.0], SampleMode::Grid, 4.0, 0).unwrap();
        assert_eq!(s.thick_part(1.0).unwrap().len(), s.len());
        assert!(s.thick_part(3.0).unwrap().is_empty());
        assert_eq!(mixed_inj_space().thick_part(1.0).unwrap(), vec![1, 3]);
        let no_inj = MetricMeasureSpace::from_distance_matrix(vec![0.0], vec![1.0], None).unwrap();
        assert!(matches!(no_inj.thick_part(1.0), Err(Error::MissingInjectivity)));
    }

    #[test]
    fn shrink_edge_cases() {
        let s = make_flat_torus(&[4.0, 4.0], SampleMode::Grid, 4.0, 0).unwrap();
        let all: Vec<usize> = (0..s.len()).collect();
        assert_eq!(s.shrink(&all, 3.0), all);
        let half: Vec<usize> = (0..s.len()).filter(|&p| s.coords(p).unwrap()[0] < 2.0).collect();
        assert_eq!(s.shrink(&half, 1e-9), half);
        assert_eq!(s.shrink(&half, 0.0), half);
    }

    #[test]
    fn shrink_narrows_a_strip_by_xi_on_each_side() {
        // Grid spacing 0.5 on [8,8]; strip x in [0,4).
        let s = make_flat_torus(&[8.0, 8.0], SampleMode::Grid, 4.0, 0).unwrap();
        let strip: Vec<usize> = (0..s.len()).filter(|&p| s.coords(p).unwrap()[0] < 4.0).collect();
        let shrunk = s.shrink(&strip, 1.0);
        // Brute force: distance to complement >= 1.
        let outside: Vec<usize> = (0..s.len()).filter(|p| !strip.contains(p)).collect();
        let expected: Vec<usize> = strip
            .iter()
            .copied()
            .filter(|&a| outside.iter().all(|&b| s.dist(a, b) >= 1.0))
            .collect();
        assert_eq!(shrunk, expected);
        // Complement columns are x = 4..7.5, so x = 0 (0.5 from x = 7.5) and
        // x = 3.5 drop out; survivors have x in [0.5, 3].
        for &p in &shrunk {
            let x = s.coords(p).unwrap()[0];
            assert!((0.5..=3.0).contains(&x), "x = {x}");
        }
        assert_eq!(shrunk.len(), 6 * 16);
    }

    #[test]
    fn subspace_inherits_ambient_distances() {
        let parent = Arc::new(make_flat_torus(&[4.0, 4.0], SampleMode::Grid, 4.0, 0).unwrap());
        let pts = vec![3, 10, 40, 63];
        let sub = MetricMeasureSpace::subspace(&parent, &pts).unwrap();
        assert!(sub.ambient_of().is_some());
        for i in 0..pts.len() {
            assert_eq!(sub.ambient_index(i), pts[i]);
            for j in 0..pts.len() {
                assert_eq!(sub.dist(i, j), parent.dist(pts[i], pts[j]));
            }
        }
        let subsub = MetricMeasureSpace::subspace(&Arc::new(sub), &[1, 2]).unwrap();
        assert_eq!(subsub.ambient_index(0), 10);
        assert_eq!(subsub.ball_space().len(), parent.len());
    }
}
