//! Flat tori `R^d / (L_1 Z x ... x L_d Z)` sampled on a grid or by a Poisson process.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::{Geometry, MetricMeasureSpace};
use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleMode {
    Grid,
    Poisson,
}

impl std::str::FromStr for SampleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(SampleMode::Grid),
            "poisson" => Ok(SampleMode::Poisson),
            other => Err(Error::InvalidArgument(format!("unknown sample mode {other:?}"))),
        }
    }
}

/// Point coordinates plus a uniform cell list for radius queries.
#[derive(Debug, Clone)]
pub(crate) struct Torus {
    sides: Vec<f64>,
    coords: Vec<f64>,
    cells: CellList,
}

#[derive(Debug, Clone)]
struct CellList {
    counts: Vec<usize>,
    widths: Vec<f64>,
    members: Vec<Vec<u32>>,
}

impl Torus {
    pub(crate) fn new(sides: Vec<f64>, coords: Vec<f64>) -> Self {
        let d = sides.len();
        let n = coords.len() / d;
        let vol: f64 = sides.iter().product();
        // Aim for a handful of points per cell.
        let target = (4.0 * vol / n.max(1) as f64).powf(1.0 / d as f64);
        let counts: Vec<usize> = sides.iter().map(|&l| ((l / target).floor() as usize).clamp(1, 1 << 12)).collect();
        let widths: Vec<f64> = sides.iter().zip(&counts).map(|(&l, &c)| l / c as f64).collect();
        let total: usize = counts.iter().product();
        let mut members = vec![Vec::new(); total];
        for p in 0..n {
            let x = &coords[p * d..(p + 1) * d];
            let idx = cell_index(&counts, &widths, x);
            members[idx].push(p as u32);
        }
        Torus { sides, coords, cells: CellList { counts, widths, members } }
    }

    pub(crate) fn sides(&self) -> &[f64] {
        &self.sides
    }

    pub(crate) fn dim(&self) -> usize {
        self.sides.len()
    }

    pub(crate) fn coords(&self, p: usize) -> &[f64] {
        let d = self.dim();
        &self.coords[p * d..(p + 1) * d]
    }

    pub(crate) fn restrict(&self, points: &[usize]) -> Torus {
        let coords = points.iter().flat_map(|&p| self.coords(p).iter().copied()).collect();
        Torus::new(self.sides.clone(), coords)
    }

    pub(crate) fn dist(&self, x: usize, y: usize) -> f64 {
        self.dist_to(self.coords(x), y)
    }

    fn dist_to(&self, a: &[f64], y: usize) -> f64 {
        torus_dist(&self.sides, a, self.coords(y))
    }

    pub(crate) fn neighbors_within(&self, x: usize, r: f64) -> Vec<usize> {
        let a = self.coords(x).to_vec();
        self.near_position(&a, r)
    }

    /// Points at distance `< r` from an arbitrary position, ascending.
    pub(crate) fn near_position(&self, a: &[f64], r: f64) -> Vec<usize> {
        if r <= 0.0 {
            return Vec::new();
        }
        let d = self.dim();
        let CellList { counts, widths, members } = &self.cells;
        let home: Vec<usize> =
            (0..d).map(|k| ((a[k].rem_euclid(self.sides[k]) / widths[k]).floor() as usize).min(counts[k] - 1)).collect();
        // Per axis, the list of cell coordinates to visit.
        let ranges: Vec<Vec<usize>> = (0..d)
            .map(|k| {
                let reach = (r / widths[k]).ceil() as usize;
                if 2 * reach + 1 >= counts[k] {
                    (0..counts[k]).collect()
                } else {
                    (0..=2 * reach).map(|o| (home[k] + counts[k] + o - reach) % counts[k]).collect()
                }
            })
            .collect();
        let mut out = Vec::new();
        let mut odo = vec![0usize; d];
        'outer: loop {
            let mut idx = 0;
            for k in (0..d).rev() {
                idx = idx * counts[k] + ranges[k][odo[k]];
            }
            for &p in &members[idx] {
                if self.dist_to(a, p as usize) < r {
                    out.push(p as usize);
                }
            }
            for k in 0..d {
                odo[k] += 1;
                if odo[k] < ranges[k].len() {
                    continue 'outer;
                }
                odo[k] = 0;
            }
            break;
        }
        out.sort_unstable();
        out
    }
}

fn cell_index(counts: &[usize], widths: &[f64], x: &[f64]) -> usize {
    let mut idx = 0;
    for k in (0..counts.len()).rev() {
        let side = widths[k] * counts[k] as f64;
        let c = ((x[k].rem_euclid(side) / widths[k]).floor() as usize).min(counts[k] - 1);
        idx = idx * counts[k] + c;
    }
    idx
}

/// Quotient distance on the torus: the shortest Euclidean distance over all lattice shifts.
pub(crate) fn torus_dist(sides: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..sides.len() {
        let mut dx = (a[k] - b[k]).abs() % sides[k];
        if sides[k] - dx < dx {
            dx = sides[k] - dx;
        }
        s += dx * dx;
    }
    s.sqrt()
}

/// Samples a flat torus with the given side lengths.
///
/// Grid mode places `round(L_i * density^(1/d))` evenly spaced points along
/// axis `i` and gives every point weight `vol / count`. Poisson mode draws the
/// point count from `Poisson(density * vol)`, positions uniformly, and weight
/// `1 / density`. Every point gets injectivity radius `min(L_i) / 2`.
pub fn make_flat_torus(sides: &[f64], mode: SampleMode, density: f64, seed: u64) -> Result<MetricMeasureSpace> {
    if sides.is_empty() {
        return Err(Error::InvalidArgument("torus needs at least one side".into()));
    }
    if let Some(l) = sides.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
        return Err(Error::InvalidArgument(format!("side lengths must be positive, got {l}")));
    }
    if !(density > 0.0 && density.is_finite()) {
        return Err(Error::InvalidArgument(format!("density must be positive, got {density}")));
    }
    let d = sides.len();
    let vol: f64 = sides.iter().product();
    let (coords, weight) = match mode {
        SampleMode::Grid => {
            let per_len = density.powf(1.0 / d as f64);
            let counts: Vec<usize> = sides.iter().map(|&l| (l * per_len).round() as usize).collect();
            let n: usize = counts.iter().product();
            if n == 0 {
                return Err(Error::EmptySpace);
            }
            let mut coords = Vec::with_capacity(n * d);
            let mut idx = vec![0usize; d];
            for _ in 0..n {
                for k in 0..d {
                    coords.push(idx[k] as f64 * sides[k] / counts[k] as f64);
                }
                for k in 0..d {
                    idx[k] += 1;
                    if idx[k] < counts[k] {
                        break;
                    }
                    idx[k] = 0;
                }
            }
            (coords, vol / n as f64)
        }
        SampleMode::Poisson => {
            let mut rng = rng::stream(seed, 0, Purpose::Space);
            let poisson = Poisson::new(density * vol).map_err(|e| Error::InvalidArgument(e.to_string()))?;
            let n = poisson.sample(&mut rng) as usize;
            if n == 0 {
                return Err(Error::EmptySpace);
            }
            let coords = (0..n * d).map(|i| rng.random::<f64>() * sides[i % d]).collect();
            (coords, 1.0 / density)
        }
    };
    let n = coords.len() / d;
    let inj = sides.iter().copied().fold(f64::INFINITY, f64::min) / 2.0;
    let torus = Torus::new(sides.to_vec(), coords);
    MetricMeasureSpace::from_parts(Geometry::Torus(torus), vec![weight; n], Some(vec![inj; n]))
}

impl MetricMeasureSpace {
    /// Measure of the points within distance `< r` of an arbitrary torus position.
    pub fn measure_near_position(&self, position: &[f64], r: f64) -> Option<f64> {
        match self.geometry() {
            Geometry::Torus(t) if position.len() == t.dim() => {
                Some(t.near_position(position, r).into_iter().map(|p| self.weight(p)).sum())
            }
            _ => None,
        }
    }
}
