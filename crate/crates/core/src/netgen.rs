//! Random almost-nets from iterated Poisson processes.
//!
//! Level `j` draws a discretized Poisson process `P^j`, orders it by
//! independent uniform keys, and accepts `s` into `S^j` when, for every
//! earlier `t` in `P^j` and every `t` in `S^{<j}`, an independent uniform
//! `X(s,t)` in `(0,1]` satisfies `phi(d(s,t)) >= X(s,t)`. The soft kernel
//! `phi` is 0 up to `r0` and 1 from `r_soft` on, so accepted points are
//! `r0`-separated and only neighbours closer than `r_soft` are consulted.
//!
//! After `j` levels the union `S^{<=j}` is usually not yet a net;
//! [`complete_to_net`] fills the gaps greedily and [`coverage_deficit`] counts
//! how many points that took.

use std::fmt::Write as _;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mmspace::MetricMeasureSpace;
use crate::rng::{self, Purpose};

/// Shape of the soft acceptance kernel on `[r0, r_soft]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SoftKernel {
    #[default]
    Linear,
    Smoothstep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetParams {
    /// Separation: accepted points are more than `r0` apart.
    pub r0: f64,
    /// Where the soft kernel reaches 1.
    pub r_soft: f64,
    /// Completion covers every point within `2 * r1`.
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    /// Number of Poisson rounds.
    #[serde(rename = "levels")]
    pub j_levels: usize,
    /// Points per unit volume.
    pub intensity: f64,
    #[serde(default)]
    pub kernel: SoftKernel,
}

impl NetParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if !(self.r0 > 0.0) {
            return bad(format!("r0 = {} must be positive", self.r0));
        }
        if !(self.r0 < self.r_soft && self.r_soft <= self.r1) {
            return bad(format!("need r0 < r_soft <= r1, got {} {} {}", self.r0, self.r_soft, self.r1));
        }
        if !(2.0 * self.r1 <= self.r2) {
            return bad(format!("need 2 r1 <= r2, got r1 = {} r2 = {}", self.r1, self.r2));
        }
        if !(self.r2 < self.r3 && self.r3.is_finite()) {
            return bad(format!("need r2 < r3, got {} {}", self.r2, self.r3));
        }
        if self.j_levels == 0 {
            return bad("levels must be at least 1".into());
        }
        if !(self.intensity > 0.0) {
            return bad(format!("intensity = {} must be positive", self.intensity));
        }
        Ok(())
    }

    /// Thick-part pattern: `r0 = delta`, `r1 = 3 delta`, `r2 = (b + 6) delta`,
    /// `r3 = (b + 7) delta`, with the kernel reaching 1 at `2 delta`.
    pub fn thick_preset(delta: f64, b: f64, j_levels: usize, intensity: f64) -> Self {
        NetParams {
            r0: delta,
            r_soft: 2.0 * delta,
            r1: 3.0 * delta,
            r2: (b + 6.0) * delta,
            r3: (b + 7.0) * delta,
            j_levels,
            intensity,
            kernel: SoftKernel::Linear,
        }
    }

    /// The soft kernel `phi`.
    pub fn phi(&self, t: f64) -> f64 {
        if t <= self.r0 {
            return 0.0;
        }
        if t >= self.r_soft {
            return 1.0;
        }
        let u = (t - self.r0) / (self.r_soft - self.r0);
        match self.kernel {
            SoftKernel::Linear => u,
            SoftKernel::Smoothstep => u * u * (3.0 - 2.0 * u),
        }
    }
}

/// Levels `S^1, ..., S^j` of the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AlmostNet {
    pub levels: Vec<Vec<usize>>,
    pub params: NetParams,
}

impl AlmostNet {
    pub fn empty(params: NetParams) -> Self {
        AlmostNet { levels: Vec::new(), params }
    }

    /// `S^{<=j}`, sorted. `j` is clamped to the number of levels.
    pub fn union_upto(&self, j: usize) -> Vec<usize> {
        let mut u: Vec<usize> = self.levels.iter().take(j).flatten().copied().collect();
        u.sort_unstable();
        u
    }

    pub fn union(&self) -> Vec<usize> {
        self.union_upto(self.levels.len())
    }

    /// The first `j` levels as an almost-net in their own right.
    pub fn truncated(&self, j: usize) -> AlmostNet {
        AlmostNet { levels: self.levels.iter().take(j).cloned().collect(), params: self.params }
    }
}

/// A net with optional radii. `levels[i]` is the construction level of
/// `points[i]`, 0 for points added by completion.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedNet {
    pub points: Vec<usize>,
    pub levels: Vec<u32>,
    pub rho: Option<Vec<f64>>,
    pub params: NetParams,
}

impl WeightedNet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = String::from("net v1\n");
        let _ = writeln!(out, "params {} {} {} {} {} {} {}", p.r0, p.r_soft, p.r1, p.r2, p.r3, p.j_levels, p.intensity);
        for (i, &x) in self.points.iter().enumerate() {
            let rho = self.rho.as_ref().map_or_else(|| "NA".to_string(), |r| r[i].to_string());
            let _ = writeln!(out, "{x} {} {rho}", self.levels[i]);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, l)) if l.trim() == "net v1" => {}
            _ => return Err(Error::parse(1, "expected `net v1`")),
        }
        let (ln, pl) = lines.next().ok_or_else(|| Error::parse(2, "missing params line"))?;
        let f: Vec<&str> = pl.split_whitespace().collect();
        if f.len() != 8 || f[0] != "params" {
            return Err(Error::parse(ln, "expected `params r0 r_soft r1 r2 r3 levels intensity`"));
        }
        let num = |i: usize| f[i].parse::<f64>().map_err(|_| Error::parse(ln, format!("bad number {:?}", f[i])));
        let params = NetParams {
            r0: num(1)?,
            r_soft: num(2)?,
            r1: num(3)?,
            r2: num(4)?,
            r3: num(5)?,
            j_levels: f[6].parse().map_err(|_| Error::parse(ln, "bad level count"))?,
            intensity: num(7)?,
            kernel: SoftKernel::Linear,
        };
        let (mut points, mut levels, mut rho) = (Vec::new(), Vec::new(), Vec::new());
        let mut any_na = false;
        for (ln, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 3 {
                return Err(Error::parse(ln, "expected `<point-id> <level> <rho|NA>`"));
            }
            points.push(t[0].parse().map_err(|_| Error::parse(ln, "bad point id"))?);
            levels.push(t[1].parse().map_err(|_| Error::parse(ln, "bad level"))?);
            if t[2] == "NA" {
                any_na = true;
            } else {
                rho.push(t[2].parse().map_err(|_| Error::parse(ln, "bad rho"))?);
            }
        }
        let rho = if any_na { None } else { Some(rho) };
        Ok(WeightedNet { points, levels, rho, params })
    }
}

fn poisson_level(space: &MetricMeasureSpace, intensity: f64, seed: u64, level: u64) -> Vec<usize> {
    if !(intensity > 0.0) {
        return Vec::new();
    }
    let mut rng = rng::stream(seed, level, Purpose::Poisson);
    (0..space.len())
        .filter(|&x| {
            let p = -(-space.weight(x) * intensity).exp_m1();
            rng::unit_closed_open(&mut rng) < p
        })
        .collect()
}

/// Discretized Poisson process: point `x` is kept independently with
/// probability `1 - exp(-weight(x) * intensity)`.
pub fn poisson_points(space: &MetricMeasureSpace, intensity: f64, seed: u64) -> Vec<usize> {
    poisson_level(space, intensity, seed, 0)
}

pub fn build_almost_net(space: &MetricMeasureSpace, params: &NetParams, seed: u64) -> Result<AlmostNet> {
    params.validate()?;
    let n = space.len();
    let mut in_prev = vec![false; n];
    let mut levels = Vec::with_capacity(params.j_levels);
    for j in 1..=params.j_levels as u64 {
        let process = poisson_level(space, params.intensity, seed, j);
        let mut key_rng = rng::stream(seed, j, Purpose::OrderKey);
        let mut order: Vec<(u64, usize)> = process.iter().map(|&x| (key_rng.next_u64(), x)).collect();
        order.sort_unstable();
        let mut accept_rng = rng::stream(seed, j, Purpose::Accept);
        let mut considered = vec![false; n];
        let mut level = Vec::new();
        for &(_, s) in &order {
            let mut ok = true;
            'scan: for t in space.neighbors_within(s, params.r_soft) {
                // `t` may be an earlier atom of P^j, a point of S^{<j}, or both.
                let hits = (considered[t] && t != s) as u8 + in_prev[t] as u8;
                if hits == 0 {
                    continue;
                }
                let phi = params.phi(space.dist(s, t));
                for _ in 0..hits {
                    if phi < rng::unit_open_closed(&mut accept_rng) {
                        ok = false;
                        break 'scan;
                    }
                }
            }
            considered[s] = true;
            if ok {
                level.push(s);
            }
        }
        level.sort_unstable();
        for &s in &level {
            in_prev[s] = true;
        }
        levels.push(level);
    }
    Ok(AlmostNet { levels, params: *params })
}

fn greedy_complete(space: &MetricMeasureSpace, start: &[usize], target: &[usize], r0: f64, r1: f64) -> Vec<usize> {
    let mut in_net = vec![false; space.len()];
    for &x in start {
        in_net[x] = true;
    }
    let mut added = Vec::new();
    let mut sorted_target = target.to_vec();
    sorted_target.sort_unstable();
    sorted_target.dedup();
    for t in sorted_target {
        if space.neighbors_within(t, 2.0 * r1).into_iter().any(|x| in_net[x]) {
            continue;
        }
        debug_assert!(2.0 * r1 > r0, "covering radius must exceed the separation");
        in_net[t] = true;
        added.push(t);
    }
    added
}

/// Extends `partial` by greedily adding, in index order, every target point
/// not yet within `2 r1` of the net.
pub fn complete_to_net(space: &MetricMeasureSpace, partial: &AlmostNet, target_region: &[usize]) -> WeightedNet {
    let p = &partial.params;
    let mut tagged: Vec<(usize, u32)> =
        partial.levels.iter().enumerate().flat_map(|(j, l)| l.iter().map(move |&x| (x, j as u32 + 1))).collect();
    let start: Vec<usize> = tagged.iter().map(|t| t.0).collect();
    tagged.extend(greedy_complete(space, &start, target_region, p.r0, p.r1).into_iter().map(|x| (x, 0)));
    tagged.sort_unstable();
    WeightedNet {
        points: tagged.iter().map(|t| t.0).collect(),
        levels: tagged.iter().map(|t| t.1).collect(),
        rho: None,
        params: *p,
    }
}

/// Number of points greedy completion adds to make `partial` a
/// `(r0, 2 r1)`-net of the whole space: an upper bound on the minimal count.
pub fn coverage_deficit(space: &MetricMeasureSpace, partial: &AlmostNet, params: &NetParams) -> usize {
    let all: Vec<usize> = (0..space.len()).collect();
    greedy_complete(space, &partial.union(), &all, params.r0, params.r1).len()
}

/// `count` independent uniform radii in `[r2, r3)`.
pub fn draw_radii(count: usize, r2: f64, r3: f64, seed: u64) -> Result<Vec<f64>> {
    if !(r2 < r3) || !r2.is_finite() || !r3.is_finite() {
        return Err(Error::InvalidParams(format!("radius band needs r2 < r3, got [{r2}, {r3}]")));
    }
    let mut rng = rng::stream(seed, 0, Purpose::Radii);
    Ok((0..count).map(|_| r2 + (r3 - r2) * rng::unit_closed_open(&mut rng)).collect())
}

/// Gives every net point an independent uniform radius in `[r2, r3)`.
pub fn assign_radii(mut net: WeightedNet, seed: u64) -> Result<WeightedNet> {
    net.rho = Some(draw_radii(net.len(), net.params.r2, net.params.r3, seed)?);
    Ok(net)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct NetReport {
    /// Pairs of net entries (by position in the net) at distance `<= r0`.
    pub separation: Vec<(usize, usize)>,
    /// Target points with no net point closer than `2 r1`.
    pub uncovered: Vec<usize>,
    /// Net entries whose radius falls outside `[r2, r3]`.
    pub bad_radii: Vec<usize>,
}

impl NetReport {
    pub fn is_valid(&self) -> bool {
        self.separation.is_empty() && self.uncovered.is_empty() && self.bad_radii.is_empty()
    }
}

pub fn validate_net(space: &MetricMeasureSpace, net: &WeightedNet, target_region: &[usize]) -> NetReport {
    let p = &net.params;
    let mut report = NetReport::default();
    for i in 0..net.len() {
        for j in i + 1..net.len() {
            if space.dist(net.points[i], net.points[j]) <= p.r0 {
                report.separation.push((i, j));
            }
        }
    }
    let mut in_net = vec![false; space.len()];
    for &x in &net.points {
        in_net[x] = true;
    }
    for &t in target_region {
        if !space.neighbors_within(t, 2.0 * p.r1).into_iter().any(|x| in_net[x]) {
            report.uncovered.push(t);
        }
    }
    if let Some(rho) = &net.rho {
        report.bad_radii = rho.iter().enumerate().filter(|(_, r)| !(p.r2..=p.r3).contains(*r)).map(|(i, _)| i).collect();
    }
    report
}

/// Checks `d > r0` between all distinct points of `points`.
pub fn is_separated(space: &MetricMeasureSpace, points: &[usize], r0: f64) -> bool {
    points.iter().enumerate().all(|(i, &x)| points[i + 1..].iter().all(|&y| x != y && space.dist(x, y) > r0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::SimplicialComplex;
    use crate::mmspace::{make_flat_torus, make_graph_space, SampleMode};

    fn params() -> NetParams {
        NetParams { r0: 0.5, r_soft: 0.75, r1: 0.75, r2: 1.5, r3: 1.65, j_levels: 3, intensity: 1.0, kernel: SoftKernel::Linear }
    }

    fn line(xs: &[f64]) -> MetricMeasureSpace {
        let dist = xs.iter().flat_map(|a| xs.iter().map(move |b| (a - b).abs())).collect();
        MetricMeasureSpace::from_distance_matrix(dist, vec![1.0; xs.len()], None).unwrap()
    }

    fn c12_params() -> NetParams {
        // Completion only reads r0 and r1; r_soft is never consulted.
        NetParams { r0: 1.5, r_soft: 1.5, r1: 1.5, r2: 3.0, r3: 3.5, j_levels: 1, intensity: 1.0, kernel: SoftKernel::Linear }
    }

    #[test]
    fn params_validation() {
        assert!(params().validate().is_ok());
        let mut p = params();
        p.r_soft = 0.4;
        assert!(p.validate().is_err());
        let mut p = params();
        p.r2 = 1.2;
        assert!(p.validate().is_err());
        let mut p = params();
        p.r3 = p.r2;
        assert!(p.validate().is_err());
        let mut p = params();
        p.j_levels = 0;
        assert!(p.validate().is_err());
        assert!(c12_params().validate().is_err());
        let t = NetParams::thick_preset(0.1, 2.0, 3, 1.0);
        assert!(t.validate().is_ok());
        assert!((t.r2 - 0.8).abs() < 1e-12 && (t.r3 - 0.9).abs() < 1e-12 && (t.r1 - 0.3).abs() < 1e-12);
    }

    #[test]
    fn phi_boundary_values() {
        let p = params();
        assert_eq!(p.phi(0.0), 0.0);
        assert_eq!(p.phi(0.5), 0.0);
        assert_eq!(p.phi(0.75), 1.0);
        assert!((p.phi(0.625) - 0.5).abs() < 1e-12);
        let s = NetParams { kernel: SoftKernel::Smoothstep, ..p };
        assert!((s.phi(0.625) - 0.5).abs() < 1e-12);
        assert!(s.phi(0.55) < p.phi(0.55));
    }

    #[test]
    fn poisson_extremes() {
        let s = line(&[0.0, 1.0, 2.0]);
        assert!(poisson_points(&s, 0.0, 1).is_empty());
        assert_eq!(poisson_points(&s, f64::INFINITY, 1), vec![0, 1, 2]);
    }

    #[test]
    fn poisson_count_is_binomial() {
        // 1000 unit-weight points at intensity 1: mean 1000 (1 - 1/e), sd sqrt(n p (1-p)).
        let xs: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        let s = line(&xs);
        let p = 1.0 - (-1.0f64).exp();
        let sd = (1000.0 * p * (1.0 - p)).sqrt();
        for seed in 0..5 {
            let k = poisson_points(&s, 1.0, seed).len() as f64;
            assert!((k - 1000.0 * p).abs() < 3.0 * sd, "count {k}");
        }
    }

    #[test]
    fn lone_point_is_always_accepted() {
        let s = line(&[0.0]);
        let p = NetParams { intensity: f64::INFINITY, ..params() };
        for seed in 0..20 {
            let net = build_almost_net(&s, &p, seed).unwrap();
            assert_eq!(net.levels[0], vec![0]);
        }
    }

    #[test]
    fn far_points_both_accepted_close_points_never() {
        let p = NetParams { intensity: f64::INFINITY, j_levels: 1, ..params() };
        let far = line(&[0.0, 0.8]);
        let close = line(&[0.0, 0.3]);
        for seed in 0..50 {
            assert_eq!(build_almost_net(&far, &p, seed).unwrap().union(), vec![0, 1]);
            assert_eq!(build_almost_net(&close, &p, seed).unwrap().union().len(), 1);
        }
    }

    #[test]
    fn repeated_atom_across_levels_is_rejected() {
        // With intensity infinite every level re-draws the lone point; it is
        // at distance 0 from itself in S^{<j}.
        let p = NetParams { intensity: f64::INFINITY, j_levels: 3, ..params() };
        let net = build_almost_net(&line(&[0.0]), &p, 4).unwrap();
        assert_eq!(net.levels, vec![vec![0], vec![], vec![]]);
    }

    #[test]
    fn determinism_and_level_monotonicity() {
        let s = make_flat_torus(&[6.0, 6.0], SampleMode::Grid, 4.0, 0).unwrap();
        let a = build_almost_net(&s, &params(), 17).unwrap();
        let b = build_almost_net(&s, &params(), 17).unwrap();
        assert_eq!(a, b);
        let longer = build_almost_net(&s, &NetParams { j_levels: 5, ..params() }, 17).unwrap();
        assert_eq!(&longer.levels[..3], &a.levels[..]);
        for j in 1..5 {
            let (lo, hi) = (longer.union_upto(j), longer.union_upto(j + 1));
            assert!(lo.iter().all(|x| hi.binary_search(x).is_ok()));
            assert!(is_separated(&s, &hi, 0.5));
        }
    }

    #[test]
    fn completion_of_a_covering_partial_adds_nothing() {
        let s = line(&[0.0, 1.0, 2.0, 3.0]);
        let partial = AlmostNet { levels: vec![vec![0, 3]], params: params() };
        let net = complete_to_net(&s, &partial, &[0, 1, 2, 3]);
        assert_eq!(net.points, vec![0, 3]);
        assert_eq!(coverage_deficit(&s, &partial, &params()), 0);
    }

    #[test]
    fn completion_on_c12() {
        let s = make_graph_space(&SimplicialComplex::cycle(12), 1.0).unwrap();
        let empty = AlmostNet::empty(c12_params());
        let all: Vec<usize> = (0..12).collect();
        let net = complete_to_net(&s, &empty, &all);
        assert_eq!(net.points, vec![0, 3, 6, 9]);
        assert!(net.levels.iter().all(|&l| l == 0));
        assert!(validate_net(&s, &net, &all).is_valid());
        assert_eq!(coverage_deficit(&s, &empty, &c12_params()), 4);
        // Maximality: no further point can be added while keeping separation.
        for x in 0..12 {
            if !net.points.contains(&x) {
                assert!(net.points.iter().any(|&y| s.dist(x, y) <= 1.5));
            }
        }
    }

    #[test]
    fn greedy_deficit_bounds_the_true_minimum_on_c12() {
        // Exhaustive search over all subsets of C12 for the smallest
        // 1.5-separated set with every vertex within distance < 3.
        let s = make_graph_space(&SimplicialComplex::cycle(12), 1.0).unwrap();
        let mut best = usize::MAX;
        for mask in 1u32..(1 << 12) {
            let pts: Vec<usize> = (0..12).filter(|i| mask >> i & 1 == 1).collect();
            if pts.len() >= best || !is_separated(&s, &pts, 1.5) {
                continue;
            }
            if (0..12).all(|t| pts.iter().any(|&p| s.dist(t, p) < 3.0)) {
                best = pts.len();
            }
        }
        assert_eq!(best, 3);
        assert!(best <= coverage_deficit(&s, &AlmostNet::empty(c12_params()), &c12_params()));
    }

    #[test]
    fn isolated_far_point_gains_a_net_point() {
        let s = line(&[0.0, 0.1, 0.2, 10.0]);
        let partial = AlmostNet { levels: vec![vec![0]], params: params() };
        let net = complete_to_net(&s, &partial, &[0, 1, 2, 3]);
        assert_eq!(net.points, vec![0, 3]);
        assert_eq!(net.levels, vec![1, 0]);
    }

    #[test]
    fn radii() {
        assert!(draw_radii(3, 1.5, 1.5, 0).is_err());
        assert!(draw_radii(3, 2.0, 1.0, 0).is_err());
        let r = draw_radii(10_000, 1.5, 1.65, 3).unwrap();
        assert!(r.iter().all(|&x| (1.5..=1.65).contains(&x)));
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        // Uniform on [a, b]: sd = (b - a) / sqrt(12); standard error over n draws.
        let se = 0.15 / 12f64.sqrt() / (r.len() as f64).sqrt();
        assert!((mean - 1.575).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn validation_reports() {
        let s = line(&[0.0, 0.1, 5.0]);
        let empty = WeightedNet { points: vec![], levels: vec![], rho: None, params: params() };
        assert!(validate_net(&s, &empty, &[]).is_valid());
        let dup = WeightedNet { points: vec![0, 0], levels: vec![0, 0], rho: None, params: params() };
        assert_eq!(validate_net(&s, &dup, &[]).separation, vec![(0, 1)]);
        let one = WeightedNet { points: vec![0], levels: vec![0], rho: None, params: params() };
        assert_eq!(validate_net(&s, &one, &[0, 1, 2]).uncovered, vec![2]);
    }

    #[test]
    fn net_text_round_trip() {
        let s = make_flat_torus(&[4.0, 4.0], SampleMode::Grid, 4.0, 0).unwrap();
        let almost = build_almost_net(&s, &params(), 2).unwrap();
        let all: Vec<usize> = (0..s.len()).collect();
        let net = complete_to_net(&s, &almost, &all);
        let back = WeightedNet::from_text(&net.to_text()).unwrap();
        assert_eq!(back, net);
        let net = assign_radii(net, 5).unwrap();
        let text = net.to_text();
        assert!(text.starts_with("net v1\n"));
        assert_eq!(WeightedNet::from_text(&text).unwrap().to_text(), text);
    }
}
