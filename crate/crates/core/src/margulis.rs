//! Explicit lower bound on the volume of a Margulis tube around a short
//! closed geodesic of length `ell` in a pinched negatively curved `d`-manifold.
//!
//! With `k = dim O(d-1) + 1` the chain is
//! `m = floor(ell^(-1/k))`, `L = acosh(eps / (6 c ell^(1/k)))`,
//! `theta = eps / (2 L)` and `floor(pi / (2 theta))` disjoint balls of radius
//! `eps / 3`, each of volume at least the Euclidean one.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TubeBoundInput {
    pub d: u32,
    /// Pinching: sectional curvature in `[-1, -a^2]`.
    pub a: f64,
    pub epsilon: f64,
    pub ell: f64,
    /// Covering constant of `O(d-1)`; no explicit value is known.
    pub c_cover: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TubeBoundResult {
    pub dim_o: u64,
    pub m: f64,
    pub rotation_bound: f64,
    pub depth: f64,
    pub theta: f64,
    pub ball_count: u64,
    pub ball_volume: f64,
    pub volume_bound: f64,
}

impl TubeBoundResult {
    /// `key=value` lines in field order.
    pub fn to_lines(&self) -> String {
        format!(
            "dim_O={}\nm={}\nrotation_bound={}\nL={}\ntheta={}\nball_count={}\nball_volume={}\nvolume_bound={}\n",
            self.dim_o, self.m, self.rotation_bound, self.depth, self.theta, self.ball_count, self.ball_volume, self.volume_bound
        )
    }
}

/// Volume of the Euclidean `d`-ball of radius `r`.
pub fn euclidean_ball_volume(d: u32, r: f64) -> f64 {
    // V_0 = 1, V_1 = 2, V_d = V_{d-2} * 2 pi / d.
    let mut v = if d % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if d % 2 == 0 { 2 } else { 3 };
    while k <= d {
        v *= 2.0 * PI / k as f64;
        k += 2;
    }
    v * r.powi(d as i32)
}

/// `dim O(d-1) = (d-1)(d-2)/2`.
pub fn orthogonal_group_dim(d: u32) -> u64 {
    let d = d as u64;
    (d - 1) * (d - 2) / 2
}

/// Largest `ell` for which the bound is defined: `(eps / (6 c))^(dim_O + 1)`.
pub fn ell_threshold(d: u32, epsilon: f64, c_cover: f64) -> f64 {
    (epsilon / (6.0 * c_cover)).powf((orthogonal_group_dim(d) + 1) as f64)
}

fn check(input: &TubeBoundInput) -> Result<()> {
    if input.d < 4 {
        return Err(Error::DimensionTooLow(input.d));
    }
    let positive = |x: f64| x > 0.0 && x.is_finite();
    if !(input.a > 0.0 && input.a <= 1.0) {
        return Err(Error::InvalidArgument(format!("pinching a = {} must lie in (0, 1]", input.a)));
    }
    for (name, v) in [("epsilon", input.epsilon), ("ell", input.ell), ("c", input.c_cover)] {
        if !positive(v) {
            return Err(Error::InvalidArgument(format!("{name} = {v} must be positive")));
        }
    }
    Ok(())
}

pub fn tube_volume_lower_bound(input: &TubeBoundInput) -> Result<TubeBoundResult> {
    check(input)?;
    let dim_o = orthogonal_group_dim(input.d);
    let root = input.ell.powf(1.0 / (dim_o + 1) as f64);
    let rotation_bound = input.c_cover * root;
    let arg = input.epsilon / (6.0 * rotation_bound);
    if !(arg > 1.0) {
        return Err(Error::BoundNotApplicable {
            ell: input.ell,
            threshold: ell_threshold(input.d, input.epsilon, input.c_cover),
        });
    }
    let depth = arg.acosh();
    let theta = (input.epsilon / (2.0 * depth)).max(f64::EPSILON * PI);
    let ball_count = (PI / (2.0 * theta)).floor() as u64;
    let ball_volume = euclidean_ball_volume(input.d, input.epsilon / 3.0);
    Ok(TubeBoundResult {
        dim_o,
        m: (1.0 / root).floor(),
        rotation_bound,
        depth,
        theta,
        ball_count,
        ball_volume,
        volume_bound: ball_count as f64 * ball_volume,
    })
}

/// The bound extended by the trivial value 0 where the chain is undefined,
/// so it can be swept over any range of `ell`. Invalid inputs still error.
pub fn tube_volume_bound_or_zero(input: &TubeBoundInput) -> Result<f64> {
    match tube_volume_lower_bound(input) {
        Ok(r) => Ok(r.volume_bound),
        Err(Error::BoundNotApplicable { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}
