//! Certification of (epsilon, R)-relations between pointed spaces.
//!
//! Given a partial map `phi` from `s1` to `s2`, the two spaces are glued into
//! `Z = M1 ⊔ M2` with cross distance
//!
//! ```text
//! d_Z(x, y) = min { d1(x, x') + delta + d2(phi(x'), y) : x' in B1(p1, R + 1) }
//! ```
//!
//! and the three relation conditions are checked on `Z`:
//!
//! * (a) `d_Z(p1, p2) < epsilon`;
//! * (b) every point of `B1(p1, R)` is within `epsilon` of `M2`, and vice versa;
//! * (c) `vol1(F) < (1 + epsilon) vol2(F_epsilon) + epsilon` (and symmetrically)
//!   for every `F` in a finite test family: the sample balls `B(x, r)` with
//!   `x` in the R-ball and `r` on an 8-step grid up to `R`, clipped to the
//!   R-ball, plus the whole R-ball.
//!
//! The verdict is a certificate at the resolution of the samples, not a proof
//! over all closed sets.

use std::fmt;

use super::{MetricMeasureSpace, PointedSpace};
use crate::error::{Error, Result};

/// `map[x] = Some(y)` sends point `x` of the first space to point `y` of the second.
pub type PointMap = Vec<Option<usize>>;

const RADIUS_STEPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// (a) base points are close.
    Basepoints,
    /// (b) R-balls are mutually epsilon-dense.
    Density,
    /// (c) measures are comparable on R-ball subsets.
    Measure,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Basepoints => "a",
            Condition::Density => "b",
            Condition::Measure => "c",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub condition: Condition,
    pub witness: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationCertificate {
    pub epsilon: f64,
    pub radius: f64,
    pub verdict: bool,
    pub violations: Vec<Violation>,
}

impl RelationCertificate {
    pub fn violates(&self, c: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == c)
    }
}

/// Cross distances of the glued space, `cross[x * n2 + y] = d_Z(x, y)`.
struct Glued<'a> {
    m2: &'a MetricMeasureSpace,
    cross: Vec<f64>,
}

impl<'a> Glued<'a> {
    fn new(m1: &'a MetricMeasureSpace, m2: &'a MetricMeasureSpace, domain: &[(usize, usize)], delta: f64) -> Self {
        let (n1, n2) = (m1.len(), m2.len());
        let mut cross = vec![f64::INFINITY; n1 * n2];
        for x in 0..n1 {
            let row = &mut cross[x * n2..(x + 1) * n2];
            for &(xp, yp) in domain {
                let head = m1.dist(x, xp) + delta;
                for (y, slot) in row.iter_mut().enumerate() {
                    let d = head + m2.dist(yp, y);
                    if d < *slot {
                        *slot = d;
                    }
                }
            }
        }
        Glued { m2, cross }
    }

    fn d(&self, x: usize, y: usize) -> f64 {
        self.cross[x * self.m2.len() + y]
    }
}

pub fn check_relation(
    s1: &PointedSpace,
    s2: &PointedSpace,
    map: &PointMap,
    delta: f64,
    epsilon: f64,
    radius: f64,
) -> Result<RelationCertificate> {
    for (name, v) in [("delta", delta), ("epsilon", epsilon), ("radius", radius)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
        }
    }
    let (m1, m2) = (s1.space.as_ref(), s2.space.as_ref());
    let (p1, p2) = (s1.basepoint, s2.basepoint);
    if map.len() != m1.len() {
        return Err(Error::InvalidArgument(format!("map has {} entries for {} points", map.len(), m1.len())));
    }
    let mut domain = Vec::new();
    for x in m1.neighbors_within(p1, radius + 1.0) {
        match map[x] {
            Some(y) if y < m2.len() => domain.push((x, y)),
            Some(y) => return Err(Error::PointOutOfRange(y)),
            None => return Err(Error::MapUndefined(x)),
        }
    }
    let z = Glued::new(m1, m2, &domain, delta);
    let mut violations = Vec::new();

    // (a)
    let dp = z.d(p1, p2);
    if !(dp < epsilon) {
        violations.push(Violation { condition: Condition::Basepoints, witness: format!("d_Z(p1, p2) = {dp}") });
    }

    // (b)
    let ball1 = m1.neighbors_within(p1, radius);
    let ball2 = m2.neighbors_within(p2, radius);
    for &x in &ball1 {
        if !(0..m2.len()).any(|y| z.d(x, y) < epsilon) {
            violations.push(Violation { condition: Condition::Density, witness: format!("M1 point {x} is far from M2") });
        }
    }
    for &y in &ball2 {
        if !(0..m1.len()).any(|x| z.d(x, y) < epsilon) {
            violations.push(Violation { condition: Condition::Density, witness: format!("M2 point {y} is far from M1") });
        }
    }

    // (c), both directions.
    let near12: Vec<Vec<usize>> = (0..m1.len())
        .map(|x| if ball1.binary_search(&x).is_ok() { (0..m2.len()).filter(|&y| z.d(x, y) < epsilon).collect() } else { Vec::new() })
        .collect();
    let near21: Vec<Vec<usize>> = (0..m2.len())
        .map(|y| if ball2.binary_search(&y).is_ok() { (0..m1.len()).filter(|&x| z.d(x, y) < epsilon).collect() } else { Vec::new() })
        .collect();
    measure_condition(m1, m2, &ball1, &near12, epsilon, radius, "M1", &mut violations);
    measure_condition(m2, m1, &ball2, &near21, epsilon, radius, "M2", &mut violations);

    Ok(RelationCertificate { epsilon, radius, verdict: violations.is_empty(), violations })
}

#[allow(clippy::too_many_arguments)]
fn measure_condition(
    src: &MetricMeasureSpace,
    dst: &MetricMeasureSpace,
    ball: &[usize],
    near: &[Vec<usize>],
    epsilon: f64,
    radius: f64,
    side: &str,
    violations: &mut Vec<Violation>,
) {
    let mut in_ball = vec![false; src.len()];
    for &x in ball {
        in_ball[x] = true;
    }
    let mut mark = vec![usize::MAX; dst.len()];
    let mut stamp = 0usize;
    let mut check = |set: &[usize], label: String, violations: &mut Vec<Violation>| {
        stamp += 1;
        let mut thick = 0.0;
        for &f in set {
            for &y in &near[f] {
                if mark[y] != stamp {
                    mark[y] = stamp;
                    thick += dst.weight(y);
                }
            }
        }
        let vol = src.measure(set);
        if !(vol < (1.0 + epsilon) * thick + epsilon) {
            violations.push(Violation {
                condition: Condition::Measure,
                witness: format!("{side} set {label}: vol {vol} vs neighbourhood {thick}"),
            });
        }
    };
    for &x in ball {
        for k in 1..=RADIUS_STEPS {
            let r = radius * k as f64 / RADIUS_STEPS as f64;
            let f: Vec<usize> = src.neighbors_within(x, r).into_iter().filter(|&q| in_ball[q]).collect();
            check(&f, format!("B({x}, {r})"), violations);
        }
    }
    check(ball, format!("B(p, {radius})"), violations);
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::mmspace::{make_flat_torus, SampleMode};

    fn torus(side: f64) -> Arc<MetricMeasureSpace> {
        Arc::new(make_flat_torus(&[side, side], SampleMode::Grid, 100.0 / (side * side), 0).unwrap())
    }

    #[test]
    fn identity_certifies_whenever_epsilon_exceeds_delta() {
        let s = torus(1.0);
        let p = PointedSpace::new(s.clone(), 0).unwrap();
        let id: PointMap = (0..s.len()).map(Some).collect();
        for (eps, r) in [(0.05, 0.3), (0.2, 1.0), (0.5, 2.0)] {
            let cert = check_relation(&p, &p, &id, 0.01, eps, r).unwrap();
            assert!(cert.verdict, "{cert:?}");
            assert!(cert.violations.is_empty());
        }
    }

    #[test]
    fn glued_metric_restricts_to_the_original_metrics() {
        // d_Z on M1 x M1 and M2 x M2 is the original metric by construction;
        // the cross part through an isometric map is delta + d.
        let s = torus(1.0);
        let id: Vec<(usize, usize)> = (0..s.len()).map(|x| (x, x)).collect();
        let z = Glued::new(&s, &s, &id, 0.25);
        for x in (0..s.len()).step_by(13) {
            for y in (0..s.len()).step_by(7) {
                assert!((z.d(x, y) - (0.25 + s.dist(x, y))).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn displaced_basepoint_violates_condition_a() {
        let s = torus(1.0);
        // Grid spacing 0.1: point 5 is (0.5, 0).
        let p1 = PointedSpace::new(s.clone(), 0).unwrap();
        let p2 = PointedSpace::new(s.clone(), 5).unwrap();
        assert!((s.dist(0, 5) - 0.5).abs() < 1e-12);
        let id: PointMap = (0..s.len()).map(Some).collect();
        let cert = check_relation(&p1, &p2, &id, 0.01, 0.1, 1.0).unwrap();
        assert!(!cert.verdict);
        assert!(cert.violates(Condition::Basepoints));
    }

    #[test]
    fn missing_map_entries_are_rejected() {
        let s = torus(1.0);
        let p = PointedSpace::new(s.clone(), 0).unwrap();
        let mut partial: PointMap = (0..s.len()).map(Some).collect();
        partial[17] = None;
        assert!(matches!(check_relation(&p, &p, &partial, 0.01, 0.1, 2.0), Err(Error::MapUndefined(17))));
    }
}
