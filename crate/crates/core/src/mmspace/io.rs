//! Plain-text space format.
//!
//! ```text
//! mmspace v1 <npoints> torus <dim> <L1> ... <Ld>
//! <id> <weight> <inj|NA>          (one line per point)
//! coords <dim>
//! <id> <x1> ... <xd>              (one line per point)
//! ```
//!
//! or, for explicit metrics,
//!
//! ```text
//! mmspace v1 <npoints> explicit <geodesic|plain>
//! <id> <weight> <inj|NA>
//! dist
//! <i> d(i,0) ... d(i,i-1)         (i = 1 .. npoints-1)
//! ```
//!
//! Floats are written in shortest round-trip form, so reading a written
//! space reproduces it bit for bit. The ambient link of a subspace is not
//! serialized.

use std::fmt::Write as _;

use super::torus::Torus;
use super::{Geometry, MetricMeasureSpace};
use crate::error::{Error, Result};

pub(super) fn write_space(space: &MetricMeasureSpace) -> String {
    let n = space.len();
    let mut out = String::new();
    match space.geometry() {
        Geometry::Torus(t) => {
            let sides: Vec<String> = t.sides().iter().map(f64::to_string).collect();
            let _ = writeln!(out, "mmspace v1 {n} torus {} {}", t.dim(), sides.join(" "));
        }
        Geometry::Explicit { geodesic, .. } => {
            let _ = writeln!(out, "mmspace v1 {n} explicit {}", if *geodesic { "geodesic" } else { "plain" });
        }
    }
    for p in 0..n {
        let inj = space.inj().map_or_else(|| "NA".to_string(), |i| i[p].to_string());
        let _ = writeln!(out, "{p} {} {inj}", space.weight(p));
    }
    match space.geometry() {
        Geometry::Torus(t) => {
            let _ = writeln!(out, "coords {}", t.dim());
            for p in 0..n {
                let xs: Vec<String> = t.coords(p).iter().map(f64::to_string).collect();
                let _ = writeln!(out, "{p} {}", xs.join(" "));
            }
        }
        Geometry::Explicit { dist, .. } => {
            out.push_str("dist\n");
            for i in 1..n {
                let row: Vec<String> = (0..i).map(|j| dist[i * n + j].to_string()).collect();
                let _ = writeln!(out, "{i} {}", row.join(" "));
            }
        }
    }
    out
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.and_then(|t| t.parse().ok()).ok_or_else(|| Error::parse(line, format!("expected {what}")))
}

pub(super) fn read_space(text: &str) -> Result<MetricMeasureSpace> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.trim().is_empty());
    let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let mut h = header.split_whitespace();
    if h.next() != Some("mmspace") || h.next() != Some("v1") {
        return Err(Error::parse(ln, "expected `mmspace v1`"));
    }
    let n: usize = num(h.next(), ln, "point count")?;
    let kind = h.next().ok_or_else(|| Error::parse(ln, "missing geometry kind"))?;
    let (sides, geodesic) = match kind {
        "torus" => {
            let d: usize = num(h.next(), ln, "dimension")?;
            let sides = (0..d).map(|_| num(h.next(), ln, "side length")).collect::<Result<Vec<f64>>>()?;
            (Some(sides), false)
        }
        "explicit" => (None, h.next() == Some("geodesic")),
        other => return Err(Error::parse(ln, format!("unknown geometry {other:?}"))),
    };

    let mut weights = Vec::with_capacity(n);
    let mut inj = Vec::with_capacity(n);
    let mut any_na = false;
    for p in 0..n {
        let (ln, line) = lines.next().ok_or_else(|| Error::parse(0, "truncated point list"))?;
        let mut t = line.split_whitespace();
        let id: usize = num(t.next(), ln, "point id")?;
        if id != p {
            return Err(Error::parse(ln, format!("expected point id {p}")));
        }
        weights.push(num(t.next(), ln, "weight")?);
        match t.next() {
            Some("NA") => any_na = true,
            tok => inj.push(num::<f64>(tok, ln, "injectivity radius")?),
        }
    }
    let inj = if any_na { None } else { Some(inj) };

    let (ln, section) = lines.next().ok_or_else(|| Error::parse(0, "missing geometry section"))?;
    let geometry = match sides {
        Some(sides) => {
            let d = sides.len();
            if section.split_whitespace().collect::<Vec<_>>() != ["coords", &d.to_string()] {
                return Err(Error::parse(ln, format!("expected `coords {d}`")));
            }
            let mut coords = Vec::with_capacity(n * d);
            for p in 0..n {
                let (ln, line) = lines.next().ok_or_else(|| Error::parse(0, "truncated coords"))?;
                let mut t = line.split_whitespace();
                if num::<usize>(t.next(), ln, "point id")? != p {
                    return Err(Error::parse(ln, format!("expected point id {p}")));
                }
                for _ in 0..d {
                    coords.push(num(t.next(), ln, "coordinate")?);
                }
            }
            Geometry::Torus(Torus::new(sides, coords))
        }
        None => {
            if section.trim() != "dist" {
                return Err(Error::parse(ln, "expected `dist`"));
            }
            let mut dist = vec![0.0; n * n];
            for i in 1..n {
                let (ln, line) = lines.next().ok_or_else(|| Error::parse(0, "truncated distance rows"))?;
                let mut t = line.split_whitespace();
                if num::<usize>(t.next(), ln, "row id")? != i {
                    return Err(Error::parse(ln, format!("expected row {i}")));
                }
                for j in 0..i {
                    let d: f64 = num(t.next(), ln, "distance")?;
                    dist[i * n + j] = d;
                    dist[j * n + i] = d;
                }
            }
            Geometry::Explicit { n, dist, geodesic }
        }
    };
    MetricMeasureSpace::from_parts(geometry, weights, inj)
}
