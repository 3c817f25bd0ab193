//! Computational toolkit for Betti-number convergence along Benjamini–Schramm
//! convergent sequences of discretized metric-measure spaces.
//!
//! The pipeline is
//!
//! 1. build a finite weighted point cloud ([`mmspace`]),
//! 2. sample a random almost-net from iterated Poisson processes and complete
//!    it to a net ([`netgen`]),
//! 3. take the nerve of the weighted ball cover ([`nerve`]),
//! 4. compute exact Betti numbers of the nerve ([`homology`]).
//!
//! [`localstats`] compares the distributions of rooted R-balls across a
//! sequence, [`margulis`] evaluates the explicit tube-volume lower bound and
//! [`harness`] drives whole experiments and writes CSV.

pub mod complex;
pub mod error;
pub mod harness;
pub mod homology;
pub mod localstats;
pub mod margulis;
pub mod mmspace;
pub mod netgen;
pub mod nerve;
pub mod rng;

pub use complex::SimplicialComplex;
pub use error::{Error, Result};
pub use mmspace::{MetricMeasureSpace, PointedSpace};
pub use netgen::{AlmostNet, NetParams, WeightedNet};

