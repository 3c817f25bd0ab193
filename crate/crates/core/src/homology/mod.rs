//! Betti numbers of simplicial complexes.
//!
//! `b_k = n_k - rank(d_k) - rank(d_{k+1})`, with ranks computed by sparse
//! elimination over `F_p`, `p = 2147483629`. Whenever a boundary matrix has at
//! most [`HomologyOptions::rational_check_limit`] columns its rank is also
//! computed over the rationals and the rational value is used. Rational and
//! `F_p` ranks differ only if `p` divides a torsion coefficient.

mod field;
mod oracle;
mod rank;

use num_rational::BigRational;

pub use field::{FLarge, Field, Fp, LARGE_PRIME};
pub use oracle::{betti_oracle, integral_homology, smith_diagonal, IntegralHomology, ORACLE_VERTEX_LIMIT};
pub use rank::sparse_rank;

use crate::complex::{face_without, SimplicialComplex};
use crate::error::{Error, Result};

/// Sparse boundary operator from `k`-chains to `(k-1)`-chains.
///
/// Orientation follows the sorted vertex order: the face omitting position
/// `i` carries sign `(-1)^i`.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    pub dim: usize,
    pub n_rows: usize,
    pub n_cols: usize,
    pub columns: Vec<Vec<(u32, i64)>>,
}

pub fn boundary_matrix(complex: &SimplicialComplex, k: usize) -> BoundaryMatrix {
    if k == 0 {
        return BoundaryMatrix { dim: 0, n_rows: 0, n_cols: complex.count(0), columns: vec![Vec::new(); complex.count(0)] };
    }
    let columns = complex
        .simplices(k)
        .iter()
        .map(|s| {
            (0..s.len())
                .map(|i| {
                    let face = face_without(s, i);
                    let row = complex.index_of(&face).expect("complex is downward closed");
                    (row as u32, if i % 2 == 0 { 1 } else { -1 })
                })
                .collect()
        })
        .collect();
    BoundaryMatrix { dim: k, n_rows: complex.count(k - 1), n_cols: complex.count(k), columns }
}

impl BoundaryMatrix {
    pub fn rank_mod_p(&self) -> usize {
        sparse_rank::<FLarge>(self.n_rows, &self.columns)
    }

    pub fn rank_rational(&self) -> usize {
        sparse_rank::<BigRational>(self.n_rows, &self.columns)
    }

    /// Exact integer product `self * other` is zero (for `self = d_k`, `other = d_{k+1}`).
    pub fn composes_to_zero(&self, other: &BoundaryMatrix) -> bool {
        let mut acc = vec![0i64; self.n_rows];
        for col in &other.columns {
            let mut touched = Vec::new();
            for &(mid, a) in col {
                for &(r, b) in &self.columns[mid as usize] {
                    if acc[r as usize] == 0 {
                        touched.push(r);
                    }
                    acc[r as usize] += a * b;
                }
            }
            let ok = touched.iter().all(|&r| acc[r as usize] == 0);
            for r in touched {
                acc[r as usize] = 0;
            }
            if !ok {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomologyOptions {
    /// Boundary matrices with at most this many columns are also ranked over Q.
    pub rational_check_limit: usize,
}

impl Default for HomologyOptions {
    fn default() -> Self {
        Self { rational_check_limit: 2000 }
    }
}

/// Betti numbers `b_0 .. b_{k_max - 1}` with their volume normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct BettiProfile {
    pub betti: Vec<usize>,
    pub volume: f64,
    pub normalized: Vec<f64>,
}

impl BettiProfile {
    pub fn new(betti: Vec<usize>, volume: f64) -> Self {
        let normalized = betti.iter().map(|&b| b as f64 / volume).collect();
        Self { betti, volume, normalized }
    }
}

fn rank_of(complex: &SimplicialComplex, k: usize, opts: &HomologyOptions) -> usize {
    if k == 0 || complex.count(k) == 0 || complex.count(k - 1) == 0 {
        return 0;
    }
    let b = boundary_matrix(complex, k);
    let fast = b.rank_mod_p();
    if b.n_cols <= opts.rational_check_limit {
        // Disagreement means p divides a torsion coefficient; the rational rank is the truth.
        b.rank_rational()
    } else {
        fast
    }
}

/// `b_k` over the rationals. Needs `k < k_max` so that `d_{k+1}` is complete.
pub fn betti(complex: &SimplicialComplex, k: usize) -> Result<usize> {
    betti_with(complex, k, &HomologyOptions::default())
}

pub fn betti_with(complex: &SimplicialComplex, k: usize, opts: &HomologyOptions) -> Result<usize> {
    if k >= complex.k_max() {
        return Err(Error::InsufficientSkeleton { k, needed: k + 1, k_max: complex.k_max() });
    }
    Ok(complex.count(k) - rank_of(complex, k, opts) - rank_of(complex, k + 1, opts))
}

/// All Betti numbers the dimension cap allows, normalized by vertex count.
pub fn betti_profile(complex: &SimplicialComplex) -> Result<BettiProfile> {
    betti_profile_with(complex, &HomologyOptions::default())
}

pub fn betti_profile_with(complex: &SimplicialComplex, opts: &HomologyOptions) -> Result<BettiProfile> {
    let top = complex.k_max();
    let ranks: Vec<usize> = (0..=top).map(|k| rank_of(complex, k, opts)).collect();
    let betti = (0..top).map(|k| complex.count(k) - ranks[k] - ranks[k + 1]).collect();
    Ok(BettiProfile::new(betti, complex.n_vertices() as f64))
}

/// Betti numbers of the stored chain complex in every dimension `0..=k_max`
/// (the top one treats the missing `d_{k_max+1}` as zero).
pub fn chain_betti(complex: &SimplicialComplex) -> Vec<usize> {
    let top = complex.k_max();
    let opts = HomologyOptions::default();
    let mut ranks: Vec<usize> = (0..=top).map(|k| rank_of(complex, k, &opts)).collect();
    ranks.push(0);
    (0..=top).map(|k| complex.count(k) - ranks[k] - ranks[k + 1]).collect()
}

/// `sum (-1)^k n_k` over the stored simplices.
pub fn euler_characteristic(complex: &SimplicialComplex) -> i64 {
    complex.f_vector().iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
}

/// Checks `d_k d_{k+1} = 0` for every stored pair and the Euler–Poincaré
/// identity on the stored chain complex.
pub fn verify_chain_complex(complex: &SimplicialComplex) -> std::result::Result<(), String> {
    let top = complex.k_max();
    let bs: Vec<BoundaryMatrix> = (1..=top).map(|k| boundary_matrix(complex, k)).collect();
    for w in bs.windows(2) {
        if !w[0].composes_to_zero(&w[1]) {
            return Err(format!("d_{} d_{} != 0", w[0].dim, w[1].dim));
        }
    }
    let chi = euler_characteristic(complex);
    let alt: i64 = chain_betti(complex).iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    if chi != alt {
        return Err(format!("Euler characteristic {chi} != alternating Betti sum {alt}"));
    }
    Ok(())
}
