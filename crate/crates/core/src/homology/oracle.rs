//! Independent reference: dense integer Smith normal form of every boundary
//! matrix. Slow, but exact and free of any characteristic assumption.

use super::{boundary_matrix, BettiProfile};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

pub const ORACLE_VERTEX_LIMIT: usize = 12;

/// Integral homology summary: rational Betti numbers plus torsion coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralHomology {
    pub betti: Vec<usize>,
    /// `torsion[k]` lists the invariant factors `> 1` of `H_k(.; Z)`.
    pub torsion: Vec<Vec<i128>>,
}

/// Diagonal of the Smith normal form (nonzero entries only, each dividing the next).
pub fn smith_diagonal(mut a: Vec<Vec<i128>>) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero |entry| in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if a[r][c] != 0 && best.is_none_or(|(br, bc)| a[r][c].abs() < a[br][bc].abs()) {
                    best = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = best else { break };
        a.swap(t, pr);
        for row in a.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for r in t + 1..rows {
                let q = a[r][t] / p;
                if q != 0 {
                    for c in t..cols {
                        a[r][c] -= q * a[t][c];
                    }
                }
                dirty |= a[r][t] != 0;
            }
            for c in t + 1..cols {
                let q = a[t][c] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[c] -= q * row[t];
                    }
                }
                dirty |= a[t][c] != 0;
            }
            if !dirty {
                // Pivot must divide the whole trailing block.
                let bad = (t + 1..rows).flat_map(|r| (t + 1..cols).map(move |c| (r, c))).find(|&(r, c)| a[r][c] % p != 0);
                match bad {
                    None => break,
                    Some((r, _)) => {
                        for c in t..cols {
                            a[t][c] += a[r][c];
                        }
                        continue;
                    }
                }
            }
            // A remainder is smaller than the pivot: move it into place.
            let mut best = (t, t);
            for r in t..rows {
                if a[r][t] != 0 && a[r][t].abs() < a[best.0][best.1].abs() {
                    best = (r, t);
                }
            }
            for c in t..cols {
                if a[t][c] != 0 && a[t][c].abs() < a[best.0][best.1].abs() {
                    best = (t, c);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

pub fn integral_homology(complex: &SimplicialComplex) -> Result<IntegralHomology> {
    let n = complex.n_vertices();
    if n > ORACLE_VERTEX_LIMIT {
        return Err(Error::OracleSizeLimit(n, ORACLE_VERTEX_LIMIT));
    }
    let top = complex.k_max();
    // diag[k] = Smith diagonal of the boundary from dimension k to k-1.
    let mut diag: Vec<Vec<i128>> = vec![Vec::new(); top + 2];
    for (k, slot) in diag.iter_mut().enumerate().take(top + 1).skip(1) {
        let b = boundary_matrix(complex, k);
        let mut dense = vec![vec![0i128; b.n_cols]; b.n_rows];
        for (c, col) in b.columns.iter().enumerate() {
            for &(r, v) in col {
                dense[r as usize][c] = v as i128;
            }
        }
        *slot = smith_diagonal(dense);
    }
    let mut betti = Vec::with_capacity(top);
    let mut torsion = Vec::with_capacity(top);
    for k in 0..top {
        let nk = complex.count(k);
        betti.push(nk - diag[k].len() - diag[k + 1].len());
        torsion.push(diag[k + 1].iter().copied().filter(|&d| d > 1).collect());
    }
    Ok(IntegralHomology { betti, torsion })
}

/// Rational Betti numbers `b_0 .. b_{k_max - 1}` via Smith normal form.
pub fn betti_oracle(complex: &SimplicialComplex) -> Result<BettiProfile> {
    let h = integral_homology(complex)?;
    Ok(BettiProfile::new(h.betti, complex.n_vertices() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_small_matrices() {
        assert_eq!(smith_diagonal(vec![vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(smith_diagonal(vec![vec![0, 0], vec![0, 0]]), Vec::<i128>::new());
        assert_eq!(smith_diagonal(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_diagonal(vec![vec![1, 1], vec![1, -1]]), vec![1, 2]);
    }

    #[test]
    fn size_limit() {
        let c = SimplicialComplex::cycle(13);
        assert!(matches!(betti_oracle(&c), Err(Error::OracleSizeLimit(13, 12))));
    }
}
