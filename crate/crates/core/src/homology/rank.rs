//! Rank of a sparse matrix by Gaussian elimination with Markowitz-style
//! pivoting: repeatedly take the live column with the fewest nonzeros and,
//! within it, the shortest row, which keeps fill-in low on the banded,
//! bounded-degree boundary matrices produced by nerves.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::field::Field;

/// Columns of `(row, value)` entries; rows within a column need not be sorted.
pub fn sparse_rank<F: Field>(n_rows: usize, columns: &[Vec<(u32, i64)>]) -> usize {
    // Row-major copy, rows sorted by column index.
    let mut rows: Vec<Vec<(u32, F)>> = vec![Vec::new(); n_rows];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); columns.len()];
    for (c, col) in columns.iter().enumerate() {
        for &(r, v) in col {
            let v = F::from_i64(v);
            if !v.is_zero() {
                rows[r as usize].push((c as u32, v));
                col_rows[c].push(r);
            }
        }
    }
    for row in &mut rows {
        row.sort_unstable_by_key(|e| e.0);
    }
    let mut active = vec![true; n_rows];

    let live_rows = |c: usize, col_rows: &mut Vec<Vec<u32>>, rows: &[Vec<(u32, F)>], active: &[bool]| {
        col_rows[c].retain(|&r| active[r as usize] && rows[r as usize].binary_search_by_key(&(c as u32), |e| e.0).is_ok());
        col_rows[c].sort_unstable();
        col_rows[c].dedup();
    };

    let mut heap: BinaryHeap<Reverse<(usize, u32)>> =
        col_rows.iter().enumerate().map(|(c, rs)| Reverse((rs.len(), c as u32))).collect();
    let mut done = vec![false; columns.len()];
    let mut rank = 0;

    while let Some(Reverse((count, c))) = heap.pop() {
        let c = c as usize;
        if done[c] {
            continue;
        }
        live_rows(c, &mut col_rows, &rows, &active);
        let live = col_rows[c].len();
        if live != count {
            heap.push(Reverse((live, c as u32)));
            continue;
        }
        done[c] = true;
        if live == 0 {
            continue;
        }
        let pivot_row = *col_rows[c].iter().min_by_key(|&&r| (rows[r as usize].len(), r)).unwrap() as usize;
        active[pivot_row] = false;
        rank += 1;
        let pivot = std::mem::take(&mut rows[pivot_row]);
        let pv = &pivot[pivot.binary_search_by_key(&(c as u32), |e| e.0).unwrap()].1;
        let pv_inv = pv.inv();
        let targets: Vec<u32> = col_rows[c].iter().copied().filter(|&r| r as usize != pivot_row).collect();
        for r in targets {
            let r = r as usize;
            let row = std::mem::take(&mut rows[r]);
            let a = &row[row.binary_search_by_key(&(c as u32), |e| e.0).unwrap()].1;
            let factor = a.mul(&pv_inv).neg();
            let (merged, fresh) = axpy(&row, &pivot, &factor);
            for col in fresh {
                col_rows[col as usize].push(r as u32);
            }
            rows[r] = merged;
        }
        col_rows[c].clear();
        // The pivot row's other columns lose one live row each; counts are
        // refreshed lazily when popped.
    }
    rank
}

/// `row + factor * pivot`, returning the merged row and the columns that were
/// not present in `row` before.
fn axpy<F: Field>(row: &[(u32, F)], pivot: &[(u32, F)], factor: &F) -> (Vec<(u32, F)>, Vec<u32>) {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let mut fresh = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j == pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_pivot = i == row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_pivot {
            let v = factor.mul(&pivot[j].1);
            if !v.is_zero() {
                fresh.push(pivot[j].0);
                out.push((pivot[j].0, v));
            }
            j += 1;
        } else {
            let v = row[i].1.add(&factor.mul(&pivot[j].1));
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    (out, fresh)
}
