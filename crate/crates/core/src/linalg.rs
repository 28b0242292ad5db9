//! Gaussian elimination over F_l for small dense matrices.

use crate::arith::{inv_mod, mul_mod, sub_mod};

/// Row-reduce in place; returns the pivot columns.
fn row_reduce(m: &mut [Vec<u64>], l: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], l).expect("l prime");
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, l);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in c..cols {
                    let sub = mul_mod(f, m[r][j], l);
                    m[i][j] = sub_mod(m[i][j], sub, l);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<u64>], l: u64) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m, l).len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows.
pub fn kernel(a: &[Vec<u64>], l: u64) -> Vec<Vec<u64>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m = a.to_vec();
    let pivots = row_reduce(&mut m, l);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![0u64; cols];
            x[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = sub_mod(0, m[r][f], l);
            }
            x
        })
        .collect()
}
