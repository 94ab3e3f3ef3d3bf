//! Small dense exact linear algebra over ℚ.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::rational::Rational;

/// Reduced row echelon form in place; returns the pivot column of each
/// nonzero row.
pub fn row_reduce(m: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[row].clone();
        for (i, r) in m.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let ncols = first.len();
    let mut m = rows.to_vec();
    row_reduce(&mut m, ncols).len()
}

/// Dimension of `{v : rows · v = 0}` inside ℚ^ncols.
pub fn nullity(rows: &[Vec<Rational>], ncols: usize) -> usize {
    ncols - rank(rows)
}

/// Solves `a x = b` when the columns of `a` are linearly independent and the
/// system is consistent; `None` otherwise.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug, ncols + 1);
    if pivots.len() != ncols || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        // either a dependent column or the right-hand side became a pivot
        return None;
    }
    Some(aug.iter().take(ncols).map(|r| r[ncols].clone()).collect())
}

/// `a · b` for row-major matrices.
pub fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let inner = b.len();
    let ncols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = alloc::vec![Rational::zero(); ncols];
            for k in 0..inner {
                if row[k].is_zero() {
                    continue;
                }
                for (o, bv) in out.iter_mut().zip(&b[k]) {
                    if !bv.is_zero() {
                        *o += &row[k] * bv;
                    }
                }
            }
            out
        })
        .collect()
}
