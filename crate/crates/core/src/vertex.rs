//! Vertices of `{x ≥ 0 : A x = b}` by basic-feasible-solution support
//! enumeration.
//!
//! Every vertex has a unique support whose columns are linearly independent,
//! so enumerating supports of size at most `rank(A)` and keeping the strictly
//! positive unique solutions yields each vertex exactly once. Candidates are
//! first solved on integer-scaled rows with checked `i128` arithmetic; a
//! candidate that overflows is re-solved over ℚ.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::linalg;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Vertex {
    pub support: Vec<usize>,
    pub values: Vec<Rational>,
}

impl Vertex {
    pub fn dense(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (&j, v) in self.support.iter().zip(&self.values) {
            x[j] = v.clone();
        }
        x
    }
}

/// Integer rows `[A_i | b_i]` scaled by the lcm of their denominators, if
/// every entry fits in an `i64`.
fn integer_rows(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Vec<i64>>> {
    a.iter()
        .zip(b)
        .map(|(row, bi)| {
            let lcm = row.iter().chain(core::iter::once(bi)).fold(BigInt::from(1), |l, v| l.lcm(v.denom()));
            row.iter()
                .chain(core::iter::once(bi))
                .map(|v| (v.numer() * (&lcm / v.denom())).to_i64())
                .collect()
        })
        .collect()
}

enum Solve {
    Rejected,
    Accepted(Vec<Rational>),
    Overflow,
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Gauss-Jordan on the integer system restricted to `cols`, keeping each row
/// primitive. Accepts only unique, strictly positive solutions.
fn solve_integer(rows: &[Vec<i64>], cols: &[usize], rhs: usize) -> Solve {
    let s = cols.len();
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| cols.iter().map(|&c| r[c] as i128).chain(core::iter::once(r[rhs] as i128)).collect())
        .collect();
    let p = m.len();
    let mut pivot_rows = Vec::with_capacity(s);
    for k in 0..s {
        let r0 = pivot_rows.len();
        let Some(r) = (r0..p).find(|&i| m[i][k] != 0) else {
            return Solve::Rejected; // dependent column
        };
        m.swap(r0, r);
        let pivot = m[r0].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r0 || row[k] == 0 {
                continue;
            }
            let f = row[k];
            let mut g = 0i128;
            for j in 0..=s {
                let Some(v) = pivot[k].checked_mul(row[j]).and_then(|a| f.checked_mul(pivot[j]).and_then(|b| a.checked_sub(b)))
                else {
                    return Solve::Overflow;
                };
                row[j] = v;
                g = gcd(g, v);
            }
            if g > 1 {
                for v in row.iter_mut() {
                    *v /= g;
                }
            }
        }
        pivot_rows.push(r0);
    }
    if m[s..].iter().any(|row| row[s] != 0) {
        return Solve::Rejected; // inconsistent
    }
    let mut x = Vec::with_capacity(s);
    for (k, &r) in pivot_rows.iter().enumerate() {
        let (num, den) = (m[r][s], m[r][k]);
        if num == 0 || (num > 0) != (den > 0) {
            return Solve::Rejected;
        }
        x.push(Rational::new(BigInt::from(num), BigInt::from(den)));
    }
    Solve::Accepted(x)
}

fn solve_rational(a: &[Vec<Rational>], b: &[Rational], cols: &[usize]) -> Option<Vec<Rational>> {
    let sub: Vec<Vec<Rational>> = a.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
    let x = linalg::solve_unique(&sub, b)?;
    x.iter().all(Signed::is_positive).then_some(x)
}

/// Advances `comb` to the next `k`-combination of `0..n` in lexicographic
/// order; returns `false` when exhausted.
fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    for i in (0..k).rev() {
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All vertices, ordered by support size then lexicographic support.
pub(crate) fn enumerate(a: &[Vec<Rational>], b: &[Rational]) -> Vec<Vertex> {
    let n = a.first().map_or(0, Vec::len);
    let max_support = linalg::rank(a).min(n);
    let ints = integer_rows(a, b);
    let mut out = Vec::new();
    for size in 1..=max_support {
        let mut comb: Vec<usize> = (0..size).collect();
        loop {
            let solved = match &ints {
                Some(rows) => match solve_integer(rows, &comb, n) {
                    Solve::Accepted(x) => Some(x),
                    Solve::Rejected => None,
                    Solve::Overflow => solve_rational(a, b, &comb),
                },
                None => solve_rational(a, b, &comb),
            };
            if let Some(values) = solved {
                out.push(Vertex { support: comb.clone(), values });
            }
            if !next_combination(&mut comb, n) {
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn simplex_vertices() {
        // x0 + x1 + x2 = 1
        let a = vec![vec![int(1), int(1), int(1)]];
        let v = enumerate(&a, &[int(1)]);
        assert_eq!(v.len(), 3);
        assert!(v.iter().all(|v| v.values == vec![int(1)]));
    }

    #[test]
    fn integer_and_rational_paths_agree() {
        let a = vec![
            vec![int(3), int(1), rat(1, 2), int(2)],
            vec![int(1), int(3), int(2), rat(1, 3)],
        ];
        let b = vec![int(1), int(1)];
        let fast = enumerate(&a, &b);
        let mut slow = Vec::new();
        for size in 1..=2 {
            let mut comb: Vec<usize> = (0..size).collect();
            loop {
                if let Some(values) = solve_rational(&a, &b, &comb) {
                    slow.push(Vertex { support: comb.clone(), values });
                }
                if !next_combination(&mut comb, 4) {
                    break;
                }
            }
        }
        assert_eq!(fast, slow);
        assert!(!fast.is_empty());
    }
}
