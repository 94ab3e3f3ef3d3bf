//! Dense two-phase simplex over exact rationals.
//!
//! Problems are in standard form: `A x = b`, `x ≥ 0`. The tableau is always
//! exact; only the objective row is generic so that real-valued objectives
//! (information measures) can be optimized over an exactly represented
//! feasible region. Bland's rule is used for both the entering and leaving
//! variable, which rules out cycling.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Scalar type of an objective row.
pub trait LpScalar: Clone + core::fmt::Debug {
    fn additive_zero() -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    /// Strictly negative, beyond the scalar's tolerance.
    fn is_below_zero(&self) -> bool;
}

impl LpScalar for Rational {
    fn additive_zero() -> Self {
        Zero::zero()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn is_below_zero(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// Reduced costs above `-REAL_TOLERANCE` count as nonnegative.
pub const REAL_TOLERANCE: f64 = 1e-12;

impl LpScalar for f64 {
    fn additive_zero() -> Self {
        0.0
    }
    fn from_rational(r: &Rational) -> Self {
        crate::rational::to_f64(r)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn scale(&self, r: &Rational) -> Self {
        self * crate::rational::to_f64(r)
    }
    fn is_below_zero(&self) -> bool {
        *self < -REAL_TOLERANCE
    }
}

/// `A x = b, x ≥ 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<S> {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Rational>, value: S },
}

impl LinearProgram {
    pub fn add_row(&mut self, row: Vec<Rational>, rhs: Rational) {
        self.a.push(row);
        self.b.push(rhs);
    }

    fn num_vars(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let inv = self.rows[r][col].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = core::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for &j in &nz {
                row[j] -= &f * &pivot_row[j];
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = col;
    }

    fn reduced_cost<S: LpScalar>(&self, cost: &[S], j: usize) -> S {
        let mut d = cost[j].clone();
        for (i, &bi) in self.basis.iter().enumerate() {
            let tij = &self.rows[i][j];
            if !tij.is_zero() {
                d = d.sub(&cost[bi].scale(tij));
            }
        }
        d
    }

    /// Runs simplex iterations restricted to columns `< allowed`.
    /// Returns `false` if the objective is unbounded below.
    fn optimize<S: LpScalar>(&mut self, cost: &[S], allowed: usize) -> bool {
        loop {
            let mut in_basis = vec![false; self.width];
            for &b in &self.basis {
                in_basis[b] = true;
            }
            let entering =
                (0..allowed).find(|&j| !in_basis[j] && self.reduced_cost(cost, j).is_below_zero());
            let Some(col) = entering else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }

    fn solution(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rhs(i).clone();
            }
        }
        x
    }
}

/// Phase 1. On success the tableau has an artificial-free basis over the
/// original columns; redundant rows are dropped.
fn phase_one(lp: &LinearProgram) -> Option<Tableau> {
    let n = lp.num_vars();
    let p = lp.a.len();
    let width = n + p;
    let mut rows = Vec::with_capacity(p);
    for (i, (arow, bi)) in lp.a.iter().zip(&lp.b).enumerate() {
        assert_eq!(arow.len(), n, "ragged constraint matrix");
        let flip = bi.is_negative();
        let mut row: Vec<Rational> = Vec::with_capacity(width + 1);
        for v in arow {
            row.push(if flip { -v } else { v.clone() });
        }
        for k in 0..p {
            row.push(if k == i { Rational::one() } else { Rational::zero() });
        }
        row.push(if flip { -bi } else { bi.clone() });
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis: (n..n + p).collect(), width };
    let mut cost = vec![Rational::zero(); width];
    for c in cost.iter_mut().skip(n) {
        *c = Rational::one();
    }
    tab.optimize(&cost, width);
    let infeasibility: Rational = (0..p).filter(|&i| tab.basis[i] >= n).map(|i| tab.rhs(i).clone()).sum();
    if infeasibility.is_positive() {
        return None;
    }
    // drive remaining (zero-level) artificials out of the basis
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => {
                    tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    Some(tab)
}

/// Any feasible point of the program, or `None` if it is infeasible.
pub fn find_feasible(lp: &LinearProgram) -> Option<Vec<Rational>> {
    phase_one(lp).map(|t| t.solution(lp.num_vars()))
}

/// Minimizes `cost · x` over the program; the returned point is basic.
pub fn minimize<S: LpScalar>(lp: &LinearProgram, cost: &[S]) -> LpOutcome<S> {
    let n = lp.num_vars();
    assert_eq!(cost.len(), n, "cost length must match variable count");
    let Some(mut tab) = phase_one(lp) else {
        return LpOutcome::Infeasible;
    };
    let mut full_cost = cost.to_vec();
    full_cost.resize(tab.width, S::additive_zero());
    if !tab.optimize(&full_cost, n) {
        return LpOutcome::Unbounded;
    }
    let x = tab.solution(n);
    let value = x
        .iter()
        .zip(cost)
        .filter(|(xi, _)| !xi.is_zero())
        .fold(S::additive_zero(), |acc, (xi, ci)| acc.add(&ci.scale(xi)));
    LpOutcome::Optimal { x, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn simple() -> LinearProgram {
        // x0 + x1 + x2 = 1, x0 - x1 = 0
        let mut lp = LinearProgram::default();
        lp.add_row(vec![int(1), int(1), int(1)], int(1));
        lp.add_row(vec![int(1), int(-1), int(0)], int(0));
        lp
    }

    #[test]
    fn minimizes_exactly() {
        let out = minimize(&simple(), &[int(1), int(1), int(3)]);
        match out {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, int(1));
                assert_eq!(x[2], int(0));
                assert_eq!(x[0], rat(1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn real_objective_over_exact_region() {
        match minimize(&simple(), &[0.5f64, 0.5, -0.25]) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(x, vec![int(0), int(0), int(1)]);
                assert!((value + 0.25).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let mut lp = LinearProgram::default();
        lp.add_row(vec![int(1), int(1)], int(-1));
        assert!(find_feasible(&lp).is_none());
        let mut lp = LinearProgram::default();
        lp.add_row(vec![int(1), int(-1)], int(0));
        assert_eq!(minimize(&lp, &[int(-1), int(0)]), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let mut lp = simple();
        lp.add_row(vec![int(2), int(2), int(2)], int(2));
        let x = find_feasible(&lp).unwrap();
        assert_eq!(&x[0] + &x[1] + &x[2], int(1));
        assert_eq!(x[0], x[1]);
    }
}
