//! Geometry of the ε-LDP cone: the staircase matrix, the maximal-LDP weight
//! polytope, extremal channels, extreme-direction tests, maximality
//! certificates and canonical weight vectors.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::channels::{Channel, DominanceWitness, PrivacyLevel};
use crate::groups::{Alphabet, Subset};
use crate::linalg;
use crate::lp::{self, LinearProgram};
use crate::rational::Rational;
use crate::vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("weight vector is not in the maximal-LDP polytope")]
    PolytopeViolation,
    #[error("the zero vector has no direction")]
    ZeroVector,
    #[error("vector is not in the LDP cone")]
    NotInCone,
    #[error("channel is not ε-LDP at the given level")]
    NotLDP,
    #[error("channel is not maximal: row {row} is not an extreme direction")]
    NotMaximal { row: usize },
    #[error("alphabet size {m} exceeds the enumeration cap {cap}")]
    DimensionCap { m: usize, cap: usize },
    #[error("alphabet needs at least two letters, got {0}")]
    AlphabetTooSmall(usize),
    #[error("conic decomposition failed for row {0}")]
    DecompositionInfeasible(usize),
    #[error("vector has {found} entries, expected {expected}")]
    Length { expected: usize, found: usize },
}

fn check_m(m: usize) -> Result<(), GeometryError> {
    if m < 2 {
        return Err(GeometryError::AlphabetTooSmall(m));
    }
    Ok(())
}

/// Rows indexed by nonempty proper subsets `y` (bitmask order), entries `t`
/// on `y` and `1` off `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaircaseMatrix {
    m: usize,
    t: PrivacyLevel,
    rows: Vec<Vec<Rational>>,
}

impl StaircaseMatrix {
    pub fn new(m: usize, t: &PrivacyLevel) -> Result<Self, GeometryError> {
        check_m(m)?;
        let rows = Subset::proper_nonempty(m).map(|y| staircase_row(y, m, t.t())).collect();
        Ok(Self { m, t: t.clone(), rows })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn level(&self) -> &PrivacyLevel {
        &self.t
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, y: Subset) -> &[Rational] {
        &self.rows[y.index()]
    }

    /// The equality system `Sᵀ c = 1` as `(A, b)`.
    pub fn polytope_system(&self) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let a = (0..self.m).map(|x| self.rows.iter().map(|r| r[x].clone()).collect()).collect();
        (a, vec![Rational::one(); self.m])
    }
}

/// The staircase row of subset `y`.
pub fn staircase_row(y: Subset, m: usize, t: &Rational) -> Vec<Rational> {
    (0..m).map(|x| if y.contains(x) { t.clone() } else { Rational::one() }).collect()
}

/// `Σ_{x∈y} t + Σ_{x∉y} 1 = k t + m - k`.
pub fn staircase_row_sum(k: usize, m: usize, t: &Rational) -> Rational {
    t * Rational::from_integer((k as i64).into()) + Rational::from_integer(((m - k) as i64).into())
}

/// A point of the maximal-LDP polytope `{c ≥ 0 : cᵀ S = 1ᵀ}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeightVector {
    m: usize,
    t: PrivacyLevel,
    c: Vec<Rational>,
}

/// `c ≥ 0` and `cᵀ S = 1ᵀ`, exactly.
pub fn in_weight_polytope(c: &[Rational], m: usize, t: &PrivacyLevel) -> bool {
    if !(2..64).contains(&m) || c.len() != Subset::count(m) || c.iter().any(Signed::is_negative) {
        return false;
    }
    (0..m).all(|x| {
        let col: Rational = Subset::proper_nonempty(m)
            .zip(c)
            .filter(|(_, cy)| !cy.is_zero())
            .map(|(y, cy)| if y.contains(x) { cy * t.t() } else { cy.clone() })
            .sum();
        col.is_one()
    })
}

impl WeightVector {
    pub fn new(c: Vec<Rational>, m: usize, t: &PrivacyLevel) -> Result<Self, GeometryError> {
        check_m(m)?;
        if c.len() != Subset::count(m) {
            return Err(GeometryError::Length { expected: Subset::count(m), found: c.len() });
        }
        if !in_weight_polytope(&c, m, t) {
            return Err(GeometryError::PolytopeViolation);
        }
        Ok(Self { m, t: t.clone(), c })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn level(&self) -> &PrivacyLevel {
        &self.t
    }

    pub fn weights(&self) -> &[Rational] {
        &self.c
    }

    pub fn weight(&self, y: Subset) -> &Rational {
        &self.c[y.index()]
    }

    /// Subsets carrying positive weight.
    pub fn support(&self) -> Vec<Subset> {
        self.c.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| Subset::from_index(i)).collect()
    }
}

/// `⊕_y c_y S_{y,·}` over all of `B(X)`, zero rows included; output letters
/// are subset labels.
pub fn extremal_channel(c: &WeightVector) -> Channel {
    let m = c.m;
    let rows = Subset::proper_nonempty(m)
        .zip(&c.c)
        .map(|(y, cy)| staircase_row(y, m, c.t.t()).into_iter().map(|v| v * cy).collect())
        .collect();
    let output = Alphabet::new(Subset::proper_nonempty(m).map(Subset::label).collect()).expect("subset labels");
    Channel::new(Alphabet::indexed(m), output, rows).expect("polytope membership makes columns stochastic")
}

/// If `v` is a positive multiple of the staircase row of a nonempty proper
/// subset `Z`, returns `Z`.
///
/// At `t = 1` the cone is the single ray through the all-ones vector; that
/// ray is reported as the subset `{0}`, whose staircase row it equals.
pub fn is_extreme_direction(v: &[Rational], t: &PrivacyLevel) -> Result<Option<Subset>, GeometryError> {
    let m = v.len();
    check_m(m)?;
    if v.iter().all(Zero::is_zero) {
        return Err(GeometryError::ZeroVector);
    }
    if v.iter().any(|x| !x.is_positive()) {
        return Ok(None);
    }
    let lo = v.iter().min().expect("nonempty");
    let hi = v.iter().max().expect("nonempty");
    if t.is_degenerate() {
        return Ok((lo == hi).then_some(Subset(1)));
    }
    if lo == hi || *hi != lo * t.t() {
        return Ok(None);
    }
    if v.iter().any(|x| x != lo && x != hi) {
        return Ok(None);
    }
    let z: Vec<usize> = (0..m).filter(|&x| v[x] == *hi).collect();
    Ok(Some(Subset::from_letters(&z)))
}

/// `T ⊕ I`: rows `t e_z - e_{z'}` for ordered pairs `z ≠ z'` (lexicographic),
/// followed by the identity rows for nonnegativity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeConstraintMatrix {
    pub rows: Vec<Vec<Rational>>,
    pub pair_rows: usize,
}

impl ConeConstraintMatrix {
    pub fn new(m: usize, t: &PrivacyLevel) -> Self {
        let mut rows = Vec::with_capacity(m * m);
        for z in 0..m {
            for zp in 0..m {
                if z == zp {
                    continue;
                }
                let mut r = vec![Rational::zero(); m];
                r[z] = t.t().clone();
                r[zp] = -Rational::one();
                rows.push(r);
            }
        }
        let pair_rows = rows.len();
        for z in 0..m {
            let mut r = vec![Rational::zero(); m];
            r[z] = Rational::one();
            rows.push(r);
        }
        Self { rows, pair_rows }
    }

    fn dot(row: &[Rational], v: &[Rational]) -> Rational {
        row.iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.rows.iter().all(|r| !Self::dot(r, v).is_negative())
    }

    /// Rows whose constraint is tight at `v`.
    pub fn active_rows(&self, v: &[Rational]) -> Vec<Vec<Rational>> {
        self.rows.iter().filter(|r| Self::dot(r, v).is_zero()).cloned().collect()
    }
}

/// Extreme-direction test through the active constraints: `v` spans an
/// extreme ray iff the kernel of its active-constraint submatrix is
/// one-dimensional.
pub fn kernel_rank_check(v: &[Rational], t: &PrivacyLevel) -> Result<bool, GeometryError> {
    let m = v.len();
    if v.iter().all(Zero::is_zero) {
        return Err(GeometryError::ZeroVector);
    }
    let cone = ConeConstraintMatrix::new(m, t);
    if !cone.contains(v) {
        return Err(GeometryError::NotInCone);
    }
    let active = cone.active_rows(v);
    let kernel_dim = if active.is_empty() { m } else { linalg::nullity(&active, m) };
    Ok(kernel_dim == 1)
}

/// Outcome of a maximality check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalityVerdict {
    pub maximal: bool,
    /// First nonzero row that is not an extreme direction.
    pub failing_row: Option<usize>,
}

pub fn maximality_verdict(q: &Channel, t: &PrivacyLevel) -> Result<MaximalityVerdict, GeometryError> {
    check_m(q.input_size())?;
    if !q.is_ldp(t) {
        return Err(GeometryError::NotLDP);
    }
    for y in 0..q.output_size() {
        if q.is_zero_row(y) {
            continue;
        }
        if is_extreme_direction(q.row(y), t)?.is_none() {
            return Ok(MaximalityVerdict { maximal: false, failing_row: Some(y) });
        }
    }
    Ok(MaximalityVerdict { maximal: true, failing_row: None })
}

/// Every nonzero row is an extreme direction of the LDP cone.
pub fn is_maximal(q: &Channel, t: &PrivacyLevel) -> Result<bool, GeometryError> {
    maximality_verdict(q, t).map(|v| v.maximal)
}

/// Gathers the rows of a maximal channel by extreme ray: `c_y` is the total
/// scale of the rows proportional to the staircase row of `y`.
pub fn canonical_weight(q: &Channel, t: &PrivacyLevel) -> Result<WeightVector, GeometryError> {
    let m = q.input_size();
    check_m(m)?;
    if !q.is_ldp(t) {
        return Err(GeometryError::NotLDP);
    }
    let mut c = vec![Rational::zero(); Subset::count(m)];
    for y in 0..q.output_size() {
        if q.is_zero_row(y) {
            continue;
        }
        let z = is_extreme_direction(q.row(y), t)?.ok_or(GeometryError::NotMaximal { row: y })?;
        // entry at a letter outside z (or any letter when t = 1) is the scale
        let x = (0..m).find(|&x| !z.contains(x)).unwrap_or(0);
        c[z.index()] += &q.row(y)[x];
    }
    WeightVector::new(c, m, t)
}

/// Nonnegative `c` over `B(X)` with `v = Σ_y c_y S_{y,·}`.
pub fn conic_decomposition(v: &[Rational], t: &PrivacyLevel) -> Option<Vec<Rational>> {
    let m = v.len();
    let stair = StaircaseMatrix::new(m, t).ok()?;
    let (a, _) = stair.polytope_system();
    let mut prog = LinearProgram::default();
    for (row, vx) in a.into_iter().zip(v) {
        prog.add_row(row, vx.clone());
    }
    lp::find_feasible(&prog)
}

/// A maximal channel `Q̃` dominating `q`, with the witness `W` such that
/// `q = W Q̃`. Each nonzero row is decomposed into staircase rows, split
/// accordingly, and the pieces are gathered by subset.
pub fn dominating_maximal(q: &Channel, t: &PrivacyLevel) -> Result<(Channel, DominanceWitness), GeometryError> {
    let m = q.input_size();
    check_m(m)?;
    if !q.is_ldp(t) {
        return Err(GeometryError::NotLDP);
    }
    let nsub = Subset::count(m);
    let mut pieces: Vec<Vec<Rational>> = Vec::with_capacity(q.output_size());
    for y in 0..q.output_size() {
        if q.is_zero_row(y) {
            pieces.push(vec![Rational::zero(); nsub]);
        } else {
            pieces.push(conic_decomposition(q.row(y), t).ok_or(GeometryError::DecompositionInfeasible(y))?);
        }
    }
    let mut total = vec![Rational::zero(); nsub];
    for p in &pieces {
        for (acc, v) in total.iter_mut().zip(p) {
            *acc += v;
        }
    }
    let c = WeightVector::new(total.clone(), m, t)?;
    let maximal = extremal_channel(&c);
    let first_live = (0..q.output_size()).find(|&y| !q.is_zero_row(y)).expect("stochastic channel has a nonzero row");
    let mut w = vec![vec![Rational::zero(); nsub]; q.output_size()];
    for s in 0..nsub {
        if total[s].is_zero() {
            w[first_live][s] = Rational::one();
            continue;
        }
        for (y, p) in pieces.iter().enumerate() {
            if !p[s].is_zero() {
                w[y][s] = &p[s] / &total[s];
            }
        }
    }
    let post = Channel::new(maximal.output().clone(), q.output().clone(), w).map_err(|_| GeometryError::DecompositionInfeasible(0))?;
    let witness = DominanceWitness { post_processor: post };
    debug_assert!(witness.verify(&maximal, q), "{}", format!("witness fails for {q:?}"));
    Ok((maximal, witness))
}

/// All vertices of the maximal-LDP polytope, by support enumeration.
pub fn enumerate_polytope_vertices(m: usize, t: &PrivacyLevel, cap: usize) -> Result<Vec<WeightVector>, GeometryError> {
    check_m(m)?;
    if m > cap {
        return Err(GeometryError::DimensionCap { m, cap });
    }
    let stair = StaircaseMatrix::new(m, t)?;
    let (a, b) = stair.polytope_system();
    let n = Subset::count(m);
    Ok(vertex::enumerate(&a, &b)
        .into_iter()
        .map(|v| WeightVector { m, t: t.clone(), c: v.dense(n) })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{compose, dominates, equivalent};
    use crate::rational::{int, rat};

    fn level(n: i64, d: i64) -> PrivacyLevel {
        PrivacyLevel::new(rat(n, d)).unwrap()
    }

    fn rr(t: i64) -> Channel {
        let d = t + 1;
        Channel::from_rows(vec![vec![rat(t, d), rat(1, d)], vec![rat(1, d), rat(t, d)]]).unwrap()
    }

    fn singletons_m3() -> WeightVector {
        let mut c = vec![int(0); 6];
        for s in [1u64, 2, 4] {
            c[Subset(s).index()] = rat(1, 4);
        }
        WeightVector::new(c, 3, &level(2, 1)).unwrap()
    }

    #[test]
    fn staircase_examples() {
        let s = StaircaseMatrix::new(2, &level(3, 1)).unwrap();
        assert_eq!(s.rows(), &[vec![int(3), int(1)], vec![int(1), int(3)]]);
        let t = level(5, 2);
        let s3 = StaircaseMatrix::new(3, &t).unwrap();
        assert_eq!(s3.rows().len(), 6);
        assert_eq!(s3.row(Subset::from_letters(&[0, 1])), &[rat(5, 2), rat(5, 2), int(1)]);
        for y in Subset::proper_nonempty(3) {
            let sum: Rational = s3.row(y).iter().sum();
            assert_eq!(sum, staircase_row_sum(y.len(), 3, t.t()));
        }
        assert!(StaircaseMatrix::new(1, &t).is_err());
    }

    #[test]
    fn polytope_membership() {
        let t = level(3, 1);
        assert!(in_weight_polytope(&[rat(1, 4), rat(1, 4)], 2, &t));
        assert!(!in_weight_polytope(&[int(0), int(0)], 2, &t));
        assert!(in_weight_polytope(singletons_m3().weights(), 3, &level(2, 1)));
    }

    #[test]
    fn extremal_channel_examples() {
        let t = level(3, 1);
        let c = WeightVector::new(vec![rat(1, 4), rat(1, 4)], 2, &t).unwrap();
        assert_eq!(extremal_channel(&c).rows(), rr(3).rows());
        let q = extremal_channel(&singletons_m3());
        assert_eq!(q.row(0), &[rat(1, 2), rat(1, 4), rat(1, 4)]);
        assert_eq!(q.row(1), &[rat(1, 4), rat(1, 2), rat(1, 4)]);
        assert_eq!(q.row(3), &[rat(1, 4), rat(1, 4), rat(1, 2)]);
        assert!(q.is_zero_row(2) && q.is_zero_row(4) && q.is_zero_row(5));
        assert!(q.is_ldp(&level(2, 1)));
        assert!(WeightVector::new(vec![rat(1, 3), rat(1, 4)], 2, &t).is_err());
    }

    #[test]
    fn extreme_direction_examples() {
        let t = level(2, 1);
        assert_eq!(is_extreme_direction(&[int(2), int(1), int(1)], &t), Ok(Some(Subset(1))));
        assert_eq!(is_extreme_direction(&[int(1), int(1), int(1)], &t), Ok(None));
        assert_eq!(is_extreme_direction(&[int(2), rat(3, 2), int(1)], &t), Ok(None));
        assert_eq!(is_extreme_direction(&[int(0), int(0), int(0)], &t), Err(GeometryError::ZeroVector));
        assert_eq!(is_extreme_direction(&[int(3), int(1), int(1)], &t), Ok(None));
    }

    #[test]
    fn kernel_examples() {
        let t = level(2, 1);
        assert_eq!(kernel_rank_check(&[int(2), int(1), int(1)], &t), Ok(true));
        assert_eq!(kernel_rank_check(&[int(1), int(1), int(1)], &t), Ok(false));
        assert_eq!(kernel_rank_check(&[int(2), rat(3, 2), int(1)], &t), Ok(false));
        assert_eq!(kernel_rank_check(&[int(3), int(1), int(1)], &t), Err(GeometryError::NotInCone));
    }

    #[test]
    fn maximality_examples() {
        let t = level(3, 1);
        assert_eq!(is_maximal(&rr(3), &t), Ok(true));
        assert_eq!(is_maximal(&Channel::uniform(2, 2), &t), Ok(false));
        assert_eq!(is_maximal(&Channel::identity(2), &t), Err(GeometryError::NotLDP));
        assert_eq!(is_maximal(&extremal_channel(&singletons_m3()), &level(2, 1)), Ok(true));
    }

    #[test]
    fn canonical_weight_examples() {
        let t = level(3, 1);
        assert_eq!(canonical_weight(&rr(3), &t).unwrap().weights(), &[rat(1, 4), rat(1, 4)]);
        let c = singletons_m3();
        let q = extremal_channel(&c);
        let shuffled = q.permute_rows(&crate::groups::Permutation::new(vec![5, 3, 1, 0, 2, 4]).unwrap());
        assert_eq!(canonical_weight(&shuffled, &level(2, 1)).unwrap(), c);
        let split = q.split_row(0, &rat(1, 2));
        assert_eq!(canonical_weight(&split, &level(2, 1)).unwrap(), c);
        assert!(matches!(canonical_weight(&Channel::uniform(2, 2), &t), Err(GeometryError::NotMaximal { .. })));
    }

    #[test]
    fn dominating_maximal_examples() {
        let t = level(3, 1);
        let (qt, w) = dominating_maximal(&Channel::uniform(2, 2), &t).unwrap();
        assert!(equivalent(&qt, &rr(3)));
        assert!(w.verify(&qt, &Channel::uniform(2, 2)));
        let (qt, w) = dominating_maximal(&rr(3), &t).unwrap();
        assert!(equivalent(&qt, &rr(3)));
        assert!(w.verify(&qt, &rr(3)));
        // a non-maximal 3-input channel
        let q = Channel::from_rows(vec![
            vec![rat(2, 5), rat(3, 10), rat(1, 5)],
            vec![rat(3, 5), rat(7, 10), rat(4, 5)],
        ])
        .unwrap();
        let t2 = level(2, 1);
        let (qt, w) = dominating_maximal(&q, &t2).unwrap();
        assert_eq!(is_maximal(&qt, &t2), Ok(true));
        assert!(w.verify(&qt, &q));
        assert!(dominates(&qt, &q).unwrap().is_some());
        assert_eq!(compose(&w.post_processor, &qt).unwrap().rows(), q.rows());
    }

    #[test]
    fn vertex_enumeration_small() {
        for t in [level(3, 2), level(2, 1), level(5, 1)] {
            let v = enumerate_polytope_vertices(2, &t, 5).unwrap();
            assert_eq!(v.len(), 1);
            let d = t.t() + int(1);
            assert_eq!(v[0].weights(), &[d.recip(), d.recip()]);
        }
        let t = level(2, 1);
        let v = enumerate_polytope_vertices(3, &t, 5).unwrap();
        assert!(v.contains(&singletons_m3()));
        let mut pairs = vec![int(0); 6];
        for s in [3u64, 5, 6] {
            pairs[Subset(s).index()] = rat(1, 5);
        }
        assert!(v.iter().any(|w| w.weights() == pairs.as_slice()));
        for w in &v {
            assert!(in_weight_polytope(w.weights(), 3, &t));
            assert_eq!(is_maximal(&extremal_channel(w), &t), Ok(true));
        }
        assert_eq!(enumerate_polytope_vertices(6, &t, 5), Err(GeometryError::DimensionCap { m: 6, cap: 5 }));
    }

    #[test]
    fn degenerate_level() {
        let t = level(1, 1);
        let v = enumerate_polytope_vertices(3, &t, 5).unwrap();
        assert_eq!(v.len(), 6);
        let q = Channel::uniform(3, 2);
        assert_eq!(is_maximal(&q, &t), Ok(true));
        let c = canonical_weight(&q, &t).unwrap();
        assert_eq!(c.weight(Subset(1)), &int(1));
    }
}
