//! The symmetry-reduced polytope: orbit-indexed weights, the `r̃`
//! coefficients, G-invariant extremal channels, the lift back to plain weight
//! vectors, closed-form vertices for transitive actions and subset selection.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::channels::{Channel, PrivacyLevel};
use crate::geometry::{self, staircase_row, staircase_row_sum, GeometryError, WeightVector};
use crate::groups::{Alphabet, GroupAction, PermGroup, Permutation, Subset};
use crate::rational::Rational;
use crate::vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("count of subsets containing a letter differs inside input orbit {input_orbit}")]
    RepresentativeMismatch { input_orbit: usize },
    #[error("orbit weights are not in the invariant polytope")]
    PolytopeViolation,
    #[error("group does not act transitively on the input alphabet")]
    NotTransitive,
    #[error("subset size {k} must lie in 1..={max}")]
    BadSubsetSize { k: usize, max: usize },
    #[error("{orbits} input orbits exceed the enumeration cap {cap}")]
    DimensionCap { orbits: usize, cap: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// One orbit of `B(X)` under the subset action; members sorted by bitmask,
/// so `members[0]` is the representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetOrbit {
    pub members: Vec<Subset>,
    /// Common size of the member subsets.
    pub k: usize,
}

impl SubsetOrbit {
    pub fn representative(&self) -> Subset {
        self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `r = |{y ∈ O : x ∈ y}|` for `x` in an input orbit, `r̃ = t r + |O| - r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCoefficients {
    pub r: usize,
    pub r_tilde: Rational,
    pub k: usize,
    pub size: usize,
}

/// Computes the coefficients against the smallest letter of `input_orbit`
/// and verifies that every other letter of the orbit gives the same count.
pub fn orbit_coefficients(
    input_orbit: &[usize],
    subset_orbit: &SubsetOrbit,
    t: &PrivacyLevel,
    orbit_index: usize,
) -> Result<OrbitCoefficients, InvariantError> {
    let count = |x: usize| subset_orbit.members.iter().filter(|y| y.contains(x)).count();
    let r = count(input_orbit[0]);
    if input_orbit.iter().any(|&x| count(x) != r) {
        return Err(InvariantError::RepresentativeMismatch { input_orbit: orbit_index });
    }
    let size = subset_orbit.len();
    let r_tilde = t.t() * Rational::from_integer((r as i64).into()) + Rational::from_integer(((size - r) as i64).into());
    Ok(OrbitCoefficients { r, r_tilde, k: subset_orbit.k, size })
}

/// Weights indexed by the subset orbits of an [`InvariantPolytope`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrbitWeightVector {
    w: Vec<Rational>,
}

impl OrbitWeightVector {
    pub fn weights(&self) -> &[Rational] {
        &self.w
    }

    pub fn support(&self) -> Vec<usize> {
        self.w.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i).collect()
    }
}

/// `S^G = {w ≥ 0 : Σ_O w_O r̃_{𝔒,O} = 1 for every input orbit 𝔒}` for a
/// permutation group acting naturally on `X = {0..m}`.
#[derive(Clone, Debug)]
pub struct InvariantPolytope {
    m: usize,
    t: PrivacyLevel,
    group: PermGroup,
    input_orbits: Vec<Vec<usize>>,
    subset_orbits: Vec<SubsetOrbit>,
    /// `coefficients[input_orbit][subset_orbit]`
    coefficients: Vec<Vec<OrbitCoefficients>>,
}

impl InvariantPolytope {
    pub fn new(group: PermGroup, t: &PrivacyLevel) -> Result<Self, InvariantError> {
        let m = group.degree();
        if m < 2 {
            return Err(GeometryError::AlphabetTooSmall(m).into());
        }
        let input_orbits = group.natural_action().orbits();
        let subset_orbits: Vec<SubsetOrbit> = group
            .subset_action()
            .orbits()
            .into_iter()
            .map(|o| {
                let members: Vec<Subset> = o.into_iter().map(Subset::from_index).collect();
                let k = members[0].len();
                debug_assert!(members.iter().all(|y| y.len() == k));
                SubsetOrbit { members, k }
            })
            .collect();
        let coefficients = input_orbits
            .iter()
            .enumerate()
            .map(|(i, io)| subset_orbits.iter().map(|so| orbit_coefficients(io, so, t, i)).collect())
            .collect::<Result<_, _>>()?;
        Ok(Self { m, t: t.clone(), group, input_orbits, subset_orbits, coefficients })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn level(&self) -> &PrivacyLevel {
        &self.t
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn input_orbits(&self) -> &[Vec<usize>] {
        &self.input_orbits
    }

    pub fn subset_orbits(&self) -> &[SubsetOrbit] {
        &self.subset_orbits
    }

    pub fn coefficients(&self, input_orbit: usize, subset_orbit: usize) -> &OrbitCoefficients {
        &self.coefficients[input_orbit][subset_orbit]
    }

    pub fn is_transitive(&self) -> bool {
        self.input_orbits.len() == 1
    }

    /// Exact membership test for orbit weights.
    pub fn contains(&self, w: &[Rational]) -> bool {
        if w.len() != self.subset_orbits.len() || w.iter().any(Signed::is_negative) {
            return false;
        }
        self.coefficients.iter().all(|row| {
            let s: Rational = row.iter().zip(w).filter(|(_, wo)| !wo.is_zero()).map(|(c, wo)| &c.r_tilde * wo).sum();
            s.is_one()
        })
    }

    pub fn weights(&self, w: Vec<Rational>) -> Result<OrbitWeightVector, InvariantError> {
        if !self.contains(&w) {
            return Err(InvariantError::PolytopeViolation);
        }
        Ok(OrbitWeightVector { w })
    }

    fn check(&self, w: &OrbitWeightVector) -> Result<(), InvariantError> {
        if self.contains(&w.w) {
            Ok(())
        } else {
            Err(InvariantError::PolytopeViolation)
        }
    }

    /// Rows `w_O S_{y,·}` for every `y` of every orbit, orbit by orbit; the
    /// output letters are the subsets themselves.
    pub fn extremal_channel(&self, w: &OrbitWeightVector) -> Result<Channel, InvariantError> {
        self.check(w)?;
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for (orbit, wo) in self.subset_orbits.iter().zip(&w.w) {
            for &y in &orbit.members {
                rows.push(staircase_row(y, self.m, self.t.t()).into_iter().map(|v| v * wo).collect());
                labels.push(y.label());
            }
        }
        Ok(Channel::new(Alphabet::indexed(self.m), Alphabet::new(labels).expect("distinct subsets"), rows)
            .expect("polytope membership makes columns stochastic"))
    }

    /// Subset action on the rows of [`Self::extremal_channel`].
    pub fn output_action(&self) -> GroupAction {
        let order: Vec<Subset> = self.subset_orbits.iter().flat_map(|o| o.members.iter().copied()).collect();
        let mut pos = vec![0usize; Subset::count(self.m)];
        for (i, y) in order.iter().enumerate() {
            pos[y.index()] = i;
        }
        let gens: Vec<Permutation> = self
            .group
            .generators()
            .iter()
            .map(|g| Permutation::new(order.iter().map(|y| pos[y.image(g).index()]).collect()).expect("bijection"))
            .collect();
        self.group.induced_action(order.len(), &gens).expect("degrees match")
    }

    /// `c_y = w_O` for `y ∈ O`.
    pub fn lift(&self, w: &OrbitWeightVector) -> Result<WeightVector, InvariantError> {
        self.check(w)?;
        let mut c = vec![Rational::zero(); Subset::count(self.m)];
        for (orbit, wo) in self.subset_orbits.iter().zip(&w.w) {
            for y in &orbit.members {
                c[y.index()] = wo.clone();
            }
        }
        Ok(WeightVector::new(c, self.m, &self.t)?)
    }

    /// `m / (|O| (k t + m - k))`, the unique weight that alone on orbit `O`
    /// lies in the polytope when the action on `X` is transitive.
    pub fn transitive_vertex_weight(&self, orbit: usize) -> Result<Rational, InvariantError> {
        if !self.is_transitive() {
            return Err(InvariantError::NotTransitive);
        }
        let o = &self.subset_orbits[orbit];
        let m = Rational::from_integer((self.m as i64).into());
        let size = Rational::from_integer((o.len() as i64).into());
        Ok(m / (size * staircase_row_sum(o.k, self.m, self.t.t())))
    }

    /// The single-orbit channel `w_O S_{X,O}` (rows of orbit `O` only).
    pub fn orbit_channel(&self, orbit: usize, weight: &Rational) -> Result<Channel, InvariantError> {
        let mut w = vec![Rational::zero(); self.subset_orbits.len()];
        w[orbit] = weight.clone();
        let full = self.extremal_channel(&OrbitWeightVector { w: w.clone() }).map_err(|_| InvariantError::PolytopeViolation)?;
        let offset: usize = self.subset_orbits[..orbit].iter().map(SubsetOrbit::len).sum();
        let len = self.subset_orbits[orbit].len();
        let rows = full.rows()[offset..offset + len].to_vec();
        let labels = full.output().letters()[offset..offset + len].to_vec();
        Ok(Channel::new(Alphabet::indexed(self.m), Alphabet::new(labels).expect("distinct"), rows)
            .expect("single-orbit weight is feasible"))
    }

    /// All vertices of `S^G`, ordered by support size then lexicographic
    /// orbit support.
    pub fn vertices(&self, cap: usize) -> Result<Vec<OrbitWeightVector>, InvariantError> {
        if self.input_orbits.len() > cap {
            return Err(InvariantError::DimensionCap { orbits: self.input_orbits.len(), cap });
        }
        let a: Vec<Vec<Rational>> =
            self.coefficients.iter().map(|row| row.iter().map(|c| c.r_tilde.clone()).collect()).collect();
        let b = vec![Rational::one(); a.len()];
        let n = self.subset_orbits.len();
        Ok(vertex::enumerate(&a, &b).into_iter().map(|v| OrbitWeightVector { w: v.dense(n) }).collect())
    }
}

/// The subset-selection mechanism: uniform weight
/// `m / (C(m,k)(k t + m - k))` on every `k`-subset, rows in bitmask order.
pub fn ss_mechanism(m: usize, k: usize, t: &PrivacyLevel) -> Result<Channel, InvariantError> {
    if m < 2 {
        return Err(GeometryError::AlphabetTooSmall(m).into());
    }
    if k == 0 || k >= m {
        return Err(InvariantError::BadSubsetSize { k, max: m - 1 });
    }
    let subsets: Vec<Subset> = Subset::proper_nonempty(m).filter(|y| y.len() == k).collect();
    let mf = Rational::from_integer((m as i64).into());
    let w = mf / (Rational::from_integer((subsets.len() as i64).into()) * staircase_row_sum(k, m, t.t()));
    let rows = subsets.iter().map(|&y| staircase_row(y, m, t.t()).into_iter().map(|v| v * &w).collect()).collect();
    let labels = subsets.iter().map(|y| y.label()).collect();
    Ok(Channel::new(Alphabet::indexed(m), Alphabet::new(labels).expect("distinct"), rows).expect("subset selection is stochastic"))
}

/// Weight vector of the subset-selection mechanism.
pub fn ss_weights(m: usize, k: usize, t: &PrivacyLevel) -> Result<WeightVector, InvariantError> {
    let q = ss_mechanism(m, k, t)?;
    Ok(geometry::canonical_weight(&q, t)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{is_invariant, symmetrize, equivalent};
    use crate::geometry::{canonical_weight, enumerate_polytope_vertices, extremal_channel, is_maximal};
    use crate::rational::{int, rat};

    fn level(n: i64) -> PrivacyLevel {
        PrivacyLevel::new(int(n)).unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn coefficient_examples() {
        let t = level(2);
        let p = InvariantPolytope::new(PermGroup::cyclic(3), &t).unwrap();
        assert_eq!(p.subset_orbits().len(), 2);
        let single = p.coefficients(0, 0);
        assert_eq!((single.r, single.size, single.k), (1, 3, 1));
        assert_eq!(single.r_tilde, int(4)); // t + 2
        let pair = p.coefficients(0, 1);
        assert_eq!((pair.r, pair.size, pair.k), (2, 3, 2));
        assert_eq!(pair.r_tilde, int(5)); // 2t + 1
        for m in 2..=5 {
            let p = InvariantPolytope::new(PermGroup::symmetric(m, 200).unwrap(), &t).unwrap();
            assert_eq!(p.subset_orbits().len(), m - 1);
            for (i, o) in p.subset_orbits().iter().enumerate() {
                let c = p.coefficients(0, i);
                assert_eq!(c.r, binom(m - 1, o.k - 1));
                assert_eq!(c.size, binom(m, o.k));
                assert_eq!(m * c.r, c.size * c.k);
            }
        }
    }

    #[test]
    fn representative_mismatch_is_reported() {
        let o = SubsetOrbit { members: vec![Subset(1)], k: 1 };
        let err = orbit_coefficients(&[0, 1], &o, &level(2), 3).unwrap_err();
        assert_eq!(err, InvariantError::RepresentativeMismatch { input_orbit: 3 });
    }

    #[test]
    fn membership_examples() {
        let t = level(3);
        let p = InvariantPolytope::new(PermGroup::cyclic(3), &t).unwrap();
        assert!(p.contains(&[rat(1, 5), int(0)]));
        assert!(!p.contains(&[int(0), int(0)]));
        let s = InvariantPolytope::new(PermGroup::symmetric(3, 10).unwrap(), &t).unwrap();
        assert!(s.contains(&[int(0), rat(1, 7)]));
        assert!(!s.contains(&[int(0), rat(1, 9)]));
    }

    #[test]
    fn invariant_channel_and_lift() {
        let t = level(2);
        let p = InvariantPolytope::new(PermGroup::cyclic(3), &t).unwrap();
        let w = p.weights(vec![rat(1, 4), int(0)]).unwrap();
        let q = p.extremal_channel(&w).unwrap();
        assert_eq!(q.row(0), &[rat(1, 2), rat(1, 4), rat(1, 4)]);
        let lifted = p.lift(&w).unwrap();
        assert_eq!(lifted.weight(Subset(1)), &rat(1, 4));
        assert_eq!(lifted.weight(Subset(3)), &int(0));
        assert!(equivalent(&extremal_channel(&lifted), &q));
        assert_eq!(canonical_weight(&q, &t).unwrap(), lifted);
        assert_eq!(is_maximal(&q, &t), Ok(true));
        let out = p.output_action();
        assert!(out.satisfies_laws(p.group()));
        assert!(is_invariant(&q, &p.group().natural_action(), &out));
        assert!(equivalent(&symmetrize(p.group(), &q), &q));
    }

    #[test]
    fn trivial_group_matches_plain_polytope() {
        let t = level(2);
        let p = InvariantPolytope::new(PermGroup::trivial(3), &t).unwrap();
        let plain = enumerate_polytope_vertices(3, &t, 5).unwrap();
        let reduced = p.vertices(5).unwrap();
        assert_eq!(reduced.len(), plain.len());
        for (w, c) in reduced.iter().zip(&plain) {
            assert_eq!(&p.lift(w).unwrap(), c);
            assert_eq!(p.extremal_channel(w).unwrap(), extremal_channel(c));
        }
    }

    #[test]
    fn transitive_vertices_are_single_orbit_points() {
        let t = level(2);
        let p = InvariantPolytope::new(PermGroup::cyclic(3), &t).unwrap();
        assert_eq!(p.transitive_vertex_weight(0), Ok(rat(1, 4)));
        let v = p.vertices(5).unwrap();
        assert_eq!(v.len(), p.subset_orbits().len());
        for (i, w) in v.iter().enumerate() {
            assert_eq!(w.support(), vec![i]);
            assert_eq!(w.weights()[i], p.transitive_vertex_weight(i).unwrap());
        }
        let s2 = InvariantPolytope::new(PermGroup::symmetric(2, 10).unwrap(), &level(3)).unwrap();
        assert_eq!(s2.transitive_vertex_weight(0), Ok(rat(1, 4)));
        let z2 = PermGroup::generate(3, vec![Permutation::cycle(3, &[0, 1]).unwrap()], 10).unwrap();
        let np = InvariantPolytope::new(z2, &t).unwrap();
        assert_eq!(np.transitive_vertex_weight(0), Err(InvariantError::NotTransitive));
        let verts = np.vertices(5).unwrap();
        assert!(!verts.is_empty());
        for w in &verts {
            assert!(w.support().len() <= 2);
            assert!(np.contains(w.weights()));
        }
        assert!(matches!(np.vertices(1), Err(InvariantError::DimensionCap { .. })));
    }

    #[test]
    fn subset_selection() {
        let t3 = level(3);
        let rr = ss_mechanism(2, 1, &t3).unwrap();
        assert_eq!(rr.rows(), &[vec![rat(3, 4), rat(1, 4)], vec![rat(1, 4), rat(3, 4)]]);
        let q = ss_mechanism(3, 1, &level(2)).unwrap();
        assert_eq!(q.rows(), &[
            vec![rat(1, 2), rat(1, 4), rat(1, 4)],
            vec![rat(1, 4), rat(1, 2), rat(1, 4)],
            vec![rat(1, 4), rat(1, 4), rat(1, 2)],
        ]);
        assert!(matches!(ss_mechanism(3, 3, &t3), Err(InvariantError::BadSubsetSize { .. })));
        for m in 2..=5 {
            let sym = InvariantPolytope::new(PermGroup::symmetric(m, 200).unwrap(), &t3).unwrap();
            for k in 1..m {
                for t in [PrivacyLevel::new(rat(3, 2)).unwrap(), level(2), level(5)] {
                    let q = ss_mechanism(m, k, &t).unwrap();
                    assert_eq!(is_maximal(&q, &t), Ok(true));
                    assert_eq!(q.rows().len(), binom(m, k));
                }
                // the group route gives the same matrix
                let orbit = sym.subset_orbits().iter().position(|o| o.k == k).unwrap();
                let w = sym.transitive_vertex_weight(orbit).unwrap();
                assert_eq!(sym.orbit_channel(orbit, &w).unwrap(), ss_mechanism(m, k, &t3).unwrap());
            }
        }
    }
}
