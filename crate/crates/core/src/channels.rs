//! Channels as column-stochastic rational matrices, the ε-LDP predicate,
//! Blackwell dominance with an explicit post-processing witness, direct sums
//! and group actions on channels.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::groups::{Alphabet, GroupAction, PermGroup, Permutation};
use crate::lp::{self, LinearProgram};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChannelError {
    #[error("privacy level t = e^ε must be at least 1, got {0}")]
    InvalidPrivacyLevel(Rational),
    #[error("matrix has {rows}x{cols} entries but alphabets are {outputs}x{inputs}")]
    Shape { rows: usize, cols: usize, outputs: usize, inputs: usize },
    #[error("negative entry at ({y}, {x})")]
    NegativeEntry { y: usize, x: usize },
    #[error("column {x} sums to {sum}, not 1")]
    NotStochastic { x: usize, sum: Rational },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("direct-sum weights must be nonnegative and sum to 1")]
    WeightSumViolation,
    #[error(transparent)]
    Alphabet(#[from] crate::groups::GroupError),
}

/// The privacy level, stored as `t = e^ε ≥ 1` so that all LDP constraints
/// are rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrivacyLevel(Rational);

impl PrivacyLevel {
    pub fn new(t: Rational) -> Result<Self, ChannelError> {
        if t < Rational::one() {
            return Err(ChannelError::InvalidPrivacyLevel(t));
        }
        Ok(Self(t))
    }

    pub fn t(&self) -> &Rational {
        &self.0
    }

    pub fn is_degenerate(&self) -> bool {
        self.0.is_one()
    }
}

/// A channel from input alphabet `X` to output alphabet `Y`, stored as the
/// matrix `Q[y][x]` with nonnegative entries and unit column sums.
/// Zero rows are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Channel {
    input: Alphabet,
    output: Alphabet,
    rows: Vec<Vec<Rational>>,
}

impl Channel {
    pub fn new(input: Alphabet, output: Alphabet, rows: Vec<Vec<Rational>>) -> Result<Self, ChannelError> {
        let shape_err = || ChannelError::Shape {
            rows: rows.len(),
            cols: rows.first().map_or(0, Vec::len),
            outputs: output.len(),
            inputs: input.len(),
        };
        if rows.len() != output.len() || rows.iter().any(|r| r.len() != input.len()) {
            return Err(shape_err());
        }
        for (y, row) in rows.iter().enumerate() {
            if let Some(x) = row.iter().position(Signed::is_negative) {
                return Err(ChannelError::NegativeEntry { y, x });
            }
        }
        for x in 0..input.len() {
            let sum: Rational = rows.iter().map(|r| &r[x]).sum();
            if !sum.is_one() {
                return Err(ChannelError::NotStochastic { x, sum });
            }
        }
        Ok(Self { input, output, rows })
    }

    /// Channel over indexed alphabets `{0..m}` and `{0..rows}`.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, ChannelError> {
        let m = rows.first().map_or(0, Vec::len);
        if m == 0 || rows.is_empty() {
            return Err(ChannelError::Shape { rows: rows.len(), cols: m, outputs: rows.len(), inputs: m });
        }
        let input = Alphabet::indexed(m);
        let output = Alphabet::indexed(rows.len());
        Self::new(input, output, rows)
    }

    /// The identity channel on `m` letters.
    pub fn identity(m: usize) -> Self {
        let rows = (0..m)
            .map(|y| (0..m).map(|x| if x == y { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        Self::from_rows(rows).expect("identity is stochastic")
    }

    /// The channel whose every column equals the uniform distribution on
    /// `outputs` letters.
    pub fn uniform(m: usize, outputs: usize) -> Self {
        let v = Rational::new(1.into(), (outputs as i64).into());
        Self::from_rows(vec![vec![v; m]; outputs]).expect("uniform is stochastic")
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn input_size(&self) -> usize {
        self.input.len()
    }

    pub fn output_size(&self) -> usize {
        self.output.len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn row(&self, y: usize) -> &[Rational] {
        &self.rows[y]
    }

    pub fn entry(&self, y: usize, x: usize) -> &Rational {
        &self.rows[y][x]
    }

    pub fn is_zero_row(&self, y: usize) -> bool {
        self.rows[y].iter().all(Zero::is_zero)
    }

    pub fn into_rows(self) -> Vec<Vec<Rational>> {
        self.rows
    }

    /// `t · Q[·][x] - Q[·][x'] ≥ 0` for every pair of inputs.
    pub fn is_ldp(&self, t: &PrivacyLevel) -> bool {
        self.rows.iter().all(|row| {
            let (Some(lo), Some(hi)) = (row.iter().min(), row.iter().max()) else {
                return true;
            };
            *hi <= t.t() * lo
        })
    }

    /// Same matrix with rows reordered: new row `i` is old row `order[i]`.
    pub fn permute_rows(&self, order: &Permutation) -> Channel {
        let rows = order.images().iter().map(|&i| self.rows[i].clone()).collect();
        let letters = order.images().iter().map(|&i| self.output.letters()[i].clone()).collect();
        Channel { input: self.input.clone(), output: Alphabet::new(letters).expect("permuted labels stay distinct"), rows }
    }

    /// Appends an all-zero output row.
    pub fn zero_padded(&self) -> Channel {
        let mut rows = self.rows.clone();
        rows.push(vec![Rational::zero(); self.input_size()]);
        let mut letters = self.output.letters().to_vec();
        letters.push(fresh_label(&letters, "pad"));
        Channel { input: self.input.clone(), output: Alphabet::new(letters).expect("fresh label"), rows }
    }

    /// Replaces row `y` by the two rows `λ·row` and `(1-λ)·row`.
    pub fn split_row(&self, y: usize, lambda: &Rational) -> Channel {
        assert!(!lambda.is_negative() && *lambda <= Rational::one(), "split fraction must lie in [0, 1]");
        let mut rows = self.rows.clone();
        let rest = Rational::one() - lambda;
        let second: Vec<Rational> = rows[y].iter().map(|v| v * &rest).collect();
        for v in rows[y].iter_mut() {
            *v *= lambda;
        }
        rows.insert(y + 1, second);
        let mut letters = self.output.letters().to_vec();
        let base = format!("{}'", letters[y]);
        let label = fresh_label(&letters, &base);
        letters.insert(y + 1, label);
        Channel { input: self.input.clone(), output: Alphabet::new(letters).expect("fresh label"), rows }
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.iter().map(crate::rational::to_f64).collect()).collect()
    }
}

fn fresh_label(existing: &[String], base: &str) -> String {
    let mut label = String::from(base);
    let mut n = 1;
    while existing.contains(&label) {
        label = format!("{base}#{n}");
        n += 1;
    }
    label
}

/// `W · Q`.
pub fn compose(w: &Channel, q: &Channel) -> Result<Channel, ChannelError> {
    if w.input_size() != q.output_size() {
        return Err(ChannelError::AlphabetMismatch(format!(
            "post-processor reads {} letters, channel emits {}",
            w.input_size(),
            q.output_size()
        )));
    }
    let rows = crate::linalg::matmul(&w.rows, &q.rows);
    Ok(Channel { input: q.input.clone(), output: w.output.clone(), rows })
}

/// A post-processing `W` with `Q2 = W · Q1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceWitness {
    pub post_processor: Channel,
}

impl DominanceWitness {
    /// Exact check of `dominated = W · dominating`.
    pub fn verify(&self, dominating: &Channel, dominated: &Channel) -> bool {
        compose(&self.post_processor, dominating).is_ok_and(|c| c.rows == dominated.rows)
    }
}

/// Decides whether `q1` dominates `q2` in the Blackwell order, returning a
/// witness `W` with `q2 = W · q1` when it does.
pub fn dominates(q1: &Channel, q2: &Channel) -> Result<Option<DominanceWitness>, ChannelError> {
    let m = q1.input_size();
    if m != q2.input_size() {
        return Err(ChannelError::AlphabetMismatch(format!("inputs of size {m} and {}", q2.input_size())));
    }
    // zero rows of q1 get an arbitrary column; zero rows of q2 force zero rows of W
    let ys: Vec<usize> = (0..q1.output_size()).filter(|&y| !q1.is_zero_row(y)).collect();
    let zs: Vec<usize> = (0..q2.output_size()).filter(|&z| !q2.is_zero_row(z)).collect();
    let var = |zi: usize, yi: usize| zi * ys.len() + yi;
    let nvars = zs.len() * ys.len();
    let mut prog = LinearProgram::default();
    for yi in 0..ys.len() {
        let mut row = vec![Rational::zero(); nvars];
        for zi in 0..zs.len() {
            row[var(zi, yi)] = Rational::one();
        }
        prog.add_row(row, Rational::one());
    }
    for (zi, &z) in zs.iter().enumerate() {
        for x in 0..m {
            let mut row = vec![Rational::zero(); nvars];
            for (yi, &y) in ys.iter().enumerate() {
                row[var(zi, yi)] = q1.rows[y][x].clone();
            }
            prog.add_row(row, q2.rows[z][x].clone());
        }
    }
    let Some(sol) = lp::find_feasible(&prog) else {
        return Ok(None);
    };
    let mut w = vec![vec![Rational::zero(); q1.output_size()]; q2.output_size()];
    for (zi, &z) in zs.iter().enumerate() {
        for (yi, &y) in ys.iter().enumerate() {
            w[z][y] = sol[var(zi, yi)].clone();
        }
    }
    for y in 0..q1.output_size() {
        if q1.is_zero_row(y) {
            w[zs[0]][y] = Rational::one();
        }
    }
    let post_processor = Channel::new(q1.output.clone(), q2.output.clone(), w).expect("LP solution is stochastic");
    Ok(Some(DominanceWitness { post_processor }))
}

/// Blackwell equivalence: each channel dominates the other.
pub fn equivalent(q1: &Channel, q2: &Channel) -> bool {
    matches!(dominates(q1, q2), Ok(Some(_))) && matches!(dominates(q2, q1), Ok(Some(_)))
}

/// `⊕_j p_j Q_j`; output letters are labeled `j:letter`.
pub fn direct_sum(weights: &[Rational], channels: &[Channel]) -> Result<Channel, ChannelError> {
    if weights.len() != channels.len()
        || weights.iter().any(Signed::is_negative)
        || !weights.iter().sum::<Rational>().is_one()
    {
        return Err(ChannelError::WeightSumViolation);
    }
    let first = channels.first().ok_or(ChannelError::WeightSumViolation)?;
    let mut rows = Vec::new();
    let mut letters = Vec::new();
    for (j, (p, q)) in weights.iter().zip(channels).enumerate() {
        if q.input != first.input {
            return Err(ChannelError::AlphabetMismatch(format!("block {j} has a different input alphabet")));
        }
        for (y, row) in q.rows.iter().enumerate() {
            rows.push(row.iter().map(|v| v * p).collect());
            letters.push(format!("{j}:{}", q.output.letters()[y]));
        }
    }
    Ok(Channel { input: first.input.clone(), output: Alphabet::new(letters)?, rows })
}

/// `(g ∘_σ Q)[y][x] = Q[σ_{g⁻¹}(y)][g⁻¹ x]`, with `g` given by its action on
/// the inputs and `σ_g` by its action on the outputs.
pub fn apply_group_element(input_perm: &Permutation, output_perm: &Permutation, q: &Channel) -> Channel {
    assert_eq!(input_perm.degree(), q.input_size(), "input permutation degree");
    assert_eq!(output_perm.degree(), q.output_size(), "output permutation degree");
    let gi = input_perm.inverse();
    let si = output_perm.inverse();
    let rows = (0..q.output_size())
        .map(|y| (0..q.input_size()).map(|x| q.rows[si.apply(y)][gi.apply(x)].clone()).collect())
        .collect();
    Channel { input: q.input.clone(), output: q.output.clone(), rows }
}

/// `g ∘_σ Q = Q` for every group element.
pub fn is_invariant(q: &Channel, inputs: &GroupAction, outputs: &GroupAction) -> bool {
    (0..inputs.group_order()).all(|g| apply_group_element(inputs.perm(g), outputs.perm(g), q) == *q)
}

/// `⊕_{g ∈ G} |G|⁻¹ (g ∘ Q)` with the trivial action on `Y`. Output letter
/// `(y, g)` sits at index `g · |Y| + y`.
pub fn symmetrize(group: &PermGroup, q: &Channel) -> Channel {
    let id_out = Permutation::identity(q.output_size());
    let n = group.order();
    let w = Rational::new(1.into(), (n as i64).into());
    let mut rows = Vec::with_capacity(n * q.output_size());
    let mut letters = Vec::with_capacity(n * q.output_size());
    for (gi, g) in group.elements().iter().enumerate() {
        let moved = apply_group_element(g, &id_out, q);
        for (y, row) in moved.rows.into_iter().enumerate() {
            rows.push(row.into_iter().map(|v| v * &w).collect());
            letters.push(format!("{}@{gi}", q.output.letters()[y]));
        }
    }
    Channel { input: q.input.clone(), output: Alphabet::new(letters).expect("distinct block labels"), rows }
}

/// Output action `(y, g) ↦ (y, h g)` on a symmetrized channel.
pub fn symmetrized_output_action(group: &PermGroup, outputs: usize) -> GroupAction {
    let gens: Vec<Permutation> = group
        .generators()
        .iter()
        .map(|h| {
            let hi = group.index_of(h).expect("generator is an element");
            let mut img = vec![0; group.order() * outputs];
            for g in 0..group.order() {
                let hg = group.product(hi, g);
                for y in 0..outputs {
                    img[g * outputs + y] = hg * outputs + y;
                }
            }
            Permutation::new(img).expect("left multiplication is a bijection")
        })
        .collect();
    group.induced_action(group.order() * outputs, &gens).expect("generator images have the right degree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn rr(t: i64) -> Channel {
        let d = t + 1;
        Channel::from_rows(vec![vec![rat(t, d), rat(1, d)], vec![rat(1, d), rat(t, d)]]).unwrap()
    }

    fn level(t: i64) -> PrivacyLevel {
        PrivacyLevel::new(int(t)).unwrap()
    }

    #[test]
    fn privacy_level_bounds() {
        assert!(PrivacyLevel::new(rat(1, 2)).is_err());
        assert!(PrivacyLevel::new(int(1)).unwrap().is_degenerate());
    }

    #[test]
    fn rejects_non_stochastic() {
        assert!(matches!(
            Channel::from_rows(vec![vec![rat(1, 2)], vec![rat(1, 3)]]),
            Err(ChannelError::NotStochastic { .. })
        ));
        assert!(matches!(
            Channel::from_rows(vec![vec![int(2)], vec![int(-1)]]),
            Err(ChannelError::NegativeEntry { .. })
        ));
    }

    #[test]
    fn ldp_examples() {
        assert!(rr(3).is_ldp(&level(3)));
        assert!(!rr(3).is_ldp(&level(2)));
        assert!(!Channel::identity(2).is_ldp(&level(1000)));
        assert!(Channel::uniform(3, 4).is_ldp(&level(1)));
    }

    #[test]
    fn compose_examples() {
        let q = Channel::from_rows(vec![
            vec![rat(1, 2), rat(1, 4)],
            vec![rat(1, 4), rat(1, 4)],
            vec![rat(1, 4), rat(1, 2)],
        ])
        .unwrap();
        assert_eq!(compose(&Channel::identity(3), &q).unwrap(), q);
        // merge outputs 0 and 1
        let merge = Channel::from_rows(vec![vec![int(1), int(1), int(0)], vec![int(0), int(0), int(1)]]).unwrap();
        let merged = compose(&merge, &q).unwrap();
        assert_eq!(merged.rows(), &[vec![rat(3, 4), rat(1, 2)], vec![rat(1, 4), rat(1, 2)]]);
        let constant = Channel::from_rows(vec![vec![rat(1, 3); 3], vec![rat(2, 3); 3]]).unwrap();
        let out = compose(&constant, &q).unwrap();
        assert!(out.rows().iter().all(|r| r[0] == r[1]));
        assert!(compose(&Channel::identity(2), &q).is_err());
    }

    #[test]
    fn dominance_examples() {
        let q = rr(2);
        let w = Channel::from_rows(vec![vec![rat(1, 3), rat(1, 2)], vec![rat(2, 3), rat(1, 2)]]).unwrap();
        let q2 = compose(&w, &q).unwrap();
        let wit = dominates(&q, &q2).unwrap().expect("feasible by construction");
        assert!(wit.verify(&q, &q2));
        assert!(dominates(&Channel::uniform(2, 2), &rr(2)).unwrap().is_none());
        let refl = dominates(&q, &q).unwrap().unwrap();
        assert!(refl.verify(&q, &q));
    }

    #[test]
    fn equivalence_moves() {
        let q = Channel::from_rows(vec![
            vec![rat(1, 2), rat(1, 4), rat(1, 4)],
            vec![rat(1, 4), rat(1, 2), rat(1, 4)],
            vec![rat(1, 4), rat(1, 4), rat(1, 2)],
        ])
        .unwrap();
        let swapped = q.permute_rows(&Permutation::new(vec![2, 0, 1]).unwrap());
        assert!(equivalent(&q, &swapped));
        assert!(equivalent(&q, &q.zero_padded()));
        assert!(equivalent(&q, &q.split_row(1, &rat(1, 3))));
        assert!(!equivalent(&q, &Channel::uniform(3, 2)));
    }

    #[test]
    fn direct_sum_examples() {
        let q = rr(3);
        let u = Channel::uniform(2, 3);
        let s = direct_sum(&[int(1), int(0)], &[q.clone(), u.clone()]).unwrap();
        assert_eq!(s.output_size(), 5);
        assert!(equivalent(&s, &q));
        let half = direct_sum(&[rat(1, 2), rat(1, 2)], &[q.clone(), q.clone()]).unwrap();
        assert!(equivalent(&half, &q));
        assert_eq!(direct_sum(&[rat(1, 2), rat(1, 3)], &[q.clone(), u]), Err(ChannelError::WeightSumViolation));
    }

    #[test]
    fn group_action_on_channels() {
        let q = rr(3);
        let id = Permutation::identity(2);
        assert_eq!(apply_group_element(&id, &id, &q), q);
        let swap = Permutation::new(vec![1, 0]).unwrap();
        assert_eq!(apply_group_element(&swap, &swap, &q), q);
        assert_ne!(apply_group_element(&swap, &id, &q), q);
        let z2 = PermGroup::cyclic(2);
        assert!(is_invariant(&q, &z2.natural_action(), &z2.natural_action()));
    }

    #[test]
    fn symmetrize_trivial_and_invariant() {
        let q = rr(3);
        let s = symmetrize(&PermGroup::trivial(2), &q);
        assert!(equivalent(&s, &q));
        let g = PermGroup::cyclic(2);
        let s = symmetrize(&g, &q);
        assert!(s.is_ldp(&level(3)));
        assert!(equivalent(&s, &q));
        let out = symmetrized_output_action(&g, q.output_size());
        assert!(out.satisfies_laws(&g));
        assert!(is_invariant(&s, &g.natural_action(), &out));
    }
}
