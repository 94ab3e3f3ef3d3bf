#![allow(dead_code)]

use ldpput_core::decision::DecisionProblem;
use ldpput_core::rational::{int, rat};
use ldpput_core::{Alphabet, Channel, PermGroup, PrivacyLevel, Prior, Rational};
use num_traits::{One, Zero};
use rand::Rng;

pub fn level(n: i64, d: i64) -> PrivacyLevel {
    PrivacyLevel::new(rat(n, d)).unwrap()
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

pub fn ri(n: usize) -> Rational {
    Rational::from_integer((n as i64).into())
}

/// Random probability vector with small integer numerators.
pub fn random_dist(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    loop {
        let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=5)).collect();
        let s: i64 = raw.iter().sum();
        if s > 0 {
            return raw.into_iter().map(|v| rat(v, s)).collect();
        }
    }
}

/// Random column-stochastic matrix, `rows[y][x]`.
pub fn random_stochastic(rng: &mut impl Rng, outputs: usize, inputs: usize) -> Vec<Vec<Rational>> {
    let cols: Vec<Vec<Rational>> = (0..inputs).map(|_| random_dist(rng, outputs)).collect();
    (0..outputs).map(|y| cols.iter().map(|c| c[y].clone()).collect()).collect()
}

pub fn random_channel(rng: &mut impl Rng, outputs: usize, inputs: usize) -> Channel {
    Channel::from_rows(random_stochastic(rng, outputs, inputs)).unwrap()
}

/// Random post-processing from `from` letters to `to` letters.
pub fn random_post(rng: &mut impl Rng, q: &Channel, to: usize) -> Channel {
    Channel::new(q.output().clone(), Alphabet::indexed(to), random_stochastic(rng, to, q.output_size())).unwrap()
}

pub fn random_problem(rng: &mut impl Rng, params: usize, inputs: usize, actions: usize) -> DecisionProblem {
    let model = random_stochastic(rng, inputs, params);
    let loss = (0..params).map(|_| (0..actions).map(|_| int(rng.gen_range(0..=4))).collect()).collect();
    DecisionProblem::new(labels(params), Alphabet::indexed(inputs), labels(actions), model, loss, None).unwrap()
}

/// A random problem on `Θ = X = A = [m]` made invariant under `group`
/// (natural action on all three) by averaging over the group.
pub fn random_invariant_problem(rng: &mut impl Rng, group: &PermGroup) -> DecisionProblem {
    let m = group.degree();
    let base = random_problem(rng, m, m, m);
    let order = ri(group.order());
    let mut model = vec![vec![Rational::zero(); m]; m];
    let mut loss = vec![vec![Rational::zero(); m]; m];
    for g in group.elements() {
        for x in 0..m {
            for th in 0..m {
                model[x][th] += &base.model()[g.apply(x)][g.apply(th)] / &order;
                loss[x][th] += &base.loss()[g.apply(x)][g.apply(th)] / &order;
            }
        }
    }
    DecisionProblem::new(labels(m), Alphabet::indexed(m), labels(m), model, loss, Some(Prior::uniform(m))).unwrap()
}

/// Smoothed point-mass testing, built from scratch.
pub fn ht_model(m: usize, gamma: &Rational) -> DecisionProblem {
    let off = (Rational::one() - gamma) / ri(m);
    let model = (0..m).map(|x| (0..m).map(|th| if x == th { &off + gamma } else { off.clone() }).collect()).collect();
    let loss = (0..m).map(|th| (0..m).map(|a| if th == a { int(0) } else { int(1) }).collect()).collect();
    DecisionProblem::new(labels(m), Alphabet::indexed(m), labels(m), model, loss, Some(Prior::uniform(m))).unwrap()
}

/// Random convex combination of the given points.
pub fn random_convex(rng: &mut impl Rng, points: &[Vec<Rational>]) -> Vec<Rational> {
    let lam = random_dist(rng, points.len());
    let n = points[0].len();
    (0..n).map(|i| points.iter().zip(&lam).map(|(p, l)| &p[i] * l).sum()).collect()
}
