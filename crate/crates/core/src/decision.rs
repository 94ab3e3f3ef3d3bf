//! Statistical decision problems on finite alphabets: risk, Bayes and minimax
//! optimal risk, equalizer certification, invariance checks, and the
//! information measures used as utilities.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::channels::{Channel, PrivacyLevel};
use crate::geometry::staircase_row;
use crate::groups::{Alphabet, GroupAction, PermGroup, Subset};
use crate::lp::{self, LinearProgram, LpOutcome};
use crate::rational::{to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecisionError {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("model column for parameter {0} is not a probability distribution")]
    ModelNotStochastic(usize),
    #[error("prior is not a probability distribution")]
    InvalidPrior,
    #[error("decision rule column {0} is not a probability distribution")]
    InvalidRule(usize),
    #[error("matrix shape does not match the declared label sets")]
    Shape,
    #[error("minimax risk has no direct-sum additive extension")]
    NoDSAExtension,
    #[error("unsupported f-divergence `{0}`")]
    UnsupportedF(String),
}

fn is_distribution(v: &[Rational]) -> bool {
    !v.is_empty() && v.iter().all(|p| !p.is_negative()) && v.iter().sum::<Rational>().is_one()
}

/// A probability vector over the parameter set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prior(Vec<Rational>);

impl Prior {
    pub fn new(p: Vec<Rational>) -> Result<Self, DecisionError> {
        if !is_distribution(&p) {
            return Err(DecisionError::InvalidPrior);
        }
        Ok(Self(p))
    }

    pub fn uniform(n: usize) -> Self {
        Self(vec![Rational::new(1.into(), (n as i64).into()); n])
    }

    pub fn probs(&self) -> &[Rational] {
        &self.0
    }

    /// `λ(gθ) = λ(θ)` for every group element.
    pub fn is_invariant(&self, params: &GroupAction) -> bool {
        (0..params.group_order()).all(|g| (0..self.0.len()).all(|th| self.0[params.apply(g, th)] == self.0[th]))
    }
}

/// `P_{A|Y}` stored as `rule[a][y]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionRule {
    rule: Vec<Vec<Rational>>,
}

impl DecisionRule {
    pub fn new(rule: Vec<Vec<Rational>>) -> Result<Self, DecisionError> {
        let outputs = rule.first().map_or(0, Vec::len);
        if rule.iter().any(|r| r.len() != outputs) {
            return Err(DecisionError::Shape);
        }
        for y in 0..outputs {
            let col: Vec<Rational> = rule.iter().map(|r| r[y].clone()).collect();
            if !is_distribution(&col) {
                return Err(DecisionError::InvalidRule(y));
            }
        }
        Ok(Self { rule })
    }

    pub fn prob(&self, a: usize, y: usize) -> &Rational {
        &self.rule[a][y]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.rule
    }
}

/// `(Θ, X, P_{X|θ}, A, l)` with an optional attached prior. `model[x][θ]`,
/// `loss[θ][a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionProblem {
    params: Vec<String>,
    inputs: Alphabet,
    actions: Vec<String>,
    model: Vec<Vec<Rational>>,
    loss: Vec<Vec<Rational>>,
    prior: Option<Prior>,
}

impl DecisionProblem {
    pub fn new(
        params: Vec<String>,
        inputs: Alphabet,
        actions: Vec<String>,
        model: Vec<Vec<Rational>>,
        loss: Vec<Vec<Rational>>,
        prior: Option<Prior>,
    ) -> Result<Self, DecisionError> {
        let (np, nx, na) = (params.len(), inputs.len(), actions.len());
        if np == 0 || na == 0 || model.len() != nx || model.iter().any(|r| r.len() != np) {
            return Err(DecisionError::Shape);
        }
        if loss.len() != np || loss.iter().any(|r| r.len() != na) {
            return Err(DecisionError::Shape);
        }
        for th in 0..np {
            let col: Vec<Rational> = model.iter().map(|r| r[th].clone()).collect();
            if !is_distribution(&col) {
                return Err(DecisionError::ModelNotStochastic(th));
            }
        }
        if let Some(p) = &prior {
            if p.0.len() != np {
                return Err(DecisionError::InvalidPrior);
            }
        }
        Ok(Self { params, inputs, actions, model, loss, prior })
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn inputs(&self) -> &Alphabet {
        &self.inputs
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn model(&self) -> &[Vec<Rational>] {
        &self.model
    }

    pub fn loss(&self) -> &[Vec<Rational>] {
        &self.loss
    }

    pub fn prior(&self) -> Option<&Prior> {
        self.prior.as_ref()
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn num_actions(&self) -> usize {
        self.actions.len()
    }

    fn check_channel(&self, q: &Channel) -> Result<(), DecisionError> {
        if q.input_size() != self.inputs.len() {
            return Err(DecisionError::AlphabetMismatch(format!(
                "channel reads {} letters, model emits {}",
                q.input_size(),
                self.inputs.len()
            )));
        }
        Ok(())
    }

    /// `Σ_x P(x|θ) v_x` for a (possibly unnormalized) channel row `v`.
    fn row_mass(&self, th: usize, v: &[Rational]) -> Rational {
        v.iter().zip(&self.model).filter(|(vx, _)| !vx.is_zero()).map(|(vx, px)| vx * &px[th]).sum()
    }

    /// Posterior-weighted expected loss of each action for one output row:
    /// `Σ_θ λ_θ (Σ_x P(x|θ) v_x) l(θ, a)`.
    pub fn row_scores(&self, prior: &Prior, v: &[Rational]) -> Vec<Rational> {
        let mut scores = vec![Rational::zero(); self.actions.len()];
        for (th, lam) in prior.0.iter().enumerate() {
            if lam.is_zero() {
                continue;
            }
            let mass = self.row_mass(th, v);
            if mass.is_zero() {
                continue;
            }
            let wt = lam * mass;
            for (s, l) in scores.iter_mut().zip(&self.loss[th]) {
                *s += &wt * l;
            }
        }
        scores
    }

    /// The declared prior, or an error naming the missing prior.
    pub fn require_prior(&self) -> Result<&Prior, DecisionError> {
        self.prior.as_ref().ok_or(DecisionError::InvalidPrior)
    }
}

/// `R(θ, Q, P_{A|Y}) = Σ_{x,y,a} P(x|θ) Q(y|x) l(θ,a) P(a|y)`.
pub fn risk(problem: &DecisionProblem, theta: usize, q: &Channel, rule: &DecisionRule) -> Result<Rational, DecisionError> {
    problem.check_channel(q)?;
    if rule.rule.len() != problem.num_actions() || rule.rule.first().map_or(0, Vec::len) != q.output_size() {
        return Err(DecisionError::AlphabetMismatch("rule shape does not match actions x outputs".into()));
    }
    let mut total = Rational::zero();
    for y in 0..q.output_size() {
        let mass = problem.row_mass(theta, q.row(y));
        if mass.is_zero() {
            continue;
        }
        let expected_loss: Rational = (0..problem.num_actions())
            .filter(|&a| !rule.rule[a][y].is_zero())
            .map(|a| &problem.loss[theta][a] * &rule.rule[a][y])
            .sum();
        total += mass * expected_loss;
    }
    Ok(total)
}

/// `Σ_θ λ_θ R(θ, Q, rule)`.
pub fn bayes_risk_of_rule(problem: &DecisionProblem, prior: &Prior, q: &Channel, rule: &DecisionRule) -> Result<Rational, DecisionError> {
    let mut total = Rational::zero();
    for (th, lam) in prior.0.iter().enumerate() {
        if !lam.is_zero() {
            total += lam * risk(problem, th, q, rule)?;
        }
    }
    Ok(total)
}

/// `R*_B(Q; λ) = Σ_y min_a score(y, a)` with the deterministic rule that
/// picks the lowest-index minimizing action for every output.
pub fn bayes_optimal_risk(problem: &DecisionProblem, prior: &Prior, q: &Channel) -> Result<(Rational, DecisionRule), DecisionError> {
    problem.check_channel(q)?;
    if prior.0.len() != problem.num_params() {
        return Err(DecisionError::InvalidPrior);
    }
    let na = problem.num_actions();
    let mut rule = vec![vec![Rational::zero(); q.output_size()]; na];
    let mut total = Rational::zero();
    for y in 0..q.output_size() {
        let scores = problem.row_scores(prior, q.row(y));
        let (best, value) = scores
            .iter()
            .enumerate()
            .fold((0, &scores[0]), |(bi, bv), (i, v)| if v < bv { (i, v) } else { (bi, bv) });
        total += value;
        rule[best][y] = Rational::one();
    }
    Ok((total, DecisionRule { rule }))
}

/// Bayes-optimal rule that splits each output's mass uniformly over all
/// minimizing actions.
pub fn bayes_tie_splitting_rule(problem: &DecisionProblem, prior: &Prior, q: &Channel) -> Result<DecisionRule, DecisionError> {
    problem.check_channel(q)?;
    let na = problem.num_actions();
    let mut rule = vec![vec![Rational::zero(); q.output_size()]; na];
    for y in 0..q.output_size() {
        let scores = problem.row_scores(prior, q.row(y));
        let best = scores.iter().min().expect("at least one action");
        let ties: Vec<usize> = (0..na).filter(|&a| scores[a] == *best).collect();
        let share = Rational::new(1.into(), (ties.len() as i64).into());
        for a in ties {
            rule[a][y] = share.clone();
        }
    }
    Ok(DecisionRule { rule })
}

/// `R*_M(Q) = min_rule max_θ R(θ, Q, rule)`, solved as an exact LP. The
/// returned rule is a basic optimal solution.
pub fn minimax_risk(problem: &DecisionProblem, q: &Channel) -> Result<(Rational, DecisionRule), DecisionError> {
    problem.check_channel(q)?;
    let na = problem.num_actions();
    let np = problem.num_params();
    let live: Vec<usize> = (0..q.output_size()).filter(|&y| !q.is_zero_row(y)).collect();
    let nrule = live.len() * na;
    // variables: rule(a|y) for live y, s+, s-, slack per θ
    let nvars = nrule + 2 + np;
    let var = |yi: usize, a: usize| yi * na + a;
    let mut prog = LinearProgram::default();
    for yi in 0..live.len() {
        let mut row = vec![Rational::zero(); nvars];
        for a in 0..na {
            row[var(yi, a)] = Rational::one();
        }
        prog.add_row(row, Rational::one());
    }
    for th in 0..np {
        let mut row = vec![Rational::zero(); nvars];
        for (yi, &y) in live.iter().enumerate() {
            let mass = problem.row_mass(th, q.row(y));
            if mass.is_zero() {
                continue;
            }
            for a in 0..na {
                row[var(yi, a)] = &mass * &problem.loss[th][a];
            }
        }
        row[nrule] = -Rational::one();
        row[nrule + 1] = Rational::one();
        row[nrule + 2 + th] = Rational::one();
        prog.add_row(row, Rational::zero());
    }
    let mut cost = vec![Rational::zero(); nvars];
    cost[nrule] = Rational::one();
    cost[nrule + 1] = -Rational::one();
    let LpOutcome::Optimal { x, value } = lp::minimize(&prog, &cost) else {
        unreachable!("minimax LP is feasible and bounded below by the smallest loss");
    };
    let mut rule = vec![vec![Rational::zero(); q.output_size()]; na];
    for y in 0..q.output_size() {
        match live.iter().position(|&l| l == y) {
            Some(yi) => (0..na).for_each(|a| rule[a][y] = x[var(yi, a)].clone()),
            None => rule[0][y] = Rational::one(),
        }
    }
    Ok((value, DecisionRule { rule }))
}

/// Bayes risk, the θ-risks of the tie-splitting Bayes rule, and (when those
/// risks are equal) the minimax risk they certify.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualizerReport {
    pub bayes: Rational,
    pub theta_risks: Vec<Rational>,
    pub equalized: bool,
    pub minimax: Option<Rational>,
}

pub fn equalizer_report(problem: &DecisionProblem, prior: &Prior, q: &Channel, tolerance: &Rational) -> Result<EqualizerReport, DecisionError> {
    let (bayes, _) = bayes_optimal_risk(problem, prior, q)?;
    let rule = bayes_tie_splitting_rule(problem, prior, q)?;
    let theta_risks = (0..problem.num_params()).map(|th| risk(problem, th, q, &rule)).collect::<Result<Vec<_>, _>>()?;
    let lo = theta_risks.iter().min().expect("nonempty");
    let hi = theta_risks.iter().max().expect("nonempty");
    let equalized = &(hi - lo) <= tolerance;
    let minimax = if equalized && tolerance.is_zero() {
        let (mm, _) = minimax_risk(problem, q)?;
        assert_eq!(mm, bayes, "equalizing Bayes rule must be minimax");
        Some(mm)
    } else {
        None
    };
    Ok(EqualizerReport { bayes, theta_risks, equalized, minimax })
}

/// True iff a Bayes-optimal rule for `prior` has θ-risk spread at most
/// `tolerance`; with zero tolerance, the implied `R*_M = R*_B` is asserted.
pub fn check_equalizer(problem: &DecisionProblem, prior: &Prior, q: &Channel, tolerance: &Rational) -> Result<bool, DecisionError> {
    equalizer_report(problem, prior, q, tolerance).map(|r| r.equalized)
}

/// Group actions on `Θ`, `X` and `A` declared to leave a problem invariant.
#[derive(Clone, Debug)]
pub struct InvarianceDeclaration {
    pub group: PermGroup,
    pub params: GroupAction,
    pub inputs: GroupAction,
    pub actions: GroupAction,
}

impl InvarianceDeclaration {
    /// `G` acting identically on `Θ = X = A` through its natural action.
    pub fn natural(group: PermGroup) -> Self {
        let a = group.natural_action();
        Self { params: a.clone(), inputs: a.clone(), actions: a, group }
    }
}

/// Exhaustive check of `P(gx|gθ) = P(x|θ)` and `l(gθ, ga) = l(θ, a)`.
pub fn verify_invariance(problem: &DecisionProblem, decl: &InvarianceDeclaration) -> bool {
    let (np, nx, na) = (problem.num_params(), problem.inputs.len(), problem.num_actions());
    if decl.params.carrier_size() != np || decl.inputs.carrier_size() != nx || decl.actions.carrier_size() != na {
        return false;
    }
    (0..decl.group.order()).all(|g| {
        let model_ok = (0..np).all(|th| {
            let gth = decl.params.apply(g, th);
            (0..nx).all(|x| problem.model[decl.inputs.apply(g, x)][gth] == problem.model[x][th])
        });
        let loss_ok = (0..np).all(|th| {
            let gth = decl.params.apply(g, th);
            (0..na).all(|a| problem.loss[gth][decl.actions.apply(g, a)] == problem.loss[th][a])
        });
        model_ok && loss_ok
    })
}

/// `I(X;Y)` in nats for input distribution `prior`. Probabilities are exact
/// until the logarithm.
pub fn mutual_information(q: &Channel, prior: &[Rational]) -> f64 {
    (0..q.output_size()).map(|y| mi_row_contribution(q.row(y), prior)).sum()
}

/// `Σ_x p_x v_x ln(v_x / Σ_x' p_x' v_x')`: the contribution of one
/// (possibly unnormalized) output row to the mutual information.
fn mi_row_contribution(v: &[Rational], prior: &[Rational]) -> f64 {
    let out: Rational = v.iter().zip(prior).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum();
    if out.is_zero() {
        return 0.0;
    }
    v.iter()
        .zip(prior)
        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
        .map(|(vx, px)| to_f64(&(vx * px)) * libm::log(to_f64(&(vx / &out))))
        .sum()
}

/// Supported f-divergences. Hellinger is the unnormalized
/// `Σ (√P - √R)²`; total variation is `½ Σ |P - R|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FDivergence {
    Kl,
    Tv,
    ChiSquared,
    HellingerSquared,
}

impl FromStr for FDivergence {
    type Err = DecisionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "kl" => Ok(Self::Kl),
            "tv" => Ok(Self::Tv),
            "chi2" => Ok(Self::ChiSquared),
            "hellinger2" => Ok(Self::HellingerSquared),
            _ => Err(DecisionError::UnsupportedF(s.into())),
        }
    }
}

impl FDivergence {
    /// `R f(P / R)` with the usual limits at `R = 0` and `P = 0`.
    fn term(self, p: &Rational, r: &Rational) -> f64 {
        if p.is_zero() && r.is_zero() {
            return 0.0;
        }
        match self {
            Self::Kl => {
                if p.is_zero() {
                    0.0
                } else if r.is_zero() {
                    f64::INFINITY
                } else {
                    to_f64(p) * libm::log(to_f64(&(p / r)))
                }
            }
            Self::Tv => to_f64(&(p - r).abs()) / 2.0,
            Self::ChiSquared => {
                if r.is_zero() {
                    f64::INFINITY
                } else {
                    to_f64(&((p - r) * (p - r) / r))
                }
            }
            Self::HellingerSquared => {
                let d = libm::sqrt(to_f64(p)) - libm::sqrt(to_f64(r));
                d * d
            }
        }
    }
}

fn push_forward(v: &[Rational], dist: &[Rational]) -> Rational {
    v.iter().zip(dist).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum()
}

/// `D_f(Q P0 ‖ Q P1)`.
pub fn f_divergence_utility(q: &Channel, f: FDivergence, p0: &[Rational], p1: &[Rational]) -> f64 {
    q.rows().iter().map(|row| f.term(&push_forward(row, p0), &push_forward(row, p1))).sum()
}

/// A channel functional with a direct-sum additive extension to nonnegative
/// matrices (or, for minimax, without one).
#[derive(Clone, Copy, Debug)]
pub enum Utility<'a> {
    BayesRisk { problem: &'a DecisionProblem, prior: &'a Prior },
    MinimaxRisk { problem: &'a DecisionProblem },
    MutualInformation { prior: &'a [Rational] },
    FDivergence { f: FDivergence, p0: &'a [Rational], p1: &'a [Rational] },
}

/// Per-subset objective coefficients.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficients {
    Exact(Vec<Rational>),
    Real(Vec<f64>),
}

/// `u_y` = the utility of the single unnormalized staircase row of `y`, so
/// that the utility of the extremal channel with weights `c` is `Σ_y c_y u_y`.
pub fn linear_coefficients(utility: Utility<'_>, m: usize, t: &PrivacyLevel) -> Result<Coefficients, DecisionError> {
    let rows = Subset::proper_nonempty(m).map(|y| staircase_row(y, m, t.t()));
    match utility {
        Utility::MinimaxRisk { .. } => Err(DecisionError::NoDSAExtension),
        Utility::BayesRisk { problem, prior } => {
            if problem.inputs.len() != m {
                return Err(DecisionError::AlphabetMismatch(format!("problem has {} inputs, not {m}", problem.inputs.len())));
            }
            Ok(Coefficients::Exact(
                rows.map(|v| problem.row_scores(prior, &v).into_iter().min().expect("at least one action")).collect(),
            ))
        }
        Utility::MutualInformation { prior } => Ok(Coefficients::Real(rows.map(|v| mi_row_contribution(&v, prior)).collect())),
        Utility::FDivergence { f, p0, p1 } => {
            Ok(Coefficients::Real(rows.map(|v| f.term(&push_forward(&v, p0), &push_forward(&v, p1))).collect()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::direct_sum;
    use crate::geometry::{extremal_channel, WeightVector};
    use crate::invariant::ss_mechanism;
    use crate::rational::{int, rat};
    use alloc::string::ToString;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| i.to_string()).collect()
    }

    /// Smoothed point-mass testing with `γ = 1`: identity model, 0-1 loss.
    fn ht(m: usize) -> DecisionProblem {
        let model = (0..m).map(|x| (0..m).map(|th| if x == th { int(1) } else { int(0) }).collect()).collect();
        let loss = (0..m).map(|th| (0..m).map(|a| if th == a { int(0) } else { int(1) }).collect()).collect();
        DecisionProblem::new(labels(m), Alphabet::indexed(m), labels(m), model, loss, Some(Prior::uniform(m))).unwrap()
    }

    fn rr(t: i64) -> Channel {
        let d = t + 1;
        Channel::from_rows(vec![vec![rat(t, d), rat(1, d)], vec![rat(1, d), rat(t, d)]]).unwrap()
    }

    fn with_loss(base: &DecisionProblem, loss: Vec<Vec<Rational>>) -> DecisionProblem {
        DecisionProblem::new(
            base.params.clone(),
            base.inputs.clone(),
            base.actions.clone(),
            base.model.clone(),
            loss,
            base.prior.clone(),
        )
        .unwrap()
    }

    #[test]
    fn risk_examples() {
        let p = ht(2);
        let q = rr(3);
        let guess = DecisionRule::new(vec![vec![int(1), int(0)], vec![int(0), int(1)]]).unwrap();
        assert_eq!(risk(&p, 0, &q, &guess).unwrap(), rat(1, 4));
        assert_eq!(risk(&p, 1, &q, &guess).unwrap(), rat(1, 4));
        let zero = with_loss(&p, vec![vec![int(0); 2]; 2]);
        assert_eq!(risk(&zero, 1, &q, &guess).unwrap(), int(0));
        let constant = with_loss(&p, vec![vec![int(7); 2]; 2]);
        assert_eq!(risk(&constant, 0, &q, &guess).unwrap(), int(7));
        assert!(risk(&ht(3), 0, &q, &guess).is_err());
    }

    #[test]
    fn bayes_examples() {
        let p = ht(3);
        let (r, _) = bayes_optimal_risk(&p, &Prior::uniform(3), &Channel::uniform(3, 2)).unwrap();
        assert_eq!(r, rat(2, 3));
        let (r, rule) = bayes_optimal_risk(&ht(2), &Prior::uniform(2), &rr(3)).unwrap();
        assert_eq!(r, rat(1, 4));
        assert_eq!(rule.prob(0, 0), &int(1));
        assert_eq!(rule.prob(1, 1), &int(1));
        // direct-sum additivity
        let q1 = rr(3);
        let q2 = rr(2);
        let s = direct_sum(&[rat(1, 3), rat(2, 3)], &[q1.clone(), q2.clone()]).unwrap();
        let pr = Prior::new(vec![rat(1, 5), rat(4, 5)]).unwrap();
        let b = |q: &Channel| bayes_optimal_risk(&ht(2), &pr, q).unwrap().0;
        assert_eq!(b(&s), rat(1, 3) * b(&q1) + rat(2, 3) * b(&q2));
    }

    #[test]
    fn minimax_examples() {
        let p = ht(2);
        let (v, rule) = minimax_risk(&p, &rr(3)).unwrap();
        assert_eq!(v, rat(1, 4));
        assert!((0..2).all(|th| risk(&p, th, &rr(3), &rule).unwrap() <= v));
        let constant = with_loss(&p, vec![vec![int(5); 2]; 2]);
        assert_eq!(minimax_risk(&constant, &rr(3)).unwrap().0, int(5));
        let q1 = rr(3);
        let q2 = Channel::uniform(2, 3);
        let s = direct_sum(&[rat(1, 2), rat(1, 2)], &[q1.clone(), q2.clone()]).unwrap();
        let mm = |q: &Channel| minimax_risk(&p, q).unwrap().0;
        assert!(mm(&s) <= mm(&q1).max(mm(&q2)));
    }

    #[test]
    fn equalizer_examples() {
        let zero = int(0);
        for m in 2..=4 {
            let p = ht(m);
            for k in 1..m {
                let q = ss_mechanism(m, k, &PrivacyLevel::new(int(2)).unwrap()).unwrap();
                let rep = equalizer_report(&p, &Prior::uniform(m), &q, &zero).unwrap();
                assert!(rep.equalized, "m={m} k={k}");
                assert_eq!(rep.minimax, Some(rep.bayes));
            }
            assert!(check_equalizer(&p, &Prior::uniform(m), &Channel::uniform(m, 2), &zero).unwrap());
        }
        let asym = with_loss(&ht(2), vec![vec![int(0), int(2)], vec![int(1), int(0)]]);
        let rep = equalizer_report(&asym, &Prior::uniform(2), &rr(3), &zero).unwrap();
        assert!(!rep.equalized);
        assert_ne!(rep.theta_risks[0], rep.theta_risks[1]);
    }

    #[test]
    fn invariance_examples() {
        let p = ht(3);
        let sym = PermGroup::symmetric(3, 10).unwrap();
        assert!(verify_invariance(&p, &InvarianceDeclaration::natural(sym.clone())));
        let mut loss = p.loss.clone();
        loss[0][1] = int(2);
        assert!(!verify_invariance(&with_loss(&p, loss.clone()), &InvarianceDeclaration::natural(sym)));
        assert!(verify_invariance(&with_loss(&p, loss), &InvarianceDeclaration::natural(PermGroup::trivial(3))));
    }

    #[test]
    fn information_measures() {
        let u = Prior::uniform(2);
        assert_eq!(mutual_information(&Channel::uniform(2, 3), u.probs()), 0.0);
        assert!((mutual_information(&Channel::identity(2), u.probs()) - core::f64::consts::LN_2).abs() < 1e-15);
        let p0 = [int(1), int(0)];
        let p1 = [int(0), int(1)];
        assert!((f_divergence_utility(&rr(3), FDivergence::Tv, &p0, &p1) - 0.5).abs() < 1e-15);
        for f in [FDivergence::Kl, FDivergence::Tv, FDivergence::ChiSquared, FDivergence::HellingerSquared] {
            assert_eq!(f_divergence_utility(&rr(3), f, &p0, &p0), 0.0);
            assert_eq!(f_divergence_utility(&Channel::uniform(2, 2), f, &p0, &p1), 0.0);
        }
        assert_eq!("js".parse::<FDivergence>(), Err(DecisionError::UnsupportedF("js".into())));
    }

    #[test]
    fn linear_coefficient_examples() {
        let t = PrivacyLevel::new(int(3)).unwrap();
        let p = ht(2);
        let prior = Prior::uniform(2);
        let Coefficients::Exact(u) = linear_coefficients(Utility::BayesRisk { problem: &p, prior: &prior }, 2, &t).unwrap() else {
            panic!("Bayes coefficients are exact")
        };
        assert_eq!(u, vec![rat(1, 2), rat(1, 2)]);
        let c = [rat(1, 4), rat(1, 4)];
        let objective: Rational = u.iter().zip(&c).map(|(a, b)| a * b).sum();
        assert_eq!(objective, rat(1, 4));
        let zero = with_loss(&p, vec![vec![int(0); 2]; 2]);
        assert_eq!(
            linear_coefficients(Utility::BayesRisk { problem: &zero, prior: &prior }, 2, &t).unwrap(),
            Coefficients::Exact(vec![int(0), int(0)])
        );
        assert_eq!(linear_coefficients(Utility::MinimaxRisk { problem: &p }, 2, &t), Err(DecisionError::NoDSAExtension));

        let t2 = PrivacyLevel::new(int(2)).unwrap();
        let uni = Prior::uniform(3);
        let Coefficients::Real(mu) = linear_coefficients(Utility::MutualInformation { prior: uni.probs() }, 3, &t2).unwrap() else {
            panic!("MI coefficients are real")
        };
        let mut c = vec![int(0); 6];
        for s in [1u64, 2, 4] {
            c[Subset(s).index()] = rat(1, 8);
        }
        for s in [3u64, 5, 6] {
            c[Subset(s).index()] = rat(1, 10);
        }
        let w = WeightVector::new(c, 3, &t2).unwrap();
        let direct = mutual_information(&extremal_channel(&w), uni.probs());
        let linear: f64 = mu.iter().zip(w.weights()).map(|(a, b)| a * to_f64(b)).sum();
        assert!((direct - linear).abs() < 1e-12);
    }
}
