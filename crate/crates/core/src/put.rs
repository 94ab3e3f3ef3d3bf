//! Privacy-utility trade-off solvers: vertex enumeration, exact LP over the
//! weight polytope, the transitive closed form, and a randomized audit.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Signed, Zero};
use rand::{Rng, RngCore, SeedableRng};
use thiserror::Error;

use crate::channels::{apply_group_element, compose, Channel, PrivacyLevel};
use crate::decision::{
    bayes_optimal_risk, check_equalizer, f_divergence_utility, minimax_risk, mutual_information, Coefficients,
    DecisionProblem, FDivergence, Prior,
};
use crate::geometry::{enumerate_polytope_vertices, extremal_channel, staircase_row, GeometryError, StaircaseMatrix, WeightVector};
use crate::groups::{Alphabet, GroupError, PermGroup, Permutation, Subset};
use crate::invariant::{InvariantError, InvariantPolytope, OrbitWeightVector};
use crate::lp::{self, LinearProgram, LpOutcome};
use crate::rational::{to_f64, Rational};

/// Default absolute tolerance for real-valued objectives.
pub const REAL_OBJECTIVE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Error)]
pub enum PutError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("objective is not declared {0}")]
    MissingAttestation(&'static str),
    #[error("objective changes under group generator {generator}")]
    InvarianceViolation { generator: usize },
    #[error("objective reads {objective} inputs, polytope has {polytope}")]
    AlphabetMismatch { objective: usize, polytope: usize },
    #[error("coefficient vector has length {got}, expected {expected}")]
    CoefficientLength { got: usize, expected: usize },
    #[error("objective is unbounded over the polytope")]
    Unbounded,
    #[error("audit sample {sample} beats the trade-off by {gap}")]
    AuditFailure { sample: u64, gap: f64, channel: Box<Channel> },
}

/// An objective value: exact for rational risks, real for information measures.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Rational),
    Real(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Exact(r) => to_f64(r),
            Self::Real(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Self::Exact(r) => Some(r),
            Self::Real(_) => None,
        }
    }

    /// Exact comparison when both sides are exact.
    pub fn compare(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Exact(a), Self::Exact(b)) => a.cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()).unwrap_or(Ordering::Equal),
        }
    }

    /// `self - other`, exact when possible.
    pub fn minus(&self, other: &Self) -> Self {
        match (self, other) {
            (Self::Exact(a), Self::Exact(b)) => Self::Exact(a - b),
            _ => Self::Real(self.to_f64() - other.to_f64()),
        }
    }

    fn within(&self, other: &Self, tolerance: f64) -> bool {
        match (self, other) {
            (Self::Exact(a), Self::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tolerance,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact(r) => f.write_str(&crate::rational::format(r)),
            Self::Real(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    /// Risks: smaller is better.
    Minimize,
    /// Utilities: larger is better.
    Maximize,
}

impl Sense {
    fn better(self, a: &Value, b: &Value) -> bool {
        match self {
            Self::Minimize => a.compare(b) == Ordering::Less,
            Self::Maximize => a.compare(b) == Ordering::Greater,
        }
    }
}

/// Caller attestations about an objective. `ccv` means the optimum over a
/// polytope is attained at a vertex: concavity for risks, convexity for
/// utilities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Properties {
    pub dpi: bool,
    pub dsa: bool,
    pub ds_qcvx: bool,
    pub ccv: bool,
    pub g_invariant: bool,
}

/// A functional of channels to be optimized over maximal LDP channels.
pub trait ChannelObjective {
    fn input_size(&self) -> usize;
    fn sense(&self) -> Sense;
    fn properties(&self) -> Properties;
    fn evaluate(&self, q: &Channel) -> Value;
    /// Whether the value at `argmin` is certified optimal despite the
    /// objective not being declared CCV. `candidates` are all scanned
    /// vertex channels.
    fn certify(&self, _argmin: &Channel, _candidates: &[Channel]) -> bool {
        false
    }
}

pub struct BayesObjective<'a> {
    pub problem: &'a DecisionProblem,
    pub prior: &'a Prior,
    pub g_invariant: bool,
}

impl ChannelObjective for BayesObjective<'_> {
    fn input_size(&self) -> usize {
        self.problem.inputs().len()
    }
    fn sense(&self) -> Sense {
        Sense::Minimize
    }
    fn properties(&self) -> Properties {
        Properties { dpi: true, dsa: true, ds_qcvx: true, ccv: true, g_invariant: self.g_invariant }
    }
    fn evaluate(&self, q: &Channel) -> Value {
        Value::Exact(bayes_optimal_risk(self.problem, self.prior, q).expect("validated alphabet").0)
    }
}

/// Minimax risk. With a prior the scan result can be promoted by an
/// equalizer certificate.
pub struct MinimaxObjective<'a> {
    pub problem: &'a DecisionProblem,
    pub prior: Option<&'a Prior>,
    pub g_invariant: bool,
}

impl ChannelObjective for MinimaxObjective<'_> {
    fn input_size(&self) -> usize {
        self.problem.inputs().len()
    }
    fn sense(&self) -> Sense {
        Sense::Minimize
    }
    fn properties(&self) -> Properties {
        Properties { dpi: true, dsa: false, ds_qcvx: true, ccv: false, g_invariant: self.g_invariant }
    }
    fn evaluate(&self, q: &Channel) -> Value {
        Value::Exact(minimax_risk(self.problem, q).expect("validated alphabet").0)
    }
    /// The Bayes-optimal rule at `argmin` equalizes, and `argmin` also
    /// minimizes the Bayes risk among the candidates: then
    /// `R*_M(argmin) = R*_B(argmin) = PUT_B ≤ PUT_M`.
    fn certify(&self, argmin: &Channel, candidates: &[Channel]) -> bool {
        let Some(prior) = self.prior else { return false };
        let bayes = |q: &Channel| bayes_optimal_risk(self.problem, prior, q).expect("validated alphabet").0;
        let at = bayes(argmin);
        candidates.iter().all(|q| bayes(q) >= at)
            && check_equalizer(self.problem, prior, argmin, &Rational::zero()).expect("validated alphabet")
    }
}

pub struct MutualInformationObjective<'a> {
    pub prior: &'a [Rational],
    pub g_invariant: bool,
}

impl ChannelObjective for MutualInformationObjective<'_> {
    fn input_size(&self) -> usize {
        self.prior.len()
    }
    fn sense(&self) -> Sense {
        Sense::Maximize
    }
    fn properties(&self) -> Properties {
        Properties { dpi: true, dsa: true, ds_qcvx: true, ccv: true, g_invariant: self.g_invariant }
    }
    fn evaluate(&self, q: &Channel) -> Value {
        Value::Real(mutual_information(q, self.prior))
    }
}

pub struct FDivergenceObjective<'a> {
    pub f: FDivergence,
    pub p0: &'a [Rational],
    pub p1: &'a [Rational],
    pub g_invariant: bool,
}

impl ChannelObjective for FDivergenceObjective<'_> {
    fn input_size(&self) -> usize {
        self.p0.len()
    }
    fn sense(&self) -> Sense {
        Sense::Maximize
    }
    fn properties(&self) -> Properties {
        Properties { dpi: true, dsa: true, ds_qcvx: true, ccv: true, g_invariant: self.g_invariant }
    }
    fn evaluate(&self, q: &Channel) -> Value {
        Value::Real(f_divergence_utility(q, self.f, self.p0, self.p1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    VertexEnum,
    Lp,
    TransitiveClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certificate {
    Exact,
    BoundOnly,
    EqualizerCertified,
}

macro_rules! named_enum {
    ($ty:ty, $err:literal, $($variant:path => $name:literal),+ $(,)?) => {
        impl $ty {
            pub fn name(self) -> &'static str {
                match self { $($variant => $name),+ }
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
        impl FromStr for $ty {
            type Err = &'static str;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s { $($name => Ok($variant),)+ _ => Err($err) }
            }
        }
    };
}

named_enum!(Method, "unknown method", Method::VertexEnum => "vertex_enum", Method::Lp => "lp", Method::TransitiveClosedForm => "transitive_closed_form");
named_enum!(Certificate, "unknown certificate", Certificate::Exact => "exact", Certificate::BoundOnly => "bound_only", Certificate::EqualizerCertified => "equalizer_certified");

/// The optimizing point, in the coordinates of the polytope that was searched.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Argmin {
    Full(WeightVector),
    Orbit(OrbitWeightVector),
}

impl Argmin {
    pub fn weights(&self) -> &[Rational] {
        match self {
            Self::Full(w) => w.weights(),
            Self::Orbit(w) => w.weights(),
        }
    }
}

/// Winning subset orbit of a symmetry-reduced search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinningOrbit {
    pub index: usize,
    pub representative: Subset,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    pub weights: Vec<Rational>,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PutResult {
    pub value: Value,
    pub argmin: Argmin,
    pub method: Method,
    pub certificate: Certificate,
    /// Set when the argmin is supported on a single subset orbit.
    pub orbit: Option<WinningOrbit>,
    /// Per-vertex (or per-orbit) values, in scan order. Empty for LP.
    pub table: Vec<Evaluation>,
}

/// The candidate points of a vertex scan.
#[derive(Clone, Debug)]
pub enum VertexSet {
    Full { m: usize, t: PrivacyLevel, vertices: Vec<WeightVector> },
    Invariant { polytope: InvariantPolytope, vertices: Vec<OrbitWeightVector> },
}

impl VertexSet {
    pub fn full(m: usize, t: &PrivacyLevel, cap: usize) -> Result<Self, PutError> {
        Ok(Self::Full { m, t: t.clone(), vertices: enumerate_polytope_vertices(m, t, cap)? })
    }

    pub fn invariant(group: &PermGroup, t: &PrivacyLevel, cap: usize) -> Result<Self, PutError> {
        let polytope = InvariantPolytope::new(group.clone(), t)?;
        let vertices = polytope.vertices(cap)?;
        Ok(Self::Invariant { polytope, vertices })
    }

    pub fn m(&self) -> usize {
        match self {
            Self::Full { m, .. } => *m,
            Self::Invariant { polytope, .. } => polytope.m(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Full { vertices, .. } => vertices.len(),
            Self::Invariant { vertices, .. } => vertices.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn channels(&self) -> Vec<Channel> {
        match self {
            Self::Full { vertices, .. } => vertices.iter().map(extremal_channel).collect(),
            Self::Invariant { polytope, vertices } => {
                vertices.iter().map(|w| polytope.extremal_channel(w).expect("enumerated vertex")).collect()
            }
        }
    }

    fn argmin(&self, i: usize) -> Argmin {
        match self {
            Self::Full { vertices, .. } => Argmin::Full(vertices[i].clone()),
            Self::Invariant { vertices, .. } => Argmin::Orbit(vertices[i].clone()),
        }
    }

    fn winning_orbit(&self, i: usize) -> Option<WinningOrbit> {
        match self {
            Self::Full { .. } => None,
            Self::Invariant { polytope, vertices } => single_orbit(polytope, vertices[i].weights()),
        }
    }
}

fn single_orbit(polytope: &InvariantPolytope, w: &[Rational]) -> Option<WinningOrbit> {
    let support: Vec<usize> = (0..w.len()).filter(|&i| !w[i].is_zero()).collect();
    match support[..] {
        [index] => {
            let o = &polytope.subset_orbits()[index];
            Some(WinningOrbit { index, representative: o.representative(), k: o.k })
        }
        _ => None,
    }
}

/// Channels used to spot-check a declared G-invariance: one column per input
/// letter, with a distinct diagonal boost per letter so that no nontrivial
/// permutation fixes them.
fn probe_channels(m: usize) -> Vec<Channel> {
    (0..2)
        .map(|j| {
            let rows = (0..m)
                .map(|y| {
                    (0..m)
                        .map(|x| {
                            let boost = if x == y { (x + 1 + j) as i64 } else { 0 };
                            Rational::new((1 + boost).into(), ((m + x + 1 + j) as i64).into())
                        })
                        .collect()
                })
                .collect();
            Channel::from_rows(rows).expect("columns sum to one")
        })
        .collect()
}

fn check_invariance<O: ChannelObjective + ?Sized>(objective: &O, group: &PermGroup) -> Result<(), PutError> {
    let props = objective.properties();
    if !props.g_invariant {
        return Err(PutError::MissingAttestation("G-invariant"));
    }
    if !props.ds_qcvx {
        return Err(PutError::MissingAttestation("DS-QCVX"));
    }
    for q in probe_channels(group.degree()) {
        let base = objective.evaluate(&q);
        let id = Permutation::identity(q.output_size());
        for (generator, g) in group.generators().iter().enumerate() {
            if !objective.evaluate(&apply_group_element(g, &id, &q)).within(&base, REAL_OBJECTIVE_TOLERANCE) {
                return Err(PutError::InvarianceViolation { generator });
            }
        }
    }
    Ok(())
}

fn check_inputs<O: ChannelObjective + ?Sized>(objective: &O, m: usize) -> Result<(), PutError> {
    if objective.input_size() != m {
        return Err(PutError::AlphabetMismatch { objective: objective.input_size(), polytope: m });
    }
    Ok(())
}

/// Scans `vertices`; ties go to the first vertex in scan order.
pub fn put_over_vertices<O: ChannelObjective + ?Sized>(objective: &O, vertices: &VertexSet) -> Result<PutResult, PutError> {
    check_inputs(objective, vertices.m())?;
    if let VertexSet::Invariant { polytope, .. } = vertices {
        check_invariance(objective, polytope.group())?;
    }
    let channels = vertices.channels();
    let values: Vec<Value> = channels.iter().map(|q| objective.evaluate(q)).collect();
    let sense = objective.sense();
    let best = (1..values.len()).fold(0, |b, i| if sense.better(&values[i], &values[b]) { i } else { b });
    let certificate = if objective.properties().ccv {
        Certificate::Exact
    } else if objective.certify(&channels[best], &channels) {
        Certificate::EqualizerCertified
    } else {
        Certificate::BoundOnly
    };
    let table = (0..values.len())
        .map(|i| Evaluation { weights: vertices.argmin(i).weights().to_vec(), value: values[i].clone() })
        .collect();
    Ok(PutResult {
        value: values[best].clone(),
        argmin: vertices.argmin(best),
        method: Method::VertexEnum,
        certificate,
        orbit: vertices.winning_orbit(best),
        table,
    })
}

/// Optimum over all vertices of the weight polytope, or of its
/// G-invariant section when `group` is given.
pub fn put_by_vertex_enumeration<O: ChannelObjective + ?Sized>(
    objective: &O,
    m: usize,
    t: &PrivacyLevel,
    group: Option<&PermGroup>,
    cap: usize,
) -> Result<PutResult, PutError> {
    check_inputs(objective, m)?;
    let set = match group {
        Some(g) => VertexSet::invariant(g, t, cap)?,
        None => VertexSet::full(m, t, cap)?,
    };
    put_over_vertices(objective, &set)
}

/// Optimizes `Σ_y c_y u_y` over the weight polytope (orbit-collapsed when
/// `group` is given) with the exact simplex. Real coefficients only enter the
/// objective row.
pub fn put_by_lp(u: &Coefficients, m: usize, t: &PrivacyLevel, group: Option<&PermGroup>, sense: Sense) -> Result<PutResult, PutError> {
    let n = Subset::count(m);
    let len = match u {
        Coefficients::Exact(v) => v.len(),
        Coefficients::Real(v) => v.len(),
    };
    if len != n {
        return Err(PutError::CoefficientLength { got: len, expected: n });
    }
    let polytope = group.map(|g| InvariantPolytope::new(g.clone(), t)).transpose()?;
    let (prog, members): (LinearProgram, Vec<Vec<usize>>) = match &polytope {
        None => {
            let (a, b) = StaircaseMatrix::new(m, t)?.polytope_system();
            (LinearProgram { a, b }, (0..n).map(|i| vec![i]).collect())
        }
        Some(p) => {
            let a: Vec<Vec<Rational>> = (0..p.input_orbits().len())
                .map(|i| (0..p.subset_orbits().len()).map(|o| p.coefficients(i, o).r_tilde.clone()).collect())
                .collect();
            let b = vec![Rational::one(); a.len()];
            let members = p.subset_orbits().iter().map(|o| o.members.iter().map(|y| y.index()).collect()).collect();
            (LinearProgram { a, b }, members)
        }
    };
    let sign = match sense {
        Sense::Minimize => Rational::one(),
        Sense::Maximize => -Rational::one(),
    };
    let (x, value) = match u {
        Coefficients::Exact(u) => {
            let cost: Vec<Rational> = members.iter().map(|ys| ys.iter().map(|&y| &u[y] * &sign).sum()).collect();
            match lp::minimize(&prog, &cost) {
                LpOutcome::Optimal { x, value } => (x, Value::Exact(value * &sign)),
                LpOutcome::Unbounded => return Err(PutError::Unbounded),
                LpOutcome::Infeasible => unreachable!("the weight polytope is nonempty"),
            }
        }
        Coefficients::Real(u) => {
            let s = to_f64(&sign);
            let cost: Vec<f64> = members.iter().map(|ys| ys.iter().map(|&y| u[y] * s).sum()).collect();
            match lp::minimize(&prog, &cost) {
                LpOutcome::Optimal { x, value } => (x, Value::Real(value * s)),
                LpOutcome::Unbounded => return Err(PutError::Unbounded),
                LpOutcome::Infeasible => unreachable!("the weight polytope is nonempty"),
            }
        }
    };
    let (argmin, orbit) = match &polytope {
        None => (Argmin::Full(WeightVector::new(x, m, t)?), None),
        Some(p) => {
            let orbit = single_orbit(p, &x);
            (Argmin::Orbit(p.weights(x)?), orbit)
        }
    };
    Ok(PutResult { value, argmin, method: Method::Lp, certificate: Certificate::Exact, orbit, table: Vec::new() })
}

/// `min_O f(O)` over subset orbits of a transitive group, where
/// `per_orbit(O, w_O)` evaluates the objective at `w_O S_{X,O}`. The caller
/// vouches that the objective is CCV and G-invariant.
pub fn put_transitive_closed_form<F>(polytope: &InvariantPolytope, sense: Sense, mut per_orbit: F) -> Result<PutResult, PutError>
where
    F: FnMut(usize, &Rational) -> Value,
{
    if !polytope.is_transitive() {
        return Err(InvariantError::NotTransitive.into());
    }
    let count = polytope.subset_orbits().len();
    let mut table: Vec<Evaluation> = Vec::with_capacity(count);
    let mut best: Option<usize> = None;
    for o in 0..count {
        let w = polytope.transitive_vertex_weight(o)?;
        let value = per_orbit(o, &w);
        let mut weights = vec![Rational::zero(); count];
        weights[o] = w;
        if best.is_none_or(|b| sense.better(&value, &table[b].value)) {
            best = Some(o);
        }
        table.push(Evaluation { weights, value });
    }
    let best = best.expect("at least one subset orbit");
    let argmin = polytope.weights(table[best].weights.clone())?;
    Ok(PutResult {
        value: table[best].value.clone(),
        orbit: single_orbit(polytope, argmin.weights()),
        argmin: Argmin::Orbit(argmin),
        method: Method::TransitiveClosedForm,
        certificate: Certificate::Exact,
        table,
    })
}

/// Per-sample seed: a splitmix64 finalizer over the base seed and the index.
pub fn sample_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn small(rng: &mut impl RngCore, lo: i64, hi: i64) -> Rational {
    Rational::from_integer(rng.gen_range(lo..=hi).into())
}

/// A random `t`-LDP channel on `m` inputs: a few random conic combinations
/// of staircase rows, a completion row that keeps every column sum equal and
/// the row inside the LDP cone, normalization, then a random post-processing.
pub fn random_ldp_channel(m: usize, t: &PrivacyLevel, rng: &mut impl RngCore) -> Channel {
    let tv = t.t();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    if t.is_degenerate() {
        rows.push(vec![Rational::one(); m]);
    } else {
        let n = Subset::count(m) as u64;
        for _ in 0..rng.gen_range(1..=4) {
            let mut row = vec![Rational::zero(); m];
            for _ in 0..rng.gen_range(1..=3) {
                let y = Subset::from_index(rng.gen_range(0..n) as usize);
                let a = small(rng, 1, 6);
                for (r, s) in row.iter_mut().zip(staircase_row(y, m, tv)) {
                    *r += &a * s;
                }
            }
            rows.push(row);
        }
        let sums: Vec<Rational> = (0..m).map(|x| rows.iter().map(|r| &r[x]).sum()).collect();
        let smax = sums.iter().max().expect("m ≥ 1").clone();
        let smin = sums.iter().min().expect("m ≥ 1").clone();
        let bound = (tv * &smax - &smin) / (tv - Rational::one());
        let total = &bound * (Rational::one() + Rational::new(rng.gen_range(0..=4).into(), 4.into()));
        rows.push(sums.iter().map(|s| &total - s).collect());
        for row in &mut rows {
            for v in row.iter_mut() {
                *v = &*v / &total;
            }
        }
    }
    let q = Channel::from_rows(rows).expect("columns normalized");
    let outputs = rng.gen_range(1..=q.output_size() + 1);
    let cols: Vec<Vec<Rational>> = (0..q.output_size())
        .map(|_| {
            let raw: Vec<Rational> = (0..outputs).map(|_| small(rng, 0, 4)).collect();
            let s: Rational = raw.iter().sum();
            if s.is_zero() {
                let mut e = vec![Rational::zero(); outputs];
                e[0] = Rational::one();
                e
            } else {
                raw.into_iter().map(|v| v / &s).collect()
            }
        })
        .collect();
    let w_rows: Vec<Vec<Rational>> = (0..outputs).map(|z| cols.iter().map(|c| c[z].clone()).collect()).collect();
    let w = Channel::new(q.output().clone(), Alphabet::indexed(outputs), w_rows).expect("stochastic post-processing");
    compose(&w, &q).expect("alphabets match")
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub samples: u64,
    /// Smallest `objective(Q) - PUT` (sign-adjusted for utilities) observed.
    pub min_gap: Option<Value>,
}

/// Draws `samples` random LDP channels and checks that none beats `put`
/// by more than `tolerance` (exact comparison for exact objectives). Sample
/// `i` uses its own generator seeded from `sample_seed(seed, i)`.
pub fn random_channel_audit<O, R>(
    objective: &O,
    t: &PrivacyLevel,
    put: &PutResult,
    samples: u64,
    seed: u64,
    tolerance: &Rational,
) -> Result<AuditReport, PutError>
where
    O: ChannelObjective + ?Sized,
    R: RngCore + SeedableRng,
{
    let m = objective.input_size();
    let mut min_gap: Option<Value> = None;
    for i in 0..samples {
        let mut rng = R::seed_from_u64(sample_seed(seed, i));
        let q = random_ldp_channel(m, t, &mut rng);
        debug_assert!(q.is_ldp(t));
        let value = objective.evaluate(&q);
        let gap = match objective.sense() {
            Sense::Minimize => value.minus(&put.value),
            Sense::Maximize => put.value.minus(&value),
        };
        let violated = match &gap {
            Value::Exact(g) => g.is_negative() && &-g > tolerance,
            Value::Real(g) => *g < -to_f64(tolerance),
        };
        if violated {
            return Err(PutError::AuditFailure { sample: i, gap: gap.to_f64(), channel: Box::new(q) });
        }
        if min_gap.as_ref().is_none_or(|g| gap.compare(g) == Ordering::Less) {
            min_gap = Some(gap);
        }
    }
    Ok(AuditReport { samples, min_gap })
}
