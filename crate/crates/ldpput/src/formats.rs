//! JSON and CSV file formats. Rationals are always written as `"p/q"` strings.

use std::io::Write;

use ldpput_core::decision::DecisionProblem;
use ldpput_core::geometry::MaximalityVerdict;
use ldpput_core::invariant::InvariantPolytope;
use ldpput_core::put::{PutResult, Value};
use ldpput_core::rational::{self, Rational};
use ldpput_core::{Alphabet, Channel, PermGroup, Permutation, Prior, Subset, WeightVector};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid rational `{0}`")]
    Rational(String),
    #[error("{0}")]
    Invalid(String),
}

fn invalid(e: impl std::fmt::Display) -> FormatError {
    FormatError::Invalid(e.to_string())
}

pub fn parse_rational(s: &str) -> Result<Rational, FormatError> {
    rational::parse(s).ok_or_else(|| FormatError::Rational(s.to_string()))
}

fn parse_rows(rows: &[Vec<String>]) -> Result<Vec<Vec<Rational>>, FormatError> {
    rows.iter().map(|r| r.iter().map(|s| parse_rational(s)).collect()).collect()
}

fn format_rows(rows: &[Vec<Rational>]) -> Vec<Vec<String>> {
    rows.iter().map(|r| r.iter().map(rational::format).collect()).collect()
}

/// `{"input": [...], "output": [...], "rows": [["p/q", ...], ...]}`, rows
/// indexed by output letter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelFile {
    pub input: Vec<String>,
    pub output: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ChannelFile {
    pub fn from_channel(q: &Channel) -> Self {
        Self { input: q.input().letters().to_vec(), output: q.output().letters().to_vec(), rows: format_rows(q.rows()) }
    }

    pub fn to_channel(&self) -> Result<Channel, FormatError> {
        let input = Alphabet::new(self.input.clone()).map_err(invalid)?;
        let output = Alphabet::new(self.output.clone()).map_err(invalid)?;
        Channel::new(input, output, parse_rows(&self.rows)?).map_err(invalid)
    }
}

pub fn read_channel(json: &str) -> Result<Channel, FormatError> {
    serde_json::from_str::<ChannelFile>(json)?.to_channel()
}

/// `y,x,value` rows with letters, one per matrix entry.
pub fn write_channel_csv(q: &Channel, out: impl Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["y", "x", "value"])?;
    for (y, ylab) in q.output().letters().iter().enumerate() {
        for (x, xlab) in q.input().letters().iter().enumerate() {
            w.write_record([ylab.as_str(), xlab.as_str(), &rational::format(q.entry(y, x))])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// SHA-256 of the compact channel JSON, hex encoded.
pub fn channel_hash(q: &Channel) -> String {
    let json = serde_json::to_string(&ChannelFile::from_channel(q)).expect("plain data serializes");
    hex::encode(Sha256::digest(json.as_bytes()))
}

/// `{"alphabet": [...], "generators": [[images], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub alphabet: Vec<String>,
    pub generators: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn to_group(&self, cap: usize) -> Result<(Alphabet, PermGroup), FormatError> {
        let alphabet = Alphabet::new(self.alphabet.clone()).map_err(invalid)?;
        let gens = self
            .generators
            .iter()
            .map(|g| Permutation::new(g.clone()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(invalid)?;
        let group = PermGroup::generate(alphabet.len(), gens, cap).map_err(invalid)?;
        Ok((alphabet, group))
    }
}

/// `model` rows are indexed by input letter and columns by parameter;
/// `loss` rows by parameter and columns by action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub theta: Vec<String>,
    pub inputs: Vec<String>,
    pub actions: Vec<String>,
    pub model: Vec<Vec<String>>,
    pub loss: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prior: Option<Vec<String>>,
}

impl ProblemFile {
    pub fn from_problem(p: &DecisionProblem) -> Self {
        Self {
            theta: p.params().to_vec(),
            inputs: p.inputs().letters().to_vec(),
            actions: p.actions().to_vec(),
            model: format_rows(p.model()),
            loss: format_rows(p.loss()),
            prior: p.prior().map(|pr| pr.probs().iter().map(rational::format).collect()),
        }
    }

    pub fn to_problem(&self) -> Result<DecisionProblem, FormatError> {
        let prior = match &self.prior {
            Some(v) => Some(Prior::new(v.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?).map_err(invalid)?),
            None => None,
        };
        DecisionProblem::new(
            self.theta.clone(),
            Alphabet::new(self.inputs.clone()).map_err(invalid)?,
            self.actions.clone(),
            parse_rows(&self.model)?,
            parse_rows(&self.loss)?,
            prior,
        )
        .map_err(invalid)
    }
}

/// A vertex in full coordinates: supporting subsets as bitmasks and the
/// weight of every subset in bitmask order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub support: Vec<u64>,
    pub weights: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
}

impl VertexRecord {
    pub fn new(w: &WeightVector, objective: Option<&Value>) -> Self {
        Self {
            support: w.support().into_iter().map(Subset::mask).collect(),
            weights: w.weights().iter().map(rational::format).collect(),
            objective: objective.map(ToString::to_string),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalityCertificate {
    pub channel_hash: String,
    pub verdict: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failing_row: Option<usize>,
}

impl MaximalityCertificate {
    pub fn new(q: &Channel, verdict: &MaximalityVerdict) -> Self {
        Self { channel_hash: channel_hash(q), verdict: verdict.maximal, failing_row: verdict.failing_row }
    }
}

/// One subset orbit: representative bitmask, size, subset size, and `r`,
/// `r̃` against each input orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub representative: u64,
    pub size: usize,
    pub k: usize,
    pub r: Vec<usize>,
    pub r_tilde: Vec<String>,
}

pub fn orbit_table(p: &InvariantPolytope) -> Vec<OrbitRecord> {
    p.subset_orbits()
        .iter()
        .enumerate()
        .map(|(o, orbit)| {
            let cs: Vec<_> = (0..p.input_orbits().len()).map(|i| p.coefficients(i, o)).collect();
            OrbitRecord {
                representative: orbit.representative().mask(),
                size: orbit.len(),
                k: orbit.k,
                r: cs.iter().map(|c| c.r).collect(),
                r_tilde: cs.iter().map(|c| rational::format(&c.r_tilde)).collect(),
            }
        })
        .collect()
}

/// `{"task", "m", "gamma", "t", "methods"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub task: String,
    pub m: usize,
    pub gamma: String,
    pub t: String,
    #[serde(default)]
    pub methods: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub weights: Vec<String>,
    pub value: String,
}

/// One solved trade-off.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PutRecord {
    pub task: String,
    pub m: usize,
    pub gamma: Option<String>,
    pub t: String,
    pub method: String,
    pub value: String,
    pub value_f64: f64,
    pub winning_k_or_orbit: Option<String>,
    pub certificate: String,
    pub weights: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<EvaluationRecord>,
}

impl PutRecord {
    pub fn new(task: &str, m: usize, gamma: Option<&Rational>, t: &Rational, r: &PutResult) -> Self {
        Self {
            task: task.to_string(),
            m,
            gamma: gamma.map(rational::format),
            t: rational::format(t),
            method: r.method.name().to_string(),
            value: r.value.to_string(),
            value_f64: r.value.to_f64(),
            winning_k_or_orbit: r.orbit.as_ref().map(|o| format!("k={} orbit={}", o.k, o.representative.label())),
            certificate: r.certificate.name().to_string(),
            weights: r.argmin.weights().iter().map(rational::format).collect(),
            table: r
                .table
                .iter()
                .map(|e| EvaluationRecord { weights: e.weights.iter().map(rational::format).collect(), value: e.value.to_string() })
                .collect(),
        }
    }
}

pub const PUT_CSV_HEADER: [&str; 8] = ["task", "m", "gamma", "t", "method", "value", "winning_k_or_orbit", "certificate"];

pub fn write_put_csv(records: &[PutRecord], out: impl Write) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PUT_CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.task.as_str(),
            &r.m.to_string(),
            r.gamma.as_deref().unwrap_or(""),
            &r.t,
            &r.method,
            &r.value,
            r.winning_k_or_orbit.as_deref().unwrap_or(""),
            &r.certificate,
        ])?;
    }
    w.flush()?;
    Ok(())
}
