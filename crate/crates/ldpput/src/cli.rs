//! Command-line interface: argument definitions and command execution.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ldpput_core::applications::{
    cardioid_put_closed_form, cardioid_put_transitive, ht_problem, ht_put_closed_form, ht_put_transitive, CardioidSpec, HtSpec,
};
use ldpput_core::decision::{linear_coefficients, DecisionProblem, Utility};
use ldpput_core::geometry::{canonical_weight, enumerate_polytope_vertices, extremal_channel, maximality_verdict, GeometryError};
use ldpput_core::invariant::{InvariantError, InvariantPolytope};
use ldpput_core::put::{
    put_by_lp, put_over_vertices, put_transitive_closed_form, random_channel_audit, BayesObjective, Certificate,
    ChannelObjective, MinimaxObjective, PutError, PutResult, Sense, Value, VertexSet,
};
use ldpput_core::rational::{self, Rational};
use ldpput_core::{GroupError, PermGroup, PrivacyLevel, Prior, WeightVector, DEFAULT_GROUP_CAP, DEFAULT_VERTEX_CAP_M};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::epsilon::{self, DEFAULT_MAX_DENOMINATOR};
use crate::formats::{
    self, orbit_table, ChannelFile, FormatError, GroupFile, MaximalityCertificate, OrbitRecord, ProblemFile, PutRecord,
    RunConfig, VertexRecord,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Cap(String),
    #[error("methods disagree: {0}")]
    Disagreement(String),
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("channel is not LDP at the given level")]
    NotLdp,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Parse(_) => 2,
            Self::Cap(_) => 3,
            Self::Disagreement(_) => 4,
            Self::Audit(_) => 5,
            Self::NotLdp | Self::Io(_) | Self::Other(_) => 1,
        }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        Self::Parse(e.to_string())
    }
}

impl From<PutError> for CliError {
    fn from(e: PutError) -> Self {
        match e {
            PutError::Geometry(GeometryError::DimensionCap { .. })
            | PutError::Invariant(InvariantError::DimensionCap { .. })
            | PutError::Invariant(InvariantError::Geometry(GeometryError::DimensionCap { .. }))
            | PutError::Group(GroupError::CapExceeded { .. }) => Self::Cap(e.to_string()),
            PutError::AuditFailure { .. } => Self::Audit(e.to_string()),
            other => Self::Parse(other.to_string()),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        PutError::from(e).into()
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        PutError::from(e).into()
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        PutError::from(e).into()
    }
}

#[derive(Parser, Debug)]
#[command(name = "ldpput", version, about = "Exact privacy-utility trade-offs under local differential privacy")]
pub struct Cli {
    /// Largest alphabet for full vertex enumeration.
    #[arg(long, env = "LDPPUT_CAP_M", default_value_t = DEFAULT_VERTEX_CAP_M, global = true)]
    pub cap_m: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a channel file for LDP and maximality.
    CheckChannel {
        file: PathBuf,
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the vertices of the weight polytope or of its invariant section.
    Enumerate {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        level: LevelArgs,
        /// sym, cyclic, trivial, or file:<group.json>
        #[arg(long)]
        group: Option<String>,
        /// Decision problem whose risk is evaluated at every vertex.
        #[arg(long)]
        problem: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compute the privacy-utility trade-off with one or more methods.
    Put {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_delimiter = ',')]
        method: Vec<MethodArg>,
        /// Absolute tolerance for real-valued agreement checks.
        #[arg(long, default_value = "1e-9")]
        tolerance: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check random LDP channels against the computed trade-off.
    Audit {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "0")]
        tolerance: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Default)]
pub struct LevelArgs {
    /// Privacy level t = e^ε as "p/q" or a decimal.
    #[arg(long, conflicts_with = "epsilon")]
    pub t: Option<String>,
    /// ε, converted to a rational t by continued fractions.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_MAX_DENOMINATOR)]
    pub max_denominator: u64,
}

#[derive(Args, Debug, Clone)]
pub struct SourceArgs {
    /// Experiment config JSON: {"task", "m", "gamma", "t", "methods"}.
    #[arg(long, conflicts_with_all = ["task", "problem"])]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "problem")]
    pub task: Option<Task>,
    /// Decision problem JSON.
    #[arg(long)]
    pub problem: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Bayes)]
    pub objective: ObjectiveArg,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[command(flatten)]
    pub level: LevelArgs,
    /// sym, cyclic, trivial, or file:<group.json>
    #[arg(long)]
    pub group: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Task {
    Ht,
    Cardioid,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectiveArg {
    Bayes,
    Minimax,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Vertex,
    Lp,
    Closed,
}

fn parse_err(e: impl std::fmt::Display) -> CliError {
    CliError::Parse(e.to_string())
}

/// `"p/q"`, a decimal, or a float in scientific notation (converted exactly).
fn parse_number(s: &str) -> Result<Rational, CliError> {
    if let Some(r) = rational::parse(s) {
        return Ok(r);
    }
    s.trim()
        .parse::<f64>()
        .ok()
        .and_then(Rational::from_float)
        .ok_or_else(|| CliError::Parse(format!("invalid number `{s}`")))
}

fn resolve_level(args: &LevelArgs, err: &mut dyn Write) -> Result<PrivacyLevel, CliError> {
    let t = match (&args.t, args.epsilon) {
        (Some(t), _) => parse_number(t)?,
        (None, Some(eps)) => {
            let a = epsilon::approximate(eps, args.max_denominator).map_err(parse_err)?;
            writeln!(
                err,
                "epsilon {eps} -> t = {} (|e^eps - t| <= {:e}, |ln t - eps| = {:e})",
                rational::format(&a.t),
                a.t_error_bound,
                a.epsilon_error
            )?;
            a.t
        }
        (None, None) => return Err(CliError::Parse("one of --t or --epsilon is required".into())),
    };
    PrivacyLevel::new(t).map_err(parse_err)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn resolve_group(spec: &str, m: usize) -> Result<PermGroup, CliError> {
    match spec {
        "sym" => Ok(PermGroup::symmetric(m, DEFAULT_GROUP_CAP)?),
        "cyclic" => Ok(PermGroup::cyclic(m)),
        "trivial" => Ok(PermGroup::trivial(m)),
        _ => {
            let path = spec
                .strip_prefix("file:")
                .ok_or_else(|| CliError::Parse(format!("unknown group `{spec}`; use sym, cyclic, trivial or file:<path>")))?;
            let file: GroupFile = serde_json::from_str(&read(Path::new(path))?).map_err(FormatError::from)?;
            let (alphabet, group) = file.to_group(DEFAULT_GROUP_CAP)?;
            if alphabet.len() != m {
                return Err(CliError::Parse(format!("group acts on {} letters, expected {m}", alphabet.len())));
            }
            Ok(group)
        }
    }
}

fn emit(out: Option<&Path>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

fn to_json(v: &impl Serialize) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("plain data serializes");
    s.push(b'\n');
    s
}

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let cap = cli.cap_m;
    match cli.command {
        Command::CheckChannel { file, level, out } => check_channel(&file, &level, out.as_deref(), stdout, stderr),
        Command::Enumerate { m, level, group, problem, output } => {
            enumerate(m, &level, group.as_deref(), problem.as_deref(), &output, cap, stdout, stderr)
        }
        Command::Put { source, method, tolerance, output } => put(&source, &method, &tolerance, &output, cap, stdout, stderr),
        Command::Audit { source, samples, seed, tolerance, out } => {
            audit(&source, samples, seed, &tolerance, out.as_deref(), stdout, stderr)
        }
    }
}

#[derive(Serialize)]
struct CheckReport {
    t: String,
    ldp: bool,
    maximal: bool,
    certificate: MaximalityCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    canonical_weights: Option<Vec<String>>,
}

fn check_channel(file: &Path, level: &LevelArgs, out: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let q = formats::read_channel(&read(file)?)?;
    let t = resolve_level(level, stderr)?;
    let ldp = q.is_ldp(&t);
    let verdict = if ldp {
        maximality_verdict(&q, &t)?
    } else {
        ldpput_core::geometry::MaximalityVerdict { maximal: false, failing_row: None }
    };
    let canonical_weights = if verdict.maximal {
        Some(canonical_weight(&q, &t)?.weights().iter().map(rational::format).collect())
    } else {
        None
    };
    let report = CheckReport {
        t: rational::format(t.t()),
        ldp,
        maximal: verdict.maximal,
        certificate: MaximalityCertificate::new(&q, &verdict),
        canonical_weights,
    };
    emit(out, &to_json(&report), stdout)?;
    if ldp {
        Ok(())
    } else {
        Err(CliError::NotLdp)
    }
}

fn load_problem(path: &Path) -> Result<DecisionProblem, CliError> {
    let file: ProblemFile = serde_json::from_str(&read(path)?).map_err(FormatError::from)?;
    Ok(file.to_problem()?)
}

#[derive(Serialize)]
struct EnumerateReport {
    m: usize,
    t: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    group: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orbits: Option<Vec<OrbitRecord>>,
    vertices: Vec<VertexRecord>,
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    m: usize,
    level: &LevelArgs,
    group: Option<&str>,
    problem: Option<&Path>,
    output: &OutputArgs,
    cap: usize,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let t = resolve_level(level, stderr)?;
    if m < 2 {
        return Err(CliError::Parse(format!("alphabet size {m} is below 2")));
    }
    let problem = problem.map(load_problem).transpose()?;
    let (vertices, orbits): (Vec<WeightVector>, Option<Vec<OrbitRecord>>) = match group {
        None => (enumerate_polytope_vertices(m, &t, cap)?, None),
        Some(spec) => {
            let poly = InvariantPolytope::new(resolve_group(spec, m)?, &t)?;
            let vs = poly.vertices(cap)?.iter().map(|w| poly.lift(w)).collect::<Result<_, _>>()?;
            (vs, Some(orbit_table(&poly)))
        }
    };
    let values: Vec<Option<Value>> = vertices
        .iter()
        .map(|w| {
            problem.as_ref().map(|p| {
                let q = extremal_channel(w);
                match p.prior() {
                    Some(prior) => BayesObjective { problem: p, prior, g_invariant: false }.evaluate(&q),
                    None => MinimaxObjective { problem: p, prior: None, g_invariant: false }.evaluate(&q),
                }
            })
        })
        .collect();
    if let Some(p) = &problem {
        if p.inputs().len() != m {
            return Err(CliError::Parse(format!("problem has {} inputs, expected {m}", p.inputs().len())));
        }
    }
    let records: Vec<VertexRecord> = vertices.iter().zip(&values).map(|(w, v)| VertexRecord::new(w, v.as_ref())).collect();
    let bytes = match output.format {
        Format::Json => to_json(&EnumerateReport { m, t: rational::format(t.t()), group: group.map(str::to_string), orbits, vertices: records }),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["support", "weights", "objective"]).map_err(|e| CliError::Other(e.to_string()))?;
            for r in &records {
                let support: Vec<String> = r.support.iter().map(u64::to_string).collect();
                w.write_record([support.join(";"), r.weights.join(";"), r.objective.clone().unwrap_or_default()])
                    .map_err(|e| CliError::Other(e.to_string()))?;
            }
            w.into_inner().map_err(|e| CliError::Other(e.to_string()))?
        }
    };
    emit(output.out.as_deref(), &bytes, stdout)
}

/// What a `put` or `audit` run is about.
enum Source {
    Ht(HtSpec),
    Cardioid(CardioidSpec),
    Problem { problem: DecisionProblem, t: PrivacyLevel, group: Option<PermGroup>, objective: ObjectiveArg },
}

impl Source {
    fn task(&self) -> &'static str {
        match self {
            Self::Ht(_) => "ht",
            Self::Cardioid(_) => "cardioid",
            Self::Problem { .. } => "problem",
        }
    }

    fn m(&self) -> usize {
        match self {
            Self::Ht(s) => s.m,
            Self::Cardioid(s) => s.m,
            Self::Problem { problem, .. } => problem.inputs().len(),
        }
    }

    fn gamma(&self) -> Option<&Rational> {
        match self {
            Self::Ht(s) => Some(&s.gamma),
            Self::Cardioid(s) => Some(&s.gamma),
            Self::Problem { .. } => None,
        }
    }

    fn level(&self) -> &PrivacyLevel {
        match self {
            Self::Ht(s) => &s.t,
            Self::Cardioid(s) => &s.t,
            Self::Problem { t, .. } => t,
        }
    }
}

fn resolve_source(args: &SourceArgs, stderr: &mut dyn Write) -> Result<(Source, Vec<MethodArg>), CliError> {
    let (task, m, gamma, t, methods) = if let Some(path) = &args.config {
        let cfg: RunConfig = serde_json::from_str(&read(path)?).map_err(FormatError::from)?;
        let task = match cfg.task.as_str() {
            "ht" => Task::Ht,
            "cardioid" => Task::Cardioid,
            other => return Err(CliError::Parse(format!("unknown task `{other}`"))),
        };
        let methods = cfg
            .methods
            .iter()
            .filter(|s| s.as_str() != "all")
            .map(|s| MethodArg::from_str(s, true).map_err(CliError::Parse))
            .collect::<Result<Vec<_>, _>>()?;
        let t = PrivacyLevel::new(parse_number(&cfg.t)?).map_err(parse_err)?;
        (Some(task), cfg.m, parse_number(&cfg.gamma)?, t, methods)
    } else if let Some(path) = &args.problem {
        let problem = load_problem(path)?;
        let t = resolve_level(&args.level, stderr)?;
        let group = args.group.as_deref().map(|g| resolve_group(g, problem.inputs().len())).transpose()?;
        return Ok((Source::Problem { problem, t, group, objective: args.objective }, Vec::new()));
    } else {
        let task = args.task.ok_or_else(|| CliError::Parse("one of --config, --task or --problem is required".into()))?;
        let m = args.m.ok_or_else(|| CliError::Parse("--m is required with --task".into()))?;
        let gamma = args.gamma.as_deref().map(parse_number).transpose()?.unwrap_or_else(rational::one);
        (Some(task), m, gamma, resolve_level(&args.level, stderr)?, Vec::new())
    };
    let source = match task.expect("set above") {
        Task::Ht => Source::Ht(HtSpec::new(m, gamma, t).map_err(parse_err)?),
        Task::Cardioid => Source::Cardioid(CardioidSpec::new(m, gamma, t).map_err(parse_err)?),
    };
    Ok((source, methods))
}

fn exact_record(task: &str, m: usize, gamma: Option<&Rational>, t: &Rational, method: &str, value: Value, winner: Option<String>) -> PutRecord {
    PutRecord {
        task: task.into(),
        m,
        gamma: gamma.map(rational::format),
        t: rational::format(t),
        method: method.into(),
        value_f64: value.to_f64(),
        value: value.to_string(),
        winning_k_or_orbit: winner,
        certificate: Certificate::Exact.name().into(),
        weights: Vec::new(),
        table: Vec::new(),
    }
}

fn not_applicable(method: MethodArg, what: &str) -> CliError {
    CliError::Parse(format!("method {method:?} is not available for {what}"))
}

fn solve(source: &Source, methods: &[MethodArg], cap: usize) -> Result<Vec<(PutRecord, Value)>, CliError> {
    let (task, m, gamma, t) = (source.task(), source.m(), source.gamma(), source.level());
    let record = |r: &PutResult| (PutRecord::new(task, m, gamma, t.t(), r), r.value.clone());
    let mut out = Vec::new();
    match source {
        Source::Ht(spec) => {
            let methods = if methods.is_empty() { vec![MethodArg::Vertex, MethodArg::Lp, MethodArg::Closed] } else { methods.to_vec() };
            let problem = ht_problem(spec);
            let prior = Prior::uniform(m);
            let sym = || PermGroup::symmetric(m, DEFAULT_GROUP_CAP);
            for method in methods {
                let r = match method {
                    MethodArg::Vertex => {
                        let obj = BayesObjective { problem: &problem, prior: &prior, g_invariant: true };
                        let set = if m <= cap { VertexSet::full(m, t, cap)? } else { VertexSet::invariant(&sym()?, t, cap)? };
                        put_over_vertices(&obj, &set)?
                    }
                    MethodArg::Lp => {
                        let u = linear_coefficients(Utility::BayesRisk { problem: &problem, prior: &prior }, m, t).map_err(parse_err)?;
                        let group = if m <= cap { None } else { Some(sym()?) };
                        put_by_lp(&u, m, t, group.as_ref(), Sense::Minimize)?
                    }
                    MethodArg::Closed => ht_put_transitive(spec, DEFAULT_GROUP_CAP)?,
                };
                out.push(record(&r));
            }
            let v = Value::Exact(ht_put_closed_form(spec));
            out.push((exact_record(task, m, gamma, t.t(), "formula", v.clone(), Some("k=1".into())), v));
        }
        Source::Cardioid(spec) => {
            for &method in methods {
                if method != MethodArg::Closed {
                    return Err(not_applicable(method, "the cardioid task (continuous parameter space)"));
                }
            }
            out.push(record(&cardioid_put_transitive(spec)?));
            let (v, k) = cardioid_put_closed_form(spec);
            let v = Value::Real(v);
            out.push((exact_record(task, m, gamma, t.t(), "formula", v.clone(), Some(format!("k={k}"))), v));
        }
        Source::Problem { problem, group, objective, .. } => {
            let defaults = match (objective, group.as_ref().map(|g| g.natural_action().is_transitive())) {
                (ObjectiveArg::Bayes, Some(true)) => vec![MethodArg::Vertex, MethodArg::Lp, MethodArg::Closed],
                (ObjectiveArg::Bayes, _) => vec![MethodArg::Vertex, MethodArg::Lp],
                (ObjectiveArg::Minimax, _) => vec![MethodArg::Vertex],
            };
            let methods = if methods.is_empty() { defaults } else { methods.to_vec() };
            let set = || match group {
                Some(g) => VertexSet::invariant(g, t, cap),
                None => VertexSet::full(m, t, cap),
            };
            for method in methods {
                let r = match (objective, method) {
                    (ObjectiveArg::Bayes, _) => {
                        let prior = problem.require_prior().map_err(|_| CliError::Parse("Bayes objective needs a prior".into()))?;
                        let obj = BayesObjective { problem, prior, g_invariant: group.is_some() };
                        match method {
                            MethodArg::Vertex => put_over_vertices(&obj, &set()?)?,
                            MethodArg::Lp => {
                                let u = linear_coefficients(Utility::BayesRisk { problem, prior }, m, t).map_err(parse_err)?;
                                put_by_lp(&u, m, t, group.as_ref(), Sense::Minimize)?
                            }
                            MethodArg::Closed => {
                                let g = group.as_ref().ok_or_else(|| not_applicable(method, "a problem without --group"))?;
                                let poly = InvariantPolytope::new(g.clone(), t)?;
                                put_transitive_closed_form(&poly, Sense::Minimize, |o, w| {
                                    obj.evaluate(&poly.orbit_channel(o, w).expect("transitive vertex weight"))
                                })?
                            }
                        }
                    }
                    (ObjectiveArg::Minimax, MethodArg::Vertex) => {
                        let obj = MinimaxObjective { problem, prior: problem.prior(), g_invariant: group.is_some() };
                        put_over_vertices(&obj, &set()?)?
                    }
                    (ObjectiveArg::Minimax, other) => return Err(not_applicable(other, "minimax risk (no additive extension)")),
                };
                out.push(record(&r));
            }
        }
    }
    Ok(out)
}

fn agree(a: &Value, b: &Value, tolerance: f64) -> bool {
    match (a, b) {
        (Value::Exact(x), Value::Exact(y)) => x == y,
        _ => (a.to_f64() - b.to_f64()).abs() <= tolerance,
    }
}

fn put(
    source: &SourceArgs,
    methods: &[MethodArg],
    tolerance: &str,
    output: &OutputArgs,
    cap: usize,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let tolerance = rational::to_f64(&parse_number(tolerance)?);
    let (src, config_methods) = resolve_source(source, stderr)?;
    let methods = if methods.is_empty() { config_methods } else { methods.to_vec() };
    let results = solve(&src, &methods, cap)?;
    let records: Vec<PutRecord> = results.iter().map(|(r, _)| r.clone()).collect();
    let bytes = match output.format {
        Format::Json => to_json(&records),
        Format::Csv => {
            let mut buf = Vec::new();
            formats::write_put_csv(&records, &mut buf).map_err(|e| CliError::Other(e.to_string()))?;
            buf
        }
    };
    emit(output.out.as_deref(), &bytes, stdout)?;
    let (first, first_value) = &results[0];
    for (r, v) in &results[1..] {
        if !agree(first_value, v, tolerance) {
            return Err(CliError::Disagreement(format!("{} gave {}, {} gave {}", first.method, first.value, r.method, r.value)));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct AuditOutput {
    task: String,
    m: usize,
    t: String,
    samples: u64,
    seed: u64,
    put: String,
    min_gap: Option<String>,
    violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<Violation>,
}

#[derive(Serialize)]
struct Violation {
    sample: u64,
    gap: f64,
    channel: ChannelFile,
}

fn audit(
    source: &SourceArgs,
    samples: u64,
    seed: u64,
    tolerance: &str,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let tolerance = parse_number(tolerance)?;
    let (src, _) = resolve_source(source, stderr)?;
    let (m, t) = (src.m(), src.level().clone());
    let ht;
    let (problem, prior) = match &src {
        Source::Ht(spec) => {
            ht = ht_problem(spec);
            (&ht, ht.prior().expect("uniform prior attached"))
        }
        Source::Problem { problem, objective: ObjectiveArg::Bayes, .. } => {
            (problem, problem.require_prior().map_err(|_| CliError::Parse("audit needs a prior".into()))?)
        }
        Source::Problem { .. } => return Err(CliError::Parse("audit supports the Bayes objective only".into())),
        Source::Cardioid(_) => return Err(CliError::Parse("audit is not available for the cardioid task".into())),
    };
    let obj = BayesObjective { problem, prior, g_invariant: false };
    let u = linear_coefficients(Utility::BayesRisk { problem, prior }, m, &t).map_err(parse_err)?;
    let put = put_by_lp(&u, m, &t, None, Sense::Minimize)?;
    let mut report = AuditOutput {
        task: src.task().into(),
        m,
        t: rational::format(t.t()),
        samples,
        seed,
        put: put.value.to_string(),
        min_gap: None,
        violations: 0,
        violation: None,
    };
    match random_channel_audit::<_, ChaCha8Rng>(&obj, &t, &put, samples, seed, &tolerance) {
        Ok(r) => {
            report.min_gap = r.min_gap.map(|g| g.to_string());
            emit(out, &to_json(&report), stdout)
        }
        Err(PutError::AuditFailure { sample, gap, channel }) => {
            report.violations = 1;
            report.violation = Some(Violation { sample, gap, channel: ChannelFile::from_channel(&channel) });
            emit(out, &to_json(&report), stdout)?;
            Err(CliError::Audit(format!("sample {sample} beats the trade-off by {gap}")))
        }
        Err(e) => Err(e.into()),
    }
}
