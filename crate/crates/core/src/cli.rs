//! Command-line front end. Output is JSON with sorted keys and floats rounded
//! to 12 significant digits; exit code 1 signals a domain violation (or a
//! failed check), 2 a parse error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::field::VectorField;
use crate::lie::{self, ChainSpec, FlowRequest, DEFAULT_ORDER_CAP};
use crate::multiindex::MultiIndex;
use crate::{duality, relations, suite, C64};

/// Above this `|t|·m(A_x)` the truncation order grows quickly; warn.
const NEAR_BOUNDARY: f64 = 0.95;

#[derive(Debug, Parser)]
#[command(name = "lieflow", version, about = "Lie-series flows and realized bialgebra checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Flow of a field from x0 for time t.
    Flow(FlowArgs),
    /// m(A_x) and the certified radius 1/m(A_x).
    Radius(RadiusArgs),
    /// Direct and path-sum evaluation of ε(D_{A1}∘…∘D_{An}(f_β^α)) with its bound.
    Pathsum(PathsumArgs),
    /// Seeded verification suites.
    #[command(subcommand)]
    Check(CheckCommand),
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long)]
    pub field: PathBuf,
    /// Comma-separated complex coordinates, e.g. `1,0` or `0.5+0.1i`.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
    /// Complex flow time.
    #[arg(long, allow_hyphen_values = true)]
    pub t: String,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_ORDER_CAP)]
    pub order_cap: usize,
}

#[derive(Debug, Args)]
pub struct RadiusArgs {
    #[arg(long)]
    pub field: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub x0: String,
}

#[derive(Debug, Args)]
pub struct PathsumArgs {
    /// Field files A_1 … A_n; A_n acts first.
    #[arg(long, num_args = 0..)]
    pub fields: Vec<PathBuf>,
    /// Comma-separated multi-index.
    #[arg(long)]
    pub alpha: String,
    #[arg(long)]
    pub beta: String,
    /// Cap on intermediate indices; defaults to one that always suffices.
    #[arg(long)]
    pub cap: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    Duality {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 200)]
        pairing_cases: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    Relations {
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, default_value_t = 4)]
        maxdeg: u32,
    },
    Properties {
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

/// Why a command stopped.
#[derive(Debug)]
enum Failure {
    Parse(String),
    Domain(String),
    CheckFailed(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Parse(m),
            other => Failure::Domain(other.to_string()),
        }
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (no whitespace). `i` alone is `0+1i`.
pub fn parse_complex(s: &str) -> Result<C64, Error> {
    let bad = || Error::Parse(format!("invalid complex literal {s:?}"));
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(bad());
    }
    let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let Some(body) = s.strip_suffix('i') else {
        return Ok(C64::new(num(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let coeff = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => num(t),
    };
    match split {
        Some(k) => Ok(C64::new(num(&body[..k])?, coeff(&body[k..])?)),
        None => Ok(C64::new(0.0, coeff(body)?)),
    }
}

pub fn parse_point(s: &str) -> Result<Vec<C64>, Error> {
    s.split(',').map(parse_complex).collect()
}

pub fn parse_index(s: &str) -> Result<MultiIndex, Error> {
    let v = s
        .split(',')
        .map(|t| t.parse::<u32>().map_err(|_| Error::Parse(format!("invalid multi-index {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    MultiIndex::new(v).map_err(|e| Error::Parse(e.to_string()))
}

pub fn read_field(path: &Path) -> Result<VectorField, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Rounds to 12 significant digits; non-finite values become `null`.
fn round12(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    json!(r)
}

fn normalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => round12(n.as_f64().expect("f64")),
        Value::Array(a) => Value::Array(a.into_iter().map(normalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, normalize(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

fn complex_json(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn ensure_dim(expected: usize, found: usize) -> Result<(), Failure> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found }.into());
    }
    Ok(())
}

fn flow_cmd(a: &FlowArgs, err: &mut dyn Write) -> Result<Value, Failure> {
    let field = read_field(&a.field)?;
    let x0 = parse_point(&a.x0)?;
    let t = parse_complex(&a.t)?;
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(Failure::Parse(format!("tolerance must be positive, got {}", a.tol)));
    }
    ensure_dim(field.p(), x0.len())?;
    let m = field.shift(&x0)?.m_norm();
    if t.norm() * m > NEAR_BOUNDARY && t.norm() * m < 1.0 {
        let _ = writeln!(
            err,
            "warning: |t|·m(A_x) = {:.4} is close to 1; the truncation order may be very large",
            t.norm() * m
        );
    }
    let mut req = FlowRequest::new(field, x0, t, a.tol);
    req.order_cap = a.order_cap;
    let r = lie::flow(&req)?;
    Ok(json!({
        "y": r.y.iter().copied().map(complex_json).collect::<Vec<_>>(),
        "radius": r.radius,
        "order": r.truncation_order,
        "tail": r.tail_bound,
    }))
}

fn radius_cmd(a: &RadiusArgs) -> Result<Value, Failure> {
    let field = read_field(&a.field)?;
    let x0 = parse_point(&a.x0)?;
    ensure_dim(field.p(), x0.len())?;
    let ax = field.shift(&x0)?;
    Ok(json!({ "m": ax.m_norm(), "radius": ax.radius() }))
}

fn pathsum_cmd(a: &PathsumArgs) -> Result<Value, Failure> {
    let fields = a.fields.iter().map(|p| read_field(p)).collect::<Result<Vec<_>, _>>()?;
    let alpha = parse_index(&a.alpha)?;
    let beta = parse_index(&a.beta)?;
    let c = ChainSpec::new(fields, alpha, beta)?;
    let cap = a.cap.unwrap_or_else(|| lie::default_cap(&c));
    let direct = lie::eps_chain_direct(&c)?;
    let pathsum = lie::eps_chain_pathsum(&c, cap)?;
    Ok(json!({
        "direct": complex_json(direct),
        "pathsum": complex_json(pathsum),
        "bound": lie::chain_bound(&c),
    }))
}

fn check_cmd(c: &CheckCommand) -> Result<Value, Failure> {
    let (value, passed) = match *c {
        CheckCommand::Duality { trials, pairing_cases, seed } => {
            let d = duality::run_duality_trials(trials, seed)?;
            let p = duality::run_pairing_trials(pairing_cases, seed)?;
            let passed = d.failures.is_empty() && p.failures.is_empty();
            let mut v = to_value(&d);
            v["pairing"] = to_value(&p);
            v["seed"] = json!(seed);
            (v, passed)
        }
        CheckCommand::Relations { p, maxdeg } => {
            let s = relations::relations_summary(p, maxdeg)?;
            (to_value(&s), s.passed())
        }
        CheckCommand::Properties { seed } => {
            let s = suite::run(seed)?;
            (to_value(&s), s.passed)
        }
    };
    if passed {
        Ok(value)
    } else {
        Err(Failure::CheckFailed(value))
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn emit(out: &mut dyn Write, v: Value) {
    let text = serde_json::to_string_pretty(&normalize(v)).expect("json");
    let _ = writeln!(out, "{text}");
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Flow(a) => flow_cmd(a, err),
        Command::Radius(a) => radius_cmd(a),
        Command::Pathsum(a) => pathsum_cmd(a),
        Command::Check(c) => check_cmd(c),
    };
    match result {
        Ok(v) => {
            emit(out, v);
            0
        }
        Err(Failure::Parse(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Domain(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::CheckFailed(v)) => {
            emit(out, v);
            let _ = writeln!(err, "error: check failed");
            1
        }
    }
}
