//! Runs one source term through any of the four evaluators and reports
//! the results side by side.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cam::{cam_eval_traced, compile_term, trace_lines};
use crate::debruijn::DebruijnError;
use crate::eval::{reduce_traced, EvalConfig};
use crate::outcome::{EvalError, Status};
use crate::ski::{ski_compile, ski_reduce_traced, SkiMode};
use crate::superc::{lift, print_program, sc_reduce_traced, LiftError};
use crate::syntax::{parse, print, print_resugared, ParseError, Term};
use crate::types::{infer, TypeEnv, TypeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Beta,
    Ski,
    Cam,
    Sc,
}

impl Backend {
    pub const ALL: [Backend; 4] = [Backend::Beta, Backend::Ski, Backend::Cam, Backend::Sc];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Beta => "beta",
            Backend::Ski => "ski",
            Backend::Cam => "cam",
            Backend::Sc => "sc",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Backend::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| format!("unknown backend '{s}' (expected beta, ski, cam, sc or all)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    One(Backend),
    All,
}

impl Selection {
    pub fn backends(self) -> Vec<Backend> {
        match self {
            Selection::One(b) => vec![b],
            Selection::All => Backend::ALL.to_vec(),
        }
    }
}

impl FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "all" {
            Ok(Selection::All)
        } else {
            s.parse().map(Selection::One)
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunRequest {
    /// Program text, not a path.
    pub source: String,
    pub selection: Selection,
    pub trace: bool,
    /// Print compiled forms without evaluating.
    pub emit_only: bool,
    pub ski_mode: SkiMode,
    pub max_steps: usize,
}

impl RunRequest {
    pub fn new(source: impl Into<String>, selection: Selection) -> Self {
        RunRequest {
            source: source.into(),
            selection,
            trace: false,
            emit_only: false,
            ski_mode: SkiMode::Naive,
            max_steps: EvalConfig::default().max_steps,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendReport {
    pub name: String,
    pub compiled: String,
    /// Absent when only compiling.
    pub result: Option<String>,
    pub steps: usize,
    pub status: Option<Status>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<String>,
}

impl BackendReport {
    pub fn int_result(&self) -> Option<i64> {
        match self.status {
            Some(Status::NormalForm) => self.result.as_deref()?.parse().ok(),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub source: String,
    pub backends: Vec<BackendReport>,
    /// Whether all integer results are equal; present only when at least
    /// two backends produced an integer.
    pub agreement: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    #[error("{backend}: free variable '{name}' (this backend needs a closed term)")]
    FreeVariable { backend: Backend, name: String },
    #[error("{backend}: {error}")]
    Eval { backend: Backend, error: EvalError },
}

pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const TYPE: i32 = 3;
    pub const EVAL: i32 = 4;
    pub const DISAGREEMENT: i32 = 5;
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => exit::USAGE,
            RunError::Parse(_) => exit::PARSE,
            RunError::Type(_) => exit::TYPE,
            RunError::FreeVariable { .. } | RunError::Eval { .. } => exit::EVAL,
        }
    }
}

impl RunReport {
    /// Disagreement wins over an exhausted budget.
    pub fn exit_code(&self) -> i32 {
        if self.agreement == Some(false) {
            exit::DISAGREEMENT
        } else if self.backends.iter().any(|b| b.status == Some(Status::BudgetExhausted)) {
            exit::EVAL
        } else {
            exit::OK
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<RunReport> {
        serde_json::from_str(text)
    }
}

fn agreement(backends: &[BackendReport]) -> Option<bool> {
    let ints: Vec<i64> = backends.iter().filter_map(BackendReport::int_result).collect();
    (ints.len() >= 2).then(|| ints.windows(2).all(|w| w[0] == w[1]))
}

fn eval_err(backend: Backend) -> impl Fn(EvalError) -> RunError {
    move |error| RunError::Eval { backend, error }
}

fn run_backend(backend: Backend, term: &Term, req: &RunRequest) -> Result<BackendReport, RunError> {
    let limit = req.max_steps;
    let mut report = BackendReport {
        name: backend.name().into(),
        compiled: String::new(),
        result: None,
        steps: 0,
        status: None,
        trace: Vec::new(),
    };
    match backend {
        Backend::Beta => {
            report.compiled = print(term);
            if !req.emit_only {
                let (out, trace) =
                    reduce_traced(term, &EvalConfig::with_max_steps(limit)).map_err(eval_err(backend))?;
                report.result = Some(print_resugared(&out.result));
                (report.steps, report.status, report.trace) = (out.steps, Some(out.status), trace);
            }
        }
        Backend::Ski => {
            let code = ski_compile(term, req.ski_mode);
            report.compiled = code.to_string();
            if !req.emit_only {
                let (out, trace) = ski_reduce_traced(&code, limit).map_err(eval_err(backend))?;
                report.result = Some(out.result.to_string());
                (report.steps, report.status, report.trace) = (out.steps, Some(out.status), trace);
            }
        }
        Backend::Cam => {
            let code = compile_term(term).map_err(|e| match e {
                DebruijnError::FreeVariable(name) => RunError::FreeVariable { backend, name },
                DebruijnError::DanglingIndex { .. } => unreachable!("encoding never produces dangling indices"),
            })?;
            report.compiled = code.to_string();
            if !req.emit_only {
                let (out, steps) = cam_eval_traced(&code, limit).map_err(eval_err(backend))?;
                report.result = Some(out.result.to_string());
                report.trace = trace_lines(&code, &steps)
                    .into_iter()
                    .enumerate()
                    .map(|(i, line)| match i.checked_sub(1).map(|j| steps[j].rule) {
                        Some(rule) => format!("{line}  ({rule})"),
                        None => line,
                    })
                    .collect();
                (report.steps, report.status) = (out.steps, Some(out.status));
            }
        }
        Backend::Sc => {
            let program = lift(term).map_err(|LiftError::FreeVariable(name)| RunError::FreeVariable { backend, name })?;
            report.compiled = print_program(&program);
            if !req.emit_only {
                let (out, trace) = sc_reduce_traced(&program, limit).map_err(eval_err(backend))?;
                report.result = Some(print(&out.result));
                (report.steps, report.status, report.trace) = (out.steps, Some(out.status), trace);
            }
        }
    }
    if !req.trace {
        report.trace.clear();
    }
    Ok(report)
}

/// Parses the source and runs every selected backend. Backends run on
/// separate threads; results keep the fixed beta, ski, cam, sc order.
pub fn run(req: &RunRequest) -> Result<RunReport, RunError> {
    if req.max_steps == 0 {
        return Err(RunError::Usage("--max-steps must be at least 1".into()));
    }
    if req.emit_only && req.selection == Selection::All {
        return Err(RunError::Usage("--emit needs a single backend".into()));
    }
    let term = parse(&req.source)?;
    let backends = req.selection.backends();
    let results: Vec<Result<BackendReport, RunError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = backends
            .iter()
            .map(|&b| {
                let term = &term;
                scope.spawn(move || run_backend(b, term, req))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("backend thread panicked")).collect()
    });
    let backends = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let agreement = if req.emit_only { None } else { agreement(&backends) };
    Ok(RunReport { source: req.source.clone(), backends, agreement })
}

/// Human-readable report. A single evaluated backend prints its trace (if
/// any) and then the result alone, so output composes with shell tools.
pub fn render_text(report: &RunReport) -> String {
    let mut out = String::new();
    let single = report.backends.len() == 1;
    for b in &report.backends {
        let Some(result) = &b.result else {
            if !single {
                out.push_str(&format!("{}:\n", b.name));
            }
            out.push_str(&b.compiled);
            out.push('\n');
            continue;
        };
        if !single && !b.trace.is_empty() {
            out.push_str(&format!("-- {}\n", b.name));
        }
        for line in &b.trace {
            out.push_str(line);
            out.push('\n');
        }
        let exhausted = b.status == Some(Status::BudgetExhausted);
        if single {
            out.push_str(result);
            out.push('\n');
            if exhausted {
                out.push_str(&format!("budget exhausted after {} steps\n", b.steps));
            }
        } else {
            let status = b.status.map(|s| s.to_string()).unwrap_or_default();
            out.push_str(&format!("{}: {} ({} steps, {})\n", b.name, result, b.steps, status));
        }
    }
    if let Some(a) = report.agreement {
        if !single {
            out.push_str(&format!("agreement: {a}\n"));
        }
    }
    out
}

/// Principal type of the source term, printed.
pub fn type_cmd(source: &str) -> Result<String, RunError> {
    let term = parse(source)?;
    Ok(infer(&term, &TypeEnv::new())?.to_string())
}

/// `{"source": ..., "type": ...}`
pub fn type_json(source: &str, ty: &str) -> String {
    serde_json::json!({ "source": source, "type": ty }).to_string()
}
