use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use applicative::driver::{exit, render_text, run, type_cmd, type_json, Backend, RunError, RunRequest, Selection};
use applicative::ski::SkiMode;
use clap::error::ErrorKind;
use clap::Parser;

/// Evaluate applicative-language terms by β-reduction, SKI combinators,
/// categorical combinators or supercombinators.
///
/// Reads the program from FILE, from --expr, or from standard input.
/// Exit status: 0 ok, 1 usage, 2 parse, 3 type, 4 evaluation (including
/// an exhausted step budget), 5 backends disagree.
#[derive(Debug, Parser)]
#[command(name = "applc", version)]
struct Cli {
    /// Source file; standard input when absent.
    file: Option<PathBuf>,

    /// Program text given inline.
    #[arg(short, long, conflicts_with = "file")]
    expr: Option<String>,

    /// beta, ski, cam, sc or all.
    #[arg(long, default_value = "beta", value_parser = parse_selection)]
    backend: Selection,

    /// Print every reduction step.
    #[arg(long)]
    trace: bool,

    /// Print the compiled form instead of evaluating; defaults to the
    /// --backend choice.
    #[arg(long, value_name = "BACKEND", num_args = 0..=1, value_parser = parse_backend)]
    emit: Option<Option<Backend>>,

    #[arg(long, default_value = "naive", value_parser = parse_ski_mode)]
    ski_mode: SkiMode,

    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    max_steps: u64,

    /// Print the principal type instead of evaluating.
    #[arg(long = "type", conflicts_with_all = ["emit", "trace"])]
    type_only: bool,

    /// Machine-readable report.
    #[arg(long)]
    json: bool,
}

fn parse_selection(s: &str) -> Result<Selection, String> {
    s.parse()
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse()
}

fn parse_ski_mode(s: &str) -> Result<SkiMode, String> {
    s.parse()
}

fn read_source(cli: &Cli) -> Result<String, String> {
    if let Some(e) = &cli.expr {
        return Ok(e.clone());
    }
    match &cli.file {
        Some(path) => std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display())),
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).map_err(|e| format!("cannot read stdin: {e}"))?;
            Ok(buf)
        }
    }
}

fn fail(err: &RunError) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::OK,
                _ => exit::USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let source = match read_source(&cli) {
        Ok(s) => s,
        Err(msg) => return fail(&RunError::Usage(msg)),
    };

    if cli.type_only {
        return match type_cmd(&source) {
            Ok(ty) if cli.json => {
                println!("{}", type_json(&source, &ty));
                ExitCode::SUCCESS
            }
            Ok(ty) => {
                println!("{ty}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        };
    }

    let mut req = RunRequest::new(source, cli.backend);
    req.trace = cli.trace;
    req.ski_mode = cli.ski_mode;
    req.max_steps = usize::try_from(cli.max_steps).unwrap_or(usize::MAX);
    if let Some(emit) = cli.emit {
        req.emit_only = true;
        if let Some(b) = emit {
            req.selection = Selection::One(b);
        }
    }

    match run(&req) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", render_text(&report));
            }
            let code = report.exit_code();
            if code == exit::DISAGREEMENT {
                eprintln!("error: backends disagree");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => fail(&e),
    }
}
