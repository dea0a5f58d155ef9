use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use chowforge_cli::{run, Command, JobError, JobSpec, Report};
use chowforge_core::MatroidSpec;
use clap::{Parser, ValueEnum};
use serde_json::Value;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Exact Chow-ring, K-theory and positivity computations for matroids.
#[derive(Debug, Parser)]
#[command(name = "chowforge", version)]
struct Args {
    command: Command,
    /// Matroid JSON: a file path, or the JSON text itself.
    #[arg(long)]
    matroid: String,
    /// Divisor expression, e.g. "2*alpha - x{1,2} - x{3,4}".
    #[arg(long, allow_hyphen_values = true)]
    divisor: Option<String>,
    /// Command parameters as JSON text or a path to a JSON file.
    #[arg(long)]
    params: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Cap on flat and chain-monomial counts.
    #[arg(long)]
    limit: Option<usize>,
    /// Leave the timings out of the report.
    #[arg(long)]
    no_timings: bool,
}

fn json_arg(what: &str, text: &str) -> Result<Value, JobError> {
    let body = if text.trim_start().starts_with(['{', '[']) {
        text.to_string()
    } else {
        fs::read_to_string(text).map_err(|e| JobError::new("IO", format!("cannot read {what} file {text}: {e}")))?
    };
    serde_json::from_str(&body).map_err(|e| JobError::new("PARSE", format!("{what}: {e}")))
}

fn job(args: &Args) -> Result<JobSpec, JobError> {
    let matroid: MatroidSpec = serde_json::from_value(json_arg("matroid", &args.matroid)?)
        .map_err(|e| JobError::new("PARSE", format!("matroid: {e}")))?;
    let mut params = match &args.params {
        Some(p) => json_arg("params", p)?,
        None => Value::Null,
    };
    if let Some(d) = &args.divisor {
        match &mut params {
            Value::Null => params = serde_json::json!({"divisor": d}),
            Value::Object(map) => {
                map.insert("divisor".into(), d.clone().into());
            }
            _ => return Err(JobError::new("PARSE", "--divisor needs params to be a JSON object")),
        }
    }
    Ok(JobSpec {
        matroid,
        command: args.command,
        params,
        limit: args.limit,
    })
}

fn render(report: &Report, args: &Args) -> Result<String, JobError> {
    match args.format {
        Format::Json => {
            let v = if args.no_timings { report.deterministic() } else { report.to_json() };
            Ok(serde_json::to_string_pretty(&v).expect("json") + "\n")
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in report.csv_rows() {
                w.write_record(&row).map_err(|e| JobError::new("IO", e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| JobError::new("IO", e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("utf-8"))
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), JobError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| JobError::new("IO", format!("cannot write {}: {e}", path.display()))),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = job(&args).and_then(|j| run(&j)).and_then(|r| {
        emit(&render(&r, &args)?, args.out.as_ref())?;
        Ok(r)
    });
    match outcome {
        Ok(r) if r.suite_failed() => ExitCode::from(4),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            let text = serde_json::to_string_pretty(&e.to_json()).expect("json");
            eprintln!("{text}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
