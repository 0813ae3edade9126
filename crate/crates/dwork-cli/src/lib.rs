//! The `dwork` command line. [`run`] is the whole program short of writing
//! to the terminal, so tests drive it directly.

pub mod args;
pub mod commands;
pub mod fixtures;
pub mod render;
pub mod suites;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use dwork_core::cy3::cy3_dims;
use dwork_core::{model, DworkError};
use serde_json::{json, Value};

pub use args::{Cli, Command, Format, RunConfig, Suite, Target};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_STRUCTURAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: &str) -> Outcome {
        let usage = Cli::command().render_usage().to_string();
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {}\n\n{}\n", msg, usage) }
    }

    fn error(e: &DworkError) -> Outcome {
        let code = if e.is_structural() { EXIT_STRUCTURAL } else { EXIT_MISMATCH };
        let kind = if e.is_structural() { "structural error" } else { "error" };
        Outcome { code, stdout: String::new(), stderr: format!("{}: {}\n", kind, e) }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
                }
                _ => {
                    let mut stderr = text;
                    if !stderr.contains("Usage:") {
                        stderr.push_str(&format!("\n{}\n", Cli::command().render_usage()));
                    }
                    Outcome { code: EXIT_USAGE, stdout: String::new(), stderr }
                }
            };
        }
    };
    match RunConfig::try_from(cli) {
        Ok(cfg) => run_config(&cfg),
        Err(msg) => Outcome::usage(&msg),
    }
}

pub fn run_config(cfg: &RunConfig) -> Outcome {
    match execute(cfg) {
        Ok(o) => o,
        Err(e) => Outcome::error(&e),
    }
}

fn execute(cfg: &RunConfig) -> dwork_core::Result<Outcome> {
    let (emit, envelope) = match cfg.target {
        Target::H(h) => {
            let emit = commands::cy3(h)?;
            let env = json!({
                "n": 3,
                "h": h,
                "dim": cy3_dims(h).2,
                "ambient_vars": Value::Array(Vec::new()),
                "relation": Value::Null,
                "meta": { "c_mode": "none", "rule_extrapolated": false },
            });
            (emit, env)
        }
        Target::N(n) => {
            let m = model(n, &cfg.c_mode)?;
            let fixture = match &cfg.command {
                Command::Verify | Command::Fixtures { .. } => {
                    let dir = fixtures::fixture_dir(cfg.fixtures.as_deref());
                    match fixtures::load(&dir, n) {
                        Ok(f) => f,
                        Err(msg) => return Ok(Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {}\n", msg) }),
                    }
                }
                _ => None,
            };
            let emit = match &cfg.command {
                Command::Build => commands::build(&m)?,
                Command::Ra => commands::ra(&m)?,
                Command::Basis => commands::basis(&m)?,
                Command::Sl2 => commands::sl2(&m)?,
                Command::Weights => commands::weight_cmd(&m)?,
                Command::Brackets => commands::brackets(&m)?,
                Command::Action => match commands::action(&m) {
                    Err(DworkError::IndexOutOfRange(msg)) => {
                        return Ok(Outcome::usage(&format!("action formulas unavailable: {}", msg)))
                    }
                    r => r?,
                },
                Command::Decompose => commands::decompose(&m)?,
                Command::Verify => commands::verify(&m, cfg.suite, fixture.as_ref())?,
                Command::Fixtures { emit } => commands::fixture_cmd(&m, fixture.as_ref(), *emit)?,
                Command::Cy3 => unreachable!("cy3 validated to take --h"),
            };
            let p = m.params();
            let env = json!({
                "n": n,
                "dim": p.d,
                "ambient_vars": m.spec().vars().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "relation": fixtures::relation_string(&m),
                "meta": { "c_mode": p.c_mode.label(), "rule_extrapolated": p.rule_extrapolated() },
            });
            (emit, env)
        }
    };
    let code = if emit.ok { EXIT_OK } else { EXIT_MISMATCH };
    let stdout = match cfg.format {
        Format::Json => {
            if matches!(cfg.command, Command::Fixtures { emit: true }) {
                serde_json::to_string_pretty(&emit.object).expect("serializable") + "\n"
            } else {
                let mut env = envelope;
                env["object"] = emit.object;
                serde_json::to_string_pretty(&env).expect("serializable") + "\n"
            }
        }
        Format::Text => {
            if matches!(cfg.command, Command::Fixtures { emit: true }) {
                emit.text
            } else {
                format!("{}{}", header(&envelope), emit.text)
            }
        }
        Format::Latex => emit.latex,
    };
    Ok(Outcome { code, stdout, stderr: String::new() })
}

fn header(env: &Value) -> String {
    let rel = env["relation"].as_str().unwrap_or("none");
    match env.get("h") {
        Some(h) => format!("# cy3 h = {}, dim T = {}\n", h, env["dim"]),
        None => format!(
            "# n = {}, dim T = {}, c = {}, relation: {}{}\n",
            env["n"],
            env["dim"],
            env["meta"]["c_mode"].as_str().unwrap_or(""),
            rel,
            if env["meta"]["rule_extrapolated"] == true { " (extrapolated chart rule)" } else { "" }
        ),
    }
}
