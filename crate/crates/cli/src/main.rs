// SPDX-License-Identifier: Apache-2.0

//! `hkt`: run verification suites and emit `report-v1` documents.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hkt_core::checks::{self, ModuliOptions, DEFAULT_SEED};
use hkt_core::report::Format;
use hkt_core::{HopfSpec, HypercomplexFrame, TorusSpec, VerificationReport};

/// Directory used for reports when `--out` is not given.
const REPORT_DIR_ENV: &str = "HKT_REPORT_DIR";

#[derive(Parser, Debug)]
#[command(name = "hkt", version, about = "Exact and numerical checks for HKT and (4,4) geometry")]
#[command(args_override_self = true)]
struct Cli {
    /// Seed for every random draw; printed on stderr.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// TOML file whose keys mirror the flags. Flags on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Write the report here as well as to stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json", value_parser = parse_format)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact checks on the quaternionic Hopf surface `(ℍ∖{0})/⟨q⟩`.
    VerifyHopf {
        /// Rational multiplier q > 1, e.g. `2` or `3/2`.
        #[arg(long)]
        q: String,
        #[command(flatten)]
        output: Output,
    },
    /// Exact checks of the flat hyperkähler control.
    VerifyFlat {
        #[command(flatten)]
        output: Output,
    },
    /// Instanton tangent model on the spectral 4-torus at the trivial connection.
    Moduli {
        #[arg(long, default_value_t = 4)]
        grid: usize,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Also run the ASD flow from a perturbation of this size.
        #[arg(long, value_name = "EPS")]
        flow: Option<f64>,
        /// Save the final connection as a field snapshot.
        #[arg(long, value_name = "PATH")]
        snapshot: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Degree and slope of a constant curvature form, e.g. `--f "-2*pi*i*dx01"`.
    Degree {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true, default_value = "dx01 + dx23")]
        omega: String,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Render a saved report, or run every suite when no input is given.
    Report {
        #[arg(long, default_value = "markdown", value_parser = parse_format)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
        #[arg(long, default_value = "2")]
        q: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse().map_err(|e: hkt_core::Error| e.to_string())
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<hkt_core::Error> for Failure {
    fn from(e: hkt_core::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let argv = match with_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    eprintln!("seed: {}", cli.seed);
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let seed = cli.seed;
    let (rep, output, name) = match cli.command {
        Command::VerifyHopf { q, output } => {
            let spec: HopfSpec = q.parse().map_err(|e: hkt_core::Error| Failure::Usage(e.to_string()))?;
            (checks::hopf_suite(&spec, seed), output, "verify-hopf")
        }
        Command::VerifyFlat { output } => (checks::flat_suite(seed), output, "verify-flat"),
        Command::Moduli { grid, rank, tol, flow, snapshot, output } => {
            TorusSpec::new(grid, rank, HypercomplexFrame::left()).map_err(|e| Failure::Usage(e.to_string()))?;
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
            }
            if let Some(eps) = flow {
                if !(eps > 0.0 && eps.is_finite()) {
                    return Err(Failure::Usage(format!("--flow must be positive, got {eps}")));
                }
            }
            let opts = ModuliOptions { grid, rank, tol, flow, snapshot };
            (checks::moduli_suite(&opts, seed), output, "moduli")
        }
        Command::Degree { f, omega, rank, output } => {
            for spec in [&f, &omega] {
                let form = hkt_core::bundle::parse_form_spec(spec, 3).map_err(|e| Failure::Usage(e.to_string()))?;
                if form.degree() != 2 {
                    return Err(Failure::Usage(format!("{spec:?} is a {}-form; a 2-form is required", form.degree())));
                }
            }
            if rank == 0 {
                return Err(Failure::Usage("--rank must be at least 1".into()));
            }
            (checks::degree_suite(&f, &omega, rank, seed), output, "degree")
        }
        Command::Report { format, input, q, out } => {
            let rep = match input {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    VerificationReport::from_json(&text)?
                }
                None => {
                    let spec: HopfSpec = q.parse().map_err(|e: hkt_core::Error| Failure::Usage(e.to_string()))?;
                    checks::full_suite(&spec, seed)
                }
            };
            (rep, Output { out, format }, "report")
        }
    };
    emit(&rep, &output, name)?;
    Ok(rep.passed())
}

fn emit(rep: &VerificationReport, output: &Output, name: &str) -> Result<(), Failure> {
    let path = output.out.clone().or_else(|| {
        std::env::var_os(REPORT_DIR_ENV).map(|dir| {
            let ext = match output.format {
                Format::Json => "json",
                Format::Markdown => "md",
            };
            Path::new(&dir).join(format!("{name}.{ext}"))
        })
    });
    let text = checks::emit(rep, path.as_deref(), output.format)?;
    let mut stdout = std::io::stdout().lock();
    // a closed pipe downstream is not a check failure
    let _ = writeln!(stdout, "{text}");
    Ok(())
}

/// Expand `--config` into flags placed before the user's own, so the user's
/// flags override them. Top-level keys are global flags; a table named after
/// a subcommand holds that subcommand's flags.
fn with_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let mut path = None;
    for (i, a) in argv.iter().enumerate() {
        if a == "--config" {
            path = argv.get(i + 1).cloned();
        } else if let Some(p) = a.strip_prefix("--config=") {
            path = Some(p.to_string());
        }
    }
    let Some(path) = path else { return Ok(argv) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    let table: toml::Table = text.parse().map_err(|e| format!("{path}: {e}"))?;
    let subcommands = ["verify-hopf", "verify-flat", "moduli", "degree", "report"];
    let pos = argv.iter().position(|a| subcommands.contains(&a.as_str()));
    let mut global = Vec::new();
    let mut local = Vec::new();
    for (key, value) in &table {
        match value {
            toml::Value::Table(sub) => {
                if !subcommands.contains(&key.as_str()) {
                    return Err(format!("{path}: unknown section [{key}]"));
                }
                if pos.is_some_and(|p| argv[p] == *key) {
                    for (k, v) in sub {
                        push_flag(&mut local, k, v)?;
                    }
                }
            }
            v => push_flag(&mut global, key, v)?,
        }
    }
    let Some(pos) = pos else {
        let mut out = vec![argv[0].clone()];
        out.extend(global);
        out.extend(argv.into_iter().skip(1));
        return Ok(out);
    };
    let mut out = vec![argv[0].clone()];
    out.extend(global);
    out.extend(argv[1..=pos].iter().cloned());
    out.extend(local);
    out.extend(argv[pos + 1..].iter().cloned());
    Ok(out)
}

fn push_flag(out: &mut Vec<String>, key: &str, value: &toml::Value) -> Result<(), String> {
    let flag = format!("--{key}");
    match value {
        toml::Value::Boolean(true) => out.push(flag),
        toml::Value::Boolean(false) => {}
        toml::Value::String(s) => out.push(format!("{flag}={s}")),
        toml::Value::Integer(i) => out.push(format!("{flag}={i}")),
        toml::Value::Float(x) => out.push(format!("{flag}={x:e}")),
        other => return Err(format!("config key {key:?} has unsupported value {other}")),
    }
    Ok(())
}
