//! `pluscx`: batch front end. Exit codes: 0 success, 1 obstruction,
//! 2 invalid input, 3 budget exceeded.

mod commands;
mod inputs;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pluscx::chains::CoefficientMode;
use pluscx::Error;

use commands::{Outcome, TorsionFlags};
use inputs::BadInput;

const VERSION: &str = env!("CARGO_PKG_VERSION");
/// The only environment variable read: where report files go.
const OUT_DIR_VAR: &str = "PLUSCX_OUT_DIR";

#[derive(Parser)]
#[command(name = "pluscx", version, about = "Plus constructions, Schur multipliers and Whitehead torsion over finite groups")]
struct Cli {
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    /// Config file (TOML or JSON) with budgets and bounds.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one config value, e.g. `--budget coset_limit=5000`.
    #[arg(long = "budget", global = true, value_name = "KEY=VALUE")]
    budgets: Vec<String>,
    /// Also write `<command>.json` and `<command>.txt` here.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Trivial,
    Regular,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of a complex or presentation complex file.
    Homology {
        input: PathBuf,
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long, value_enum, default_value = "trivial")]
        mode: Mode,
    },
    /// Schur multiplier H_2(G; R).
    Schur {
        group: String,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Whether a Moore space M(G, 1) exists.
    Moore { group: String },
    /// Whether G is superperfect.
    SphereCriterion { group: String },
    /// Necessary conditions for a knot group.
    KnotCriterion { input: PathBuf },
    /// Plus construction with torsion, or a homology-equivalence target.
    Plus { input: PathBuf },
    /// Torsion class of an invertible matrix.
    Torsion {
        input: PathBuf,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        parity: Option<i64>,
        #[arg(long)]
        conjugate: bool,
        /// Replace by (-1)^n times the conjugate.
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        invariant: bool,
        /// Bounded search for an elementary reduction to the identity.
        #[arg(long)]
        search: bool,
    },
    /// Class (P, tau) of a cobordism model.
    Classify { input: PathBuf },
    /// Cobordism model with prescribed P and torsion.
    Realize {
        input: PathBuf,
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Perfect normal subgroups and their quotients.
    Enumerate { group: String },
    /// Solve the F_2 framing system.
    Framing { input: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Homology { .. } => "homology",
            Command::Schur { .. } => "schur",
            Command::Moore { .. } => "moore",
            Command::SphereCriterion { .. } => "sphere-criterion",
            Command::KnotCriterion { .. } => "knot-criterion",
            Command::Plus { .. } => "plus",
            Command::Torsion { .. } => "torsion",
            Command::Classify { .. } => "classify",
            Command::Realize { .. } => "realize",
            Command::Enumerate { .. } => "enumerate",
            Command::Framing { .. } => "framing",
        }
    }

    /// The input as it appears in the report, so a run can be repeated.
    fn input(&self) -> Value {
        match self {
            Command::Schur { group, .. } | Command::Moore { group } | Command::SphereCriterion { group } | Command::Enumerate { group } => {
                file_json(Path::new(group)).unwrap_or_else(|| json!(group))
            }
            Command::Homology { input, .. }
            | Command::KnotCriterion { input }
            | Command::Plus { input }
            | Command::Torsion { input, .. }
            | Command::Classify { input }
            | Command::Realize { input, .. }
            | Command::Framing { input } => file_json(input).unwrap_or_else(|| json!(input.display().to_string())),
        }
    }
}

fn file_json(path: &Path) -> Option<Value> {
    let text = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

fn run(cmd: &Command, cfg: &pluscx::Config) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Homology { input, ring, mode } => {
            let mode = match mode {
                Mode::Trivial => CoefficientMode::Trivial,
                Mode::Regular => CoefficientMode::Regular,
            };
            commands::homology(input, ring, mode, cfg)
        }
        Command::Schur { group, ring } => commands::schur(group, ring, cfg),
        Command::Moore { group } => commands::moore(group, cfg),
        Command::SphereCriterion { group } => commands::sphere(group, cfg),
        Command::KnotCriterion { input } => commands::knot(input, cfg),
        Command::Plus { input } => commands::plus(input, cfg),
        Command::Torsion { input, group, parity, conjugate, dual, invariant, search } => {
            let flags = TorsionFlags {
                group: group.as_deref(),
                parity: *parity,
                conjugate: *conjugate,
                dual: *dual,
                invariant: *invariant,
                search: *search,
            };
            commands::torsion(input, &flags, cfg)
        }
        Command::Classify { input } => commands::classify_cmd(input, cfg),
        Command::Realize { input, model_out } => commands::realize_cmd(input, model_out.as_deref(), cfg),
        Command::Enumerate { group } => commands::enumerate(group, cfg),
        Command::Framing { input } => commands::framing(input),
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::OrderTooLarge { .. } => "order_too_large",
        Error::BudgetExceeded(_) => "budget_exceeded",
        Error::NotNormal => "not_normal",
        Error::MixedRings => "mixed_rings",
        Error::MixedGroups => "mixed_groups",
        Error::NonAbelianGroup => "non_abelian_group",
        Error::InvalidBoundary(_) => "invalid_boundary",
        Error::NotLiftable(_) => "not_liftable",
        Error::NotPerfect(_) => "not_perfect",
        Error::NotInvertible(_) => "not_invertible",
        Error::NotASummand(_) => "not_a_summand",
        Error::NotAcyclic(_) => "not_acyclic",
        Error::RankMismatch(_) => "rank_mismatch",
        Error::NotOneSidedH(_) => "not_one_sided_h",
        Error::MismatchedBase => "mismatched_base",
        Error::NotAHomomorphism(_) => "not_a_homomorphism",
        Error::H2Obstruction(_) => "h2_obstruction",
        Error::Parse(_) => "parse",
        Error::InvalidInput(_) => "invalid_input",
    }
}

/// Exit code and status word for an error.
fn classify_error(e: &anyhow::Error) -> (u8, &'static str, &'static str) {
    if let Some(err) = e.downcast_ref::<Error>() {
        let kind = error_kind(err);
        return match err {
            Error::NotLiftable(_)
            | Error::NotPerfect(_)
            | Error::H2Obstruction(_)
            | Error::NotASummand(_)
            | Error::NotOneSidedH(_)
            | Error::NotAcyclic(_) => (1, "obstruction", kind),
            Error::BudgetExceeded(_) | Error::OrderTooLarge { .. } => (3, "budget_exceeded", kind),
            _ => (2, "invalid_input", kind),
        };
    }
    if e.downcast_ref::<BadInput>().is_some() {
        return (2, "invalid_input", "invalid_input");
    }
    (2, "invalid_input", "other")
}

fn emit(cli: &Cli, name: &str, report: &Value, text: &str) -> anyhow::Result<()> {
    let json_text = serde_json::to_string_pretty(report)? + "\n";
    match cli.format {
        Format::Json => print!("{json_text}"),
        Format::Text => print!("{text}"),
    }
    let dir = cli.out_dir.clone().or_else(|| std::env::var_os(OUT_DIR_VAR).map(PathBuf::from));
    if let Some(dir) = dir {
        write_reports(&dir, name, &json_text, text)?;
    }
    Ok(())
}

fn write_reports(dir: &Path, name: &str, json_text: &str, text: &str) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(format!("{name}.json")), json_text)?;
    std::fs::write(dir.join(format!("{name}.txt")), text)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let header = |status: &str| format!("pluscx {VERSION} {name}: {status}\n");
    let cfg = match inputs::load_config(cli.config.as_deref(), &cli.budgets) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let mut report = json!({
        "tool": "pluscx",
        "version": VERSION,
        "command": name,
        "input": cli.command.input(),
    });
    let (code, text) = match run(&cli.command, &cfg) {
        Ok(out) => {
            let status = if out.holds { "ok" } else { "obstruction" };
            report["status"] = json!(status);
            report["result"] = out.result;
            (if out.holds { 0 } else { 1 }, header(status) + &out.text)
        }
        Err(e) => {
            let (code, status, kind) = classify_error(&e);
            let message = format!("{e:#}");
            report["status"] = json!(status);
            let key = if code == 1 { "obstruction" } else { "error" };
            report[key] = json!({ "kind": kind, "message": message });
            eprintln!("{status}: {message}");
            (code, header(status) + &format!("  {kind}: {message}\n"))
        }
    };
    report["config"] = serde_json::to_value(&cfg).expect("config serializes");
    if let Err(e) = emit(&cli, name, &report, &text) {
        eprintln!("error: cannot write report: {e:#}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
