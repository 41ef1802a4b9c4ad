//! The `tm` command line: parse → validate → simulate → events, plus
//! exporters.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::diagnostic::Diagnostic;
use crate::dot::export_dot;
use crate::dsl::{parse_named, serialize};
use crate::events::{
    behavior_to_text, check_behavior, derive_behavior, occurrences, violations_to_text,
};
use crate::model::{Entity, StaticModel};
use crate::objectify::objectify;
use crate::sim::{simulate, Trace};
use crate::validate::{default_rule_profile, parse_profiles, validate, RuleProfile, Strictness};

/// Process exit status: 0 success, 1 error diagnostics, 2 usage error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExitStatus(u8);

impl ExitStatus {
    pub const SUCCESS: ExitStatus = ExitStatus(0);
    pub const FAILURE: ExitStatus = ExitStatus(1);
    pub const USAGE: ExitStatus = ExitStatus(2);

    pub fn code(self) -> u8 {
        self.0
    }
}

#[derive(Parser)]
#[command(name = "tm", version, about = "Thinging-machine model toolkit", arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a model; print diagnostics.
    Check {
        file: PathBuf,
        #[command(flatten)]
        rules: RuleArgs,
    },
    /// Run a scenario and print the trace.
    Simulate {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        rules: RuleArgs,
    },
    /// Run a scenario; print event occurrences and the derived behavior.
    Events {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        rules: RuleArgs,
    },
    /// Run a scenario and check a declared behavior against it.
    Conform {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Behavior declared in the model.
        #[arg(long)]
        behavior: String,
        #[command(flatten)]
        rules: RuleArgs,
    },
    /// Mark a thimac as object, rerouting part interactions through it.
    Objectify {
        file: PathBuf,
        /// Dotted path of the thimac.
        #[arg(long)]
        thimac: String,
    },
    /// Render the model as DOT or a scenario trace as JSON lines.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        /// Scenario to run (trace-json only).
        #[arg(long)]
        scenario: Option<String>,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
        max_steps: u32,
        #[command(flatten)]
        rules: RuleArgs,
    },
}

#[derive(Args)]
struct RuleArgs {
    /// `strict`, `lenient`, or a profile defined in --rules.
    #[arg(long, default_value = "strict")]
    profile: String,
    /// Rule profile configuration file.
    #[arg(long)]
    rules: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    scenario: String,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    max_steps: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    TraceJson,
}

/// Outcome of a failed command: the status and what to print on stderr.
struct Failure {
    status: ExitStatus,
    lines: Vec<String>,
}

impl Failure {
    fn usage(message: String) -> Self {
        Failure {
            status: ExitStatus::USAGE,
            lines: vec![message],
        }
    }

    fn error(message: String) -> Self {
        Failure {
            status: ExitStatus::FAILURE,
            lines: vec![message],
        }
    }

    fn diagnostics(file: &Path, diagnostics: &[Diagnostic]) -> Self {
        Failure {
            status: ExitStatus::FAILURE,
            lines: diagnostics.iter().map(|d| render(file, d)).collect(),
        }
    }
}

fn render(file: &Path, d: &Diagnostic) -> String {
    match d.span {
        Some(_) => d.to_string(),
        None => format!("{}: {d}", file.display()),
    }
}

/// Runs the CLI with process stdout/stderr.
pub fn run<I, T>(args: I) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI writing results to `out` and diagnostics to `err`. The first
/// argument is the program name.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                ExitStatus::USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                ExitStatus::SUCCESS
            };
        }
    };
    let mut warnings = Vec::new();
    let result = execute(cli.command, &mut warnings);
    for line in warnings {
        let _ = writeln!(err, "{line}");
    }
    match result {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            ExitStatus::SUCCESS
        }
        Err(Failure { status, lines }) => {
            for line in lines {
                let _ = writeln!(err, "{line}");
            }
            status
        }
    }
}

fn read(file: &Path) -> Result<String, Failure> {
    fs::read_to_string(file)
        .map_err(|e| Failure::usage(format!("{}: cannot read: {e}", file.display())))
}

fn load(file: &Path, warnings: &mut Vec<String>) -> Result<StaticModel, Failure> {
    let text = read(file)?;
    let result = parse_named(&file.display().to_string(), &text);
    match result.model {
        Some(model) => {
            warnings.extend(result.diagnostics.iter().map(|d| render(file, d)));
            Ok(model)
        }
        None => Err(Failure::diagnostics(file, &result.diagnostics)),
    }
}

fn profile(args: &RuleArgs) -> Result<RuleProfile, Failure> {
    if let Some(path) = &args.rules {
        let text = read(path)?;
        let profiles = parse_profiles(&path.display().to_string(), &text)
            .map_err(|d| Failure::diagnostics(path, &d))?;
        if let Some(p) = profiles.into_iter().find(|p| p.name == args.profile) {
            return Ok(p);
        }
    }
    Strictness::from_name(&args.profile)
        .map(default_rule_profile)
        .ok_or_else(|| Failure::usage(format!("unknown profile `{}`", args.profile)))
}

/// Loads and validates; any error diagnostic fails the command.
fn load_valid(file: &Path, rules: &RuleArgs, warnings: &mut Vec<String>) -> Result<StaticModel, Failure> {
    let model = load(file, warnings)?;
    let report = validate(&model, &profile(rules)?);
    if !report.passed {
        return Err(Failure::diagnostics(file, &report.diagnostics));
    }
    warnings.extend(report.diagnostics.iter().map(|d| render(file, d)));
    Ok(model)
}

fn trace(model: &StaticModel, file: &Path, scenario: &str, max_steps: u32) -> Result<Trace, Failure> {
    let s = model.scenario(scenario).ok_or_else(|| {
        Failure::error(format!("{}: no scenario named `{scenario}`", file.display()))
    })?;
    simulate(model, s, max_steps).map_err(|e| Failure::error(format!("{}: {e}", file.display())))
}

fn execute(command: Command, warnings: &mut Vec<String>) -> Result<String, Failure> {
    match command {
        Command::Check { file, rules } => {
            let model = load(&file, warnings)?;
            let profile = profile(&rules)?;
            let report = validate(&model, &profile);
            if !report.passed {
                return Err(Failure::diagnostics(&file, &report.diagnostics));
            }
            warnings.extend(report.diagnostics.iter().map(|d| render(&file, d)));
            Ok(format!(
                "{}: ok ({} thimacs, {} arcs, profile {})\n",
                file.display(),
                model.thimacs().len(),
                model.arcs().len(),
                profile.name
            ))
        }
        Command::Simulate { file, run, rules } => {
            let model = load_valid(&file, &rules, warnings)?;
            Ok(trace(&model, &file, &run.scenario, run.max_steps)?.to_text(&model))
        }
        Command::Events { file, run, rules } => {
            let model = load_valid(&file, &rules, warnings)?;
            let t = trace(&model, &file, &run.scenario, run.max_steps)?;
            let table = occurrences(&model, &t, model.events())
                .map_err(|e| Failure::error(format!("{}: {e}", file.display())))?;
            Ok(format!("{}\n{}", table.to_text(), behavior_to_text(&derive_behavior(&table))))
        }
        Command::Conform {
            file,
            run,
            behavior,
            rules,
        } => {
            let model = load_valid(&file, &rules, warnings)?;
            let declared = model.behavior(&behavior).ok_or_else(|| {
                Failure::error(format!("{}: no behavior named `{behavior}`", file.display()))
            })?;
            let t = trace(&model, &file, &run.scenario, run.max_steps)?;
            let table = occurrences(&model, &t, model.events())
                .map_err(|e| Failure::error(format!("{}: {e}", file.display())))?;
            let violations = check_behavior(declared, &table)
                .map_err(|e| Failure::error(format!("{}: {e}", file.display())))?;
            if violations.is_empty() {
                Ok(String::new())
            } else {
                Err(Failure {
                    status: ExitStatus::FAILURE,
                    lines: violations_to_text(&violations)
                        .lines()
                        .map(str::to_string)
                        .collect(),
                })
            }
        }
        Command::Objectify { file, thimac } => {
            let model = load(&file, warnings)?;
            let id = match model.resolve_path(&thimac) {
                Ok(Entity::Thimac(id)) => id,
                Ok(Entity::Stage(_)) => {
                    return Err(Failure::error(format!("`{thimac}` names a stage, not a thimac")))
                }
                Err(e) => return Err(Failure::error(e.to_string())),
            };
            let rewritten = objectify(&model, id).map_err(|e| Failure::error(e.to_string()))?;
            Ok(serialize(&rewritten))
        }
        Command::Export {
            file,
            format,
            scenario,
            max_steps,
            rules,
        } => match format {
            Format::Dot => Ok(export_dot(&load(&file, warnings)?)),
            Format::TraceJson => {
                let scenario = scenario
                    .ok_or_else(|| Failure::usage("--format trace-json requires --scenario".into()))?;
                let model = load_valid(&file, &rules, warnings)?;
                Ok(trace(&model, &file, &scenario, max_steps)?.to_json_lines(&model))
            }
        },
    }
}
