//! Command-line front end. [`run`] returns the process exit status:
//! 0 success, 1 check or lint findings, 2 input errors, 3 internal error.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::dot::render_dot;
use crate::dsl::{parse_dsl_named, serialize_dsl};
use crate::emit::{emit_feature, Mode};
use crate::feature::{format_feature, parse_feature_named, FeatureDoc, Style};
use crate::ident::Ident;
use crate::infer::{infer_model, InferenceHints};
use crate::model::ProcessModel;
use crate::pattern::lint;
use crate::replay::{check_suite, ScenarioVerdict};
use crate::skeleton::{emit_skeletons, skeletons_json};
use crate::validate::validate;
use crate::xml::{parse_xml, serialize_xml};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "flowspec", version, about = "Process models to Given-When-Then feature files and back")]
struct Cli {
    /// Model format; by default `.xml` files are XML and anything else DSL.
    #[arg(long, global = true, value_enum)]
    format: Option<ModelFormat>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelFormat {
    Dsl,
    Xml,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    PaperExact,
    Strict,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::PaperExact => Mode::PaperExact,
            ModeArg::Strict => Mode::Strict,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StyleArg {
    Upper,
    Gherkin,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a feature file from a model.
    Compile {
        model: PathBuf,
        #[arg(long, value_enum, default_value = "paper-exact")]
        mode: ModeArg,
        #[arg(long, value_enum, env = "FLOWSPEC_STYLE", default_value = "upper")]
        style: StyleArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Infer a model from a feature file.
    Reverse {
        feature: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long)]
        model_out: Option<PathBuf>,
    },
    /// Replay feature files against a model.
    Check {
        model: PathBuf,
        #[arg(required = true)]
        features: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "paper-exact")]
        mode: ModeArg,
        /// Write the JSON report to PATH, or to stdout when PATH is omitted or `-`.
        #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
        json: Option<PathBuf>,
    },
    /// Emit step-definition skeletons as JSON.
    Steps {
        feature: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render a model as a Graphviz digraph.
    Render {
        model: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Validate a model and report lint findings.
    Lint { model: PathBuf },
}

/// Failure that ends a command with a given status.
struct Fail(i32, String);

type CmdResult = Result<i32, Fail>;

fn input_err(e: impl std::fmt::Display) -> Fail {
    Fail(EXIT_INPUT, e.to_string())
}

fn read(path: &Path) -> Result<String, Fail> {
    fs::read_to_string(path).map_err(|e| input_err(format!("{}: {e}", path.display())))
}

fn load_model(path: &Path, format: Option<ModelFormat>) -> Result<ProcessModel, Fail> {
    let text = read(path)?;
    let is_xml = match format {
        Some(f) => f == ModelFormat::Xml,
        None => path.extension().is_some_and(|e| e.eq_ignore_ascii_case("xml")),
    };
    let name = path.display().to_string();
    let parsed = if is_xml { parse_xml(&text) } else { parse_dsl_named(&text, &name) };
    parsed.map_err(|e| input_err(format!("{name}: {e}")))
}

fn load_feature(path: &Path) -> Result<FeatureDoc, Fail> {
    let text = read(path)?;
    let name = path.display().to_string();
    parse_feature_named(&text, &name).map_err(input_err)
}

fn emit_to(out: &mut dyn Write, dest: Option<&Path>, text: &str) -> Result<(), Fail> {
    match dest {
        Some(p) if p != Path::new("-") => {
            fs::write(p, text).map_err(|e| input_err(format!("{}: {e}", p.display())))
        }
        _ => out.write_all(text.as_bytes()).map_err(|e| Fail(EXIT_INTERNAL, e.to_string())),
    }
}

#[derive(Serialize)]
struct FileVerdict<'a> {
    feature: String,
    #[serde(flatten)]
    verdict: &'a ScenarioVerdict,
}

#[derive(Serialize)]
struct CheckReport<'a> {
    passed: bool,
    coverage: f64,
    uncovered: Vec<Ident>,
    verdicts: Vec<FileVerdict<'a>>,
}

fn cmd_check(
    model: &ProcessModel,
    features: &[(String, FeatureDoc)],
    mode: Mode,
    json: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let reports: Vec<(&String, _)> = features.iter().map(|(n, d)| (n, check_suite(model, d, mode))).collect();
    let mut covered = BTreeSet::new();
    let mut verdicts = Vec::new();
    for (name, r) in &reports {
        for v in &r.verdicts {
            if v.passed {
                covered.extend(v.fired.iter().cloned());
            }
            verdicts.push(FileVerdict { feature: (*name).clone(), verdict: v });
        }
    }
    let uncovered: Vec<Ident> = model.transitions.iter().map(|t| t.id.clone()).filter(|id| !covered.contains(id)).collect();
    let n = model.transitions.len();
    let coverage = if n == 0 { 1.0 } else { (n - uncovered.len()) as f64 / n as f64 };
    let passed = verdicts.iter().all(|v| v.verdict.passed);
    let report = CheckReport { passed, coverage, uncovered, verdicts };
    let text = match json {
        Some(_) => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        None => human_report(&report),
    };
    emit_to(out, json, &text)?;
    Ok(if passed { EXIT_OK } else { EXIT_FINDINGS })
}

fn human_report(r: &CheckReport<'_>) -> String {
    let mut s = String::new();
    for v in &r.verdicts {
        let status = if v.verdict.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("{status} {}: {}\n", v.feature, v.verdict.scenario));
        if let Some(e) = &v.verdict.error {
            s.push_str(&format!("  error: {e}\n"));
        }
        for m in &v.verdict.mismatches {
            let show = |x: &Option<String>| x.clone().unwrap_or_else(|| "-".into());
            s.push_str(&format!("  at {}: expected {}, observed {}\n", m.position, show(&m.expected), show(&m.observed)));
        }
    }
    let unc: Vec<&str> = r.uncovered.iter().map(Ident::as_str).collect();
    s.push_str(&format!("coverage {:.3} uncovered [{}]\n", r.coverage, unc.join(", ")));
    s
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cli.command {
        Command::Compile { model, mode, style, output } => {
            let m = load_model(&model, cli.format)?;
            let doc = emit_feature(&m, mode.into()).map_err(input_err)?;
            let style = match style {
                StyleArg::Upper => Style::PaperUpper,
                StyleArg::Gherkin => Style::Gherkin,
            };
            emit_to(out, output.as_deref(), &format_feature(&doc, style))?;
            Ok(EXIT_OK)
        }
        Command::Reverse { feature, dot, model_out } => {
            let doc = load_feature(&feature)?;
            let (m, diags) = infer_model(&doc, &InferenceHints::default());
            for d in &diags {
                let _ = writeln!(err, "{d}");
            }
            if let Some(p) = &dot {
                emit_to(out, Some(p), &render_dot(&m))?;
            }
            let as_xml = model_out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("xml")));
            let text = if as_xml { serialize_xml(&m) } else { serialize_dsl(&m) };
            emit_to(out, model_out.as_deref(), &text)?;
            Ok(if diags.iter().any(|d| d.is_error()) { EXIT_FINDINGS } else { EXIT_OK })
        }
        Command::Check { model, features, mode, json } => {
            let m = load_model(&model, cli.format)?;
            let docs = features
                .iter()
                .map(|p| Ok((p.display().to_string(), load_feature(p)?)))
                .collect::<Result<Vec<_>, Fail>>()?;
            cmd_check(&m, &docs, mode.into(), json.as_deref(), out)
        }
        Command::Steps { feature, output } => {
            let doc = load_feature(&feature)?;
            let sk = emit_skeletons(&doc).map_err(input_err)?;
            emit_to(out, output.as_deref(), &(skeletons_json(&sk) + "\n"))?;
            Ok(EXIT_OK)
        }
        Command::Render { model, output } => {
            let m = load_model(&model, cli.format)?;
            emit_to(out, output.as_deref(), &render_dot(&m))?;
            Ok(EXIT_OK)
        }
        Command::Lint { model } => {
            let m = load_model(&model, cli.format)?;
            let mut diags = validate(&m);
            diags.extend(lint(&m));
            let mut text = String::new();
            for d in &diags {
                text.push_str(&format!("{d}\n"));
            }
            emit_to(out, None, &text)?;
            Ok(if diags.is_empty() { EXIT_OK } else { EXIT_FINDINGS })
        }
    }
}

/// Parses `args` (program name first) and runs the subcommand, writing
/// results to `out` and messages to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            } else {
                let _ = err.write_all(text.as_bytes());
                EXIT_INPUT
            };
        }
    };
    match catch_unwind(AssertUnwindSafe(|| execute(cli, out, err))) {
        Ok(Ok(code)) => code,
        Ok(Err(Fail(code, msg))) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
        Err(_) => {
            let _ = writeln!(err, "internal error");
            EXIT_INTERNAL
        }
    }
}
