//! Command-line front-end: parse inputs, dispatch to the mathematical
//! modules, and emit deterministic text or JSON reports.
//!
//! Determinism contract: two invocations with identical arguments produce
//! byte-identical stdout. All set-like outputs are sorted, JSON objects are
//! emitted with sorted keys, and exact rationals serialize as `p/q` strings.
//! Exit codes: 0 ok, 1 input error, 2 precision failure, 3 internal
//! inconsistency.
//!
//! A JSON report embeds its own inputs and options, so it can be fed back
//! through `--from-json` and must reproduce itself byte for byte.

use std::io::Read as _;

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::branch::{Branch, BranchReport};
use crate::error::{Error, Result};
use crate::quadratic::QuadraticFormF2;
use crate::ramification::Filtration;
use crate::scalar::{format_rational, Field};
use crate::semigroup::NumericalSemigroup;
use crate::{DEFAULT_MAX_STEPS, DEFAULT_TRUNCATION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

impl OutputFormat {
    fn as_str(&self) -> &'static str {
        match self {
            OutputFormat::Text => "text",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub truncation: u32,
    pub max_steps: u32,
    pub format: OutputFormat,
    pub precision_guard: bool,
}

/// One fully resolved invocation: the payload carries parsed inputs, so a
/// `Request` is self-contained (branch files are read during parsing).
#[derive(Debug, Clone)]
pub enum Payload {
    Form { form: QuadraticFormF2 },
    Semigroup { generators: Vec<u64> },
    Branch { branch: Branch, field: Field },
    Ramify { filtration: Filtration },
}

#[derive(Debug, Clone)]
pub struct Request {
    pub payload: Payload,
    pub options: Options,
}

impl Payload {
    fn subcommand(&self) -> &'static str {
        match self {
            Payload::Form { .. } => "form",
            Payload::Semigroup { .. } => "semigroup",
            Payload::Branch { .. } => "branch",
            Payload::Ramify { .. } => "ramify",
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "arfkit",
    version,
    about = "Exact arithmetic for Arf invariants, Arf semigroups and curve branches, and Herbrand ramification data",
    subcommand_negates_reqs = false
)]
struct Cli {
    /// Working truncation order for series pipelines (minimum 8)
    #[arg(
        long,
        short = 'T',
        global = true,
        env = "ARFKIT_TRUNCATION",
        default_value_t = DEFAULT_TRUNCATION,
        value_parser = clap::value_parser!(u32).range(8..)
    )]
    truncation: u32,

    /// Bound on blow-up steps before a branch counts as non-resolving
    #[arg(
        long,
        global = true,
        default_value_t = DEFAULT_MAX_STEPS,
        value_parser = clap::value_parser!(u32).range(1..)
    )]
    max_steps: u32,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Shorthand for --format json
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    json: bool,

    /// Disable the doubled-truncation re-run of branch pipelines
    #[arg(long, global = true, action = ArgAction::SetTrue)]
    no_precision_guard: bool,

    /// Re-run a previously emitted JSON report (path, or '-' for stdin)
    #[arg(long, global = true, value_name = "FILE")]
    from_json: Option<String>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Arf invariant of a quadratic form over the two-element field
    Form {
        /// Form literal, e.g. "x1*x2 + x3^2 + x3*x4"
        literal: String,
        /// Ambient dimension (defaults to the largest index mentioned)
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Numerical semigroup analysis from a generator set
    Semigroup {
        /// Comma-separated generators, e.g. 4,6,7
        #[arg(long, value_delimiter = ',', required = true)]
        generators: Vec<u64>,
    },
    /// Curve-branch pipeline from a coordinates file (one series per line)
    Branch {
        /// Input path, or '-' for stdin
        #[arg(long)]
        input: String,
        /// Coefficient field: q (rationals) or f<p> for a prime field
        #[arg(long, default_value = "q")]
        field: String,
    },
    /// Ramification filtration: Herbrand function, jumps, Hasse-Arf check
    Ramify {
        /// Comma-separated group orders o_-1,o_0,...,o_r, e.g. 8,8,8,2,2,1
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<u64>,
        /// Whether the Galois group is abelian (data flag, not inferred)
        #[arg(long, action = ArgAction::Set, default_value = "false")]
        abelian: bool,
        /// Free-form name echoed in the report
        #[arg(long, default_value = "")]
        label: String,
    },
}

/// Outcome of an invocation, ready to render. `exit_code` follows the
/// documented contract; errors still produce a renderable report.
#[derive(Debug, Clone)]
pub struct Report {
    pub subcommand: String,
    pub inputs: Value,
    pub options: Value,
    pub results: Value,
    pub diagnostics: Vec<String>,
    pub exit_code: i32,
}

/// A parsed invocation: either a request to run, or usage text to print
/// verbatim (`--help`, `--version`).
#[derive(Debug, Clone)]
pub enum Invocation {
    Request(Request),
    Usage(String),
}

/// Parse argv into a validated `Request`, reading any input files. Errors
/// name the offending flag or value; help and version count as errors here
/// (they carry no request).
pub fn parse_args<I, S>(argv: I) -> Result<Request>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match parse_invocation(argv)? {
        Invocation::Request(request) => Ok(request),
        Invocation::Usage(text) => Err(Error::InvalidOption(text)),
    }
}

pub fn parse_invocation<I, S>(argv: I) -> Result<Invocation>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            return Ok(Invocation::Usage(e.to_string()));
        }
        Err(e) => return Err(Error::InvalidOption(e.to_string())),
    };
    let mut options = Options {
        truncation: cli.truncation,
        max_steps: cli.max_steps,
        format: if cli.json {
            OutputFormat::Json
        } else {
            cli.format
        },
        precision_guard: !cli.no_precision_guard,
    };

    if let Some(path) = &cli.from_json {
        if cli.command.is_some() {
            return Err(Error::InvalidOption(
                "--from-json replaces the subcommand; give one or the other".to_string(),
            ));
        }
        return Ok(Invocation::Request(request_from_json(&read_source(path)?)?));
    }

    let command = cli.command.ok_or_else(|| {
        Error::InvalidOption(
            "expected a subcommand (form, semigroup, branch, ramify) or --from-json".to_string(),
        )
    })?;
    let payload = match command {
        Command::Form { literal, dim } => Payload::Form {
            form: QuadraticFormF2::parse(&literal, dim)?,
        },
        Command::Semigroup { generators } => Payload::Semigroup { generators },
        Command::Branch { input, field } => {
            let field = Field::parse(&field)?;
            let branch = Branch::parse(&read_source(&input)?, field)?;
            Payload::Branch { branch, field }
        }
        Command::Ramify {
            orders,
            abelian,
            label,
        } => Payload::Ramify {
            filtration: Filtration::new(&orders, abelian, &label)?,
        },
    };
    if matches!(payload, Payload::Branch { .. }) && options.truncation > crate::MAX_TRUNCATION {
        options.truncation = crate::MAX_TRUNCATION;
    }
    Ok(Invocation::Request(Request { payload, options }))
}

fn read_source(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Parse(format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("reading {path}: {e}")))
    }
}

/// Execute a request. Module errors map to the documented exit codes and
/// still yield a renderable report.
pub fn run(request: &Request) -> Report {
    let subcommand = request.payload.subcommand().to_string();
    let inputs = inputs_echo(&request.payload);
    let options = options_echo(&request.options);
    match execute(request) {
        Ok((results, diagnostics, exit_code)) => Report {
            subcommand,
            inputs,
            options,
            results,
            diagnostics,
            exit_code,
        },
        Err(e) => Report {
            subcommand,
            inputs,
            options,
            results: json!({ "error": e.to_string() }),
            diagnostics: vec![e.to_string()],
            exit_code: e.exit_code(),
        },
    }
}

fn inputs_echo(payload: &Payload) -> Value {
    match payload {
        Payload::Form { form } => json!({
            "dim": form.dim(),
            "form": form.canonical_string(),
        }),
        Payload::Semigroup { generators } => {
            let mut gens: Vec<u64> = generators.clone();
            gens.sort_unstable();
            gens.dedup();
            json!({ "generators": gens })
        }
        Payload::Branch { branch, field } => json!({
            "coordinates": branch
                .coords()
                .iter()
                .map(|c| c.canonical_string())
                .collect::<Vec<_>>(),
            "field": field.to_string(),
        }),
        Payload::Ramify { filtration } => json!({
            "abelian": filtration.abelian(),
            "label": filtration.label(),
            "orders": filtration.orders(),
        }),
    }
}

fn options_echo(options: &Options) -> Value {
    json!({
        "format": options.format.as_str(),
        "max_steps": options.max_steps,
        "precision_guard": options.precision_guard,
        "truncation": options.truncation,
    })
}

fn execute(request: &Request) -> Result<(Value, Vec<String>, i32)> {
    match &request.payload {
        Payload::Form { form } => run_form(form),
        Payload::Semigroup { generators } => run_semigroup(generators),
        Payload::Branch { branch, .. } => run_branch(branch, &request.options),
        Payload::Ramify { filtration } => run_ramify(filtration),
    }
}

fn run_form(form: &QuadraticFormF2) -> Result<(Value, Vec<String>, i32)> {
    if !form.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    let count = form.count_ones()?;
    let democratic = form.arf_democratic()?;
    let symplectic = form.arf_symplectic()?;
    if democratic != symplectic {
        return Err(Error::Inconsistency(format!(
            "majority count gives Arf {democratic} but the symplectic sum gives {symplectic}"
        )));
    }
    let results = json!({
        "arf": democratic,
        "count_ones": count,
        "dim": form.dim(),
        "nondegenerate": true,
    });
    Ok((results, Vec::new(), 0))
}

fn run_semigroup(generators: &[u64]) -> Result<(Value, Vec<String>, i32)> {
    let s = NumericalSemigroup::from_generators(generators)?;
    let closure = s.arf_closure();
    let sequence = closure
        .multiplicity_sequence()
        .expect("an Arf closure is Arf");
    let characters = closure.characters().expect("an Arf closure is Arf");
    let results = json!({
        "characters": characters.values(),
        "closure": closure.sporadic(),
        "closure_conductor": closure.conductor(),
        "conductor": s.conductor(),
        "elements_below_conductor": s.sporadic(),
        "is_arf": s.is_arf(),
        "multiplicity_sequence": sequence.entries(),
    });
    Ok((results, Vec::new(), 0))
}

fn run_branch(branch: &Branch, options: &Options) -> Result<(Value, Vec<String>, i32)> {
    let mut diagnostics = Vec::new();
    let report: BranchReport = if options.precision_guard {
        let (report, retries) = branch.report_guarded(options.truncation, options.max_steps)?;
        diagnostics.extend(retries);
        report
    } else {
        branch.report(options.truncation, options.max_steps)?
    };
    diagnostics.extend(report.notes.iter().cloned());
    let verdict = if report.consistent {
        "CONSISTENT"
    } else {
        "INCONSISTENT"
    };
    let results = json!({
        "blowup_multiplicity_sequence": report.blowup_sequence.entries(),
        "characters": report.characters.values(),
        "closure": report.closure.sporadic(),
        "closure_conductor": report.closure.conductor(),
        "jacobian_replay": report.jacobian_replay.entries(),
        "orders": report.orders.sporadic(),
        "orders_conductor": report.orders.conductor(),
        "semigroup_multiplicity_sequence": report.semigroup_sequence.entries(),
        "truncation_used": report.truncation,
        "verdict": verdict,
    });
    // An INCONSISTENT verdict is honest output, not a tool failure: the
    // value semigroup alone does not determine the multiplicity sequence for
    // every branch, and the blow-up route is the resolution-faithful one.
    if !report.consistent {
        diagnostics.push(
            "the two routes disagree: the value semigroup of this branch does not determine \
             its multiplicity sequence; the blow-up sequence is the faithful one"
                .to_string(),
        );
    }
    Ok((results, diagnostics, 0))
}

fn run_ramify(filtration: &Filtration) -> Result<(Value, Vec<String>, i32)> {
    let map = filtration.herbrand_map();
    let check = filtration.hasse_arf_check();
    let breakpoints: Vec<Value> = map
        .breakpoints()
        .iter()
        .map(|(u, phi)| json!([u, format_rational(phi)]))
        .collect();
    let upper: Vec<String> = check.upper_jumps.iter().map(format_rational).collect();
    let results = json!({
        "all_integral": check.all_integral,
        "lower_jumps": check.lower_jumps,
        "phi_breakpoints": breakpoints,
        "tame_drop": filtration.has_tame_drop(),
        "upper_jumps": upper,
        "verdict": check.verdict.to_string(),
    });
    Ok((results, Vec::new(), 0))
}

/// Rebuild a `Request` from a previously emitted JSON report.
fn request_from_json(text: &str) -> Result<Request> {
    let bad = |msg: &str| Error::Parse(format!("--from-json report: {msg}"));
    let value: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("--from-json: {e}")))?;
    let subcommand = value["subcommand"]
        .as_str()
        .ok_or_else(|| bad("missing subcommand"))?
        .to_string();
    let inputs = &value["inputs"];
    let opts = &value["options"];
    let format = match opts["format"].as_str() {
        Some("text") => OutputFormat::Text,
        Some("json") | None => OutputFormat::Json,
        Some(other) => return Err(bad(&format!("unknown format {other:?}"))),
    };
    let options = Options {
        truncation: opts["truncation"]
            .as_u64()
            .unwrap_or(u64::from(DEFAULT_TRUNCATION)) as u32,
        max_steps: opts["max_steps"]
            .as_u64()
            .unwrap_or(u64::from(DEFAULT_MAX_STEPS)) as u32,
        format,
        precision_guard: opts["precision_guard"].as_bool().unwrap_or(true),
    };
    let u64_list = |v: &Value, key: &str| -> Result<Vec<u64>> {
        v[key]
            .as_array()
            .ok_or_else(|| bad(&format!("missing {key}")))?
            .iter()
            .map(|x| {
                x.as_u64()
                    .ok_or_else(|| bad(&format!("non-natural entry in {key}")))
            })
            .collect()
    };
    let payload = match subcommand.as_str() {
        "form" => {
            let literal = inputs["form"].as_str().ok_or_else(|| bad("missing form"))?;
            let dim = inputs["dim"].as_u64().map(|d| d as usize);
            Payload::Form {
                form: QuadraticFormF2::parse(literal, dim)?,
            }
        }
        "semigroup" => Payload::Semigroup {
            generators: u64_list(inputs, "generators")?,
        },
        "branch" => {
            let field = Field::parse(inputs["field"].as_str().unwrap_or("q"))?;
            let lines: Vec<String> = inputs["coordinates"]
                .as_array()
                .ok_or_else(|| bad("missing coordinates"))?
                .iter()
                .map(|x| {
                    x.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| bad("non-string coordinate"))
                })
                .collect::<Result<_>>()?;
            Payload::Branch {
                branch: Branch::parse(&lines.join("\n"), field)?,
                field,
            }
        }
        "ramify" => Payload::Ramify {
            filtration: Filtration::new(
                &u64_list(inputs, "orders")?,
                inputs["abelian"].as_bool().unwrap_or(false),
                inputs["label"].as_str().unwrap_or(""),
            )?,
        },
        other => return Err(bad(&format!("unknown subcommand {other:?}"))),
    };
    Ok(Request { payload, options })
}

/// Render a report: canonical JSON (sorted keys, trailing newline) or an
/// aligned, stable text listing.
pub fn render(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut top = Map::new();
            top.insert("diagnostics".to_string(), json!(report.diagnostics));
            top.insert("exit_code".to_string(), json!(report.exit_code));
            top.insert("inputs".to_string(), report.inputs.clone());
            top.insert("options".to_string(), report.options.clone());
            top.insert("results".to_string(), report.results.clone());
            top.insert("subcommand".to_string(), json!(report.subcommand));
            let mut out = serde_json::to_string(&Value::Object(top))
                .expect("report serialization cannot fail");
            out.push('\n');
            out
        }
        OutputFormat::Text => {
            let mut lines = Vec::new();
            lines.push(format!("subcommand: {}", report.subcommand));
            text_section(&mut lines, "inputs", &report.inputs);
            text_section(&mut lines, "options", &report.options);
            text_section(&mut lines, "results", &report.results);
            if report.diagnostics.is_empty() {
                lines.push("diagnostics: (none)".to_string());
            } else {
                lines.push("diagnostics:".to_string());
                for d in &report.diagnostics {
                    lines.push(format!("  - {d}"));
                }
            }
            lines.push(format!("exit_code: {}", report.exit_code));
            let mut out = lines.join("\n");
            out.push('\n');
            out
        }
    }
}

fn text_section(lines: &mut Vec<String>, name: &str, value: &Value) {
    lines.push(format!("{name}:"));
    if let Value::Object(map) = value {
        for (k, v) in map {
            lines.push(format!("  {k}: {}", text_value(v)));
        }
    } else {
        lines.push(format!("  {}", text_value(value)));
    }
}

fn text_value(value: &Value) -> String {
    match value {
        Value::Array(items) if items.is_empty() => "(none)".to_string(),
        Value::Array(items) => items
            .iter()
            .map(|item| match item {
                // Pairs like phi breakpoints keep their grouping visible.
                Value::Array(inner) => format!(
                    "({})",
                    inner.iter().map(text_value).collect::<Vec<_>>().join(", ")
                ),
                other => text_value(other),
            })
            .collect::<Vec<_>>()
            .join(", "),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Full CLI entry: parse, run, render to stdout, return the exit code.
pub fn main_with_args<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match parse_invocation(argv) {
        Ok(Invocation::Request(request)) => {
            let report = run(&request);
            print!("{}", render(&report, request.options.format));
            if report.exit_code != 0 {
                if let Some(msg) = report.diagnostics.first() {
                    eprintln!("arfkit: {msg}");
                }
            }
            report.exit_code
        }
        Ok(Invocation::Usage(text)) => {
            println!("{text}");
            0
        }
        Err(e) => {
            eprintln!("arfkit: {e}");
            e.exit_code()
        }
    }
}
