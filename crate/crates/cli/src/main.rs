//! Command line front end: parse and validate diagrams, compute
//! invariants, apply moves, run experiments, and list the catalog.
//! Output is byte-deterministic given the inputs and the seed.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use akmove_core::diagram::{canon, parse};
use akmove_core::{catalog, invariants, lab, moves, AkError, Diagram};

#[derive(Parser)]
#[command(name = "akmove", version, about = "Local-move calculus on link diagrams")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Skein node budget.
    #[arg(long, global = true, default_value_t = invariants::DEFAULT_BUDGET)]
    budget: u64,

    /// Seed for randomized batteries; recorded in every report.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a diagram and check its invariants (arc usage, planarity).
    Validate {
        /// PD code file.
        #[arg(long)]
        pd: Option<PathBuf>,
        /// Catalog entry name.
        name: Option<String>,
    },
    /// Compute the standard invariant report for one diagram.
    Invariant {
        #[arg(long)]
        pd: Option<PathBuf>,
        name: Option<String>,
    },
    /// Apply a move described in a JSON site file and print the result.
    Move {
        #[arg(long)]
        pd: Option<PathBuf>,
        name: Option<String>,
        /// JSON move description, e.g. {"move":"delta","arcs":[1,3,5]}.
        #[arg(long)]
        spec: PathBuf,
    },
    /// Run an experiment: "whitehead", or a path to a scheme spec file.
    Experiment {
        /// Experiment name or JSON scheme spec path.
        target: String,
        /// Run this many seeded random schemes drawn from the spec's
        /// base and model instead of the spec's own attachments.
        #[arg(long)]
        count: Option<usize>,
    },
    /// List the built-in diagrams and link models.
    Catalog,
}

#[derive(Serialize)]
struct ErrorRecord {
    schema: u32,
    error: ErrorBody,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: String,
    message: String,
}

#[derive(Serialize)]
struct ValidateReport {
    schema: u32,
    ok: bool,
    pd: String,
    code: String,
    crossings: usize,
    components: usize,
}

#[derive(Serialize)]
struct InvariantReport {
    schema: u32,
    diagram: String,
    invariants: invariants::Report,
}

#[derive(Serialize)]
struct MoveReport {
    schema: u32,
    input: String,
    applied: moves::MoveSpec,
    output: String,
    code: String,
}

#[derive(Serialize)]
struct ExperimentEnvelope {
    schema: u32,
    report: lab::ExperimentReport,
}

#[derive(Serialize)]
struct CatalogReport {
    schema: u32,
    diagrams: Vec<CatalogDiagram>,
    models: Vec<CatalogModel>,
}

#[derive(Serialize)]
struct CatalogDiagram {
    name: String,
    pd: String,
    code: String,
    components: usize,
}

#[derive(Serialize)]
struct CatalogModel {
    name: String,
    type_index: usize,
    feet: usize,
}

fn error_kind(e: &AkError) -> &'static str {
    match e {
        AkError::Syntax { .. } => "syntax",
        AkError::Invalid(_) => "invalid",
        AkError::ArcNotFound(_) => "arc_not_found",
        AkError::CrossingNotFound(_) => "crossing_not_found",
        AkError::ComponentOutOfRange(_) => "component_out_of_range",
        AkError::SiteMismatch { .. } => "site_mismatch",
        AkError::BandRoute(_) => "band_route",
        AkError::Unsupported(_) => "unsupported",
        AkError::BudgetExceeded(_) => "budget_exceeded",
        AkError::RuleRegistration(_) => "rule_registration",
    }
}

/// Resolve the diagram input: a catalog name, or a PD (or Gauss) file.
fn load_diagram(pd: &Option<PathBuf>, name: &Option<String>) -> Result<Diagram, AkError> {
    match (pd, name) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| AkError::Invalid(format!("cannot read {}: {e}", path.display())))?;
            let trimmed = text.trim();
            if trimmed.starts_with('X') || trimmed.starts_with('V') || trimmed.starts_with('O') {
                parse::parse_pd(trimmed)
            } else {
                parse::parse_gauss(trimmed)
            }
        }
        (None, Some(n)) => catalog::named(n),
        _ => Err(AkError::Invalid(
            "give exactly one of --pd FILE or a catalog name".into(),
        )),
    }
}

/// A PD text for the report; degrades for the rare unserializable diagram.
fn pd_or_placeholder(d: &Diagram) -> String {
    parse::serialize(d).unwrap_or_else(|_| format!("<unserialized: {} crossings>", d.crossings.len()))
}

fn emit(cli: &Cli, json: String, text: String) -> Result<(), AkError> {
    let body = match cli.format {
        Format::Json => json,
        Format::Text => text,
    };
    match &cli.out {
        Some(path) => fs::write(path, body.as_bytes())
            .map_err(|e| AkError::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn experiment_text(r: &lab::ExperimentReport) -> String {
    let mut out = format!("experiment: {}\n", r.name);
    if let Some(seed) = r.seed {
        out.push_str(&format!("seed: {seed}\n"));
    }
    for (i, v) in r.residuals.iter().enumerate() {
        out.push_str(&format!("residual[{i}]: {}\n", serde_json::to_string(v).unwrap()));
    }
    for c in &r.checks {
        out.push_str(&format!(
            "[{}] {}: {}\n",
            if c.pass { "pass" } else { "FAIL" },
            c.label,
            c.detail
        ));
    }
    out.push_str(&format!("verdict: {}\n", if r.verdict { "pass" } else { "FAIL" }));
    out
}

fn run(cli: &Cli) -> Result<ExitCode, AkError> {
    if cli.budget == 0 {
        return Err(AkError::Invalid("budget must be positive".into()));
    }
    match &cli.cmd {
        Cmd::Validate { pd, name } => {
            let d = load_diagram(pd, name)?;
            d.validate()?;
            let report = ValidateReport {
                schema: 1,
                ok: true,
                pd: pd_or_placeholder(&d),
                code: canon::canonical(&d)?.0,
                crossings: d.crossings.len(),
                components: d.component_count()?,
            };
            let text = format!(
                "ok: {} crossings, {} components\ncode: {}\n",
                report.crossings, report.components, report.code
            );
            emit(cli, to_json(&report), text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Invariant { pd, name } => {
            let d = load_diagram(pd, name)?;
            d.validate()?;
            let inv = invariants::report(&d, cli.budget)?;
            let text = format!(
                "writhe: {}\nlk: {:?}\nconway: {:?}\na2: {:?}\narf: {:?}\n",
                inv.writhe, inv.lk, inv.conway, inv.a2, inv.arf
            );
            let report = InvariantReport {
                schema: 1,
                diagram: pd_or_placeholder(&d),
                invariants: inv,
            };
            emit(cli, to_json(&report), text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Move { pd, name, spec } => {
            let d = load_diagram(pd, name)?;
            d.validate()?;
            let text = fs::read_to_string(spec)
                .map_err(|e| AkError::Invalid(format!("cannot read {}: {e}", spec.display())))?;
            let spec: moves::MoveSpec = serde_json::from_str(&text)
                .map_err(|e| AkError::Invalid(format!("bad move spec: {e}")))?;
            let registry = moves::Registry::new();
            let out = moves::apply_move(&d, &spec, &registry)?;
            let report = MoveReport {
                schema: 1,
                input: pd_or_placeholder(&d),
                output: pd_or_placeholder(&out),
                code: canon::canonical(&out)?.0,
                applied: spec,
            };
            let text = format!("output: {}\ncode: {}\n", report.output, report.code);
            emit(cli, to_json(&report), text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Experiment { target, count } => {
            let mut report = run_experiment(target, *count, cli.seed, cli.budget)?;
            if report.seed.is_none() {
                report.seed = cli.seed;
            }
            let envelope = ExperimentEnvelope { schema: 1, report };
            let text = experiment_text(&envelope.report);
            let verdict = envelope.report.verdict;
            emit(cli, to_json(&envelope), text)?;
            Ok(if verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Cmd::Catalog => {
            let mut diagrams = Vec::new();
            for &name in catalog::NAMES {
                let d = catalog::named(name)?;
                diagrams.push(CatalogDiagram {
                    name: name.to_string(),
                    pd: pd_or_placeholder(&d),
                    code: canon::canonical(&d)?.0,
                    components: d.component_count()?,
                });
            }
            let models = moves::band::model_catalog()
                .into_iter()
                .map(|m| CatalogModel {
                    feet: m.feet.len(),
                    name: m.name,
                    type_index: m.type_index,
                })
                .collect::<Vec<_>>();
            let mut text = String::from("diagrams:\n");
            for d in &diagrams {
                text.push_str(&format!(
                    "  {} ({} components): {}\n",
                    d.name, d.components, d.pd
                ));
            }
            text.push_str("models:\n");
            for m in &models {
                text.push_str(&format!(
                    "  {} (type {}, {} feet)\n",
                    m.name, m.type_index, m.feet
                ));
            }
            let report = CatalogReport {
                schema: 1,
                diagrams,
                models,
            };
            emit(cli, to_json(&report), text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_experiment(
    target: &str,
    count: Option<usize>,
    seed: Option<u64>,
    budget: u64,
) -> Result<lab::ExperimentReport, AkError> {
    if target == "whitehead" {
        return lab::whitehead_experiment(budget);
    }
    let text = fs::read_to_string(target)
        .map_err(|e| AkError::Invalid(format!("unknown experiment {target:?}: {e}")))?;
    let spec: lab::SchemeSpec = serde_json::from_str(&text)
        .map_err(|e| AkError::Invalid(format!("bad scheme spec: {e}")))?;
    let registry = moves::Registry::new();
    let (inv, scheme) = spec.resolve(&registry)?;
    match count {
        None => lab::order_nk_test(inv, &scheme, budget),
        Some(count) => {
            // A seeded battery: redraw `count` random schemes with the
            // spec's base and first model, then test each one.
            let seed = seed.unwrap_or(0);
            let model = scheme
                .attachments
                .first()
                .map(|(m, _)| m.clone())
                .ok_or_else(|| AkError::Invalid("spec lists no attachments".into()))?;
            let schemes =
                lab::random_scheme_battery(&scheme.base, &model, scheme.n(), count, seed)?;
            let mut residuals = Vec::new();
            let mut verdict = true;
            for s in &schemes {
                let r = lab::order_nk_test(inv, s, budget)?;
                verdict &= r.verdict;
                residuals.extend(r.residuals);
            }
            Ok(lab::ExperimentReport {
                name: format!(
                    "order_nk battery n={} k={} count={count}",
                    scheme.n(),
                    scheme.k
                ),
                inputs: vec![canon::canonical(&scheme.base)?.0],
                subsets: Vec::new(),
                residuals,
                checks: Vec::new(),
                seed: Some(seed),
                verdict,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            let record = ErrorRecord {
                schema: 1,
                error: ErrorBody {
                    kind: error_kind(&e).to_string(),
                    message: e.to_string(),
                },
            };
            if cli.format == Format::Json {
                eprint!("{}", to_json(&record));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}
