//! Command-line front end: structure verification, classification, gallery
//! regression runs, parameter sweeps, and curve analysis.
//!
//! Exit codes: 0 on success, 2 on input-validation failures (the offending
//! invariant is named on stderr), 1 on everything else (including gallery
//! regression failures and I/O errors).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use slantlab_core::curves::{curve_classify, theorem_check, CurveVerdict};
use slantlab_core::schema::{format_float, sweep_to_csv};
use slantlab_core::slant::{classify, sweep, SamplerConfig, SlantClassification};
use slantlab_core::structure::{registry_get, Compatibility, StructureClass};
use slantlab_core::{
    gallery, gallery_get, CompatibleStructure, CurveDoc, Error as CoreError, ImmersionDoc,
    ManifoldDoc, StructureRegistryEntry,
};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "slantlab",
    version,
    about = "Slant-type classification of submanifolds of flat semi-Riemannian spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct StructureSource {
    /// Structure JSON file ({"registry": key} or inline {dim, J, g}).
    #[arg(short = 'm', long = "manifold")]
    manifold: Option<PathBuf>,
    /// Registry key (S1..S8).
    #[arg(short = 'r', long = "registry")]
    registry: Option<String>,
}

#[derive(Args, Clone)]
struct SamplerArgs {
    /// Number of sample points over the parameter domain.
    #[arg(long, default_value_t = 64)]
    samples: usize,
    /// Seed for the pseudo-random part of the sampler.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Override for the P^2 scalarity residual tolerance (must be positive).
    #[arg(long = "tol-residual")]
    tol_residual: Option<f64>,
    /// Override for the lambda constancy tolerance (must be positive).
    #[arg(long = "tol-const")]
    tol_const: Option<f64>,
}

impl SamplerArgs {
    fn build(&self) -> Result<SamplerConfig, AppError> {
        let mut config = SamplerConfig {
            samples: self.samples,
            seed: self.seed,
            ..Default::default()
        };
        if let Some(t) = self.tol_residual {
            if t <= 0.0 {
                return Err(AppError::Validation(
                    "--tol-residual must be positive".into(),
                ));
            }
            config.tol_residual = t;
        }
        if let Some(t) = self.tol_const {
            if t <= 0.0 {
                return Err(AppError::Validation("--tol-const must be positive".into()));
            }
            config.tol_const = t;
        }
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Validate a (J, g) pair and print its classification and residuals.
    VerifyStructure {
        #[command(flatten)]
        source: StructureSource,
    },
    /// Classify an immersion document against a structure.
    Classify {
        #[command(flatten)]
        source: StructureSource,
        /// Immersion JSON file.
        #[arg(short = 'i', long = "immersion")]
        immersion: PathBuf,
        #[command(flatten)]
        sampler: SamplerArgs,
        /// Output format.
        #[arg(long, default_value = "text", value_parser = ["json", "text"])]
        format: String,
        /// Write the report here instead of standard output.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// List or run the built-in fixture gallery.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
    /// Classify a gallery entry once per value of a swept constant.
    Sweep {
        /// Gallery entry name (for example G04).
        name: String,
        /// Sweep specification name=lo:hi:step.
        #[arg(long)]
        param: String,
        /// Pin another constant, name=value (repeatable).
        #[arg(long = "fix")]
        fix: Vec<String>,
        #[command(flatten)]
        sampler: SamplerArgs,
        /// Write CSV here instead of standard output.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Classify a curve document and, in a 2-dimensional Norden ambient,
    /// check the geodesic-or-invariant disjunction.
    Curve {
        /// Curve JSON file.
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        /// Override the document's sample count.
        #[arg(long)]
        samples: Option<usize>,
        /// Output format.
        #[arg(long, default_value = "json", value_parser = ["json", "text"])]
        format: String,
        /// Write the report here instead of standard output.
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GalleryAction {
    /// Print the gallery entries with their structures and defaults.
    List,
    /// Run fixtures, comparing computed lambda and type against the
    /// entry's expected values; exits 1 if any entry fails.
    Run {
        /// Entry to run; omitted means every enabled entry.
        name: Option<String>,
        /// Constant override name=value (repeatable).
        #[arg(short = 'p', long = "param")]
        params: Vec<String>,
        #[command(flatten)]
        sampler: SamplerArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                AppError::Validation(_) => ExitCode::from(2),
                AppError::Internal(_) => ExitCode::from(1),
            }
        }
    }
}

enum AppError {
    Validation(String),
    Internal(String),
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Validation(m) | AppError::Internal(m) => write!(f, "{m}"),
        }
    }
}

impl From<CoreError> for AppError {
    fn from(e: CoreError) -> Self {
        // Everything the core reports is a statement about the inputs
        // (violated invariants, malformed documents, unusable sampling), so
        // it maps to the validation exit code.
        AppError::Validation(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Internal(format!("i/o error: {e}"))
    }
}

fn read_file(path: &PathBuf) -> Result<String, AppError> {
    std::fs::read_to_string(path)
        .map_err(|e| AppError::Validation(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), AppError> {
    match output {
        Some(path) => {
            std::fs::write(path, text)?;
            Ok(())
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Resolved structure plus how it was named (echoed into reports).
struct ResolvedStructure {
    structure: CompatibleStructure,
    origin: String,
    entry: Option<StructureRegistryEntry>,
}

impl StructureSource {
    fn resolve(&self) -> Result<Option<ResolvedStructure>, AppError> {
        match (&self.manifold, &self.registry) {
            (Some(_), Some(_)) => Err(AppError::Validation(
                "use either --manifold or --registry, not both".into(),
            )),
            (Some(path), None) => {
                let text = read_file(path)?;
                let doc: ManifoldDoc = serde_json::from_str(&text).map_err(|e| {
                    AppError::Validation(slantlab_core::schema::describe_json_error(&text, &e))
                })?;
                let structure = doc.resolve()?;
                let entry = match &doc {
                    ManifoldDoc::Registry { registry } | ManifoldDoc::Key(registry) => {
                        Some(registry_get(registry)?)
                    }
                    ManifoldDoc::Inline { .. } => None,
                };
                Ok(Some(ResolvedStructure {
                    structure,
                    origin: path.display().to_string(),
                    entry,
                }))
            }
            (None, Some(key)) => {
                let entry = registry_get(key)?;
                Ok(Some(ResolvedStructure {
                    structure: entry.structure.clone(),
                    origin: key.clone(),
                    entry: Some(entry),
                }))
            }
            (None, None) => Ok(None),
        }
    }
}

fn class_headline(class: StructureClass) -> &'static str {
    match class {
        StructureClass::AlmostComplex => "almost-complex",
        StructureClass::Norden => "Norden",
        StructureClass::AlmostProduct => "almost-product",
        StructureClass::ParaComplex => "para-complex",
    }
}

fn parse_assignment(text: &str) -> Result<(String, f64), AppError> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| AppError::Validation(format!("expected name=value, got `{text}`")))?;
    let value: f64 = value
        .parse()
        .map_err(|_| AppError::Validation(format!("`{value}` is not a number in `{text}`")))?;
    Ok((name.trim().to_string(), value))
}

fn run(cli: Cli) -> Result<ExitCode, AppError> {
    match cli.command {
        Command::VerifyStructure { source } => {
            let resolved = source.resolve()?.ok_or_else(|| {
                AppError::Validation("verify-structure needs --manifold or --registry".into())
            })?;
            let s = &resolved.structure;
            let compat = match s.compatibility() {
                Compatibility::Isometry => "isometry",
                Compatibility::AntiIsometry => "anti-isometry",
            };
            println!(
                "{}, epsilon={:+}, {compat}",
                class_headline(s.class()),
                s.epsilon() as i64
            );
            println!("  source:            {}", resolved.origin);
            println!("  dimension:         {}", s.dim());
            println!("  metric signature:  {:?}", s.metric().signature());
            println!("  |J^2 - eps I|:     {:.3e}", s.square_residual);
            println!("  |J^t g J - sig g|: {:.3e}", s.compat_residual);
            if let Some(entry) = &resolved.entry {
                println!("  provenance:        {:?}", entry.provenance);
                if let Some(note) = entry.note {
                    println!("  note: {note}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Classify {
            source,
            immersion,
            sampler,
            format,
            output,
        } => {
            let config = sampler.build()?;
            let text = read_file(&immersion)?;
            let doc = ImmersionDoc::parse(&text)?;
            let (imm, doc_structure) = doc.build()?;
            let (structure, structure_origin) = match source.resolve()? {
                Some(r) => (r.structure, r.origin),
                None => (doc_structure, "immersion document".to_string()),
            };
            let report = classify(&imm, &structure, &config)?;
            let rendered = match format.as_str() {
                "json" => {
                    let envelope = ClassifyEnvelope {
                        version: VERSION,
                        config: ClassifyConfig {
                            command: "classify",
                            immersion: immersion.display().to_string(),
                            structure: structure_origin,
                            samples: config.samples,
                            seed: config.seed,
                            tol_residual: config.tol_residual,
                            tol_const: config.tol_const,
                        },
                        report: &report,
                    };
                    let mut s = serde_json::to_string_pretty(&envelope)
                        .map_err(|e| AppError::Internal(e.to_string()))?;
                    s.push('\n');
                    s
                }
                _ => render_classification_text(&imm.name, &report),
            };
            emit(&output, &rendered)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Gallery { action } => match action {
            GalleryAction::List => {
                println!("{:<6} {:<4} {:<10} {:<8} summary", "name", "dim", "structure", "enabled");
                for entry in gallery() {
                    let s = entry.ambient().map_err(AppError::from)?;
                    println!(
                        "{:<6} {:<4} {:<10} {:<8} {}",
                        entry.name,
                        s.dim(),
                        entry.structure,
                        entry.enabled,
                        entry.summary
                    );
                }
                Ok(ExitCode::SUCCESS)
            }
            GalleryAction::Run {
                name,
                params,
                sampler,
            } => {
                let config = sampler.build()?;
                let mut overrides = Vec::new();
                for p in &params {
                    overrides.push(parse_assignment(p)?);
                }
                let entries = match &name {
                    Some(n) => vec![gallery_get(n)?],
                    None => gallery(),
                };
                let explicit = name.is_some();
                let mut failures = 0usize;
                for entry in entries {
                    if !entry.enabled && !explicit {
                        println!(
                            "{:<6} SKIP (disabled): {}",
                            entry.name,
                            entry.note.unwrap_or("no note")
                        );
                        continue;
                    }
                    let mut constants = entry.default_constants();
                    for (k, v) in &overrides {
                        if !constants.contains_key(k) {
                            return Err(AppError::Validation(format!(
                                "entry {} has no constant `{k}`",
                                entry.name
                            )));
                        }
                        constants.insert(k.clone(), *v);
                    }
                    if let Err(reason) = (entry.admissible)(&constants) {
                        println!("{:<6} SKIP (inadmissible): {reason}", entry.name);
                        continue;
                    }
                    let imm = entry.immersion_from(&constants)?;
                    let structure = entry.ambient()?;
                    let report = classify(&imm, &structure, &config)?;
                    let mut ok = true;
                    let mut detail = format!(
                        "lambda={} type={}",
                        format_float(report.lambda),
                        report.slant_type.label()
                    );
                    if let Some(lambda_fn) = entry.expected_lambda {
                        let expected = lambda_fn(&constants);
                        detail.push_str(&format!(" expected_lambda={}", format_float(expected)));
                        ok &= (report.lambda - expected).abs() <= 1e-8 * expected.abs().max(1.0);
                    }
                    if let Some(type_fn) = entry.expected_type {
                        let expected = type_fn(&constants);
                        detail.push_str(&format!(" expected_type={}", expected.label()));
                        ok &= report.slant_type == expected;
                    }
                    if ok {
                        println!("{:<6} PASS {detail}", entry.name);
                    } else {
                        failures += 1;
                        println!("{:<6} FAIL {detail}", entry.name);
                    }
                }
                if failures == 0 {
                    Ok(ExitCode::SUCCESS)
                } else {
                    eprintln!("error: {failures} gallery entr(ies) failed");
                    Ok(ExitCode::from(1))
                }
            }
        },

        Command::Sweep {
            name,
            param,
            fix,
            sampler,
            output,
        } => {
            let config = sampler.build()?;
            let entry = gallery_get(&name)?;
            let (param_name, range) = param.split_once('=').ok_or_else(|| {
                AppError::Validation(format!("expected --param name=lo:hi:step, got `{param}`"))
            })?;
            let parts: Vec<&str> = range.split(':').collect();
            if parts.len() != 3 {
                return Err(AppError::Validation(format!(
                    "expected lo:hi:step in `{param}`"
                )));
            }
            let parse = |s: &str| -> Result<f64, AppError> {
                s.parse()
                    .map_err(|_| AppError::Validation(format!("`{s}` is not a number")))
            };
            let (lo, hi, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
            let mut fixed = BTreeMap::new();
            for f in &fix {
                let (k, v) = parse_assignment(f)?;
                fixed.insert(k, v);
            }
            let rows = sweep(&entry, param_name.trim(), lo, hi, step, &fixed, &config)?;
            emit(&output, &sweep_to_csv(&rows))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Curve {
            input,
            samples,
            format,
            output,
        } => {
            let text = read_file(&input)?;
            let mut doc = CurveDoc::parse(&text)?;
            if let Some(n) = samples {
                doc.samples = n;
            }
            let (curve, structure) = doc.build()?;
            let report = curve_classify(&curve, &structure)?;
            let verdict = if structure.class() == StructureClass::Norden && structure.dim() == 2 {
                Some(theorem_check(&curve, &structure)?)
            } else {
                None
            };
            let rendered = match format.as_str() {
                "json" => {
                    let envelope = CurveEnvelope {
                        version: VERSION,
                        config: CurveConfig {
                            command: "curve",
                            input: input.display().to_string(),
                            samples: curve.samples,
                        },
                        report: &report,
                        verdict: verdict.as_ref().map(|v| v.verdict),
                    };
                    let mut s = serde_json::to_string_pretty(&envelope)
                        .map_err(|e| AppError::Internal(e.to_string()))?;
                    s.push('\n');
                    s
                }
                _ => {
                    let mut s = format!(
                        "type: {}\nlambda: {}\nis_slant: {}\ngeodesic residual: {:.3e}\n\
                         invariance residual: {:.3e}\nlight-like samples skipped: {}\n",
                        report.slant_type.label(),
                        format_float(report.lambda),
                        report.is_slant,
                        report.geodesic_residual,
                        report.invariance_residual,
                        report.lightlike_skipped
                    );
                    if let Some(v) = &verdict {
                        s.push_str(&format!("disjunction verdict: {:?}\n", v.verdict));
                    }
                    s
                }
            };
            emit(&output, &rendered)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ClassifyConfig {
    command: &'static str,
    immersion: String,
    structure: String,
    samples: usize,
    seed: u64,
    tol_residual: f64,
    tol_const: f64,
}

#[derive(Serialize)]
struct ClassifyEnvelope<'a> {
    version: &'static str,
    config: ClassifyConfig,
    #[serde(flatten)]
    report: &'a SlantClassification,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct CurveConfig {
    command: &'static str,
    input: String,
    samples: usize,
}

#[derive(Serialize)]
struct CurveEnvelope<'a> {
    version: &'static str,
    config: CurveConfig,
    #[serde(flatten)]
    report: &'a slantlab_core::CurveReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<CurveVerdict>,
}

fn render_classification_text(name: &str, report: &SlantClassification) -> String {
    let mut s = String::new();
    s.push_str(&format!("immersion: {name}\n"));
    s.push_str(&format!(
        "structure class: {} (epsilon {:+})\n",
        report.structure_class.label(),
        report.epsilon as i64
    ));
    s.push_str(&format!("type: {}\n", report.slant_type.label()));
    s.push_str(&format!("lambda: {}\n", format_float(report.lambda)));
    if let Some(theta) = report.theta {
        s.push_str(&format!("theta: {}\n", format_float(theta)));
    }
    s.push_str(&format!(
        "lambda spread: {:.3e}\nP^2 scalarity residual: {:.3e}\n",
        report.lambda_spread, report.residual_p2
    ));
    s.push_str(&format!(
        "induced signature: {:?}\ncausal transfer ok: {}\n",
        report.induced_signature, report.causal_transfer_ok
    ));
    match report.neutral_ok {
        Some(v) => s.push_str(&format!("neutral: {v}\n")),
        None => s.push_str("neutral: not-applicable\n"),
    }
    s.push_str(&format!(
        "samples: {} used, {} skipped (seed {})\n",
        report.samples_used, report.samples_skipped, report.seed
    ));
    s
}
