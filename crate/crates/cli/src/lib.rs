//! Library behind the `neighborly` binary: argument definitions, commands
//! and on-disk formats.
//!
//! Exit codes: 0 success, 1 internal error, 2 usage or input error,
//! 3 verification failure.

pub mod formats;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use neighborly_core::blocks::BlockStream;
use neighborly_core::certificate::{expand_combination, verify_conditions_with, VerifyOptions};
use neighborly_core::construction::{build_with_params, neighborliness_for, ConstructionError, ConstructionParams};
use neighborly_core::hadamard::{import_hadamard, sylvester_of_order, HadamardError, HadamardMatrix};
use neighborly_core::oracle::{
    dominance_sweep_with_cap, projection_containment_with_cap, verify_k_neighborly_with_cap, OracleError, SweepMode,
    DEFAULT_SUBSET_CAP,
};
use neighborly_core::sampling::{self, sample_indices};
use neighborly_core::{Construction, ExactScalar};

use report::{Counts, FailureEntry, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<HadamardError> for CliError {
    fn from(e: HadamardError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::TransformCheck(_) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CapExceeded { .. } | OracleError::SizeOutOfRange { .. } | OracleError::SubsetTooLarge { .. } => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Internal(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "neighborly", version, about = "Neighborly centrally symmetric polytopes from Hadamard matrices")]
pub struct Cli {
    /// Worker threads for parallel sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the 4d vertices of the construction.
    Generate(GenerateArgs),
    /// Check the algebraic certificate conditions (a)-(c).
    Certify(CertifyArgs),
    /// Run an LP oracle sweep.
    Verify(VerifyArgs),
    /// Produce, import, validate or profile a Hadamard matrix.
    Hadamard(HadamardArgs),
}

#[derive(Debug, Args)]
pub struct Source {
    /// Dimension; uses the Sylvester matrix of this order.
    #[arg(long, required_unless_present = "hadamard", conflicts_with = "hadamard")]
    pub d: Option<usize>,
    /// Hadamard matrix file.
    #[arg(long)]
    pub hadamard: Option<PathBuf>,
    /// Override alpha (a rational in [2k/d, 1/(2k)]).
    #[arg(long)]
    pub alpha: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VertexFormat {
    Ext,
    Json,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ext")]
    pub format: VertexFormat,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub source: Source,
    /// Check at most N rows per block, drawn with --seed.
    #[arg(long)]
    pub sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write explicit combination certificates for checked rows.
    #[arg(long)]
    pub emit_certificates: Option<PathBuf>,
    /// Certificates written per block with --emit-certificates.
    #[arg(long, default_value_t = 1000)]
    pub emit_limit: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Sample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Faces,
    Dominant,
    Containment,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: Source,
    /// Subset size (default: floor(sqrt(d)/2)).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "faces")]
    pub check: CheckArg,
    /// Instances drawn in sample mode.
    #[arg(long, default_value_t = 1000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HadamardArgs {
    /// Sylvester matrix of this order.
    #[arg(long, required_unless_present = "import", conflicts_with = "import")]
    pub order: Option<usize>,
    /// Read and validate a matrix file.
    #[arg(long)]
    pub import: Option<PathBuf>,
    /// Report row and column sums and regularity.
    #[arg(long)]
    pub profile: bool,
    /// Write the matrix in text format.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// What a command printed and the exit code it asks for.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn load_hadamard(source: &Source) -> Result<HadamardMatrix, CliError> {
    match (&source.d, &source.hadamard) {
        (_, Some(path)) => Ok(import_hadamard(path)?),
        (Some(d), None) => {
            if *d == 0 {
                return Err(CliError::Input("dimension must be positive".into()));
            }
            Ok(sylvester_of_order(*d)?)
        }
        (None, None) => Err(CliError::Input("pass --d or --hadamard".into())),
    }
}

pub fn load_construction(source: &Source) -> Result<Construction, CliError> {
    let h = load_hadamard(source)?;
    let params = match &source.alpha {
        None => neighborly_core::parameters(h.order())?,
        Some(text) => {
            let alpha: ExactScalar = text
                .parse()
                .map_err(|e| CliError::Input(format!("--alpha: {e}")))?;
            ConstructionParams::with_alpha(h.order(), alpha)?
        }
    };
    Ok(build_with_params(&h, params)?)
}

fn base_report(command: &str, argv: &[String], c: &Construction) -> RunReport {
    let p = c.params();
    let mut r = RunReport::new(command, argv);
    r.d = p.d;
    r.k = p.k;
    r.alpha = p.alpha.to_string();
    r.beta = p.beta.to_string();
    r
}

fn emit(report: &RunReport, out: Option<&Path>) -> Result<String, CliError> {
    let json = report.to_json();
    match out {
        Some(path) => {
            write_file(path, &json)?;
            Ok(String::new())
        }
        None => Ok(json),
    }
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<Outcome, CliError> {
    let c = load_construction(&args.source)?;
    let text = match args.format {
        VertexFormat::Ext => formats::write_ext(&c),
        VertexFormat::Json => formats::write_json(&c),
    };
    let stdout = match &args.out {
        Some(path) => {
            write_file(path, &text)?;
            String::new()
        }
        None => text,
    };
    Ok(Outcome {
        stdout,
        exit_code: EXIT_OK,
    })
}

pub fn cmd_certify(args: &CertifyArgs, argv: &[String]) -> Result<Outcome, CliError> {
    let c = load_construction(&args.source)?;
    let mut options = VerifyOptions {
        seed: args.seed,
        ..VerifyOptions::default()
    };
    if let Some(n) = args.sample {
        if n == 0 {
            return Err(CliError::Input("--sample must be positive".into()));
        }
        options.max_rows = n;
        options.sample_rows = n;
    }
    let start = Instant::now();
    let conditions = verify_conditions_with(&c, options).map_err(|e| CliError::Internal(e.to_string()))?;
    let mut report = base_report("certify", argv, &c);
    report.mode = if conditions.sampled() { "sampled" } else { "exhaustive" }.into();
    report.seed = conditions.sampled().then_some(args.seed);
    let failed: u64 = conditions.blocks.iter().map(|b| b.failure_count).sum();
    let checked = conditions.rows_checked();
    report.counts = Counts {
        checked,
        passed: checked.saturating_sub(failed),
        failed,
    };
    report.min_margin = conditions
        .blocks
        .iter()
        .map(|b| b.min_epsilon.clone())
        .min()
        .map(|v| v.to_string());
    report.passed = conditions.passed();
    report.failures = conditions
        .blocks
        .iter()
        .flat_map(|b| &b.failures)
        .map(|f| FailureEntry {
            index: format!("l={} row={}", f.l, f.index),
            detail: format!("{:?}: {}", f.condition, f.detail),
        })
        .collect();
    if !conditions.structural_identity {
        report.failures.insert(
            0,
            FailureEntry {
                index: "structural".into(),
                detail: "beta * H^T * A differs from the identity".into(),
            },
        );
    }
    let blocks: Vec<_> = conditions
        .blocks
        .iter()
        .map(|b| {
            json!({
                "l": b.l,
                "rows": b.rows,
                "checked": b.checked,
                "sampled": b.sampled,
                "max_abs_entry": b.max_abs_entry,
                "coefficient_sum": [b.coefficient_sum.0, b.coefficient_sum.1],
                "formula_sum": b.formula_sum,
                "formula_matches": b.formula_matches(),
                "min_epsilon": b.min_epsilon,
                "failure_count": b.failure_count,
            })
        })
        .collect();
    report.details = json!({
        "structural_identity": conditions.structural_identity,
        "entry_bound": conditions.entry_bound,
        "row_identity": conditions.row_identity,
        "combinations": conditions.combinations,
        "max_abs_entry": conditions.max_abs_entry,
        "max_rows": options.max_rows,
        "sample_rows": options.sample_rows,
        "blocks": blocks,
    });
    if let Some(path) = &args.emit_certificates {
        write_file(path, &certificates_json(&c, &conditions_indices(&c, &options)?, args.emit_limit)?)?;
    }
    report.duration_seconds = start.elapsed().as_secs_f64();
    Ok(Outcome {
        stdout: emit(&report, args.out.as_deref())?,
        exit_code: if report.passed { EXIT_OK } else { EXIT_VERIFY },
    })
}

/// The rows `verify_conditions_with` checks, per block.
fn conditions_indices(c: &Construction, options: &VerifyOptions) -> Result<Vec<(BlockStream, Vec<u64>)>, CliError> {
    let p = c.params();
    let blocks = neighborly_core::blocks::all_blocks(p.d, p.n, p.k).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(blocks
        .into_iter()
        .map(|b| {
            let rows = b.row_count();
            let indices = if rows > options.max_rows {
                sample_indices(options.seed, b.l() as u64, rows, options.sample_rows)
            } else {
                (0..rows).collect()
            };
            (b, indices)
        })
        .collect())
}

fn certificates_json(c: &Construction, blocks: &[(BlockStream, Vec<u64>)], limit: u64) -> Result<String, CliError> {
    let mut entries = Vec::new();
    for (block, indices) in blocks {
        for &index in indices.iter().take(limit as usize) {
            let row = block.row_at(index);
            let cert = expand_combination(c, &row).map_err(|e| CliError::Internal(e.to_string()))?;
            entries.push(json!({ "l": block.l(), "index": index, "certificate": cert }));
        }
    }
    let doc = json!({
        "schema": formats::SCHEMA_VERSION,
        "d": c.d(),
        "k": c.params().k,
        "alpha": c.params().alpha,
        "beta": c.params().beta,
        "certificates": entries,
    });
    Ok(serde_json::to_string_pretty(&doc).expect("serializable") + "\n")
}

pub fn cmd_verify(args: &VerifyArgs, argv: &[String]) -> Result<Outcome, CliError> {
    let c = load_construction(&args.source)?;
    let guaranteed_k = neighborliness_for(c.d());
    let k = args.k.unwrap_or(c.params().k);
    let mode = match args.mode {
        ModeArg::Exhaustive => SweepMode::Exhaustive,
        ModeArg::Sample => SweepMode::Sample {
            count: args.samples,
            seed: args.seed,
        },
    };
    let cap = sampling::env_cap().unwrap_or(DEFAULT_SUBSET_CAP);
    let start = Instant::now();
    let mut report = base_report("verify", argv, &c);
    report.mode = match args.mode {
        ModeArg::Exhaustive => "exhaustive".into(),
        ModeArg::Sample => "sampled".into(),
    };
    report.seed = (args.mode == ModeArg::Sample).then_some(args.seed);
    let guaranteed = k <= guaranteed_k;
    let (check_name, check_passed, details) = match args.check {
        CheckArg::Faces => {
            let s = verify_k_neighborly_with_cap(&c, k, mode, cap)?;
            report.counts = Counts {
                checked: s.subsets,
                passed: s.faces,
                failed: s.failures,
            };
            report.min_margin = s.min_margin.as_ref().map(ToString::to_string);
            if let Some(f) = &s.first_failure {
                report.failures.push(FailureEntry {
                    index: format!("{:?}", f.subset),
                    detail: format!("{:?}, margin {:?}", f.status, f.margin.as_ref().map(ToString::to_string)),
                });
            }
            ("faces", s.passed(), json!({ "lps_solved": s.lps_solved }))
        }
        CheckArg::Dominant => {
            let s = dominance_sweep_with_cap(&c, k, mode, cap)?;
            report.counts = Counts {
                checked: s.subsets,
                passed: s.subsets - s.dominant,
                failed: s.dominant,
            };
            report.min_margin = s.min_margin.as_ref().map(ToString::to_string);
            if let Some(subset) = &s.first_dominant {
                report.failures.push(FailureEntry {
                    index: format!("{subset:?}"),
                    detail: "dominant subset".into(),
                });
            }
            ("dominant", s.passed(), json!({}))
        }
        CheckArg::Containment => {
            let s = projection_containment_with_cap(&c, k, mode, cap)?;
            report.counts = Counts {
                checked: s.vertices,
                passed: s.vertices - s.violations,
                failed: s.violations,
            };
            report.min_margin = s.min_margin.as_ref().map(ToString::to_string);
            if s.violations > 0 {
                if let Some(w) = &s.argmin {
                    report.failures.push(FailureEntry {
                        index: format!("support {:?} signs {:?}", w.support(), w.signs()),
                        detail: "vertex projects outside the projected cube".into(),
                    });
                }
            }
            ("containment", s.holds(), json!({ "lps_solved": s.lps_solved, "strict": s.strict() }))
        }
    };
    report.passed = check_passed;
    let mut details = details;
    details["check"] = json!(check_name);
    details["subset_size"] = json!(k);
    details["guaranteed"] = json!(guaranteed);
    report.details = details;
    // the sweep's k replaces the construction's in the report header
    report.k = k;
    report.duration_seconds = start.elapsed().as_secs_f64();
    let exit_code = if check_passed || !guaranteed { EXIT_OK } else { EXIT_VERIFY };
    Ok(Outcome {
        stdout: emit(&report, args.out.as_deref())?,
        exit_code,
    })
}

pub fn cmd_hadamard(args: &HadamardArgs) -> Result<Outcome, CliError> {
    let (h, source) = match (&args.order, &args.import) {
        (_, Some(path)) => (import_hadamard(path)?, path.display().to_string()),
        (Some(order), None) => {
            if *order == 0 {
                return Err(CliError::Input("order must be positive".into()));
            }
            (sylvester_of_order(*order)?, "sylvester".to_string())
        }
        (None, None) => return Err(CliError::Input("pass --order or --import".into())),
    };
    if let Some(path) = &args.out {
        write_file(path, &h.to_text())?;
    }
    let mut doc = json!({
        "schema": formats::SCHEMA_VERSION,
        "command": "hadamard",
        "order": h.order(),
        "source": source,
        "valid": true,
    });
    if args.profile {
        doc["profile"] = serde_json::to_value(h.row_profile()).expect("serializable");
    }
    Ok(Outcome {
        stdout: serde_json::to_string_pretty(&doc).expect("serializable") + "\n",
        exit_code: EXIT_OK,
    })
}

/// Parse `argv` (including the program name), run the command on a pool of
/// `--jobs` threads, and return the printed output and exit code.
pub fn run(argv: &[String]) -> Outcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                return Outcome {
                    stdout: text,
                    exit_code: code,
                };
            }
            eprint!("{text}");
            return Outcome {
                stdout: String::new(),
                exit_code: code,
            };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be positive");
            return Outcome {
                stdout: String::new(),
                exit_code: EXIT_INPUT,
            };
        }
        pool = pool.num_threads(jobs);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("internal error: {e}");
            return Outcome {
                stdout: String::new(),
                exit_code: EXIT_INTERNAL,
            };
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Certify(a) => cmd_certify(a, argv),
        Command::Verify(a) => cmd_verify(a, argv),
        Command::Hadamard(a) => cmd_hadamard(a),
    });
    match result {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            Outcome {
                stdout: String::new(),
                exit_code: e.exit_code(),
            }
        }
    }
}
