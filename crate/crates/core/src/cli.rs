//! Command-line front end.
//!
//! Exit codes: 0 success, 1 invariant or bound violation, 2 usage or I/O error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::apparatus::{
    self, compose, diagonal_all, diagonal_rotation, hadamard_lr, haar_random, load_apparatus_with_tol,
    projective_separate, save_apparatus, uopt_n1, Apparatus,
};
use crate::bellcore::VarCount;
use crate::detection::{signature_table_with_eps, SignatureTable, Statistics};
use crate::error::LabError;
use crate::partition::{
    class_signature_report, partition_classes, two_copy_from_tables, verify_bound, BoundMode, Partition,
};
use crate::search::{bound_campaign, hill_climb, CampaignConfig, CampaignReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest `n` accepted without `--allow-large`.
pub const DEFAULT_N_CAP: usize = 5;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "LELM_LAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    #[value(name = "one-copy")]
    OneCopy,
    #[value(name = "separate", alias = "separate-channel")]
    Separate,
}

impl From<ModeArg> for BoundMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::OneCopy => BoundMode::OneCopy,
            ModeArg::Separate => BoundMode::SeparateChannel,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lelm-lab", version, about = "Hyper-Bell state distinguishability under linear evolution and local measurement")]
pub struct Cli {
    /// Number of two-state variables per particle.
    #[arg(long, global = true, default_value_t = 1)]
    pub n: usize,

    /// Exchange statistics: boson or fermion.
    #[arg(long, global = true, default_value = "boson")]
    pub stats: Statistics,

    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: OutputFormat,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Support threshold for amplitudes and unitarity tolerance for loaded files.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,

    /// Permit n above 5 (up to 8).
    #[arg(long, global = true)]
    pub allow_large: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single-copy class partition of one apparatus.
    Partition {
        #[arg(long, default_value = "hadamard")]
        apparatus: String,
    },
    /// Joint partition with one copy through each apparatus.
    TwoCopy {
        #[arg(long)]
        app1: String,
        #[arg(long)]
        app2: String,
    },
    /// Haar fuzzing of the class-count ceiling.
    Verify {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, value_enum, default_value = "one-copy")]
        mode: ModeArg,
    },
    /// Full detection signature table.
    Signatures {
        #[arg(long, default_value = "hadamard")]
        apparatus: String,
    },
    /// Random-restart hill climb on class count.
    Search {
        #[arg(long, default_value_t = 500)]
        budget: usize,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
        #[arg(long, default_value_t = 0.1)]
        step_scale: f64,
        #[arg(long, value_enum, default_value = "one-copy")]
        mode: ModeArg,
        /// Apparatus used as the starting point of a restart (repeatable).
        #[arg(long)]
        warm: Vec<String>,
        /// Write the best apparatus found to this file.
        #[arg(long)]
        save_best: Option<PathBuf>,
    },
    /// Print a builder's unitary.
    Matrix {
        #[arg(long, default_value = "hadamard")]
        apparatus: String,
        /// Also write it as an apparatus file.
        #[arg(long)]
        save: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Violation(String),
}

impl From<LabError> for CliError {
    fn from(e: LabError) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// One factor of an apparatus expression.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Term {
    Hadamard,
    SeparateProjective,
    Identity,
    Uopt4,
    DiagonalAll,
    Diagonal(Vec<usize>),
    Haar(u64),
}

impl FromStr for Term {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        Ok(match s {
            "hadamard" => Term::Hadamard,
            "separate-projective" | "separate" => Term::SeparateProjective,
            "identity" => Term::Identity,
            "uopt4" => Term::Uopt4,
            "diagonal:all" | "diagonal" => Term::DiagonalAll,
            _ => {
                if let Some(list) = s.strip_prefix("diagonal:") {
                    let vars = list
                        .split(',')
                        .map(|v| v.trim().parse::<usize>().map_err(|_| format!("bad variable index '{v}'")))
                        .collect::<std::result::Result<Vec<_>, _>>()?;
                    Term::Diagonal(vars)
                } else if let Some(seed) = s.strip_prefix("haar:") {
                    Term::Haar(seed.parse().map_err(|_| format!("bad Haar seed '{seed}'"))?)
                } else {
                    return Err(format!("unknown apparatus '{s}'"));
                }
            }
        })
    }
}

impl Term {
    fn build(&self, n: VarCount) -> crate::Result<Apparatus> {
        Ok(match self {
            Term::Hadamard => hadamard_lr(n),
            Term::SeparateProjective | Term::Identity => projective_separate(n),
            Term::Uopt4 => {
                if n.get() != 1 {
                    return Err(LabError::InvalidConfig("uopt4 is defined for n = 1 only".into()));
                }
                uopt_n1()
            }
            Term::DiagonalAll => diagonal_all(n),
            Term::Diagonal(vars) => diagonal_rotation(n, vars)?,
            Term::Haar(seed) => haar_random(n, *seed),
        })
    }
}

/// A builtin expression such as `hadamard+diagonal:all` (rightmost factor acts
/// first) or the path of an apparatus file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApparatusSpecifier {
    Builtin(Vec<String>),
    File(PathBuf),
}

impl ApparatusSpecifier {
    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        let path = Path::new(s);
        if path.is_file() {
            return Ok(Self::File(path.to_path_buf()));
        }
        let terms: Vec<&str> = s.split('+').collect();
        for t in &terms {
            Term::from_str(t).map_err(|e| format!("{e} (and no such file)"))?;
        }
        Ok(Self::Builtin(terms.into_iter().map(str::to_owned).collect()))
    }

    pub fn resolve(&self, n: VarCount, tol: f64) -> crate::Result<Apparatus> {
        match self {
            Self::File(path) => {
                let app = load_apparatus_with_tol(path, tol)?;
                if app.n() != n {
                    return Err(LabError::DimensionMismatch {
                        expected: n.modes(),
                        found: app.dim(),
                    });
                }
                Ok(app)
            }
            Self::Builtin(terms) => {
                let mut acc: Option<Apparatus> = None;
                for t in terms {
                    let term = Term::from_str(t).map_err(LabError::InvalidConfig)?;
                    let app = term.build(n)?;
                    acc = Some(match acc {
                        None => app,
                        Some(outer) => compose(&outer, &app)?,
                    });
                }
                acc.ok_or_else(|| LabError::InvalidConfig("empty apparatus expression".into()))
            }
        }
    }
}

fn resolve(spec: &str, n: VarCount, tol: f64) -> CliResult<Apparatus> {
    let parsed = ApparatusSpecifier::parse(spec).map_err(CliError::Usage)?;
    Ok(parsed.resolve(n, tol)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub members: Vec<String>,
    pub unique_outcomes: Vec<(usize, usize)>,
    pub shared_outcomes: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub n: usize,
    pub stats: Statistics,
    pub apparatus: String,
    pub class_count: usize,
    pub bound: usize,
    pub channel_separated: bool,
    pub classes: Vec<ClassEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoCopyReport {
    pub n: usize,
    pub stats: Statistics,
    pub app1: String,
    pub app2: String,
    pub class_count: usize,
    pub complete: bool,
    pub classes: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureOutcome {
    pub i: usize,
    pub j: usize,
    pub re: f64,
    pub im: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureRowReport {
    pub label: String,
    pub total_probability: f64,
    pub outcomes: Vec<SignatureOutcome>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignatureReport {
    pub n: usize,
    pub stats: Statistics,
    pub apparatus: String,
    pub rows: Vec<SignatureRowReport>,
}

fn class_names(p: &Partition) -> Vec<Vec<String>> {
    p.classes()
        .iter()
        .map(|c| c.iter().map(|l| l.ascii()).collect())
        .collect()
}

fn partition_report(spec: &str, app: &Apparatus, table: &SignatureTable) -> CliResult<(PartitionReport, Partition)> {
    let p = partition_classes(table)?;
    let sigs = class_signature_report(table, &p)?;
    let classes = sigs
        .into_iter()
        .map(|c| ClassEntry {
            members: c.members.iter().map(|l| l.ascii()).collect(),
            unique_outcomes: c.unique.iter().map(|o| o.modes()).collect(),
            shared_outcomes: c.shared.iter().map(|o| o.modes()).collect(),
        })
        .collect();
    let report = PartitionReport {
        n: app.n().get(),
        stats: table.stats,
        apparatus: spec.to_owned(),
        class_count: p.class_count(),
        bound: BoundMode::OneCopy.bound(app.n()),
        channel_separated: app.is_channel_separated(),
        classes,
    };
    Ok((report, p))
}

fn check_partition(p: &Partition, app: &Apparatus) -> CliResult<()> {
    if !p.is_valid() {
        return Err(CliError::Violation("partition is not a disjoint cover".into()));
    }
    let mut modes = vec![BoundMode::OneCopy];
    if app.is_channel_separated() {
        modes.push(BoundMode::SeparateChannel);
    }
    for mode in modes {
        let r = verify_bound(p, app.n(), mode);
        if !r.pass {
            return Err(CliError::Violation(format!(
                "{} classes exceed the {} bound {}",
                r.class_count,
                mode.as_str(),
                r.bound
            )));
        }
    }
    Ok(())
}

fn fmt_pairs(pairs: &[(usize, usize)]) -> String {
    if pairs.is_empty() {
        return "-".into();
    }
    pairs.iter().map(|(i, j)| format!("({i},{j})")).collect::<Vec<_>>().join(" ")
}

fn unicode_label(ascii: &str) -> String {
    ascii
        .split(" x ")
        .map(|t| crate::bellcore::BellToken::parse(t).map(|t| t.unicode()).unwrap_or(t))
        .collect::<Vec<_>>()
        .join("⊗")
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_text<F>(header: &[&str], fill: F) -> String
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    fill(&mut w).expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}

struct Context {
    n: VarCount,
    stats: Statistics,
    format: OutputFormat,
    seed: u64,
    tol: f64,
}

fn cmd_partition(ctx: &Context, spec: &str) -> CliResult<String> {
    let app = resolve(spec, ctx.n, ctx.tol)?;
    let table = signature_table_with_eps(&app, ctx.stats, ctx.tol);
    let (report, p) = partition_report(spec, &app, &table)?;
    check_partition(&p, &app)?;
    Ok(match ctx.format {
        OutputFormat::Json => json(&report),
        OutputFormat::Csv => csv_text(&["class", "size", "label"], |w| {
            for (c, class) in report.classes.iter().enumerate() {
                for m in &class.members {
                    w.write_record([(c + 1).to_string(), class.members.len().to_string(), m.clone()])?;
                }
            }
            Ok(())
        }),
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "n = {}, statistics = {}, apparatus = {}", report.n, report.stats, spec);
            let _ = writeln!(s, "class count: {} (one-copy bound {})", report.class_count, report.bound);
            for (c, class) in report.classes.iter().enumerate() {
                let names: Vec<String> = class.members.iter().map(|m| unicode_label(m)).collect();
                let _ = writeln!(s, "class {} ({}): {}", c + 1, names.len(), names.join(", "));
                let _ = writeln!(s, "  unique outcomes: {}", fmt_pairs(&class.unique_outcomes));
                let _ = writeln!(s, "  shared outcomes: {}", fmt_pairs(&class.shared_outcomes));
            }
            s
        }
    })
}

fn cmd_two_copy(ctx: &Context, spec1: &str, spec2: &str) -> CliResult<String> {
    let a1 = resolve(spec1, ctx.n, ctx.tol)?;
    let a2 = resolve(spec2, ctx.n, ctx.tol)?;
    let t1 = signature_table_with_eps(&a1, ctx.stats, ctx.tol);
    let t2 = signature_table_with_eps(&a2, ctx.stats, ctx.tol);
    let p = two_copy_from_tables(&t1, &t2)?;
    let single = partition_classes(&t1)?;
    if !p.is_valid() || !p.refines(&single) {
        return Err(CliError::Violation("two-copy partition does not refine the single-copy partition".into()));
    }
    let report = TwoCopyReport {
        n: ctx.n.get(),
        stats: ctx.stats,
        app1: spec1.to_owned(),
        app2: spec2.to_owned(),
        class_count: p.class_count(),
        complete: p.is_complete(),
        classes: class_names(&p),
    };
    Ok(match ctx.format {
        OutputFormat::Json => json(&report),
        OutputFormat::Csv => csv_text(&["class", "size", "label"], |w| {
            for (c, class) in report.classes.iter().enumerate() {
                for m in class {
                    w.write_record([(c + 1).to_string(), class.len().to_string(), m.clone()])?;
                }
            }
            Ok(())
        }),
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "n = {}, statistics = {}, copies: {} | {}", report.n, report.stats, spec1, spec2);
            let _ = writeln!(s, "class count: {} of {}, complete = {}", report.class_count, ctx.n.labels(), report.complete);
            for (c, class) in report.classes.iter().enumerate() {
                let names: Vec<String> = class.iter().map(|m| unicode_label(m)).collect();
                let _ = writeln!(s, "class {}: {}", c + 1, names.join(", "));
            }
            s
        }
    })
}

fn campaign_output(ctx: &Context, report: &CampaignReport, title: &str) -> String {
    match ctx.format {
        OutputFormat::Json => json(report),
        OutputFormat::Csv => csv_text(&["class_count", "frequency"], |w| {
            for (count, freq) in &report.histogram {
                w.write_record([count.to_string(), freq.to_string()])?;
            }
            Ok(())
        }),
        OutputFormat::Text => {
            let cfg = &report.config;
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{title}: n = {}, statistics = {}, mode = {}, runs = {}, seed = {}",
                cfg.n,
                cfg.stats,
                cfg.mode.as_str(),
                cfg.trials,
                cfg.seed
            );
            let _ = writeln!(s, "bound: {}", report.bound);
            let _ = writeln!(s, "max observed: {} (run {})", report.max_observed, report.best_trial);
            let _ = writeln!(s, "histogram:");
            for (count, freq) in &report.histogram {
                let _ = writeln!(s, "  {count:>4} classes: {freq}");
            }
            let _ = writeln!(s, "violations: {}", report.violations.len());
            s
        }
    }
}

fn violation_message(report: &CampaignReport) -> Option<String> {
    report.violations.first().map(|v| {
        format!(
            "{} violation(s); first: run {} produced {} classes above bound {}",
            report.violations.len(),
            v.trial,
            v.class_count,
            v.bound
        )
    })
}

fn cmd_verify(ctx: &Context, trials: usize, mode: ModeArg) -> CliResult<(String, Option<String>)> {
    let cfg = CampaignConfig::new(ctx.n, ctx.stats, trials, ctx.seed, mode.into())?;
    let report = bound_campaign(&cfg);
    Ok((campaign_output(ctx, &report, "verify"), violation_message(&report)))
}

fn cmd_signatures(ctx: &Context, spec: &str) -> CliResult<String> {
    let app = resolve(spec, ctx.n, ctx.tol)?;
    let table = signature_table_with_eps(&app, ctx.stats, ctx.tol);
    let rows: Vec<SignatureRowReport> = table
        .rows
        .iter()
        .map(|r| SignatureRowReport {
            label: r.label.ascii(),
            total_probability: r.total_probability(),
            outcomes: r
                .entries
                .iter()
                .map(|e| {
                    let (i, j) = e.outcome.modes();
                    SignatureOutcome {
                        i,
                        j,
                        re: e.amplitude.re,
                        im: e.amplitude.im,
                        probability: e.probability,
                    }
                })
                .collect(),
        })
        .collect();
    if let Some(bad) = rows.iter().find(|r| (r.total_probability - 1.0).abs() > 1e-9) {
        return Err(CliError::Violation(format!(
            "probabilities for {} sum to {}",
            bad.label, bad.total_probability
        )));
    }
    let report = SignatureReport {
        n: ctx.n.get(),
        stats: ctx.stats,
        apparatus: spec.to_owned(),
        rows,
    };
    Ok(match ctx.format {
        OutputFormat::Json => json(&report),
        OutputFormat::Csv => csv_text(&["label", "i", "j", "re", "im", "probability"], |w| {
            for r in &report.rows {
                for o in &r.outcomes {
                    w.write_record([
                        r.label.clone(),
                        o.i.to_string(),
                        o.j.to_string(),
                        format!("{:e}", o.re),
                        format!("{:e}", o.im),
                        format!("{:e}", o.probability),
                    ])?;
                }
            }
            Ok(())
        }),
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "n = {}, statistics = {}, apparatus = {}", report.n, report.stats, spec);
            for r in &report.rows {
                let _ = writeln!(s, "{} (total probability {:.12})", unicode_label(&r.label), r.total_probability);
                for o in &r.outcomes {
                    let _ = writeln!(
                        s,
                        "  ({},{})  amplitude {:+.9} {:+.9}i  probability {:.9}",
                        o.i, o.j, o.re, o.im, o.probability
                    );
                }
            }
            s
        }
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    ctx: &Context,
    budget: usize,
    restarts: usize,
    step_scale: f64,
    mode: ModeArg,
    warm: &[String],
    save_best: Option<&Path>,
) -> CliResult<(String, Option<String>)> {
    let warm_starts = warm
        .iter()
        .map(|w| resolve(w, ctx.n, ctx.tol))
        .collect::<CliResult<Vec<_>>>()?;
    let restarts = restarts.max(warm_starts.len());
    let cfg = CampaignConfig::new(ctx.n, ctx.stats, restarts, ctx.seed, mode.into())?;
    let report = hill_climb(&cfg, budget, step_scale, &warm_starts)?;
    if let Some(path) = save_best {
        save_apparatus(&report.best_apparatus, path)?;
    }
    Ok((campaign_output(ctx, &report, "search"), violation_message(&report)))
}

fn cmd_matrix(ctx: &Context, spec: &str, save: Option<&Path>) -> CliResult<String> {
    let app = resolve(spec, ctx.n, ctx.tol)?;
    if let Some(path) = save {
        save_apparatus(&app, path)?;
    }
    let dim = app.dim();
    Ok(match ctx.format {
        OutputFormat::Json => apparatus::to_file_string(&app),
        OutputFormat::Csv => csv_text(&["row", "col", "re", "im"], |w| {
            for i in 0..dim {
                for m in 0..dim {
                    let z = app.entry(i, m);
                    w.write_record([
                        (i + 1).to_string(),
                        (m + 1).to_string(),
                        format!("{:.16e}", z.re),
                        format!("{:.16e}", z.im),
                    ])?;
                }
            }
            Ok(())
        }),
        OutputFormat::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "n = {}, apparatus = {}, {}x{} (row i = output mode i)", ctx.n, spec, dim, dim);
            for i in 0..dim {
                let row: Vec<String> = (0..dim)
                    .map(|m| {
                        let z = app.entry(i, m);
                        format!("{:+.6}{:+.6}i", z.re, z.im)
                    })
                    .collect();
                let _ = writeln!(s, "{}", row.join("  "));
            }
            s
        }
    })
}

fn dispatch(cli: &Cli) -> CliResult<(String, Option<String>)> {
    if cli.n > DEFAULT_N_CAP && !cli.allow_large {
        return Err(CliError::Usage(format!(
            "n = {} exceeds the default cap {DEFAULT_N_CAP}; pass --allow-large",
            cli.n
        )));
    }
    if !(cli.tolerance > 0.0 && cli.tolerance.is_finite()) {
        return Err(CliError::Usage(format!("invalid tolerance {}", cli.tolerance)));
    }
    let ctx = Context {
        n: VarCount::new(cli.n)?,
        stats: cli.stats,
        format: cli.format,
        seed: cli.seed,
        tol: cli.tolerance,
    };
    match &cli.command {
        Command::Partition { apparatus } => Ok((cmd_partition(&ctx, apparatus)?, None)),
        Command::TwoCopy { app1, app2 } => Ok((cmd_two_copy(&ctx, app1, app2)?, None)),
        Command::Verify { trials, mode } => cmd_verify(&ctx, *trials, *mode),
        Command::Signatures { apparatus } => Ok((cmd_signatures(&ctx, apparatus)?, None)),
        Command::Search {
            budget,
            restarts,
            step_scale,
            mode,
            warm,
            save_best,
        } => cmd_search(&ctx, *budget, *restarts, *step_scale, *mode, warm, save_best.as_deref()),
        Command::Matrix { apparatus, save } => Ok((cmd_matrix(&ctx, apparatus, save.as_deref())?, None)),
    }
}

/// Parses `args` (including the program name), runs the command, writes the
/// report to `out` and diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok((report, violation)) => {
            let _ = out.write_all(report.as_bytes());
            match violation {
                Some(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    EXIT_VIOLATION
                }
                None => EXIT_OK,
            }
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Violation(msg)) => {
            let _ = writeln!(err, "invariant failure: {msg}");
            EXIT_VIOLATION
        }
    }
}

/// Caps the global rayon pool from [`THREADS_ENV`], if set.
pub fn configure_threads() {
    if let Some(threads) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        if threads > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        }
    }
}
