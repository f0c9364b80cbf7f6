//! Command-line front end: `solve`, `gen-hwb`, `extract` and `bench`.

pub mod bench;
pub mod pipeline;
pub mod record;

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use logicsat::cnf::{evaluate, CnfFormula};
use logicsat::dimacs::{parse_dimacs, write_dimacs_with_comments, ParseError, XorMode};
use logicsat::hwb::{build_miter, miter_comments};
use logicsat::oracle::{brute_force_sat, VAR_CAP};
use logicsat::rules::{count_by_rule, match_rules};
use logicsat::simplify::simplify;
use logicsat::split::SplitError;
use logicsat::xor::extract_xors;
use thiserror::Error;

use crate::pipeline::{solve_formula, SolveOptions, Verdict};
use crate::record::{to_line, StatsRecord};

pub const EXIT_ERROR: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error(transparent)]
    Config(#[from] SplitError),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: bad record: {source}")]
    Record {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Check(String),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Parser)]
#[command(name = "logicsat", version, about = "XOR- and rule-aware splitting SAT solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a DIMACS file.
    Solve(SolveArgs),
    /// Write the hidden-weighted-bit equivalence miter for `n` inputs.
    GenHwb(GenHwbArgs),
    /// Report recovered XORs and rule matches.
    Extract(ExtractArgs),
    /// Compare rules-on and rules-off runs over a directory.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SolverFlags {
    /// Solve with CDCL only, without splitting.
    #[arg(long)]
    pub no_split: bool,
    /// Decisions after the rule-1 variables before calling CDCL.
    #[arg(long, default_value_t = 4)]
    pub cutoff_offset: u32,
    /// CDCL call level when no rule-1 premise exists.
    #[arg(long, default_value_t = 10)]
    pub fallback_cutoff: u32,
    #[arg(long, default_value_t = logicsat::xor::DEFAULT_MAX_ARITY)]
    pub max_xor_arity: usize,
    /// Per-instance limit in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[arg(long, env = "LOGICSAT_SEED", default_value_t = 0)]
    pub seed: u64,
}

impl SolverFlags {
    pub fn options(&self, use_rules: bool) -> SolveOptions {
        SolveOptions {
            use_rules,
            split: !self.no_split,
            cutoff_offset: self.cutoff_offset,
            fallback_cutoff: self.fallback_cutoff,
            max_xor_arity: self.max_xor_arity,
            timeout: self.timeout,
            seed: self.seed,
            verify_matches: false,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    pub file: PathBuf,
    #[command(flatten)]
    pub flags: SolverFlags,
    /// Do not add the clauses implied by rule matches.
    #[arg(long)]
    pub no_rules: bool,
    /// Cross-check the verdict with exhaustive enumeration (small inputs only).
    #[arg(long)]
    pub verify: bool,
    /// Check every rule match with exhaustive enumeration.
    #[arg(long)]
    pub debug_rules: bool,
    /// Append the stats record to this file.
    #[arg(long)]
    pub stats_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenHwbArgs {
    pub n: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExtractArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = logicsat::xor::DEFAULT_MAX_ARITY)]
    pub max_xor_arity: usize,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Directory of DIMACS files.
    pub dir: Option<PathBuf>,
    #[command(flatten)]
    pub flags: SolverFlags,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Append one record per run to this file.
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// Render the table from a record file instead of solving.
    #[arg(long, conflicts_with = "dir")]
    pub replay: Option<PathBuf>,
}

/// Runs a command, writing solver output to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::GenHwb(a) => cmd_gen_hwb(&a, out),
        Command::Extract(a) => cmd_extract(&a, out),
        Command::Bench(a) => cmd_bench(&a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "c error: {e}");
            EXIT_ERROR
        }
    }
}

fn read_formula(path: &Path, out: &mut dyn Write) -> Result<CnfFormula, CliError> {
    let text = std::fs::read(path).map_err(io_err(path))?;
    let (formula, diag) = parse_dimacs(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    for (line, msg) in &diag.warnings {
        let _ = writeln!(out, "c warning: line {line}: {msg}");
    }
    Ok(formula)
}

fn instance_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let formula = read_formula(&args.file, out)?;
    let mut options = args.flags.options(!args.no_rules);
    options.verify_matches = args.debug_rules;
    let run = solve_formula(&formula, &options)?;
    let w = |out: &mut dyn Write, s: &str| writeln!(out, "{s}").map_err(io_err(Path::new("<stdout>")));

    if let Some(model) = &run.model {
        if evaluate(&formula, model) != Ok(true) {
            return Err(CliError::Check("model does not satisfy the input formula".into()));
        }
    }
    if args.verify {
        if formula.num_vars() <= VAR_CAP {
            let oracle_sat = brute_force_sat(&formula).expect("within the cap").is_sat();
            let agrees = match run.verdict {
                Verdict::Sat => oracle_sat,
                Verdict::Unsat => !oracle_sat,
                Verdict::Unknown => true,
            };
            if !agrees {
                return Err(CliError::Check(format!(
                    "verdict {:?} contradicts exhaustive enumeration",
                    run.verdict
                )));
            }
            w(out, "c verify: exhaustive enumeration agrees")?;
        } else {
            w(
                out,
                &format!("c verify: skipped, {} variables exceed {VAR_CAP}", formula.num_vars()),
            )?;
        }
    }
    if let Some(split) = &run.split {
        if args.debug_rules {
            w(
                out,
                &format!("c debug-rules: {} matches failed verification", split.rule_verify_failures),
            )?;
        }
    }
    w(out, run.verdict.status_line())?;
    if let Some(model) = &run.model {
        let mut line = String::from("v");
        for l in model.literals() {
            line.push(' ');
            line.push_str(&l.to_dimacs().to_string());
        }
        line.push_str(" 0");
        w(out, &line)?;
    }
    let record = to_line(&StatsRecord::new(&instance_name(&args.file), &options, &run));
    w(out, &format!("c stats {record}"))?;
    w(out, &format!("c time {:.3}", run.wall.as_secs_f64()))?;
    if let Some(path) = &args.stats_out {
        append_line(path, &record)?;
    }
    Ok(run.verdict.exit_code())
}

fn append_line(path: &Path, line: &str) -> Result<(), CliError> {
    let mut f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(io_err(path))?;
    writeln!(f, "{line}").map_err(io_err(path))
}

pub fn cmd_gen_hwb(args: &GenHwbArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    if args.n < 2 {
        return Err(CliError::Usage(format!("n must be at least 2, got {}", args.n)));
    }
    let text = write_dimacs_with_comments(&build_miter(args.n), XorMode::Expand, &miter_comments(args.n));
    match &args.output {
        Some(path) => std::fs::write(path, text).map_err(io_err(path))?,
        None => out.write_all(&text).map_err(io_err(Path::new("<stdout>")))?,
    }
    Ok(0)
}

pub fn cmd_extract(args: &ExtractArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let formula = read_formula(&args.file, out)?;
    let (extracted, report) = extract_xors(&formula, args.max_xor_arity);
    let simplified = simplify(&extracted).formula;
    let matches = match_rules(&simplified);
    let counts = count_by_rule(&matches);
    let mut text = format!("xors {}\n", report.total());
    for (arity, n) in &report.xors_found {
        text.push_str(&format!("xors arity={arity} {n}\n"));
    }
    text.push_str(&format!("matches {}\n", matches.len()));
    let per_rule: Vec<String> = (1..=7).map(|r| format!("r{r}={}", counts[r])).collect();
    text.push_str(&format!("rules {}\n", per_rule.join(" ")));
    for m in &matches {
        text.push_str(&m.dump());
        text.push('\n');
    }
    out.write_all(text.as_bytes()).map_err(io_err(Path::new("<stdout>")))?;
    Ok(0)
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let records = if let Some(path) = &args.replay {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        bench::parse_records(&text).map_err(|source| CliError::Record {
            path: path.clone(),
            source,
        })?
    } else {
        let dir = args
            .dir
            .as_ref()
            .ok_or_else(|| CliError::Usage("bench needs a directory or --replay".into()))?;
        let base = args.flags.options(true);
        logicsat::split::SplitConfig {
            cutoff_offset: base.cutoff_offset,
            fallback_cutoff: base.fallback_cutoff,
            ..Default::default()
        }
        .validate()?;
        let instances = bench::collect_instances(dir).map_err(io_err(dir))?;
        let mut sink_error = None;
        let records = bench::run_bench(
            &instances,
            &base,
            args.jobs,
            &mut |msg| {
                let _ = writeln!(err, "c warning: {msg}");
            },
            &mut |record| {
                if let Some(path) = &args.records {
                    if let Err(e) = append_line(path, &to_line(record)) {
                        sink_error.get_or_insert(e);
                    }
                }
            },
        );
        if let Some(e) = sink_error {
            return Err(e);
        }
        records
    };
    out.write_all(bench::render_table(&records).as_bytes())
        .map_err(io_err(Path::new("<stdout>")))?;
    Ok(if bench::disagreements(&records).is_empty() {
        0
    } else {
        EXIT_ERROR
    })
}
