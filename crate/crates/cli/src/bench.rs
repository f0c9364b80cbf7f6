//! Rules-on versus rules-off comparison over a directory of instances.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use logicsat::dimacs::parse_dimacs;

use crate::pipeline::{solve_formula, SolveOptions, Verdict};
use crate::record::{BenchRecord, CdclRecord, SplitRecord, SCHEMA_VERSION};

pub const CONFIGS: [&str; 2] = ["rules-on", "rules-off"];

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub path: PathBuf,
}

/// Regular files of `dir` in name order.
pub fn collect_instances(dir: &Path) -> std::io::Result<Vec<Instance>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        if entry.file_type()?.is_file() {
            out.push(Instance {
                name: entry.file_name().to_string_lossy().into_owned(),
                path: entry.path(),
            });
        }
    }
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

/// Reads an `c expect SAT` or `c expect UNSAT` comment.
pub fn expected_status(text: &[u8]) -> Option<Verdict> {
    String::from_utf8_lossy(text).lines().find_map(|line| {
        match line.trim().strip_prefix("c expect ")?.trim() {
            "SAT" => Some(Verdict::Sat),
            "UNSAT" => Some(Verdict::Unsat),
            _ => None,
        }
    })
}

/// Solves every readable instance under both configurations with `jobs`
/// workers. `sink` sees each record as it completes; the returned records are
/// sorted by instance then configuration.
pub fn run_bench(
    instances: &[Instance],
    base: &SolveOptions,
    jobs: usize,
    warn: &mut dyn FnMut(String),
    sink: &mut dyn FnMut(&BenchRecord),
) -> Vec<BenchRecord> {
    let mut loaded = Vec::new();
    for inst in instances {
        let text = match std::fs::read(&inst.path) {
            Ok(t) => t,
            Err(e) => {
                warn(format!("skipping {}: {e}", inst.name));
                continue;
            }
        };
        match parse_dimacs(&text) {
            Ok((f, _)) => loaded.push((inst.name.clone(), expected_status(&text), f)),
            Err(e) => warn(format!("skipping {}: {e}", inst.name)),
        }
    }
    let tasks: Vec<(usize, &str)> = (0..loaded.len())
        .flat_map(|i| CONFIGS.iter().map(move |&c| (i, c)))
        .collect();
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<BenchRecord>();
    let mut records = Vec::with_capacity(tasks.len());
    std::thread::scope(|scope| {
        for _ in 0..jobs.max(1) {
            let tx = tx.clone();
            let (tasks, loaded, next) = (&tasks, &loaded, &next);
            scope.spawn(move || loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, config)) = tasks.get(k) else { break };
                let (name, expected, formula) = &loaded[i];
                let opts = SolveOptions {
                    use_rules: config == "rules-on",
                    ..base.clone()
                };
                let run = solve_formula(formula, &opts).expect("options were validated");
                let record = BenchRecord {
                    schema: SCHEMA_VERSION,
                    kind: "bench".to_string(),
                    instance: name.clone(),
                    config: config.to_string(),
                    expected: *expected,
                    verdict: run.verdict,
                    wall_ms: run.wall.as_secs_f64() * 1000.0,
                    timeout: opts.timeout,
                    split: run.split.as_ref().map(SplitRecord::from),
                    cdcl: CdclRecord::from(&run.cdcl),
                };
                if tx.send(record).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for record in rx {
            sink(&record);
            records.push(record);
        }
    });
    sort_records(&mut records);
    records
}

pub fn sort_records(records: &mut [BenchRecord]) {
    records.sort_by(|a, b| (&a.instance, &a.config).cmp(&(&b.instance, &b.config)));
}

pub fn parse_records(text: &str) -> Result<Vec<BenchRecord>, serde_json::Error> {
    let mut out = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        out.push(serde_json::from_str(line)?);
    }
    sort_records(&mut out);
    Ok(out)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Aggregate {
    pub runs: usize,
    pub leaves: u64,
    pub simplified: u64,
    pub call_levels: BTreeMap<u32, u64>,
    pub conflicts: u64,
}

impl Aggregate {
    pub fn fraction(&self) -> f64 {
        if self.leaves == 0 {
            0.0
        } else {
            self.simplified as f64 / self.leaves as f64
        }
    }
}

pub fn aggregate(records: &[BenchRecord], config: &str) -> Aggregate {
    let mut agg = Aggregate::default();
    for r in records.iter().filter(|r| r.config == config) {
        agg.runs += 1;
        agg.conflicts += r.cdcl.conflicts;
        if let Some(s) = &r.split {
            agg.leaves += s.leaves;
            agg.simplified += s.subproblems_simplified;
            for (&level, &n) in &s.cdcl_call_levels {
                *agg.call_levels.entry(level).or_default() += n;
            }
        }
    }
    agg
}

/// Instances decided by both configurations with different verdicts.
pub fn disagreements(records: &[BenchRecord]) -> Vec<String> {
    let mut by_instance: BTreeMap<&str, Vec<Verdict>> = BTreeMap::new();
    for r in records {
        if r.verdict != Verdict::Unknown {
            by_instance.entry(&r.instance).or_default().push(r.verdict);
        }
    }
    by_instance
        .into_iter()
        .filter(|(_, v)| v.windows(2).any(|w| w[0] != w[1]))
        .map(|(name, _)| name.to_string())
        .collect()
}

fn status_cell(v: Option<Verdict>) -> &'static str {
    match v {
        Some(Verdict::Sat) => "yes",
        Some(Verdict::Unsat) => "no",
        _ => "?",
    }
}

fn time_cell(r: Option<&BenchRecord>) -> String {
    match r {
        None => "-".to_string(),
        Some(r) if r.verdict == Verdict::Unknown => match r.timeout {
            Some(t) => format!(">{t}"),
            None => "unknown".to_string(),
        },
        Some(r) => format!("{:.3}", r.wall_ms / 1000.0),
    }
}

/// Comparison table and aggregate lines, rendered from records alone.
pub fn render_table(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    let width = records.iter().map(|r| r.instance.len()).max().unwrap_or(8).max(8);
    let _ = writeln!(
        out,
        "{:<width$}  {:<3}  {:>10} {:>10}  {:>10} {:>10}",
        "instance", "SAT", "on (s)", "conflicts", "off (s)", "conflicts"
    );
    let mut rows: BTreeMap<&str, [Option<&BenchRecord>; 2]> = BTreeMap::new();
    for r in records {
        if let Some(slot) = CONFIGS.iter().position(|&c| c == r.config) {
            rows.entry(&r.instance).or_default()[slot] = Some(r);
        }
    }
    for (name, [on, off]) in &rows {
        let expected = on.or(*off).and_then(|r| r.expected);
        let decided = on.or(*off).map(|r| r.verdict).filter(|v| *v != Verdict::Unknown);
        let conflicts = |r: &Option<&BenchRecord>| r.map_or("-".to_string(), |r| r.cdcl.conflicts.to_string());
        let _ = writeln!(
            out,
            "{:<width$}  {:<3}  {:>10} {:>10}  {:>10} {:>10}",
            name,
            status_cell(expected.or(decided)),
            time_cell(*on),
            conflicts(on),
            time_cell(*off),
            conflicts(off)
        );
    }
    for config in CONFIGS {
        let agg = aggregate(records, config);
        let levels: Vec<String> = agg.call_levels.iter().map(|(l, n)| format!("{l}:{n}")).collect();
        let _ = writeln!(
            out,
            "c {config}: runs={} conflicts={} leaves={} simplified={} fraction={:.3} call-levels [{}]",
            agg.runs,
            agg.conflicts,
            agg.leaves,
            agg.simplified,
            agg.fraction(),
            levels.join(" ")
        );
    }
    let bad = disagreements(records);
    if bad.is_empty() {
        let _ = writeln!(out, "c verdicts agree on all {} instances", rows.len());
    } else {
        let _ = writeln!(out, "c verdict mismatch: {}", bad.join(", "));
    }
    out
}
