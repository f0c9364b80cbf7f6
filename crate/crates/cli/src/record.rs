//! Line-delimited JSON records.
//!
//! Solve records carry no timing so that repeated runs produce identical
//! lines; bench records add wall time.

use std::collections::BTreeMap;

use logicsat::cdcl::CdclStats;
use logicsat::split::SplitStats;
use serde::{Deserialize, Serialize};

use crate::pipeline::{RunOutcome, SolveOptions, Verdict};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdclRecord {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learned_clauses: u64,
    pub deleted_clauses: u64,
}

impl From<&CdclStats> for CdclRecord {
    fn from(s: &CdclStats) -> Self {
        CdclRecord {
            conflicts: s.conflicts,
            decisions: s.decisions,
            propagations: s.propagations,
            restarts: s.restarts,
            learned_clauses: s.learned_clauses,
            deleted_clauses: s.deleted_clauses,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRecord {
    pub split_vars: u64,
    pub split_clauses_added: u64,
    pub nodes_visited: u64,
    pub cdcl_calls: u64,
    pub cdcl_call_levels: BTreeMap<u32, u64>,
    pub leaves: u64,
    pub leaves_refuted_by_simplify: u64,
    pub subproblems_simplified: u64,
    pub rule_matches_total: u64,
    /// Indexed by rule id minus one.
    pub rule_matches_by_rule: Vec<u64>,
    pub rule_clauses_added: u64,
    pub rule_verify_failures: u64,
}

impl From<&SplitStats> for SplitRecord {
    fn from(s: &SplitStats) -> Self {
        SplitRecord {
            split_vars: s.split_vars,
            split_clauses_added: s.split_clauses_added,
            nodes_visited: s.nodes_visited,
            cdcl_calls: s.cdcl_calls,
            cdcl_call_levels: s.cdcl_call_levels.clone(),
            leaves: s.leaves(),
            leaves_refuted_by_simplify: s.leaves_refuted_by_simplify,
            subproblems_simplified: s.subproblems_simplified,
            rule_matches_total: s.rule_matches_total,
            rule_matches_by_rule: s.rule_matches_by_rule[1..].to_vec(),
            rule_clauses_added: s.rule_clauses_added,
            rule_verify_failures: s.rule_verify_failures,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractionRecord {
    pub xors_by_arity: BTreeMap<usize, usize>,
    pub clauses_consumed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub schema: u32,
    pub kind: String,
    pub instance: String,
    pub verdict: Verdict,
    pub config: SolveOptions,
    pub extraction: ExtractionRecord,
    pub split: Option<SplitRecord>,
    pub cdcl: CdclRecord,
}

impl StatsRecord {
    pub fn new(instance: &str, options: &SolveOptions, run: &RunOutcome) -> StatsRecord {
        StatsRecord {
            schema: SCHEMA_VERSION,
            kind: "solve".to_string(),
            instance: instance.to_string(),
            verdict: run.verdict,
            config: options.clone(),
            extraction: ExtractionRecord {
                xors_by_arity: run.extraction.xors_found.clone(),
                clauses_consumed: run.extraction.clauses_consumed,
            },
            split: run.split.as_ref().map(SplitRecord::from),
            cdcl: CdclRecord::from(&run.cdcl),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub schema: u32,
    pub kind: String,
    pub instance: String,
    /// `rules-on` or `rules-off`.
    pub config: String,
    pub expected: Option<Verdict>,
    pub verdict: Verdict,
    pub wall_ms: f64,
    pub timeout: Option<f64>,
    pub split: Option<SplitRecord>,
    pub cdcl: CdclRecord,
}

pub fn to_line<T: Serialize>(record: &T) -> String {
    serde_json::to_string(record).expect("records serialize")
}
