//! One solver run: XOR extraction, then the splitter or plain CDCL.

use std::time::{Duration, Instant};

use logicsat::cdcl::{cdcl_solve, Budget, CdclConfig, CdclOutcome, CdclStats};
use logicsat::cnf::{CnfFormula, Model};
use logicsat::split::{solve_split, SplitConfig, SplitError, SplitStats, SplitVerdict};
use logicsat::xor::{extract_xors, ExtractionReport};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SolveOptions {
    pub use_rules: bool,
    pub split: bool,
    pub cutoff_offset: u32,
    pub fallback_cutoff: u32,
    pub max_xor_arity: usize,
    /// Seconds.
    pub timeout: Option<f64>,
    pub seed: u64,
    pub verify_matches: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        let split = SplitConfig::default();
        SolveOptions {
            use_rules: true,
            split: true,
            cutoff_offset: split.cutoff_offset,
            fallback_cutoff: split.fallback_cutoff,
            max_xor_arity: logicsat::xor::DEFAULT_MAX_ARITY,
            timeout: None,
            seed: 0,
            verify_matches: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "SAT")]
    Sat,
    #[serde(rename = "UNSAT")]
    Unsat,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl Verdict {
    pub fn status_line(self) -> &'static str {
        match self {
            Verdict::Sat => "s SATISFIABLE",
            Verdict::Unsat => "s UNSATISFIABLE",
            Verdict::Unknown => "s UNKNOWN",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Sat => 10,
            Verdict::Unsat => 20,
            Verdict::Unknown => 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub verdict: Verdict,
    pub model: Option<Model>,
    pub extraction: ExtractionReport,
    pub split: Option<SplitStats>,
    pub cdcl: CdclStats,
    pub wall: Duration,
}

pub fn solve_formula(formula: &CnfFormula, opts: &SolveOptions) -> Result<RunOutcome, SplitError> {
    let start = Instant::now();
    let budget = Budget {
        max_conflicts: None,
        deadline: opts.timeout.map(|s| start + Duration::from_secs_f64(s.max(0.0))),
    };
    let cdcl_config = CdclConfig {
        seed: opts.seed,
        ..CdclConfig::default()
    };
    let (extracted, extraction) = extract_xors(formula, opts.max_xor_arity);
    let (verdict, model, split, cdcl) = if opts.split {
        let config = SplitConfig {
            cutoff_offset: opts.cutoff_offset,
            fallback_cutoff: opts.fallback_cutoff,
            use_rules: opts.use_rules,
            verify_matches: opts.verify_matches,
            budget,
            cdcl: cdcl_config,
            ..SplitConfig::default()
        };
        let (v, stats) = solve_split(&extracted, &config)?;
        let cdcl = stats.cdcl;
        match v {
            SplitVerdict::Sat(m) => (Verdict::Sat, Some(m), Some(stats), cdcl),
            SplitVerdict::Unsat => (Verdict::Unsat, None, Some(stats), cdcl),
            SplitVerdict::Unknown => (Verdict::Unknown, None, Some(stats), cdcl),
        }
    } else {
        let (outcome, stats) = cdcl_solve(
            &extracted.expanded_clauses(),
            extracted.num_vars(),
            &budget,
            &cdcl_config,
        );
        match outcome {
            CdclOutcome::Sat(m) => (Verdict::Sat, Some(m), None, stats),
            CdclOutcome::Unsat => (Verdict::Unsat, None, None, stats),
            CdclOutcome::Unknown => (Verdict::Unknown, None, None, stats),
        }
    };
    Ok(RunOutcome {
        verdict,
        model,
        extraction,
        split,
        cdcl,
        wall: start.elapsed(),
    })
}
