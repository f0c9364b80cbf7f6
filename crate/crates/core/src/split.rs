//! Lookahead splitting driver.
//!
//! The first decisions branch on the `C` variables of rule-1 premises, the
//! next ones on premise variables scored by `H(x) = occ(x) * occ(-x)`; at the
//! cutoff level each subproblem is simplified, strengthened with the clauses
//! implied by the rule patterns it contains, and handed to the CDCL backend.

use std::collections::{BTreeMap, HashSet};
use std::time::Instant;

use thiserror::Error;

use crate::cdcl::{cdcl_solve, Budget, CdclConfig, CdclOutcome, CdclStats};
use crate::cnf::{propagate, residual, Assignment, Clause, CnfFormula, Lit, Model, Propagation, Var};
use crate::rules::{consequence_of, encode_cnf, match_rules, match_rules_where, verify_match, Consequence, RuleId};
use crate::simplify::{simplify, SimplifyStatus};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SplitError {
    #[error("cutoff offset must be at least 1, got {0}")]
    CutoffOffset(u32),
    #[error("fallback cutoff must be at least 2, got {0}")]
    FallbackCutoff(u32),
}

#[derive(Debug, Clone)]
pub struct SplitConfig {
    /// Decisions taken after the rule-1 variables before calling CDCL.
    pub cutoff_offset: u32,
    /// Cutoff level when the formula has no rule-1 premise.
    pub fallback_cutoff: u32,
    /// Value tried first at every decision.
    pub first_value: bool,
    /// Rounds of match, encode and add at each leaf.
    pub max_rule_passes: u32,
    /// Add the clauses implied by rule matches at the leaves.
    pub use_rules: bool,
    /// Check every leaf match with the exhaustive oracle.
    pub verify_matches: bool,
    /// Caps the number of rule-1 variables branched on.
    pub max_split_vars: Option<usize>,
    /// Record every decision in `SplitStats::decision_trace`.
    pub trace_decisions: bool,
    pub budget: Budget,
    pub cdcl: CdclConfig,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            cutoff_offset: 4,
            fallback_cutoff: 10,
            first_value: true,
            max_rule_passes: 1,
            use_rules: true,
            verify_matches: false,
            max_split_vars: None,
            trace_decisions: false,
            budget: Budget::unlimited(),
            cdcl: CdclConfig::default(),
        }
    }
}

impl SplitConfig {
    pub fn validate(&self) -> Result<(), SplitError> {
        if self.cutoff_offset < 1 {
            return Err(SplitError::CutoffOffset(self.cutoff_offset));
        }
        if self.fallback_cutoff < 2 {
            return Err(SplitError::FallbackCutoff(self.fallback_cutoff));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidateScore {
    pub var: Var,
    pub score: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitStats {
    pub nodes_visited: u64,
    pub cdcl_calls: u64,
    /// Leaf level to number of CDCL calls made there.
    pub cdcl_call_levels: BTreeMap<u32, u64>,
    /// Leaves at which CNF(G) was non-empty.
    pub subproblems_simplified: u64,
    pub rule_matches_total: u64,
    pub rule_matches_by_rule: [u64; 8],
    pub rule_clauses_added: u64,
    /// Matches rejected by the oracle when `verify_matches` is on.
    pub rule_verify_failures: u64,
    /// Leaves closed by the simplifier alone.
    pub leaves_refuted_by_simplify: u64,
    /// Size of P and the clauses added with it.
    pub split_vars: u64,
    pub split_clauses_added: u64,
    pub cdcl: CdclStats,
    /// `(level, variable)` of each decision in search order, when traced.
    pub decision_trace: Vec<(u32, Var)>,
}

impl SplitStats {
    pub fn leaves(&self) -> u64 {
        self.cdcl_calls + self.leaves_refuted_by_simplify
    }

    /// Fraction of leaves where CNF(G) was non-empty.
    pub fn simplified_fraction(&self) -> f64 {
        match self.leaves() {
            0 => 0.0,
            n => self.subproblems_simplified as f64 / n as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitVerdict {
    Sat(Model),
    Unsat,
    Unknown,
}

/// Per-literal clause occurrence counts, XORs excluded.
fn occurrences(formula: &CnfFormula) -> Vec<u64> {
    let mut occ = vec![0u64; 2 * (formula.num_vars() as usize + 1)];
    for c in formula.clauses() {
        for &l in c.lits() {
            occ[l.index()] += 1;
        }
    }
    occ
}

fn h_score(occ: &[u64], var: Var) -> u64 {
    occ[Lit::pos(var).index()] * occ[Lit::neg(var).index()]
}

/// `C` of every rule-1 premise in match order, without repeats, and the
/// formula with `(-C | D)` added for each premise.
pub fn decision_var1(formula: &CnfFormula) -> (Vec<Var>, CnfFormula) {
    let mut out = formula.clone();
    let mut p = Vec::new();
    let mut seen = HashSet::new();
    let mut present: HashSet<Clause> = formula.clauses().iter().cloned().collect();
    for m in match_rules_where(formula, |r| r == RuleId::ALL[0]) {
        let (c, d) = (m.bindings[2], m.bindings[3]);
        if seen.insert(c.var()) {
            p.push(c.var());
        }
        let clause = Clause::new([!c, d]);
        if present.insert(clause.clone()) {
            out.add_clause(clause);
        }
    }
    (p, out)
}

/// `A`, `B` and `D` of every rule-1 premise scored by `H`, highest first,
/// ties by ascending variable.
pub fn decision_var2(formula: &CnfFormula) -> Vec<CandidateScore> {
    let occ = occurrences(formula);
    let mut vars: Vec<Var> = Vec::new();
    for m in match_rules_where(formula, |r| r == RuleId::ALL[0]) {
        for i in [0, 1, 3] {
            vars.push(m.bindings[i].var());
        }
    }
    vars.sort_unstable();
    vars.dedup();
    let mut q: Vec<CandidateScore> = vars
        .into_iter()
        .map(|var| CandidateScore {
            var,
            score: h_score(&occ, var),
        })
        .collect();
    q.sort_by(|a, b| b.score.cmp(&a.score).then(a.var.cmp(&b.var)));
    q
}

/// Variables occurring in a clause or XOR, as a membership table.
fn occurring(formula: &CnfFormula) -> Vec<bool> {
    let mut seen = vec![false; formula.num_vars() as usize + 1];
    for c in formula.clauses() {
        for v in c.vars() {
            seen[v as usize] = true;
        }
    }
    for x in formula.xors() {
        for &v in x.vars() {
            seen[v as usize] = true;
        }
    }
    seen
}

fn best_by_h(occ: &[u64], candidates: impl Iterator<Item = Var>) -> Option<Var> {
    candidates
        .map(|v| (h_score(occ, v), v))
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        .map(|(_, v)| v)
}

struct Interrupted;

struct Search<'a> {
    config: &'a SplitConfig,
    stats: SplitStats,
    p: Vec<Var>,
    q: Vec<Var>,
    /// Level at which branching left P; the cutoff is this plus the offset.
    q_start: Option<u32>,
    fallback: bool,
}

impl Search<'_> {
    fn out_of_budget(&self) -> bool {
        if let Some(d) = self.config.budget.deadline {
            if Instant::now() >= d {
                return true;
            }
        }
        if let Some(max) = self.config.budget.max_conflicts {
            if self.stats.cdcl.conflicts >= max {
                return true;
            }
        }
        false
    }

    fn cutoff(&self) -> Option<u32> {
        if self.fallback {
            Some(self.config.fallback_cutoff)
        } else {
            self.q_start.map(|s| s + self.config.cutoff_offset)
        }
    }

    fn pick(&mut self, f: &CnfFormula, level: u32) -> Option<Var> {
        let live = occurring(f);
        let p_limit = self.p.len() as u32;
        if self.q_start.is_none() && !self.fallback {
            if level < p_limit {
                if let Some(&v) = self.p.iter().find(|&&v| live[v as usize]) {
                    return Some(v);
                }
            }
            self.q_start = Some(level);
            self.q = decision_var2(f).into_iter().map(|c| c.var).collect();
            if self.cutoff() == Some(level) {
                return None;
            }
        }
        let occ = occurrences(f);
        best_by_h(&occ, self.q.iter().copied().filter(|&v| live[v as usize]))
            .or_else(|| best_by_h(&occ, (1..=f.num_vars()).filter(|&v| live[v as usize])))
    }

    fn node(&mut self, f: &CnfFormula, level: u32) -> Result<Option<Model>, Interrupted> {
        self.stats.nodes_visited += 1;
        if self.out_of_budget() {
            return Err(Interrupted);
        }
        if f.is_empty() {
            return Ok(Some(Model::new(f.num_vars())));
        }
        if f.has_empty_clause() {
            return Ok(None);
        }
        if self.cutoff() == Some(level) {
            return self.leaf(f, level);
        }
        let var = match self.pick(f, level) {
            Some(v) => v,
            None => return self.leaf(f, level),
        };
        if self.config.trace_decisions {
            self.stats.decision_trace.push((level, var));
        }
        let saved = (self.q_start, self.q.clone());
        for value in [self.config.first_value, !self.config.first_value] {
            let mut a = Assignment::new(f.num_vars());
            a.decide(Lit::new(var, value));
            if let Propagation::Conflict(_) = propagate(f, &mut a) {
                self.stats.nodes_visited += 1;
                continue;
            }
            let g = residual(f, &a).expect("propagation reached a fixpoint");
            let child = self.node(&g, level + 1);
            (self.q_start, self.q) = saved.clone();
            if let Some(mut model) = child? {
                for &l in a.trail() {
                    model.set(l.var(), l.is_positive());
                }
                return Ok(Some(model));
            }
        }
        Ok(None)
    }

    fn leaf(&mut self, f: &CnfFormula, level: u32) -> Result<Option<Model>, Interrupted> {
        let simp = simplify(f);
        if simp.status == SimplifyStatus::ProvenUnsat {
            self.stats.leaves_refuted_by_simplify += 1;
            return Ok(None);
        }
        let mut g = simp.formula;
        if self.config.use_rules {
            let mut present: HashSet<Clause> = g.clauses().iter().cloned().collect();
            let mut added_here = 0u64;
            let mut nonempty = false;
            for _ in 0..self.config.max_rule_passes {
                let matches = match_rules(&g);
                self.stats.rule_matches_total += matches.len() as u64;
                for m in &matches {
                    self.stats.rule_matches_by_rule[m.rule.get() as usize] += 1;
                    if self.config.verify_matches && verify_match(m, &g) != Ok(true) {
                        self.stats.rule_verify_failures += 1;
                    }
                }
                let consequences: Vec<Consequence> = matches.iter().map(consequence_of).collect();
                let mut fresh = 0;
                let encoded = encode_cnf(&consequences);
                nonempty |= !encoded.is_empty();
                for c in encoded {
                    if present.insert(c.clone()) {
                        g.add_clause(c);
                        fresh += 1;
                    }
                }
                added_here += fresh;
                if fresh == 0 {
                    break;
                }
            }
            self.stats.rule_clauses_added += added_here;
            if nonempty {
                self.stats.subproblems_simplified += 1;
            }
        }
        let budget = Budget {
            max_conflicts: self
                .config
                .budget
                .max_conflicts
                .map(|m| m.saturating_sub(self.stats.cdcl.conflicts)),
            deadline: self.config.budget.deadline,
        };
        let (outcome, cdcl_stats) = cdcl_solve(&g.expanded_clauses(), g.num_vars(), &budget, &self.config.cdcl);
        self.stats.cdcl_calls += 1;
        *self.stats.cdcl_call_levels.entry(level).or_default() += 1;
        self.stats.cdcl.accumulate(&cdcl_stats);
        match outcome {
            CdclOutcome::Sat(mut model) => {
                simp.substitution.extend_model(&mut model);
                model.resize(f.num_vars());
                Ok(Some(model))
            }
            CdclOutcome::Unsat => Ok(None),
            CdclOutcome::Unknown => Err(Interrupted),
        }
    }
}

/// Solves a formula whose XORs have already been extracted.
///
/// A SAT verdict carries a model over all variables of `formula`.
pub fn solve_split(formula: &CnfFormula, config: &SplitConfig) -> Result<(SplitVerdict, SplitStats), SplitError> {
    config.validate()?;
    let mut search = Search {
        config,
        stats: SplitStats::default(),
        p: Vec::new(),
        q: Vec::new(),
        q_start: None,
        fallback: false,
    };
    search.stats.nodes_visited += 1;
    let mut root = Assignment::new(formula.num_vars());
    if formula.has_empty_clause() || propagate(formula, &mut root) != Propagation::Fixpoint {
        return Ok((SplitVerdict::Unsat, search.stats));
    }
    let start = residual(formula, &root).expect("propagation reached a fixpoint");
    search.stats.nodes_visited -= 1;

    // Rules-off runs branch in the same order but keep the formula unchanged.
    let (mut p, augmented) = decision_var1(&start);
    if let Some(cap) = config.max_split_vars {
        p.truncate(cap);
    }
    search.stats.split_vars = p.len() as u64;
    search.fallback = p.is_empty();
    search.p = p;
    let start = if config.use_rules {
        search.stats.split_clauses_added = (augmented.clauses().len() - start.clauses().len()) as u64;
        augmented
    } else {
        start
    };

    let verdict = match search.node(&start, 1) {
        Ok(Some(mut model)) => {
            model.resize(formula.num_vars());
            for &l in root.trail() {
                model.set(l.var(), l.is_positive());
            }
            SplitVerdict::Sat(model)
        }
        Ok(None) => SplitVerdict::Unsat,
        Err(Interrupted) => SplitVerdict::Unknown,
    };
    Ok((verdict, search.stats))
}
