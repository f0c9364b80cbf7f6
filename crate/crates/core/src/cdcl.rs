//! Conflict-driven clause learning over plain clauses.
//!
//! Two-watched-literal propagation with blocker literals, first-UIP learning
//! with recursive minimization, activity-ordered decisions with phase saving,
//! Luby restarts and periodic removal of high-LBD learned clauses.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{Clause, Lit, Model, Var};

#[derive(Debug, Clone)]
pub struct CdclConfig {
    /// Activity decay per conflict.
    pub var_decay: f64,
    pub clause_decay: f64,
    /// Conflicts per Luby unit.
    pub restart_unit: u64,
    /// Conflicts before the first clause database reduction.
    pub reduce_first: u64,
    /// Growth factor of the interval between reductions.
    pub reduce_growth: f64,
    /// Learned clauses with LBD at most this are never removed.
    pub keep_lbd: u32,
    /// Perturbs the initial variable order when non-zero.
    pub seed: u64,
    /// Check learned clauses and watch invariants on every step, and keep
    /// every learned clause. Slow; for tests.
    pub audit: bool,
}

impl Default for CdclConfig {
    fn default() -> Self {
        CdclConfig {
            var_decay: 0.95,
            clause_decay: 0.999,
            restart_unit: 64,
            reduce_first: 2000,
            reduce_growth: 1.1,
            keep_lbd: 3,
            seed: 0,
            audit: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub max_conflicts: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn unlimited() -> Budget {
        Budget::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CdclOutcome {
    Sat(Model),
    Unsat,
    /// Budget ran out.
    Unknown,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CdclStats {
    pub conflicts: u64,
    pub decisions: u64,
    pub propagations: u64,
    pub restarts: u64,
    pub learned_clauses: u64,
    pub learned_literals: u64,
    pub minimized_literals: u64,
    pub deleted_clauses: u64,
    pub reductions: u64,
    pub audit_failures: u64,
}

impl CdclStats {
    pub fn accumulate(&mut self, other: &CdclStats) {
        self.conflicts += other.conflicts;
        self.decisions += other.decisions;
        self.propagations += other.propagations;
        self.restarts += other.restarts;
        self.learned_clauses += other.learned_clauses;
        self.learned_literals += other.learned_literals;
        self.minimized_literals += other.minimized_literals;
        self.deleted_clauses += other.deleted_clauses;
        self.reductions += other.reductions;
        self.audit_failures += other.audit_failures;
    }
}

/// Solves a clause list over variables `1..=num_vars`.
pub fn cdcl_solve(clauses: &[Clause], num_vars: u32, budget: &Budget, config: &CdclConfig) -> (CdclOutcome, CdclStats) {
    let mut solver = Solver::new(num_vars, config.clone());
    for c in clauses {
        solver.add_clause(c);
    }
    let outcome = solver.solve(budget);
    (outcome, solver.stats)
}

/// Minisat's Luby sequence: 1 1 2 1 1 2 4 1 1 2 ...
pub fn luby(y: f64, mut x: u64) -> f64 {
    let mut size = 1u64;
    let mut seq = 0i32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    y.powi(seq)
}

pub type ClauseRef = u32;

#[derive(Clone, Copy)]
struct Watcher {
    cref: ClauseRef,
    blocker: Lit,
}

struct ClauseData {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    lbd: u32,
    activity: f32,
}

const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;

/// Max-heap of variables ordered by activity.
struct VarHeap {
    heap: Vec<Var>,
    pos: Vec<Option<usize>>,
}

impl VarHeap {
    fn new(n: usize) -> VarHeap {
        VarHeap {
            heap: Vec::with_capacity(n),
            pos: vec![None; n + 1],
        }
    }

    fn contains(&self, v: Var) -> bool {
        self.pos[v as usize].is_some()
    }

    fn insert(&mut self, v: Var, act: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.pos[v as usize] = Some(i);
        self.sift_up(i, act);
    }

    fn increased(&mut self, v: Var, act: &[f64]) {
        if let Some(i) = self.pos[v as usize] {
            self.sift_up(i, act);
        }
    }

    fn pop(&mut self, act: &[f64]) -> Option<Var> {
        let top = *self.heap.first()?;
        let last = self.heap.pop().expect("non-empty");
        self.pos[top as usize] = None;
        if !self.heap.is_empty() {
            self.heap[0] = last;
            self.pos[last as usize] = Some(0);
            self.sift_down(0, act);
        }
        Some(top)
    }

    fn better(a: Var, b: Var, act: &[f64]) -> bool {
        let (x, y) = (act[a as usize], act[b as usize]);
        x > y || (x == y && a < b)
    }

    fn sift_up(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            let p = self.heap[parent];
            if !Self::better(v, p, act) {
                break;
            }
            self.heap[i] = p;
            self.pos[p as usize] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }

    fn sift_down(&mut self, mut i: usize, act: &[f64]) {
        let v = self.heap[i];
        let n = self.heap.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let child = if r < n && Self::better(self.heap[r], self.heap[l], act) {
                r
            } else {
                l
            };
            if !Self::better(self.heap[child], v, act) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.pos[self.heap[i] as usize] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.pos[v as usize] = Some(i);
    }
}

/// Search state of one CDCL run.
pub struct Solver {
    num_vars: u32,
    config: CdclConfig,
    clauses: Vec<ClauseData>,
    learnts: Vec<ClauseRef>,
    watches: Vec<Vec<Watcher>>,
    values: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<ClauseRef>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    clause_inc: f32,
    phase: Vec<bool>,
    heap: VarHeap,
    seen: Vec<bool>,
    to_clear: Vec<Lit>,
    unsat: bool,
    pub stats: CdclStats,
    learned_log: Vec<Clause>,
}

impl Solver {
    pub fn new(num_vars: u32, config: CdclConfig) -> Solver {
        let n = num_vars as usize;
        let mut activity = vec![0.0; n + 1];
        if config.seed != 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            for a in activity.iter_mut().skip(1) {
                *a = rng.random::<f64>() * 1e-5;
            }
        }
        let mut heap = VarHeap::new(n);
        for v in 1..=num_vars {
            heap.insert(v, &activity);
        }
        Solver {
            num_vars,
            config,
            clauses: Vec::new(),
            learnts: Vec::new(),
            watches: vec![Vec::new(); 2 * (n + 1)],
            values: vec![UNDEF; 2 * (n + 1)],
            level: vec![0; n + 1],
            reason: vec![None; n + 1],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            activity,
            var_inc: 1.0,
            clause_inc: 1.0,
            phase: vec![false; n + 1],
            heap,
            seen: vec![false; n + 1],
            to_clear: Vec::new(),
            unsat: false,
            stats: CdclStats::default(),
            learned_log: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Learned clauses recorded in audit mode.
    pub fn learned_log(&self) -> &[Clause] {
        &self.learned_log
    }

    #[inline]
    fn value(&self, l: Lit) -> i8 {
        self.values[l.index()]
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn assign(&mut self, l: Lit, reason: Option<ClauseRef>) {
        let v = l.var() as usize;
        debug_assert_eq!(self.values[l.index()], UNDEF);
        self.values[l.index()] = TRUE;
        self.values[(!l).index()] = FALSE;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Adds an input clause at level 0. Returns false once the formula is
    /// known to be unsatisfiable.
    pub fn add_clause(&mut self, clause: &Clause) -> bool {
        if self.unsat {
            return false;
        }
        assert_eq!(self.decision_level(), 0, "clauses are added before search");
        if clause.is_tautology() {
            return true;
        }
        let mut lits = Vec::with_capacity(clause.len());
        for &l in clause.lits() {
            assert!(l.var() <= self.num_vars, "literal {l} beyond {} variables", self.num_vars);
            match self.value(l) {
                TRUE => return true,
                FALSE => {}
                _ => lits.push(l),
            }
        }
        match lits.len() {
            0 => {
                self.unsat = true;
                false
            }
            1 => {
                self.assign(lits[0], None);
                if self.propagate().is_some() {
                    self.unsat = true;
                }
                !self.unsat
            }
            _ => {
                self.attach(lits, false, 0);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool, lbd: u32) -> ClauseRef {
        let cref = self.clauses.len() as ClauseRef;
        self.watches[lits[0].index()].push(Watcher {
            cref,
            blocker: lits[1],
        });
        self.watches[lits[1].index()].push(Watcher {
            cref,
            blocker: lits[0],
        });
        self.clauses.push(ClauseData {
            lits,
            learnt,
            deleted: false,
            lbd,
            activity: 0.0,
        });
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    /// Propagates the trail; returns a conflicting clause if one arises.
    fn propagate(&mut self) -> Option<ClauseRef> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.index()]);
            let mut i = 0;
            let mut j = 0;
            while i < ws.len() {
                let w = ws[i];
                i += 1;
                if self.value(w.blocker) == TRUE {
                    ws[j] = w;
                    j += 1;
                    continue;
                }
                let cref = w.cref as usize;
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                let keep = Watcher {
                    cref: w.cref,
                    blocker: first,
                };
                if first != w.blocker && self.value(first) == TRUE {
                    ws[j] = keep;
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref].lits[k];
                    if self.value(l) != FALSE {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[l.index()].push(keep);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = keep;
                j += 1;
                if self.value(first) == FALSE {
                    conflict = Some(w.cref);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        j += 1;
                        i += 1;
                    }
                    self.qhead = self.trail.len();
                } else {
                    self.assign(first, Some(w.cref));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.index()] = ws;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: Var) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in self.activity.iter_mut() {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.increased(v, &self.activity);
    }

    fn bump_clause(&mut self, cref: ClauseRef) {
        let c = &mut self.clauses[cref as usize];
        if !c.learnt {
            return;
        }
        c.activity += self.clause_inc;
        if c.activity > 1e20 {
            for &r in &self.learnts {
                self.clauses[r as usize].activity *= 1e-20;
            }
            self.clause_inc *= 1e-20;
        }
    }

    fn abstract_level(&self, v: Var) -> u32 {
        1 << (self.level[v as usize] & 31)
    }

    /// First-UIP analysis of a conflict above level 0.
    ///
    /// Returns the minimized learned clause, asserting literal first and a
    /// literal of the backjump level second, and the backjump level.
    pub fn analyze_conflict(&mut self, conflict: ClauseRef) -> (Vec<Lit>, u32) {
        debug_assert!(self.decision_level() > 0);
        let current = self.decision_level();
        let mut learnt: Vec<Lit> = vec![Lit::pos(1)];
        let mut path = 0;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        let mut confl = conflict;
        loop {
            self.bump_clause(confl);
            let start = if p.is_some() { 1 } else { 0 };
            let len = self.clauses[confl as usize].lits.len();
            for k in start..len {
                let q = self.clauses[confl as usize].lits[k];
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(q.var());
                    if self.level[v] >= current {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            self.seen[lit.var() as usize] = false;
            path -= 1;
            if path == 0 {
                break;
            }
            confl = self.reason[lit.var() as usize].expect("implied literal has a reason");
        }
        learnt[0] = !p.expect("conflict has a literal at the current level");

        // Recursive minimization.
        self.to_clear.clear();
        self.to_clear.extend_from_slice(&learnt);
        let levels = learnt[1..].iter().fold(0u32, |acc, l| acc | self.abstract_level(l.var()));
        let before = learnt.len();
        let mut kept = 1;
        for k in 1..learnt.len() {
            let l = learnt[k];
            if self.reason[l.var() as usize].is_none() || !self.lit_redundant(l, levels) {
                learnt[kept] = l;
                kept += 1;
            }
        }
        learnt.truncate(kept);
        self.stats.minimized_literals += (before - kept) as u64;
        for l in std::mem::take(&mut self.to_clear) {
            self.seen[l.var() as usize] = false;
        }

        let backjump = if learnt.len() == 1 {
            0
        } else {
            let mut best = 1;
            for k in 2..learnt.len() {
                if self.level[learnt[k].var() as usize] > self.level[learnt[best].var() as usize] {
                    best = k;
                }
            }
            learnt.swap(1, best);
            self.level[learnt[1].var() as usize]
        };
        (learnt, backjump)
    }

    fn lit_redundant(&mut self, p: Lit, levels: u32) -> bool {
        let top = self.to_clear.len();
        let mut stack = vec![p];
        while let Some(q) = stack.pop() {
            let r = self.reason[q.var() as usize].expect("only implied literals are expanded");
            let len = self.clauses[r as usize].lits.len();
            for k in 1..len {
                let l = self.clauses[r as usize].lits[k];
                let v = l.var() as usize;
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                if self.reason[v].is_some() && self.abstract_level(l.var()) & levels != 0 {
                    self.seen[v] = true;
                    stack.push(l);
                    self.to_clear.push(l);
                } else {
                    for x in self.to_clear.drain(top..) {
                        self.seen[x.var() as usize] = false;
                    }
                    return false;
                }
            }
        }
        true
    }

    fn lbd(&mut self, lits: &[Lit]) -> u32 {
        let mut levels: Vec<u32> = lits.iter().map(|l| self.level[l.var() as usize]).collect();
        levels.sort_unstable();
        levels.dedup();
        levels.len() as u32
    }

    fn backtrack_to(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level as usize];
        for k in (keep..self.trail.len()).rev() {
            let l = self.trail[k];
            let v = l.var();
            self.values[l.index()] = UNDEF;
            self.values[(!l).index()] = UNDEF;
            self.reason[v as usize] = None;
            self.phase[v as usize] = l.is_positive();
            self.heap.insert(v, &self.activity);
        }
        self.trail.truncate(keep);
        self.trail_lim.truncate(level as usize);
        self.qhead = keep;
    }

    fn locked(&self, cref: ClauseRef) -> bool {
        let c = &self.clauses[cref as usize];
        let first = c.lits[0];
        self.value(first) == TRUE && self.reason[first.var() as usize] == Some(cref)
    }

    fn reduce_db(&mut self) {
        self.stats.reductions += 1;
        let keep_lbd = self.config.keep_lbd;
        let mut candidates: Vec<ClauseRef> = self
            .learnts
            .iter()
            .copied()
            .filter(|&r| {
                let c = &self.clauses[r as usize];
                !c.deleted && c.lbd > keep_lbd && !self.locked(r)
            })
            .collect();
        candidates.sort_by(|&a, &b| {
            let (x, y) = (&self.clauses[a as usize], &self.clauses[b as usize]);
            y.lbd
                .cmp(&x.lbd)
                .then(x.activity.partial_cmp(&y.activity).unwrap_or(std::cmp::Ordering::Equal))
                .then(a.cmp(&b))
        });
        let remove = candidates.len() / 2;
        for &r in &candidates[..remove] {
            let c = &mut self.clauses[r as usize];
            c.deleted = true;
            c.lits = Vec::new();
            self.stats.deleted_clauses += 1;
        }
        let clauses = &self.clauses;
        for ws in self.watches.iter_mut() {
            ws.retain(|w| !clauses[w.cref as usize].deleted);
        }
        self.learnts.retain(|&r| !clauses[r as usize].deleted);
    }

    fn budget_exhausted(&self, budget: &Budget) -> bool {
        if let Some(max) = budget.max_conflicts {
            if self.stats.conflicts >= max {
                return true;
            }
        }
        if let Some(deadline) = budget.deadline {
            if self.stats.conflicts.is_multiple_of(64) && Instant::now() >= deadline {
                return true;
            }
        }
        false
    }

    pub fn solve(&mut self, budget: &Budget) -> CdclOutcome {
        if self.unsat {
            return CdclOutcome::Unsat;
        }
        if self.propagate().is_some() {
            self.unsat = true;
            return CdclOutcome::Unsat;
        }
        let mut restarts = 0u64;
        let mut restart_limit = (luby(2.0, restarts) * self.config.restart_unit as f64) as u64;
        let mut conflicts_since_restart = 0u64;
        let mut reduce_interval = self.config.reduce_first as f64;
        let mut next_reduce = self.config.reduce_first;
        if let Some(deadline) = budget.deadline {
            if Instant::now() >= deadline {
                return CdclOutcome::Unknown;
            }
        }
        loop {
            if let Some(confl) = self.propagate() {
                self.stats.conflicts += 1;
                conflicts_since_restart += 1;
                if self.decision_level() == 0 {
                    self.unsat = true;
                    return CdclOutcome::Unsat;
                }
                let (learnt, backjump) = self.analyze_conflict(confl);
                if self.config.audit {
                    self.audit_learnt(&learnt, backjump);
                }
                self.backtrack_to(backjump);
                self.stats.learned_clauses += 1;
                self.stats.learned_literals += learnt.len() as u64;
                if self.config.audit {
                    self.learned_log.push(Clause::new(learnt.iter().copied()));
                    if learnt[1..].iter().any(|&l| self.value(l) != FALSE) || self.value(learnt[0]) != UNDEF {
                        self.stats.audit_failures += 1;
                    }
                }
                if learnt.len() == 1 {
                    self.assign(learnt[0], None);
                } else {
                    let lbd = self.lbd(&learnt);
                    let first = learnt[0];
                    let cref = self.attach(learnt, true, lbd);
                    self.bump_clause(cref);
                    self.assign(first, Some(cref));
                }
                self.var_inc /= self.config.var_decay;
                self.clause_inc /= self.config.clause_decay as f32;
                if self.budget_exhausted(budget) {
                    self.backtrack_to(0);
                    return CdclOutcome::Unknown;
                }
            } else {
                if self.config.audit {
                    self.audit_watches();
                }
                if conflicts_since_restart >= restart_limit {
                    restarts += 1;
                    self.stats.restarts += 1;
                    conflicts_since_restart = 0;
                    restart_limit = (luby(2.0, restarts) * self.config.restart_unit as f64) as u64;
                    self.backtrack_to(0);
                }
                if self.stats.conflicts >= next_reduce {
                    reduce_interval *= self.config.reduce_growth;
                    next_reduce = self.stats.conflicts + reduce_interval as u64;
                    self.reduce_db();
                }
                let mut next = None;
                while let Some(v) = self.heap.pop(&self.activity) {
                    if self.values[Lit::pos(v).index()] == UNDEF {
                        next = Some(v);
                        break;
                    }
                }
                let Some(v) = next else {
                    let values = (1..=self.num_vars)
                        .map(|v| self.values[Lit::pos(v).index()] == TRUE)
                        .collect();
                    self.backtrack_to(0);
                    return CdclOutcome::Sat(Model::from_values(values));
                };
                self.stats.decisions += 1;
                self.trail_lim.push(self.trail.len());
                let lit = Lit::new(v, self.phase[v as usize]);
                self.assign(lit, None);
            }
        }
    }

    fn audit_learnt(&mut self, learnt: &[Lit], backjump: u32) {
        let current = self.decision_level();
        let all_false = learnt.iter().all(|&l| self.value(l) == FALSE);
        let at_current = learnt
            .iter()
            .filter(|l| self.level[l.var() as usize] == current)
            .count();
        let others_below = learnt[1..]
            .iter()
            .all(|l| self.level[l.var() as usize] <= backjump);
        if !all_false || at_current != 1 || !others_below || backjump >= current {
            self.stats.audit_failures += 1;
        }
    }

    /// Every live clause is watched by its first two literals, and a false
    /// watch implies the clause is satisfied.
    fn audit_watches(&mut self) {
        let mut failures = 0;
        for (i, c) in self.clauses.iter().enumerate() {
            if c.deleted {
                continue;
            }
            let cref = i as ClauseRef;
            let watched = |l: Lit| self.watches[l.index()].iter().any(|w| w.cref == cref);
            if !watched(c.lits[0]) || !watched(c.lits[1]) {
                failures += 1;
                continue;
            }
            let false_watch = self.value(c.lits[0]) == FALSE || self.value(c.lits[1]) == FALSE;
            if false_watch && !c.lits.iter().any(|&l| self.value(l) == TRUE) {
                failures += 1;
            }
        }
        self.stats.audit_failures += failures;
    }

    pub fn is_unsat(&self) -> bool {
        self.unsat
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{evaluate, CnfFormula};

    fn solve(f: &CnfFormula) -> (CdclOutcome, CdclStats) {
        let config = CdclConfig {
            audit: true,
            ..CdclConfig::default()
        };
        cdcl_solve(f.clauses(), f.num_vars(), &Budget::unlimited(), &config)
    }

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(|i| luby(2.0, i) as u64).collect();
        assert_eq!(seq, vec![1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }

    #[test]
    fn all_sign_patterns_unsat() {
        let f = CnfFormula::from_dimacs(2, &[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]]);
        let (out, stats) = solve(&f);
        assert_eq!(out, CdclOutcome::Unsat);
        assert_eq!(stats.audit_failures, 0);
    }

    #[test]
    fn sat_model_verifies() {
        let f = CnfFormula::from_dimacs(4, &[&[1, 2], &[-1, 3], &[-3, -2], &[2, 4], &[-4, -1]]);
        let (out, _) = solve(&f);
        let CdclOutcome::Sat(m) = out else { panic!("expected SAT") };
        assert!(evaluate(&f, &m).unwrap());
    }

    #[test]
    fn empty_and_unit_inputs() {
        assert!(matches!(solve(&CnfFormula::new(0)).0, CdclOutcome::Sat(_)));
        let f = CnfFormula::from_dimacs(1, &[&[]]);
        assert_eq!(solve(&f).0, CdclOutcome::Unsat);
        let g = CnfFormula::from_dimacs(2, &[&[1], &[-1, 2], &[-2]]);
        assert_eq!(solve(&g).0, CdclOutcome::Unsat);
    }

    #[test]
    fn single_decision_conflict_learns_unit() {
        // The first decision is -1 (lowest index, saved phase false), which
        // propagates into a conflict; the learned unit forces 1 at level 0.
        let f = CnfFormula::from_dimacs(3, &[&[1, 2], &[1, -2, 3], &[1, -3]]);
        let (out, stats) = solve(&f);
        let CdclOutcome::Sat(m) = out else { panic!("expected SAT") };
        assert!(m.value(1));
        assert_eq!(stats.audit_failures, 0);
        assert!(stats.conflicts >= 1);
    }

    #[test]
    fn conflict_budget_gives_unknown() {
        // Pigeonhole 6 into 5 needs many conflicts.
        let mut f = CnfFormula::new(30);
        let var = |p: u32, h: u32| (p * 5 + h + 1) as i64;
        for p in 0..6 {
            let c: Vec<i64> = (0..5).map(|h| var(p, h)).collect();
            f.add_clause(Clause::from_dimacs(&c));
        }
        for h in 0..5 {
            for p in 0..6 {
                for q in p + 1..6 {
                    f.add_clause(Clause::from_dimacs(&[-var(p, h), -var(q, h)]));
                }
            }
        }
        let budget = Budget {
            max_conflicts: Some(5),
            deadline: None,
        };
        let (out, stats) = cdcl_solve(f.clauses(), 30, &budget, &CdclConfig::default());
        assert_eq!(out, CdclOutcome::Unknown);
        assert_eq!(stats.conflicts, 5);
        let (out, _) = cdcl_solve(f.clauses(), 30, &Budget::unlimited(), &CdclConfig::default());
        assert_eq!(out, CdclOutcome::Unsat);
    }
}
