//! Literals, clauses, XOR constraints, mixed formulas and partial assignments.
//!
//! Variables are 1-based (DIMACS convention). A [`CnfFormula`] holds plain
//! clauses next to parity constraints; both take part in unit propagation.

use std::fmt;
use std::ops::Not;

use thiserror::Error;

/// A variable index, 1-based.
pub type Var = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("model assigns {got} variables but the formula has {needed}")]
    PartialModel { needed: usize, got: usize },
    #[error("assignment is not a conflict-free propagation fixpoint: {0}")]
    NotFixpoint(String),
}

/// A signed variable reference, packed as `var << 1 | negated`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    /// Largest variable index a literal can carry.
    pub const MAX_VAR: Var = (1 << 30) - 1;

    #[inline]
    pub fn new(var: Var, positive: bool) -> Lit {
        debug_assert!((1..=Self::MAX_VAR).contains(&var), "variable {var} out of range");
        Lit((var << 1) | (!positive) as u32)
    }

    #[inline]
    pub fn pos(var: Var) -> Lit {
        Lit::new(var, true)
    }

    #[inline]
    pub fn neg(var: Var) -> Lit {
        Lit::new(var, false)
    }

    /// Builds a literal from a non-zero signed DIMACS integer.
    pub fn from_dimacs(value: i64) -> Lit {
        assert!(value != 0, "0 is not a literal");
        Lit::new(value.unsigned_abs() as Var, value > 0)
    }

    #[inline]
    pub fn to_dimacs(self) -> i64 {
        let v = self.var() as i64;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    #[inline]
    pub fn var(self) -> Var {
        self.0 >> 1
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Dense index suitable for per-literal tables of size `2 * (num_vars + 1)`.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn from_index(index: usize) -> Lit {
        Lit(index as u32)
    }

    /// The literal with the same variable that is true when `value` is assigned.
    #[inline]
    pub fn with_value(var: Var, value: bool) -> Lit {
        Lit::new(var, value)
    }
}

impl Not for Lit {
    type Output = Lit;
    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals, kept sorted and free of duplicates.
///
/// A clause holding both `l` and `!l` is a tautology; it is kept as is and
/// reported by [`Clause::is_tautology`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Clause {
        let mut lits: Vec<Lit> = lits.into_iter().collect();
        lits.sort_unstable();
        lits.dedup();
        Clause { lits }
    }

    pub fn from_dimacs(lits: &[i64]) -> Clause {
        Clause::new(lits.iter().map(|&l| Lit::from_dimacs(l)))
    }

    pub fn empty() -> Clause {
        Clause { lits: Vec::new() }
    }

    pub fn unit(lit: Lit) -> Clause {
        Clause { lits: vec![lit] }
    }

    #[inline]
    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.lits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    /// Sorted order puts `l` and `!l` next to each other.
    pub fn is_tautology(&self) -> bool {
        self.lits.windows(2).any(|w| w[0].var() == w[1].var())
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var())
    }

    /// True when every literal of `self` also occurs in `other`.
    pub fn subsumes(&self, other: &Clause) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut rest = other.lits.iter();
        'outer: for lit in &self.lits {
            for candidate in rest.by_ref() {
                if candidate == lit {
                    continue 'outer;
                }
                if candidate > lit {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_satisfied_by(&self, model: &Model) -> bool {
        self.lits.iter().any(|&l| model.lit_value(l))
    }

    pub fn to_dimacs(&self) -> Vec<i64> {
        self.lits.iter().map(|l| l.to_dimacs()).collect()
    }
}

impl fmt::Debug for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

/// A parity constraint `x1 ^ x2 ^ ... ^ xk = parity` over distinct variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XorConstraint {
    vars: Vec<Var>,
    parity: bool,
}

/// What a parity condition reduces to after normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XorForm {
    Xor(XorConstraint),
    Unit(Lit),
    /// `0 = 1`: no assignment satisfies it.
    Unsat,
    /// `0 = 0`: always satisfied.
    Trivial,
}

impl XorForm {
    /// The clausal image of a form that is not a genuine XOR.
    pub fn into_clause(self) -> Option<Clause> {
        match self {
            XorForm::Unit(l) => Some(Clause::unit(l)),
            XorForm::Unsat => Some(Clause::empty()),
            XorForm::Trivial | XorForm::Xor(_) => None,
        }
    }
}

impl XorConstraint {
    /// Normalizes a parity condition; repeated variables cancel (`x ^ x = 0`).
    pub fn normalize(vars: impl IntoIterator<Item = Var>, parity: bool) -> XorForm {
        let mut vars: Vec<Var> = vars.into_iter().collect();
        vars.sort_unstable();
        let mut out: Vec<Var> = Vec::with_capacity(vars.len());
        for v in vars {
            if out.last() == Some(&v) {
                out.pop();
            } else {
                out.push(v);
            }
        }
        match out.len() {
            0 if parity => XorForm::Unsat,
            0 => XorForm::Trivial,
            1 => XorForm::Unit(Lit::new(out[0], parity)),
            _ => XorForm::Xor(XorConstraint { vars: out, parity }),
        }
    }

    /// The condition "XOR of these literals is true".
    pub fn from_lits(lits: impl IntoIterator<Item = Lit>) -> XorForm {
        let mut parity = true;
        let vars: Vec<Var> = lits
            .into_iter()
            .map(|l| {
                if !l.is_positive() {
                    parity = !parity;
                }
                l.var()
            })
            .collect();
        XorConstraint::normalize(vars, parity)
    }

    #[inline]
    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    #[inline]
    pub fn parity(&self) -> bool {
        self.parity
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn is_satisfied_by(&self, model: &Model) -> bool {
        self.vars.iter().fold(false, |acc, &v| acc ^ model.value(v)) == self.parity
    }

    /// The `2^(k-1)` clauses that each forbid one assignment of the wrong parity.
    pub fn expand(&self) -> Vec<Clause> {
        let k = self.vars.len();
        assert!(k < 32, "XOR of arity {k} is too large to expand");
        (0u32..1 << k)
            .filter(|mask| (mask.count_ones() % 2 == 1) != self.parity)
            .map(|mask| {
                Clause::new(
                    self.vars
                        .iter()
                        .enumerate()
                        .map(|(i, &v)| Lit::new(v, mask & (1 << i) == 0)),
                )
            })
            .collect()
    }
}

impl fmt::Debug for XorConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XOR({:?}, {})", self.vars, self.parity as u8)
    }
}

/// Clauses plus XOR constraints over variables `1..=num_vars`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
    xors: Vec<XorConstraint>,
}

impl fmt::Debug for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CnfFormula")
            .field("num_vars", &self.num_vars)
            .field("clauses", &self.clauses)
            .field("xors", &self.xors)
            .finish()
    }
}

impl CnfFormula {
    pub fn new(num_vars: u32) -> CnfFormula {
        CnfFormula {
            num_vars,
            clauses: Vec::new(),
            xors: Vec::new(),
        }
    }

    /// Assembles a formula; `num_vars` is raised to cover every mentioned variable.
    pub fn from_parts(num_vars: u32, clauses: Vec<Clause>, xors: Vec<XorConstraint>) -> CnfFormula {
        let mut f = CnfFormula {
            num_vars,
            clauses,
            xors,
        };
        let max = f
            .clauses
            .iter()
            .flat_map(|c| c.vars())
            .chain(f.xors.iter().flat_map(|x| x.vars().iter().copied()))
            .max()
            .unwrap_or(0);
        f.num_vars = f.num_vars.max(max);
        f
    }

    /// Convenience constructor from signed integer clauses.
    pub fn from_dimacs(num_vars: u32, clauses: &[&[i64]]) -> CnfFormula {
        CnfFormula::from_parts(
            num_vars,
            clauses.iter().map(|c| Clause::from_dimacs(c)).collect(),
            Vec::new(),
        )
    }

    pub fn into_parts(self) -> (u32, Vec<Clause>, Vec<XorConstraint>) {
        (self.num_vars, self.clauses, self.xors)
    }

    #[inline]
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn set_num_vars(&mut self, num_vars: u32) {
        self.num_vars = self.num_vars.max(num_vars);
    }

    #[inline]
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    #[inline]
    pub fn xors(&self) -> &[XorConstraint] {
        &self.xors
    }

    pub fn add_clause(&mut self, clause: Clause) {
        if let Some(max) = clause.vars().max() {
            self.num_vars = self.num_vars.max(max);
        }
        self.clauses.push(clause);
    }

    pub fn add_xor(&mut self, xor: XorConstraint) {
        if let Some(&max) = xor.vars().last() {
            self.num_vars = self.num_vars.max(max);
        }
        self.xors.push(xor);
    }

    /// Adds a normalized parity condition, turning degenerate forms into clauses.
    pub fn add_xor_form(&mut self, form: XorForm) {
        match form {
            XorForm::Xor(x) => self.add_xor(x),
            other => {
                if let Some(c) = other.into_clause() {
                    self.add_clause(c);
                }
            }
        }
    }

    /// No clauses and no XOR constraints left.
    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty() && self.xors.is_empty()
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(Clause::is_empty)
    }

    /// Clause-only image: every XOR replaced by its expansion.
    pub fn expanded_clauses(&self) -> Vec<Clause> {
        let mut out = self.clauses.clone();
        for x in &self.xors {
            out.extend(x.expand());
        }
        out
    }

    /// Variables that occur in some clause or XOR, ascending.
    pub fn occurring_vars(&self) -> Vec<Var> {
        let mut seen = vec![false; self.num_vars as usize + 1];
        for v in self
            .clauses
            .iter()
            .flat_map(|c| c.vars())
            .chain(self.xors.iter().flat_map(|x| x.vars().iter().copied()))
        {
            seen[v as usize] = true;
        }
        (1..=self.num_vars).filter(|&v| seen[v as usize]).collect()
    }
}

/// A total assignment; `value(v)` for `v` in `1..=len()`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Model(Vec<bool>);

impl Model {
    pub fn new(num_vars: u32) -> Model {
        Model(vec![false; num_vars as usize])
    }

    /// `values[i]` is the value of variable `i + 1`.
    pub fn from_values(values: Vec<bool>) -> Model {
        Model(values)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn value(&self, var: Var) -> bool {
        self.0[var as usize - 1]
    }

    #[inline]
    pub fn lit_value(&self, lit: Lit) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    #[inline]
    pub fn set(&mut self, var: Var, value: bool) {
        self.0[var as usize - 1] = value;
    }

    /// Grows (with `false`) or keeps the model so it covers `num_vars`.
    pub fn resize(&mut self, num_vars: u32) {
        if self.0.len() < num_vars as usize {
            self.0.resize(num_vars as usize, false);
        }
    }

    pub fn values(&self) -> &[bool] {
        &self.0
    }

    /// Signed literals, one per variable, in variable order.
    pub fn literals(&self) -> impl Iterator<Item = Lit> + '_ {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &b)| Lit::new(i as Var + 1, b))
    }
}

impl fmt::Debug for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.literals()).finish()
    }
}

/// True iff every clause has a true literal and every XOR parity holds.
pub fn evaluate(formula: &CnfFormula, model: &Model) -> Result<bool, CnfError> {
    if model.len() < formula.num_vars() as usize {
        return Err(CnfError::PartialModel {
            needed: formula.num_vars() as usize,
            got: model.len(),
        });
    }
    Ok(formula.clauses().iter().all(|c| c.is_satisfied_by(model))
        && formula.xors().iter().all(|x| x.is_satisfied_by(model)))
}

/// Why a variable was assigned by propagation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    Clause(usize),
    Xor(usize),
}

/// A partial assignment with a trail and decision levels.
#[derive(Clone, Debug)]
pub struct Assignment {
    values: Vec<Option<bool>>,
    level_of: Vec<u32>,
    reason_of: Vec<Option<Reason>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
}

impl Assignment {
    pub fn new(num_vars: u32) -> Assignment {
        let n = num_vars as usize + 1;
        Assignment {
            values: vec![None; n],
            level_of: vec![0; n],
            reason_of: vec![None; n],
            trail: Vec::new(),
            trail_lim: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        (self.values.len() - 1) as u32
    }

    #[inline]
    pub fn value(&self, var: Var) -> Option<bool> {
        self.values[var as usize]
    }

    #[inline]
    pub fn lit_value(&self, lit: Lit) -> Option<bool> {
        self.values[lit.var() as usize].map(|v| v == lit.is_positive())
    }

    #[inline]
    pub fn is_assigned(&self, var: Var) -> bool {
        self.values[var as usize].is_some()
    }

    pub fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    pub fn level_of(&self, var: Var) -> u32 {
        self.level_of[var as usize]
    }

    pub fn reason_of(&self, var: Var) -> Option<Reason> {
        self.reason_of[var as usize]
    }

    pub fn trail(&self) -> &[Lit] {
        &self.trail
    }

    /// Opens a new decision level and makes `lit` true.
    pub fn decide(&mut self, lit: Lit) {
        self.trail_lim.push(self.trail.len());
        self.assign(lit, None);
    }

    /// Makes `lit` true at the current level.
    ///
    /// Panics if the variable is already assigned.
    pub fn assign(&mut self, lit: Lit, reason: Option<Reason>) {
        let v = lit.var() as usize;
        assert!(self.values[v].is_none(), "variable {v} assigned twice");
        self.values[v] = Some(lit.is_positive());
        self.level_of[v] = self.decision_level();
        self.reason_of[v] = reason;
        self.trail.push(lit);
    }

    /// Undoes every assignment above `level`.
    pub fn backtrack_to(&mut self, level: u32) {
        if level >= self.decision_level() {
            return;
        }
        let keep = self.trail_lim[level as usize];
        for lit in self.trail.drain(keep..) {
            let v = lit.var() as usize;
            self.values[v] = None;
            self.reason_of[v] = None;
        }
        self.trail_lim.truncate(level as usize);
    }
}

/// Outcome of unit propagation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Propagation {
    Fixpoint,
    Conflict(Reason),
}

struct OccurrenceIndex {
    clauses_by_lit: Vec<Vec<usize>>,
    xors_by_var: Vec<Vec<usize>>,
}

impl OccurrenceIndex {
    fn build(formula: &CnfFormula) -> OccurrenceIndex {
        let n = formula.num_vars() as usize + 1;
        let mut clauses_by_lit = vec![Vec::new(); 2 * n];
        let mut xors_by_var = vec![Vec::new(); n];
        for (i, c) in formula.clauses().iter().enumerate() {
            for &l in c.lits() {
                clauses_by_lit[l.index()].push(i);
            }
        }
        for (i, x) in formula.xors().iter().enumerate() {
            for &v in x.vars() {
                xors_by_var[v as usize].push(i);
            }
        }
        OccurrenceIndex {
            clauses_by_lit,
            xors_by_var,
        }
    }
}

enum Status {
    Done,
    Forces(Lit),
    Conflict,
}

fn clause_status(clause: &Clause, assignment: &Assignment) -> Status {
    let mut free = None;
    let mut free_count = 0;
    for &l in clause.lits() {
        match assignment.lit_value(l) {
            Some(true) => return Status::Done,
            Some(false) => {}
            None => {
                free_count += 1;
                free = Some(l);
            }
        }
    }
    match (free_count, free) {
        (0, _) => Status::Conflict,
        (1, Some(l)) => Status::Forces(l),
        _ => Status::Done,
    }
}

fn xor_status(xor: &XorConstraint, assignment: &Assignment) -> Status {
    let mut acc = false;
    let mut free = None;
    let mut free_count = 0;
    for &v in xor.vars() {
        match assignment.value(v) {
            Some(b) => acc ^= b,
            None => {
                free_count += 1;
                free = Some(v);
            }
        }
    }
    match (free_count, free) {
        (0, _) if acc != xor.parity() => Status::Conflict,
        (1, Some(v)) => Status::Forces(Lit::new(v, acc != xor.parity())),
        _ => Status::Done,
    }
}

/// Applies the clause unit rule and the XOR unit rule until fixpoint or conflict.
///
/// Every propagated literal records its antecedent; propagated literals are
/// placed at the assignment's current decision level.
pub fn propagate(formula: &CnfFormula, assignment: &mut Assignment) -> Propagation {
    assert!(
        assignment.num_vars() >= formula.num_vars(),
        "assignment covers {} variables, formula needs {}",
        assignment.num_vars(),
        formula.num_vars()
    );
    let index = OccurrenceIndex::build(formula);

    let check_clause = |i: usize, a: &mut Assignment| -> Result<(), Reason> {
        match clause_status(&formula.clauses()[i], a) {
            Status::Done => Ok(()),
            Status::Forces(l) => {
                a.assign(l, Some(Reason::Clause(i)));
                Ok(())
            }
            Status::Conflict => Err(Reason::Clause(i)),
        }
    };
    let check_xor = |i: usize, a: &mut Assignment| -> Result<(), Reason> {
        match xor_status(&formula.xors()[i], a) {
            Status::Done => Ok(()),
            Status::Forces(l) => {
                a.assign(l, Some(Reason::Xor(i)));
                Ok(())
            }
            Status::Conflict => Err(Reason::Xor(i)),
        }
    };

    let run = |a: &mut Assignment| -> Result<(), Reason> {
        // Facts assigned before this call are accounted for by the full scan.
        let mut head = a.trail.len();
        for i in 0..formula.clauses().len() {
            check_clause(i, a)?;
        }
        for i in 0..formula.xors().len() {
            check_xor(i, a)?;
        }
        while head < a.trail.len() {
            let lit = a.trail[head];
            head += 1;
            for &ci in &index.clauses_by_lit[(!lit).index()] {
                check_clause(ci, a)?;
            }
            for &xi in &index.xors_by_var[lit.var() as usize] {
                check_xor(xi, a)?;
            }
        }
        Ok(())
    };

    match run(assignment) {
        Ok(()) => Propagation::Fixpoint,
        Err(reason) => Propagation::Conflict(reason),
    }
}

/// The formula left over under `assignment`, which must be a conflict-free fixpoint.
///
/// Satisfied clauses disappear, false literals are deleted, and XORs lose their
/// assigned variables (a true variable flips the parity). Variable indices are
/// not renumbered.
pub fn residual(formula: &CnfFormula, assignment: &Assignment) -> Result<CnfFormula, CnfError> {
    let mut out = CnfFormula::new(formula.num_vars());
    for (i, c) in formula.clauses().iter().enumerate() {
        let mut satisfied = false;
        let mut rest = Vec::with_capacity(c.len());
        for &l in c.lits() {
            match assignment.lit_value(l) {
                Some(true) => {
                    satisfied = true;
                    break;
                }
                Some(false) => {}
                None => rest.push(l),
            }
        }
        if satisfied {
            continue;
        }
        if rest.len() <= 1 {
            return Err(CnfError::NotFixpoint(format!(
                "clause {i} {c:?} is {} under the assignment",
                if rest.is_empty() { "falsified" } else { "unit" }
            )));
        }
        out.clauses.push(Clause { lits: rest });
    }
    for (i, x) in formula.xors().iter().enumerate() {
        let mut parity = x.parity();
        let mut rest = Vec::with_capacity(x.arity());
        for &v in x.vars() {
            match assignment.value(v) {
                Some(b) => parity ^= b,
                None => rest.push(v),
            }
        }
        match rest.len() {
            0 if parity => {
                return Err(CnfError::NotFixpoint(format!("XOR {i} {x:?} is violated")));
            }
            0 => {}
            1 => {
                return Err(CnfError::NotFixpoint(format!("XOR {i} {x:?} is unit")));
            }
            _ => out.xors.push(XorConstraint { vars: rest, parity }),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(a: &Assignment) -> Vec<i64> {
        a.trail().iter().map(|l| l.to_dimacs()).collect()
    }

    #[test]
    fn literal_negation_is_involution() {
        for v in [1, 2, 17, Lit::MAX_VAR] {
            for s in [true, false] {
                let l = Lit::new(v, s);
                assert_eq!(!!l, l);
                assert_ne!(!l, l);
                assert_eq!(l.var(), v);
                assert_eq!(Lit::from_dimacs(l.to_dimacs()), l);
            }
        }
    }

    #[test]
    fn clause_normalization() {
        let c = Clause::from_dimacs(&[3, -1, 3, 2]);
        assert_eq!(c.to_dimacs(), vec![-1, 2, 3]);
        assert!(!c.is_tautology());
        assert!(Clause::from_dimacs(&[1, 2, -1]).is_tautology());
        assert!(Clause::empty().is_empty());
        assert!(!Clause::from_dimacs(&[1, 3]).subsumes(&c));
        assert!(Clause::from_dimacs(&[-1, 3]).subsumes(&c));
        assert!(Clause::empty().subsumes(&c));
    }

    #[test]
    fn xor_normalization() {
        assert_eq!(XorConstraint::normalize([1, 1], true), XorForm::Unsat);
        assert_eq!(XorConstraint::normalize([2, 1, 2], false), XorForm::Unit(Lit::neg(1)));
        assert_eq!(XorConstraint::normalize([], false), XorForm::Trivial);
        match XorConstraint::from_lits([Lit::pos(3), Lit::pos(1), Lit::neg(2)]) {
            XorForm::Xor(x) => {
                assert_eq!(x.vars(), &[1, 2, 3]);
                assert!(!x.parity());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn xor_expansion_forbids_wrong_parity() {
        let XorForm::Xor(x) = XorConstraint::normalize([1, 2, 3], true) else {
            unreachable!()
        };
        let clauses = x.expand();
        assert_eq!(clauses.len(), 4);
        for c in &clauses {
            let negs = c.lits().iter().filter(|l| !l.is_positive()).count();
            assert_eq!(negs % 2, 0);
        }
    }

    #[test]
    fn propagate_chained_units() {
        let f = CnfFormula::from_dimacs(2, &[&[1], &[-1, 2]]);
        let mut a = Assignment::new(2);
        assert_eq!(propagate(&f, &mut a), Propagation::Fixpoint);
        assert_eq!(lits(&a), vec![1, 2]);
        assert_eq!(a.reason_of(2), Some(Reason::Clause(1)));
    }

    #[test]
    fn propagate_xor_unit() {
        let mut f = CnfFormula::new(3);
        f.add_xor_form(XorConstraint::normalize([1, 2, 3], true));
        let mut a = Assignment::new(3);
        a.decide(Lit::pos(1));
        a.decide(Lit::pos(2));
        assert_eq!(propagate(&f, &mut a), Propagation::Fixpoint);
        assert_eq!(a.value(3), Some(true));
        assert_eq!(a.reason_of(3), Some(Reason::Xor(0)));
        assert_eq!(a.level_of(3), 2);
    }

    #[test]
    fn propagate_conflict() {
        let f = CnfFormula::from_dimacs(2, &[&[1, 2], &[-1], &[-2]]);
        let mut a = Assignment::new(2);
        assert_eq!(propagate(&f, &mut a), Propagation::Conflict(Reason::Clause(0)));
    }

    #[test]
    fn residual_deletes_false_literals() {
        let f = CnfFormula::from_dimacs(3, &[&[1, 2, 3]]);
        let mut a = Assignment::new(3);
        a.decide(Lit::neg(1));
        let r = residual(&f, &a).unwrap();
        assert_eq!(r.clauses(), &[Clause::from_dimacs(&[2, 3])]);
        assert_eq!(r.num_vars(), 3);
    }

    #[test]
    fn residual_flips_parity() {
        let mut f = CnfFormula::new(3);
        f.add_xor_form(XorConstraint::normalize([1, 2, 3], true));
        let mut a = Assignment::new(3);
        a.decide(Lit::pos(1));
        let r = residual(&f, &a).unwrap();
        assert_eq!(r.xors().len(), 1);
        assert_eq!(r.xors()[0].vars(), &[2, 3]);
        assert!(!r.xors()[0].parity());
    }

    #[test]
    fn residual_rejects_non_fixpoint() {
        let f = CnfFormula::from_dimacs(2, &[&[1, 2]]);
        let mut a = Assignment::new(2);
        a.decide(Lit::neg(1));
        assert!(matches!(residual(&f, &a), Err(CnfError::NotFixpoint(_))));
        let mut b = Assignment::new(2);
        b.decide(Lit::neg(1));
        b.decide(Lit::neg(2));
        assert!(residual(&f, &b).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let f = CnfFormula::from_dimacs(2, &[&[1, -2]]);
        assert_eq!(evaluate(&f, &Model::from_values(vec![true, true])), Ok(true));
        let mut g = CnfFormula::new(2);
        g.add_xor_form(XorConstraint::normalize([1, 2], true));
        assert_eq!(evaluate(&g, &Model::from_values(vec![true, true])), Ok(false));
        assert!(matches!(
            evaluate(&g, &Model::from_values(vec![true])),
            Err(CnfError::PartialModel { .. })
        ));
    }

    #[test]
    fn backtrack_restores_values() {
        let mut a = Assignment::new(3);
        a.assign(Lit::pos(1), None);
        a.decide(Lit::neg(2));
        a.assign(Lit::pos(3), Some(Reason::Clause(0)));
        assert_eq!(a.decision_level(), 1);
        a.backtrack_to(0);
        assert_eq!(lits(&a), vec![1]);
        assert_eq!(a.value(2), None);
        assert_eq!(a.reason_of(3), None);
    }
}
