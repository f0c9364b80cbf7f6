//! Exhaustive ground truth: satisfiability and entailment by enumeration.
//!
//! Nothing here is on the solving path. The checks are deliberately naive so
//! that they stay independent of propagation tricks used elsewhere.

use thiserror::Error;

use crate::cnf::{propagate, residual, Assignment, Clause, CnfFormula, Lit, Model, Propagation, Var, XorForm};
use crate::rules::Consequence;

/// Largest number of variables enumerated exhaustively.
pub const VAR_CAP: u32 = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{vars} variables exceed the enumeration cap of {cap}")]
    TooManyVars { vars: u32, cap: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Sat(Model),
    Unsat,
}

impl OracleVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, OracleVerdict::Sat(_))
    }
}

struct Compiled {
    clauses: Vec<(u32, u32)>,
    xors: Vec<(u32, bool)>,
}

fn compile(formula: &CnfFormula) -> Compiled {
    let bit = |v: Var| 1u32 << (v - 1);
    Compiled {
        clauses: formula
            .clauses()
            .iter()
            .map(|c| {
                c.lits().iter().fold((0, 0), |(p, n), l| {
                    if l.is_positive() {
                        (p | bit(l.var()), n)
                    } else {
                        (p, n | bit(l.var()))
                    }
                })
            })
            .collect(),
        xors: formula
            .xors()
            .iter()
            .map(|x| (x.vars().iter().fold(0, |m, &v| m | bit(v)), x.parity()))
            .collect(),
    }
}

impl Compiled {
    #[inline]
    fn satisfied(&self, a: u32) -> bool {
        self.clauses.iter().all(|&(p, n)| (a & p) != 0 || (!a & n) != 0)
            && self
                .xors
                .iter()
                .all(|&(m, parity)| ((a & m).count_ones() & 1 == 1) == parity)
    }
}

/// Tries all `2^num_vars` assignments in ascending binary order.
pub fn brute_force_sat(formula: &CnfFormula) -> Result<OracleVerdict, OracleError> {
    let n = formula.num_vars();
    if n > VAR_CAP {
        return Err(OracleError::TooManyVars { vars: n, cap: VAR_CAP });
    }
    let compiled = compile(formula);
    for a in 0u32..(1u32 << n) {
        if compiled.satisfied(a) {
            let values = (0..n).map(|i| a & (1 << i) != 0).collect();
            return Ok(OracleVerdict::Sat(Model::from_values(values)));
        }
    }
    Ok(OracleVerdict::Unsat)
}

/// Renumbers the occurring variables of `formula` to `1..=k`.
///
/// Returns the compacted formula and `original[i]` = original index of new
/// variable `i + 1`.
pub fn compact(formula: &CnfFormula) -> (CnfFormula, Vec<Var>) {
    compact_with(formula, &[])
}

fn compact_with(formula: &CnfFormula, extra: &[Var]) -> (CnfFormula, Vec<Var>) {
    let mut original: Vec<Var> = formula.occurring_vars();
    original.extend_from_slice(extra);
    original.sort_unstable();
    original.dedup();
    let renumber = |v: Var| original.binary_search(&v).expect("variable collected") as Var + 1;
    let map_lit = |l: Lit| Lit::new(renumber(l.var()), l.is_positive());
    let mut out = CnfFormula::new(original.len() as u32);
    for c in formula.clauses() {
        out.add_clause(Clause::new(c.lits().iter().map(|&l| map_lit(l))));
    }
    for x in formula.xors() {
        out.add_xor_form(crate::cnf::XorConstraint::normalize(
            x.vars().iter().map(|&v| renumber(v)),
            x.parity(),
        ));
    }
    (out, original)
}

/// Decides `formula` by enumerating the `branch_vars` and finishing each branch
/// with unit propagation plus exhaustive search over the leftover variables.
///
/// Suits structured instances (such as circuits with fixed inputs) whose total
/// variable count is far beyond [`VAR_CAP`] but which collapse once a few
/// variables are fixed.
pub fn enumerate_over(formula: &CnfFormula, branch_vars: &[Var]) -> Result<OracleVerdict, OracleError> {
    let k = branch_vars.len() as u32;
    if k > VAR_CAP {
        return Err(OracleError::TooManyVars { vars: k, cap: VAR_CAP });
    }
    let n = formula.num_vars();
    for bits in 0u32..(1u32 << k) {
        let mut assignment = Assignment::new(n);
        let mut clash = false;
        for (i, &v) in branch_vars.iter().enumerate() {
            let lit = Lit::new(v, bits & (1 << i) != 0);
            match assignment.lit_value(lit) {
                Some(false) => clash = true,
                Some(true) => {}
                None => assignment.assign(lit, None),
            }
        }
        if clash || propagate(formula, &mut assignment) != Propagation::Fixpoint {
            continue;
        }
        let rest = residual(formula, &assignment).expect("fixpoint");
        let (small, original) = compact(&rest);
        if let OracleVerdict::Sat(sub) = brute_force_sat(&small)? {
            let mut model = Model::new(n);
            for &lit in assignment.trail() {
                model.set(lit.var(), lit.is_positive());
            }
            for (i, &v) in original.iter().enumerate() {
                model.set(v, sub.value(i as Var + 1));
            }
            return Ok(OracleVerdict::Sat(model));
        }
    }
    Ok(OracleVerdict::Unsat)
}

/// True iff every consequent literal follows from `premise` plus the antecedent.
pub fn entails(premise: &CnfFormula, consequence: &Consequence) -> Result<bool, OracleError> {
    let extra: Vec<Var> = consequence
        .antecedent
        .iter()
        .chain(&consequence.consequent)
        .map(|l| l.var())
        .collect();
    let (small, original) = compact_with(premise, &extra);
    let n = small.num_vars();
    if n > VAR_CAP {
        return Err(OracleError::TooManyVars { vars: n, cap: VAR_CAP });
    }
    let renumber = |l: Lit| {
        let v = original.binary_search(&l.var()).expect("variable collected") as Var + 1;
        Lit::new(v, l.is_positive())
    };
    for &m in &consequence.consequent {
        let mut test = small.clone();
        for &a in &consequence.antecedent {
            test.add_xor_form(XorForm::Unit(renumber(a)));
        }
        test.add_clause(Clause::unit(!renumber(m)));
        if brute_force_sat(&test)?.is_sat() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All models of a small formula as bit patterns (bit `i` = variable `i + 1`).
pub fn model_set(formula: &CnfFormula) -> Result<Vec<u32>, OracleError> {
    let n = formula.num_vars();
    if n > VAR_CAP {
        return Err(OracleError::TooManyVars { vars: n, cap: VAR_CAP });
    }
    let compiled = compile(formula);
    Ok((0u32..(1u32 << n)).filter(|&a| compiled.satisfied(a)).collect())
}
