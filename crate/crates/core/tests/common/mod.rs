#![allow(dead_code)]

use logicsat::cnf::{Clause, CnfFormula, Var, XorConstraint};
use proptest::prelude::*;

/// Plain recursive DPLL over signed integer clauses, XORs expanded by hand.
pub fn dpll_sat(formula: &CnfFormula) -> bool {
    let mut clauses: Vec<Vec<i64>> = formula.clauses().iter().map(|c| c.to_dimacs()).collect();
    for x in formula.xors() {
        clauses.extend(xor_clauses(x));
    }
    dpll(clauses)
}

fn xor_clauses(x: &XorConstraint) -> Vec<Vec<i64>> {
    let vars = x.vars();
    let k = vars.len();
    let mut out = Vec::new();
    for mask in 0u32..1 << k {
        // The clause excluding the assignment `bit i = mask_i`.
        let ones = mask.count_ones() as usize % 2 == 1;
        if ones != x.parity() {
            out.push(
                vars.iter()
                    .enumerate()
                    .map(|(i, &v)| if mask & (1 << i) != 0 { -(v as i64) } else { v as i64 })
                    .collect(),
            );
        }
    }
    out
}

fn dpll(clauses: Vec<Vec<i64>>) -> bool {
    if clauses.is_empty() {
        return true;
    }
    if clauses.iter().any(|c| c.is_empty()) {
        return false;
    }
    let pick = clauses.iter().min_by_key(|c| c.len()).expect("non-empty")[0];
    [pick, -pick].into_iter().any(|lit| {
        let reduced = clauses
            .iter()
            .filter(|c| !c.contains(&lit))
            .map(|c| c.iter().copied().filter(|&l| l != -lit).collect())
            .collect();
        dpll(reduced)
    })
}

/// Truth value under a full assignment, `values[v - 1]` for variable `v`.
pub fn naive_eval(formula: &CnfFormula, values: &[bool]) -> bool {
    let lit = |l: i64| values[(l.unsigned_abs() - 1) as usize] == (l > 0);
    formula.clauses().iter().all(|c| c.to_dimacs().into_iter().any(lit))
        && formula
            .xors()
            .iter()
            .all(|x| x.vars().iter().filter(|&&v| values[(v - 1) as usize]).count() % 2 == x.parity() as usize)
}

pub fn clause_strategy(num_vars: u32, max_len: usize) -> impl Strategy<Value = Clause> {
    prop::collection::vec((1..=num_vars, any::<bool>()), 1..=max_len).prop_map(|lits| {
        let v: Vec<i64> = lits
            .into_iter()
            .map(|(var, pos)| if pos { var as i64 } else { -(var as i64) })
            .collect();
        Clause::from_dimacs(&v)
    })
}

pub fn formula_strategy(max_vars: u32, max_clauses: usize, max_xors: usize) -> impl Strategy<Value = CnfFormula> {
    (2..=max_vars).prop_flat_map(move |n| {
        (
            prop::collection::vec(clause_strategy(n, 4), 0..=max_clauses),
            prop::collection::vec(
                (prop::collection::btree_set(1..=n, 2..=n.min(4) as usize), any::<bool>()),
                0..=max_xors,
            ),
        )
            .prop_map(move |(clauses, xors)| {
                let mut f = CnfFormula::from_parts(n, clauses, Vec::new());
                for (vars, parity) in xors {
                    f.add_xor_form(XorConstraint::normalize(vars.into_iter().collect::<Vec<Var>>(), parity));
                }
                f
            })
    })
}
