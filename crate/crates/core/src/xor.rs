//! Recovery of XOR constraints hidden in clause groups.
//!
//! Clauses over the same variable set are grouped; a group holding every
//! sign pattern of one negation-count parity class is exactly the expansion
//! of an XOR and is replaced by it.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use crate::cnf::{Clause, CnfFormula, Var, XorConstraint};

pub const DEFAULT_MAX_ARITY: usize = 4;
pub const MAX_SUPPORTED_ARITY: usize = 6;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExtractionReport {
    /// arity -> number of XORs recovered.
    pub xors_found: BTreeMap<usize, usize>,
    /// Distinct clauses replaced by recovered XORs.
    pub clauses_consumed: usize,
    pub scan_time: Duration,
}

impl ExtractionReport {
    pub fn total(&self) -> usize {
        self.xors_found.values().sum()
    }
}

/// Replaces complete XOR clause groups of arity `2..=max_arity` by XOR constraints.
///
/// `max_arity` is clamped to `2..=6`. Recovered XORs are appended after any
/// XORs already in the formula, ordered by variable set. A group that holds
/// both parity classes in full forbids every assignment and yields the empty
/// clause.
pub fn extract_xors(formula: &CnfFormula, max_arity: usize) -> (CnfFormula, ExtractionReport) {
    let start = Instant::now();
    let max_arity = max_arity.clamp(2, MAX_SUPPORTED_ARITY);

    // variable set -> (negation pattern -> clause indices)
    let mut groups: BTreeMap<Vec<Var>, HashMap<u32, Vec<usize>>> = BTreeMap::new();
    for (i, c) in formula.clauses().iter().enumerate() {
        if c.len() < 2 || c.len() > max_arity || c.is_tautology() {
            continue;
        }
        let vars: Vec<Var> = c.vars().collect();
        let pattern = c
            .lits()
            .iter()
            .enumerate()
            .fold(0u32, |m, (j, l)| if l.is_positive() { m } else { m | 1 << j });
        groups.entry(vars).or_default().entry(pattern).or_default().push(i);
    }

    let mut consumed = vec![false; formula.clauses().len()];
    let mut report = ExtractionReport::default();
    let mut found: Vec<XorConstraint> = Vec::new();
    let mut contradiction = false;

    for (vars, patterns) in &groups {
        let k = vars.len();
        let class_size = 1usize << (k - 1);
        let even = patterns.keys().filter(|p| p.count_ones() % 2 == 0).count();
        let odd = patterns.len() - even;
        let even_full = even == class_size;
        let odd_full = odd == class_size;
        if !even_full && !odd_full {
            continue;
        }
        let take_even = |p: u32| p.count_ones().is_multiple_of(2);
        for (&p, idxs) in patterns {
            if (even_full && take_even(p)) || (odd_full && !take_even(p)) {
                for &i in idxs {
                    consumed[i] = true;
                }
            }
        }
        if even_full && odd_full {
            contradiction = true;
            report.clauses_consumed += 2 * class_size;
            continue;
        }
        // Even negation counts forbid the even-weight assignments: parity 1.
        if let crate::cnf::XorForm::Xor(x) = XorConstraint::normalize(vars.iter().copied(), even_full) {
            found.push(x);
            *report.xors_found.entry(k).or_default() += 1;
            report.clauses_consumed += class_size;
        }
    }

    let mut clauses: Vec<Clause> = formula
        .clauses()
        .iter()
        .zip(&consumed)
        .filter(|(_, &gone)| !gone)
        .map(|(c, _)| c.clone())
        .collect();
    if contradiction {
        clauses.push(Clause::empty());
    }
    let mut xors = formula.xors().to_vec();
    xors.extend(found);
    report.scan_time = start.elapsed();
    (CnfFormula::from_parts(formula.num_vars(), clauses, xors), report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_ternary_xor() {
        let f = CnfFormula::from_dimacs(
            3,
            &[&[1, 2, 3], &[1, -2, -3], &[-1, 2, -3], &[-1, -2, 3]],
        );
        let (g, r) = extract_xors(&f, 4);
        assert!(g.clauses().is_empty());
        assert_eq!(g.xors().len(), 1);
        assert_eq!(g.xors()[0].vars(), &[1, 2, 3]);
        assert!(g.xors()[0].parity());
        assert_eq!(r.clauses_consumed, 4);
        assert_eq!(r.xors_found.get(&3), Some(&1));
    }

    #[test]
    fn recovers_binary_xor() {
        let f = CnfFormula::from_dimacs(2, &[&[1, 2], &[-1, -2]]);
        let (g, _) = extract_xors(&f, 4);
        assert_eq!(g.xors().len(), 1);
        assert!(g.xors()[0].parity());
    }

    #[test]
    fn odd_class_gives_parity_zero() {
        let f = CnfFormula::from_dimacs(2, &[&[-1, 2], &[1, -2]]);
        let (g, _) = extract_xors(&f, 4);
        assert_eq!(g.xors().len(), 1);
        assert!(!g.xors()[0].parity());
    }

    #[test]
    fn incomplete_group_left_alone() {
        let f = CnfFormula::from_dimacs(3, &[&[1, 2, 3], &[1, -2, -3], &[-1, 2, -3]]);
        let (g, r) = extract_xors(&f, 4);
        assert_eq!(g, f);
        assert_eq!(r.total(), 0);
    }

    #[test]
    fn extra_clauses_survive_and_duplicates_counted_once() {
        let f = CnfFormula::from_dimacs(2, &[&[1, 2], &[-1, -2], &[1, 2], &[-1, 2]]);
        let (g, r) = extract_xors(&f, 4);
        assert_eq!(g.clauses(), &[Clause::from_dimacs(&[-1, 2])]);
        assert_eq!(r.clauses_consumed, 2);
    }

    #[test]
    fn both_classes_give_empty_clause() {
        let f = CnfFormula::from_dimacs(2, &[&[1, 2], &[-1, -2], &[-1, 2], &[1, -2]]);
        let (g, _) = extract_xors(&f, 4);
        assert!(g.has_empty_clause());
        assert!(g.xors().is_empty());
    }

    #[test]
    fn arity_limit_respected() {
        let x = match XorConstraint::normalize([1, 2, 3, 4, 5], true) {
            crate::cnf::XorForm::Xor(x) => x,
            _ => unreachable!(),
        };
        let f = CnfFormula::from_parts(5, x.expand(), vec![]);
        assert_eq!(extract_xors(&f, 4).1.total(), 0);
        assert_eq!(extract_xors(&f, 5).1.total(), 1);
    }

    #[test]
    fn idempotent() {
        let f = CnfFormula::from_dimacs(
            4,
            &[&[1, 2, 3], &[1, -2, -3], &[-1, 2, -3], &[-1, -2, 3], &[3, 4]],
        );
        let (once, _) = extract_xors(&f, 4);
        let (twice, r) = extract_xors(&once, 4);
        assert_eq!(once, twice);
        assert_eq!(r.total(), 0);
    }
}
