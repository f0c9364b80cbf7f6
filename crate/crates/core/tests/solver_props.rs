mod common;

use common::{dpll_sat, formula_strategy, naive_eval};
use logicsat::cdcl::{cdcl_solve, Budget, CdclConfig, CdclOutcome, Solver};
use logicsat::cnf::{evaluate, Clause, CnfFormula};
use logicsat::gen::{planted_pattern_formula, random_kcnf};
use logicsat::oracle::{brute_force_sat, OracleVerdict};
use logicsat::simplify::{simplify, SimplifyStatus};
use logicsat::split::{solve_split, SplitConfig, SplitVerdict};
use logicsat::xor::{extract_xors, DEFAULT_MAX_ARITY};
use proptest::prelude::*;

fn audited() -> CdclConfig {
    CdclConfig {
        audit: true,
        ..CdclConfig::default()
    }
}

/// `formula` and the negation of `clause` together are unsatisfiable.
fn entails_clause(formula: &CnfFormula, clause: &Clause) -> bool {
    let mut f = formula.clone();
    for &l in clause.lits() {
        f.add_clause(Clause::unit(!l));
    }
    !dpll_sat(&f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn oracle_agrees_with_dpll(f in formula_strategy(14, 40, 3)) {
        match brute_force_sat(&f).unwrap() {
            OracleVerdict::Sat(m) => {
                prop_assert!(dpll_sat(&f));
                prop_assert!(naive_eval(&f, m.values()));
            }
            OracleVerdict::Unsat => prop_assert!(!dpll_sat(&f)),
        }
    }

    #[test]
    fn cdcl_agrees_with_oracle(f in formula_strategy(14, 60, 3)) {
        let clauses = f.expanded_clauses();
        let (outcome, stats) = cdcl_solve(&clauses, f.num_vars(), &Budget::unlimited(), &audited());
        prop_assert_eq!(stats.audit_failures, 0);
        let expected = brute_force_sat(&f).unwrap().is_sat();
        match outcome {
            CdclOutcome::Sat(m) => {
                prop_assert!(expected);
                prop_assert_eq!(evaluate(&f, &m), Ok(true));
            }
            CdclOutcome::Unsat => prop_assert!(!expected),
            CdclOutcome::Unknown => prop_assert!(false, "unlimited budget returned unknown"),
        }
    }

    #[test]
    fn simplify_is_equisatisfiable(f in formula_strategy(14, 40, 3)) {
        let out = simplify(&f);
        prop_assert!(out.substitution.is_idempotent());
        let before = brute_force_sat(&f).unwrap();
        if out.status == SimplifyStatus::ProvenUnsat {
            prop_assert!(!before.is_sat());
            return Ok(());
        }
        match brute_force_sat(&out.formula).unwrap() {
            OracleVerdict::Sat(mut m) => {
                prop_assert!(before.is_sat());
                out.substitution.extend_model(&mut m);
                prop_assert_eq!(evaluate(&f, &m), Ok(true));
            }
            OracleVerdict::Unsat => prop_assert!(!before.is_sat()),
        }
    }

    #[test]
    fn split_agrees_with_oracle(f in formula_strategy(14, 50, 3)) {
        let (g, _) = extract_xors(&f, DEFAULT_MAX_ARITY);
        let expected = brute_force_sat(&f).unwrap().is_sat();
        for use_rules in [true, false] {
            let cfg = SplitConfig { use_rules, ..SplitConfig::default() };
            let (verdict, stats) = solve_split(&g, &cfg).unwrap();
            prop_assert!(stats.cdcl_calls <= stats.nodes_visited);
            match verdict {
                SplitVerdict::Sat(m) => {
                    prop_assert!(expected);
                    prop_assert_eq!(evaluate(&f, &m), Ok(true));
                }
                SplitVerdict::Unsat => prop_assert!(!expected),
                SplitVerdict::Unknown => prop_assert!(false, "unlimited budget returned unknown"),
            }
        }
    }
}

#[test]
fn cdcl_on_threshold_3cnf() {
    for seed in 0..150 {
        let f = random_kcnf(seed, 18, 76, 3);
        let expected = brute_force_sat(&f).unwrap().is_sat();
        let (outcome, stats) = cdcl_solve(f.clauses(), 18, &Budget::unlimited(), &CdclConfig::default());
        match outcome {
            CdclOutcome::Sat(m) => assert!(expected && evaluate(&f, &m).unwrap(), "seed {seed}"),
            CdclOutcome::Unsat => assert!(!expected, "seed {seed}"),
            CdclOutcome::Unknown => panic!("seed {seed}: unknown"),
        }
        assert_eq!(stats.audit_failures, 0);
    }
}

#[test]
fn learned_clauses_are_entailed() {
    for seed in 0..40 {
        let f = random_kcnf(1000 + seed, 12, 56, 3);
        let mut solver = Solver::new(12, audited());
        for c in f.clauses() {
            solver.add_clause(c);
        }
        solver.solve(&Budget::unlimited());
        assert_eq!(solver.stats.audit_failures, 0);
        for learned in solver.learned_log() {
            assert!(entails_clause(&f, learned), "seed {seed}: {learned:?} not entailed");
        }
    }
}

#[test]
fn added_split_clauses_are_entailed() {
    let mut checked = 0;
    for seed in 0..60 {
        let (f, _) = planted_pattern_formula(seed, 16);
        let (g, _) = extract_xors(&f, DEFAULT_MAX_ARITY);
        let (_, augmented) = logicsat::split::decision_var1(&g);
        for c in &augmented.clauses()[g.clauses().len()..] {
            assert!(entails_clause(&g, c), "seed {seed}: {c:?}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}

#[test]
fn split_on_planted_patterns() {
    for seed in 0..80 {
        let (f, _) = planted_pattern_formula(seed, 20);
        let (g, _) = extract_xors(&f, DEFAULT_MAX_ARITY);
        let expected = brute_force_sat(&f).unwrap().is_sat();
        let (verdict, _) = solve_split(&g, &SplitConfig::default()).unwrap();
        match verdict {
            SplitVerdict::Sat(m) => assert!(expected && evaluate(&f, &m).unwrap(), "seed {seed}"),
            SplitVerdict::Unsat => assert!(!expected, "seed {seed}"),
            SplitVerdict::Unknown => panic!("seed {seed}: unknown"),
        }
    }
}
