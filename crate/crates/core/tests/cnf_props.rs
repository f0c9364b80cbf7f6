mod common;

use common::{formula_strategy, naive_eval};
use logicsat::cnf::{evaluate, propagate, residual, Assignment, CnfFormula, Lit, Model, Propagation};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn decide_all(f: &CnfFormula, decisions: &[(u32, bool)]) -> (Assignment, bool) {
    let mut a = Assignment::new(f.num_vars());
    if propagate(f, &mut a) != Propagation::Fixpoint {
        return (a, false);
    }
    for &(v, b) in decisions {
        let v = 1 + v % f.num_vars();
        if a.is_assigned(v) {
            continue;
        }
        a.decide(Lit::new(v, b));
        if propagate(f, &mut a) != Propagation::Fixpoint {
            return (a, false);
        }
    }
    (a, true)
}

fn assigned_set(a: &Assignment) -> Vec<Lit> {
    let mut t = a.trail().to_vec();
    t.sort();
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn evaluate_matches_naive(f in formula_strategy(10, 30, 3), bits in any::<u32>()) {
        let values: Vec<bool> = (0..f.num_vars()).map(|i| bits & (1 << i) != 0).collect();
        let model = Model::from_values(values.clone());
        prop_assert_eq!(evaluate(&f, &model).unwrap(), naive_eval(&f, &values));
    }

    #[test]
    fn propagation_is_confluent(
        f in formula_strategy(12, 30, 3),
        decisions in prop::collection::vec((0u32..64, any::<bool>()), 0..4),
        seed in any::<u64>(),
    ) {
        let (n, mut clauses, mut xors) = f.clone().into_parts();
        let mut rng = logicsat::gen::rng(seed);
        clauses.shuffle(&mut rng);
        xors.shuffle(&mut rng);
        let g = CnfFormula::from_parts(n, clauses, xors);

        let mut a = Assignment::new(n);
        let mut b = Assignment::new(n);
        for &(v, val) in &decisions {
            let lit = Lit::new(1 + v % n, val);
            if !a.is_assigned(lit.var()) {
                a.decide(lit);
            }
            if !b.is_assigned(lit.var()) {
                b.decide(lit);
            }
        }
        let ra = propagate(&f, &mut a);
        let rb = propagate(&g, &mut b);
        prop_assert_eq!(ra == Propagation::Fixpoint, rb == Propagation::Fixpoint);
        if ra == Propagation::Fixpoint {
            prop_assert_eq!(assigned_set(&a), assigned_set(&b));
        }
    }

    #[test]
    fn trail_levels_non_decreasing(
        f in formula_strategy(12, 30, 3),
        decisions in prop::collection::vec((0u32..64, any::<bool>()), 0..5),
    ) {
        let (a, _) = decide_all(&f, &decisions);
        let levels: Vec<u32> = a.trail().iter().map(|l| a.level_of(l.var())).collect();
        prop_assert!(levels.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn residual_preserves_models(
        f in formula_strategy(12, 30, 3),
        decisions in prop::collection::vec((0u32..64, any::<bool>()), 0..4),
    ) {
        let (a, ok) = decide_all(&f, &decisions);
        prop_assume!(ok);
        let r = residual(&f, &a).unwrap();
        prop_assert_eq!(r.num_vars(), f.num_vars());
        let n = f.num_vars();
        for bits in 0u32..1 << n {
            let values: Vec<bool> = (0..n).map(|i| bits & (1 << i) != 0).collect();
            if a.trail().iter().any(|l| values[(l.var() - 1) as usize] != l.is_positive()) {
                continue;
            }
            prop_assert_eq!(naive_eval(&f, &values), naive_eval(&r, &values));
        }
    }
}
