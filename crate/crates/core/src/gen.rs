//! Seeded instance generators: uniform random k-CNF, planted XOR groups and
//! planted rule premises. Used by tests, the acceptance suite and the fuzzers.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cnf::{Clause, CnfFormula, Lit, Var, XorConstraint, XorForm};
use crate::rules::{RuleId, RuleMatch};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `k` distinct variables drawn uniformly from `1..=num_vars`.
pub fn distinct_vars(rng: &mut impl Rng, num_vars: u32, k: usize) -> Vec<Var> {
    assert!(k as u32 <= num_vars, "cannot draw {k} distinct variables from {num_vars}");
    let mut out: Vec<Var> = Vec::with_capacity(k);
    while out.len() < k {
        let v = rng.random_range(1..=num_vars);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

pub fn random_clause(rng: &mut impl Rng, num_vars: u32, k: usize) -> Clause {
    Clause::new(
        distinct_vars(rng, num_vars, k)
            .into_iter()
            .map(|v| Lit::new(v, rng.random_bool(0.5))),
    )
}

/// Uniform random k-CNF with clauses over distinct variables.
pub fn random_kcnf(seed: u64, num_vars: u32, num_clauses: usize, k: usize) -> CnfFormula {
    let mut r = rng(seed);
    let clauses = (0..num_clauses).map(|_| random_clause(&mut r, num_vars, k)).collect();
    CnfFormula::from_parts(num_vars, clauses, Vec::new())
}

/// Random formula with clause widths in `1..=max_width` and, optionally, XORs.
pub fn random_mixed(seed: u64, num_vars: u32, num_clauses: usize, max_width: usize, num_xors: usize) -> CnfFormula {
    let mut r = rng(seed);
    let mut f = CnfFormula::new(num_vars);
    for _ in 0..num_clauses {
        let w = r.random_range(1..=max_width.min(num_vars as usize));
        f.add_clause(random_clause(&mut r, num_vars, w));
    }
    for _ in 0..num_xors {
        let w = r.random_range(2..=4.min(num_vars as usize));
        let vars = distinct_vars(&mut r, num_vars, w);
        f.add_xor_form(XorConstraint::normalize(vars, r.random_bool(0.5)));
    }
    f
}

/// A formula whose clauses contain the full expansion of `num_xors` XORs of
/// arity 3 or 4 over distinct variable sets, shuffled among `filler` random
/// 3-clauses. Returns the formula and the planted XORs sorted by variables.
pub fn planted_xors(seed: u64, num_vars: u32, num_xors: usize, filler: usize) -> (CnfFormula, Vec<XorConstraint>) {
    let mut r = rng(seed);
    let mut planted: Vec<XorConstraint> = Vec::new();
    while planted.len() < num_xors {
        let arity = r.random_range(3..=4);
        let vars = distinct_vars(&mut r, num_vars, arity);
        if let XorForm::Xor(x) = XorConstraint::normalize(vars, r.random_bool(0.5)) {
            if !planted.iter().any(|p| p.vars() == x.vars()) {
                planted.push(x);
            }
        }
    }
    let mut clauses: Vec<Clause> = planted.iter().flat_map(|x| x.expand()).collect();
    let planted_sets: Vec<&[Var]> = planted.iter().map(|x| x.vars()).collect();
    let mut added = 0;
    while added < filler {
        let c = random_clause(&mut r, num_vars, 3);
        let vars: Vec<Var> = c.vars().collect();
        // Filler stays off the planted variable sets so recall is unambiguous.
        if planted_sets.contains(&vars.as_slice()) {
            continue;
        }
        clauses.push(c);
        added += 1;
    }
    clauses.shuffle(&mut r);
    planted.sort();
    (CnfFormula::from_parts(num_vars, clauses, Vec::new()), planted)
}

/// A random instance of `rule` over distinct variables of `1..=num_vars`.
pub fn random_rule_match(rng: &mut impl Rng, rule: RuleId, num_vars: u32) -> RuleMatch {
    let vars = distinct_vars(rng, num_vars, rule.letters());
    let bindings = vars.into_iter().map(|v| Lit::new(v, rng.random_bool(0.5))).collect();
    RuleMatch::new(rule, bindings)
}

/// Adds the clauses of a rule premise, with its XOR expanded into clauses.
pub fn plant_premise(f: &mut CnfFormula, m: &RuleMatch) {
    let p = m.premise();
    if let XorForm::Xor(x) = XorConstraint::from_lits(p.xor.iter().copied()) {
        for c in x.expand() {
            f.add_clause(c);
        }
    }
    for c in p.clauses {
        f.add_clause(c);
    }
}

/// A formula of at most `max_vars` variables holding 1 to 3 planted rule
/// premises (XORs in expanded form) plus random 3-clause filler near the
/// satisfiability threshold.
pub fn planted_pattern_formula(seed: u64, max_vars: u32) -> (CnfFormula, Vec<RuleMatch>) {
    let mut r = rng(seed);
    let num_vars = r.random_range(10..=max_vars.max(10));
    let mut f = CnfFormula::new(num_vars);
    let count = r.random_range(1..=3);
    let mut planted = Vec::new();
    for _ in 0..count {
        let rule = RuleId::ALL[r.random_range(0..7)];
        let m = random_rule_match(&mut r, rule, num_vars);
        plant_premise(&mut f, &m);
        planted.push(m);
    }
    let filler = (num_vars as f64 * r.random_range(2.5..4.0)) as usize;
    for _ in 0..filler {
        f.add_clause(random_clause(&mut r, num_vars, 3));
    }
    let (n, mut clauses, xors) = f.into_parts();
    clauses.shuffle(&mut r);
    (CnfFormula::from_parts(n, clauses, xors), planted)
}
