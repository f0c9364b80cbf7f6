//! Subproblem simplification: equivalent literals from the binary implication
//! graph, substitution, and backward subsumption, iterated to fixpoint.

use std::collections::HashSet;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::cnf::{Clause, CnfFormula, Lit, Model, Var, XorConstraint, XorForm};

/// Maps every variable to a representative literal; identity when unbound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionMap {
    rep: Vec<Lit>,
}

impl SubstitutionMap {
    pub fn identity(num_vars: u32) -> SubstitutionMap {
        SubstitutionMap {
            rep: (0..=num_vars).map(|v| Lit::pos(v.max(1))).collect(),
        }
    }

    pub fn num_vars(&self) -> u32 {
        (self.rep.len() - 1) as u32
    }

    fn grow(&mut self, num_vars: u32) {
        while self.num_vars() < num_vars {
            let v = self.rep.len() as Var;
            self.rep.push(Lit::pos(v));
        }
    }

    /// Representative of `var` (the positive literal of `var` if unbound).
    pub fn get(&self, var: Var) -> Lit {
        match self.rep.get(var as usize) {
            Some(&l) => l,
            None => Lit::pos(var),
        }
    }

    pub fn map_lit(&self, lit: Lit) -> Lit {
        let r = self.get(lit.var());
        if lit.is_positive() {
            r
        } else {
            !r
        }
    }

    /// Binds `var` to `lit`.
    pub fn bind(&mut self, var: Var, lit: Lit) {
        self.grow(var.max(lit.var()));
        self.rep[var as usize] = lit;
    }

    pub fn is_identity(&self) -> bool {
        self.bound_vars().next().is_none()
    }

    pub fn bound_vars(&self) -> impl Iterator<Item = Var> + '_ {
        (1..self.rep.len() as Var).filter(|&v| self.rep[v as usize] != Lit::pos(v))
    }

    /// `later` applied after `self`.
    pub fn compose(&self, later: &SubstitutionMap) -> SubstitutionMap {
        let n = self.num_vars().max(later.num_vars());
        let mut out = SubstitutionMap::identity(n);
        for v in 1..=n {
            out.rep[v as usize] = later.map_lit(self.get(v));
        }
        out
    }

    /// `rep(rep(x)) = rep(x)` for every variable.
    pub fn is_idempotent(&self) -> bool {
        (1..=self.num_vars()).all(|v| {
            let r = self.get(v);
            self.map_lit(r) == r
        })
    }

    /// Gives every bound variable the value of its representative literal.
    pub fn extend_model(&self, model: &mut Model) {
        model.resize(self.num_vars());
        for v in self.bound_vars().collect::<Vec<_>>() {
            let value = model.lit_value(self.get(v));
            model.set(v, value);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalences {
    Found(SubstitutionMap),
    /// Some literal is equivalent to its own negation.
    Contradiction,
}

/// Strongly connected components of the implication graph of binary clauses
/// and binary XORs. Each class maps to the positive literal of its smallest
/// variable.
pub fn find_equivalent_literals(formula: &CnfFormula) -> Equivalences {
    let n = formula.num_vars();
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(2 * (n as usize + 1), 0);
    for _ in 0..2 * (n as usize + 1) {
        graph.add_node(());
    }
    let node = |l: Lit| NodeIndex::new(l.index());
    let mut implies = |a: Lit, b: Lit| {
        graph.add_edge(node(a), node(b), ());
        graph.add_edge(node(!b), node(!a), ());
    };
    for c in formula.clauses() {
        if let [a, b] = *c.lits() {
            if a.var() != b.var() {
                implies(!a, b);
            }
        }
    }
    for x in formula.xors() {
        if let [u, v] = *x.vars() {
            // u ^ v = p  <=>  u == (v ^ p)
            let target = Lit::new(v, !x.parity());
            implies(Lit::pos(u), target);
            implies(target, Lit::pos(u));
        }
    }

    let mut map = SubstitutionMap::identity(n);
    for component in tarjan_scc(&graph) {
        if component.len() < 2 {
            continue;
        }
        let lits: Vec<Lit> = component.iter().map(|ix| Lit::from_index(ix.index())).collect();
        let mut vars: Vec<Var> = lits.iter().map(|l| l.var()).collect();
        vars.sort_unstable();
        if vars.windows(2).any(|w| w[0] == w[1]) {
            return Equivalences::Contradiction;
        }
        let smallest = vars[0];
        // Only the class holding the positive smallest literal is mapped; its
        // mirror class carries the same information.
        if !lits.contains(&Lit::pos(smallest)) {
            continue;
        }
        for l in lits {
            if l.var() != smallest {
                map.rep[l.var() as usize] = Lit::new(smallest, l.is_positive());
            }
        }
    }
    Equivalences::Found(map)
}

/// Rewrites every literal through `map`; tautologies are dropped, duplicate
/// clauses merged, and XORs folded (`x ^ x = 0`).
pub fn apply_substitution(formula: &CnfFormula, map: &SubstitutionMap) -> CnfFormula {
    let mut out = CnfFormula::new(formula.num_vars());
    let mut seen: HashSet<Clause> = HashSet::new();
    let mut push = |out: &mut CnfFormula, c: Clause| {
        if !c.is_tautology() && seen.insert(c.clone()) {
            out.add_clause(c);
        }
    };
    for c in formula.clauses() {
        push(&mut out, Clause::new(c.lits().iter().map(|&l| map.map_lit(l))));
    }
    let mut seen_xors: HashSet<XorConstraint> = HashSet::new();
    for x in formula.xors() {
        let mut parity = x.parity();
        let vars: Vec<Var> = x
            .vars()
            .iter()
            .map(|&v| {
                let r = map.get(v);
                parity ^= !r.is_positive();
                r.var()
            })
            .collect();
        match XorConstraint::normalize(vars, parity) {
            XorForm::Xor(x) => {
                if seen_xors.insert(x.clone()) {
                    out.add_xor(x);
                }
            }
            XorForm::Unit(l) => push(&mut out, Clause::unit(l)),
            XorForm::Unsat => push(&mut out, Clause::empty()),
            XorForm::Trivial => {}
        }
    }
    out
}

/// Removes every clause that is a superset of another clause; of identical
/// clauses the first is kept. XORs are untouched.
pub fn backward_subsume(formula: &CnfFormula) -> CnfFormula {
    backward_subsume_counted(formula).0
}

fn backward_subsume_counted(formula: &CnfFormula) -> (CnfFormula, usize) {
    let clauses = formula.clauses();
    let n = formula.num_vars() as usize;
    let mut occ: Vec<Vec<usize>> = vec![Vec::new(); 2 * (n + 1)];
    for (i, c) in clauses.iter().enumerate() {
        for &l in c.lits() {
            occ[l.index()].push(i);
        }
    }
    let mut order: Vec<usize> = (0..clauses.len()).collect();
    order.sort_by_key(|&i| (clauses[i].len(), i));
    let mut removed = vec![false; clauses.len()];
    let mut count = 0;
    for &i in &order {
        if removed[i] {
            continue;
        }
        let c = &clauses[i];
        let Some(&rarest) = c.lits().iter().min_by_key(|l| occ[l.index()].len()) else {
            // The empty clause subsumes everything.
            for (j, r) in removed.iter_mut().enumerate() {
                if j != i && !*r {
                    *r = true;
                    count += 1;
                }
            }
            break;
        };
        for &j in &occ[rarest.index()] {
            if j != i && !removed[j] && c.subsumes(&clauses[j]) {
                removed[j] = true;
                count += 1;
            }
        }
    }
    let kept = clauses
        .iter()
        .zip(&removed)
        .filter(|(_, &r)| !r)
        .map(|(c, _)| c.clone())
        .collect();
    (
        CnfFormula::from_parts(formula.num_vars(), kept, formula.xors().to_vec()),
        count,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimplifyStatus {
    Simplified,
    ProvenUnsat,
}

#[derive(Debug, Clone)]
pub struct SimplifyOutcome {
    pub formula: CnfFormula,
    pub substitution: SubstitutionMap,
    pub status: SimplifyStatus,
    pub clauses_subsumed: usize,
    pub literals_merged: usize,
}

/// Equivalence substitution and backward subsumption until neither changes
/// anything.
pub fn simplify(formula: &CnfFormula) -> SimplifyOutcome {
    let n = formula.num_vars();
    let mut f = formula.clone();
    let mut substitution = SubstitutionMap::identity(n);
    let mut clauses_subsumed = 0;
    let mut literals_merged = 0;
    let mut first = true;
    loop {
        if f.has_empty_clause() {
            break;
        }
        let mut changed = false;
        match find_equivalent_literals(&f) {
            Equivalences::Contradiction => {
                let mut unsat = CnfFormula::new(n);
                unsat.add_clause(Clause::empty());
                f = unsat;
                break;
            }
            Equivalences::Found(map) => {
                if !map.is_identity() {
                    literals_merged += map.bound_vars().count();
                    substitution = substitution.compose(&map);
                    changed = true;
                }
                if changed || first {
                    f = apply_substitution(&f, &map);
                }
            }
        }
        first = false;
        let (g, removed) = backward_subsume_counted(&f);
        clauses_subsumed += removed;
        f = g;
        if !changed && removed == 0 {
            break;
        }
    }
    let status = if f.has_empty_clause() {
        SimplifyStatus::ProvenUnsat
    } else {
        SimplifyStatus::Simplified
    };
    SimplifyOutcome {
        formula: f,
        substitution,
        status,
        clauses_subsumed,
        literals_merged,
    }
}
