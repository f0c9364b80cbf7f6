//! The seven premise patterns over XOR constraints and short clauses, the
//! implications they license, and the clausal encoding of those implications.
//!
//! Pattern letters `A..E` bind to literals. An XOR premise such as
//! `A ^ B ^ C = 1` is satisfied by a stored `XorConstraint` over the same
//! variables whose parity, corrected by the number of negative bindings, is 1.
//!
//! | rule | premise (besides the XOR)                         | consequence            |
//! |------|---------------------------------------------------|------------------------|
//! | 1    | `A^B^C=1`, `(A|D)(-B|D)`                          | `C -> D`               |
//! | 2    | `A^B^C=1`, `(A|B)(A|C)`                           | `A`                    |
//! | 3    | `A^B^C=1`, `(A|B)(A|C)(B|C)`                      | `A & B & C`            |
//! | 4    | `A^B^C^D=1`, `(A|B)(A|C)(B|C)`                    | `-D -> A & B & C`      |
//! | 5    | `A^B^C=1`, `(A|B|D)(-A|-B|-D)` and the C variants | `-D -> A & B & C`      |
//! | 6    | `A^B^C^D=1`, `(A|B|E)(A|C|E)(B|C|E)`              | `-D & -E -> A & B & C` |
//! | 7    | `A^B^C^D=1`, `(-A|-B|-E)(-A|-C|-E)(-B|-C|-E)`     | `D & E -> -A & -B & -C`|

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::cnf::{Clause, CnfFormula, Lit, Var, XorConstraint};
use crate::oracle::{self, OracleError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleId(u8);

impl RuleId {
    pub const ALL: [RuleId; 7] = [
        RuleId(1),
        RuleId(2),
        RuleId(3),
        RuleId(4),
        RuleId(5),
        RuleId(6),
        RuleId(7),
    ];

    pub fn new(id: u8) -> Option<RuleId> {
        (1..=7).contains(&id).then_some(RuleId(id))
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// Arity of the XOR premise.
    pub fn xor_arity(self) -> usize {
        match self.0 {
            1 | 2 | 3 | 5 => 3,
            _ => 4,
        }
    }

    /// Number of bound letters.
    pub fn letters(self) -> usize {
        match self.0 {
            2 | 3 => 3,
            1 | 4 | 5 => 4,
            _ => 5,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}", self.0)
    }
}

/// A bound instance of one rule; `bindings` lists `A, B, C, D, E` as applicable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleMatch {
    pub rule: RuleId,
    pub bindings: Vec<Lit>,
}

/// The clauses and XOR literals a rule instance requires.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Premise {
    /// Literals whose XOR must be true.
    pub xor: Vec<Lit>,
    pub clauses: Vec<Clause>,
}

impl RuleMatch {
    pub fn new(rule: RuleId, bindings: Vec<Lit>) -> RuleMatch {
        RuleMatch { rule, bindings }
    }

    fn letter(&self, i: usize) -> Lit {
        self.bindings[i]
    }

    pub fn premise(&self) -> Premise {
        let (a, b, c) = (self.letter(0), self.letter(1), self.letter(2));
        let cl = |lits: &[Lit]| Clause::new(lits.iter().copied());
        match self.rule.0 {
            1 => {
                let d = self.letter(3);
                Premise {
                    xor: vec![a, b, c],
                    clauses: vec![cl(&[a, d]), cl(&[!b, d])],
                }
            }
            2 => Premise {
                xor: vec![a, b, c],
                clauses: vec![cl(&[a, b]), cl(&[a, c])],
            },
            3 => Premise {
                xor: vec![a, b, c],
                clauses: vec![cl(&[a, b]), cl(&[a, c]), cl(&[b, c])],
            },
            4 => Premise {
                xor: vec![a, b, c, self.letter(3)],
                clauses: vec![cl(&[a, b]), cl(&[a, c]), cl(&[b, c])],
            },
            5 => {
                let d = self.letter(3);
                Premise {
                    xor: vec![a, b, c],
                    clauses: vec![
                        cl(&[a, b, d]),
                        cl(&[!a, !b, !d]),
                        cl(&[a, c, d]),
                        cl(&[!a, !c, !d]),
                        cl(&[b, c, d]),
                        cl(&[!b, !c, !d]),
                    ],
                }
            }
            6 => {
                let e = self.letter(4);
                Premise {
                    xor: vec![a, b, c, self.letter(3)],
                    clauses: vec![cl(&[a, b, e]), cl(&[a, c, e]), cl(&[b, c, e])],
                }
            }
            7 => {
                let e = self.letter(4);
                Premise {
                    xor: vec![a, b, c, self.letter(3)],
                    clauses: vec![cl(&[!a, !b, !e]), cl(&[!a, !c, !e]), cl(&[!b, !c, !e])],
                }
            }
            _ => unreachable!("rule ids are 1..=7"),
        }
    }

    /// Debug dump line, e.g. `r1 A=1 B=2 C=3 D=4`.
    pub fn dump(&self) -> String {
        let mut s = self.rule.to_string();
        for (name, lit) in ["A", "B", "C", "D", "E"].iter().zip(&self.bindings) {
            s.push_str(&format!(" {name}={lit}"));
        }
        s
    }
}

/// `antecedent` (conjunction) implies `consequent` (conjunction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Consequence {
    pub antecedent: Vec<Lit>,
    pub consequent: Vec<Lit>,
    pub source: RuleMatch,
}

pub fn consequence_of(m: &RuleMatch) -> Consequence {
    let l = |i: usize| m.bindings[i];
    let (antecedent, consequent) = match m.rule.0 {
        1 => (vec![l(2)], vec![l(3)]),
        2 => (vec![], vec![l(0)]),
        3 => (vec![], vec![l(0), l(1), l(2)]),
        4 | 5 => (vec![!l(3)], vec![l(0), l(1), l(2)]),
        6 => (vec![!l(3), !l(4)], vec![l(0), l(1), l(2)]),
        7 => (vec![l(3), l(4)], vec![!l(0), !l(1), !l(2)]),
        _ => unreachable!("rule ids are 1..=7"),
    };
    Consequence {
        antecedent,
        consequent,
        source: m.clone(),
    }
}

/// One clause `(-l1 | ... | -lk | m)` per consequent literal, duplicates removed.
pub fn encode_cnf(consequences: &[Consequence]) -> Vec<Clause> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for c in consequences {
        for &m in &c.consequent {
            let clause = Clause::new(c.antecedent.iter().map(|&a| !a).chain([m]));
            if seen.insert(clause.clone()) {
                out.push(clause);
            }
        }
    }
    out
}

/// Lookup structures over the clauses of one formula.
struct Index<'a> {
    clauses: HashSet<&'a [Lit]>,
    binary: HashMap<Lit, Vec<Lit>>,
    ternary: HashMap<(Lit, Lit), Vec<Lit>>,
}

fn ordered(a: Lit, b: Lit) -> (Lit, Lit) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl<'a> Index<'a> {
    fn build(formula: &'a CnfFormula) -> Index<'a> {
        let mut clauses = HashSet::new();
        let mut binary: HashMap<Lit, Vec<Lit>> = HashMap::new();
        let mut ternary: HashMap<(Lit, Lit), Vec<Lit>> = HashMap::new();
        for c in formula.clauses() {
            if c.is_tautology() || !clauses.insert(c.lits()) {
                continue;
            }
            match *c.lits() {
                [x, y] => {
                    binary.entry(x).or_default().push(y);
                    binary.entry(y).or_default().push(x);
                }
                [x, y, z] => {
                    ternary.entry((x, y)).or_default().push(z);
                    ternary.entry((x, z)).or_default().push(y);
                    ternary.entry((y, z)).or_default().push(x);
                }
                _ => {}
            }
        }
        Index {
            clauses,
            binary,
            ternary,
        }
    }

    fn has(&self, clause: &Clause) -> bool {
        self.clauses.contains(clause.lits())
    }

    fn binary_partners(&self, l: Lit) -> &[Lit] {
        self.binary.get(&l).map_or(&[], Vec::as_slice)
    }

    fn third_literals(&self, a: Lit, b: Lit) -> &[Lit] {
        self.ternary.get(&ordered(a, b)).map_or(&[], Vec::as_slice)
    }
}

/// Every ordered literal tuple over the XOR's variables whose XOR is true.
fn literal_orderings(xor: &XorConstraint) -> Vec<Vec<Lit>> {
    let vars = xor.vars();
    let k = vars.len();
    let mut perms: Vec<Vec<Var>> = Vec::new();
    permute(&mut vars.to_vec(), 0, &mut perms);
    let mut out = Vec::new();
    for perm in perms {
        for signs in 0u32..(1 << k) {
            // literal XOR = parity ^ (#negative mod 2) must be 1
            let negs = signs.count_ones() % 2 == 1;
            if xor.parity() ^ negs {
                out.push(
                    perm.iter()
                        .enumerate()
                        .map(|(i, &v)| Lit::new(v, signs & (1 << i) == 0))
                        .collect(),
                );
            }
        }
    }
    out
}

fn permute(items: &mut Vec<Var>, k: usize, out: &mut Vec<Vec<Var>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Identity of a premise: its XOR and clause sets. Rules 6 and 7 are mirror
/// images under negating every letter, so the rule id is not part of it.
type PremiseKey = (Vec<Var>, bool, Vec<Clause>);

/// Preference among bindings of one premise: fewest negative letters, then
/// lowest rule id, then smallest bindings.
fn binding_rank(m: &RuleMatch) -> (usize, RuleId, &[Lit]) {
    let negs = m.bindings.iter().filter(|l| !l.is_positive()).count();
    (negs, m.rule, &m.bindings)
}

fn premise_key(m: &RuleMatch) -> PremiseKey {
    let p = m.premise();
    let mut clauses = p.clauses;
    clauses.sort();
    let mut vars: Vec<Var> = p.xor.iter().map(|l| l.var()).collect();
    vars.sort_unstable();
    let parity = p.xor.iter().filter(|l| !l.is_positive()).count() % 2 == 0;
    (vars, parity, clauses)
}

fn distinct_vars(lits: &[Lit]) -> bool {
    lits.iter()
        .enumerate()
        .all(|(i, a)| lits[..i].iter().all(|b| a.var() != b.var()))
}

/// All instances of the selected rules, one per distinct premise, sorted by
/// rule then bindings.
///
/// Among bindings that describe the same premise (symmetric positions, or the
/// rule 6/7 mirror), the one with the fewest negative letters is kept.
pub fn match_rules_where(formula: &CnfFormula, wanted: impl Fn(RuleId) -> bool) -> Vec<RuleMatch> {
    let index = Index::build(formula);
    let mut found: BTreeMap<PremiseKey, RuleMatch> = BTreeMap::new();
    let mut consider = |m: RuleMatch| {
        if !distinct_vars(&m.bindings) || !m.premise().clauses.iter().all(|c| index.has(c)) {
            return;
        }
        let key = premise_key(&m);
        match found.get(&key) {
            Some(existing) if binding_rank(existing) <= binding_rank(&m) => {}
            _ => {
                found.insert(key, m);
            }
        }
    };

    let mut seen_xors = HashSet::new();
    for xor in formula.xors() {
        if !seen_xors.insert(xor) {
            continue;
        }
        let arity = xor.arity();
        if arity != 3 && arity != 4 {
            continue;
        }
        for tuple in literal_orderings(xor) {
            let (a, b, c) = (tuple[0], tuple[1], tuple[2]);
            if arity == 3 {
                if wanted(RuleId(1)) {
                    for &d in index.binary_partners(a) {
                        consider(RuleMatch::new(RuleId(1), vec![a, b, c, d]));
                    }
                }
                if wanted(RuleId(2)) {
                    consider(RuleMatch::new(RuleId(2), vec![a, b, c]));
                }
                if wanted(RuleId(3)) {
                    consider(RuleMatch::new(RuleId(3), vec![a, b, c]));
                }
                if wanted(RuleId(5)) {
                    for &d in index.third_literals(a, b) {
                        consider(RuleMatch::new(RuleId(5), vec![a, b, c, d]));
                    }
                }
            } else {
                let d = tuple[3];
                if wanted(RuleId(4)) {
                    consider(RuleMatch::new(RuleId(4), vec![a, b, c, d]));
                }
                if wanted(RuleId(6)) {
                    for &e in index.third_literals(a, b) {
                        consider(RuleMatch::new(RuleId(6), vec![a, b, c, d, e]));
                    }
                }
                if wanted(RuleId(7)) {
                    for &ne in index.third_literals(!a, !b) {
                        consider(RuleMatch::new(RuleId(7), vec![a, b, c, d, !ne]));
                    }
                }
            }
        }
    }
    let mut out: Vec<RuleMatch> = found.into_values().collect();
    out.sort();
    out
}

/// Every instance of rules 1-7 in `formula`.
pub fn match_rules(formula: &CnfFormula) -> Vec<RuleMatch> {
    match_rules_where(formula, |_| true)
}

/// Checks a match against the formula it came from with the exhaustive oracle.
///
/// The premise sub-formula is made of the rule's clauses that are present in
/// `formula` together with every XOR of `formula` over the match's XOR
/// variables. Missing premise clauses make the match invalid.
pub fn verify_match(m: &RuleMatch, formula: &CnfFormula) -> Result<bool, OracleError> {
    if m.bindings.len() != m.rule.letters() || !distinct_vars(&m.bindings) {
        return Ok(false);
    }
    let premise = m.premise();
    let present: HashSet<&Clause> = formula.clauses().iter().collect();
    if !premise.clauses.iter().all(|c| present.contains(c)) {
        return Ok(false);
    }
    let mut vars: Vec<Var> = premise.xor.iter().map(|l| l.var()).collect();
    vars.sort_unstable();
    let xors: Vec<XorConstraint> = formula
        .xors()
        .iter()
        .filter(|x| x.vars() == vars.as_slice())
        .cloned()
        .collect();
    let sub = CnfFormula::from_parts(formula.num_vars(), premise.clauses, xors);
    oracle::entails(&sub, &consequence_of(m))
}

/// Per-rule match counts, indexed by rule id (slot 0 unused).
pub fn count_by_rule(matches: &[RuleMatch]) -> [usize; 8] {
    let mut counts = [0; 8];
    for m in matches {
        counts[m.rule.0 as usize] += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(v: &[i64]) -> Vec<Lit> {
        v.iter().map(|&l| Lit::from_dimacs(l)).collect()
    }

    fn formula(vars: u32, xors: &[(&[u32], bool)], clauses: &[&[i64]]) -> CnfFormula {
        let mut f = CnfFormula::from_dimacs(vars, clauses);
        for (v, p) in xors {
            f.add_xor_form(XorConstraint::normalize(v.iter().copied(), *p));
        }
        f
    }

    #[test]
    fn rule_one_example() {
        let f = formula(4, &[(&[1, 2, 3], true)], &[&[1, 4], &[-2, 4]]);
        let m = match_rules(&f);
        assert_eq!(m, vec![RuleMatch::new(RuleId(1), lits(&[1, 2, 3, 4]))]);
        assert_eq!(m[0].dump(), "r1 A=1 B=2 C=3 D=4");
        let c = consequence_of(&m[0]);
        assert_eq!((c.antecedent, c.consequent), (lits(&[3]), lits(&[4])));
        assert!(verify_match(&m[0], &f).unwrap());
    }

    #[test]
    fn rule_three_with_rule_two_instances() {
        let f = formula(3, &[(&[1, 2, 3], true)], &[&[1, 2], &[1, 3], &[2, 3]]);
        let m = match_rules(&f);
        let counts = count_by_rule(&m);
        assert_eq!(counts[3], 1);
        assert_eq!(counts[2], 3);
        assert_eq!(counts.iter().sum::<usize>(), 4);
        for x in &m {
            assert!(verify_match(x, &f).unwrap());
        }
    }

    #[test]
    fn rule_seven_example() {
        let f = formula(
            5,
            &[(&[1, 2, 3, 4], true)],
            &[&[-1, -2, -5], &[-1, -3, -5], &[-2, -3, -5]],
        );
        let m = match_rules(&f);
        assert_eq!(m, vec![RuleMatch::new(RuleId(7), lits(&[1, 2, 3, 4, 5]))]);
        let c = consequence_of(&m[0]);
        assert_eq!(c.antecedent, lits(&[4, 5]));
        assert_eq!(c.consequent, lits(&[-1, -2, -3]));
    }

    #[test]
    fn consequence_table() {
        let r = |id, b: &[i64]| consequence_of(&RuleMatch::new(RuleId(id), lits(b)));
        let c2 = r(2, &[1, 2, 3]);
        assert!(c2.antecedent.is_empty());
        assert_eq!(c2.consequent, lits(&[1]));
        let c6 = r(6, &[1, 2, 3, 4, 5]);
        assert_eq!(c6.antecedent, lits(&[-4, -5]));
        assert_eq!(c6.consequent, lits(&[1, 2, 3]));
        let c4 = r(4, &[1, 2, 3, 4]);
        assert_eq!(c4.antecedent, lits(&[-4]));
    }

    #[test]
    fn encoding() {
        let r = |id, b: &[i64]| consequence_of(&RuleMatch::new(RuleId(id), lits(b)));
        assert_eq!(encode_cnf(&[r(1, &[1, 2, 3, 4])]), vec![Clause::from_dimacs(&[-3, 4])]);
        assert_eq!(
            encode_cnf(&[r(3, &[1, 2, 3]), r(2, &[1, 2, 3])]),
            vec![
                Clause::from_dimacs(&[1]),
                Clause::from_dimacs(&[2]),
                Clause::from_dimacs(&[3])
            ]
        );
        assert_eq!(
            encode_cnf(&[r(6, &[1, 2, 3, 4, 5])]),
            vec![
                Clause::from_dimacs(&[1, 4, 5]),
                Clause::from_dimacs(&[2, 4, 5]),
                Clause::from_dimacs(&[3, 4, 5])
            ]
        );
    }

    #[test]
    fn negated_bindings_match() {
        // -1 ^ 2 ^ 3 = 1 is XOR({1,2,3}) = 0; premise (-1|4)(-2|4)
        let f = formula(4, &[(&[1, 2, 3], false)], &[&[-1, 4], &[-2, 4]]);
        let m = match_rules(&f);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].bindings[0], Lit::neg(1));
        assert!(verify_match(&m[0], &f).unwrap());
    }

    #[test]
    fn wrong_parity_fails_verification() {
        let good = formula(3, &[(&[1, 2, 3], true)], &[&[1, 2], &[1, 3], &[2, 3]]);
        let m = RuleMatch::new(RuleId(3), lits(&[1, 2, 3]));
        assert!(verify_match(&m, &good).unwrap());
        let bad = formula(3, &[(&[1, 2, 3], false)], &[&[1, 2], &[1, 3], &[2, 3]]);
        assert!(!verify_match(&m, &bad).unwrap());
        assert!(match_rules(&bad).iter().all(|x| x.rule != RuleId(3)));
    }

    #[test]
    fn missing_premise_clause_fails_verification() {
        let f = formula(4, &[(&[1, 2, 3], true)], &[&[1, 4]]);
        assert!(match_rules(&f).is_empty());
        let m = RuleMatch::new(RuleId(1), lits(&[1, 2, 3, 4]));
        assert!(!verify_match(&m, &f).unwrap());
    }

    #[test]
    fn conditional_consequence_verifies_when_antecedent_is_false() {
        let f = formula(
            5,
            &[(&[1, 2, 3, 4], true)],
            &[&[1, 2], &[1, 3], &[2, 3], &[4]],
        );
        let m = match_rules(&f);
        let r4: Vec<_> = m.iter().filter(|x| x.rule == RuleId(4)).collect();
        assert_eq!(r4.len(), 1);
        assert!(verify_match(r4[0], &f).unwrap());
    }
}
