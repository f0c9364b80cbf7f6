#![no_main]

use libfuzzer_sys::fuzz_target;
use logicsat::cnf::evaluate;
use logicsat::dimacs::parse_dimacs;
use logicsat::oracle::brute_force_sat;
use logicsat::rules::{match_rules, verify_match};
use logicsat::simplify::{simplify, SimplifyStatus};
use logicsat::split::{solve_split, SplitConfig, SplitVerdict};
use logicsat::xor::{extract_xors, DEFAULT_MAX_ARITY};

fuzz_target!(|data: &[u8]| {
    let Ok((f, _)) = parse_dimacs(data) else { return };
    if f.num_vars() > 12 || f.clauses().len() > 200 {
        return;
    }
    let (g, _) = extract_xors(&f, DEFAULT_MAX_ARITY);
    for m in match_rules(&g) {
        assert_eq!(verify_match(&m, &g), Ok(true), "{}", m.dump());
    }
    let expected = brute_force_sat(&f).expect("within the cap").is_sat();
    let simplified = simplify(&g);
    if simplified.status == SimplifyStatus::ProvenUnsat {
        assert!(!expected);
    }
    match solve_split(&g, &SplitConfig::default()).expect("default config").0 {
        SplitVerdict::Sat(m) => assert!(expected && evaluate(&f, &m) == Ok(true)),
        SplitVerdict::Unsat => assert!(!expected),
        SplitVerdict::Unknown => unreachable!("no budget"),
    }
});
