#![no_main]

use libfuzzer_sys::fuzz_target;
use logicsat::dimacs::{parse_dimacs, write_dimacs, XorMode};

fuzz_target!(|data: &[u8]| {
    let Ok((f, _)) = parse_dimacs(data) else { return };
    let native = write_dimacs(&f, XorMode::Native);
    let (g, _) = parse_dimacs(&native).expect("writer output parses");
    assert_eq!(g.clauses(), f.clauses());
    assert_eq!(g.xors(), f.xors());
    assert_eq!(write_dimacs(&g, XorMode::Native), native);

    let (h, _) = parse_dimacs(&write_dimacs(&f, XorMode::Expand)).expect("writer output parses");
    assert!(h.xors().is_empty());
    assert_eq!(h.clauses(), f.expanded_clauses().as_slice());
});
