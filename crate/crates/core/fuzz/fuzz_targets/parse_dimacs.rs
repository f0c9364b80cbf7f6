#![no_main]

use libfuzzer_sys::fuzz_target;
use logicsat::dimacs::{parse_dimacs_with, ParseOptions};

fuzz_target!(|data: &[u8]| {
    for require_header in [false, true] {
        if let Ok((f, diag)) = parse_dimacs_with(data, ParseOptions { require_header }) {
            assert!(f.clauses().iter().flat_map(|c| c.vars()).all(|v| v >= 1 && v <= f.num_vars()));
            assert!(diag.warnings.iter().all(|(_, msg)| !msg.is_empty()));
        }
    }
});
