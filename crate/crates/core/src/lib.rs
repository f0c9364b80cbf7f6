//! A lookahead-splitting SAT solver that extracts XOR constraints and a small
//! family of inference-rule patterns from each subproblem, adds the implied
//! clauses, and finishes the subproblem with a CDCL search.

pub mod cdcl;
pub mod cnf;
pub mod dimacs;
pub mod gen;
pub mod hwb;
pub mod oracle;
pub mod rules;
pub mod simplify;
pub mod split;
pub mod xor;
