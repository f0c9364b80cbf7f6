//! DIMACS CNF reader and writer with the `x` line extension for XOR constraints.
//!
//! An `x` line lists literals whose XOR must be true, so `x 1 2 -3 0` is
//! stored as `XOR({1,2,3}) = 0`. The reader is lenient: count mismatches and
//! out-of-range literals produce warnings, not errors.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cnf::{Clause, CnfFormula, Lit, XorConstraint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: invalid token {token:?}")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: literal {value} exceeds the supported variable range")]
    VarTooLarge { line: usize, value: i64 },
    #[error("line {line}: malformed header {text:?}")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: clause appears before the \"p cnf\" header")]
    ClauseBeforeHeader { line: usize },
    #[error("line {line}: missing terminating 0")]
    MissingTerminator { line: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseDiagnostics {
    pub warnings: Vec<(usize, String)>,
    pub declared_vars: Option<u32>,
    pub declared_clauses: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Reject clause lines that precede the header.
    pub require_header: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum XorMode {
    /// Each XOR becomes its `2^(k-1)` clauses.
    #[default]
    Expand,
    /// Each XOR becomes one `x` line.
    Native,
}

pub fn parse_dimacs(text: &[u8]) -> Result<(CnfFormula, ParseDiagnostics), ParseError> {
    parse_dimacs_with(text, ParseOptions::default())
}

pub fn parse_dimacs_with(
    text: &[u8],
    options: ParseOptions,
) -> Result<(CnfFormula, ParseDiagnostics), ParseError> {
    let mut diag = ParseDiagnostics::default();
    let mut formula = CnfFormula::new(0);
    let mut pending: Vec<i64> = Vec::new();
    let mut pending_start = 0;
    let mut items = 0usize;

    for (idx, raw) in text.split(|&b| b == b'\n').enumerate() {
        let line_no = idx + 1;
        let line = String::from_utf8_lossy(raw);
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let first = line.as_bytes()[0];
        if first == b'c' {
            continue;
        }
        if first == b'%' {
            break;
        }
        if first == b'p' {
            if diag.declared_vars.is_some() {
                diag.warnings.push((line_no, "duplicate header ignored".into()));
                continue;
            }
            let (vars, clauses) = parse_header(line, line_no)?;
            diag.declared_vars = Some(vars);
            diag.declared_clauses = Some(clauses);
            formula.set_num_vars(vars);
            continue;
        }
        if options.require_header && diag.declared_vars.is_none() {
            return Err(ParseError::ClauseBeforeHeader { line: line_no });
        }
        if first == b'x' {
            if !pending.is_empty() {
                return Err(ParseError::MissingTerminator { line: pending_start });
            }
            let mut tokens = line[1..].split_ascii_whitespace();
            let mut lits = Vec::new();
            let mut terminated = false;
            for tok in tokens.by_ref() {
                let v = parse_literal(tok, line_no)?;
                if v == 0 {
                    terminated = true;
                    break;
                }
                lits.push(v);
            }
            if !terminated {
                return Err(ParseError::MissingTerminator { line: line_no });
            }
            if tokens.next().is_some() {
                diag.warnings.push((line_no, "tokens after XOR terminator ignored".into()));
            }
            note_range(&lits, &formula, &diag.declared_vars, line_no, &mut diag.warnings);
            formula.add_xor_form(XorConstraint::from_lits(lits.iter().map(|&l| Lit::from_dimacs(l))));
            items += 1;
            continue;
        }
        for tok in line.split_ascii_whitespace() {
            let v = parse_literal(tok, line_no)?;
            if pending.is_empty() {
                pending_start = line_no;
            }
            if v != 0 {
                pending.push(v);
                continue;
            }
            note_range(&pending, &formula, &diag.declared_vars, line_no, &mut diag.warnings);
            let clause = Clause::from_dimacs(&pending);
            if clause.len() < pending.len() {
                diag.warnings.push((line_no, "duplicate literals removed".into()));
            }
            formula.add_clause(clause);
            pending.clear();
            items += 1;
        }
    }
    if !pending.is_empty() {
        return Err(ParseError::MissingTerminator { line: pending_start });
    }
    if let Some(declared) = diag.declared_clauses {
        if declared != items {
            diag.warnings.push((0, format!("header declares {declared} clauses, found {items}")));
        }
    }
    Ok((formula, diag))
}

fn parse_header(line: &str, line_no: usize) -> Result<(u32, usize), ParseError> {
    let bad = || ParseError::BadHeader {
        line: line_no,
        text: line.chars().take(80).collect(),
    };
    let tokens: Vec<&str> = line.split_ascii_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "p" || tokens[1] != "cnf" {
        return Err(bad());
    }
    let vars: u64 = tokens[2].parse().map_err(|_| bad())?;
    let clauses: usize = tokens[3].parse().map_err(|_| bad())?;
    if vars > Lit::MAX_VAR as u64 {
        return Err(ParseError::VarTooLarge {
            line: line_no,
            value: vars as i64,
        });
    }
    Ok((vars as u32, clauses))
}

fn parse_literal(tok: &str, line_no: usize) -> Result<i64, ParseError> {
    let v: i64 = tok.parse().map_err(|_| ParseError::InvalidToken {
        line: line_no,
        token: tok.chars().take(40).collect(),
    })?;
    if v.unsigned_abs() > Lit::MAX_VAR as u64 {
        return Err(ParseError::VarTooLarge { line: line_no, value: v });
    }
    Ok(v)
}

fn note_range(
    lits: &[i64],
    formula: &CnfFormula,
    declared: &Option<u32>,
    line_no: usize,
    warnings: &mut Vec<(usize, String)>,
) {
    if let Some(declared) = declared {
        let max = lits.iter().map(|l| l.unsigned_abs()).max().unwrap_or(0);
        if max > *declared as u64 && max > formula.num_vars() as u64 {
            warnings.push((line_no, format!("variable {max} exceeds declared count {declared}")));
        }
    }
}

pub fn write_dimacs(formula: &CnfFormula, mode: XorMode) -> Vec<u8> {
    write_dimacs_with_comments(formula, mode, &[])
}

/// Writes `c <comment>` lines, the header, then one clause per line.
pub fn write_dimacs_with_comments(formula: &CnfFormula, mode: XorMode, comments: &[String]) -> Vec<u8> {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "c {c}");
    }
    let expanded: Vec<Clause>;
    let (clauses, xor_lines): (&[Clause], &[XorConstraint]) = match mode {
        XorMode::Native => (formula.clauses(), formula.xors()),
        XorMode::Expand => {
            expanded = formula.expanded_clauses();
            (&expanded, &[])
        }
    };
    let _ = writeln!(
        out,
        "p cnf {} {}",
        formula.num_vars(),
        clauses.len() + xor_lines.len()
    );
    for c in clauses {
        for l in c.lits() {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    for x in xor_lines {
        out.push('x');
        for (i, &v) in x.vars().iter().enumerate() {
            // A single negation on the first variable encodes parity 0.
            let lit = if i == 0 && !x.parity() { -(v as i64) } else { v as i64 };
            let _ = write!(out, " {lit}");
        }
        out.push_str(" 0\n");
    }
    out.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::XorForm;

    #[test]
    fn parses_plain_cnf() {
        let (f, d) = parse_dimacs(b"p cnf 3 2\n1 -2 0\n2 3 0\n").unwrap();
        assert_eq!(f.num_vars(), 3);
        assert_eq!(
            f.clauses(),
            &[Clause::from_dimacs(&[1, -2]), Clause::from_dimacs(&[2, 3])]
        );
        assert!(d.warnings.is_empty());
        assert_eq!(d.declared_clauses, Some(2));
    }

    #[test]
    fn parses_xor_line() {
        let (f, _) = parse_dimacs(b"p cnf 3 1\nx 1 2 -3 0\n").unwrap();
        assert!(f.clauses().is_empty());
        assert_eq!(f.xors().len(), 1);
        assert_eq!(f.xors()[0].vars(), &[1, 2, 3]);
        assert!(!f.xors()[0].parity());
    }

    #[test]
    fn clause_may_span_lines() {
        let (f, _) = parse_dimacs(b"c hello\np cnf 3 1\n1 2\n 3 0\n").unwrap();
        assert_eq!(f.clauses(), &[Clause::from_dimacs(&[1, 2, 3])]);
    }

    #[test]
    fn warnings_for_lenient_cases() {
        let (f, d) = parse_dimacs(b"p cnf 2 1\n1 1 5 0\n-2 0\n").unwrap();
        assert_eq!(f.num_vars(), 5);
        assert_eq!(f.clauses()[0], Clause::from_dimacs(&[1, 5]));
        assert_eq!(d.warnings.len(), 3, "{:?}", d.warnings);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_dimacs(b"p cnf 2 1\n1 a 0\n"),
            Err(ParseError::InvalidToken { line: 2, .. })
        ));
        assert!(matches!(
            parse_dimacs(b"p cnf 2 1\n1 2\n"),
            Err(ParseError::MissingTerminator { line: 2 })
        ));
        assert!(matches!(
            parse_dimacs(b"p cnf x 1\n"),
            Err(ParseError::BadHeader { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs(b"1 99999999999 0\n"),
            Err(ParseError::VarTooLarge { .. })
        ));
        let strict = ParseOptions { require_header: true };
        assert!(matches!(
            parse_dimacs_with(b"1 2 0\np cnf 2 1\n", strict),
            Err(ParseError::ClauseBeforeHeader { line: 1 })
        ));
        assert!(parse_dimacs(b"1 2 0\n").is_ok());
    }

    #[test]
    fn expand_two_variable_xor() {
        let mut f = CnfFormula::new(2);
        f.add_xor_form(XorConstraint::normalize([1, 2], true));
        let text = String::from_utf8(write_dimacs(&f, XorMode::Expand)).unwrap();
        assert_eq!(text, "p cnf 2 2\n1 2 0\n-1 -2 0\n");
    }

    #[test]
    fn native_writer_is_byte_exact() {
        let mut f = CnfFormula::from_dimacs(4, &[&[1, -2], &[]]);
        f.add_xor_form(XorConstraint::normalize([2, 3, 4], false));
        let text = String::from_utf8(write_dimacs_with_comments(&f, XorMode::Native, &["n=4".into()])).unwrap();
        assert_eq!(text, "c n=4\np cnf 4 3\n1 -2 0\n0\nx -2 3 4 0\n");
        let (back, _) = parse_dimacs(text.as_bytes()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn xor_line_degenerates() {
        let (f, _) = parse_dimacs(b"x 1 1 0\nx -2 0\n").unwrap();
        assert_eq!(f.clauses(), &[Clause::empty(), Clause::from_dimacs(&[-2])]);
        assert_eq!(XorConstraint::from_lits([Lit::pos(1)]), XorForm::Unit(Lit::pos(1)));
    }
}
