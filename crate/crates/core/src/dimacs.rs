//! DIMACS CNF with comment annotations for NAE mode and multiset clauses.
//!
//! Recognised header comments:
//!
//! ```text
//! c mode sat|nae
//! c duplicates allowed|forbidden
//! c variant <spec-string>
//! ```
//!
//! Any other comment line is ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::formula::{Clause, CnfInstance, Flavor, Lit, Mode};
use crate::variant::VariantSpec;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: literal {lit} out of range (header declares {num_vars} variables)")]
    OutOfRange { line: usize, lit: i64, num_vars: usize },
    #[error("line {line}: clause repeats variable {var} but duplicates are forbidden")]
    Duplicate { line: usize, var: i64 },
    #[error("last clause is not terminated by 0")]
    MissingTerminator,
    #[error("header declares {declared} clauses, body has {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("missing `p cnf` header")]
    MissingHeader,
}

/// Parsed file: the instance plus an optional declared variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedDimacs {
    pub instance: CnfInstance,
    pub variant: Option<VariantSpec>,
}

pub fn parse_dimacs(text: &str) -> Result<CnfInstance, ParseError> {
    parse_annotated(text).map(|a| a.instance)
}

pub fn parse_annotated(text: &str) -> Result<AnnotatedDimacs, ParseError> {
    let mut mode = Mode::Sat;
    let mut flavor = Flavor::Set;
    let mut variant = None;
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut clause_lines: Vec<usize> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut current_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if let Some(comment) = line.strip_prefix('c') {
            if !(comment.is_empty() || comment.starts_with(char::is_whitespace)) {
                return Err(syntax(line_no, "unexpected token"));
            }
            let words: Vec<&str> = comment.split_whitespace().collect();
            match words.as_slice() {
                ["mode", "sat"] => mode = Mode::Sat,
                ["mode", "nae"] => mode = Mode::Nae,
                ["mode", other] => {
                    return Err(syntax(line_no, &format!("unknown mode `{other}`")));
                }
                ["duplicates", "allowed"] => flavor = Flavor::Multiset,
                ["duplicates", "forbidden"] => flavor = Flavor::Set,
                ["variant", spec] => {
                    variant = Some(
                        spec.parse::<VariantSpec>()
                            .map_err(|e| syntax(line_no, &e.to_string()))?,
                    );
                }
                _ => {}
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return Err(syntax(line_no, "second `p` line"));
            }
            let words: Vec<&str> = rest.split_whitespace().collect();
            let parsed = match words.as_slice() {
                ["cnf", n, m] => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| syntax(line_no, "malformed `p cnf <vars> <clauses>` line"))?);
            continue;
        }
        let (num_vars, _) = header.ok_or(ParseError::MissingHeader)?;
        for tok in line.split_whitespace() {
            let value: i64 = tok
                .parse()
                .map_err(|_| syntax(line_no, &format!("`{tok}` is not an integer")))?;
            if current.is_empty() {
                current_line = line_no;
            }
            match Lit::from_dimacs(value) {
                None => {
                    clauses.push(Clause::new(std::mem::take(&mut current)));
                    clause_lines.push(current_line);
                }
                Some(lit) => {
                    if lit.var().index() >= num_vars {
                        return Err(ParseError::OutOfRange {
                            line: line_no,
                            lit: value,
                            num_vars,
                        });
                    }
                    current.push(lit);
                }
            }
        }
    }
    if !current.is_empty() {
        return Err(ParseError::MissingTerminator);
    }
    let (num_vars, declared) = header.ok_or(ParseError::MissingHeader)?;
    if declared != clauses.len() {
        return Err(ParseError::ClauseCount {
            declared,
            found: clauses.len(),
        });
    }
    if flavor == Flavor::Set {
        for (clause, &line) in clauses.iter().zip(&clause_lines) {
            if let Some(var) = clause.repeated_var() {
                return Err(ParseError::Duplicate {
                    line,
                    var: var.0 as i64 + 1,
                });
            }
        }
    }
    let instance = CnfInstance::new(num_vars, clauses, mode, flavor).expect("ranges and duplicates already checked");
    Ok(AnnotatedDimacs { instance, variant })
}

fn syntax(line: usize, message: &str) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.to_string(),
    }
}

/// Canonical text: annotations, header, one sorted clause per line.
pub fn emit_dimacs(instance: &CnfInstance) -> String {
    emit_annotated(instance, None)
}

pub fn emit_annotated(instance: &CnfInstance, variant: Option<&VariantSpec>) -> String {
    let mut out = String::new();
    let mode = match instance.mode() {
        Mode::Sat => "sat",
        Mode::Nae => "nae",
    };
    let dups = match instance.flavor() {
        Flavor::Set => "forbidden",
        Flavor::Multiset => "allowed",
    };
    let _ = writeln!(out, "c mode {mode}");
    let _ = writeln!(out, "c duplicates {dups}");
    if let Some(v) = variant {
        let _ = writeln!(out, "c variant {v}");
    }
    let _ = writeln!(out, "p cnf {} {}", instance.num_vars(), instance.num_clauses());
    for clause in instance.clauses() {
        for lit in clause.lits() {
            let _ = write!(out, "{} ", lit.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let i = parse_dimacs("p cnf 3 1\n1 2 3 0\n").unwrap();
        assert_eq!(i.num_vars(), 3);
        assert_eq!(i.mode(), Mode::Sat);
        assert_eq!(i.clauses()[0].to_string(), "{x1, x2, x3}");
    }

    #[test]
    fn duplicate_literal_needs_annotation() {
        let err = parse_dimacs("c mode nae\np cnf 2 1\n1 1 2 0\n").unwrap_err();
        assert_eq!(err, ParseError::Duplicate { line: 3, var: 1 });
        let ok = parse_dimacs("c mode nae\nc duplicates allowed\np cnf 2 1\n1 1 2 0\n").unwrap();
        assert_eq!(ok.flavor(), Flavor::Multiset);
        assert_eq!(ok.mode(), Mode::Nae);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 x 0\n").unwrap_err(),
            ParseError::Syntax {
                line: 2,
                message: "`x` is not an integer".into()
            }
        );
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 3 0\n").unwrap_err(),
            ParseError::OutOfRange {
                line: 2,
                lit: 3,
                num_vars: 2
            }
        );
        assert_eq!(
            parse_dimacs("p cnf 2 1\n1 2\n").unwrap_err(),
            ParseError::MissingTerminator
        );
        assert_eq!(
            parse_dimacs("p cnf 2 2\n1 2 0\n").unwrap_err(),
            ParseError::ClauseCount { declared: 2, found: 1 }
        );
        assert_eq!(parse_dimacs("1 2 0\n").unwrap_err(), ParseError::MissingHeader);
    }

    #[test]
    fn clauses_may_span_lines() {
        let i = parse_dimacs("p cnf 3 2\n1 2\n3 0 -1\n-2 -3 0\n").unwrap();
        assert_eq!(i.num_clauses(), 2);
    }

    #[test]
    fn empty_instance_emits_zero_header() {
        let text = emit_dimacs(&CnfInstance::empty(Mode::Sat));
        assert!(text.contains("p cnf 0 0\n"));
        assert_eq!(parse_dimacs(&text).unwrap(), CnfInstance::empty(Mode::Sat));
    }

    #[test]
    fn multiset_clause_line() {
        let i = CnfInstance::from_dimacs_clauses(3, &[&[3, 1, 1]], Mode::Sat, Flavor::Multiset).unwrap();
        let text = emit_dimacs(&i);
        assert!(text.contains("c duplicates allowed"));
        assert!(text.contains("\n1 1 3 0\n"));
    }

    #[test]
    fn variant_annotation_round_trips() {
        let spec: VariantSpec = "mono-nae-e4-linear".parse().unwrap();
        let i = CnfInstance::from_dimacs_clauses(3, &[&[1, 2, 3]], Mode::Nae, Flavor::Set).unwrap();
        let parsed = parse_annotated(&emit_annotated(&i, Some(&spec))).unwrap();
        assert_eq!(parsed.variant, Some(spec));
        assert_eq!(parsed.instance, i);
    }
}
