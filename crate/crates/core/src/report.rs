//! Pass/fail verdicts carrying a concrete witness.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::formula::{Clause, Var};

/// Version of the JSON layout of [`VerificationReport`].
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// A structural constraint of a variant that an instance breaks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    Arity {
        clause: usize,
        expected: usize,
        found: usize,
    },
    RepeatedVariable {
        clause: usize,
        var: Var,
    },
    NotSatMonotone {
        clause: usize,
    },
    NegatedLiteral {
        clause: usize,
        var: Var,
    },
    Profile {
        var: Var,
        found: (u32, u32),
        expected: String,
    },
    DuplicateClause {
        first: usize,
        second: usize,
    },
    NotLinear {
        first: usize,
        second: usize,
        shared: Vec<Var>,
    },
    NotExactLinear {
        first: usize,
        second: usize,
        shared: Vec<Var>,
    },
    MultisetLinearity,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Arity {
                clause,
                expected,
                found,
            } => write!(f, "clause {clause} has {found} literals, expected {expected}"),
            Violation::RepeatedVariable { clause, var } => {
                write!(f, "clause {clause} repeats variable {var}")
            }
            Violation::NotSatMonotone { clause } => {
                write!(f, "clause {clause} mixes negated and unnegated literals")
            }
            Violation::NegatedLiteral { clause, var } => {
                write!(f, "clause {clause} contains negated {var}")
            }
            Violation::Profile { var, found, expected } => write!(
                f,
                "{var} appears {} times unnegated and {} times negated, expected {expected}",
                found.0, found.1
            ),
            Violation::DuplicateClause { first, second } => {
                write!(f, "clauses {first} and {second} are identical")
            }
            Violation::NotLinear { first, second, shared } => {
                write!(f, "clauses {first} and {second} share {} variables", shared.len())
            }
            Violation::NotExactLinear { first, second, shared } => write!(
                f,
                "clauses {first} and {second} share {} variables, expected exactly one",
                shared.len()
            ),
            Violation::MultisetLinearity => f.write_str("linearity requested on a multiset instance"),
        }
    }
}

/// Which side of an extension-property biconditional failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtensionFailure {
    /// Pattern is declared accepted but no extension satisfies the gadget.
    MissingExtension,
    /// Pattern is declared rejected yet some extension satisfies the gadget.
    ForbiddenExtension,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "witness", rename_all = "snake_case")]
pub enum Witness {
    Violation(Violation),
    /// A full truth assignment (model or counterexample).
    Assignment {
        values: Vec<bool>,
    },
    /// Gadget boundary pattern that breaks the declared predicate.
    Extension {
        boundary: Vec<Var>,
        pattern: Vec<bool>,
        failure: ExtensionFailure,
    },
    /// Accepted boundary patterns, bit `i` of each entry is boundary variable `i`.
    AcceptedSet {
        boundary: Vec<Var>,
        patterns: Vec<u64>,
    },
    /// Target clause with no covering clause.
    Uncovered {
        index: usize,
        clause: Clause,
    },
    /// Transversal (variables set false) avoiding every positive clause.
    Transversal {
        vars: Vec<Var>,
    },
    /// Statuses reported on both sides of a reduction.
    Statuses {
        input_sat: bool,
        output_sat: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub passed: bool,
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl VerificationReport {
    pub fn pass(check: impl Into<String>) -> Self {
        VerificationReport {
            check: check.into(),
            passed: true,
            witness: None,
            detail: None,
        }
    }

    pub fn fail(check: impl Into<String>, witness: Witness) -> Self {
        VerificationReport {
            check: check.into(),
            passed: false,
            witness: Some(witness),
            detail: None,
        }
    }

    /// Failure with only a textual explanation.
    pub fn fail_detail(check: impl Into<String>, detail: impl Into<String>) -> Self {
        VerificationReport {
            check: check.into(),
            passed: false,
            witness: None,
            detail: Some(detail.into()),
        }
    }

    pub fn violation(check: impl Into<String>, v: Violation) -> Self {
        let detail = v.to_string();
        VerificationReport::fail(check, Witness::Violation(v)).with_detail(detail)
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn violation_ref(&self) -> Option<&Violation> {
        match &self.witness {
            Some(Witness::Violation(v)) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", if self.passed { "PASS" } else { "FAIL" }, self.check)?;
        if let Some(d) = &self.detail {
            write!(f, ": {d}")?;
        }
        Ok(())
    }
}
