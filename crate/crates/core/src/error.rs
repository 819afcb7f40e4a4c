use thiserror::Error;

use crate::formula::Var;

#[derive(Debug, Error)]
pub enum Error {
    #[error("clause {clause}: variable {var} out of range (instance has {num_vars} variables)")]
    VarOutOfRange { clause: usize, var: Var, num_vars: usize },
    #[error("clause {clause}: variable {var} occurs more than once in a set-flavor clause")]
    RepeatedVariable { clause: usize, var: Var },
    #[error("literal 0 is not a valid literal")]
    ZeroLiteral,
    #[error("{vars} variables exceed the enumeration cap of {cap}")]
    CapExceeded { vars: usize, cap: usize },
    #[error("solver gave up after {0:?} without a decision")]
    Timeout(std::time::Duration),
    #[error("linearity is only defined for set-flavor instances")]
    MultisetLinearity,
    #[error("instance is satisfiable, an unsatisfiable instance is required")]
    Satisfiable,
    #[error("{kind}: expected {expected} boundary variables, got {found}")]
    GadgetArity {
        kind: String,
        expected: usize,
        found: usize,
    },
    #[error("{kind}: substitution repeats variable {var} in a set-flavor clause")]
    GadgetRepeatedLiteral { kind: String, var: Var },
    #[error("input does not belong to the required variant: {0}")]
    InputSpec(String),
    #[error("divisibility requirement violated: {0}")]
    Divisibility(String),
    #[error("missing reduction parameter: {0}")]
    MissingParameter(&'static str),
    #[error("model does not satisfy the instance (clause {clause} fails)")]
    InvalidModel { clause: usize },
    #[error("model disagrees on copies of input variable {input}")]
    BackMapViolation { input: Var },
    #[error("pulled-back assignment fails input clause {clause}")]
    PullBackFailed { clause: usize },
    #[error("instance does not have canonical transversal shape: {0}")]
    Shape(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("no family member can be hit: {0}")]
    Unhittable(String),
    #[error("unknown {what} `{name}`")]
    Unknown { what: &'static str, name: String },
    #[error("invalid variant spec `{spec}`: {reason}")]
    VariantSyntax { spec: String, reason: String },
}
