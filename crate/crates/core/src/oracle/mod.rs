//! Decision procedures used as ground truth by every other module.

mod dpll;
mod exhaustive;
mod extension;
mod forced;
mod subsume;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::formula::{Assignment, CnfInstance};

pub use dpll::{solve_dpll, solve_dpll_with};
pub use exhaustive::{for_each_model, solve_exhaustive, solve_exhaustive_with};
pub use extension::{accepted_patterns, check_extension_property, BoundaryPredicate};
pub use forced::{split_forced, SplitForced};
pub use subsume::subsumes;

/// Default number of variables the exhaustive oracle will enumerate.
pub const DEFAULT_ENUM_CAP: usize = 26;

/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "SATGADGETS_ENUM_CAP";

/// Enumeration cap, honouring the environment override.
pub fn enum_cap() -> usize {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Sat,
    Unsat,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub status: Status,
    pub model: Option<Assignment>,
}

impl SolveResult {
    pub fn sat(model: Assignment) -> Self {
        SolveResult {
            status: Status::Sat,
            model: Some(model),
        }
    }

    pub fn unsat() -> Self {
        SolveResult {
            status: Status::Unsat,
            model: None,
        }
    }

    pub fn is_sat(&self) -> bool {
        self.status == Status::Sat
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub enum_cap: usize,
    pub timeout: Option<Duration>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            enum_cap: enum_cap(),
            timeout: None,
        }
    }
}

/// Exhaustive enumeration for small instances (at most 20 variables and
/// within the cap), DPLL otherwise.
pub fn decide(instance: &CnfInstance, config: &OracleConfig) -> Result<SolveResult, Error> {
    if instance.num_vars() <= config.enum_cap.min(20) {
        solve_exhaustive_with(instance, config.enum_cap)
    } else {
        solve_dpll_with(instance, config.timeout)
    }
}
