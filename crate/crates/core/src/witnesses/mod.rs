//! Explicit unsatisfiable instances, the transversal counting behind the
//! (k,1) satisfiability bounds, and search tooling for the open cases.

mod hitting;
mod known;
mod search;
mod transversal;

pub use hitting::{min_transversal_hitting_set, HittingSet, DEFAULT_NODE_BUDGET};
pub use known::{certify_mon51_compositionally, known_unsat, KnownUnsat, NINE_VAR};
pub use search::{search_unsat, RunMode, RunSummary, SearchConfig, SearchOutcome, SearchProfile, MAX_EXHAUSTIVE_N};
pub use transversal::{
    bound_satisfiable, canonical_shape, check_sat_via_transversal, CanonicalShape, SatGuarantee, TransversalFamily,
    DEFAULT_TRANSVERSAL_CAP,
};
