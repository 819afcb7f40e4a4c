//! Restricted 3-SAT and NAE-3-SAT variants: formulas, gadgets, reductions
//! between variants, and oracles that certify them.
//!
//! ```
//! use satgadgets::gadgets::{verify_gadget, GadgetKind};
//!
//! let report = verify_gadget(GadgetKind::Ne9).unwrap();
//! assert!(report.passed);
//! ```

pub mod dimacs;
pub mod error;
pub mod formula;
pub mod gadgets;
pub mod generate;
pub mod oracle;
pub mod reductions;
pub mod report;
pub mod variant;
pub mod witnesses;

pub use error::Error;
pub use formula::{Assignment, Clause, CnfInstance, Flavor, Lit, Mode, Var};
pub use report::VerificationReport;
pub use variant::VariantSpec;
