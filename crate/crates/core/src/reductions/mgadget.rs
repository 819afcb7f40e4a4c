//! The forcing block used by R10, built from an unsatisfiable monotone
//! formula: a satisfiable core plus the literals of the left-out clauses,
//! each false in every model of the core.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::formula::{Clause, CnfInstance, Flavor, Lit, Mode, Var};
use crate::gadgets::FreshAllocator;
use crate::oracle::{decide, split_forced, OracleConfig};
use crate::report::{VerificationReport, Violation, Witness};
use crate::variant::{first_violation, Monotonicity, VariantSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MGadget {
    /// Satisfiable clauses over variables `0..core.num_vars()`.
    pub core: CnfInstance,
    /// Positive literals false in every model of `core`.
    pub positive: Vec<Lit>,
    /// Negative literals false in every model of `core`.
    pub negative: Vec<Lit>,
}

impl MGadget {
    /// From an unsatisfiable Monotone 3-Sat-(2,2) instance.
    pub fn from_unsat_22(unsat: &CnfInstance, config: &OracleConfig) -> Result<MGadget, Error> {
        let spec = VariantSpec::monotone_pq(2, 2);
        if let Some(v) = first_violation(unsat, &spec) {
            return Err(Error::InputSpec(format!("M-gadget parameter must be {spec}: {v}")));
        }
        MGadget::from_unsat(unsat, config)
    }

    /// From any unsatisfiable sat-monotone instance. The core is the greedy
    /// satisfiable prefix together with a negated copy on fresh variables,
    /// so that positive and negative forced literals come in equal numbers.
    pub fn from_unsat(unsat: &CnfInstance, config: &OracleConfig) -> Result<MGadget, Error> {
        let spec = VariantSpec {
            clause_arity: None,
            monotonicity: Monotonicity::SatMonotone,
            ..Default::default()
        };
        if let Some(v) = first_violation(unsat, &spec) {
            return Err(Error::InputSpec(format!("M-gadget parameter must be monotone: {v}")));
        }
        let split = split_forced(unsat, config)?;
        let n = unsat.num_vars() as u32;
        let shift = |l: Lit| Lit::new(Var(l.var().0 + n), !l.is_negated());
        let first: Vec<Clause> = split.core.iter().map(|&i| unsat.clauses()[i].clone()).collect();
        let second: Vec<Clause> = first
            .iter()
            .map(|c| Clause::new(c.lits().iter().map(|&l| shift(l)).collect()))
            .collect();
        let core = CnfInstance::new(2 * n as usize, [first, second].concat(), Mode::Sat, Flavor::Set)?;
        let (pos1, neg1): (Vec<Lit>, Vec<Lit>) = split.forced.iter().partition(|l| l.is_positive());
        let positive = pos1.iter().copied().chain(neg1.iter().map(|&l| shift(l))).collect();
        let negative = neg1.iter().copied().chain(pos1.iter().map(|&l| shift(l))).collect();
        Ok(MGadget {
            core,
            positive,
            negative,
        })
    }

    /// Number of left-out clauses; each side has `3q` forced literals.
    pub fn q(&self) -> usize {
        self.positive.len() / 3
    }

    /// Copies the gadget onto fresh variables; returns (variables, clauses,
    /// positive literals, negative literals).
    pub fn instantiate(&self, alloc: &mut FreshAllocator) -> (Vec<Var>, Vec<Clause>, Vec<Lit>, Vec<Lit>) {
        let vars = alloc.fresh_n(self.core.num_vars());
        let map = |l: &Lit| Lit::new(vars[l.var().index()], l.is_negated());
        let clauses = self
            .core
            .clauses()
            .iter()
            .map(|c| c.map_vars(|v| vars[v.index()]))
            .collect();
        let pos = self.positive.iter().map(map).collect();
        let neg = self.negative.iter().map(map).collect();
        (vars, clauses, pos, neg)
    }

    /// The three defining properties: the core is satisfiable and every
    /// listed literal is false in all its models; both lists hold `3q`
    /// literals; core plus lists give each variable profile `(p, q)`.
    pub fn check(&self, p: u32, q: u32, config: &OracleConfig) -> Result<Vec<VerificationReport>, Error> {
        let mut reports = Vec::new();

        let forced = "M1 core satisfiable, listed literals forced false";
        let mut m1 = if decide(&self.core, config)?.is_sat() {
            VerificationReport::pass(forced)
        } else {
            VerificationReport::fail_detail(forced, "core is unsatisfiable")
        };
        if m1.passed {
            for &l in self.positive.iter().chain(&self.negative) {
                let probe = self.core.with_extra_clauses([Clause::new(vec![l])])?;
                if let Some(model) = decide(&probe, config)?.model {
                    m1 = VerificationReport::fail(forced, Witness::Assignment { values: model.0 })
                        .with_detail(format!("{l} can be true"));
                    break;
                }
            }
        }
        reports.push(m1);

        let sizes = "M2 |L+| = |L-| = 3q";
        let (a, b) = (self.positive.len(), self.negative.len());
        reports.push(if a == b && a % 3 == 0 && a > 0 {
            VerificationReport::pass(sizes).with_detail(format!("q = {}", a / 3))
        } else {
            VerificationReport::fail_detail(sizes, format!("|L+| = {a}, |L-| = {b}"))
        });

        let profile = format!("M3 every variable ({p},{q}) in core plus lists");
        let mut counts = vec![(0u32, 0u32); self.core.num_vars()];
        let lits = self
            .core
            .clauses()
            .iter()
            .flat_map(|c| c.lits().iter())
            .chain(&self.positive)
            .chain(&self.negative);
        for l in lits {
            let e = &mut counts[l.var().index()];
            if l.is_negated() {
                e.1 += 1;
            } else {
                e.0 += 1;
            }
        }
        reports.push(match counts.iter().position(|&c| c != (p, q)) {
            None => VerificationReport::pass(profile),
            Some(v) => VerificationReport::fail(
                profile,
                Witness::Violation(Violation::Profile {
                    var: Var(v as u32),
                    found: counts[v],
                    expected: format!("({p},{q})"),
                }),
            ),
        });
        Ok(reports)
    }
}
