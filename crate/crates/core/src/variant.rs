//! Declarative descriptions of restricted SAT variants and their validators.
//!
//! Spec strings are dash-separated tokens, e.g. `mono-sat-p3q3`,
//! `mono-nae-e4-linear`, `e4-choice-31-13`, `mono-sat-star-p2q2`:
//!
//! | token          | meaning                                          |
//! |----------------|--------------------------------------------------|
//! | `mono-sat`     | every clause all-positive or all-negative        |
//! | `mono-nae`     | no negated literal anywhere                      |
//! | `sat`, `nae`   | no monotonicity constraint                       |
//! | `pPqQ`         | every variable exactly P unnegated, Q negated     |
//! | `eK`           | every variable exactly K appearances in total    |
//! | `choice-PQ-..` | every variable has one of the listed profiles    |
//! | `star`         | repeated literals inside a clause allowed        |
//! | `linear`       | distinct clauses share at most one variable      |
//! | `exact-linear` | distinct clauses share exactly one variable      |
//! | `distinct`     | no clause occurs twice                           |
//! | `arityN`       | clause size N (default 3)                        |
//! | `anyarity`     | clause size unconstrained                        |

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::formula::{CnfInstance, Flavor, Var};
use crate::report::{VerificationReport, Violation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Monotonicity {
    None,
    /// Every clause is all-positive or all-negative.
    SatMonotone,
    /// No negated literal anywhere.
    NaeMonotone,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    Unconstrained,
    Exact { p: u32, q: u32 },
    ExactTotal(u32),
    Choice(Vec<(u32, u32)>),
}

impl Profile {
    fn admits(&self, found: (u32, u32)) -> bool {
        match self {
            Profile::Unconstrained => true,
            Profile::Exact { p, q } => found == (*p, *q),
            Profile::ExactTotal(k) => found.0 + found.1 == *k,
            Profile::Choice(list) => list.contains(&found),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Unconstrained => f.write_str("anything"),
            Profile::Exact { p, q } => write!(f, "({p},{q})"),
            Profile::ExactTotal(k) => write!(f, "{k} in total"),
            Profile::Choice(list) => {
                let parts: Vec<String> = list.iter().map(|(p, q)| format!("({p},{q})")).collect();
                write!(f, "one of {}", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Linearity {
    NoCheck,
    Linear,
    ExactLinear,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantSpec {
    /// Required clause length; `None` leaves it unconstrained.
    pub clause_arity: Option<usize>,
    pub duplicates_allowed: bool,
    pub monotonicity: Monotonicity,
    pub profile: Profile,
    pub linear: Linearity,
    pub distinct_clauses: bool,
}

impl Default for VariantSpec {
    fn default() -> Self {
        VariantSpec {
            clause_arity: Some(3),
            duplicates_allowed: false,
            monotonicity: Monotonicity::None,
            profile: Profile::Unconstrained,
            linear: Linearity::NoCheck,
            distinct_clauses: false,
        }
    }
}

impl VariantSpec {
    /// 3-SAT with every variable `(p, q)`.
    pub fn sat_pq(p: u32, q: u32) -> Self {
        VariantSpec {
            profile: Profile::Exact { p, q },
            ..Default::default()
        }
    }

    /// Monotone 3-SAT with every variable `(p, q)`.
    pub fn monotone_pq(p: u32, q: u32) -> Self {
        VariantSpec {
            monotonicity: Monotonicity::SatMonotone,
            profile: Profile::Exact { p, q },
            ..Default::default()
        }
    }

    pub fn monotone_nae() -> Self {
        VariantSpec {
            monotonicity: Monotonicity::NaeMonotone,
            ..Default::default()
        }
    }

    pub fn monotone_nae_e4() -> Self {
        VariantSpec {
            monotonicity: Monotonicity::NaeMonotone,
            profile: Profile::ExactTotal(4),
            ..Default::default()
        }
    }

    pub fn with_linear(mut self, linear: Linearity) -> Self {
        self.linear = linear;
        self
    }

    pub fn with_duplicates(mut self) -> Self {
        self.duplicates_allowed = true;
        self
    }

    pub fn with_distinct_clauses(mut self) -> Self {
        self.distinct_clauses = true;
        self
    }
}

impl fmt::Display for VariantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut tokens: Vec<String> = Vec::new();
        match self.monotonicity {
            Monotonicity::None => tokens.push("sat".into()),
            Monotonicity::SatMonotone => tokens.push("mono-sat".into()),
            Monotonicity::NaeMonotone => tokens.push("mono-nae".into()),
        }
        match self.clause_arity {
            Some(3) => {}
            Some(k) => tokens.push(format!("arity{k}")),
            None => tokens.push("anyarity".into()),
        }
        if self.duplicates_allowed {
            tokens.push("star".into());
        }
        match &self.profile {
            Profile::Unconstrained => {}
            Profile::Exact { p, q } => tokens.push(format!("p{p}q{q}")),
            Profile::ExactTotal(k) => tokens.push(format!("e{k}")),
            Profile::Choice(list) => {
                tokens.push("choice".into());
                tokens.extend(list.iter().map(|(p, q)| format!("{p}{q}")));
            }
        }
        match self.linear {
            Linearity::NoCheck => {}
            Linearity::Linear => tokens.push("linear".into()),
            Linearity::ExactLinear => tokens.push("exact-linear".into()),
        }
        if self.distinct_clauses {
            tokens.push("distinct".into());
        }
        f.write_str(&tokens.join("-"))
    }
}

impl FromStr for VariantSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |reason: &str| Error::VariantSyntax {
            spec: s.to_string(),
            reason: reason.to_string(),
        };
        let tokens: Vec<&str> = s.split('-').filter(|t| !t.is_empty()).collect();
        if tokens.is_empty() {
            return Err(bad("empty spec"));
        }
        let mut spec = VariantSpec::default();
        let mut i = 0;
        while i < tokens.len() {
            let tok = tokens[i];
            match tok {
                "mono" => {
                    spec.monotonicity = match tokens.get(i + 1) {
                        Some(&"sat") => Monotonicity::SatMonotone,
                        Some(&"nae") => Monotonicity::NaeMonotone,
                        _ => return Err(bad("`mono` must be followed by `sat` or `nae`")),
                    };
                    i += 1;
                }
                "sat" | "nae" | "3sat" => {}
                "star" => spec.duplicates_allowed = true,
                "linear" => spec.linear = Linearity::Linear,
                "exact" => {
                    if tokens.get(i + 1) != Some(&"linear") {
                        return Err(bad("`exact` must be followed by `linear`"));
                    }
                    spec.linear = Linearity::ExactLinear;
                    i += 1;
                }
                "distinct" => spec.distinct_clauses = true,
                "anyarity" => spec.clause_arity = None,
                "choice" => {
                    let mut list = Vec::new();
                    while let Some(next) = tokens.get(i + 1) {
                        let digits: Vec<u32> = next.chars().filter_map(|c| c.to_digit(10)).collect();
                        if digits.len() != 2 || next.len() != 2 {
                            break;
                        }
                        list.push((digits[0], digits[1]));
                        i += 1;
                    }
                    if list.is_empty() {
                        return Err(bad("`choice` needs at least one two-digit profile"));
                    }
                    spec.profile = Profile::Choice(list);
                }
                _ => {
                    if let Some(rest) = tok.strip_prefix("arity") {
                        spec.clause_arity = Some(rest.parse().map_err(|_| bad("malformed arity token"))?);
                    } else if let Some(rest) = tok.strip_prefix('e') {
                        let k = rest.parse().map_err(|_| bad("malformed `eK` token"))?;
                        // `e4-choice-..` keeps the choice list, it already implies the total
                        if !matches!(spec.profile, Profile::Choice(_)) {
                            spec.profile = Profile::ExactTotal(k);
                        }
                    } else if let Some(rest) = tok.strip_prefix('p') {
                        let (p, q) = rest.split_once('q').ok_or_else(|| bad("malformed `pPqQ` token"))?;
                        spec.profile = Profile::Exact {
                            p: p.parse().map_err(|_| bad("malformed `pPqQ` token"))?,
                            q: q.parse().map_err(|_| bad("malformed `pPqQ` token"))?,
                        };
                    } else {
                        return Err(bad(&format!("unknown token `{tok}`")));
                    }
                }
            }
            i += 1;
        }
        Ok(spec)
    }
}

/// Checks `instance` against every constraint in `spec`, reporting the
/// first violation found.
///
/// Order of checks: arity, repeated variables, monotonicity, appearance
/// profile, clause distinctness, linearity.
pub fn validate(instance: &CnfInstance, spec: &VariantSpec) -> VerificationReport {
    let check = format!("variant {spec}");
    if let Some(v) = first_violation(instance, spec) {
        return VerificationReport::violation(check, v);
    }
    VerificationReport::pass(check)
}

pub fn first_violation(instance: &CnfInstance, spec: &VariantSpec) -> Option<Violation> {
    for (idx, clause) in instance.clauses().iter().enumerate() {
        if let Some(k) = spec.clause_arity {
            if clause.len() != k {
                return Some(Violation::Arity {
                    clause: idx,
                    expected: k,
                    found: clause.len(),
                });
            }
        }
    }
    if !spec.duplicates_allowed {
        for (idx, clause) in instance.clauses().iter().enumerate() {
            if let Some(var) = clause.repeated_var() {
                return Some(Violation::RepeatedVariable { clause: idx, var });
            }
        }
    }
    match spec.monotonicity {
        Monotonicity::None => {}
        Monotonicity::SatMonotone => {
            if let Some(idx) = instance
                .clauses()
                .iter()
                .position(|c| !c.is_all_positive() && !c.is_all_negative())
            {
                return Some(Violation::NotSatMonotone { clause: idx });
            }
        }
        Monotonicity::NaeMonotone => {
            for (idx, clause) in instance.clauses().iter().enumerate() {
                if let Some(l) = clause.lits().iter().find(|l| l.is_negated()) {
                    return Some(Violation::NegatedLiteral {
                        clause: idx,
                        var: l.var(),
                    });
                }
            }
        }
    }
    if spec.profile != Profile::Unconstrained {
        let profile = instance.appearance_profile();
        for (i, &found) in profile.counts.iter().enumerate() {
            if !spec.profile.admits(found) {
                return Some(Violation::Profile {
                    var: Var(i as u32),
                    found,
                    expected: spec.profile.to_string(),
                });
            }
        }
    }
    if spec.distinct_clauses {
        let mut seen: HashMap<&crate::formula::Clause, usize> = HashMap::new();
        for (idx, clause) in instance.clauses().iter().enumerate() {
            if let Some(&first) = seen.get(clause) {
                return Some(Violation::DuplicateClause { first, second: idx });
            }
            seen.insert(clause, idx);
        }
    }
    if spec.linear != Linearity::NoCheck {
        if instance.flavor() == Flavor::Multiset {
            return Some(Violation::MultisetLinearity);
        }
        return linearity_violation(instance, spec.linear == Linearity::ExactLinear);
    }
    None
}

/// Every pair of distinct clauses shares at most one variable (or exactly
/// one, when `exact`).
pub fn is_linear(instance: &CnfInstance, exact: bool) -> Result<VerificationReport, Error> {
    if instance.flavor() == Flavor::Multiset {
        return Err(Error::MultisetLinearity);
    }
    let check = if exact { "exact-linear" } else { "linear" };
    Ok(match linearity_violation(instance, exact) {
        Some(v) => VerificationReport::violation(check, v),
        None => VerificationReport::pass(check),
    })
}

fn shared_vars(a: &[Var], b: &[Var]) -> Vec<Var> {
    a.iter().copied().filter(|v| b.binary_search(v).is_ok()).collect()
}

fn linearity_violation(instance: &CnfInstance, exact: bool) -> Option<Violation> {
    let sets: Vec<Vec<Var>> = instance.clauses().iter().map(|c| c.var_set()).collect();
    // lexicographically first offending pair
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let shared = shared_vars(&sets[i], &sets[j]);
            if shared.len() > 1 {
                return Some(Violation::NotLinear {
                    first: i,
                    second: j,
                    shared,
                });
            }
            if exact && shared.len() != 1 {
                return Some(Violation::NotExactLinear {
                    first: i,
                    second: j,
                    shared,
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Mode;

    fn inst(n: usize, clauses: &[&[i64]]) -> CnfInstance {
        CnfInstance::from_dimacs_clauses(n, clauses, Mode::Sat, Flavor::Set).unwrap()
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "mono-sat-p3q3",
            "mono-nae-e4",
            "mono-nae-e4-linear",
            "sat-choice-31-13",
            "mono-sat-star-p2q2",
            "sat-p2q2-distinct",
            "mono-nae-exact-linear",
            "sat-anyarity",
        ] {
            let spec: VariantSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        let e4: VariantSpec = "e4-choice-31-13".parse().unwrap();
        assert_eq!(e4.profile, Profile::Choice(vec![(3, 1), (1, 3)]));
    }

    #[test]
    fn bad_spec_strings() {
        assert!("mono".parse::<VariantSpec>().is_err());
        assert!("mono-sat-pxq1".parse::<VariantSpec>().is_err());
        assert!("wibble".parse::<VariantSpec>().is_err());
        assert!("choice".parse::<VariantSpec>().is_err());
    }

    #[test]
    fn shares_two_variables_is_nonlinear() {
        let i = inst(4, &[&[1, 2, 3], &[1, 2, 4]]);
        let r = is_linear(&i, false).unwrap();
        assert!(!r.passed);
        assert!(matches!(
            r.violation_ref(),
            Some(Violation::NotLinear {
                first: 0,
                second: 1,
                ..
            })
        ));
    }

    #[test]
    fn exact_linear_needs_one_shared_variable() {
        let fano = inst(
            7,
            &[
                &[1, 2, 3],
                &[1, 4, 5],
                &[1, 6, 7],
                &[2, 4, 6],
                &[2, 5, 7],
                &[3, 4, 7],
                &[3, 5, 6],
            ],
        );
        assert!(is_linear(&fano, true).unwrap().passed);
        let disjoint = inst(6, &[&[1, 2, 3], &[4, 5, 6]]);
        assert!(is_linear(&disjoint, false).unwrap().passed);
        assert!(!is_linear(&disjoint, true).unwrap().passed);
    }

    #[test]
    fn multiset_linearity_rejected() {
        let i = CnfInstance::from_dimacs_clauses(3, &[&[1, 1, 2]], Mode::Sat, Flavor::Multiset).unwrap();
        assert!(matches!(is_linear(&i, false), Err(Error::MultisetLinearity)));
    }

    #[test]
    fn duplicate_clauses_only_flagged_on_request() {
        let i = inst(3, &[&[1, 2, 3], &[1, 2, 3], &[-1, -2, -3], &[-1, -2, -3]]);
        let base = VariantSpec::monotone_pq(2, 2);
        assert!(validate(&i, &base).passed);
        let r = validate(&i, &base.with_distinct_clauses());
        assert_eq!(
            r.violation_ref(),
            Some(&Violation::DuplicateClause { first: 0, second: 1 })
        );
    }

    #[test]
    fn validation_reports_first_broken_constraint() {
        let i = inst(4, &[&[1, -2, 3], &[1, 2]]);
        let r = validate(&i, &VariantSpec::monotone_pq(1, 1));
        assert_eq!(
            r.violation_ref(),
            Some(&Violation::Arity {
                clause: 1,
                expected: 3,
                found: 2
            })
        );
        let j = inst(3, &[&[1, -2, 3]]);
        let r = validate(&j, &VariantSpec::monotone_pq(1, 0));
        assert_eq!(r.violation_ref(), Some(&Violation::NotSatMonotone { clause: 0 }));
        let r = validate(&j, &VariantSpec::monotone_nae());
        assert_eq!(
            r.violation_ref(),
            Some(&Violation::NegatedLiteral { clause: 0, var: Var(1) })
        );
    }
}
