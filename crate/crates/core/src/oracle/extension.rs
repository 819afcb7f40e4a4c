//! Extension-property checks: which boundary assignments extend to a
//! (nae-)satisfying assignment of the auxiliary variables.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::formula::{Clause, CnfInstance, Flavor, Mode, Var};
use crate::gadgets::GadgetInstance;
use crate::report::{ExtensionFailure, VerificationReport, Witness};

use super::{enum_cap, for_each_model};

/// A set of accepted assignments over distinct boundary variables. Bit `i`
/// of a pattern is the value of `boundary[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryPredicate {
    pub boundary: Vec<Var>,
    accepted: Vec<u64>,
}

impl BoundaryPredicate {
    pub fn new(boundary: Vec<Var>, mut accepted: Vec<u64>) -> BoundaryPredicate {
        let limit = 1u64 << boundary.len();
        accepted.retain(|&p| p < limit);
        accepted.sort_unstable();
        accepted.dedup();
        BoundaryPredicate { boundary, accepted }
    }

    pub fn from_fn(boundary: Vec<Var>, f: impl Fn(&[bool]) -> bool) -> BoundaryPredicate {
        let b = boundary.len();
        let accepted = (0u64..1 << b).filter(|&p| f(&unpack(p, b))).collect();
        BoundaryPredicate { boundary, accepted }
    }

    pub fn accepted(&self) -> &[u64] {
        &self.accepted
    }

    pub fn contains(&self, pattern: u64) -> bool {
        self.accepted.binary_search(&pattern).is_ok()
    }

    pub fn accepts(&self, values: &[bool]) -> bool {
        self.contains(pack(values))
    }

    /// Image under flipping every boundary value.
    pub fn flipped(&self) -> BoundaryPredicate {
        let mask = (1u64 << self.boundary.len()) - 1;
        BoundaryPredicate::new(self.boundary.clone(), self.accepted.iter().map(|p| !p & mask).collect())
    }
}

pub fn unpack(pattern: u64, len: usize) -> Vec<bool> {
    (0..len).map(|i| pattern >> i & 1 == 1).collect()
}

pub fn pack(values: &[bool]) -> u64 {
    values.iter().enumerate().fold(0, |acc, (i, &v)| acc | (v as u64) << i)
}

/// Boundary patterns (over distinct `boundary`) that extend to a model of
/// `clauses` over `boundary ∪ aux`.
pub fn accepted_patterns(
    clauses: &[Clause],
    mode: Mode,
    boundary: &[Var],
    aux: &[Var],
    cap: usize,
) -> Result<Vec<u64>, Error> {
    let mut local: Vec<Var> = boundary.to_vec();
    local.extend(aux.iter().filter(|v| !boundary.contains(v)));
    let total = local.len();
    if total > cap {
        return Err(Error::CapExceeded { vars: total, cap });
    }
    let index = |v: Var| -> Var {
        Var(local
            .iter()
            .position(|&u| u == v)
            .unwrap_or_else(|| panic!("{v} is neither boundary nor auxiliary")) as u32)
    };
    let remapped: Vec<Clause> = clauses.iter().map(|c| c.map_vars(index)).collect();
    let instance = CnfInstance::new(total, remapped, mode, Flavor::Multiset)?;
    let b = boundary.len();
    let mask = (1u64 << b) - 1;
    let mut seen = vec![false; 1 << b];
    let mut remaining = 1usize << b;
    for_each_model(&instance, cap, |bits| {
        let p = (bits & mask) as usize;
        if !seen[p] {
            seen[p] = true;
            remaining -= 1;
        }
        remaining > 0
    })?;
    Ok((0..1u64 << b).filter(|&p| seen[p as usize]).collect())
}

/// For every boundary assignment, an extension satisfying the gadget exists
/// exactly when the assignment is in the declared predicate.
pub fn check_extension_property(g: &GadgetInstance) -> Result<VerificationReport, Error> {
    let predicate = &g.predicate;
    let found = accepted_patterns(&g.clauses, g.mode, &predicate.boundary, &g.aux, enum_cap())?;
    let check = format!("extension property of {}", g.kind);
    let b = predicate.boundary.len();
    for p in 0..1u64 << b {
        let extendable = found.binary_search(&p).is_ok();
        if extendable != predicate.contains(p) {
            let failure = if extendable {
                ExtensionFailure::ForbiddenExtension
            } else {
                ExtensionFailure::MissingExtension
            };
            let pattern = unpack(p, b);
            let detail = format!(
                "boundary {} {}",
                render(&predicate.boundary, &pattern),
                match failure {
                    ExtensionFailure::MissingExtension => "is accepted but has no extension",
                    ExtensionFailure::ForbiddenExtension => "is rejected but extends",
                }
            );
            return Ok(VerificationReport::fail(
                check,
                Witness::Extension {
                    boundary: predicate.boundary.clone(),
                    pattern,
                    failure,
                },
            )
            .with_detail(detail));
        }
    }
    Ok(VerificationReport::pass(check).with_witness(Witness::AcceptedSet {
        boundary: predicate.boundary.clone(),
        patterns: found,
    }))
}

pub(crate) fn render(boundary: &[Var], pattern: &[bool]) -> String {
    boundary
        .iter()
        .zip(pattern)
        .map(|(v, &b)| format!("{v}={}", if b { 'T' } else { 'F' }))
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Lit;

    #[test]
    fn pack_unpack() {
        assert_eq!(pack(&[true, false, true]), 0b101);
        assert_eq!(unpack(0b101, 3), vec![true, false, true]);
    }

    #[test]
    fn or_gate_via_aux() {
        // {x, a}, {y, -a}: some a exists iff x or y
        let (x, y, a) = (Var(0), Var(1), Var(2));
        let clauses = vec![
            Clause::new(vec![x.pos(), a.pos()]),
            Clause::new(vec![y.pos(), Lit::new(a, true)]),
        ];
        let found = accepted_patterns(&clauses, Mode::Sat, &[x, y], &[a], 26).unwrap();
        assert_eq!(found, vec![0b01, 0b10, 0b11]);
    }

    #[test]
    fn flipped_predicate() {
        let p = BoundaryPredicate::from_fn(vec![Var(0), Var(1)], |v| v[0] || v[1]);
        assert_eq!(p.flipped().accepted(), &[0b00, 0b01, 0b10]);
    }
}
