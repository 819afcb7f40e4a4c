//! Certification of catalogue rows: direct enumeration where it fits,
//! otherwise per-part certification plus a small projected check.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::Error;
use crate::formula::{Assignment, Clause, Var};
use crate::oracle::check_extension_property;
use crate::report::{ExtensionFailure, VerificationReport, Witness};

use super::{build_gadget, FreshAllocator, GadgetInstance, GadgetKind};

/// Builds `kind` on distinct fresh boundary variables and checks that its
/// satisfying extensions realize exactly the declared predicate.
pub fn verify_gadget(kind: GadgetKind) -> Result<VerificationReport, Error> {
    let info = kind.info();
    let slots: Vec<Var> = (0..info.arity as u32).map(Var).collect();
    let mut alloc = FreshAllocator::new(info.arity);
    let g = build_gadget(kind, &slots, &mut alloc)?;
    let check = format!("gadget {kind}");
    if g.aux.len() != info.aux || g.clauses.len() != info.clauses {
        return Ok(VerificationReport::fail(
            check,
            Witness::AcceptedSet {
                boundary: g.boundary().to_vec(),
                patterns: vec![],
            },
        )
        .with_detail(format!(
            "built {} aux / {} clauses, catalogue says {} / {}",
            g.aux.len(),
            g.clauses.len(),
            info.aux,
            info.clauses
        )));
    }
    let mut report = if info.compositional {
        verify_composite(&g)?
    } else {
        check_extension_property(&g)?
    };
    report.check = check;
    if report.passed {
        let how = if info.compositional {
            format!(
                "{} parts certified, projected",
                g.composition.as_ref().map_or(0, |c| c.parts.len())
            )
        } else {
            format!("{} variables enumerated", info.arity + info.aux)
        };
        report.detail = Some(format!("{} accepted pattern(s), {how}", g.predicate.accepted().len()));
    }
    Ok(report)
}

/// Every catalogue row, in catalogue order.
pub fn verify_all() -> Vec<(GadgetKind, Result<VerificationReport, Error>)> {
    GadgetKind::ALL.par_iter().map(|&k| (k, verify_gadget(k))).collect()
}

fn fail(check: &str, detail: String) -> VerificationReport {
    VerificationReport {
        check: check.to_string(),
        passed: false,
        witness: None,
        detail: Some(detail),
    }
}

/// Parts share only boundary and link variables, so the gadget extends a
/// boundary pattern iff some link assignment makes every part's predicate
/// and every glue clause hold.
fn verify_composite(g: &GadgetInstance) -> Result<VerificationReport, Error> {
    let check = "compositional extension property";
    let comp = g.composition.as_ref().expect("compositional gadget records its parts");
    for (i, part) in comp.parts.iter().enumerate() {
        let r = check_extension_property(part)?;
        if !r.passed {
            let detail = format!("part {i} ({}): {}", part.kind, r.detail.clone().unwrap_or_default());
            return Ok(VerificationReport {
                detail: Some(detail),
                ..r
            });
        }
    }

    let visible: Vec<Var> = g.boundary().iter().chain(&comp.links).copied().collect();
    let visible_set: HashSet<Var> = visible.iter().copied().collect();
    let mut owned: HashSet<Var> = HashSet::new();
    for part in &comp.parts {
        for &a in &part.aux {
            if visible_set.contains(&a) || !owned.insert(a) {
                return Ok(fail(check, format!("auxiliary {a} is shared between parts")));
            }
        }
        if let Some(b) = part.boundary().iter().find(|b| !visible_set.contains(b)) {
            return Ok(fail(check, format!("part boundary {b} is not visible")));
        }
    }
    if let Some(v) = comp
        .glue
        .iter()
        .flat_map(Clause::vars)
        .find(|v| !visible_set.contains(v))
    {
        return Ok(fail(check, format!("glue clause mentions hidden {v}")));
    }
    let mut expected: Vec<Clause> = comp
        .parts
        .iter()
        .flat_map(|p| p.clauses.iter().cloned())
        .chain(comp.glue.iter().cloned())
        .collect();
    let mut actual = g.clauses.clone();
    expected.sort();
    actual.sort();
    if expected != actual {
        return Ok(fail(check, "clauses differ from the union of parts and glue".into()));
    }

    let k = visible.len();
    let b = g.boundary().len();
    let max_index = visible.iter().map(|v| v.index()).max().unwrap_or(0);
    let mut found = vec![false; 1 << b];
    for bits in 0u64..1 << k {
        let mut values = vec![false; max_index + 1];
        for (i, v) in visible.iter().enumerate() {
            values[v.index()] = bits >> i & 1 == 1;
        }
        let assignment = Assignment(values);
        let parts_ok = comp.parts.iter().all(|p| {
            let vals: Vec<bool> = p.boundary().iter().map(|&v| assignment.get(v)).collect();
            p.predicate.accepts(&vals)
        });
        if parts_ok && comp.glue.iter().all(|c| c.is_satisfied(&assignment, g.mode)) {
            found[(bits & ((1 << b) - 1)) as usize] = true;
        }
    }
    for p in 0..1u64 << b {
        let extendable = found[p as usize];
        if extendable != g.predicate.contains(p) {
            let pattern: Vec<bool> = (0..b).map(|i| p >> i & 1 == 1).collect();
            let failure = if extendable {
                ExtensionFailure::ForbiddenExtension
            } else {
                ExtensionFailure::MissingExtension
            };
            return Ok(VerificationReport::fail(
                check,
                Witness::Extension {
                    boundary: g.boundary().to_vec(),
                    pattern,
                    failure,
                },
            )
            .with_detail(format!("pattern {p:b} fails ({failure:?})")));
        }
    }
    Ok(VerificationReport::pass(check).with_witness(Witness::AcceptedSet {
        boundary: g.boundary().to_vec(),
        patterns: (0..1u64 << b).filter(|&p| found[p as usize]).collect(),
    }))
}
