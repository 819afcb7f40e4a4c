//! Not-all-equal side: R1 to R4.

use crate::error::Error;
use crate::formula::{CnfInstance, Flavor, Var};
use crate::gadgets::GadgetKind;

use super::{empty_slots, rewrite, Builder, Occurrences, ReductionCertificate, ReductionId};

/// One fresh variable per appearance, in clause order, all in copy 0.
fn split_appearances(b: &mut Builder, input: &CnfInstance, occ: &Occurrences) -> Vec<Vec<Var>> {
    let mut slots = empty_slots(input);
    let copies: Vec<Vec<Var>> = occ
        .all
        .iter()
        .enumerate()
        .map(|(i, apps)| {
            apps.iter()
                .map(|&(c, p)| {
                    let x = b.copy_of(Var(i as u32), false, 0);
                    slots[c][p] = Some(x.pos());
                    x
                })
                .collect()
        })
        .collect();
    b.clauses_mut().extend(rewrite(input, &slots));
    copies
}

/// Ring of EQ_NE gadgets per variable, then P1 padding up to four
/// appearances for every variable still short.
pub(super) fn r1(input: &CnfInstance) -> Result<ReductionCertificate, Error> {
    let mut b = Builder::new();
    let occ = Occurrences::of(input);
    let copies = split_appearances(&mut b, input, &occ);
    for xs in copies.iter().filter(|xs| !xs.is_empty()) {
        let a = xs.len();
        b.gadget(GadgetKind::EqNe, &[xs[a - 1], xs[0]])?;
        for j in 0..a.saturating_sub(1) {
            b.gadget(GadgetKind::EqNe, &[xs[j], xs[j + 1]])?;
        }
    }
    // Each variable appears at most three times so far: its clause plus
    // one side of two ring gadgets, or the short NE6 leftovers.
    let mut totals = vec![0u32; b.alloc().num_vars()];
    for clause in b.clauses_mut().iter() {
        for v in clause.vars() {
            totals[v.index()] += 1;
        }
    }
    for (v, &t) in totals.iter().enumerate() {
        if t > 4 {
            return Err(Error::Shape(format!("variable {v} appears {t} times before padding")));
        }
        for _ in t..4 {
            b.gadget(GadgetKind::P1, &[Var(v as u32)])?;
        }
    }
    b.finish(ReductionId::R1, None, input, Flavor::Set)
}

/// Unnegated appearances first, then negated ones with the negation
/// dropped; EQ13 links copies of equal sign and NE9 crosses between the
/// two blocks.
pub(super) fn r2(input: &CnfInstance) -> Result<ReductionCertificate, Error> {
    let mut b = Builder::new();
    let occ = Occurrences::of(input);
    let mut slots = empty_slots(input);
    let mut rings = Vec::new();
    for i in 0..input.num_vars() {
        let input_var = Var(i as u32);
        let mut xs = Vec::new();
        for (apps, negated) in [(&occ.positive[i], false), (&occ.negative[i], true)] {
            for &(c, p) in apps {
                let x = b.copy_of(input_var, negated, 0);
                slots[c][p] = Some(x.pos());
                xs.push(x);
            }
        }
        rings.push((xs, occ.positive[i].len()));
    }
    b.clauses_mut().extend(rewrite(input, &slots));
    for (xs, u) in rings.iter().filter(|(xs, _)| !xs.is_empty()) {
        let a = xs.len();
        let mixed = *u > 0 && *u < a;
        for j in 1..a {
            let kind = if mixed && j == *u {
                GadgetKind::Ne9
            } else {
                GadgetKind::Eq13
            };
            b.gadget(kind, &[xs[j - 1], xs[j]])?;
        }
        let kind = if mixed { GadgetKind::Ne9 } else { GadgetKind::Eq13 };
        b.gadget(kind, &[xs[a - 1], xs[0]])?;
    }
    b.finish(ReductionId::R2, None, input, Flavor::Set)
}

/// Four fresh copies per variable tied by EQ4L; the original clauses end
/// up pairwise variable-disjoint.
pub(super) fn r3(input: &CnfInstance) -> Result<ReductionCertificate, Error> {
    let mut b = Builder::new();
    let occ = Occurrences::of(input);
    let copies = split_appearances(&mut b, input, &occ);
    for xs in &copies {
        if xs.len() != 4 {
            return Err(Error::Shape(format!("expected four appearances, found {}", xs.len())));
        }
        b.gadget(GadgetKind::Eq4L, xs)?;
    }
    b.finish(ReductionId::R3, None, input, Flavor::Set)
}

/// Every clause together with its complement, read as plain SAT.
pub(super) fn r4(input: &CnfInstance) -> Result<ReductionCertificate, Error> {
    let mut b = Builder::new();
    for v in input.vars() {
        b.copy_of(v, false, 0);
    }
    for c in input.clauses() {
        b.clauses_mut().push(c.clone());
        b.clauses_mut().push(c.negated());
    }
    b.finish(ReductionId::R4, None, input, Flavor::Set)
}
