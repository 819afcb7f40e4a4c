//! Four appearances per variable: R13 and R14.

use crate::error::Error;
use crate::formula::{negate_rename, CnfInstance, Flavor, Var};
use crate::gadgets::GadgetKind;

use super::{empty_slots, rewrite, Builder, Occurrences, ReductionCertificate, ReductionId};

/// `x_{i,1}` takes the negated appearances and `x_{i,2}` the unnegated
/// ones, with `{x1, x2, y_i}` and `{x̄1, x̄2, z̄_i}`; B̄(y,y,y) holds `y_i`
/// false and B(z,z,z) holds `z_i` true.
pub(super) fn r13(input: &CnfInstance) -> Result<ReductionCertificate, Error> {
    let mut b = Builder::new();
    let occ = Occurrences::of(input);
    let mut slots = empty_slots(input);
    for v in input.vars() {
        let x1 = b.copy_of(v, true, 0);
        let x2 = b.copy_of(v, false, 0);
        let (y, z) = (b.helper(), b.helper());
        for &(c, p) in &occ.negative[v.index()] {
            slots[c][p] = Some(x1.pos());
        }
        for &(c, p) in &occ.positive[v.index()] {
            slots[c][p] = Some(x2.pos());
        }
        b.clause(vec![x1.pos(), x2.pos(), y.pos()]);
        b.clause(vec![x1.neg(), x2.neg(), z.neg()]);
        b.gadget(GadgetKind::BBar, &[y, y, y])?;
        b.gadget(GadgetKind::B, &[z, z, z])?;
    }
    b.clauses_mut().extend(rewrite(input, &slots));
    b.finish(ReductionId::R13, None, input, Flavor::Set)
}

/// Renames every variable with profile (1,3) to its complement.
pub(super) fn r14(input: &CnfInstance) -> Result<ReductionCertificate, Error> {
    let profile = input.appearance_profile();
    let flip: Vec<Var> = input
        .vars()
        .filter(|&v| (profile.positive(v), profile.negative(v)) == (1, 3))
        .collect();
    let mut b = Builder::new();
    let mut flipped = vec![false; input.num_vars()];
    for v in &flip {
        flipped[v.index()] = true;
    }
    for v in input.vars() {
        b.copy_of(v, flipped[v.index()], 0);
    }
    b.clauses_mut()
        .extend(negate_rename(input, &flip).clauses().iter().cloned());
    b.finish(ReductionId::R14, None, input, Flavor::Set)
}
