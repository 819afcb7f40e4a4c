//! Profiles summing to five and six: R11 and R12.

use crate::error::Error;
use crate::formula::{CnfInstance, Flavor, Lit};
use crate::gadgets::GadgetKind;

use super::{check_multiple_of_three, empty_slots, rewrite, Builder, Occurrences, ReductionCertificate, ReductionId};

/// `x_{i,1}` takes the negated appearances and `x_{i,2}` the unnegated
/// ones, with `{x1, x2}`, `{x̄1, x̄2, ȳ_i}`, G(y_i, y_i, y_i) and
/// H(y_i, x1, x2). Each group of three 2-clauses is completed by the `u` of
/// a block H(u,v,w) twice, G(v,v,v), G(w,w,w).
pub(super) fn r11(input: &CnfInstance) -> Result<ReductionCertificate, Error> {
    check_multiple_of_three("number of variables", input.num_vars())?;
    let mut b = Builder::new();
    let occ = Occurrences::of(input);
    let mut slots = empty_slots(input);
    let mut pairs: Vec<Vec<Lit>> = Vec::new();
    for v in input.vars() {
        let x1 = b.copy_of(v, true, 0);
        let x2 = b.copy_of(v, false, 0);
        let y = b.helper();
        for &(c, p) in &occ.negative[v.index()] {
            slots[c][p] = Some(x1.pos());
        }
        for &(c, p) in &occ.positive[v.index()] {
            slots[c][p] = Some(x2.pos());
        }
        pairs.push(vec![x1.pos(), x2.pos()]);
        b.clause(vec![x1.neg(), x2.neg(), y.neg()]);
        b.gadget(GadgetKind::G, &[y, y, y])?;
        b.gadget(GadgetKind::H, &[y, x1, x2])?;
    }
    b.clauses_mut().extend(rewrite(input, &slots));
    for group in pairs.chunks(3) {
        let (u, v, w) = (b.helper(), b.helper(), b.helper());
        b.gadget(GadgetKind::H, &[u, v, w])?;
        b.gadget(GadgetKind::H, &[u, v, w])?;
        b.gadget(GadgetKind::G, &[v, v, v])?;
        b.gadget(GadgetKind::G, &[w, w, w])?;
        for pair in group {
            let mut lits = pair.clone();
            lits.push(u.pos());
            b.clause(lits);
        }
    }
    b.finish(ReductionId::R11, None, input, Flavor::Set)
}

/// INC32 on every triple of consecutive variables adds one unnegated
/// appearance to each.
pub(super) fn r12(input: &CnfInstance) -> Result<ReductionCertificate, Error> {
    check_multiple_of_three("number of variables", input.num_vars())?;
    let mut b = Builder::new();
    let xs: Vec<_> = input.vars().map(|v| b.copy_of(v, false, 0)).collect();
    b.clauses_mut().extend(input.clauses().iter().cloned());
    for triple in xs.chunks(3) {
        b.gadget(GadgetKind::Inc32, triple)?;
    }
    b.finish(ReductionId::R12, None, input, Flavor::Set)
}
