//! One negated appearance per variable: R7 and R8.

use crate::error::Error;
use crate::formula::{Clause, CnfInstance, Flavor, Var};
use crate::gadgets::GadgetKind;

use super::{check_multiple_of_three, empty_slots, rewrite, Builder, Occurrences, ReductionCertificate, ReductionId};

/// `x_{i,1}` takes the negated appearances and `x_{i,2}` the unnegated
/// ones; D(x1,x1,x1,x2,x2,x2) says one of them is true and
/// `{x̄1, x̄2, ȳ_i}` with F(y_i) says one is false. The `y_i` are then
/// brought to five unnegated appearances by triples over consecutive `y`s.
pub(super) fn r7(input: &CnfInstance) -> Result<ReductionCertificate, Error> {
    let n = input.num_vars();
    check_multiple_of_three("number of variables", n)?;
    let mut b = Builder::new();
    let occ = Occurrences::of(input);
    let mut slots = empty_slots(input);
    let mut ys = Vec::with_capacity(n);
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
        b.gadget(GadgetKind::D, &[x1, x1, x1, x2, x2, x2])?;
        b.clause(vec![x1.neg(), x2.neg(), y.neg()]);
        b.gadget(GadgetKind::F, &[y])?;
        ys.push(y);
    }
    b.clauses_mut().extend(rewrite(input, &slots));
    pad_ys(&mut b, &ys)?;
    b.finish(ReductionId::R7, None, input, Flavor::Set)
}

/// Two more unnegated appearances for each `y`.
fn pad_ys(b: &mut Builder, ys: &[Var]) -> Result<(), Error> {
    let n = ys.len();
    let q = n / 3;
    match q {
        0 => Ok(()),
        1 => b.gadget(GadgetKind::D, &[ys[0], ys[0], ys[1], ys[1], ys[2], ys[2]]),
        _ => {
            let mut triples: Vec<Clause> = Vec::new();
            for i in 0..q {
                triples.push(Clause::new(ys[3 * i..3 * i + 3].iter().map(|y| y.pos()).collect()));
            }
            for i in 0..q - 1 {
                triples.push(Clause::new(ys[3 * i + 1..3 * i + 4].iter().map(|y| y.pos()).collect()));
            }
            triples.push(Clause::new(vec![ys[n - 2].pos(), ys[n - 1].pos(), ys[0].pos()]));
            let mut sorted = triples.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != triples.len() {
                return Err(Error::Shape("padding triples are not distinct".into()));
            }
            b.clauses_mut().extend(triples);
            Ok(())
        }
    }
}

/// `k + 1` copies with `{x_j^i, y_j, z_j}` per copy; the `y`s and `z`s get
/// their one negated appearance from triples over consecutive variables.
pub(super) fn r8(input: &CnfInstance, k: u32) -> Result<ReductionCertificate, Error> {
    if k == 0 {
        return Err(Error::InputSpec("k must be at least 1".into()));
    }
    let n = input.num_vars();
    check_multiple_of_three("number of variables", n)?;
    let mut b = Builder::new();
    let xs: Vec<Vec<Var>> = (0..=k as usize)
        .map(|i| input.vars().map(|v| b.copy_of(v, false, i)).collect())
        .collect();
    let ys: Vec<Var> = (0..n).map(|_| b.helper()).collect();
    let zs: Vec<Var> = (0..n).map(|_| b.helper()).collect();
    for copy in &xs {
        for c in input.clauses() {
            b.clauses_mut().push(c.map_vars(|v| copy[v.index()]));
        }
    }
    for j in 0..n {
        for copy in &xs {
            b.clause(vec![copy[j].pos(), ys[j].pos(), zs[j].pos()]);
        }
    }
    for group in ys.chunks(3).chain(zs.chunks(3)) {
        b.clause(group.iter().map(|v| v.neg()).collect());
    }
    b.finish(ReductionId::R8, Some(k), input, Flavor::Set)
}
