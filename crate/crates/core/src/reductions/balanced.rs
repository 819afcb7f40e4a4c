//! Balanced profiles: R5, R6, R9 and R10.

use std::collections::HashMap;

use crate::error::Error;
use crate::formula::{Clause, CnfInstance, Flavor, Lit, Var};
use crate::gadgets::GadgetKind;
use crate::variant::{first_violation, VariantSpec};

use super::{
    check_multiple_of_three, empty_slots, rewrite, Builder, MGadget, Occurrences, ReductionCertificate, ReductionId,
};

/// Pads every 2-clause of `pairs`, three at a time, with a fresh `y` held
/// false by S̄(y, y, y).
fn pad_with_s_bar(b: &mut Builder, pairs: Vec<Vec<Lit>>) -> Result<(), Error> {
    check_multiple_of_three("number of 2-clauses", pairs.len())?;
    for group in pairs.chunks(3) {
        let y = b.helper();
        b.gadget(GadgetKind::SBar, &[y, y, y])?;
        for pair in group {
            let mut lits = pair.clone();
            lits.push(y.pos());
            b.clause(lits);
        }
    }
    Ok(())
}

/// `x_{i,1}` takes the negated appearances, `x_{i,2}` the unnegated ones,
/// and `{x_{i,1}, x_{i,2}}` with A(x_{i,1}, x_{i,2}) makes them complementary.
pub(super) fn r5(input: &CnfInstance) -> Result<ReductionCertificate, Error> {
    check_multiple_of_three("number of variables", input.num_vars())?;
    let mut b = Builder::new();
    let occ = Occurrences::of(input);
    let mut slots = empty_slots(input);
    let mut pairs = Vec::new();
    for v in input.vars() {
        let x1 = b.copy_of(v, true, 0);
        let x2 = b.copy_of(v, false, 0);
        for &(c, p) in &occ.negative[v.index()] {
            slots[c][p] = Some(x1.pos());
        }
        for &(c, p) in &occ.positive[v.index()] {
            slots[c][p] = Some(x2.pos());
        }
        b.gadget(GadgetKind::A, &[x1, x2])?;
        pairs.push(vec![x1.pos(), x2.pos()]);
    }
    b.clauses_mut().extend(rewrite(input, &slots));
    pad_with_s_bar(&mut b, pairs)?;
    b.finish(ReductionId::R5, None, input, Flavor::Set)
}

/// `k + 1` copies of the formula, with `{x_j^i, y_j, z_j}` and
/// `{x̄_j^i, ȳ_j, z̄_j}` for every copy `i`.
pub(super) fn r6(input: &CnfInstance, k: u32) -> Result<ReductionCertificate, Error> {
    if k == 0 {
        return Err(Error::InputSpec("k must be at least 1".into()));
    }
    let mut b = Builder::new();
    let n = input.num_vars();
    let copies = k as usize + 1;
    let xs: Vec<Vec<Var>> = (0..copies)
        .map(|i| input.vars().map(|v| b.copy_of(v, false, i)).collect())
        .collect();
    let yz: Vec<(Var, Var)> = (0..n).map(|_| (b.helper(), b.helper())).collect();
    for copy in &xs {
        for c in input.clauses() {
            b.clauses_mut().push(c.map_vars(|v| copy[v.index()]));
        }
    }
    for (j, &(y, z)) in yz.iter().enumerate() {
        for copy in &xs {
            b.clause(vec![copy[j].pos(), y.pos(), z.pos()]);
            b.clause(vec![copy[j].neg(), y.neg(), z.neg()]);
        }
    }
    b.finish(ReductionId::R6, Some(k), input, Flavor::Set)
}

/// Six copies per variable tied by STAR22; the result has repeated
/// literals inside clauses.
pub(super) fn r9(input: &CnfInstance) -> Result<ReductionCertificate, Error> {
    let mut b = Builder::new();
    let occ = Occurrences::of(input);
    let mut slots = empty_slots(input);
    for v in input.vars() {
        let xs: Vec<Var> = (0..6).map(|_| b.copy_of(v, false, 0)).collect();
        let i = v.index();
        place(&mut slots, &occ.positive[i], &[xs[0], xs[2], xs[4]], false)?;
        place(&mut slots, &occ.negative[i], &[xs[1], xs[3], xs[5]], true)?;
        b.gadget(GadgetKind::Star22, &xs)?;
    }
    b.clauses_mut().extend(rewrite(input, &slots));
    b.finish(ReductionId::R9, None, input, Flavor::Multiset)
}

fn place(slots: &mut [Vec<Option<Lit>>], apps: &[(usize, usize)], targets: &[Var], negated: bool) -> Result<(), Error> {
    if apps.len() != targets.len() {
        return Err(Error::Shape(format!(
            "expected {} appearances, found {}",
            targets.len(),
            apps.len()
        )));
    }
    for (&(c, p), &x) in apps.iter().zip(targets) {
        slots[c][p] = Some(Lit::new(x, negated));
    }
    Ok(())
}

/// Builds R10 on `input` with the given M-gadget, without requiring the
/// gadget to come from a (2,2) instance. With a relaxed gadget the output
/// keeps the construction's shape but not the (2,2) profile on the gadget
/// variables.
pub fn r10_with_gadget(input: &CnfInstance, gadget: &MGadget) -> Result<ReductionCertificate, Error> {
    let spec = VariantSpec::monotone_pq(3, 3);
    if let Some(v) = first_violation(input, &spec) {
        return Err(Error::InputSpec(format!("R10 expects {spec}: {v}")));
    }
    let input = &input.clone().with_mode(crate::formula::Mode::Sat);
    r10(input, gadget)
}

/// `q` copies of: positive appearances on `x_{i,1}, x_{i,3}, x_{i,5}`,
/// negated ones on `x_{i,2}, x_{i,4}, x_{i,6}` (unnegated), with the
/// alternating chain and its negative companion per variable. The chain's
/// 2-clauses are completed with the literals an M-gadget forces false.
pub(super) fn r10(input: &CnfInstance, gadget: &MGadget) -> Result<ReductionCertificate, Error> {
    let q = gadget.q();
    if q == 0 {
        return Err(Error::InputSpec("M-gadget has no forced literals".into()));
    }
    let mut b = Builder::new();
    let occ = Occurrences::of(input);
    let mut positive_pairs = Vec::new();
    let mut negative_pairs = Vec::new();
    for copy in 0..q {
        let mut slots = empty_slots(input);
        for v in input.vars() {
            let xs: Vec<Var> = (0..6).map(|s| b.copy_of(v, s % 2 == 1, copy)).collect();
            let i = v.index();
            place(&mut slots, &occ.positive[i], &[xs[0], xs[2], xs[4]], false)?;
            place(&mut slots, &occ.negative[i], &[xs[1], xs[3], xs[5]], false)?;
            for s in [0, 2, 4] {
                positive_pairs.push((xs.clone(), vec![xs[s].pos(), xs[s + 1].pos()]));
            }
            for s in [1, 3, 5] {
                negative_pairs.push((xs.clone(), vec![xs[s].neg(), xs[(s + 1) % 6].neg()]));
            }
            b.gadget(GadgetKind::Chain22Neg, &xs)?;
        }
        b.clauses_mut().extend(rewrite(input, &slots));
    }

    let mut pos_pad = Vec::new();
    let mut neg_pad = Vec::new();
    for _ in 0..input.num_vars() {
        let (aux, clauses, pos, neg) = gadget.instantiate(b.alloc());
        b.log_block("M", Vec::new(), aux, clauses);
        pos_pad.extend(pos);
        neg_pad.extend(neg);
    }
    if pos_pad.len() != positive_pairs.len() || neg_pad.len() != negative_pairs.len() {
        return Err(Error::Shape(format!(
            "{} positive and {} negative 2-clauses but {} and {} forced literals",
            positive_pairs.len(),
            negative_pairs.len(),
            pos_pad.len(),
            neg_pad.len()
        )));
    }
    // Chains are logged as blocks owning no variables; their clauses carry
    // the padding literal.
    let mut chains: Vec<(Vec<Var>, Vec<Clause>)> = Vec::new();
    let mut index: HashMap<Var, usize> = HashMap::new();
    let padded = positive_pairs
        .into_iter()
        .zip(pos_pad)
        .chain(negative_pairs.into_iter().zip(neg_pad));
    for ((xs, mut pair), lit) in padded {
        pair.push(lit);
        let at = *index.entry(xs[0]).or_insert_with(|| {
            chains.push((xs.clone(), Vec::new()));
            chains.len() - 1
        });
        chains[at].1.push(Clause::new(pair));
    }
    for (xs, clauses) in chains {
        b.log_block("CHAIN22", xs, Vec::new(), clauses);
    }
    b.finish(ReductionId::R10, None, input, Flavor::Set)
}
