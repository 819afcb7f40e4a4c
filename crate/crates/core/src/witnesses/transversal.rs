//! Monotone formulas whose negative clauses are disjoint triples covering
//! every variable. A satisfying assignment may be assumed to make exactly one
//! variable per triple false, so the candidates are the transversals: one
//! variable chosen from each triple.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::formula::{Assignment, Clause, CnfInstance, Var};
use crate::report::{VerificationReport, Witness};

/// Largest number of triples `check_sat_via_transversal` enumerates by
/// default (3^15 transversals).
pub const DEFAULT_TRANSVERSAL_CAP: usize = 15;

/// The family M_n over the triples {x1,x2,x3}, {x4,x5,x6}, ... and the
/// family U_n of 3-subsets of its members.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransversalFamily {
    n: usize,
}

impl TransversalFamily {
    pub fn new(n: usize) -> Result<TransversalFamily, Error> {
        if !n.is_multiple_of(3) {
            return Err(Error::Divisibility(format!("n = {n} is not a multiple of 3")));
        }
        Ok(TransversalFamily { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn triples(&self) -> usize {
        self.n / 3
    }

    /// 3^(n/3).
    pub fn size(&self) -> u128 {
        3u128.pow(self.triples() as u32)
    }

    /// Member number `index`: digit `t` in base 3 picks the variable of
    /// triple `t`.
    pub fn member(&self, mut index: u128) -> Vec<Var> {
        (0..self.triples())
            .map(|t| {
                let d = (index % 3) as u32;
                index /= 3;
                Var(3 * t as u32 + d)
            })
            .collect()
    }

    pub fn members(&self) -> impl Iterator<Item = Vec<Var>> + '_ {
        (0..self.size()).map(move |i| self.member(i))
    }

    /// The U_n member of a transversal: all its 3-subsets as positive clauses.
    pub fn three_subsets(member: &[Var]) -> Vec<Clause> {
        let mut out = Vec::new();
        for i in 0..member.len() {
            for j in i + 1..member.len() {
                for k in j + 1..member.len() {
                    out.push(Clause::new(vec![member[i].pos(), member[j].pos(), member[k].pos()]));
                }
            }
        }
        out
    }

    /// Number of members containing every variable of `clause`, by direct
    /// count.
    pub fn coverage(&self, clause: &[Var]) -> u128 {
        self.members().filter(|m| clause.iter().all(|v| m.contains(v))).count() as u128
    }
}

/// Negative triples and positive clauses of a canonical instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalShape {
    pub triples: Vec<[Var; 3]>,
    pub positive: Vec<Clause>,
}

/// Splits `instance` into disjoint negative triples covering every variable
/// and positive 3-clauses.
pub fn canonical_shape(instance: &CnfInstance) -> Result<CanonicalShape, Error> {
    let mut seen = vec![false; instance.num_vars()];
    let mut triples = Vec::new();
    let mut positive = Vec::new();
    for (i, c) in instance.clauses().iter().enumerate() {
        if c.len() != 3 || c.repeated_var().is_some() {
            return Err(Error::Shape(format!("clause {i} is not three distinct literals")));
        }
        if c.is_all_negative() {
            let vs = c.var_set();
            for v in &vs {
                if std::mem::replace(&mut seen[v.index()], true) {
                    return Err(Error::Shape(format!("negative clauses overlap in {v}")));
                }
            }
            triples.push([vs[0], vs[1], vs[2]]);
        } else if c.is_all_positive() {
            positive.push(c.clone());
        } else {
            return Err(Error::Shape(format!("clause {i} mixes polarities")));
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(Error::Shape(format!("x{} is in no negative clause", v + 1)));
    }
    Ok(CanonicalShape { triples, positive })
}

/// Satisfiable iff some transversal contains no positive clause; the
/// transversal then names the variables set false. Fails (unsatisfiable)
/// when every transversal is hit.
pub fn check_sat_via_transversal(instance: &CnfInstance, cap: usize) -> Result<VerificationReport, Error> {
    let shape = canonical_shape(instance)?;
    let k = shape.triples.len();
    if k > cap {
        return Err(Error::CapExceeded { vars: k, cap });
    }
    let n = instance.num_vars();
    if n > 128 {
        return Err(Error::Shape("more than 128 variables".into()));
    }
    let mask = |c: &Clause| c.vars().fold(0u128, |m, v| m | 1 << v.index());
    // Positive clauses indexed by variable, to test only the ones a new
    // choice can complete.
    let mut by_var: Vec<Vec<u128>> = vec![Vec::new(); n];
    for c in &shape.positive {
        let m = mask(c);
        for v in c.var_set() {
            by_var[v.index()].push(m);
        }
    }
    let mut chosen = Vec::with_capacity(k);
    let check = "satisfiable via transversal";
    if let Some(x) = dfs(&shape.triples, &by_var, 0, &mut chosen) {
        let mut values = vec![true; n];
        for v in &x {
            values[v.index()] = false;
        }
        debug_assert!(instance.is_satisfied_by(&Assignment(values)));
        return Ok(VerificationReport::pass(check)
            .with_witness(Witness::Transversal { vars: x })
            .with_detail(format!("{} positive clause(s) avoided", shape.positive.len())));
    }
    Ok(VerificationReport::fail_detail(
        check,
        format!("all {} transversals contain a positive clause", 3u128.pow(k as u32)),
    ))
}

fn dfs(triples: &[[Var; 3]], by_var: &[Vec<u128>], false_mask: u128, chosen: &mut Vec<Var>) -> Option<Vec<Var>> {
    let Some(triple) = triples.get(chosen.len()) else {
        return Some(chosen.clone());
    };
    for &v in triple {
        let m = false_mask | 1 << v.index();
        if by_var[v.index()].iter().any(|&c| c & !m == 0) {
            continue;
        }
        chosen.push(v);
        if let Some(x) = dfs(triples, by_var, m, chosen) {
            return Some(x);
        }
        chosen.pop();
    }
    None
}

/// Which counting argument guarantees satisfiability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "bound", rename_all = "snake_case")]
pub enum SatGuarantee {
    /// Every variable appears unnegated fewer than 81/n times.
    FewUnnegatedAppearances { max: u32, n: usize },
    /// Fewer than 27 positive clauses.
    FewPositiveClauses { count: usize },
}

/// A guarantee from the counting bounds, or `None` when neither applies
/// (which says nothing about satisfiability).
pub fn bound_satisfiable(instance: &CnfInstance) -> Result<Option<SatGuarantee>, Error> {
    let shape = canonical_shape(instance)?;
    let n = instance.num_vars();
    let profile = instance.appearance_profile();
    let max = instance.vars().map(|v| profile.positive(v)).max().unwrap_or(0);
    if (max as usize) * n < 81 {
        return Ok(Some(SatGuarantee::FewUnnegatedAppearances { max, n }));
    }
    if shape.positive.len() < 27 {
        return Ok(Some(SatGuarantee::FewPositiveClauses {
            count: shape.positive.len(),
        }));
    }
    Ok(None)
}
