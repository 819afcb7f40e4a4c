//! Explicit unsatisfiable instances.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::formula::{Clause, CnfInstance, Flavor, Mode, Var};
use crate::gadgets::{build_gadget, verify_gadget, FreshAllocator, GadgetKind};
use crate::oracle::{enum_cap, for_each_model};
use crate::report::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnownUnsat {
    /// S(x,x,x) ∪ S̄(x,x,x): Monotone 3-Sat-(3,3), 13 variables.
    SsBar,
    /// Monotone 3-Sat-(3,3), 9 variables and 18 clauses.
    NineVar,
    /// Monotone 3-Sat-(5,1), 102 variables and 204 clauses.
    Mon51,
    /// Three negative triples plus all 27 positive transversal clauses.
    Hitting27,
}

impl KnownUnsat {
    pub const ALL: [KnownUnsat; 4] = [
        KnownUnsat::SsBar,
        KnownUnsat::NineVar,
        KnownUnsat::Mon51,
        KnownUnsat::Hitting27,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KnownUnsat::SsBar => "ss_bar",
            KnownUnsat::NineVar => "nine_var",
            KnownUnsat::Mon51 => "mon51",
            KnownUnsat::Hitting27 => "hitting27",
        }
    }
}

impl fmt::Display for KnownUnsat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KnownUnsat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        KnownUnsat::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::Unknown {
                what: "witness",
                name: s.to_string(),
            })
    }
}

/// The 9-variable instance, variables a..i numbered 1..9.
pub const NINE_VAR: [[i64; 3]; 18] = [
    [-1, -4, -7],
    [-1, -6, -9],
    [-2, -4, -8],
    [-2, -5, -6],
    [-3, -5, -7],
    [-3, -8, -9],
    [1, 4, 7],
    [1, 6, 9],
    [2, 4, 8],
    [2, 5, 6],
    [3, 5, 7],
    [3, 8, 9],
    [1, 2, 3],
    [4, 5, 9],
    [6, 7, 8],
    [-1, -5, -8],
    [-2, -7, -9],
    [-3, -4, -6],
];

pub fn known_unsat(which: KnownUnsat) -> CnfInstance {
    match which {
        KnownUnsat::NineVar => {
            let rows: Vec<&[i64]> = NINE_VAR.iter().map(|r| &r[..]).collect();
            CnfInstance::from_dimacs_clauses(9, &rows, Mode::Sat, Flavor::Set).expect("frozen table is well formed")
        }
        KnownUnsat::SsBar => {
            let x = Var(0);
            let mut alloc = FreshAllocator::new(1);
            let mut clauses = Vec::new();
            for kind in [GadgetKind::S, GadgetKind::SBar] {
                clauses.extend(
                    build_gadget(kind, &[x, x, x], &mut alloc)
                        .expect("S on one variable")
                        .clauses,
                );
            }
            CnfInstance::new(alloc.num_vars(), clauses, Mode::Sat, Flavor::Set).expect("gadget clauses are in range")
        }
        KnownUnsat::Mon51 => mon51_parts().0,
        KnownUnsat::Hitting27 => {
            let mut clauses: Vec<Clause> = (0..3u32)
                .map(|t| Clause::new((0..3).map(|i| Var(3 * t + i).neg()).collect()))
                .collect();
            for a in 0..3 {
                for b in 3..6 {
                    for c in 6..9 {
                        clauses.push(Clause::new(vec![Var(a).pos(), Var(b).pos(), Var(c).pos()]));
                    }
                }
            }
            CnfInstance::new(9, clauses, Mode::Sat, Flavor::Set).expect("nine variables")
        }
    }
}

/// F(y1) ∪ F(y2) ∪ F(y3) ∪ {ȳ1, ȳ2, ȳ3} ∪ D(y1,y1,y2,y2,y3,y3) with
/// y_i = variable i; also returns the three F blocks and the residual
/// clauses.
fn mon51_parts() -> (CnfInstance, Vec<crate::gadgets::GadgetInstance>, Vec<Clause>) {
    let ys = [Var(0), Var(1), Var(2)];
    let mut alloc = FreshAllocator::new(3);
    let fs: Vec<_> = ys
        .iter()
        .map(|&y| build_gadget(GadgetKind::F, &[y], &mut alloc).expect("F on one variable"))
        .collect();
    let mut residual = vec![Clause::new(ys.iter().map(|y| y.neg()).collect())];
    let d = build_gadget(GadgetKind::D, &[ys[0], ys[0], ys[1], ys[1], ys[2], ys[2]], &mut alloc)
        .expect("D on three variables");
    residual.extend(d.clauses);
    let clauses = fs
        .iter()
        .flat_map(|f| f.clauses.iter().cloned())
        .chain(residual.iter().cloned())
        .collect();
    let instance =
        CnfInstance::new(alloc.num_vars(), clauses, Mode::Sat, Flavor::Set).expect("gadget clauses are in range");
    (instance, fs, residual)
}

/// Unsatisfiability of mon51 without solving it whole: F is certified to
/// accept only `y = true`, the three F blocks own pairwise disjoint
/// auxiliaries that occur nowhere else, and the 12-variable residual has no
/// model with every `y_i` true.
pub fn certify_mon51_compositionally() -> Result<VerificationReport, Error> {
    let check = "mon51 unsatisfiable by F-forcing";
    let f_report = verify_gadget(GadgetKind::F)?;
    if !f_report.passed {
        return Ok(VerificationReport::fail_detail(
            check,
            format!("F not certified: {f_report}"),
        ));
    }
    let (instance, fs, residual) = mon51_parts();
    if instance != known_unsat(KnownUnsat::Mon51) {
        return Ok(VerificationReport::fail_detail(
            check,
            "construction differs from the catalogue instance",
        ));
    }
    // y true is the only accepted value.
    if fs.iter().any(|f| f.predicate.accepted() != [1]) {
        return Ok(VerificationReport::fail_detail(check, "F does not force its variable"));
    }

    let mut owner = vec![usize::MAX; instance.num_vars()];
    for (i, f) in fs.iter().enumerate() {
        for &a in &f.aux {
            if owner[a.index()] != usize::MAX {
                return Ok(VerificationReport::fail_detail(
                    check,
                    format!("{a} is shared by two F blocks"),
                ));
            }
            owner[a.index()] = i;
        }
    }
    let residual_vars: Vec<Var> = {
        let mut vs: Vec<Var> = residual.iter().flat_map(|c| c.vars()).collect();
        vs.sort();
        vs.dedup();
        vs
    };
    if let Some(v) = residual_vars.iter().find(|v| owner[v.index()] != usize::MAX) {
        return Ok(VerificationReport::fail_detail(
            check,
            format!("F auxiliary {v} occurs in the residual"),
        ));
    }
    if residual_vars.len() != 12 {
        return Ok(VerificationReport::fail_detail(
            check,
            format!("residual has {} variables, expected 12", residual_vars.len()),
        ));
    }

    let local = |v: Var| Var(residual_vars.binary_search(&v).expect("residual variable") as u32);
    let clauses = residual.iter().map(|c| c.map_vars(local)).collect();
    let rest = CnfInstance::new(residual_vars.len(), clauses, Mode::Sat, Flavor::Set)?;
    let ys: Vec<usize> = (0..3).map(|i| local(Var(i)).index()).collect();
    let mut escape = None;
    for_each_model(&rest, enum_cap(), |bits| {
        if ys.iter().all(|&y| bits >> y & 1 == 1) {
            escape = Some(bits);
            return false;
        }
        true
    })?;
    Ok(match escape {
        None => VerificationReport::pass(check).with_detail("3 F blocks certified, 2^12 residual assignments excluded"),
        Some(bits) => VerificationReport::fail_detail(check, format!("residual model {bits:b} with every y true")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in KnownUnsat::ALL {
            assert_eq!(k.name().parse::<KnownUnsat>().unwrap(), k);
        }
        assert_eq!("NINE-VAR".parse::<KnownUnsat>().unwrap(), KnownUnsat::NineVar);
    }
}
