//! Gray-code enumeration with incremental per-clause true counts.
//!
//! Each step flips a single variable, so only the clauses containing it are
//! touched. Above a size threshold the space is split on the top variables
//! and the slices are searched in parallel; the first model in slice order
//! wins, which keeps results deterministic.

use rayon::prelude::*;

use crate::error::Error;
use crate::formula::{Assignment, CnfInstance, Mode};

use super::{enum_cap, SolveResult};

const PARALLEL_THRESHOLD: usize = 20;
const SPLIT_BITS: usize = 6;

/// Per-variable occurrence lists and clause bookkeeping for one instance.
struct Counter {
    /// `occ[v]` lists `(clause, unnegated)` once per literal copy.
    occ: Vec<Vec<(u32, bool)>>,
    len: Vec<u32>,
    count: Vec<u32>,
    nae: bool,
    bad: usize,
}

impl Counter {
    fn new(instance: &CnfInstance) -> Counter {
        let mut occ = vec![Vec::new(); instance.num_vars()];
        let mut len = Vec::with_capacity(instance.num_clauses());
        for (c, clause) in instance.clauses().iter().enumerate() {
            for lit in clause.lits() {
                occ[lit.var().index()].push((c as u32, lit.is_positive()));
            }
            len.push(clause.len() as u32);
        }
        let mut counter = Counter {
            occ,
            count: vec![0; len.len()],
            len,
            nae: instance.mode() == Mode::Nae,
            bad: 0,
        };
        counter.load(instance, 0);
        counter
    }

    fn is_bad(&self, c: usize) -> bool {
        let t = self.count[c];
        t == 0 || (self.nae && t == self.len[c])
    }

    /// Resets counts to the assignment encoded by `bits`.
    fn load(&mut self, instance: &CnfInstance, bits: u64) {
        self.bad = 0;
        for (c, clause) in instance.clauses().iter().enumerate() {
            let t = clause
                .lits()
                .iter()
                .filter(|l| l.eval(bits >> l.var().index() & 1 == 1))
                .count();
            self.count[c] = t as u32;
            if self.is_bad(c) {
                self.bad += 1;
            }
        }
    }

    /// Flips variable `v`, whose new value is `value`.
    #[inline]
    fn flip(&mut self, v: usize, value: bool) {
        for i in 0..self.occ[v].len() {
            let (c, positive) = self.occ[v][i];
            let c = c as usize;
            let was_bad = self.is_bad(c);
            if positive == value {
                self.count[c] += 1;
            } else {
                self.count[c] -= 1;
            }
            match (was_bad, self.is_bad(c)) {
                (true, false) => self.bad -= 1,
                (false, true) => self.bad += 1,
                _ => {}
            }
        }
    }
}

/// Walks the `2^low` assignments of variables `0..low` with the higher bits
/// fixed to `base`, calling `visit` on every model. Stops when `visit`
/// returns `false`; the return value says whether the walk completed.
fn walk(
    instance: &CnfInstance,
    counter: &mut Counter,
    low: usize,
    base: u64,
    mut visit: impl FnMut(u64) -> bool,
) -> bool {
    counter.load(instance, base);
    let mut bits = base;
    if counter.bad == 0 && !visit(bits) {
        return false;
    }
    for step in 1u64..(1u64 << low) {
        let v = step.trailing_zeros() as usize;
        bits ^= 1 << v;
        counter.flip(v, bits >> v & 1 == 1);
        if counter.bad == 0 && !visit(bits) {
            return false;
        }
    }
    true
}

fn check_cap(instance: &CnfInstance, cap: usize) -> Result<(), Error> {
    let n = instance.num_vars();
    if n > cap || n > 63 {
        return Err(Error::CapExceeded { vars: n, cap });
    }
    Ok(())
}

pub fn solve_exhaustive(instance: &CnfInstance) -> Result<SolveResult, Error> {
    solve_exhaustive_with(instance, enum_cap())
}

pub fn solve_exhaustive_with(instance: &CnfInstance, cap: usize) -> Result<SolveResult, Error> {
    check_cap(instance, cap)?;
    let n = instance.num_vars();
    let found = if n >= PARALLEL_THRESHOLD {
        let low = n - SPLIT_BITS;
        (0u64..1 << SPLIT_BITS).into_par_iter().find_map_first(|high| {
            let mut counter = Counter::new(instance);
            let mut model = None;
            walk(instance, &mut counter, low, high << low, |bits| {
                model = Some(bits);
                false
            });
            model
        })
    } else {
        let mut counter = Counter::new(instance);
        let mut model = None;
        walk(instance, &mut counter, n, 0, |bits| {
            model = Some(bits);
            false
        });
        model
    };
    Ok(match found {
        Some(bits) => {
            let model = Assignment::from_bits(bits, n);
            debug_assert!(instance.is_satisfied_by(&model));
            SolveResult::sat(model)
        }
        None => SolveResult::unsat(),
    })
}

/// Calls `visit` with the bit-packed form of every model (bit `i` is
/// variable `i`), in Gray-code order. `visit` returns `false` to stop early.
pub fn for_each_model(instance: &CnfInstance, cap: usize, visit: impl FnMut(u64) -> bool) -> Result<(), Error> {
    check_cap(instance, cap)?;
    let mut counter = Counter::new(instance);
    walk(instance, &mut counter, instance.num_vars(), 0, visit);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Flavor;

    fn brute(instance: &CnfInstance) -> usize {
        let n = instance.num_vars();
        (0u64..1 << n)
            .filter(|&b| instance.is_satisfied_by(&Assignment::from_bits(b, n)))
            .count()
    }

    #[test]
    fn model_count_matches_truth_table() {
        let i = CnfInstance::from_dimacs_clauses(
            4,
            &[&[1, 2, -3], &[-1, 4], &[2, 3, 4], &[-2, -4]],
            Mode::Sat,
            Flavor::Set,
        )
        .unwrap();
        let mut count = 0;
        for_each_model(&i, 26, |_| {
            count += 1;
            true
        })
        .unwrap();
        assert_eq!(count, brute(&i));
        let nae = i.clone().with_mode(Mode::Nae);
        let mut count = 0;
        for_each_model(&nae, 26, |_| {
            count += 1;
            true
        })
        .unwrap();
        assert_eq!(count, brute(&nae));
    }

    #[test]
    fn multiset_counts_copies() {
        // {x1, x1} in nae mode can never have a true and a false literal
        let i = CnfInstance::from_dimacs_clauses(1, &[&[1, 1]], Mode::Nae, Flavor::Multiset).unwrap();
        assert!(!solve_exhaustive(&i).unwrap().is_sat());
    }

    #[test]
    fn empty_instance_is_sat() {
        let r = solve_exhaustive(&CnfInstance::empty(Mode::Sat)).unwrap();
        assert!(r.is_sat());
        assert_eq!(r.model.unwrap().len(), 0);
    }

    #[test]
    fn cap_is_enforced() {
        let i = CnfInstance::new(30, vec![], Mode::Sat, Flavor::Set).unwrap();
        assert!(matches!(
            solve_exhaustive_with(&i, 26),
            Err(Error::CapExceeded { vars: 30, cap: 26 })
        ));
    }

    #[test]
    fn parallel_path_finds_single_model() {
        // unit clauses pin all 21 variables to one model
        let units: Vec<Vec<i64>> = (1..=21).map(|v| vec![if v % 3 == 0 { -v } else { v }]).collect();
        let refs: Vec<&[i64]> = units.iter().map(|c| c.as_slice()).collect();
        let i = CnfInstance::from_dimacs_clauses(21, &refs, Mode::Sat, Flavor::Set).unwrap();
        let r = solve_exhaustive(&i).unwrap();
        assert!(i.is_satisfied_by(r.model.as_ref().unwrap()));
    }
}
