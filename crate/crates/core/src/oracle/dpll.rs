//! DPLL with unit propagation over two watched literals and pure-literal
//! decisions. Conflicts are analysed to the first unique implication point
//! and the learned clause drives a non-chronological backjump.
//!
//! NAE instances are solved by conjoining the literal-wise negation of
//! every clause and running the plain SAT search.

use std::time::{Duration, Instant};

use crate::error::Error;
use crate::formula::{Assignment, CnfInstance, Mode};

use super::SolveResult;

pub fn solve_dpll(instance: &CnfInstance) -> Result<SolveResult, Error> {
    solve_dpll_with(instance, None)
}

pub fn solve_dpll_with(instance: &CnfInstance, timeout: Option<Duration>) -> Result<SolveResult, Error> {
    let mut clauses: Vec<Vec<u32>> = Vec::new();
    for clause in instance.clauses() {
        let lits: Vec<u32> = clause
            .lits()
            .iter()
            .map(|l| code(l.var().index(), l.is_negated()))
            .collect();
        clauses.push(lits.clone());
        if instance.mode() == Mode::Nae {
            clauses.push(lits.iter().map(|&l| l ^ 1).collect());
        }
    }
    let mut solver = Solver::new(instance.num_vars(), timeout);
    let result = match solver.load(clauses) {
        false => None,
        true => solver.search()?,
    };
    Ok(match result {
        Some(values) => {
            let model = Assignment(values);
            if let Some(clause) = instance.first_unsatisfied(&model) {
                return Err(Error::InvalidModel { clause });
            }
            SolveResult::sat(model)
        }
        None => SolveResult::unsat(),
    })
}

fn code(var: usize, negated: bool) -> u32 {
    (var as u32) << 1 | negated as u32
}

fn var_of(lit: u32) -> usize {
    (lit >> 1) as usize
}

const UNASSIGNED: u8 = 2;

struct Solver {
    num_vars: usize,
    clauses: Vec<Vec<u32>>,
    /// Clauses `0..original` come from the input; the rest are learned.
    original: usize,
    watches: Vec<Vec<usize>>,
    /// 0 false, 1 true, [`UNASSIGNED`] otherwise.
    value: Vec<u8>,
    level: Vec<usize>,
    reason: Vec<Option<usize>>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    head: usize,
    activity: Vec<f64>,
    bump: f64,
    seen: Vec<bool>,
    deadline: Option<(Instant, Duration)>,
    ticks: u64,
}

impl Solver {
    fn new(num_vars: usize, timeout: Option<Duration>) -> Solver {
        Solver {
            num_vars,
            clauses: Vec::new(),
            original: 0,
            watches: vec![Vec::new(); 2 * num_vars],
            value: vec![UNASSIGNED; num_vars],
            level: vec![0; num_vars],
            reason: vec![None; num_vars],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            head: 0,
            activity: vec![0.0; num_vars],
            bump: 1.0,
            seen: vec![false; num_vars],
            deadline: timeout.map(|t| (Instant::now() + t, t)),
            ticks: 0,
        }
    }

    fn lit_value(&self, lit: u32) -> u8 {
        match self.value[var_of(lit)] {
            UNASSIGNED => UNASSIGNED,
            v => v ^ (lit & 1) as u8,
        }
    }

    fn decision_level(&self) -> usize {
        self.trail_lim.len()
    }

    fn assign(&mut self, lit: u32, reason: Option<usize>) {
        let v = var_of(lit);
        self.value[v] = (lit & 1 == 0) as u8;
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    /// Adds the input clauses; returns `false` on a trivial contradiction.
    fn load(&mut self, clauses: Vec<Vec<u32>>) -> bool {
        let mut units = Vec::new();
        for mut lits in clauses {
            lits.sort_unstable();
            lits.dedup();
            if lits.windows(2).any(|w| w[0] ^ 1 == w[1]) {
                continue;
            }
            match lits.len() {
                0 => return false,
                1 => units.push(lits[0]),
                _ => {
                    let idx = self.clauses.len();
                    self.watches[lits[0] as usize].push(idx);
                    self.watches[lits[1] as usize].push(idx);
                    self.clauses.push(lits);
                }
            }
        }
        self.original = self.clauses.len();
        // unit clauses are kept as one-literal clauses so the satisfied
        // check in `pick` sees them
        for &u in &units {
            match self.lit_value(u) {
                0 => return false,
                1 => {}
                _ => self.assign(u, None),
            }
        }
        self.propagate().is_none()
    }

    /// Unit propagation; returns the index of a conflicting clause.
    fn propagate(&mut self) -> Option<usize> {
        while self.head < self.trail.len() {
            let false_lit = self.trail[self.head] ^ 1;
            self.head += 1;
            let mut watchers = std::mem::take(&mut self.watches[false_lit as usize]);
            let mut i = 0;
            let mut conflict = None;
            while i < watchers.len() {
                let ci = watchers[i];
                let clause = &mut self.clauses[ci];
                if clause[0] == false_lit {
                    clause.swap(0, 1);
                }
                let first = clause[0];
                if self.value[var_of(first)] != UNASSIGNED && self.value[var_of(first)] ^ (first & 1) as u8 == 1 {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let l = clause[k];
                    let val = self.value[var_of(l)];
                    if val == UNASSIGNED || val ^ (l & 1) as u8 == 1 {
                        clause.swap(1, k);
                        self.watches[clause[1] as usize].push(ci);
                        watchers.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                if self.lit_value(first) == 0 {
                    conflict = Some(ci);
                    break;
                }
                self.assign(first, Some(ci));
                i += 1;
            }
            let slot = &mut self.watches[false_lit as usize];
            watchers.append(slot);
            *slot = watchers;
            if conflict.is_some() {
                self.head = self.trail.len();
                return conflict;
            }
        }
        None
    }

    /// First-UIP analysis; returns the learned clause (asserting literal
    /// first) and the backjump level.
    fn analyze(&mut self, conflict: usize) -> (Vec<u32>, usize) {
        let mut learned = vec![0u32];
        let mut open = 0;
        let mut ci = conflict;
        let mut index = self.trail.len();
        let current = self.decision_level();
        let mut pivot: Option<u32> = None;
        loop {
            let clause = self.clauses[ci].clone();
            for &l in &clause {
                if Some(l) == pivot {
                    continue;
                }
                let v = var_of(l);
                if self.seen[v] || self.level[v] == 0 {
                    continue;
                }
                self.seen[v] = true;
                self.activity[v] += self.bump;
                if self.level[v] == current {
                    open += 1;
                } else {
                    learned.push(l);
                }
            }
            loop {
                index -= 1;
                if self.seen[var_of(self.trail[index])] {
                    break;
                }
            }
            let p = self.trail[index];
            self.seen[var_of(p)] = false;
            open -= 1;
            if open == 0 {
                learned[0] = p ^ 1;
                break;
            }
            pivot = Some(p);
            ci = self.reason[var_of(p)].expect("implied literal has a reason");
        }
        for &l in &learned[1..] {
            self.seen[var_of(l)] = false;
        }
        self.bump /= 0.95;
        if self.bump > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.bump *= 1e-100;
        }
        let mut back = 0;
        if learned.len() > 1 {
            let mut best = 1;
            for k in 2..learned.len() {
                if self.level[var_of(learned[k])] > self.level[var_of(learned[best])] {
                    best = k;
                }
            }
            learned.swap(1, best);
            back = self.level[var_of(learned[1])];
        }
        (learned, back)
    }

    fn backjump(&mut self, level: usize) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level];
        for &l in &self.trail[start..] {
            self.value[var_of(l)] = UNASSIGNED;
            self.reason[var_of(l)] = None;
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level);
        self.head = start;
    }

    /// Next decision literal, or `None` when every input clause is already
    /// satisfied. Pure literals of the residual formula come first.
    fn pick(&self) -> Option<u32> {
        let mut polarity = vec![0u8; self.num_vars];
        let mut open = false;
        for clause in &self.clauses[..self.original] {
            if clause.iter().any(|&l| self.lit_value(l) == 1) {
                continue;
            }
            open = true;
            for &l in clause {
                if self.value[var_of(l)] == UNASSIGNED {
                    polarity[var_of(l)] |= 1 << (l & 1);
                }
            }
        }
        if !open {
            return None;
        }
        let mut best: Option<usize> = None;
        for (v, &pol) in polarity.iter().enumerate().take(self.num_vars) {
            match pol {
                0 => {}
                1 => return Some(code(v, false)),
                2 => return Some(code(v, true)),
                _ => {
                    if best.is_none_or(|b| self.activity[v] > self.activity[b]) {
                        best = Some(v);
                    }
                }
            }
        }
        // an open clause with no unassigned literal would have been a conflict
        best.map(|v| code(v, true))
    }

    fn check_time(&mut self) -> Result<(), Error> {
        self.ticks += 1;
        if self.ticks.is_multiple_of(64) {
            if let Some((deadline, budget)) = self.deadline {
                if Instant::now() >= deadline {
                    return Err(Error::Timeout(budget));
                }
            }
        }
        Ok(())
    }

    fn search(&mut self) -> Result<Option<Vec<bool>>, Error> {
        loop {
            if let Some(conflict) = self.propagate() {
                if self.decision_level() == 0 {
                    return Ok(None);
                }
                let (learned, back) = self.analyze(conflict);
                self.backjump(back);
                if learned.len() == 1 {
                    self.assign(learned[0], None);
                } else {
                    let idx = self.clauses.len();
                    self.watches[learned[0] as usize].push(idx);
                    self.watches[learned[1] as usize].push(idx);
                    let lit = learned[0];
                    self.clauses.push(learned);
                    self.assign(lit, Some(idx));
                }
                self.check_time()?;
                continue;
            }
            match self.pick() {
                None => {
                    return Ok(Some(self.value.iter().map(|&v| v == 1).collect()));
                }
                Some(lit) => {
                    self.check_time()?;
                    self.trail_lim.push(self.trail.len());
                    self.assign(lit, None);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Flavor;
    use crate::oracle::solve_exhaustive;

    fn inst(n: usize, mode: Mode, clauses: &[&[i64]]) -> CnfInstance {
        CnfInstance::from_dimacs_clauses(n, clauses, mode, Flavor::Multiset).unwrap()
    }

    #[test]
    fn all_positive_is_sat() {
        let i = inst(4, Mode::Sat, &[&[1, 2, 3], &[2, 3, 4], &[1, 4, 2]]);
        assert!(solve_dpll(&i).unwrap().is_sat());
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        // p_{i,j}: pigeon i in hole j, var = 2*i + j + 1
        let mut clauses: Vec<Vec<i64>> = (0..3).map(|i| vec![2 * i + 1, 2 * i + 2]).collect();
        for j in 0..2 {
            for a in 0..3 {
                for b in a + 1..3 {
                    clauses.push(vec![-(2 * a + j + 1), -(2 * b + j + 1)]);
                }
            }
        }
        let refs: Vec<&[i64]> = clauses.iter().map(|c| c.as_slice()).collect();
        let i = inst(6, Mode::Sat, &refs);
        assert!(!solve_dpll(&i).unwrap().is_sat());
    }

    #[test]
    fn nae_uses_negated_copies() {
        // x1 = x2 = x3 forced by two-literal nae clauses, then {x1,x2,x3} fails
        let i = inst(3, Mode::Nae, &[&[1, -2], &[2, -3], &[1, 2, 3]]);
        assert!(!solve_dpll(&i).unwrap().is_sat());
        assert!(!solve_exhaustive(&i).unwrap().is_sat());
        let j = inst(3, Mode::Nae, &[&[1, 2, 3]]);
        let r = solve_dpll(&j).unwrap();
        assert!(j.is_satisfied_by(r.model.as_ref().unwrap()));
    }

    #[test]
    fn empty_clause_and_tautology() {
        let i = CnfInstance::new(1, vec![crate::formula::Clause::new(vec![])], Mode::Sat, Flavor::Set).unwrap();
        assert!(!solve_dpll(&i).unwrap().is_sat());
        let t = inst(1, Mode::Sat, &[&[1, -1]]);
        assert!(solve_dpll(&t).unwrap().is_sat());
    }

    #[test]
    fn contradictory_units() {
        let i = inst(2, Mode::Sat, &[&[1], &[-1, 2], &[-2]]);
        assert!(!solve_dpll(&i).unwrap().is_sat());
    }
}
