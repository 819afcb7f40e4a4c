//! Smallest set of positive 3-clauses meeting every member of U_n, by
//! branch and bound.
//!
//! A clause only matters if it picks one variable from each of three
//! distinct triples; it then lies inside exactly 3^(k-3) transversals, so
//! covering all 3^k of them needs at least 27 clauses.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::formula::Var;

/// Node limit used when the caller gives none.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HittingSet {
    pub n: usize,
    pub size: usize,
    /// One optimal set, each clause as three variables.
    pub clauses: Vec<[Var; 3]>,
    /// Branch-and-bound nodes visited.
    pub nodes: u64,
}

struct Problem {
    k: usize,
    /// For every transversal (base-3 index), the clauses inside it.
    clauses_of: Vec<Vec<usize>>,
    /// For every clause, the transversals it lies inside.
    members_of: Vec<Vec<usize>>,
    clause_vars: Vec<[Var; 3]>,
    per_clause: usize,
}

impl Problem {
    fn new(k: usize) -> Problem {
        let size = 3usize.pow(k as u32);
        let mut clause_vars = Vec::new();
        let mut index = std::collections::HashMap::new();
        for a in 0..k {
            for b in a + 1..k {
                for c in b + 1..k {
                    for da in 0..3 {
                        for db in 0..3 {
                            for dc in 0..3 {
                                index.insert((a, b, c, da, db, dc), clause_vars.len());
                                clause_vars.push([
                                    Var((3 * a + da) as u32),
                                    Var((3 * b + db) as u32),
                                    Var((3 * c + dc) as u32),
                                ]);
                            }
                        }
                    }
                }
            }
        }
        let mut clauses_of = vec![Vec::new(); size];
        let mut members_of = vec![Vec::new(); clause_vars.len()];
        for (x, list) in clauses_of.iter_mut().enumerate() {
            let digits: Vec<usize> = (0..k).map(|t| x / 3usize.pow(t as u32) % 3).collect();
            for a in 0..k {
                for b in a + 1..k {
                    for c in b + 1..k {
                        let id = index[&(a, b, c, digits[a], digits[b], digits[c])];
                        list.push(id);
                        members_of[id].push(x);
                    }
                }
            }
        }
        Problem {
            k,
            clauses_of,
            members_of,
            clause_vars,
            per_clause: 3usize.pow(k.saturating_sub(3) as u32),
        }
    }

    fn greedy(&self) -> Vec<usize> {
        let mut hit = vec![false; self.clauses_of.len()];
        let mut chosen = Vec::new();
        while let Some(x) = hit.iter().position(|h| !h) {
            let best = *self.clauses_of[x]
                .iter()
                .max_by_key(|&&c| self.members_of[c].iter().filter(|&&m| !hit[m]).count())
                .expect("k >= 3");
            for &m in &self.members_of[best] {
                hit[m] = true;
            }
            chosen.push(best);
        }
        chosen
    }
}

struct Search<'a> {
    p: &'a Problem,
    hits: Vec<u32>,
    uncovered: usize,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn toggle(&mut self, c: usize, add: bool) {
        for &m in &self.p.members_of[c] {
            if add {
                if self.hits[m] == 0 {
                    self.uncovered -= 1;
                }
                self.hits[m] += 1;
            } else {
                self.hits[m] -= 1;
                if self.hits[m] == 0 {
                    self.uncovered += 1;
                }
            }
        }
    }

    fn run(&mut self) -> Result<(), Error> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget(format!(
                "hitting-set search exceeded {} nodes",
                self.budget
            )));
        }
        if self.uncovered == 0 {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return Ok(());
        }
        let bound = self.chosen.len() + self.uncovered.div_ceil(self.p.per_clause);
        if bound >= self.best.len() {
            return Ok(());
        }
        let x = self.hits.iter().position(|&h| h == 0).expect("something uncovered");
        for i in 0..self.p.clauses_of[x].len() {
            let c = self.p.clauses_of[x][i];
            self.toggle(c, true);
            self.chosen.push(c);
            self.run()?;
            self.chosen.pop();
            self.toggle(c, false);
        }
        Ok(())
    }
}

/// Exact minimum for `n` variables (a multiple of 3, at least 9: below that
/// U_n has empty members and no clause set can meet them).
pub fn min_transversal_hitting_set(n: usize, node_budget: u64) -> Result<HittingSet, Error> {
    if !n.is_multiple_of(3) {
        return Err(Error::Divisibility(format!("n = {n} is not a multiple of 3")));
    }
    if n < 9 {
        return Err(Error::Unhittable(format!(
            "with {} triple(s) a transversal has no 3-subset, so U_{n} contains the empty set",
            n / 3
        )));
    }
    let k = n / 3;
    if k > 6 {
        return Err(Error::Budget(format!(
            "n = {n} is beyond the exact search (at most 18 variables)"
        )));
    }
    let p = Problem::new(k);
    let mut s = Search {
        p: &p,
        hits: vec![0; p.clauses_of.len()],
        uncovered: p.clauses_of.len(),
        chosen: Vec::new(),
        best: p.greedy(),
        nodes: 0,
        budget: node_budget,
    };
    s.run()?;
    let mut clauses: Vec<[Var; 3]> = s.best.iter().map(|&c| p.clause_vars[c]).collect();
    clauses.sort();
    Ok(HittingSet {
        n: 3 * p.k,
        size: clauses.len(),
        clauses,
        nodes: s.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_needs_every_transversal_clause() {
        let h = min_transversal_hitting_set(9, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(h.size, 27);
    }

    #[test]
    fn small_n_is_unhittable() {
        assert!(matches!(min_transversal_hitting_set(3, 10), Err(Error::Unhittable(_))));
        assert!(matches!(
            min_transversal_hitting_set(7, 10),
            Err(Error::Divisibility(_))
        ));
    }
}
