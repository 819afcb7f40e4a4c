//! Search for unsatisfiable Monotone 3-Sat-(p,q) instances.
//!
//! Small `n` are enumerated exhaustively: positive sides as sorted clause
//! lists whose variables first occur in increasing order (every instance
//! has such a relabeling), negative sides as all sorted clause lists.
//! Satisfiability is a bitwise AND over the 2^n assignments, clause by
//! clause along the enumeration tree. Larger `n` are sampled at random and
//! decided by DPLL. Runs below the counting bounds for (3,1) and (4,1) are
//! skipped since every such instance is satisfiable.

use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Error;
use crate::formula::{negate_rename, Clause, CnfInstance, Flavor, Mode, Var};
use crate::generate;
use crate::oracle::{enum_cap, solve_dpll, solve_dpll_with, solve_exhaustive_with};
use crate::variant::{first_violation, VariantSpec};

use super::known::{known_unsat, KnownUnsat};

/// An instance as sorted (negated, triple) pairs, for counting classes.
type Shape = Vec<(bool, Triple)>;

/// Largest `n` the bitset enumeration supports.
pub const MAX_EXHAUSTIVE_N: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SearchProfile {
    pub p: u32,
    pub q: u32,
}

impl SearchProfile {
    pub const SUPPORTED: [(u32, u32); 4] = [(2, 2), (3, 1), (4, 1), (5, 1)];

    pub fn new(p: u32, q: u32) -> Result<SearchProfile, Error> {
        if !Self::SUPPORTED.contains(&(p, q)) {
            return Err(Error::InputSpec(format!("unsupported search profile ({p},{q})")));
        }
        Ok(SearchProfile { p, q })
    }

    /// Smallest `n` that can be unsatisfiable according to the counting
    /// bounds, where one is known.
    pub fn lower_bound(self) -> Option<usize> {
        match (self.p, self.q) {
            (4, 1) => Some(21),
            (3, 1) => Some(27),
            _ => None,
        }
    }

    /// Both sides split into triples.
    pub fn admits(self, n: usize) -> bool {
        n > 0 && (n * self.p as usize).is_multiple_of(3) && (n * self.q as usize).is_multiple_of(3)
    }

    pub fn spec(self) -> VariantSpec {
        VariantSpec::monotone_pq(self.p, self.q)
    }
}

impl fmt::Display for SearchProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl FromStr for SearchProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (p, q) = t
            .split_once(',')
            .ok_or_else(|| Error::InputSpec(format!("profile {s:?} is not P,Q")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<u32>()
                .map_err(|_| Error::InputSpec(format!("profile {s:?} is not P,Q")))
        };
        SearchProfile::new(parse(p)?, parse(q)?)
    }
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub profile: SearchProfile,
    pub min_n: usize,
    pub max_n: usize,
    pub seed: u64,
    /// Wall-clock limit for the whole search.
    pub timeout: Option<Duration>,
    /// Candidate limit per `n`; random runs default to 1000 when absent.
    pub max_candidates: Option<u64>,
    /// Enumerate exhaustively up to this `n` (at most [`MAX_EXHAUSTIVE_N`]).
    pub exhaustive_max_n: usize,
    /// Count isomorphism classes (lexicographically least relabeling) up
    /// to this `n`.
    pub classes_max_n: usize,
    /// Skip `n` below the counting bound of the profile.
    pub respect_bounds: bool,
    /// For (5,1), try the gadget-built witness first.
    pub seed_from_gadgets: bool,
    /// JSON-lines progress file.
    pub journal: Option<PathBuf>,
}

impl SearchConfig {
    pub fn new(profile: SearchProfile, max_n: usize) -> SearchConfig {
        SearchConfig {
            profile,
            min_n: 3,
            max_n,
            seed: 0,
            timeout: None,
            max_candidates: None,
            exhaustive_max_n: 9,
            classes_max_n: 6,
            respect_bounds: true,
            seed_from_gadgets: true,
            journal: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    Exhaustive,
    Random,
    /// Every instance at this `n` is satisfiable by the counting bound.
    SkippedByBound,
    /// The gadget-built witness, tried before the runs.
    Seeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSummary {
    pub n: usize,
    pub mode: RunMode,
    /// Candidates decided.
    pub candidates: u64,
    /// Distinct instances up to relabeling, when counted.
    pub classes: Option<u64>,
    /// The whole space at this `n` was covered.
    pub exhausted: bool,
    pub unsat_found: bool,
    pub elapsed_ms: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub profile: SearchProfile,
    pub found: Option<CnfInstance>,
    pub runs: Vec<RunSummary>,
    pub timed_out: bool,
}

impl SearchOutcome {
    /// One line per run, claiming no more than what the run covered.
    pub fn claims(&self) -> Vec<String> {
        self.runs
            .iter()
            .map(|r| {
                let n = r.n;
                match r.mode {
                    _ if r.unsat_found => format!("n={n}: unsatisfiable instance found"),
                    RunMode::Seeded => format!("n={n}: gadget-built witness is satisfiable"),
                    RunMode::SkippedByBound => format!("n={n}: skipped, satisfiable by the counting bound"),
                    RunMode::Exhaustive if r.exhausted => {
                        let classes = r.classes.map(|c| format!(", {c} up to relabeling")).unwrap_or_default();
                        format!("n={n}: exhausted, all {} candidates satisfiable{classes}", r.candidates)
                    }
                    RunMode::Exhaustive => format!(
                        "n={n}: budget reached after {} candidates, all satisfiable; not exhausted",
                        r.candidates
                    ),
                    RunMode::Random => format!(
                        "n={n}: {} random candidates satisfiable; no claim about the rest",
                        r.candidates
                    ),
                }
            })
            .collect()
    }
}

struct Journal(Option<Mutex<BufWriter<File>>>);

impl Journal {
    fn open(path: &Option<PathBuf>) -> Result<Journal, Error> {
        Ok(Journal(match path {
            Some(p) => {
                Some(Mutex::new(BufWriter::new(File::create(p).map_err(|e| {
                    Error::InputSpec(format!("journal {}: {e}", p.display()))
                })?)))
            }
            None => None,
        }))
    }

    fn log(&self, event: serde_json::Value) {
        if let Some(w) = &self.0 {
            let mut w = w.lock().expect("journal lock");
            let _ = writeln!(w, "{event}");
            let _ = w.flush();
        }
    }
}

struct Budget {
    start: Instant,
    timeout: Option<Duration>,
    stop: AtomicBool,
}

impl Budget {
    fn expired(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return true;
        }
        if self.timeout.is_some_and(|t| self.start.elapsed() >= t) {
            self.stop.store(true, Ordering::Relaxed);
            return true;
        }
        false
    }
}

pub fn search_unsat(config: &SearchConfig) -> Result<SearchOutcome, Error> {
    let profile = config.profile;
    let journal = Journal::open(&config.journal)?;
    let budget = Budget {
        start: Instant::now(),
        timeout: config.timeout,
        stop: AtomicBool::new(false),
    };
    journal.log(
        json!({"event": "start", "profile": profile.to_string(), "min_n": config.min_n,
        "max_n": config.max_n, "seed": config.seed}),
    );
    let mut outcome = SearchOutcome {
        profile,
        found: None,
        runs: Vec::new(),
        timed_out: false,
    };

    if config.seed_from_gadgets && (profile.p, profile.q) == (5, 1) {
        let t = Instant::now();
        let candidate = known_unsat(KnownUnsat::Mon51);
        let found = certify_find(&candidate, profile)?;
        outcome.runs.push(RunSummary {
            n: candidate.num_vars(),
            mode: RunMode::Seeded,
            candidates: 1,
            classes: None,
            exhausted: false,
            unsat_found: found,
            elapsed_ms: t.elapsed().as_millis(),
        });
        if found {
            outcome.found = Some(candidate);
        }
    }

    for n in config.min_n.max(1)..=config.max_n {
        if outcome.found.is_some() {
            break;
        }
        if !profile.admits(n) {
            continue;
        }
        if budget.expired() {
            outcome.timed_out = true;
            break;
        }
        let t = Instant::now();
        let skip = config.respect_bounds && profile.lower_bound().is_some_and(|b| n < b);
        let exhaustive = n <= config.exhaustive_max_n.min(MAX_EXHAUSTIVE_N);
        let (run, found) = if skip {
            (
                RunSummary {
                    n,
                    mode: RunMode::SkippedByBound,
                    candidates: 0,
                    classes: None,
                    exhausted: false,
                    unsat_found: false,
                    elapsed_ms: 0,
                },
                None,
            )
        } else if exhaustive {
            exhaustive_run(n, config, &budget, &journal)?
        } else {
            random_run(n, config, &budget, &journal)?
        };
        let run = RunSummary {
            elapsed_ms: t.elapsed().as_millis(),
            ..run
        };
        journal.log(json!({"event": "done", "n": n, "run": run}));
        outcome.runs.push(run);
        if let Some(inst) = found {
            outcome.found = Some(inst);
        }
        if budget.expired() {
            outcome.timed_out = true;
        }
    }
    journal.log(json!({"event": "end", "found": outcome.found.is_some(), "timed_out": outcome.timed_out}));
    Ok(outcome)
}

/// Passes the profile's variant check and is unsatisfiable by two solve
/// paths (DPLL, then enumeration or DPLL on the polarity-flipped image).
fn certify_find(candidate: &CnfInstance, profile: SearchProfile) -> Result<bool, Error> {
    if first_violation(candidate, &profile.spec()).is_some() {
        return Ok(false);
    }
    if solve_dpll(candidate)?.is_sat() {
        return Ok(false);
    }
    let second = if candidate.num_vars() <= enum_cap() {
        solve_exhaustive_with(candidate, enum_cap())?
    } else {
        let all: Vec<Var> = candidate.vars().collect();
        solve_dpll_with(&negate_rename(candidate, &all), None)?
    };
    Ok(!second.is_sat())
}

type Triple = [u8; 3];

/// Sorted lists of `n * d / 3` triples over `0..n`, every variable in
/// exactly `d` of them. With `first_occurrence`, unseen variables enter in
/// increasing order. `visit` returns false to stop.
fn hypergraphs(n: usize, d: u32, first_occurrence: bool, visit: &mut dyn FnMut(&[Triple]) -> bool) {
    let mut left = vec![d; n];
    let mut list = Vec::with_capacity(n * d as usize / 3);
    hyper_rec(&mut left, &mut list, 0, first_occurrence, visit);
}

fn hyper_rec(
    left: &mut [u32],
    list: &mut Vec<Triple>,
    seen: u8,
    first_occurrence: bool,
    visit: &mut dyn FnMut(&[Triple]) -> bool,
) -> bool {
    // In a sorted list the next triple starts with the least variable that
    // still needs appearances.
    let Some(a) = left.iter().position(|&l| l > 0) else {
        return visit(list);
    };
    let n = left.len();
    let a8 = a as u8;
    for b in a + 1..n {
        if left[b] == 0 {
            continue;
        }
        for c in b + 1..n {
            if left[c] == 0 {
                continue;
            }
            let t = [a8, b as u8, c as u8];
            if list.last().is_some_and(|last| *last > t) {
                continue;
            }
            let mut next_seen = seen.max(a8 + 1);
            if first_occurrence {
                let ok = |v: u8, s: &mut u8| {
                    if v < *s {
                        true
                    } else if v == *s {
                        *s += 1;
                        true
                    } else {
                        false
                    }
                };
                if !ok(b as u8, &mut next_seen) || !ok(c as u8, &mut next_seen) {
                    continue;
                }
            }
            left[a] -= 1;
            left[b] -= 1;
            left[c] -= 1;
            list.push(t);
            let go_on = hyper_rec(left, list, next_seen, first_occurrence, visit);
            list.pop();
            left[a] += 1;
            left[b] += 1;
            left[c] += 1;
            if !go_on {
                return false;
            }
        }
    }
    true
}

/// Assignment sets as bit vectors over the 2^n assignments.
struct Tables {
    words: usize,
    n: usize,
}

impl Tables {
    fn full(&self) -> Vec<u64> {
        let mut v = vec![u64::MAX; self.words];
        let total = 1usize << self.n;
        if total < 64 {
            v[0] = (1u64 << total) - 1;
        }
        v
    }

    /// Assignments satisfying the triple as a positive (or negative) clause.
    fn clause(&self, t: Triple, negative: bool) -> Vec<u64> {
        let mut v = vec![0u64; self.words];
        for s in 0..1usize << self.n {
            let bit = |x: u8| s >> x & 1 == 1;
            let any = if negative {
                !bit(t[0]) || !bit(t[1]) || !bit(t[2])
            } else {
                bit(t[0]) || bit(t[1]) || bit(t[2])
            };
            if any {
                v[s / 64] |= 1 << (s % 64);
            }
        }
        v
    }
}

fn index3(n: usize, t: Triple) -> usize {
    (t[0] as usize * n + t[1] as usize) * n + t[2] as usize
}

fn exhaustive_run(
    n: usize,
    config: &SearchConfig,
    budget: &Budget,
    journal: &Journal,
) -> Result<(RunSummary, Option<CnfInstance>), Error> {
    let profile = config.profile;
    let tables = Tables {
        words: (1usize << n).div_ceil(64),
        n,
    };
    let mut pos_table = vec![Vec::new(); n * n * n];
    let mut neg_table = vec![Vec::new(); n * n * n];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let t = [a as u8, b as u8, c as u8];
                pos_table[index3(n, t)] = tables.clause(t, false);
                neg_table[index3(n, t)] = tables.clause(t, true);
            }
        }
    }
    let mut positive_sides = Vec::new();
    hypergraphs(n, profile.p, true, &mut |l| {
        positive_sides.push(l.to_vec());
        true
    });
    journal.log(json!({"event": "run", "n": n, "mode": "exhaustive", "positive_sides": positive_sides.len()}));

    let candidates = AtomicU64::new(0);
    let done = AtomicU64::new(0);
    let limit = config.max_candidates.unwrap_or(u64::MAX);
    let classes: Option<Mutex<HashSet<Shape>>> = (n <= config.classes_max_n).then(|| Mutex::new(HashSet::new()));
    let total_sides = positive_sides.len();

    let hit = positive_sides.par_iter().find_map_first(|pos| {
        if budget.expired() {
            return None;
        }
        let mut base = tables.full();
        for &t in pos {
            and_into(&mut base, &pos_table[index3(n, t)]);
        }
        let mut stack: Vec<Vec<u64>> = vec![base];
        let mut found = None;
        let mut local_classes = Vec::new();
        let mut left = vec![profile.q; n];
        let mut list = Vec::new();
        let completed = neg_rec(&mut left, &mut list, &mut stack, &neg_table, n, &mut |negs, sat| {
            let count = candidates.fetch_add(1, Ordering::Relaxed) + 1;
            if classes.is_some() {
                local_classes.push(canonical(n, pos, negs));
            }
            if !sat {
                found = Some(negs.to_vec());
                return false;
            }
            if count >= limit {
                budget.stop.store(true, Ordering::Relaxed);
                return false;
            }
            !count.is_multiple_of(1024) || !budget.expired()
        });
        if let Some(set) = &classes {
            set.lock().expect("class set").extend(local_classes);
        }
        if completed {
            let d = done.fetch_add(1, Ordering::Relaxed) + 1;
            journal.log(json!({"event": "progress", "n": n, "positive_sides_done": d,
                "positive_sides_total": total_sides, "candidates": candidates.load(Ordering::Relaxed)}));
        }
        found.map(|negs| build_instance(n, pos, &negs))
    });

    let candidates = candidates.into_inner();
    let exhausted = done.into_inner() as usize == total_sides && hit.is_none();
    let found = match hit {
        Some(inst) if certify_find(&inst, profile)? => Some(inst),
        Some(inst) => {
            return Err(Error::InvalidModel {
                clause: inst.num_clauses(),
            })
        }
        None => None,
    };
    let run = RunSummary {
        n,
        mode: RunMode::Exhaustive,
        candidates,
        classes: classes.map(|c| c.into_inner().expect("class set").len() as u64),
        exhausted,
        unsat_found: found.is_some(),
        elapsed_ms: 0,
    };
    Ok((run, found))
}

fn and_into(acc: &mut [u64], other: &[u64]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a &= b;
    }
}

/// Negative-side enumeration sharing the running intersection along the
/// tree. `leaf` gets the clause list and whether the candidate is
/// satisfiable; it returns false to stop.
fn neg_rec(
    left: &mut [u32],
    list: &mut Vec<Triple>,
    stack: &mut Vec<Vec<u64>>,
    table: &[Vec<u64>],
    n: usize,
    leaf: &mut dyn FnMut(&[Triple], bool) -> bool,
) -> bool {
    let Some(a) = left.iter().position(|&l| l > 0) else {
        let sat = stack.last().expect("base").iter().any(|&w| w != 0);
        return leaf(list, sat);
    };
    for b in a + 1..n {
        if left[b] == 0 {
            continue;
        }
        for c in b + 1..n {
            if left[c] == 0 {
                continue;
            }
            let t = [a as u8, b as u8, c as u8];
            if list.last().is_some_and(|last| *last > t) {
                continue;
            }
            let mut next = stack.last().expect("base").clone();
            and_into(&mut next, &table[index3(n, t)]);
            stack.push(next);
            left[a] -= 1;
            left[b] -= 1;
            left[c] -= 1;
            list.push(t);
            let go_on = neg_rec(left, list, stack, table, n, leaf);
            list.pop();
            left[a] += 1;
            left[b] += 1;
            left[c] += 1;
            stack.pop();
            if !go_on {
                return false;
            }
        }
    }
    true
}

/// Lexicographically least signed clause list over all relabelings.
fn canonical(n: usize, pos: &[Triple], neg: &[Triple]) -> Vec<(bool, Triple)> {
    let mut perm: Vec<u8> = (0..n as u8).collect();
    let mut best: Option<Vec<(bool, Triple)>> = None;
    let mut image = Vec::with_capacity(pos.len() + neg.len());
    loop {
        image.clear();
        for (negated, side) in [(false, pos), (true, neg)] {
            for t in side {
                let mut m = [perm[t[0] as usize], perm[t[1] as usize], perm[t[2] as usize]];
                m.sort_unstable();
                image.push((negated, m));
            }
        }
        image.sort_unstable();
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [u8]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn build_instance(n: usize, pos: &[Triple], neg: &[Triple]) -> CnfInstance {
    let lit = |v: u8, negated: bool| crate::formula::Lit::new(Var(v as u32), negated);
    let clauses = pos
        .iter()
        .map(|t| Clause::new(t.iter().map(|&v| lit(v, false)).collect()))
        .chain(
            neg.iter()
                .map(|t| Clause::new(t.iter().map(|&v| lit(v, true)).collect())),
        )
        .collect();
    CnfInstance::new(n, clauses, Mode::Sat, Flavor::Set).expect("variables in range")
}

const DEFAULT_RANDOM_CANDIDATES: u64 = 1000;

fn random_run(
    n: usize,
    config: &SearchConfig,
    budget: &Budget,
    journal: &Journal,
) -> Result<(RunSummary, Option<CnfInstance>), Error> {
    let profile = config.profile;
    let limit = config.max_candidates.unwrap_or(DEFAULT_RANDOM_CANDIDATES);
    journal.log(json!({"event": "run", "n": n, "mode": "random", "limit": limit}));
    let decided = AtomicU64::new(0);
    let seed = config.seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let hit = (0..limit).into_par_iter().find_map_first(|i| {
        if budget.expired() {
            return None;
        }
        let mut rng = generate::rng(seed.wrapping_add(i));
        let inst = generate::monotone_pq(n, profile.p, profile.q, &mut rng).ok()?;
        let sat = solve_dpll(&inst).ok()?.is_sat();
        let d = decided.fetch_add(1, Ordering::Relaxed) + 1;
        if d.is_multiple_of(256) {
            journal.log(json!({"event": "progress", "n": n, "candidates": d}));
        }
        (!sat).then_some(inst)
    });
    let found = match hit {
        Some(inst) if certify_find(&inst, profile)? => Some(inst),
        _ => None,
    };
    let run = RunSummary {
        n,
        mode: RunMode::Random,
        candidates: decided.into_inner(),
        classes: None,
        exhausted: false,
        unsat_found: found.is_some(),
        elapsed_ms: 0,
    };
    Ok((run, found))
}
