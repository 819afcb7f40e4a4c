//! Acceptance suite: one PASS/FAIL line per criterion, written to stderr
//! directly so the lines show even when the harness captures output.

use std::io::Write as _;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use satgadgets::dimacs::emit_dimacs;
use satgadgets::gadgets::{verify_all, GadgetKind};
use satgadgets::generate::{self, input_for};
use satgadgets::oracle::{solve_dpll, solve_dpll_with, solve_exhaustive, OracleConfig};
use satgadgets::reductions::{apply_reduction, check_certificate, validate_output, Params, ReductionId};
use satgadgets::witnesses::*;
use satgadgets::{Clause, CnfInstance, Flavor, Mode, Var};

/// Pinned budgets.
const GADGET_BUDGET: Duration = Duration::from_secs(30);
const MON51_BUDGET: Duration = Duration::from_secs(60);
const SEARCH_BUDGET: Duration = Duration::from_secs(120);
const INPUTS_PER_ROW: u64 = 50;
const CANONICAL_CORPUS: u64 = 200;
const BOUND_CORPUS: u64 = 500;

const ROWS: [ReductionId; 13] = [
    ReductionId::R1,
    ReductionId::R2,
    ReductionId::R3,
    ReductionId::R4,
    ReductionId::R5,
    ReductionId::R6,
    ReductionId::R7,
    ReductionId::R8,
    ReductionId::R9,
    ReductionId::R11,
    ReductionId::R12,
    ReductionId::R13,
    ReductionId::R14,
];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fano() -> CnfInstance {
    CnfInstance::from_dimacs_clauses(
        7,
        &[
            &[1, 2, 3],
            &[1, 4, 5],
            &[1, 6, 7],
            &[2, 4, 6],
            &[2, 5, 7],
            &[3, 4, 7],
            &[3, 5, 6],
        ],
        Mode::Nae,
        Flavor::Set,
    )
    .unwrap()
}

/// Random inputs per row (sizes 3 to 12, k cycling through 2..=4 where the
/// row takes a parameter) plus the unsatisfiable inputs each row admits.
fn corpus(id: ReductionId) -> Vec<CnfInstance> {
    let mut out: Vec<CnfInstance> = (0..INPUTS_PER_ROW)
        .map(|i| {
            let n = 3 * (1 + i as usize % 4);
            let k = 2 + (i % 3) as u32;
            input_for(id, n, k, &mut generate::rng(1000 * id as u64 + i)).unwrap()
        })
        .collect();
    let nine = known_unsat(KnownUnsat::NineVar);
    match id {
        ReductionId::R1 | ReductionId::R2 => out.push(fano()),
        ReductionId::R6 | ReductionId::R9 => {
            out.push(nine);
            out.push(known_unsat(KnownUnsat::SsBar));
        }
        _ => {}
    }
    out
}

/// A minimum hitting set over `base.len()` triples, relabeled at random,
/// maybe missing one clause and padded with a few random transversal
/// clauses. Unsatisfiable whenever nothing was dropped.
fn near_hitting(base: &[[Var; 3]], k: usize, seed: u64) -> (CnfInstance, bool) {
    let mut rng = generate::rng(seed);
    let mut order: Vec<u32> = (0..k as u32).collect();
    order.shuffle(&mut rng);
    let perms: Vec<Vec<u32>> = (0..k)
        .map(|_| {
            let mut p = vec![0, 1, 2];
            p.shuffle(&mut rng);
            p
        })
        .collect();
    let relabel = |v: Var| {
        let (t, d) = (v.0 / 3, v.0 % 3);
        Var(3 * order[t as usize] + perms[t as usize][d as usize])
    };
    let mut clauses: Vec<Clause> = (0..k as u32)
        .map(|t| Clause::new((0..3).map(|i| Var(3 * t + i).neg()).collect()))
        .collect();
    let mut positive: Vec<Clause> = base
        .iter()
        .map(|c| Clause::new(c.iter().map(|&v| relabel(v).pos()).collect()))
        .collect();
    let dropped = rng.gen_bool(0.5);
    if dropped {
        let i = rng.gen_range(0..positive.len());
        positive.remove(i);
    }
    for _ in 0..rng.gen_range(0..4) {
        let mut ts: Vec<u32> = (0..k as u32).collect();
        ts.shuffle(&mut rng);
        positive.push(Clause::new(
            ts[..3]
                .iter()
                .map(|&t| Var(3 * t + rng.gen_range(0..3)).pos())
                .collect(),
        ));
    }
    clauses.extend(positive);
    (
        CnfInstance::new(3 * k, clauses, Mode::Sat, Flavor::Set).unwrap(),
        dropped,
    )
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let results = verify_all();
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    for (kind, r) in &results {
        match r {
            Ok(r) if r.passed => {}
            Ok(r) => failures.push(format!("{kind}: {r}")),
            Err(e) => failures.push(format!("{kind}: {e}")),
        }
    }
    if results.len() != GadgetKind::ALL.len() {
        failures.push(format!(
            "{} rows verified, catalogue has {}",
            results.len(),
            GadgetKind::ALL.len()
        ));
    }
    if elapsed > GADGET_BUDGET {
        failures.push(format!("took {elapsed:?}, budget {GADGET_BUDGET:?}"));
    }
    if failures.is_empty() {
        Ok(format!("{} rows certified in {elapsed:.2?}", results.len()))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_2() -> Outcome {
    let mut notes = Vec::new();
    for (k, vars, clauses) in [
        (KnownUnsat::NineVar, 9, 18),
        (KnownUnsat::SsBar, 13, 26),
        (KnownUnsat::Hitting27, 9, 30),
    ] {
        let inst = known_unsat(k);
        if (inst.num_vars(), inst.num_clauses()) != (vars, clauses) {
            return Err(format!(
                "{k}: {} vars / {} clauses",
                inst.num_vars(),
                inst.num_clauses()
            ));
        }
        if solve_exhaustive(&inst).map_err(|e| e.to_string())?.is_sat() {
            return Err(format!("{k}: exhaustive oracle found a model"));
        }
        notes.push(format!("{k} UNSAT (2^{vars})"));
    }
    let mon = known_unsat(KnownUnsat::Mon51);
    if (mon.num_vars(), mon.num_clauses()) != (102, 204) {
        return Err(format!(
            "mon51: {} vars / {} clauses",
            mon.num_vars(),
            mon.num_clauses()
        ));
    }
    let start = Instant::now();
    let r = solve_dpll_with(&mon, Some(MON51_BUDGET)).map_err(|e| format!("mon51: {e}"))?;
    if r.is_sat() {
        return Err("mon51: DPLL found a model".into());
    }
    notes.push(format!("mon51 UNSAT by DPLL in {:.2?}", start.elapsed()));
    let c = certify_mon51_compositionally().map_err(|e| e.to_string())?;
    if !c.passed {
        return Err(format!("mon51 compositional: {c}"));
    }
    notes.push("mon51 UNSAT by F-forcing".into());
    Ok(notes.join(", "))
}

fn criterion_3() -> Outcome {
    let mut total = 0;
    for id in ROWS {
        for (i, input) in corpus(id).iter().enumerate() {
            let cert = apply_reduction(id, input, &Params::default()).map_err(|e| format!("{id} #{i}: {e}"))?;
            let r = validate_output(&cert);
            if !r.passed {
                return Err(format!("{id} #{i}: {r}"));
            }
            if !cert.accounts_for_every_variable() {
                return Err(format!("{id} #{i}: back map and gadget log miss a variable"));
            }
            let (n, m) = (input.num_vars(), input.num_clauses());
            let k = cert.k.unwrap_or(0) as usize;
            let expected = match id {
                ReductionId::R6 => Some((k + 1) * (m + 2 * n)),
                ReductionId::R8 => Some((k + 1) * (m + n) + 2 * (n / 3)),
                _ => None,
            };
            if let Some(e) = expected {
                if cert.output.num_clauses() != e {
                    return Err(format!(
                        "{id} #{i}: {} clauses, formula gives {e}",
                        cert.output.num_clauses()
                    ));
                }
            }
            total += 1;
        }
    }
    Ok(format!(
        "{total} outputs over {} rows, zero violations, R6/R8 sizes exact",
        ROWS.len()
    ))
}

fn criterion_4() -> Outcome {
    let config = OracleConfig::default();
    let (mut total, mut unsat) = (0, 0);
    for id in ROWS {
        for (i, input) in corpus(id).iter().enumerate() {
            let cert = apply_reduction(id, input, &Params::default()).map_err(|e| format!("{id} #{i}: {e}"))?;
            let r = check_certificate(&cert, &config).map_err(|e| format!("{id} #{i}: {e}"))?;
            if !r.passed {
                return Err(format!("{id} #{i}: {r}"));
            }
            total += 1;
            if matches!(
                r.witness,
                Some(satgadgets::report::Witness::Statuses { input_sat: false, .. })
            ) {
                unsat += 1;
            }
        }
    }
    Ok(format!(
        "{total} reductions agree ({unsat} unsatisfiable inputs), every output model pulled back"
    ))
}

fn criterion_5() -> Outcome {
    for n in (3..=15).step_by(3) {
        let f = TransversalFamily::new(n).unwrap();
        let count = f.members().count() as u128;
        if count != 3u128.pow(n as u32 / 3) {
            return Err(format!("|M_{n}| = {count}"));
        }
    }
    let f = TransversalFamily::new(12).unwrap();
    let mut clauses = 0;
    for a in 0..4u32 {
        for b in a + 1..4 {
            for c in b + 1..4 {
                for d in 0..27u32 {
                    let clause = [Var(3 * a + d % 3), Var(3 * b + d / 3 % 3), Var(3 * c + d / 9)];
                    let cov = f.coverage(&clause);
                    if cov != 3 {
                        return Err(format!("coverage of {clause:?} is {cov}, expected 3"));
                    }
                    clauses += 1;
                }
            }
        }
    }

    let mut corpus: Vec<CnfInstance> = (0..CANONICAL_CORPUS)
        .map(|i| {
            let k = 1 + i as usize % 5;
            // Clause counts straddle 27, where unsatisfiable instances start.
            let m = (i as usize * 7) % 60;
            generate::canonical_transversal(3 * k, m, &mut generate::rng(5000 + i)).unwrap()
        })
        .collect();
    corpus.push(known_unsat(KnownUnsat::Hitting27));
    // Instances at the edge of satisfiability, built from minimum hitting sets.
    let h9 = min_transversal_hitting_set(9, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    let h12 = min_transversal_hitting_set(12, DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    let mut must_be_unsat = vec![false; corpus.len()];
    must_be_unsat[corpus.len() - 1] = true;
    for i in 0..40 {
        let (base, k) = if i % 2 == 0 {
            (&h9.clauses, 3)
        } else {
            (&h12.clauses, 4)
        };
        let (inst, dropped) = near_hitting(base, k, 7000 + i);
        corpus.push(inst);
        must_be_unsat.push(!dropped);
    }
    let (mut agree, mut unsat, mut guaranteed) = (0, 0, 0);
    for (i, inst) in corpus.iter().enumerate() {
        let via = check_sat_via_transversal(inst, DEFAULT_TRANSVERSAL_CAP).map_err(|e| e.to_string())?;
        let truth = solve_exhaustive(inst).map_err(|e| e.to_string())?.is_sat();
        if via.passed != truth {
            return Err(format!(
                "instance {i}: transversal says {}, oracle says {truth}",
                via.passed
            ));
        }
        agree += 1;
        let bound = bound_satisfiable(inst).map_err(|e| e.to_string())?;
        if let Some(g) = bound {
            guaranteed += 1;
            if !truth {
                return Err(format!("instance {i}: {g:?} claimed for an unsatisfiable instance"));
            }
        }
        if must_be_unsat[i] && truth {
            return Err(format!("instance {i} contains a full hitting set yet is satisfiable"));
        }
        unsat += usize::from(!truth);
    }
    if h9.size != 27 {
        return Err(format!("min hitting set for n = 9 is {}", h9.size));
    }
    Ok(format!(
        "|M_n| ok for n <= 15, coverage 3 for all {clauses} clauses at n = 12, {agree} instances agree \
         ({unsat} unsat, {guaranteed} bound guarantees, none wrong), hitting set(9) = 27, hitting set(12) = {}",
        h12.size
    ))
}

fn criterion_6() -> Outcome {
    let mut counts = Vec::new();
    for (p, limit) in [(4u32, 21usize), (3, 27)] {
        let sizes: Vec<usize> = (3..limit).step_by(3).collect();
        for i in 0..BOUND_CORPUS {
            let n = sizes[i as usize % sizes.len()];
            let inst = generate::monotone_pq(n, p, 1, &mut generate::rng(9000 + 1000 * p as u64 + i)).unwrap();
            let r = solve_dpll(&inst).map_err(|e| e.to_string())?;
            assert!(
                r.is_sat(),
                "UNSATISFIABLE Monotone 3-Sat-({p},1) instance with n = {n} < {limit}; this contradicts the \
                 counting bound:\n{}",
                emit_dimacs(&inst)
            );
        }
        counts.push(format!("{BOUND_CORPUS} ({p},1) with n < {limit}"));
    }
    Ok(format!("{} all satisfiable", counts.join(" and ")))
}

fn criterion_7() -> Outcome {
    let profile = SearchProfile::new(2, 2).unwrap();
    let out = search_unsat(&SearchConfig::new(profile, 3)).map_err(|e| e.to_string())?;
    let r3 = &out.runs[0];
    if out.found.is_some() || !r3.exhausted || r3.unsat_found {
        return Err(format!("n = 3 run: {r3:?}"));
    }

    let journal = std::env::temp_dir().join(format!("satgadgets-acceptance-{}.jsonl", std::process::id()));
    let mut config = SearchConfig::new(profile, 9);
    config.timeout = Some(SEARCH_BUDGET);
    config.journal = Some(journal.clone());
    let out = search_unsat(&config).map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(&journal).map_err(|e| e.to_string())?;
    let _ = std::fs::remove_file(&journal);
    let done = text.lines().filter(|l| l.contains("\"event\":\"done\"")).count();
    if done != out.runs.len() {
        return Err(format!(
            "journal records {done} finished runs, outcome has {}",
            out.runs.len()
        ));
    }
    if out.timed_out {
        return Err(format!("budget of {SEARCH_BUDGET:?} reached"));
    }
    if out.found.is_some() {
        return Err("reported an unsatisfiable (2,2) instance".into());
    }
    // Claims stay within what was covered.
    for (run, claim) in out.runs.iter().zip(out.claims()) {
        if claim.contains("exhausted, all") && !run.exhausted {
            return Err(format!("over-claim: {claim}"));
        }
    }
    let covered: Vec<String> = out
        .runs
        .iter()
        .map(|r| {
            format!(
                "n={} {}{}",
                r.n,
                r.candidates,
                if r.exhausted { " exhausted" } else { "" }
            )
        })
        .collect();
    Ok(format!(
        "n = 3 exhausted, all satisfiable; n <= 9 within budget: {}",
        covered.join(", ")
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 7] = [
        ("gadget lemma suite", criterion_1),
        ("witness suite", criterion_2),
        ("reduction structure", criterion_3),
        ("equisatisfiability", criterion_4),
        ("transversal combinatorics", criterion_5),
        ("bound consistency", criterion_6),
        ("challenge scaffolding", criterion_7),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let line = match outcome {
            Ok(detail) => format!("criterion {} [{name}]: PASS ({secs:.1}s) {detail}\n", i + 1),
            Err(detail) => {
                failed.push(i + 1);
                format!("criterion {} [{name}]: FAIL ({secs:.1}s) {detail}\n", i + 1)
            }
        };
        // Bypasses the harness capture, unlike eprintln!.
        let _ = std::io::stderr().write_all(line.as_bytes());
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
