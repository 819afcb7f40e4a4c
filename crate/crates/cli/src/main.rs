//! `satgadgets` command-line front end.
//!
//! Exit codes: 0 on pass or a decided instance, 1 on a failed check or an
//! input outside the required variant, 2 on usage and I/O errors.

use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use satgadgets::dimacs::{emit_annotated, emit_dimacs, parse_annotated};
use satgadgets::gadgets::{verify_all, verify_gadget, GadgetKind};
use satgadgets::oracle::{enum_cap, solve_dpll_with, solve_exhaustive_with, OracleConfig, SolveResult};
use satgadgets::reductions::{apply_reduction, check_certificate, validate_output, Params, ReductionId};
use satgadgets::variant::validate;
use satgadgets::witnesses::{
    certify_mon51_compositionally, known_unsat, search_unsat, KnownUnsat, SearchConfig, SearchProfile,
};
use satgadgets::{CnfInstance, Error, VariantSpec, VerificationReport};

/// Version of the `--json` output layout.
const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "satgadgets",
    version,
    about = "Gadgets, reductions and oracles for restricted 3-SAT variants"
)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a DIMACS file against a variant spec.
    Check {
        /// Spec string such as `mono-sat-p3q3`; defaults to the file's `c variant` line.
        #[arg(long)]
        variant: Option<String>,
        /// DIMACS file, `-` for stdin.
        file: PathBuf,
    },
    /// Decide satisfiability.
    Solve {
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
        /// DPLL time limit in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        file: PathBuf,
    },
    /// Apply a reduction and write its output.
    Reduce {
        /// Reduction id, R1 to R14.
        #[arg(long)]
        id: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Write the certificate (back map and gadget log) as JSON.
        #[arg(long)]
        cert: Option<PathBuf>,
        /// Target parameter k; inferred from the input profile when omitted.
        #[arg(long)]
        k: Option<u32>,
        /// Unsatisfiable Monotone 3-Sat-(2,2) instance, needed by R10.
        #[arg(long)]
        unsat: Option<PathBuf>,
        /// Also decide both sides and pull back a model.
        #[arg(long)]
        verify: bool,
    },
    /// Gadget catalogue.
    Gadgets {
        #[command(subcommand)]
        action: GadgetAction,
    },
    /// Emit (or certify) an explicit unsatisfiable instance.
    Witness {
        /// ss_bar, nine_var, mon51 or hitting27.
        name: String,
        /// Write DIMACS here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print a certification report instead of the formula.
        #[arg(long)]
        certify: bool,
    },
    /// Search for unsatisfiable Monotone 3-Sat-(p,q) instances.
    SearchUnsat {
        /// One of 2,2 3,1 4,1 5,1.
        #[arg(long, default_value = "2,2")]
        profile: String,
        #[arg(long, default_value_t = 3)]
        min_n: usize,
        #[arg(long, default_value_t = 9)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Wall-clock limit in seconds for the whole search.
        #[arg(long)]
        timeout: Option<f64>,
        /// Candidate limit per n.
        #[arg(long)]
        max_candidates: Option<u64>,
        /// Enumerate exhaustively up to this n (at most 12).
        #[arg(long, default_value_t = 9)]
        exhaustive_max_n: usize,
        /// JSON-lines progress journal.
        #[arg(long)]
        journal: Option<PathBuf>,
        /// Also run n below the counting bounds.
        #[arg(long)]
        ignore_bounds: bool,
        /// Write an instance found to this DIMACS file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GadgetAction {
    /// List catalogue rows.
    List,
    /// Certify one row, or `ALL`.
    Verify { kind: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Exhaustive,
    Dpll,
    Auto,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            // An input outside the required variant is a violation, not misuse.
            let violation = matches!(e.downcast_ref::<Error>(), Some(Error::InputSpec(_)));
            ExitCode::from(if violation { 1 } else { 2 })
        }
    }
}

/// Returns whether the command passed.
fn run(cli: &Cli) -> Result<bool> {
    match &cli.command {
        Command::Check { variant, file } => check(cli, variant.as_deref(), file),
        Command::Solve { engine, timeout, file } => solve(cli, *engine, *timeout, file),
        Command::Reduce {
            id,
            input,
            out,
            cert,
            k,
            unsat,
            verify,
        } => reduce(cli, id, input, out, cert.as_deref(), *k, unsat.as_deref(), *verify),
        Command::Gadgets { action } => match action {
            GadgetAction::List => gadgets_list(cli),
            GadgetAction::Verify { kind } => gadgets_verify(cli, kind),
        },
        Command::Witness { name, out, certify } => witness(cli, name, out.as_deref(), *certify),
        Command::SearchUnsat {
            profile,
            min_n,
            max_n,
            seed,
            timeout,
            max_candidates,
            exhaustive_max_n,
            journal,
            ignore_bounds,
            out,
        } => {
            let mut config = SearchConfig::new(
                profile
                    .parse::<SearchProfile>()
                    .map_err(|e| anyhow!("--profile: {e}"))?,
                *max_n,
            );
            config.min_n = *min_n;
            config.seed = *seed;
            config.timeout = timeout.map(seconds).transpose()?;
            config.max_candidates = *max_candidates;
            config.exhaustive_max_n = *exhaustive_max_n;
            config.journal = journal.clone();
            config.respect_bounds = !ignore_bounds;
            search(cli, &config, out.as_deref())
        }
    }
}

fn seconds(s: f64) -> Result<Duration> {
    Duration::try_from_secs_f64(s).map_err(|e| anyhow!("bad timeout {s}: {e}"))
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn load(path: &Path) -> Result<(CnfInstance, Option<VariantSpec>)> {
    let parsed = parse_annotated(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok((parsed.instance, parsed.variant))
}

fn print_json(command: &str, body: Value) {
    let mut out = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    println!("{out}");
}

fn print_report(cli: &Cli, command: &str, report: &VerificationReport) {
    if cli.json {
        print_json(command, json!({ "report": report }));
    } else {
        println!("{report}");
    }
}

fn check(cli: &Cli, variant: Option<&str>, file: &Path) -> Result<bool> {
    let (instance, declared) = load(file)?;
    let spec = match variant {
        Some(s) => s.parse::<VariantSpec>()?,
        None => declared.ok_or_else(|| anyhow!("no --variant given and the file declares none"))?,
    };
    let mut report = validate(&instance, &spec);
    report.check = format!("variant {spec}");
    print_report(cli, "check", &report);
    Ok(report.passed)
}

fn solve(cli: &Cli, engine: Engine, timeout: Option<f64>, file: &Path) -> Result<bool> {
    let (instance, _) = load(file)?;
    let timeout = timeout.map(seconds).transpose()?;
    let cap = enum_cap();
    let engine = match engine {
        Engine::Auto if instance.num_vars() <= cap.min(20) => Engine::Exhaustive,
        Engine::Auto => Engine::Dpll,
        e => e,
    };
    let (name, result) = match engine {
        Engine::Exhaustive => ("exhaustive", solve_exhaustive_with(&instance, cap)),
        _ => ("dpll", solve_dpll_with(&instance, timeout)),
    };
    let result: SolveResult = match result {
        Ok(r) => r,
        Err(Error::Timeout(t)) => {
            if cli.json {
                print_json(
                    "solve",
                    json!({ "engine": name, "status": "unknown", "timeout_s": t.as_secs_f64() }),
                );
            } else {
                println!("UNKNOWN (timeout after {t:?})");
            }
            return Ok(false);
        }
        Err(e) => return Err(e.into()),
    };
    if cli.json {
        print_json(
            "solve",
            json!({ "engine": name, "status": result.status, "model": result.model }),
        );
    } else {
        println!("{}", result.status);
        if let Some(m) = &result.model {
            let lits: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .map(|(i, &b)| if b { format!("{}", i + 1) } else { format!("-{}", i + 1) })
                    .collect();
            println!("v {} 0", lits.join(" "));
        }
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn reduce(
    cli: &Cli,
    id: &str,
    input: &Path,
    out: &Path,
    cert_path: Option<&Path>,
    k: Option<u32>,
    unsat: Option<&Path>,
    verify: bool,
) -> Result<bool> {
    let id: ReductionId = id.parse()?;
    let (instance, _) = load(input)?;
    let params = Params {
        k,
        unsat: unsat.map(|p| load(p).map(|(i, _)| i)).transpose()?,
        oracle: OracleConfig::default(),
    };
    let cert = apply_reduction(id, &instance, &params)?;
    let spec = id.output_spec(cert.k.unwrap_or(0));
    write_text(out, &emit_annotated(&cert.output, Some(&spec)))?;
    if let Some(p) = cert_path {
        write_text(p, &serde_json::to_string_pretty(&cert)?)?;
    }
    let mut reports = vec![validate_output(&cert)];
    if verify {
        reports.push(check_certificate(&cert, &params.oracle)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    if cli.json {
        print_json(
            "reduce",
            json!({
                "id": id,
                "k": cert.k,
                "output_vars": cert.output.num_vars(),
                "output_clauses": cert.output.num_clauses(),
                "reports": reports,
            }),
        );
    } else {
        println!(
            "{id}: {} vars / {} clauses -> {} vars / {} clauses",
            instance.num_vars(),
            instance.num_clauses(),
            cert.output.num_vars(),
            cert.output.num_clauses()
        );
        for r in &reports {
            println!("{r}");
        }
    }
    Ok(passed)
}

fn gadgets_list(cli: &Cli) -> Result<bool> {
    let rows: Vec<Value> = GadgetKind::ALL
        .iter()
        .map(|k| {
            let i = k.info();
            json!({
                "kind": k.name(),
                "arity": i.arity,
                "aux": i.aux,
                "clauses": i.clauses,
                "mode": i.mode,
                "flavor": i.flavor,
                "accepts": format!("{:?}", i.accepts),
                "compositional": i.compositional,
            })
        })
        .collect();
    if cli.json {
        print_json("gadgets list", json!({ "gadgets": rows }));
    } else {
        println!(
            "{:<12} {:>5} {:>4} {:>7}  {:<4} accepts",
            "kind", "arity", "aux", "clauses", "mode"
        );
        for k in GadgetKind::ALL {
            let i = k.info();
            println!(
                "{:<12} {:>5} {:>4} {:>7}  {:<4} {:?}{}",
                k.name(),
                i.arity,
                i.aux,
                i.clauses,
                format!("{:?}", i.mode).to_lowercase(),
                i.accepts,
                if i.compositional { " (compositional)" } else { "" }
            );
        }
    }
    Ok(true)
}

fn gadgets_verify(cli: &Cli, kind: &str) -> Result<bool> {
    let results = if kind.eq_ignore_ascii_case("all") {
        verify_all()
    } else {
        let k: GadgetKind = kind.parse()?;
        vec![(k, verify_gadget(k))]
    };
    let mut reports = Vec::new();
    for (k, r) in results {
        reports.push(r.with_context(|| format!("verifying {k}"))?);
    }
    let passed = reports.iter().all(|r| r.passed);
    if cli.json {
        print_json("gadgets verify", json!({ "passed": passed, "reports": reports }));
    } else {
        for r in &reports {
            println!("{r}");
        }
    }
    Ok(passed)
}

fn certify_witness(which: KnownUnsat) -> Result<Vec<VerificationReport>> {
    let instance = known_unsat(which);
    let status = |engine: &str, r: SolveResult| {
        let check = format!("{which} unsatisfiable ({engine})");
        match r.model {
            None => VerificationReport::pass(check),
            Some(m) => VerificationReport::fail(check, satgadgets::report::Witness::Assignment { values: m.0 }),
        }
    };
    Ok(match which {
        KnownUnsat::Mon51 => vec![
            status("dpll", solve_dpll_with(&instance, Some(Duration::from_secs(60)))?),
            certify_mon51_compositionally()?,
        ],
        _ => vec![status("exhaustive", solve_exhaustive_with(&instance, enum_cap())?)],
    })
}

fn witness(cli: &Cli, name: &str, out: Option<&Path>, certify: bool) -> Result<bool> {
    let which: KnownUnsat = name.parse()?;
    let instance = known_unsat(which);
    if let Some(p) = out {
        write_text(p, &emit_dimacs(&instance))?;
    }
    if certify {
        let reports = certify_witness(which)?;
        let passed = reports.iter().all(|r| r.passed);
        if cli.json {
            print_json(
                "witness",
                json!({
                    "name": which,
                    "vars": instance.num_vars(),
                    "clauses": instance.num_clauses(),
                    "passed": passed,
                    "reports": reports,
                }),
            );
        } else {
            println!(
                "{which}: {} variables, {} clauses",
                instance.num_vars(),
                instance.num_clauses()
            );
            for r in &reports {
                println!("{r}");
            }
        }
        return Ok(passed);
    }
    if out.is_none() {
        if cli.json {
            print_json("witness", json!({ "name": which, "dimacs": emit_dimacs(&instance) }));
        } else {
            print!("{}", emit_dimacs(&instance));
        }
    }
    Ok(true)
}

fn search(cli: &Cli, config: &SearchConfig, out: Option<&Path>) -> Result<bool> {
    if config.min_n > config.max_n {
        bail!("--min-n {} exceeds --max-n {}", config.min_n, config.max_n);
    }
    // Search errors (journal I/O included) are usage errors, not violations.
    let outcome = search_unsat(config).map_err(|e| anyhow!("{e}"))?;
    if let (Some(p), Some(found)) = (out, &outcome.found) {
        write_text(p, &emit_annotated(found, Some(&config.profile.spec())))?;
    }
    if cli.json {
        print_json(
            "search-unsat",
            json!({
                "profile": outcome.profile,
                "runs": outcome.runs,
                "timed_out": outcome.timed_out,
                "found": outcome.found.as_ref().map(|f| json!({
                    "vars": f.num_vars(),
                    "clauses": f.num_clauses(),
                })),
                "claims": outcome.claims(),
            }),
        );
    } else {
        for line in outcome.claims() {
            println!("{line}");
        }
        if outcome.timed_out {
            println!("stopped at the time limit");
        }
        if let Some(f) = &outcome.found {
            println!("found: {} variables, {} clauses", f.num_vars(), f.num_clauses());
        }
    }
    Ok(true)
}
