//! Polynomial transformations between variants, each producing a
//! certificate that maps output variables back to the input.

mod balanced;
mod e4;
mod mgadget;
mod nae;
mod once_negated;
mod six;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::formula::{Assignment, Clause, CnfInstance, Flavor, Lit, Mode, Var};
use crate::gadgets::{build_gadget, FreshAllocator, GadgetKind};
use crate::oracle::{decide, solve_dpll_with, OracleConfig};
use crate::report::{VerificationReport, Witness};
use crate::variant::{first_violation, Linearity, Monotonicity, Profile, VariantSpec};

pub use balanced::r10_with_gadget;
pub use mgadget::MGadget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ReductionId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    R13,
    R14,
}

impl ReductionId {
    pub const ALL: [ReductionId; 14] = [
        ReductionId::R1,
        ReductionId::R2,
        ReductionId::R3,
        ReductionId::R4,
        ReductionId::R5,
        ReductionId::R6,
        ReductionId::R7,
        ReductionId::R8,
        ReductionId::R9,
        ReductionId::R10,
        ReductionId::R11,
        ReductionId::R12,
        ReductionId::R13,
        ReductionId::R14,
    ];

    pub fn summary(self) -> &'static str {
        match self {
            ReductionId::R1 => "Monotone NAE-3-Sat -> Monotone NAE-3-Sat-E4 (NE6/EQ ring, P1 padding)",
            ReductionId::R2 => "NAE-3-Sat* -> Monotone NAE-3-Sat-E4 (EQ13/NE9 ring)",
            ReductionId::R3 => "Monotone NAE-3-Sat-E4 -> linear Monotone NAE-3-Sat-E4 (EQ4L per variable)",
            ReductionId::R4 => "linear Monotone NAE-3-Sat-E4 -> Monotone 3-Sat-(4,4) (clause doubling)",
            ReductionId::R5 => "3-Sat-(2,2) -> Monotone 3-Sat-(3,3) (A per variable, S-bar padding)",
            ReductionId::R6 => "Monotone 3-Sat-(k,k) -> Monotone 3-Sat-(k+1,k+1) (copies)",
            ReductionId::R7 => "3-Sat-(2,2) -> Monotone 3-Sat-(5,1) (D and F enforcers)",
            ReductionId::R8 => "Monotone 3-Sat-(k,1) -> Monotone 3-Sat-(k+1,1) (copies)",
            ReductionId::R9 => "Monotone 3-Sat-(3,3) -> Monotone 3-Sat*-(2,2) (STAR22)",
            ReductionId::R10 => "Monotone 3-Sat-(3,3) -> Monotone 3-Sat-(2,2) (needs an unsatisfiable (2,2) instance)",
            ReductionId::R11 => "3-Sat-(2,2) -> Monotone 3-Sat-(3,2) (G and H)",
            ReductionId::R12 => "Monotone 3-Sat-(3,2) -> Monotone 3-Sat-(4,2) (INC32 per variable triple)",
            ReductionId::R13 => "3-Sat-(2,2) -> Monotone 3-Sat-E4 with profiles (3,1)/(1,3) (B and B-bar)",
            ReductionId::R14 => "Monotone 3-Sat-E4 (3,1)/(1,3) -> 3-Sat-E4 with every variable (3,1)",
        }
    }

    /// Satisfaction mode on the input side.
    pub fn input_mode(self) -> Mode {
        match self {
            ReductionId::R1 | ReductionId::R2 | ReductionId::R3 | ReductionId::R4 => Mode::Nae,
            _ => Mode::Sat,
        }
    }

    pub fn output_mode(self) -> Mode {
        match self {
            ReductionId::R1 | ReductionId::R2 | ReductionId::R3 => Mode::Nae,
            _ => Mode::Sat,
        }
    }

    /// Input variant; `k` is used by R6 and R8.
    pub fn input_spec(self, k: u32) -> VariantSpec {
        match self {
            ReductionId::R1 => VariantSpec::monotone_nae(),
            ReductionId::R2 => VariantSpec::default().with_duplicates(),
            ReductionId::R3 => VariantSpec::monotone_nae_e4(),
            ReductionId::R4 => VariantSpec::monotone_nae_e4().with_linear(Linearity::Linear),
            ReductionId::R5 | ReductionId::R7 | ReductionId::R11 | ReductionId::R13 => VariantSpec::sat_pq(2, 2),
            ReductionId::R6 => VariantSpec::monotone_pq(k, k),
            ReductionId::R8 => VariantSpec::monotone_pq(k, 1),
            ReductionId::R9 | ReductionId::R10 => VariantSpec::monotone_pq(3, 3),
            ReductionId::R12 => VariantSpec::monotone_pq(3, 2),
            ReductionId::R14 => e4_choice(),
        }
    }

    pub fn output_spec(self, k: u32) -> VariantSpec {
        match self {
            ReductionId::R1 | ReductionId::R2 => VariantSpec::monotone_nae_e4(),
            ReductionId::R3 => VariantSpec::monotone_nae_e4().with_linear(Linearity::Linear),
            ReductionId::R4 => VariantSpec::monotone_pq(4, 4),
            ReductionId::R5 => VariantSpec::monotone_pq(3, 3),
            ReductionId::R6 => VariantSpec::monotone_pq(k + 1, k + 1),
            ReductionId::R7 => VariantSpec::monotone_pq(5, 1),
            ReductionId::R8 => VariantSpec::monotone_pq(k + 1, 1),
            ReductionId::R9 => VariantSpec::monotone_pq(2, 2).with_duplicates(),
            ReductionId::R10 => VariantSpec::monotone_pq(2, 2),
            ReductionId::R11 => VariantSpec::monotone_pq(3, 2),
            ReductionId::R12 => VariantSpec::monotone_pq(4, 2),
            ReductionId::R13 => e4_choice(),
            ReductionId::R14 => VariantSpec::sat_pq(3, 1),
        }
    }
}

fn e4_choice() -> VariantSpec {
    VariantSpec {
        monotonicity: Monotonicity::SatMonotone,
        profile: Profile::Choice(vec![(3, 1), (1, 3)]),
        ..Default::default()
    }
}

impl fmt::Display for ReductionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for ReductionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        ReductionId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Unknown {
                what: "reduction",
                name: s.to_string(),
            })
    }
}

/// Extra inputs some reductions need.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    /// Profile parameter of R6 and R8; inferred from the input when absent.
    pub k: Option<u32>,
    /// Unsatisfiable Monotone 3-Sat-(2,2) instance required by R10.
    pub unsat: Option<CnfInstance>,
    pub oracle: OracleConfig,
}

/// Output variable `output` carries input variable `input` (complemented
/// when `negated`) in copy `copy` of the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackMapEntry {
    pub output: Var,
    pub input: Var,
    pub negated: bool,
    pub copy: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetRecord {
    pub kind: String,
    pub boundary: Vec<Var>,
    pub aux: Vec<Var>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub id: ReductionId,
    pub k: Option<u32>,
    pub input: CnfInstance,
    pub output: CnfInstance,
    pub back_map: Vec<BackMapEntry>,
    pub gadget_log: Vec<GadgetRecord>,
    /// Output variables introduced directly by the construction, outside
    /// any gadget and without an input counterpart.
    pub helpers: Vec<Var>,
}

impl ReductionCertificate {
    /// Every output variable is mapped back, owned by a logged gadget, or a
    /// construction helper, and no variable is claimed twice.
    pub fn accounts_for_every_variable(&self) -> bool {
        let mut owner = vec![0u8; self.output.num_vars()];
        let claims = self
            .back_map
            .iter()
            .map(|e| e.output)
            .chain(self.gadget_log.iter().flat_map(|g| g.aux.iter().copied()))
            .chain(self.helpers.iter().copied());
        for v in claims {
            match owner.get_mut(v.index()) {
                Some(slot) if *slot == 0 => *slot = 1,
                _ => return false,
            }
        }
        owner.iter().all(|&o| o == 1)
    }
}

/// Accumulates the output of a construction.
pub(crate) struct Builder {
    alloc: FreshAllocator,
    clauses: Vec<Clause>,
    back_map: Vec<BackMapEntry>,
    gadget_log: Vec<GadgetRecord>,
    helpers: Vec<Var>,
}

impl Builder {
    pub fn new() -> Builder {
        Builder {
            alloc: FreshAllocator::new(0),
            clauses: Vec::new(),
            back_map: Vec::new(),
            gadget_log: Vec::new(),
            helpers: Vec::new(),
        }
    }

    /// Fresh variable standing for `input` (or its complement).
    pub fn copy_of(&mut self, input: Var, negated: bool, copy: usize) -> Var {
        let output = self.alloc.fresh();
        self.back_map.push(BackMapEntry {
            output,
            input,
            negated,
            copy,
        });
        output
    }

    pub fn helper(&mut self) -> Var {
        let v = self.alloc.fresh();
        self.helpers.push(v);
        v
    }

    pub fn clause(&mut self, lits: Vec<Lit>) {
        self.clauses.push(Clause::new(lits));
    }

    pub fn gadget(&mut self, kind: GadgetKind, slots: &[Var]) -> Result<(), Error> {
        let g = build_gadget(kind, slots, &mut self.alloc)?;
        self.gadget_log.push(GadgetRecord {
            kind: kind.to_string(),
            boundary: slots.to_vec(),
            aux: g.aux.clone(),
        });
        self.clauses.extend(g.clauses);
        Ok(())
    }

    /// Adds pre-built clauses whose variables are all already allocated
    /// under `kind`'s record.
    pub fn log_block(&mut self, kind: &str, boundary: Vec<Var>, aux: Vec<Var>, clauses: Vec<Clause>) {
        self.gadget_log.push(GadgetRecord {
            kind: kind.to_string(),
            boundary,
            aux,
        });
        self.clauses.extend(clauses);
    }

    pub fn alloc(&mut self) -> &mut FreshAllocator {
        &mut self.alloc
    }

    pub fn clauses_mut(&mut self) -> &mut Vec<Clause> {
        &mut self.clauses
    }

    pub fn finish(
        self,
        id: ReductionId,
        k: Option<u32>,
        input: &CnfInstance,
        flavor: Flavor,
    ) -> Result<ReductionCertificate, Error> {
        let output = CnfInstance::new(self.alloc.num_vars(), self.clauses, id.output_mode(), flavor)?;
        Ok(ReductionCertificate {
            id,
            k,
            input: input.clone(),
            output,
            back_map: self.back_map,
            gadget_log: self.gadget_log,
            helpers: self.helpers,
        })
    }
}

/// Profile parameter for R6/R8: the explicit one, else the input's own.
fn resolve_k(id: ReductionId, input: &CnfInstance, params: &Params) -> Result<u32, Error> {
    if let Some(k) = params.k {
        return Ok(k);
    }
    match input.appearance_profile().uniform() {
        Some((p, _)) if p > 0 => Ok(p),
        _ if input.num_vars() == 0 => Err(Error::MissingParameter("k")),
        _ => Err(Error::InputSpec(format!("{id} needs a uniform profile to infer k"))),
    }
}

/// Runs reduction `id` on `input` (read under the row's input mode).
pub fn apply_reduction(id: ReductionId, input: &CnfInstance, params: &Params) -> Result<ReductionCertificate, Error> {
    let input = &input.clone().with_mode(id.input_mode());
    let k = match id {
        ReductionId::R6 | ReductionId::R8 => Some(resolve_k(id, input, params)?),
        _ => None,
    };
    let spec = id.input_spec(k.unwrap_or(0));
    if let Some(v) = first_violation(input, &spec) {
        return Err(Error::InputSpec(format!("{id} expects {spec}: {v}")));
    }
    match id {
        ReductionId::R1 => nae::r1(input),
        ReductionId::R2 => nae::r2(input),
        ReductionId::R3 => nae::r3(input),
        ReductionId::R4 => nae::r4(input),
        ReductionId::R5 => balanced::r5(input),
        ReductionId::R6 => balanced::r6(input, k.unwrap()),
        ReductionId::R7 => once_negated::r7(input),
        ReductionId::R8 => once_negated::r8(input, k.unwrap()),
        ReductionId::R9 => balanced::r9(input),
        ReductionId::R10 => {
            let unsat = params.unsat.as_ref().ok_or(Error::MissingParameter("unsat"))?;
            let gadget = MGadget::from_unsat_22(unsat, &params.oracle)?;
            balanced::r10(input, &gadget)
        }
        ReductionId::R11 => six::r11(input),
        ReductionId::R12 => six::r12(input),
        ReductionId::R13 => e4::r13(input),
        ReductionId::R14 => e4::r14(input),
    }
}

/// Checks the output against the row's output variant.
pub fn validate_output(cert: &ReductionCertificate) -> VerificationReport {
    let spec = cert.id.output_spec(cert.k.unwrap_or(0));
    crate::variant::validate(&cert.output, &spec)
}

/// Maps a model of the output back to an assignment of the input, using
/// copy 0 of every input variable; all copy-0 carriers of one variable must
/// agree.
pub fn pull_back(cert: &ReductionCertificate, model: &Assignment) -> Result<Assignment, Error> {
    if model.len() != cert.output.num_vars() {
        return Err(Error::InvalidModel { clause: 0 });
    }
    if let Some(clause) = cert.output.first_unsatisfied(model) {
        return Err(Error::InvalidModel { clause });
    }
    let mut values: Vec<Option<bool>> = vec![None; cert.input.num_vars()];
    for e in cert.back_map.iter().filter(|e| e.copy == 0) {
        let v = model.get(e.output) ^ e.negated;
        match values[e.input.index()] {
            Some(prev) if prev != v => return Err(Error::BackMapViolation { input: e.input }),
            _ => values[e.input.index()] = Some(v),
        }
    }
    let assignment = Assignment(values.into_iter().map(|v| v.unwrap_or(false)).collect());
    if let Some(clause) = cert.input.first_unsatisfied(&assignment) {
        return Err(Error::PullBackFailed { clause });
    }
    Ok(assignment)
}

/// Decides both sides (input by `decide`, output by DPLL) and compares; a
/// satisfiable output is also pulled back.
pub fn check_equisat(id: ReductionId, input: &CnfInstance, params: &Params) -> Result<VerificationReport, Error> {
    let cert = apply_reduction(id, input, params)?;
    check_certificate(&cert, &params.oracle)
}

pub fn check_certificate(cert: &ReductionCertificate, config: &OracleConfig) -> Result<VerificationReport, Error> {
    let check = format!("equisatisfiability of {}", cert.id);
    let input_sat = decide(&cert.input, config)?.is_sat();
    let out = solve_dpll_with(&cert.output, config.timeout)?;
    let output_sat = out.is_sat();
    let statuses = Witness::Statuses { input_sat, output_sat };
    if input_sat != output_sat {
        return Ok(VerificationReport::fail(check, statuses).with_detail(format!(
            "input {}, output {}",
            sat_word(input_sat),
            sat_word(output_sat)
        )));
    }
    if let Some(model) = out.model {
        let back = pull_back(cert, &model)?;
        debug_assert!(cert.input.is_satisfied_by(&back));
    }
    Ok(VerificationReport::pass(check)
        .with_witness(statuses)
        .with_detail(format!("both {}", sat_word(input_sat))))
}

fn sat_word(sat: bool) -> &'static str {
    if sat {
        "satisfiable"
    } else {
        "unsatisfiable"
    }
}

fn check_multiple_of_three(what: &str, n: usize) -> Result<(), Error> {
    if !n.is_multiple_of(3) {
        return Err(Error::Divisibility(format!("{what} = {n} is not a multiple of 3")));
    }
    Ok(())
}

/// Occurrence-splitting used by the constructions that replace the
/// appearances of `x_i` with fresh variables: for each input variable the
/// list of (clause index, position in clause) of its negated and unnegated
/// appearances, in clause order.
pub(crate) struct Occurrences {
    pub positive: Vec<Vec<(usize, usize)>>,
    pub negative: Vec<Vec<(usize, usize)>>,
    /// In clause order regardless of polarity.
    pub all: Vec<Vec<(usize, usize)>>,
}

impl Occurrences {
    pub fn of(input: &CnfInstance) -> Occurrences {
        let n = input.num_vars();
        let mut occ = Occurrences {
            positive: vec![Vec::new(); n],
            negative: vec![Vec::new(); n],
            all: vec![Vec::new(); n],
        };
        for (c, clause) in input.clauses().iter().enumerate() {
            for (p, lit) in clause.lits().iter().enumerate() {
                let v = lit.var().index();
                if lit.is_negated() {
                    occ.negative[v].push((c, p));
                } else {
                    occ.positive[v].push((c, p));
                }
                occ.all[v].push((c, p));
            }
        }
        occ
    }
}

/// Rebuilds the input clauses with each occurrence replaced by the literal
/// chosen in `slot[c][p]`.
pub(crate) fn rewrite(input: &CnfInstance, slot: &[Vec<Option<Lit>>]) -> Vec<Clause> {
    input
        .clauses()
        .iter()
        .enumerate()
        .map(|(c, clause)| {
            Clause::new(
                (0..clause.len())
                    .map(|p| slot[c][p].expect("every occurrence is replaced"))
                    .collect(),
            )
        })
        .collect()
}

pub(crate) fn empty_slots(input: &CnfInstance) -> Vec<Vec<Option<Lit>>> {
    input.clauses().iter().map(|c| vec![None; c.len()]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_parse() {
        assert_eq!("r7".parse::<ReductionId>().unwrap(), ReductionId::R7);
        assert_eq!("R14".parse::<ReductionId>().unwrap(), ReductionId::R14);
        assert!("R15".parse::<ReductionId>().is_err());
    }
}
