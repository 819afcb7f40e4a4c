//! CNF data model: variables, literals, clauses and instances.
//!
//! Variables are dense ids `0..num_vars`. Names only exist in the I/O
//! layer (DIMACS uses `id + 1`).

use std::fmt;
use std::ops::Not;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn pos(self) -> Lit {
        Lit::new(self, false)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Lit {
        Lit::new(self, true)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0 + 1)
    }
}

/// A variable or its negation.
///
/// Ordering is by variable first, positive before negative, which is the
/// canonical order of literals inside a [`Clause`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i64", try_from = "i64")]
pub struct Lit {
    var: Var,
    negated: bool,
}

impl Lit {
    pub fn new(var: Var, negated: bool) -> Lit {
        Lit { var, negated }
    }

    pub fn var(self) -> Var {
        self.var
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    pub fn is_positive(self) -> bool {
        !self.negated
    }

    /// Truth value of this literal under `value` for its variable.
    pub fn eval(self, value: bool) -> bool {
        value != self.negated
    }

    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var.0) + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }

    pub fn from_dimacs(value: i64) -> Option<Lit> {
        if value == 0 {
            return None;
        }
        let idx = u32::try_from(value.unsigned_abs() - 1).ok()?;
        Some(Lit::new(Var(idx), value < 0))
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit::new(self.var, !self.negated)
    }
}

impl From<Lit> for i64 {
    fn from(lit: Lit) -> i64 {
        lit.to_dimacs()
    }
}

impl TryFrom<i64> for Lit {
    type Error = String;

    fn try_from(value: i64) -> Result<Lit, String> {
        Lit::from_dimacs(value).ok_or_else(|| format!("invalid literal {value}"))
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "¬{}", self.var)
        } else {
            write!(f, "{}", self.var)
        }
    }
}

/// Satisfaction semantics of an instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// At least one true literal per clause.
    #[default]
    Sat,
    /// At least one true and at least one false literal per clause.
    Nae,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Sat => f.write_str("sat"),
            Mode::Nae => f.write_str("nae"),
        }
    }
}

/// Whether clauses are sets of literals or multisets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// Pairwise distinct variables inside every clause.
    #[default]
    Set,
    /// Repeated literals allowed; each copy counts as an appearance.
    Multiset,
}

/// A clause. Literals are kept sorted, multiplicities preserved.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(mut lits: Vec<Lit>) -> Clause {
        lits.sort_unstable();
        Clause { lits }
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.lits.iter().map(|l| l.var())
    }

    /// Distinct variables, ascending.
    pub fn var_set(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = self.vars().collect();
        vars.dedup();
        vars
    }

    pub fn is_all_positive(&self) -> bool {
        self.lits.iter().all(|l| l.is_positive())
    }

    pub fn is_all_negative(&self) -> bool {
        self.lits.iter().all(|l| l.is_negated())
    }

    /// First variable that occurs more than once (as the same literal or
    /// with both polarities).
    pub fn repeated_var(&self) -> Option<Var> {
        self.lits
            .windows(2)
            .find(|w| w[0].var() == w[1].var())
            .map(|w| w[0].var())
    }

    /// The clause with every literal negated.
    pub fn negated(&self) -> Clause {
        Clause::new(self.lits.iter().map(|&l| !l).collect())
    }

    pub fn map_vars(&self, mut f: impl FnMut(Var) -> Var) -> Clause {
        Clause::new(self.lits.iter().map(|l| Lit::new(f(l.var()), l.is_negated())).collect())
    }

    /// Set inclusion on the underlying literal sets (multiplicity ignored).
    pub fn is_subset_of(&self, other: &Clause) -> bool {
        self.lits.iter().all(|l| other.lits.binary_search(l).is_ok())
    }

    pub fn true_count(&self, assignment: &Assignment) -> usize {
        self.lits.iter().filter(|l| assignment.lit(**l)).count()
    }

    pub fn is_satisfied(&self, assignment: &Assignment, mode: Mode) -> bool {
        let t = self.true_count(assignment);
        match mode {
            Mode::Sat => t > 0,
            Mode::Nae => t > 0 && t < self.lits.len(),
        }
    }
}

impl From<Vec<Lit>> for Clause {
    fn from(lits: Vec<Lit>) -> Clause {
        Clause::new(lits)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

/// A truth assignment over `0..len` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn all_false(num_vars: usize) -> Assignment {
        Assignment(vec![false; num_vars])
    }

    pub fn from_bits(bits: u64, num_vars: usize) -> Assignment {
        Assignment((0..num_vars).map(|i| bits >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: Var) -> bool {
        self.0[var.index()]
    }

    pub fn set(&mut self, var: Var, value: bool) {
        self.0[var.index()] = value;
    }

    pub fn lit(&self, lit: Lit) -> bool {
        lit.eval(self.get(lit.var()))
    }
}

/// Per-variable appearance counts `(unnegated, negated)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppearanceProfile {
    pub counts: Vec<(u32, u32)>,
}

impl AppearanceProfile {
    pub fn positive(&self, var: Var) -> u32 {
        self.counts[var.index()].0
    }

    pub fn negative(&self, var: Var) -> u32 {
        self.counts[var.index()].1
    }

    pub fn total(&self, var: Var) -> u32 {
        let (p, q) = self.counts[var.index()];
        p + q
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn grand_total(&self) -> u64 {
        self.counts.iter().map(|&(p, q)| u64::from(p + q)).sum()
    }

    /// `Some((p, q))` when every variable has the same profile.
    pub fn uniform(&self) -> Option<(u32, u32)> {
        let first = *self.counts.first()?;
        self.counts.iter().all(|&c| c == first).then_some(first)
    }
}

/// A CNF formula together with its satisfaction mode and clause flavor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CnfInstance {
    num_vars: usize,
    clauses: Vec<Clause>,
    mode: Mode,
    flavor: Flavor,
}

impl CnfInstance {
    /// Builds an instance, checking variable ranges and, for the set
    /// flavor, that no clause repeats a variable.
    pub fn new(num_vars: usize, clauses: Vec<Clause>, mode: Mode, flavor: Flavor) -> Result<CnfInstance, Error> {
        for (idx, clause) in clauses.iter().enumerate() {
            if let Some(l) = clause.lits().iter().find(|l| l.var().index() >= num_vars) {
                return Err(Error::VarOutOfRange {
                    clause: idx,
                    var: l.var(),
                    num_vars,
                });
            }
            if flavor == Flavor::Set {
                if let Some(var) = clause.repeated_var() {
                    return Err(Error::RepeatedVariable { clause: idx, var });
                }
            }
        }
        Ok(CnfInstance {
            num_vars,
            clauses,
            mode,
            flavor,
        })
    }

    pub fn empty(mode: Mode) -> CnfInstance {
        CnfInstance {
            num_vars: 0,
            clauses: Vec::new(),
            mode,
            flavor: Flavor::Set,
        }
    }

    /// Convenience constructor from DIMACS-style signed literals.
    pub fn from_dimacs_clauses(
        num_vars: usize,
        clauses: &[&[i64]],
        mode: Mode,
        flavor: Flavor,
    ) -> Result<CnfInstance, Error> {
        let clauses = clauses
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&v| Lit::from_dimacs(v).ok_or(Error::ZeroLiteral))
                    .collect::<Result<Vec<_>, _>>()
                    .map(Clause::new)
            })
            .collect::<Result<Vec<_>, _>>()?;
        CnfInstance::new(num_vars, clauses, mode, flavor)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn with_mode(mut self, mode: Mode) -> CnfInstance {
        self.mode = mode;
        self
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> {
        (0..self.num_vars as u32).map(Var)
    }

    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Clause::len).sum()
    }

    pub fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        self.first_unsatisfied(assignment).is_none()
    }

    pub fn first_unsatisfied(&self, assignment: &Assignment) -> Option<usize> {
        assert_eq!(
            assignment.len(),
            self.num_vars,
            "assignment length does not match instance"
        );
        self.clauses.iter().position(|c| !c.is_satisfied(assignment, self.mode))
    }

    pub fn appearance_profile(&self) -> AppearanceProfile {
        appearance_profile(self)
    }

    /// Clause subset by index, keeping every variable.
    pub fn restrict(&self, indices: &[usize]) -> CnfInstance {
        CnfInstance {
            num_vars: self.num_vars,
            clauses: indices.iter().map(|&i| self.clauses[i].clone()).collect(),
            mode: self.mode,
            flavor: self.flavor,
        }
    }

    /// Adds clauses without re-running flavor checks on existing ones.
    pub fn with_extra_clauses(&self, extra: impl IntoIterator<Item = Clause>) -> Result<CnfInstance, Error> {
        let mut clauses = self.clauses.clone();
        clauses.extend(extra);
        CnfInstance::new(self.num_vars, clauses, self.mode, self.flavor)
    }
}

/// Counts unnegated and negated appearances of each variable; repeated
/// literals in multiset clauses count once per copy.
pub fn appearance_profile(instance: &CnfInstance) -> AppearanceProfile {
    let mut counts = vec![(0u32, 0u32); instance.num_vars()];
    for clause in instance.clauses() {
        for lit in clause.lits() {
            let c = &mut counts[lit.var().index()];
            if lit.is_negated() {
                c.1 += 1;
            } else {
                c.0 += 1;
            }
        }
    }
    AppearanceProfile { counts }
}

/// Flips the polarity of every literal over the selected variables.
///
/// Satisfying assignments correspond one-to-one by flipping the same
/// variables, so every oracle answer is preserved.
pub fn negate_rename(instance: &CnfInstance, vars: &[Var]) -> CnfInstance {
    let mut flip = vec![false; instance.num_vars()];
    for v in vars {
        flip[v.index()] = true;
    }
    let clauses = instance
        .clauses()
        .iter()
        .map(|c| {
            Clause::new(
                c.lits()
                    .iter()
                    .map(|&l| if flip[l.var().index()] { !l } else { l })
                    .collect(),
            )
        })
        .collect();
    CnfInstance {
        num_vars: instance.num_vars(),
        clauses,
        mode: instance.mode(),
        flavor: instance.flavor(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lits(v: &[i64]) -> Clause {
        Clause::new(v.iter().map(|&x| Lit::from_dimacs(x).unwrap()).collect())
    }

    #[test]
    fn multiset_duplicates_count_separately() {
        let inst = CnfInstance::from_dimacs_clauses(3, &[&[1, 1, 3]], Mode::Sat, Flavor::Multiset).unwrap();
        let prof = inst.appearance_profile();
        assert_eq!(prof.counts[0], (2, 0));
        assert_eq!(prof.counts[2], (1, 0));
        assert_eq!(prof.grand_total(), 3);
    }

    #[test]
    fn set_flavor_rejects_repeats_and_complements() {
        assert!(matches!(
            CnfInstance::from_dimacs_clauses(3, &[&[1, 1, 3]], Mode::Sat, Flavor::Set),
            Err(Error::RepeatedVariable { clause: 0, .. })
        ));
        assert!(CnfInstance::from_dimacs_clauses(3, &[&[1, -1, 3]], Mode::Sat, Flavor::Set).is_err());
        assert!(CnfInstance::from_dimacs_clauses(3, &[&[1, -1, 3]], Mode::Sat, Flavor::Multiset).is_ok());
    }

    #[test]
    fn out_of_range_literal_rejected() {
        let err = CnfInstance::from_dimacs_clauses(2, &[&[1, 2, 3]], Mode::Sat, Flavor::Set);
        assert!(matches!(err, Err(Error::VarOutOfRange { .. })));
    }

    #[test]
    fn empty_instance_has_empty_profile() {
        let inst = CnfInstance::empty(Mode::Sat);
        assert!(inst.appearance_profile().is_empty());
        assert!(inst.is_satisfied_by(&Assignment::all_false(0)));
    }

    #[test]
    fn nae_needs_both_values() {
        let c = lits(&[1, 2, 3]);
        let all_true = Assignment(vec![true, true, true]);
        assert!(c.is_satisfied(&all_true, Mode::Sat));
        assert!(!c.is_satisfied(&all_true, Mode::Nae));
        let mixed = Assignment(vec![true, false, true]);
        assert!(c.is_satisfied(&mixed, Mode::Nae));
    }

    #[test]
    fn negate_rename_is_involution() {
        let inst =
            CnfInstance::from_dimacs_clauses(4, &[&[1, -2, 3], &[-1, -3, -4], &[2, 3, 4]], Mode::Sat, Flavor::Set)
                .unwrap();
        let vars = [Var(0), Var(2)];
        let once = negate_rename(&inst, &vars);
        assert_ne!(once, inst);
        assert_eq!(negate_rename(&once, &vars), inst);
    }

    #[test]
    fn negate_rename_turns_minority_positive() {
        // x1 appears once unnegated and three times negated
        let inst = CnfInstance::from_dimacs_clauses(
            7,
            &[&[1, 2, 3], &[-1, -4, -5], &[-1, -6, -7], &[-1, -2, -3]],
            Mode::Sat,
            Flavor::Set,
        )
        .unwrap();
        assert_eq!(inst.appearance_profile().counts[0], (1, 3));
        let flipped = negate_rename(&inst, &[Var(0)]);
        assert_eq!(flipped.appearance_profile().counts[0], (3, 1));
    }

    #[test]
    fn clause_literals_are_canonically_sorted() {
        assert_eq!(lits(&[3, -1, 2]).lits(), lits(&[-1, 2, 3]).lits());
        assert_eq!(
            lits(&[-2, 2, 1])
                .lits()
                .iter()
                .map(|l| l.to_dimacs())
                .collect::<Vec<_>>(),
            vec![1, 2, -2]
        );
    }

    #[test]
    fn subset_ignores_multiplicity() {
        assert!(lits(&[1, 2]).is_subset_of(&lits(&[1, 2, 3])));
        assert!(!lits(&[1, 4]).is_subset_of(&lits(&[1, 2, 3])));
        assert!(lits(&[1, 1]).is_subset_of(&lits(&[1, 2])));
    }
}
