//! Splitting an unsatisfiable instance into a maximal satisfiable core and
//! the literals its models force false.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::formula::{Clause, CnfInstance, Lit, Mode};

use super::{decide, OracleConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitForced {
    /// Indices of the satisfiable core, in input order.
    pub core: Vec<usize>,
    /// Indices of the clauses left out.
    pub excluded: Vec<usize>,
    /// Literals of the excluded clauses, one entry per occurrence. Each is
    /// false in every model of the core.
    pub forced: Vec<Lit>,
}

/// Greedily grows a satisfiable clause subset in input order. Every
/// skipped clause is unsatisfiable together with the final core, so each of
/// its literals is false in all core models; this is re-checked per literal.
pub fn split_forced(instance: &CnfInstance, config: &OracleConfig) -> Result<SplitForced, Error> {
    let instance = &instance.clone().with_mode(Mode::Sat);
    if decide(instance, config)?.is_sat() {
        return Err(Error::Satisfiable);
    }
    let mut core = Vec::new();
    let mut excluded = Vec::new();
    for i in 0..instance.num_clauses() {
        core.push(i);
        if !decide(&instance.restrict(&core), config)?.is_sat() {
            core.pop();
            excluded.push(i);
        }
    }
    let core_instance = instance.restrict(&core);
    let mut forced = Vec::new();
    for &i in &excluded {
        for &lit in instance.clauses()[i].lits() {
            let probe = core_instance.with_extra_clauses([Clause::new(vec![lit])])?;
            if decide(&probe, config)?.is_sat() {
                return Err(Error::InvalidModel { clause: i });
            }
            forced.push(lit);
        }
    }
    Ok(SplitForced { core, excluded, forced })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Flavor;

    #[test]
    fn satisfiable_input_is_rejected() {
        let i = CnfInstance::from_dimacs_clauses(3, &[&[1, 2, 3]], Mode::Sat, Flavor::Set).unwrap();
        assert!(matches!(
            split_forced(&i, &OracleConfig::default()),
            Err(Error::Satisfiable)
        ));
    }

    #[test]
    fn all_sign_patterns_over_two_vars() {
        let i = CnfInstance::from_dimacs_clauses(2, &[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]], Mode::Sat, Flavor::Set)
            .unwrap();
        let s = split_forced(&i, &OracleConfig::default()).unwrap();
        assert_eq!(s.core, vec![0, 1, 2]);
        assert_eq!(s.excluded, vec![3]);
        assert_eq!(s.forced.len(), 2);
    }
}
