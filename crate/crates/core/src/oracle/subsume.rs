use crate::formula::Clause;
use crate::report::{VerificationReport, Witness};

/// Every target clause contains some cover clause as a subset.
pub fn subsumes(cover: &[Clause], target: &[Clause]) -> VerificationReport {
    for (index, t) in target.iter().enumerate() {
        if !cover.iter().any(|c| c.is_subset_of(t)) {
            return VerificationReport::fail(
                "subsumption",
                Witness::Uncovered {
                    index,
                    clause: t.clone(),
                },
            )
            .with_detail(format!("target clause {index} {t} has no covering clause"));
        }
    }
    VerificationReport::pass("subsumption")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Var;

    fn pos(vars: &[u32]) -> Clause {
        Clause::new(vars.iter().map(|&v| Var(v).pos()).collect())
    }

    #[test]
    fn subset_covers() {
        assert!(subsumes(&[pos(&[0, 1])], &[pos(&[0, 1, 2])]).passed);
        let r = subsumes(&[pos(&[0, 1])], &[pos(&[0, 1, 2]), pos(&[0, 2, 3])]);
        assert!(matches!(r.witness, Some(Witness::Uncovered { index: 1, .. })));
    }

    #[test]
    fn empty_target_is_covered() {
        assert!(subsumes(&[], &[]).passed);
    }
}
