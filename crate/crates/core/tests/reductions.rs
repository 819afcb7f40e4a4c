use proptest::prelude::*;
use satgadgets::generate::{self, input_for};
use satgadgets::oracle::{solve_exhaustive, OracleConfig};
use satgadgets::reductions::{
    apply_reduction, check_certificate, pull_back, validate_output, Params, ReductionCertificate, ReductionId,
};
use satgadgets::{Assignment, CnfInstance, Error, Flavor, Mode, Var};

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

fn check_shape(cert: &ReductionCertificate) {
    let report = validate_output(cert);
    assert!(report.passed, "{}: {report}", cert.id);
    assert!(cert.accounts_for_every_variable(), "{}: unaccounted variable", cert.id);
    assert_eq!(cert.output.mode(), cert.id.output_mode());
}

#[test]
fn outputs_meet_their_variant() {
    for id in ROWS {
        for (seed, n) in [(1, 3), (2, 6), (3, 12), (4, 30)] {
            let input = input_for(id, n, 2, &mut generate::rng(seed)).unwrap();
            let cert = apply_reduction(id, &input, &Params::default()).unwrap();
            check_shape(&cert);
        }
    }
}

#[test]
fn equisatisfiable_on_random_inputs() {
    let params = Params::default();
    for id in ROWS {
        for seed in 0..4 {
            let input = input_for(id, 6, 2, &mut generate::rng(100 + seed)).unwrap();
            let cert = apply_reduction(id, &input, &params).unwrap();
            let report = check_certificate(&cert, &params.oracle).unwrap();
            assert!(report.passed, "{id} seed {seed}: {report}");
        }
    }
}

#[test]
fn nae_rows_preserve_unsatisfiability() {
    let params = Params::default();
    let r1 = apply_reduction(ReductionId::R1, &fano(), &params).unwrap();
    check_shape(&r1);
    let report = check_certificate(&r1, &params.oracle).unwrap();
    assert!(report.passed, "{report}");
    assert!(!solve_exhaustive(&fano()).unwrap().is_sat());

    let r2 = apply_reduction(ReductionId::R2, &fano(), &params).unwrap();
    assert!(check_certificate(&r2, &params.oracle).unwrap().passed);
}

#[test]
fn nae_star_with_repeated_and_complementary_literals() {
    // {x, x, y} forces x != y; {x, x̄, y} is always not-all-equal.
    let input = CnfInstance::from_dimacs_clauses(
        2,
        &[&[1, 1, 2], &[1, -1, 2], &[-1, -1, -2]],
        Mode::Nae,
        Flavor::Multiset,
    )
    .unwrap();
    let cert = apply_reduction(ReductionId::R2, &input, &Params::default()).unwrap();
    check_shape(&cert);
    assert!(check_certificate(&cert, &OracleConfig::default()).unwrap().passed);
}

#[test]
fn r6_and_r8_counts() {
    let mut rng = generate::rng(9);
    let k = 3;
    let input = generate::monotone_pq(6, k, k, &mut rng).unwrap();
    let cert = apply_reduction(ReductionId::R6, &input, &Params::default()).unwrap();
    let (n, m) = (input.num_vars(), input.num_clauses());
    assert_eq!(cert.output.num_clauses(), (k as usize + 1) * (m + 2 * n));
    assert_eq!(cert.output.num_vars(), (k as usize + 3) * n);
    assert_eq!(cert.k, Some(k));

    let input = generate::monotone_pq(9, k, 1, &mut rng).unwrap();
    let cert = apply_reduction(ReductionId::R8, &input, &Params::default()).unwrap();
    let (n, m) = (input.num_vars(), input.num_clauses());
    assert_eq!(cert.output.num_clauses(), (k as usize + 1) * (m + n) + 2 * n / 3);
    check_shape(&cert);
}

#[test]
fn explicit_k_must_match_input() {
    let input = generate::monotone_pq(6, 2, 2, &mut generate::rng(3)).unwrap();
    let params = Params {
        k: Some(3),
        ..Params::default()
    };
    assert!(matches!(
        apply_reduction(ReductionId::R6, &input, &params),
        Err(Error::InputSpec(_))
    ));
}

#[test]
fn r7_padding_for_three_variables_uses_d() {
    let input = generate::sat_pq(3, 2, 2, &mut generate::rng(5)).unwrap();
    let cert = apply_reduction(ReductionId::R7, &input, &Params::default()).unwrap();
    check_shape(&cert);
    assert_eq!(cert.gadget_log.iter().filter(|g| g.kind == "D").count(), 4);
}

#[test]
fn wrong_input_variant_is_rejected() {
    let input = generate::monotone_pq(6, 3, 3, &mut generate::rng(1)).unwrap();
    let err = apply_reduction(ReductionId::R5, &input, &Params::default()).unwrap_err();
    assert!(matches!(err, Error::InputSpec(_)), "{err}");
}

#[test]
fn r10_requires_its_parameter() {
    let input = generate::monotone_pq(3, 3, 3, &mut generate::rng(1)).unwrap();
    let err = apply_reduction(ReductionId::R10, &input, &Params::default()).unwrap_err();
    assert!(matches!(err, Error::MissingParameter("unsat")));
}

#[test]
fn pull_back_rejects_a_non_model() {
    let input = input_for(ReductionId::R5, 6, 2, &mut generate::rng(2)).unwrap();
    let cert = apply_reduction(ReductionId::R5, &input, &Params::default()).unwrap();
    let zeros = Assignment::all_false(cert.output.num_vars());
    assert!(matches!(pull_back(&cert, &zeros), Err(Error::InvalidModel { .. })));
}

#[test]
fn r14_flips_only_the_13_variables() {
    let input = generate::monotone_e4_choice(3, 3, &mut generate::rng(4)).unwrap();
    let cert = apply_reduction(ReductionId::R14, &input, &Params::default()).unwrap();
    let flipped: Vec<Var> = cert.back_map.iter().filter(|e| e.negated).map(|e| e.input).collect();
    assert_eq!(flipped, vec![Var(3), Var(4), Var(5)]);
}

#[test]
fn certificates_round_trip_through_json() {
    let input = input_for(ReductionId::R13, 3, 2, &mut generate::rng(8)).unwrap();
    let cert = apply_reduction(ReductionId::R13, &input, &Params::default()).unwrap();
    let json = serde_json::to_string(&cert).unwrap();
    let back: ReductionCertificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cert);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_output_model_pulls_back(row in 0..ROWS.len(), seed in any::<u64>()) {
        let id = ROWS[row];
        let input = input_for(id, 3, 1, &mut generate::rng(seed)).unwrap();
        let cert = apply_reduction(id, &input, &Params::default()).unwrap();
        prop_assert!(validate_output(&cert).passed);
        let out = satgadgets::oracle::solve_dpll(&cert.output).unwrap();
        if let Some(model) = out.model {
            let back = pull_back(&cert, &model).unwrap();
            prop_assert!(cert.input.is_satisfied_by(&back));
        } else {
            prop_assert!(!satgadgets::oracle::decide(&cert.input, &OracleConfig::default()).unwrap().is_sat());
        }
    }
}
