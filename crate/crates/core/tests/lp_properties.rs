mod support;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ontic_core::lp::{
    parse_certificate, parse_system, solve, verify_certificate, vertex_feasible, write_certificate,
    write_system, Certificate, LpOutcome, RationalSystem,
};
use ontic_core::theorem::triple_test;
use support::oracle::{oracle_feasible, random_system};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn solver_agrees_with_oracle_on_random_systems() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut feasible = 0;
    for case in 0..200 {
        let sys = random_system(&mut rng);
        let expected = oracle_feasible(&sys);
        let outcome = solve(&sys);
        assert_eq!(outcome.is_feasible(), expected, "case {case}:\n{}", write_system(&sys));
        match &outcome {
            LpOutcome::Feasible(x) => {
                feasible += 1;
                assert!(sys.satisfied_by(x), "case {case}");
            }
            LpOutcome::Infeasible(c) => assert!(verify_certificate(&sys, c).unwrap(), "case {case}"),
        }
    }
    // both branches are exercised
    assert!(feasible > 50 && feasible < 190, "{feasible}");
}

#[test]
fn vertex_search_agrees_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..25 {
        let sys = random_system(&mut rng);
        let found = vertex_feasible(&sys);
        assert_eq!(found.is_some(), oracle_feasible(&sys));
        if let Some(x) = found {
            assert!(sys.satisfied_by(&x));
        }
    }
}

#[test]
fn solver_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..30 {
        let sys = random_system(&mut rng);
        assert_eq!(solve(&sys), solve(&sys.clone()));
    }
}

#[test]
fn trine_goldens() {
    let report = triple_test().unwrap();
    assert_eq!(parse_system(&golden("trine_marginals.lp")).unwrap(), report.marginals);
    assert_eq!(parse_certificate(&golden("trine_marginals.cert")).unwrap(), report.combination);
    let full = parse_system(&golden("trine_moments.lp")).unwrap();
    assert_eq!(&full, report.moments.system.system());
    let frozen = parse_certificate(&golden("trine_moments.cert")).unwrap();
    assert!(verify_certificate(&full, &frozen).unwrap());
    assert_eq!(report.moments.outcome, LpOutcome::Infeasible(frozen));
}

#[test]
fn perturbed_certificates_fail() {
    let report = triple_test().unwrap();
    let sys = &report.marginals;
    for i in 0..3 {
        let mut m = report.combination.multipliers.clone();
        m[i] += BigRational::one();
        let cert = Certificate::from_multipliers(sys, m).unwrap();
        assert!(!verify_certificate(sys, &cert).unwrap(), "bumped multiplier {i}");
    }
    let zero = Certificate::from_multipliers(sys, vec![BigRational::zero(); 3]).unwrap();
    assert!(!verify_certificate(sys, &zero).unwrap());
}

#[test]
fn feasible_witness_reproduces_rhs() {
    let sys = RationalSystem::new(
        vec![vec![q(1, 1), q(1, 1), q(1, 1)], vec![q(1, 1), q(-1, 1), q(0, 1)]],
        vec![q(1, 1), q(1, 3)],
    )
    .unwrap();
    let LpOutcome::Feasible(x) = solve(&sys) else { panic!("feasible") };
    for (r, b) in sys.rows().iter().zip(sys.rhs()) {
        let lhs = r.iter().zip(&x).fold(BigRational::zero(), |acc, (a, v)| acc + a * v);
        assert_eq!(&lhs, b);
    }
}

#[test]
fn parse_errors_carry_lines() {
    let err = parse_system("lp-system rows=1 vars=2\n1 x = 0\n").unwrap_err();
    assert!(err.to_string().contains('2'), "{err}");
    assert!(parse_system("lp-system rows=2 vars=1\n1 = 0\n").is_err());
    assert!(parse_certificate("farkas-certificate rows=1 vars=1\nderived 1 = -1\n").is_err());
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

proptest! {
    #[test]
    fn text_round_trip(
        rows in (1usize..5, 1usize..6).prop_flat_map(|(m, k)| {
            (prop::collection::vec(prop::collection::vec(rational(), k), m),
             prop::collection::vec(rational(), m))
        })
    ) {
        let sys = RationalSystem::new(rows.0, rows.1).unwrap();
        prop_assert_eq!(parse_system(&write_system(&sys)).unwrap(), sys.clone());
        let mult: Vec<BigRational> = (0..sys.row_count()).map(|i| q(i as i64 - 1, 2)).collect();
        let cert = Certificate::from_multipliers(&sys, mult).unwrap();
        prop_assert_eq!(parse_certificate(&write_certificate(&cert)).unwrap(), cert);
    }
}
