mod support;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use ontic_core::lp::{verify_certificate, LpOutcome, RationalSystem};
use ontic_core::ontology::PauliAxis;
use ontic_core::theorem::{build_moment_system, moment_report, solve_feasibility};
use ontic_core::{QSqrt3, Ray};
use support::oracle::oracle_feasible;

type Gaussian = [(i64, i64); 2];

fn exact_ray(v: &Gaussian) -> Ray<QSqrt3> {
    Ray::new(
        v.iter()
            .map(|&(re, im)| Complex::new(QSqrt3::ratio(re, 1), QSqrt3::ratio(im, 1)))
            .collect(),
    )
    .unwrap()
}

/// `|⟨g, h⟩|² / (|g|²|h|²)` in integer arithmetic.
fn integer_overlap(g: &Gaussian, h: &Gaussian) -> BigRational {
    let (mut re, mut im) = (0i64, 0i64);
    for (&(a, b), &(c, d)) in g.iter().zip(h) {
        // conj(a + bi)·(c + di)
        re += a * c + b * d;
        im += a * d - b * c;
    }
    let norm = |v: &Gaussian| v.iter().map(|&(a, b)| a * a + b * b).sum::<i64>();
    BigRational::new(BigInt::from(re * re + im * im), BigInt::from(norm(g) * norm(h)))
}

/// The moment rows written out directly from the overlaps.
fn oracle_system(rays: &[Gaussian]) -> RationalSystem {
    let n = rays.len();
    let atoms = 1usize << n;
    let bit = |a: usize, i: usize| (a >> (n - 1 - i)) & 1 == 1;
    let one = |p: bool| if p { BigRational::one() } else { BigRational::zero() };
    let half = BigRational::new(1.into(), 2.into());
    let mut rows = vec![(0..atoms).map(|_| BigRational::one()).collect::<Vec<_>>()];
    let mut rhs = vec![BigRational::one()];
    for i in 0..n {
        rows.push((0..atoms).map(|a| one(bit(a, i))).collect());
        rhs.push(half.clone());
    }
    for i in 0..n {
        for j in i + 1..n {
            rows.push((0..atoms).map(|a| one(bit(a, i) && bit(a, j))).collect());
            rhs.push(&half * integer_overlap(&rays[i], &rays[j]));
        }
    }
    RationalSystem::new(rows, rhs).unwrap()
}

fn gaussian_ray() -> impl Strategy<Value = Gaussian> {
    [(-3i64..=3, -3i64..=3), (-3i64..=3, -3i64..=3)]
        .prop_filter("nonzero", |v| v.iter().any(|&(a, b)| a != 0 || b != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn moment_feasibility_matches_oracle(rays in prop::collection::vec(gaussian_ray(), 1..=3)) {
        let named: Vec<(String, Ray<QSqrt3>)> = rays
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("g{}", i + 1), exact_ray(v)))
            .collect();
        let system = build_moment_system(&named).unwrap();
        let expected = oracle_system(&rays);
        prop_assert_eq!(system.system(), &expected);
        let outcome = solve_feasibility(&system).unwrap();
        prop_assert_eq!(outcome.is_feasible(), oracle_feasible(&expected));
        match &outcome {
            LpOutcome::Feasible(x) => prop_assert!(expected.satisfied_by(x)),
            LpOutcome::Infeasible(c) => prop_assert!(verify_certificate(&expected, c).unwrap()),
        }
    }
}

#[test]
fn mutually_unbiased_triple_is_feasible() {
    let rays: Vec<(String, Ray<QSqrt3>)> = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z]
        .into_iter()
        .map(|a| (format!("+{}", a.name()), a.eigenray(true)))
        .collect();
    let report = moment_report(&rays).unwrap();
    for i in 0..3 {
        for j in i + 1..3 {
            assert_eq!(*report.system.overlap(i, j), BigRational::new(1.into(), 2.into()));
        }
    }
    assert!(report.outcome.is_feasible());
    assert!(report.verified);
    assert_eq!(report.cross_check, Some(true));
    let gaussians: [Gaussian; 3] = [[(1, 0), (1, 0)], [(1, 0), (0, 1)], [(1, 0), (0, 0)]];
    assert!(oracle_feasible(&oracle_system(&gaussians)));
}

#[test]
fn five_indicators_stay_exact() {
    // real rays with rational pairwise overlaps; beyond the enumeration limits
    let rays: Vec<(String, Ray<QSqrt3>)> = [[(1, 0), (0, 0)], [(0, 0), (1, 0)], [(3, 0), (4, 0)], [(4, 0), (-3, 0)], [(1, 0), (1, 0)]]
        .iter()
        .enumerate()
        .map(|(i, v)| (format!("g{}", i + 1), exact_ray(v)))
        .collect();
    let report = moment_report(&rays).unwrap();
    assert_eq!(report.system.atom_count(), 32);
    assert!(report.verified);
    assert_eq!(report.cross_check, None);
}
