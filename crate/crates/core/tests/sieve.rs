mod common;

use fourth_moment::sieve::*;
use fourth_moment::special::sieve_test_function;
use fourth_moment::Strategy;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn fft_route_matches_naive_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for kind in [SequenceKind::Rademacher, SequenceKind::UnitCircle, SequenceKind::Singleton] {
        for _ in 0..4 {
            let inst = random_instance(&mut rng, 32.0, kind).unwrap();
            let fast = trilinear_sum(&inst);
            let slow = common::naive_trilinear(&inst);
            assert!((fast - slow).norm() < 1e-8 * (1.0 + slow.norm()), "{fast} vs {slow}");
        }
    }
}

#[test]
fn parameter_collapse_and_singletons() {
    let g = sieve_test_function(10.0, 12.0, 9.0).unwrap();
    let mut a = DyadicSequence::zeros(10.0);
    let mut b = DyadicSequence::zeros(12.0);
    a.values[4] = Complex64::new(1.0, 0.0);
    b.values[7] = Complex64::new(1.0, 0.0);
    let (m0, n0) = (a.first + 4, b.first + 7);
    let inst = SieveInstance::new((1, 1, 1), a, b, g, 1).unwrap();
    let expect: f64 = (10..=18)
        .map(|c| g.eval(m0 as f64, n0 as f64, c as f64) * fourth_moment::arith::kloosterman(m0 as i64, n0 as i64, c).unwrap())
        .sum();
    let got = trilinear_sum(&inst);
    assert!((got.re - expect).abs() < 1e-12 && got.im.abs() < 1e-12);
}

#[test]
fn rejects_bad_parameters() {
    let g = sieve_test_function(4.0, 4.0, 4.0).unwrap();
    let (a, b) = (DyadicSequence::zeros(4.0), DyadicSequence::zeros(4.0));
    assert!(SieveInstance::new((2, 4, 1), a.clone(), b.clone(), g, 1).is_err());
    assert!(SieveInstance::new((4, 1, 1), a.clone(), b.clone(), g, 1).is_err());
    assert!(SieveInstance::new((1, 1, 1), a.clone(), b.clone(), g, 0).is_err());
    assert!(SieveInstance::new((3, 5, 2), a, b, g, -1).is_ok());
}

#[test]
fn rhs_unit_instance() {
    let g = sieve_test_function(1.0, 1.0, 1.0).unwrap();
    let one = DyadicSequence { first: 2, values: vec![Complex64::new(1.0, 0.0)] };
    let inst = SieveInstance::new((1, 1, 1), one.clone(), one, g, 1).unwrap();
    assert_eq!(inst.x_d(), 1.0);
    for theta in [0.0, 7.0 / 64.0, 0.25] {
        let want = 9.0 * 2f64.powf(2.0 * theta - 1.0);
        assert!((ls_bound_rhs(&inst, theta) - want).abs() < 1e-12);
    }
}

#[test]
fn rhs_theta_ratio_small_x() {
    let g = sieve_test_function(2.0, 3.0, 50.0).unwrap();
    let a = DyadicSequence { first: 3, values: vec![Complex64::new(1.0, 0.0)] };
    let b = DyadicSequence { first: 4, values: vec![Complex64::new(1.0, 0.0)] };
    let inst = SieveInstance::new((1, 1, 5), a, b, g, 1).unwrap();
    let x = inst.x_d();
    assert!(x < 1.0);
    let ratio = ls_bound_rhs(&inst, 7.0 / 64.0) / ls_bound_rhs(&inst, 0.0);
    let want = (5.0 * (1.0 + 1.0 / x).powi(2)).powf(7.0 / 64.0);
    assert!((ratio / want - 1.0).abs() < 1e-12);
}

#[test]
fn experiment_is_deterministic() {
    let a = ratio_experiment_with(4, 48.0, 9, SequenceKind::Rademacher, Strategy::Sequential).unwrap();
    let b = ratio_experiment_with(4, 48.0, 9, SequenceKind::Rademacher, Strategy::Parallel).unwrap();
    assert_eq!(a, b);
    assert!(a.max >= a.mean && a.mean > 0.0);
}

#[test]
fn singleton_trial_ratio() {
    let stats = ratio_experiment_with(1, 20.0, 3, SequenceKind::Singleton, Strategy::Sequential).unwrap();
    let t = &stats.trials[0];
    assert_eq!(t.ratio, t.value.norm() / t.rhs);
    assert_eq!(stats.max, t.ratio);
}

/// Instance with singleton unit sequences, so the norms are fixed at 1.
fn unit_instance(m: f64, n: f64, c: f64) -> SieveInstance {
    let one = |scale: f64| DyadicSequence { first: DyadicSequence::range(scale).0, values: vec![Complex64::new(1.0, 0.0)] };
    SieveInstance::new((1, 2, 3), one(m), one(n), sieve_test_function(m, n, c).unwrap(), 1).unwrap()
}

proptest! {
    #[test]
    fn rhs_monotone_in_scales(m in 1.0f64..100.0, n in 1.0f64..100.0, c in 1.0f64..100.0, dm in 0.0f64..50.0, dn in 0.0f64..50.0) {
        let base = ls_bound_rhs(&unit_instance(m, n, c), 7.0 / 64.0);
        prop_assert!(ls_bound_rhs(&unit_instance(m + dm, n, c), 7.0 / 64.0) >= base * (1.0 - 1e-12));
        prop_assert!(ls_bound_rhs(&unit_instance(m, n + dn, c), 7.0 / 64.0) >= base * (1.0 - 1e-12));
    }
}
