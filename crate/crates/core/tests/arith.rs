mod common;

use fourth_moment::arith::*;
use proptest::prelude::*;

#[test]
fn small_values() {
    assert_eq!(divisor_tau(1).unwrap(), 1);
    assert_eq!(divisor_tau(12).unwrap(), 6);
    assert_eq!(divisor_tau(97).unwrap(), 2);
    assert_eq!(mobius(1).unwrap(), 1);
    assert_eq!(mobius(4).unwrap(), 0);
    assert_eq!(mobius(30).unwrap(), -1);
    assert_eq!(euler_phi(1).unwrap(), 1);
    assert_eq!(euler_phi(12).unwrap(), 4);
    assert_eq!(euler_phi(101).unwrap(), 100);
    assert!(divisor_tau(0).is_err() && mobius(0).is_err() && euler_phi(0).is_err());
    // Beyond the sieve bound.
    assert_eq!(divisor_tau(1_000_003 * 2).unwrap(), 4);
    assert_eq!(euler_phi(1_000_003).unwrap(), 1_000_002);
}

#[test]
fn kloosterman_small_moduli() {
    assert_eq!(kloosterman(1, 1, 1).unwrap(), 1.0);
    assert!((kloosterman(1, 1, 2).unwrap() - 1.0).abs() < 1e-15);
    assert!((kloosterman(1, 1, 3).unwrap() + 1.0).abs() < 1e-15);
    assert!(kloosterman(1, 1, 0).is_err());
}

#[test]
fn kloosterman_matches_definition() {
    for c in 1..=60u64 {
        for (m, n) in [(1i64, 1i64), (2, 7), (-3, 5), (0, 4), (13, -11)] {
            let z = common::naive_kloosterman(m, n, c);
            assert!(z.im.abs() < 1e-10);
            assert!((z.re - kloosterman(m, n, c).unwrap()).abs() < 1e-10, "({m},{n};{c})");
        }
    }
}

#[test]
fn kloosterman_symmetry() {
    assert!(common::symmetry_defect(60) < 1e-11);
}

#[test]
fn kloosterman_twisted_multiplicativity() {
    assert!(common::twisted_multiplicativity_defect(200) < 1e-9);
}

#[test]
fn kloosterman_weil_bound() {
    assert!(common::weil_ratio(500) <= 1.0 + 1e-12);
}

#[test]
fn ramanujan_degeneration() {
    assert!(common::ramanujan_defect(200) < 1e-12);
}

#[test]
fn arithmetic_functions_multiplicative() {
    assert_eq!(common::multiplicativity_failures(10_000), 0);
}

#[test]
fn table_is_shared_and_symmetric() {
    let t = KloostermanTable::new(50);
    let a = t.get(3, 8, 35).unwrap();
    let b = t.get(8 + 35, 3 - 70, 35).unwrap();
    assert_eq!(a, b);
    assert_eq!(t.len(), 1);
    assert!(t.get(1, 1, 51).is_err());
}

proptest! {
    #[test]
    fn periodic_in_arguments(m in -500i64..500, n in -500i64..500, c in 1u64..300, k in -3i64..3) {
        let a = kloosterman(m, n, c).unwrap();
        let b = kloosterman(m + k * c as i64, n - k * c as i64, c).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!(a.abs() <= weil_bound(m, n, c) + 1e-9);
    }

    #[test]
    fn inverse_is_inverse(a in -10_000i64..10_000, m in 2u64..10_000) {
        match mod_inverse(a, m) {
            Some(x) => prop_assert_eq!(mul_mod(modulo(a, m), x, m), 1),
            None => prop_assert!(common::gcd(a.unsigned_abs(), m) != 1),
        }
    }

    #[test]
    fn compensated_matches_exact(xs in proptest::collection::vec(-1e6f64..1e6, 0..200)) {
        // Integers sum exactly in i128.
        let ints: Vec<f64> = xs.iter().map(|x| x.round()).collect();
        let exact: i128 = ints.iter().map(|&x| x as i128).sum();
        prop_assert_eq!(compensated_sum(ints.iter().copied()), exact as f64);
    }
}
