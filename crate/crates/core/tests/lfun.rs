mod common;

use std::f64::consts::PI;

use fourth_moment::arith::primes_up_to;
use fourth_moment::lfun::*;
use fourth_moment::modsym::eigensystem;
use fourth_moment::Strategy;

#[test]
fn eta_product_oracle_level_11() {
    let a = common::eta_product_11(200);
    assert_eq!(&a[1..11], &[1, -2, -1, 2, 1, 2, -2, 0, -2, -2]);
    let oracle = common::eta_central_value_11();
    assert!((oracle - 0.2538418609).abs() < 1e-9);

    let mut es = eigensystem(11, 200).unwrap();
    for n in 1..=200 {
        assert!((es.forms[0].lambda[n] * (n as f64).sqrt() - a[n] as f64).abs() < 1e-8, "n={n}");
    }
    fill_root_numbers(&mut es).unwrap();
    let cv = central_value(&es, 0).unwrap();
    assert_eq!(cv.epsilon, 1);
    assert!((cv.value - oracle).abs() < 1e-6);
    assert!(cv.est_error < 1e-8);
}

#[test]
fn odd_forms_vanish_exactly() {
    let es = eigensystem(37, 200).unwrap();
    let vals = central_values(&es, Strategy::Sequential).unwrap();
    let odd: Vec<_> = vals.iter().filter(|v| v.epsilon == -1).collect();
    assert_eq!(odd.len(), 1);
    assert_eq!(odd[0].value, 0.0);
    assert!((es.forms[odd[0].form_index].lambda[2] + 2f64.sqrt()).abs() < 1e-8);
    assert!(vals.iter().any(|v| v.epsilon == 1 && v.value > 0.5));
}

#[test]
fn afe_is_independent_of_a_and_sign_tracks_lambda_q() {
    for q in primes_up_to(101).into_iter().filter(|&q| q >= 11) {
        let es = eigensystem(q, 200).unwrap();
        for f in 0..es.len() {
            let eps = root_number(&es, f).unwrap();
            let at = |a: f64| afe_sum(&es, f, a).unwrap() + eps as f64 * afe_sum(&es, f, 1.0 / a).unwrap();
            assert!((at(1.0) - at(0.8)).abs() < 1e-8, "q={q} f={f}");
            assert!((at(0.8) - at(1.25)).abs() < 1e-8);
        }
        for (f, eps, sign_lq) in sign_table(&es).unwrap() {
            assert_eq!(eps, sign_lq, "q={q} f={f}");
        }
    }
}

#[test]
fn truncation_length_formula() {
    for q in [11u64, 101] {
        let n = afe_terms_needed(q, 1.0, AFE_TOL);
        let r = (-2.0 * PI / (q as f64).sqrt()).exp();
        assert!(2.0 * r.powi(n as i32 + 1) / (1.0 - r) <= AFE_TOL);
        assert!(2.0 * r.powi(n as i32) / (1.0 - r) > AFE_TOL);
    }
    let es = eigensystem(101, 20).unwrap();
    assert!(matches!(central_value(&es, 0), Err(fourth_moment::Error::InsufficientCoefficients { .. })));
}
