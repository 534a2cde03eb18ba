use fourth_moment::exponents::*;
use proptest::prelude::*;

fn ks() -> ThetaValue {
    ThetaValue::kim_sarnak()
}

#[test]
fn theta_from_tabulated_lambda() {
    assert_eq!(theta_from_lambda(&rat(975, 4096)).unwrap().value, rat(7, 64));
    assert_eq!(theta_from_lambda(&rat(1, 4)).unwrap().value, rat(0, 1));
    assert_eq!(theta_from_lambda(&rat(3, 16)).unwrap().value, rat(1, 4));
    assert!(theta_from_lambda(&rat(1, 5)).is_err());
    assert!(theta_from_lambda(&rat(-1, 5)).is_err());
}

#[test]
fn selberg_rows() {
    let t = selberg_table();
    assert_eq!(t.len(), 6);
    let thetas: Vec<_> = t.iter().map(|r| r.theta.clone()).collect();
    assert_eq!(thetas, vec![rat(1, 4), rat(1, 4), rat(5, 28), rat(3, 14), rat(5, 34), rat(7, 64)]);
    assert!(t.iter().all(|r| r.exact));
    assert_eq!(selberg_conjecture().theta, rat(0, 1));
}

#[test]
fn cutoff_exponents_at_kim_sarnak() {
    let c = balance_cutoff(&ks()).unwrap();
    assert_eq!(c.branch1.exponent(Symbol::Q), &rat(32, 57));
    assert_eq!(c.branch1.exponent(Symbol::M), &rat(1, 2));
    assert_eq!(c.branch1.exponent(Symbol::N), &rat(3, 38));
    assert_eq!(c.branch1.exponent(Symbol::L), &rat(-8, 57));
    assert_eq!(c.branch2.exponent(Symbol::Q), &rat(65, 57));
    assert!(c.branches_agree && c.closed_form_agrees);
}

#[test]
fn cutoff_at_theta_zero() {
    let c = balance_cutoff(&ThetaValue::conjectural()).unwrap();
    let expect = Monomial::from_pairs(&[
        (Symbol::L, rat(-1, 8)),
        (Symbol::Q, rat(1, 2)),
        (Symbol::M, rat(1, 2)),
        (Symbol::N, rat(1, 8)),
    ]);
    assert_eq!(c.branch1, expect);
    assert_eq!(c.branch2, Monomial::from_pairs(&[(Symbol::L, rat(-1, 8)), (Symbol::Q, rat(9, 8))]));
}

#[test]
fn error_terms_at_kim_sarnak() {
    let e = theorem1_error_exponents(&ks()).unwrap();
    assert_eq!(e.q_exponents(), [rat(-25, 228), rat(-1, 4), rat(-8, 57)]);
    assert_eq!(e.max_q_exponent(), rat(-25, 228));
    assert!(e.identities_hold);
    assert_eq!(e.rederived[0].exponent(Symbol::Q), &rat(-25, 228));
    assert_eq!(e.rederived[1].exponent(Symbol::Q), &rat(-8, 57));
}

#[test]
fn delta_values() {
    let d = subconvexity_delta(&ks()).unwrap();
    assert_eq!(d.delta, rat(25, 3136));
    assert_eq!(d.length_exponent, rat(25, 392));
    assert!(d.rederivation_agrees);
    assert_eq!(subconvexity_delta(&ThetaValue::conjectural()).unwrap().delta, rat(1, 112));
}

#[test]
fn mollifier_and_thresholds() {
    let m = mollifier_lengths(&ks()).unwrap();
    assert_eq!(m.delta1_formula, rat(25, 506));
    assert_eq!(m.delta1_constraints, [rat(25, 506), rat(1, 21), rat(4, 65)]);
    assert_eq!(m.delta1_min, rat(1, 21));
    assert_eq!(m.delta2, rat(25, 784));

    let t = lemma_thresholds(&ks()).unwrap();
    assert_eq!(t.lemma_range, rat(16, 73));
    assert_eq!(t.amplifier_range, rat(64, 691));
    assert_eq!(t.per_term, [rat(25, 253), rat(2, 21), rat(8, 65)]);
    assert_eq!(t.per_term_min, rat(2, 21));
}

#[test]
fn report_flags_known_mismatches() {
    let r = exponent_report(&ks()).unwrap();
    assert!(r.identities_hold());
    let flagged: Vec<_> = r.flagged().map(|d| (d.derived.clone(), d.stated.clone())).collect();
    assert!(flagged.contains(&(rat(25, 506), rat(25, 566))));
    assert!(flagged.contains(&(rat(1, 21), rat(25, 506))));
    assert!(flagged.contains(&(rat(2, 21), rat(64, 691))));
    assert_eq!(flagged.len(), 3);
}

#[test]
fn parse_theta() {
    assert_eq!(ThetaValue::parse("7/64").unwrap().value, rat(7, 64));
    assert_eq!(ThetaValue::parse("lambda:975/4096").unwrap().value, rat(7, 64));
    assert!(ThetaValue::parse("1/2").is_err());
    assert!(ThetaValue::parse("x").is_err());
}

fn theta_strategy() -> impl Strategy<Value = ThetaValue> {
    (0i64..1000, 1i64..1000).prop_map(|(a, b)| {
        // a/(4·(a+b)) ∈ [0, 1/4)
        ThetaValue::new(rat(a, 4 * (a + b)), "random").unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn symbolic_identities_hold(theta in theta_strategy()) {
        let r = exponent_report(&theta).unwrap();
        prop_assert!(r.identities_hold());
        prop_assert!(r.delta.delta > rat(0, 1));
    }

    #[test]
    fn decreasing_in_theta(a in theta_strategy(), b in theta_strategy()) {
        prop_assume!(a.value < b.value);
        let (da, db) = (subconvexity_delta(&a).unwrap(), subconvexity_delta(&b).unwrap());
        prop_assert!(da.delta > db.delta);
        let (ma, mb) = (mollifier_lengths(&a).unwrap(), mollifier_lengths(&b).unwrap());
        prop_assert!(ma.delta1_formula > mb.delta1_formula);
        prop_assert!(ma.delta2 > mb.delta2);
    }
}

#[test]
fn delta_decreasing_on_grid() {
    let grid: Vec<_> = (0..=64).map(|k| ThetaValue::new(rat(k, 256), "grid").unwrap()).collect();
    for w in grid.windows(2) {
        let (d0, d1) = (subconvexity_delta(&w[0]).unwrap(), subconvexity_delta(&w[1]).unwrap());
        assert!(d0.delta > d1.delta);
    }
}
