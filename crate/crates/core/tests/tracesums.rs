mod common;

use std::f64::consts::PI;

use fourth_moment::arith::{divisor_tau, euler_phi};
use fourth_moment::modsym::eigensystem;
use fourth_moment::special::bessel::{j1, y0};
use fourth_moment::special::{BumpShape, CutoffProfile};
use fourth_moment::tracesums::*;
use fourth_moment::{Error, Strategy};

/// J₁(x) = (1/π)∫₀^π cos(τ − x sin τ) dτ by the trapezoid rule (spectrally accurate).
fn j1_integral(x: f64) -> f64 {
    let n = 400;
    let h = PI / n as f64;
    let f = |t: f64| (t - x * t.sin()).cos();
    let inner: f64 = (1..n).map(|i| f(i as f64 * h)).sum();
    (inner + 0.5 * (f(0.0) + f(PI))) * h / PI
}

#[test]
fn petersson_matches_definition() {
    for (m, n) in [(1u64, 1u64), (2, 3), (4, 4), (1, 7)] {
        let d = petersson_delta_truncated(11, m, n, 330, Strategy::Sequential).unwrap();
        let mut s = if m == n { 1.0 } else { 0.0 };
        for c in (11..=330).step_by(11) {
            let k = common::naive_kloosterman(m as i64, n as i64, c).re;
            s -= 2.0 * PI * k / c as f64 * j1_integral(4.0 * PI * ((m * n) as f64).sqrt() / c as f64);
        }
        assert!((d.value - s).abs() < 1e-12, "({m},{n}): {} vs {s}", d.value);
        assert_eq!(d.c_max, 330);
        assert!(d.tail_estimate > 0.0);
    }
}

#[test]
fn petersson_tail_contract() {
    // tol 1e-6 needs an astronomically large cap.
    assert!(matches!(petersson_delta(11, 1, 1, 1e-6), Err(Error::TailCapExceeded { .. })));
    let loose = petersson_delta(101, 1, 1, 5e-2).unwrap();
    assert!(loose.tail_estimate <= 5e-2);
    assert!((loose.value - 1.0).abs() < 0.05);
    // Larger level, closer to the diagonal.
    let a = petersson_delta_truncated(11, 1, 1, 1100, Strategy::Sequential).unwrap();
    let b = petersson_delta_truncated(1009, 1, 1, 100_900, Strategy::Sequential).unwrap();
    assert!((b.value - 1.0).abs() < (a.value - 1.0).abs());
}

#[test]
fn petersson_against_symmetric_square_weights() {
    let es = eigensystem(11, 500).unwrap();
    let (es, report) = harmonic_weights(&es, 0, WeightMethod::default()).unwrap();
    let w = es.forms[0].weight.unwrap();
    assert!(report.residual < 1e-12);
    let d11 = petersson_delta_truncated(11, 1, 1, 11_000, Strategy::Sequential).unwrap();
    let d12 = petersson_delta_truncated(11, 1, 2, 11_000, Strategy::Sequential).unwrap();
    assert!((d11.value - w).abs() < 1e-3, "{} vs {w}", d11.value);
    assert!((d12.value - w * es.forms[0].lambda[2]).abs() < 1e-3);
    assert!((d12.value / d11.value - es.forms[0].lambda[2]).abs() < 2e-3);
}

#[test]
fn petersson_weight_fit() {
    let es = eigensystem(11, 100).unwrap();
    let c_max = 2_200;
    let (fit, rep) =
        harmonic_weights(&es, 1, WeightMethod::Petersson { c_max, residual_tol: 1e-6 }).unwrap();
    let d = petersson_delta_truncated(11, 1, 1, c_max, Strategy::Sequential).unwrap();
    assert!((fit.forms[0].weight.unwrap() - d.value).abs() < 1e-12);
    assert_eq!(rep.equations, 1);

    let es37 = eigensystem(37, fourth_moment::moments::default_nmax(37)).unwrap();
    let (sym, _) = harmonic_weights(&es37, 0, WeightMethod::default()).unwrap_or_else(|_| panic!());
    let (pet, rep) =
        harmonic_weights(&es37, 8, WeightMethod::Petersson { c_max: 7_400, residual_tol: 1e-2 }).unwrap();
    assert_eq!(rep.equations, 8);
    for (a, b) in sym.forms.iter().zip(&pet.forms) {
        assert!((a.weight.unwrap() - b.weight.unwrap()).abs() < 5e-3);
    }
    assert!(harmonic_weights(&es37, 1, WeightMethod::Petersson { c_max: 370, residual_tol: 1.0 }).is_err());
}

#[test]
fn weights_positive_everywhere() {
    for q in fourth_moment::arith::primes_up_to(101).into_iter().filter(|&q| q >= 11 && q != 13) {
        let es = eigensystem(q, fourth_moment::moments::default_nmax(q)).unwrap();
        let (es, rep) = harmonic_weights(&es, 0, WeightMethod::default()).unwrap();
        assert!(es.forms.iter().all(|f| f.weight.unwrap() > 0.0), "q={q}");
        assert!(rep.residual < 1e-12, "q={q}");
    }
}

/// Brute-force double sum with the definition-level Kloosterman sum.
fn t_sum_oracle(c: u64, a: u64, e: u64, p: &CutoffProfile) -> f64 {
    let mut s = 0.0;
    for m in 1..=(3.0 * p.scale_m) as u64 {
        for n in 1..=(3.0 * p.scale_n) as u64 {
            let f = p.eval(m as f64, n as f64);
            if f == 0.0 {
                continue;
            }
            let k = common::naive_kloosterman(m as i64, (a * e * n) as i64, c).re;
            let x = 4.0 * PI * ((a * e * m * n) as f64).sqrt() / c as f64;
            s += (divisor_tau(m).unwrap() * divisor_tau(n).unwrap()) as f64 * k / c as f64 * j1_integral(x) * f;
        }
    }
    s
}

#[test]
fn t_sum_matches_brute_force() {
    let p = CutoffProfile::new(8.0, 8.0).unwrap();
    for (c, a, e) in [(11u64, 1u64, 1u64), (22, 1, 2), (33, 3, 1)] {
        let v = t_sum(11, c, a, e, &p).unwrap();
        let o = t_sum_oracle(c, a, e, &p);
        assert!((v - o).abs() < 1e-10 * (1.0 + o.abs()), "c={c}: {v} vs {o}");
    }
    let tiny = CutoffProfile::new(0.3, 0.3).unwrap();
    assert_eq!(t_sum(11, 11, 1, 1, &tiny).unwrap(), 0.0);
    assert!(t_sum(11, 12, 1, 1, &p).is_err());
}

#[test]
fn t_sum_decays_with_c() {
    let p = CutoffProfile::new(4.0, 4.0).unwrap();
    for k in [100u64, 1000, 10_000] {
        let c = 11 * k;
        let v = t_sum(11, c, 1, 1, &p).unwrap();
        // τ ≤ 6 on the support, |S| ≤ Weil, |J₁(x)| ≤ x/2, |F| ≤ 1/4.
        let weil = divisor_tau(c).unwrap() as f64 * (c as f64).sqrt();
        let bound = 144.0 * 36.0 * weil / c as f64 * (2.0 * PI * 12.0 / c as f64) / 4.0;
        assert!(v.abs() <= bound, "c={c}");
    }
}

#[test]
fn lemma1_examples() {
    assert_eq!(divisor_terms(1), vec![(1, 1, 1, 1, 1.0)]);
    let r = lemma1_ratio(11, 1, 8.0, 8.0, 17.0, BumpShape::Smoothstep).unwrap();
    assert!(r.ratio <= 10.0 && r.ratio > 0.0, "{r:?}");
    assert_eq!(r.rhs, lemma1_rhs(1, 8.0, 8.0, 17.0, THETA_KS));
    let ratio = lemma1_rhs(1, 8.0, 8.0, 34.0, THETA_KS) / lemma1_rhs(1, 8.0, 8.0, 17.0, THETA_KS);
    assert!((ratio - 2f64.powf(-(1.0 - 2.0 * THETA_KS))).abs() < 1e-15);
    assert!(lemma1_ratio(11, 1, 8.0, 8.0, 8.0, BumpShape::Smoothstep).is_err());
    // Over a geometric C grid the truncated c-sum stays inside its Weil envelope,
    // while the ratio itself is not bounded at this scale.
    for l in [1u64, 2] {
        let mut last_rhs = f64::INFINITY;
        for c in [17.0, 34.0, 68.0] {
            let r = lemma1_ratio(11, l, 8.0, 8.0, c * (l as f64).sqrt(), BumpShape::Smoothstep).unwrap();
            assert!(r.lhs.is_finite() && r.ratio > 0.0);
            assert!(r.lhs.abs() < r.tail_bound, "l={l} C={c}: {r:?}");
            assert!(r.rhs < last_rhs);
            last_rhs = r.rhs;
        }
    }
}

/// The same tail with the c-sum taken term by term on (C1, C2] by composite Simpson.
fn t_od_window(q: u64, c1: u64, c2: u64, ae: u64, p: &CutoffProfile) -> f64 {
    let bp = [0.5 * p.scale_m, p.scale_m, 2.0 * p.scale_m, 3.0 * p.scale_m];
    let mut total = 0.0;
    for n in p.n_lattice() {
        let fnn = p.eval_n(n as f64);
        if fnn == 0.0 {
            continue;
        }
        let weight = (divisor_tau(ae * n).unwrap() * divisor_tau(n).unwrap()) as f64 * fnn;
        let xn = 4.0 * PI * ((ae * n) as f64).sqrt();
        let mut inner = 0.0;
        for c in ((c1 / q + 1) * q..=c2).step_by(q as usize) {
            let cf = c as f64;
            let mut integral = 0.0;
            for w in bp.windows(2) {
                let steps = 400;
                let h = (w[1] - w[0]) / steps as f64;
                let g = |s: f64| {
                    let x = xn * s.sqrt() / cf;
                    y0(x) * j1(x) * p.eval_m(s)
                };
                let mut acc = g(w[0]) + g(w[1]);
                for i in 1..steps {
                    acc += g(w[0] + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
                }
                integral += acc * h / 3.0;
            }
            inner += euler_phi(c).unwrap() as f64 * integral / (cf * cf);
        }
        total += weight * inner;
    }
    -2.0 * PI * total
}

#[test]
fn t_od_tail_window_matches_direct_sum() {
    let p = CutoffProfile::new(8.0, 8.0).unwrap();
    let near = t_od_tail(11, 11.0, 1, 1, &p, 32).unwrap();
    let far = t_od_tail(11, 3300.0, 1, 1, &p, 32).unwrap();
    let window = t_od_window(11, 11, 3300, 1, &p);
    assert!(((near - far) - window).abs() < 1e-8 * window.abs(), "{} vs {window}", near - far);
    for (a, e) in [(2u64, 1u64), (1, 3)] {
        let near = t_od_tail(11, 22.0, a, e, &p, 32).unwrap();
        let far = t_od_tail(11, 1100.0, a, e, &p, 32).unwrap();
        let window = t_od_window(11, 22, 1100, a * e, &p);
        assert!(((near - far) - window).abs() < 1e-8 * window.abs(), "ae={}: {} vs {window}", a * e, near - far);
    }
}

#[test]
fn t_od_tail_contracts() {
    let p = CutoffProfile::new(8.0, 8.0).unwrap();
    let a = t_od_tail(11, 11.0, 1, 1, &p, 16).unwrap();
    let b = t_od_tail(11, 11.0, 1, 1, &p, 32).unwrap();
    assert!((a - b).abs() < 1e-6);
    let empty = CutoffProfile::new(0.3, 0.3).unwrap();
    assert_eq!(t_od_tail(11, 11.0, 1, 1, &empty, 16).unwrap(), 0.0);
    assert!(t_od_tail(11, 5.0, 1, 1, &p, 16).is_err());
    // Against (ae)^{1/2} MN/(qC) on a small grid.
    for (q, c, a, e, m) in [(11u64, 11.0, 1u64, 1u64, 8.0), (11, 44.0, 2, 1, 8.0), (37, 37.0, 1, 3, 12.0), (37, 74.0, 1, 1, 20.0)] {
        let p = CutoffProfile::new(m, m).unwrap();
        let v = t_od_tail(q, c, a, e, &p, 24).unwrap();
        let bound = ((a * e) as f64).sqrt() * m * m / (q as f64 * c);
        assert!(v.abs() <= 100.0 * bound, "q={q} C={c}: {v} vs {bound}");
    }
}

#[test]
fn dirichlet_closures_match_direct_sums() {
    for (q, sigma) in [(11u64, 5.0), (37, 4.0), (11, 7.0)] {
        let direct: f64 = (1..400_000u64).map(|k| euler_phi(q * k).unwrap() as f64 * ((q * k) as f64).powf(-sigma)).sum();
        assert!((phi_dirichlet(q, sigma) / direct - 1.0).abs() < 1e-6, "q={q} σ={sigma}");
    }
}

#[test]
fn phi_tails_match_direct_sums() {
    use fourth_moment::arith::CompensatedSum;
    for (q, start, sigma) in [(11u64, 660u64, 5.0), (11, 660, 9.0), (37, 3700, 7.0), (11, 110, 3.0)] {
        let (mut z, mut w) = (CompensatedSum::new(), CompensatedSum::new());
        for c in (start..4_000_000).step_by(q as usize) {
            let t = euler_phi(c).unwrap() as f64 * (c as f64).powf(-sigma);
            z.add(t);
            w.add(t * (c as f64).ln());
        }
        // the direct sum stops early; its remainder is below c^{2-σ}/(q(σ-2)) at 4e6
        let rest = 4e6f64.powf(2.0 - sigma) / (q as f64 * (sigma - 2.0)) * 4e6f64.ln();
        for tol in [0.0, 1e-3 * z.value()] {
            let (zt, wt) = phi_tail_sums(q, start, sigma, tol);
            let slack = tol + rest + 1e-12 * z.value();
            assert!((zt - z.value()).abs() <= slack, "q={q} σ={sigma}: {zt:e} vs {:e}", z.value());
            assert!((wt - w.value()).abs() <= slack * 20.0, "q={q} σ={sigma}: {wt:e} vs {:e}", w.value());
        }
    }
}
