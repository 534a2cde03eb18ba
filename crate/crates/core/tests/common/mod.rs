//! Independent oracles shared by the integration tests and the acceptance target.
#![allow(dead_code)]

use std::f64::consts::PI;

use fourth_moment::arith::{divisor_tau, euler_phi, kloosterman, mobius, weil_bound};
use fourth_moment::sieve::{DyadicSequence, SieveInstance};
use num_complex::Complex64;

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Inverse by exhaustive search.
pub fn brute_inverse(a: u64, m: u64) -> Option<u64> {
    (0..m).find(|&x| (a % m) * x % m == 1 % m)
}

/// Σ_{x unit} e((mx + n x̄)/c), summed from the definition.
pub fn naive_kloosterman(m: i64, n: i64, c: u64) -> Complex64 {
    let (mm, nn) = (m.rem_euclid(c as i64) as u64, n.rem_euclid(c as i64) as u64);
    (0..c)
        .filter(|&x| gcd(x, c) == 1)
        .map(|x| {
            let xb = brute_inverse(x, c).unwrap();
            let k = (mm * x + nn * xb) % c;
            Complex64::from_polar(1.0, 2.0 * PI * k as f64 / c as f64)
        })
        .sum()
}

/// Largest |S(m,n;c) − S(n,m;c)| over 0 ≤ m,n < c ≤ c_max.
pub fn symmetry_defect(c_max: u64) -> f64 {
    let mut worst = 0.0f64;
    for c in 1..=c_max {
        for m in 0..c as i64 {
            for n in m..c as i64 {
                let d = (kloosterman(m, n, c).unwrap() - kloosterman(n, m, c).unwrap()).abs();
                worst = worst.max(d);
            }
        }
    }
    worst
}

/// Largest defect of S(m,n;c₁c₂) = S(m c̄₂, n c̄₂; c₁) S(m c̄₁, n c̄₁; c₂)
/// over coprime c₁, c₂ ≥ 2 with c₁c₂ ≤ bound and all m, n mod c₁c₂.
pub fn twisted_multiplicativity_defect(bound: u64) -> f64 {
    let mut worst = 0.0f64;
    for c1 in 2..=bound {
        for c2 in 2..=bound / c1 {
            if gcd(c1, c2) != 1 {
                continue;
            }
            let c = c1 * c2;
            let i1 = brute_inverse(c1, c2).unwrap() as i64;
            let i2 = brute_inverse(c2, c1).unwrap() as i64;
            let k1 = fourth_moment::arith::KloostermanModulus::new(c1);
            let k2 = fourth_moment::arith::KloostermanModulus::new(c2);
            let k = fourth_moment::arith::KloostermanModulus::new(c);
            for m in 0..c as i64 {
                for n in 0..c as i64 {
                    let lhs = k.sum(m, n);
                    let rhs = k1.sum(m * i2, n * i2) * k2.sum(m * i1, n * i1);
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
    }
    worst
}

/// Largest |S|/Weil over 1 ≤ m,n ≤ 20, c ≤ c_max.
pub fn weil_ratio(c_max: u64) -> f64 {
    let mut worst = 0.0f64;
    for c in 1..=c_max {
        let k = fourth_moment::arith::KloostermanModulus::new(c);
        for m in 1..=20 {
            for n in 1..=20 {
                worst = worst.max(k.sum(m, n).abs() / weil_bound(m, n, c));
            }
        }
    }
    worst
}

/// Largest |S(0,1;c) − μ(c)| over c ≤ c_max.
pub fn ramanujan_defect(c_max: u64) -> f64 {
    (1..=c_max)
        .map(|c| (kloosterman(0, 1, c).unwrap() - mobius(c).unwrap() as f64).abs())
        .fold(0.0, f64::max)
}

/// Coprime pairs (a, b) with ab ≤ bound where τ, μ or φ fail multiplicativity.
pub fn multiplicativity_failures(bound: u64) -> usize {
    let mut bad = 0;
    for a in 1..=bound {
        for b in 1..=bound / a {
            if gcd(a, b) != 1 {
                continue;
            }
            let ab = a * b;
            let ok = divisor_tau(ab).unwrap() == divisor_tau(a).unwrap() * divisor_tau(b).unwrap()
                && mobius(ab).unwrap() == mobius(a).unwrap() * mobius(b).unwrap()
                && euler_phi(ab).unwrap() == euler_phi(a).unwrap() * euler_phi(b).unwrap();
            bad += usize::from(!ok);
        }
    }
    bad
}

/// Coefficients of q ∏ (1 − qⁿ)² (1 − q^{11n})² up to q^len.
pub fn eta_product_11(len: usize) -> Vec<i64> {
    let mut c = vec![0i64; len + 1];
    c[1] = 1;
    for n in 1..=len {
        for step in [n, n, 11 * n, 11 * n] {
            if step > len {
                continue;
            }
            for k in (step..=len).rev() {
                c[k] -= c[k - step];
            }
        }
    }
    c
}

/// L(f, 1/2) for the level-11 form: 2 Σ a_n/n e^{−2πn/√11}.
pub fn eta_central_value_11() -> f64 {
    let a = eta_product_11(200);
    2.0 * (1..=200).map(|n| a[n] as f64 / n as f64 * (-2.0 * PI * n as f64 / 11f64.sqrt()).exp()).sum::<f64>()
}

/// p − #{(x, y) mod p} on y² + a1xy + a3y = x³ + a2x² + a4x + a6.
pub fn trace_of_frobenius(coeffs: [i64; 5], p: i64) -> i64 {
    let [a1, a2, a3, a4, a6] = coeffs;
    let m = |v: i64| v.rem_euclid(p);
    let mut count = 0;
    for x in 0..p {
        let rhs = m(m(m(x * x) * x) + m(a2 * m(x * x)) + m(a4 * x) + a6);
        for y in 0..p {
            if m(m(y * y) + m(a1 * m(x * y)) + m(a3 * y)) == rhs {
                count += 1;
            }
        }
    }
    p - count
}

pub const CURVE_11A: [i64; 5] = [0, -1, 1, -10, -20];
pub const CURVE_37A: [i64; 5] = [0, 0, 1, -1, 0];
pub const CURVE_37B: [i64; 5] = [0, 1, 1, -23, -50];

/// Triple loop over (c, m, n) with S from its definition.
pub fn naive_trilinear(inst: &SieveInstance) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let (clo, chi) = DyadicSequence::range(inst.scale_c);
    for c in clo..=chi {
        if gcd(c, inst.r) != 1 {
            continue;
        }
        let gc = inst.g.factor_c(c as f64);
        if gc == 0.0 {
            continue;
        }
        let k = inst.s * c;
        let rbar = brute_inverse(inst.r, k).unwrap();
        let units: Vec<(u64, u64)> =
            (0..k).filter(|&u| gcd(u, k) == 1).map(|u| (u, brute_inverse(u, k).unwrap())).collect();
        for (m, am) in inst.a.iter() {
            let gm = inst.g.factor_m(m as f64);
            for (n, bn) in inst.b.iter() {
                let gn = inst.g.factor_n(n as f64);
                if gm * gn == 0.0 {
                    continue;
                }
                let x = inst.d * m % k * rbar % k;
                let y = if inst.sign > 0 { n % k } else { (k - n % k) % k };
                let s: f64 = units
                    .iter()
                    .map(|&(u, ub)| (2.0 * PI * ((x * u + y * ub) % k) as f64 / k as f64).cos())
                    .sum();
                total += am * bn * (gm * gn * gc * s);
            }
        }
    }
    total
}
