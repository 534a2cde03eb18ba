//! Complex log-gamma (Stirling with upward shift) and real ζ(s), ζ'(s) for
//! s > 1 (Euler–Maclaurin).

use num_complex::Complex64;
use std::f64::consts::PI;

// B_{2k}/(2k(2k−1)), k = 1..9
const STIRLING: [f64; 9] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
];

/// A branch of ln Γ(z) for Re z > 0; exp(ln_gamma(z)) = Γ(z).
pub fn ln_gamma(z: Complex64) -> Complex64 {
    let mut shift = Complex64::new(0.0, 0.0);
    let mut z = z;
    while z.norm() < 15.0 {
        shift += z.ln();
        z += 1.0;
    }
    let zinv = z.inv();
    let zinv2 = zinv * zinv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = zinv;
    for c in STIRLING {
        series += pow * c;
        pow *= zinv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series - shift
}

/// Γ(z) for Re z > 0.
pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

// B_{2k}/(2k)!, k = 1..7
const EM: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
];

const EM_N: usize = 12;

/// Riemann ζ(s) for real s > 1.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta needs s > 1");
    let n = EM_N as f64;
    let mut acc: f64 = (1..EM_N).map(|k| (k as f64).powf(-s)).sum();
    acc += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    let mut rising = s; // s(s+1)…(s+2k−2)
    for (k, b) in EM.iter().enumerate() {
        let k = k + 1;
        acc += b * rising * n.powf(-s - (2 * k - 1) as f64);
        rising *= (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
    }
    acc
}

/// ζ'(s) for real s > 1.
pub fn zeta_prime(s: f64) -> f64 {
    assert!(s > 1.0, "zeta needs s > 1");
    let n = EM_N as f64;
    let ln_n = n.ln();
    let mut acc: f64 = (2..EM_N).map(|k| -(k as f64).ln() * (k as f64).powf(-s)).sum();
    acc += n.powf(1.0 - s) * (-ln_n / (s - 1.0) - 1.0 / ((s - 1.0) * (s - 1.0)));
    acc += -0.5 * ln_n * n.powf(-s);
    let mut rising = s;
    let mut log_deriv = 1.0 / s; // d/ds ln(rising)
    for (k, b) in EM.iter().enumerate() {
        let k = k + 1;
        let tail = n.powf(-s - (2 * k - 1) as f64);
        acc += b * rising * tail * (log_deriv - ln_n);
        let (a1, a2) = (s + (2 * k - 1) as f64, s + (2 * k) as f64);
        rising *= a1 * a2;
        log_deriv += 1.0 / a1 + 1.0 / a2;
    }
    acc
}


/// (Σ_{i≥start} i^{-s}, Σ_{i≥start} i^{-s} ln i) for real s > 1, start ≥ 1.
pub fn hurwitz_pair(s: f64, start: u64) -> (f64, f64) {
    assert!(s > 1.0 && start >= 1, "hurwitz_pair needs s > 1 and start ≥ 1");
    let n0 = start.max(EM_N as u64 + 2 * s.ceil() as u64);
    let (mut z, mut w) = (0.0, 0.0);
    for i in start..n0 {
        let x = i as f64;
        let t = x.powf(-s);
        z += t;
        w += t * x.ln();
    }
    let n = n0 as f64;
    let ln_n = n.ln();
    let base = n.powf(1.0 - s);
    z += base / (s - 1.0) + 0.5 * n.powf(-s);
    w += base * (ln_n / (s - 1.0) + 1.0 / ((s - 1.0) * (s - 1.0))) + 0.5 * n.powf(-s) * ln_n;
    // f^{(r)}(x) = x^{-s-r} (p_r ln x + q_r) for f = x^{-s} ln x; p_r alone for x^{-s}
    let (mut p, mut q) = (1.0, 0.0);
    let mut r = 0;
    for (k, b) in EM.iter().enumerate() {
        while r < 2 * k + 1 {
            let c = -s - r as f64;
            q = c * q + p;
            p *= c;
            r += 1;
        }
        let pw = n.powf(-s - r as f64);
        z -= b * p * pw;
        w -= b * pw * (p * ln_n + q);
    }
    (z, w)
}
