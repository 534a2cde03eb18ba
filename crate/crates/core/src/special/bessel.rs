//! Bessel J₀, J₁ and Y₀: double-double power series below x = 12, Hankel
//! asymptotic expansion (optimally truncated) at and above it.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::dd::Dd;
use crate::error::{Error, Result};

/// Switch point between power series and asymptotic expansion.
pub const SERIES_LIMIT: f64 = 12.0;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn check_nonneg(x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::InvalidArgument(format!("Bessel argument must be finite and ≥ 0, got {x}")));
    }
    Ok(())
}

/// J₁(x), absolute error ≤ 1e-12.
pub fn bessel_j1(x: f64) -> Result<f64> {
    check_nonneg(x)?;
    Ok(j1(x))
}

/// J₀(x), absolute error ≤ 1e-12.
pub fn bessel_j0(x: f64) -> Result<f64> {
    check_nonneg(x)?;
    Ok(j0(x))
}

/// Y₀(x) for x > 0, absolute error ≤ 1e-10.
pub fn bessel_y0(x: f64) -> Result<f64> {
    check_nonneg(x)?;
    if x == 0.0 {
        return Err(Error::InvalidArgument("Y0 is singular at 0".into()));
    }
    Ok(y0(x))
}

/// Unchecked J₁ for hot loops; x must be finite and ≥ 0.
#[inline]
pub fn j1(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < SERIES_LIMIT {
        j1_series(x)
    } else {
        j1_asymptotic(x)
    }
}

#[inline]
pub fn j0(x: f64) -> f64 {
    if x < SERIES_LIMIT {
        j0_series(x)
    } else {
        j0_asymptotic(x)
    }
}

/// Unchecked Y₀; x must be finite and > 0.
#[inline]
pub fn y0(x: f64) -> f64 {
    if x < SERIES_LIMIT {
        y0_series(x)
    } else {
        y0_asymptotic(x)
    }
}

fn half_square(x: f64) -> Dd {
    let h = Dd::from_f64(0.5 * x);
    h.mul(h)
}

fn series_done(t: Dd, k: usize, x: f64) -> bool {
    k as f64 > 0.5 * x && t.hi.abs() < 1e-34
}

/// Σ (−1)^k (x/2)^{2k+1} / (k!(k+1)!)
pub fn j1_series(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let y = half_square(x);
    let mut t = Dd::from_f64(0.5 * x);
    let mut s = t;
    let mut k = 0usize;
    loop {
        t = t.mul(y).div_f64(((k + 1) * (k + 2)) as f64).neg();
        s = s.add(t);
        k += 1;
        if series_done(t, k, x) {
            return s.to_f64();
        }
    }
}

fn j0_series_dd(x: f64) -> Dd {
    let y = half_square(x);
    let mut t = Dd::from_f64(1.0);
    let mut s = t;
    let mut k = 0usize;
    loop {
        let kk = (k + 1) as f64;
        t = t.mul(y).div_f64(kk * kk).neg();
        s = s.add(t);
        k += 1;
        if series_done(t, k, x) {
            return s;
        }
    }
}

/// Σ (−1)^k (x/2)^{2k} / (k!)²
pub fn j0_series(x: f64) -> f64 {
    j0_series_dd(x).to_f64()
}

/// (2/π)[(ln(x/2) + γ) J₀(x) + Σ_{k≥1} (−1)^{k+1} H_k (x/2)^{2k}/(k!)²]
pub fn y0_series(x: f64) -> f64 {
    let y = half_square(x);
    let mut u = Dd::from_f64(1.0);
    let mut h = Dd::ZERO;
    let mut r = Dd::ZERO;
    let mut k = 0usize;
    loop {
        k += 1;
        let kk = k as f64;
        u = u.mul(y).div_f64(kk * kk);
        h = h.add(Dd::recip(kk));
        let term = u.mul(h);
        r = if k % 2 == 1 { r.add(term) } else { r.add(term.neg()) };
        if series_done(term, k, x) {
            break;
        }
    }
    let lead = ((0.5 * x).ln() + EULER_GAMMA) * j0_series_dd(x).to_f64();
    (2.0 / PI) * (lead + r.to_f64())
}

/// P and Q of the Hankel expansion for order ν, optimally truncated.
fn hankel_pq(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let (mut p, mut q) = (1.0, 0.0);
    let mut term = 1.0f64;
    let mut k = 1usize;
    loop {
        let next = term * (mu - ((2 * k - 1) * (2 * k - 1)) as f64) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() || next == 0.0 {
            break;
        }
        term = next;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if term.abs() < 1e-18 {
            break;
        }
        k += 1;
    }
    (p, q)
}

pub fn j1_asymptotic(x: f64) -> f64 {
    let (p, q) = hankel_pq(1.0, x);
    let (s, c) = x.sin_cos();
    // χ = x − 3π/4
    let cos_chi = (s - c) * FRAC_1_SQRT_2;
    let sin_chi = -(s + c) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

pub fn j0_asymptotic(x: f64) -> f64 {
    let (p, q) = hankel_pq(0.0, x);
    let (s, c) = x.sin_cos();
    // χ = x − π/4
    let cos_chi = (s + c) * FRAC_1_SQRT_2;
    let sin_chi = (s - c) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

pub fn y0_asymptotic(x: f64) -> f64 {
    let (p, q) = hankel_pq(0.0, x);
    let (s, c) = x.sin_cos();
    let cos_chi = (s + c) * FRAC_1_SQRT_2;
    let sin_chi = (s - c) * FRAC_1_SQRT_2;
    (2.0 / (PI * x)).sqrt() * (p * sin_chi + q * cos_chi)
}
