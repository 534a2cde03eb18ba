//! Petersson delta Δ_q(m,n) = δ_{m=n} − 2π Σ_{q|c} S(m,n;c)/c · J₁(4π√(mn)/c).

use std::f64::consts::PI;

use crate::arith::{gcd, CompensatedSum, KloostermanModulus};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::special::bessel::j1;

/// Default hard cap on c for automatic truncation.
pub const DEFAULT_HARD_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeterssonDelta {
    pub level: u64,
    pub m: u64,
    pub n: u64,
    pub value: f64,
    pub c_max: u64,
    pub tail_estimate: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct PeterssonConfig {
    pub hard_cap: u64,
    pub strategy: Strategy,
}

impl Default for PeterssonConfig {
    fn default() -> Self {
        PeterssonConfig { hard_cap: DEFAULT_HARD_CAP, strategy: Strategy::auto() }
    }
}

/// Bound on the discarded terms c = qk, k > K:
/// 8π²√(mn·gcd(m,n)) q^{-3/2} · 3K^{-1/2}(ln K + 3), from the Weil bound,
/// |J₁(x)| ≤ x/2, τ(qk) ≤ 2τ(k) and Σ_{k≤x} τ(k) ≤ x(ln x + 1).
pub fn tail_majorant(q: u64, m: u64, n: u64, k: u64) -> f64 {
    let k = k.max(1) as f64;
    let g = gcd(m, n) as f64;
    8.0 * PI * PI * ((m * n) as f64 * g).sqrt() * (q as f64).powf(-1.5) * 3.0 * (k.ln() + 3.0) / k.sqrt()
}

/// Smallest multiplier K whose tail majorant is ≤ tol (None past `k_cap`).
pub fn truncation_for(q: u64, m: u64, n: u64, tol: f64, k_cap: u64) -> Option<u64> {
    let mut lo = 1u64;
    if tail_majorant(q, m, n, lo) <= tol {
        return Some(lo);
    }
    let mut hi = 2u64;
    while tail_majorant(q, m, n, hi) > tol {
        if hi > k_cap {
            return None;
        }
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if tail_majorant(q, m, n, mid) <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// Δ_q(m,n) with c_max chosen so that the tail majorant is ≤ tol.
pub fn petersson_delta(q: u64, m: u64, n: u64, tol: f64) -> Result<PeterssonDelta> {
    petersson_delta_with(q, m, n, tol, &PeterssonConfig::default())
}

pub fn petersson_delta_with(q: u64, m: u64, n: u64, tol: f64, cfg: &PeterssonConfig) -> Result<PeterssonDelta> {
    validate(q, m, n)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let k_cap = cfg.hard_cap / q;
    let k = truncation_for(q, m, n, tol, k_cap).ok_or_else(|| {
        // report a lower estimate of what would be needed
        let mut k = k_cap.max(1);
        while tail_majorant(q, m, n, k) > tol && k < u64::MAX / 4 {
            k *= 4;
        }
        Error::TailCapExceeded { needed: k.saturating_mul(q), cap: cfg.hard_cap }
    })?;
    if k * q > cfg.hard_cap {
        return Err(Error::TailCapExceeded { needed: k * q, cap: cfg.hard_cap });
    }
    Ok(petersson_batch(q, &[(m, n)], k * q, cfg.strategy)?[0])
}

/// Δ_q(m,n) truncated at c ≤ c_max, with the rigorous tail majorant.
pub fn petersson_delta_truncated(q: u64, m: u64, n: u64, c_max: u64, strategy: Strategy) -> Result<PeterssonDelta> {
    Ok(petersson_batch(q, &[(m, n)], c_max, strategy)?[0])
}

fn validate(q: u64, m: u64, n: u64) -> Result<()> {
    if m == 0 || n == 0 || q == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(())
}

/// Truncated Δ_q for many (m, n) at once, sharing each modulus' unit table.
/// Terms are reduced in increasing c with compensated summation.
pub fn petersson_batch(q: u64, pairs: &[(u64, u64)], c_max: u64, strategy: Strategy) -> Result<Vec<PeterssonDelta>> {
    for &(m, n) in pairs {
        validate(q, m, n)?;
    }
    let k_max = c_max / q;
    let per_c: Vec<Vec<f64>> = exec::map_range(strategy, 1..k_max as usize + 1, |k| {
        let c = q * k as u64;
        let km = KloostermanModulus::new(c);
        let cf = c as f64;
        pairs
            .iter()
            .map(|&(m, n)| {
                let x = 4.0 * PI * ((m * n) as f64).sqrt() / cf;
                -2.0 * PI * km.sum(m as i64, n as i64) / cf * j1(x)
            })
            .collect()
    });
    Ok(pairs
        .iter()
        .enumerate()
        .map(|(i, &(m, n))| {
            let mut acc = CompensatedSum::new();
            acc.add(if m == n { 1.0 } else { 0.0 });
            for row in &per_c {
                acc.add(row[i]);
            }
            PeterssonDelta {
                level: q,
                m,
                n,
                value: acc.value(),
                c_max: k_max * q,
                tail_estimate: tail_majorant(q, m, n, k_max),
            }
        })
        .collect())
}
