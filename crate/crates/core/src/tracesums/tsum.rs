//! The double sums T_{M,N}(c)/c² and the divisor-weighted c-sum they feed.

use std::f64::consts::PI;

use crate::arith::{divisor_tau, mobius, CompensatedSum, KloostermanModulus};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::special::bessel::j1;
use crate::special::{BumpShape, CutoffProfile};

/// θ used by the bound side: 7/64.
pub const THETA_KS: f64 = 7.0 / 64.0;

fn tau(n: u64) -> f64 {
    divisor_tau(n).unwrap_or(0) as f64
}

fn check_multiple(q: u64, c: u64) -> Result<()> {
    if q == 0 || c == 0 || c % q != 0 {
        return Err(Error::InvalidArgument(format!("modulus {c} is not a positive multiple of {q}")));
    }
    Ok(())
}

/// Σ_{m,n} τ(m)τ(n) (1/c) S(m, aen; c) J₁(4π√(aemn)/c) F_{M,N}(m,n) over
/// the integer support.
pub fn t_sum(q: u64, c: u64, a: u64, e: u64, profile: &CutoffProfile) -> Result<f64> {
    check_multiple(q, c)?;
    if a == 0 || e == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(t_sum_with(&KloostermanModulus::new(c), a, e, profile))
}

fn t_sum_with(km: &KloostermanModulus, a: u64, e: u64, profile: &CutoffProfile) -> f64 {
    let c = km.modulus();
    let cf = c as f64;
    let ae = (a * e) as f64;
    let mut acc = CompensatedSum::new();
    for m in profile.m_lattice() {
        let fm = profile.eval_m(m as f64);
        if fm == 0.0 {
            continue;
        }
        let tm = tau(m);
        for n in profile.n_lattice() {
            let fnn = profile.eval_n(n as f64);
            if fnn == 0.0 {
                continue;
            }
            let s = km.sum(m as i64, ((a * e * n) % c) as i64);
            let x = 4.0 * PI * (ae * (m * n) as f64).sqrt() / cf;
            acc.add(tm * tau(n) * s / cf * j1(x) * fm * fnn);
        }
    }
    acc.value()
}

/// Result of the divisor-weighted c-sum against its bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Ratio {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub c_max: u64,
    /// Rigorous majorant of the discarded c > c_max terms.
    pub tail_bound: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct Lemma1Config {
    /// The c-sum runs over q | c, C ≤ c ≤ factor·C.
    pub c_cap_factor: f64,
    pub theta: f64,
    pub strategy: Strategy,
}

impl Default for Lemma1Config {
    fn default() -> Self {
        Lemma1Config { c_cap_factor: 40.0, theta: THETA_KS, strategy: Strategy::auto() }
    }
}

/// (d, e, a, b, weight) with de = l, ab = d, weight d^{-1/2} μ(a) a^{-1/2} τ(b).
pub fn divisor_terms(l: u64) -> Vec<(u64, u64, u64, u64, f64)> {
    let mut out = Vec::new();
    for d in (1..=l).filter(|d| l % d == 0) {
        for a in (1..=d).filter(|a| d % a == 0) {
            let b = d / a;
            let mu = mobius(a).unwrap_or(0) as f64;
            if mu == 0.0 {
                continue;
            }
            let w = (d as f64).powf(-0.5) * mu * (a as f64).powf(-0.5) * tau(b);
            out.push((d, l / d, a, b, w));
        }
    }
    out
}

/// l^{1/2} (√(MN)/C)^{1−2θ}.
pub fn lemma1_rhs(l: u64, m: f64, n: f64, c: f64, theta: f64) -> f64 {
    (l as f64).sqrt() * ((m * n).sqrt() / c).powf(1.0 - 2.0 * theta)
}

pub fn lemma1_ratio(q: u64, l: u64, m: f64, n: f64, c: f64, shape: BumpShape) -> Result<Lemma1Ratio> {
    lemma1_ratio_with(q, l, m, n, c, shape, &Lemma1Config::default())
}

pub fn lemma1_ratio_with(
    q: u64,
    l: u64,
    m: f64,
    n: f64,
    c: f64,
    shape: BumpShape,
    cfg: &Lemma1Config,
) -> Result<Lemma1Ratio> {
    if l == 0 {
        return Err(Error::ZeroArgument);
    }
    if !(c > ((l as f64) * m * n).sqrt()) {
        return Err(Error::InvalidArgument(format!(
            "hypothesis C > sqrt(l M N) violated: C = {c}, sqrt(l M N) = {:.6}",
            ((l as f64) * m * n).sqrt()
        )));
    }
    let profile = CutoffProfile::with_shape(m, n, shape)?;
    let k_lo = (c / q as f64).ceil().max(1.0) as u64;
    let k_hi = ((cfg.c_cap_factor * c) / q as f64).floor().max(k_lo as f64) as u64;
    let terms = divisor_terms(l);
    let per_c: Vec<f64> = exec::map_range(cfg.strategy, k_lo as usize..k_hi as usize + 1, |k| {
        let km = KloostermanModulus::new(q * k as u64);
        let mut acc = CompensatedSum::new();
        for &(_, e, a, _, w) in &terms {
            acc.add(w * t_sum_with(&km, a, e, &profile));
        }
        acc.value()
    });
    let lhs = per_c.iter().copied().collect::<CompensatedSum>().value();
    let rhs = lemma1_rhs(l, m, n, c, cfg.theta);

    // |summand| ≤ τ(m)τ(n) τ(c) √(m c) c^{-1} · 2π√(aemn)/c · (MN)^{-1/2}
    let smn: f64 = profile.m_lattice().map(|x| tau(x) * x as f64).sum::<f64>()
        * profile.n_lattice().map(|x| tau(x) * (x as f64).sqrt()).sum::<f64>();
    let weight: f64 = terms.iter().map(|&(_, e, a, _, w)| w.abs() * ((a * e) as f64).sqrt()).sum();
    let kk = k_hi as f64;
    let tail_bound = weight * 2.0 * PI * smn / (m * n).sqrt() * 2.0 * (q as f64).powf(-1.5) * 3.0 * (kk.ln() + 3.0)
        / kk.sqrt();
    Ok(Lemma1Ratio { lhs, rhs, ratio: lhs.abs() / rhs, c_max: k_hi * q, tail_bound })
}
