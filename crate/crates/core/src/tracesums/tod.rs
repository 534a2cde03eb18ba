//! The off-diagonal tail
//! −2π Σ_n τ(aen)τ(n) ∫₀^∞ Y₀(x)J₁(x) Σ_{q|c, c>C} φ(c) F_{M,N}(c²t, n) dt,
//! x = 4π√(aent).
//!
//! Per c the substitution s = c²t maps the integral onto F's support in s,
//! where the integrand is smooth on each polynomial piece of the bump. For
//! large c (x ≤ 1/2 on the support) Y₀J₁ is replaced by its convergent
//! log-power series and the c-sum is closed through ζ(σ−1)/ζ(σ).

use std::f64::consts::PI;

use crate::arith::{divisor_tau, euler_phi, CompensatedSum};
use crate::error::{Error, Result};
use crate::special::bessel::{j1, y0, EULER_GAMMA};
use crate::special::gamma::{hurwitz_pair, zeta, zeta_prime};
use crate::special::quadrature::gauss_legendre;
use crate::special::CutoffProfile;

/// Series region: argument ≤ this.
const SERIES_X: f64 = 0.5;
/// Terms of the log-power series of Y₀J₁.
const SERIES_TERMS: usize = 12;
/// Target error of each closed c-sum, relative to the leading series term.
const TAIL_REL_TOL: f64 = 1e-13;

/// Coefficients with Y₀(x)J₁(x) = Σ_k x^{2k+1} (α_k ln(x/2) + β_k).
pub fn y0j1_series_coefficients(terms: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = Vec::with_capacity(terms);
    let mut b = Vec::with_capacity(terms);
    let mut r = Vec::with_capacity(terms);
    let mut fact = 1.0f64; // j!
    let mut harm = 0.0f64;
    for j in 0..terms {
        if j > 0 {
            fact *= j as f64;
            harm += 1.0 / j as f64;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let p4 = 4f64.powi(j as i32);
        a.push(sign / (p4 * fact * fact));
        b.push(sign / (2.0 * p4 * fact * fact * (j + 1) as f64));
        r.push(if j == 0 { 0.0 } else { -sign * harm / (p4 * fact * fact) });
    }
    let mut alpha = vec![0.0; terms];
    let mut beta = vec![0.0; terms];
    for k in 0..terms {
        for i in 0..=k {
            alpha[k] += a[i] * b[k - i];
            beta[k] += (EULER_GAMMA * a[i] + r[i]) * b[k - i];
        }
        alpha[k] *= 2.0 / PI;
        beta[k] *= 2.0 / PI;
    }
    (alpha, beta)
}

/// Σ_{q|c} φ(c) c^{-σ} = q^{-σ}(q−1) ζ(σ−1) / (ζ(σ)(1 − q^{-σ})), σ > 2.
pub fn phi_dirichlet(q: u64, sigma: f64) -> f64 {
    let qf = q as f64;
    qf.powf(-sigma) * (qf - 1.0) * zeta(sigma - 1.0) / (zeta(sigma) * (1.0 - qf.powf(-sigma)))
}

/// Σ_{q|c} φ(c) c^{-σ} ln c, the negated σ-derivative of `phi_dirichlet`.
pub fn phi_dirichlet_log(q: u64, sigma: f64) -> f64 {
    let qf = q as f64;
    let ln_q = qf.ln();
    let qs = qf.powf(-sigma);
    let dlog = -ln_q + zeta_prime(sigma - 1.0) / zeta(sigma - 1.0) - zeta_prime(sigma) / zeta(sigma)
        - qs * ln_q / (1.0 - qs);
    -phi_dirichlet(q, sigma) * dlog
}

/// Largest Möbius cutoff of the split tail sum.
const MAX_MOBIUS_CUTOFF: usize = 1 << 24;

/// (Σ φ(c) c^{-σ}, Σ φ(c) c^{-σ} ln c) over q | c, c ≥ c_start, σ ≥ 3, to
/// absolute error about `tol`.
///
/// Closed form minus the head while rounding of the closed form stays below
/// `tol`. Otherwise φ(c)/c = Σ_{d|c} μ(d)/d splits the sum into Hurwitz tails
/// over multiples of lcm(q, d), all of one sign scale.
pub fn phi_tail_sums(q: u64, c_start: u64, sigma: f64, tol: f64) -> (f64, f64) {
    let full = phi_dirichlet(q, sigma);
    let full_log = phi_dirichlet_log(q, sigma);
    let rounding = 8.0 * f64::EPSILON * full.max(full_log);
    if rounding > tol {
        let cutoff = mobius_cutoff(q, c_start.max(1), sigma, tol);
        if mobius_bound(q, sigma, cutoff as f64) < rounding {
            return mobius_tail(q, c_start.max(1), sigma, cutoff);
        }
    }
    subtract_head(q, c_start, sigma, full, full_log)
}

/// Majorant of the Möbius terms with d > cutoff.
fn mobius_bound(q: u64, sigma: f64, cutoff: f64) -> f64 {
    let s = sigma - 1.0;
    2.0 * zeta(s) * ((cutoff * q as f64).ln() + 2.0) * cutoff.powf(-s) / s
}

fn mobius_cutoff(q: u64, x: u64, sigma: f64, tol: f64) -> usize {
    let mut cutoff = (x as usize).max(64);
    while mobius_bound(q, sigma, cutoff as f64) > tol && cutoff < MAX_MOBIUS_CUTOFF {
        cutoff *= 2;
    }
    cutoff
}

fn subtract_head(q: u64, c_start: u64, sigma: f64, full: f64, full_log: f64) -> (f64, f64) {
    let mut zs = CompensatedSum::new();
    let mut ws = CompensatedSum::new();
    zs.add(full);
    ws.add(full_log);
    for cc in (q..c_start).step_by(q as usize) {
        let cf = cc as f64;
        let t = euler_phi(cc).unwrap_or(0) as f64 * cf.powf(-sigma);
        zs.add(-t);
        ws.add(-t * cf.ln());
    }
    (zs.value(), ws.value())
}

fn mobius_tail(q: u64, x: u64, sigma: f64, cutoff: usize) -> (f64, f64) {
    let s = sigma - 1.0;
    let (z1, w1) = (zeta(s), -zeta_prime(s));
    let mu = mobius_sieve(cutoff);
    let mut zs = CompensatedSum::new();
    let mut ws = CompensatedSum::new();
    for (d, &m_d) in mu.iter().enumerate().skip(1) {
        if m_d == 0 {
            continue;
        }
        let d64 = d as u64;
        let m = if d64 % q == 0 { d64 } else { d64 * q };
        let start = x.div_ceil(m);
        let (h, hl) = if start == 1 { (z1, w1) } else { hurwitz_pair(s, start) };
        let mf = m as f64;
        let scale = m_d as f64 / d as f64 * mf.powf(-s);
        zs.add(scale * h);
        ws.add(scale * (mf.ln() * h + hl));
    }
    (zs.value(), ws.value())
}

fn mobius_sieve(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    let mut composite = vec![false; n + 1];
    mu[0] = 0;
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        for k in (p..=n).step_by(p) {
            if k > p {
                composite[k] = true;
            }
            mu[k] = -mu[k];
        }
        if let Some(p2) = p.checked_mul(p) {
            for k in (p2..=n).step_by(p2) {
                mu[k] = 0;
            }
        }
    }
    mu
}

/// The tail; `nodes` is the Gauss–Legendre order per smooth piece.
pub fn t_od_tail(q: u64, c: f64, a: u64, e: u64, profile: &CutoffProfile, nodes: usize) -> Result<f64> {
    let v = t_od_tail_raw(q, c, a, e, profile, nodes)?;
    let check = t_od_tail_raw(q, c, a, e, profile, nodes + nodes / 2)?;
    let scale = v.abs().max(check.abs()).max(1e-300);
    if (v - check).abs() > 1e-6 * scale.max(1.0) {
        return Err(Error::Quadrature(format!(
            "{nodes} nodes give {v:.12e}, {} give {check:.12e}",
            nodes + nodes / 2
        )));
    }
    Ok(v)
}

/// Same quantity without the convergence check.
pub fn t_od_tail_raw(q: u64, c: f64, a: u64, e: u64, profile: &CutoffProfile, nodes: usize) -> Result<f64> {
    if q < 2 || a == 0 || e == 0 || nodes == 0 {
        return Err(Error::InvalidArgument("need q ≥ 2, a, e ≥ 1 and at least one node".into()));
    }
    if !(c >= q as f64) {
        return Err(Error::InvalidArgument(format!("need C ≥ q, got C = {c}, q = {q}")));
    }
    let ns: Vec<u64> = profile.n_lattice().collect();
    if ns.is_empty() {
        return Ok(0.0);
    }
    let ae = a * e;
    let rule = gauss_legendre(nodes);
    let bp = profile.m_breakpoints();
    // s-nodes and weights over the support, with the x-profile folded in
    let mut s_nodes = Vec::new();
    for w in bp.windows(2) {
        let (h, mid) = (0.5 * (w[1] - w[0]), 0.5 * (w[0] + w[1]));
        for (x, wt) in rule.0.iter().zip(&rule.1) {
            let s = mid + h * x;
            s_nodes.push((s, wt * h * profile.eval_m(s)));
        }
    }
    let s_top = bp[3];
    let n_top = *ns.last().expect("nonempty") as f64;
    let x_coef = |n: u64| 4.0 * PI * ((ae * n) as f64).sqrt();
    // first c whose arguments are all ≤ SERIES_X
    let c_series = {
        let need = x_coef(n_top as u64) * s_top.sqrt() / SERIES_X;
        let k = (need.max(c) / q as f64).floor() as u64 + 1;
        k * q
    };
    let c_first = ((c / q as f64).floor() as u64 + 1) * q;
    let (alpha, beta) = y0j1_series_coefficients(SERIES_TERMS);

    // moments over s: B_k = ∫ s^{k+1/2} F ds, L_k = ∫ s^{k+1/2} ln s F ds
    let mut bk = vec![0.0; SERIES_TERMS];
    let mut lk = vec![0.0; SERIES_TERMS];
    for &(s, w) in &s_nodes {
        let ls = s.ln();
        let mut p = s.sqrt() * w;
        for k in 0..SERIES_TERMS {
            bk[k] += p;
            lk[k] += p * ls;
            p *= s;
        }
    }
    // c-sums of φ(c) c^{-σ} (and × ln c) over c ≥ c_series, σ = 2k+3
    let head: Vec<(f64, f64, f64)> = (c_first..c_series)
        .step_by(q as usize)
        .map(|cc| (cc as f64, euler_phi(cc).unwrap_or(0) as f64, (cc as f64).ln()))
        .collect();
    // per-k absolute tolerance: a fixed fraction of the k = 0 term
    let x_top = x_coef(n_top as u64);
    let ln_top = (0.5 * x_top).ln().abs() + 1.0;
    let amp: Vec<f64> = (0..SERIES_TERMS)
        .map(|k| {
            x_top.powi(2 * k as i32 + 1)
                * ((alpha[k].abs() * ln_top + beta[k].abs()) * bk[k].abs() + alpha[k].abs() * (lk[k].abs() + bk[k].abs()))
        })
        .collect();
    let leading = amp[0] / (c_series as f64 * q as f64);
    let mut z_tail = vec![0.0; SERIES_TERMS];
    let mut w_tail = vec![0.0; SERIES_TERMS];
    for k in 0..SERIES_TERMS {
        let tol = TAIL_REL_TOL * leading / amp[k].max(f64::MIN_POSITIVE);
        (z_tail[k], w_tail[k]) = phi_tail_sums(q, c_series, (2 * k + 3) as f64, tol);
    }

    let mut total = CompensatedSum::new();
    for &n in &ns {
        let fnn = profile.eval_n(n as f64);
        if fnn == 0.0 {
            continue;
        }
        let weight = divisor_tau(ae * n)? as f64 * divisor_tau(n)? as f64 * fnn;
        let xn = x_coef(n);
        let mut inner = CompensatedSum::new();
        // direct quadrature, C < c < c_series
        for &(cf, phi, _) in &head {
            let mut acc = 0.0;
            for &(s, w) in &s_nodes {
                let x = xn * s.sqrt() / cf;
                acc += w * y0(x) * j1(x);
            }
            inner.add(phi * acc / (cf * cf));
        }
        // series closure, c ≥ c_series
        let ln_half = (0.5 * xn).ln();
        let mut xp = xn;
        for k in 0..SERIES_TERMS {
            let ak = ln_half * bk[k] + 0.5 * lk[k];
            inner.add(xp * ((alpha[k] * ak + beta[k] * bk[k]) * z_tail[k] - alpha[k] * bk[k] * w_tail[k]));
            xp *= xn * xn;
        }
        total.add(weight * inner.value());
    }
    Ok(-2.0 * PI * total.value())
}
