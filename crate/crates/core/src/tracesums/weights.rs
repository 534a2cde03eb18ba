//! Harmonic weights ω_f = 1/(4π⟨f,f⟩).
//!
//! Primary route: ω_f = 2π² / (q · L(sym² f, 1)), with L(sym² f, 1) from an
//! exact smoothed functional equation (conductor q², root number +1,
//! gamma factor Γ_R(s+1)Γ_C(s+1)). Secondary route: least-squares fit of
//! Σ_f ω_f λ_f(n) = Δ_q(1,n) with truncated Petersson sums.

use std::f64::consts::PI;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::petersson::petersson_batch;
use crate::arith::{factorize, gcd, CompensatedSum};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::modsym::{EigenSystem, Newform};
use crate::special::gamma::ln_gamma;

const CONTOUR: f64 = 2.0;
const STEP: f64 = 0.2;
const T_MAX: f64 = 48.0;

/// Stop once the smoothing weight drops below this for a full window.
pub const SYM2_WEIGHT_CUTOFF: f64 = 1e-19;

/// γ(s) = Γ_R(s+1) Γ_C(s+1), Γ_R(s) = π^{-s/2}Γ(s/2), Γ_C(s) = 2(2π)^{-s}Γ(s).
pub fn sym2_gamma(s: Complex64) -> Complex64 {
    let a = s + 1.0;
    let ln = -0.5 * a * PI.ln() + ln_gamma(a * 0.5) + 2f64.ln() - a * (2.0 * PI).ln() + ln_gamma(a);
    ln.exp()
}

/// Trapezoid nodes t_j ≥ 0, weights, and γ(s+c+it)/(c+it) for s = 0, 1.
struct Kernel {
    t: Vec<f64>,
    w: Vec<f64>,
    g: [Vec<Complex64>; 2],
}

fn kernel() -> &'static Kernel {
    static K: OnceLock<Kernel> = OnceLock::new();
    K.get_or_init(|| {
        let n = (T_MAX / STEP) as usize;
        let t: Vec<f64> = (0..=n).map(|j| j as f64 * STEP).collect();
        let w: Vec<f64> = (0..=n).map(|j| if j == 0 { 0.5 * STEP } else { STEP }).collect();
        let g = [0.0, 1.0].map(|s| {
            t.iter()
                .map(|&tj| {
                    let wc = Complex64::new(CONTOUR, tj);
                    sym2_gamma(wc + s) / wc
                })
                .collect()
        });
        Kernel { t, w, g }
    })
}

/// Φ_s(y) = (1/2πi) ∫_{(2)} γ(s+w) y^{-(s+w)} dw/w for s = 0 and 1.
pub fn sym2_phi(y: f64) -> [f64; 2] {
    let k = kernel();
    let ly = y.ln();
    [0usize, 1].map(|s| {
        let mut acc = 0.0;
        for j in 0..k.t.len() {
            let e = (-Complex64::new(s as f64 + CONTOUR, k.t[j]) * ly).exp();
            acc += k.w[j] * (k.g[s][j] * e).re;
        }
        acc / PI
    })
}

/// Coefficients A(n), n ≤ len, of L(sym² f, s) (unitary normalization).
pub fn sym2_coefficients(f: &Newform, level: u64, len: usize) -> Result<Vec<f64>> {
    let mut a = vec![0.0; len + 1];
    if len == 0 {
        return Ok(a);
    }
    a[1] = 1.0;
    for n in 2..=len {
        let mut acc = 1.0;
        for (p, e) in factorize(n as u64) {
            if p == level {
                acc *= (level as f64).powi(-(e as i32));
                continue;
            }
            let lp = *f.lambda.get(p as usize).ok_or(Error::InsufficientCoefficients {
                needed: len,
                available: f.lambda.len().saturating_sub(1),
            })?;
            let e1 = lp * lp - 1.0;
            let mut pw = vec![1.0, e1];
            for j in 2..=e as usize {
                let v = e1 * pw[j - 1] - e1 * pw[j - 2] + if j >= 3 { pw[j - 3] } else { 0.0 };
                pw.push(v);
            }
            acc *= pw[e as usize];
        }
        a[n] = acc;
    }
    Ok(a)
}

/// Number of terms the symmetric-square sum needs at level q.
pub fn sym2_terms_needed(q: u64) -> usize {
    let mut n = q as usize;
    loop {
        let ok = (0..q as usize).all(|j| {
            let p = sym2_phi((n + j) as f64 / q as f64);
            p[0].abs() + p[1].abs() < SYM2_WEIGHT_CUTOFF
        });
        if ok {
            return n;
        }
        n += q as usize;
    }
}

/// L(sym² f, 1) from the first `terms` coefficients.
pub fn sym2_l1_with(es: &EigenSystem, form: usize, terms: usize) -> Result<f64> {
    let f = es.form(form)?;
    if terms > es.n_max {
        return Err(Error::InsufficientCoefficients { needed: terms, available: es.n_max });
    }
    let q = es.level as f64;
    let a = sym2_coefficients(f, es.level, terms)?;
    let mut acc = CompensatedSum::new();
    for (n, an) in a.iter().enumerate().skip(1) {
        let p = sym2_phi(n as f64 / q);
        acc.add(an * (p[0] + p[1]));
    }
    let g1 = sym2_gamma(Complex64::new(1.0, 0.0)).re;
    Ok(acc.value() / (q * g1))
}

/// L(sym² f, 1) with the automatic truncation.
pub fn sym2_l1(es: &EigenSystem, form: usize) -> Result<f64> {
    sym2_l1_with(es, form, sym2_terms_needed(es.level))
}

/// How the weights are computed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightMethod {
    /// ω_f = 2π²/(q L(sym² f, 1)); `length_factor` scales the truncation.
    SymmetricSquare { length_factor: usize },
    /// Least squares against Δ_q(1, n) truncated at c ≤ c_max.
    Petersson { c_max: u64, residual_tol: f64 },
}

impl Default for WeightMethod {
    fn default() -> Self {
        WeightMethod::SymmetricSquare { length_factor: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightReport {
    pub method: WeightMethod,
    pub weights: Vec<f64>,
    /// Sym² route: change under a 2× longer truncation. Petersson route:
    /// largest least-squares residual.
    pub residual: f64,
    pub equations: usize,
}

/// First `count` positive integers coprime to q.
pub fn coprime_indices(q: u64, count: usize) -> Vec<u64> {
    (1..).filter(|&n| gcd(n, q) == 1).take(count).collect()
}

/// Fills ω_f; `n_eq` is the number of equations of the Petersson route.
pub fn harmonic_weights(es: &EigenSystem, n_eq: usize, method: WeightMethod) -> Result<(EigenSystem, WeightReport)> {
    harmonic_weights_with(es, n_eq, method, Strategy::auto())
}

pub fn harmonic_weights_with(
    es: &EigenSystem,
    n_eq: usize,
    method: WeightMethod,
    strategy: Strategy,
) -> Result<(EigenSystem, WeightReport)> {
    let g = es.forms.len();
    let (weights, residual, equations) = match method {
        WeightMethod::SymmetricSquare { length_factor } => {
            let terms = sym2_terms_needed(es.level) * length_factor.max(1);
            let idx: Vec<usize> = (0..g).collect();
            let pairs = exec::map(strategy, &idx, |&f| -> Result<(f64, f64)> {
                let l = sym2_l1_with(es, f, terms)?;
                let longer = if 2 * terms <= es.n_max { sym2_l1_with(es, f, 2 * terms)? } else { l };
                Ok((l, (longer - l).abs()))
            });
            let mut w = Vec::with_capacity(g);
            let mut resid = 0.0f64;
            for r in pairs {
                let (l, d) = r?;
                w.push(2.0 * PI * PI / (es.level as f64 * l));
                resid = resid.max(d);
            }
            (w, resid, 0)
        }
        WeightMethod::Petersson { c_max, residual_tol } => {
            if n_eq < g {
                return Err(Error::InvalidArgument(format!("need at least {g} equations, got {n_eq}")));
            }
            let ns = coprime_indices(es.level, n_eq);
            if *ns.last().unwrap_or(&0) as usize > es.n_max {
                return Err(Error::InsufficientCoefficients { needed: *ns.last().unwrap() as usize, available: es.n_max });
            }
            let pairs: Vec<(u64, u64)> = ns.iter().map(|&n| (1, n)).collect();
            let deltas = petersson_batch(es.level, &pairs, c_max, strategy)?;
            let a = DMatrix::from_fn(ns.len(), g, |i, f| es.forms[f].lambda[ns[i] as usize]);
            let b = DVector::from_iterator(ns.len(), deltas.iter().map(|d| d.value));
            let svd = a.clone().svd(true, true);
            let x = svd.solve(&b, 1e-12).map_err(|e| Error::WeightFit(e.to_string()))?;
            let r = (&a * &x - &b).amax();
            if r > residual_tol {
                return Err(Error::WeightFit(format!("least-squares residual {r:.3e} exceeds {residual_tol:.1e}")));
            }
            (x.iter().copied().collect(), r, ns.len())
        }
    };
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0)) {
        return Err(Error::WeightFit(format!("non-positive weight {w}")));
    }
    let mut out = es.clone();
    for (f, w) in out.forms.iter_mut().zip(&weights) {
        f.weight = Some(*w);
    }
    Ok((out, WeightReport { method, weights, residual, equations }))
}
