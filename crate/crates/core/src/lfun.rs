//! Root numbers and central values L(f, 1/2) through the exponentially
//! convergent split L(f,1/2) = S(A) + ε S(1/A),
//! S(A) = Σ λ(n) n^{-1/2} exp(−2πnA/√q).

use std::f64::consts::PI;

use crate::arith::CompensatedSum;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::modsym::EigenSystem;

/// Truncation target of every smoothed sum.
pub const AFE_TOL: f64 = 1e-10;

/// A-independence threshold for the root-number test.
pub const SIGN_TOL: f64 = 1e-8;

/// Primary A samples. Reciprocal pairs alone cannot separate the two signs,
/// so A = 1 is included.
pub const A_SAMPLES: [f64; 3] = [0.8, 1.0, 1.25];
pub const A_SAMPLES_FALLBACK: [f64; 7] = [0.5, 0.7, 0.8, 1.0, 1.25, 1.6, 2.0];

/// Smoothed sum with its truncation data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AfeSum {
    pub value: f64,
    pub terms: usize,
    pub tail_bound: f64,
}

/// Central value of one form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralValue {
    pub form_index: usize,
    pub epsilon: i8,
    pub value: f64,
    pub truncation_length: usize,
    pub est_error: f64,
}

/// Smallest N with 2r^{N+1}/(1−r) ≤ tol, r = exp(−2πA/√q). Uses
/// |λ(n)| ≤ τ(n) ≤ 2√n.
pub fn afe_terms_needed(q: u64, a: f64, tol: f64) -> usize {
    let r = (-2.0 * PI * a / (q as f64).sqrt()).exp();
    let mut n = 1usize;
    while 2.0 * r.powi(n as i32 + 1) / (1.0 - r) > tol {
        n += 1;
    }
    n
}

fn tail_bound(q: u64, a: f64, n: usize) -> f64 {
    let r = (-2.0 * PI * a / (q as f64).sqrt()).exp();
    2.0 * r.powi(n as i32 + 1) / (1.0 - r)
}

pub fn afe_sum_detailed(es: &EigenSystem, form: usize, a: f64, tol: f64) -> Result<AfeSum> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!("A must be positive, got {a}")));
    }
    let f = es.form(form)?;
    let needed = afe_terms_needed(es.level, a, tol);
    if needed > es.n_max {
        return Err(Error::InsufficientCoefficients { needed, available: es.n_max });
    }
    let step = -2.0 * PI * a / (es.level as f64).sqrt();
    let mut acc = CompensatedSum::new();
    for n in 1..=needed {
        let nf = n as f64;
        acc.add(f.lambda[n] / nf.sqrt() * (step * nf).exp());
    }
    Ok(AfeSum { value: acc.value(), terms: needed, tail_bound: tail_bound(es.level, a, needed) })
}

/// S(A) to tail error ≤ 1e-10.
pub fn afe_sum(es: &EigenSystem, form: usize, a: f64) -> Result<f64> {
    Ok(afe_sum_detailed(es, form, a, AFE_TOL)?.value)
}

/// max − min over the samples of S(A) + ε S(1/A).
pub fn sign_spread(es: &EigenSystem, form: usize, eps: f64, samples: &[f64]) -> Result<f64> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &a in samples {
        let v = afe_sum(es, form, a)? + eps * afe_sum(es, form, 1.0 / a)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok(hi - lo)
}

fn decide(es: &EigenSystem, form: usize, samples: &[f64]) -> Result<Option<i8>> {
    let plus = sign_spread(es, form, 1.0, samples)? < SIGN_TOL;
    let minus = sign_spread(es, form, -1.0, samples)? < SIGN_TOL;
    Ok(match (plus, minus) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    })
}

/// The sign ε that makes S(A) + ε S(1/A) independent of A.
pub fn root_number(es: &EigenSystem, form: usize) -> Result<i8> {
    if let Some(e) = decide(es, form, &A_SAMPLES)? {
        return Ok(e);
    }
    decide(es, form, &A_SAMPLES_FALLBACK)?.ok_or(Error::IndeterminateSign { form })
}

/// L(f, 1/2) at A = 1; zero exactly when ε = −1.
pub fn central_value(es: &EigenSystem, form: usize) -> Result<CentralValue> {
    let stored = es.form(form)?.epsilon;
    let epsilon = if stored != 0 { stored } else { root_number(es, form)? };
    let s = afe_sum_detailed(es, form, 1.0, AFE_TOL)?;
    let value = if epsilon < 0 { 0.0 } else { 2.0 * s.value };
    let est_error = if epsilon < 0 { 0.0 } else { 2.0 * s.tail_bound + 1e-14 * s.terms as f64 };
    Ok(CentralValue { form_index: form, epsilon, value, truncation_length: s.terms, est_error })
}

pub fn central_values(es: &EigenSystem, strategy: Strategy) -> Result<Vec<CentralValue>> {
    let idx: Vec<usize> = (0..es.forms.len()).collect();
    exec::map(strategy, &idx, |&f| central_value(es, f)).into_iter().collect()
}

/// Determines and stores ε for every form.
pub fn fill_root_numbers(es: &mut EigenSystem) -> Result<()> {
    for f in 0..es.forms.len() {
        let e = root_number(es, f)?;
        es.forms[f].epsilon = e;
    }
    Ok(())
}

/// Per form: (index, ε, sign of λ(q)). Reports the empirical relation
/// between the root number and the q-th eigenvalue.
pub fn sign_table(es: &EigenSystem) -> Result<Vec<(usize, i8, i8)>> {
    (0..es.forms.len())
        .map(|f| {
            let e = root_number(es, f)?;
            let lq = es.forms[f].lambda_at(es.level, es.level).unwrap_or(0.0);
            Ok((f, e, if lq < 0.0 { -1 } else { 1 }))
        })
        .collect()
}
