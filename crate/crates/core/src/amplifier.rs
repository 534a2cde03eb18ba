//! The amplifier c_l built from λ_f(p) and −1 at p², and the amplified moment.

use std::collections::BTreeMap;

use crate::arith::{compensated_sum, primes_up_to};
use crate::error::{Error, Result};
use crate::lfun::central_values;
use crate::modsym::EigenSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    /// c_p = λ_f(p).
    Prime(u64),
    /// c_{p²} = −1.
    PrimeSquare(u64),
}

/// Primes p with p² ≤ L and p ∤ q.
pub fn amplifier_primes(q: u64, length: f64) -> Vec<u64> {
    let r = length.max(0.0).sqrt().floor() as u64 + 1;
    primes_up_to(r)
        .into_iter()
        .filter(|&p| ((p * p) as f64) <= length && q % p != 0)
        .collect()
}

/// Eigenvalue-free support of the amplifier, ordered by l.
pub fn amplifier_support(q: u64, length: f64) -> Vec<(u64, EntryKind)> {
    let mut v: Vec<_> = amplifier_primes(q, length)
        .into_iter()
        .flat_map(|p| [(p, EntryKind::Prime(p)), (p * p, EntryKind::PrimeSquare(p))])
        .collect();
    v.sort_by_key(|e| e.0);
    v
}

/// Λ_f(c) in closed form: the number of primes p ≤ √L with p ∤ q.
pub fn prime_count_closed_form(q: u64, length: f64) -> usize {
    amplifier_primes(q, length).len()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplifierCoefficients {
    pub length: f64,
    pub level: u64,
    pub form: usize,
    pub entries: BTreeMap<u64, f64>,
}

impl AmplifierCoefficients {
    pub fn l2_norm_sq(&self) -> f64 {
        compensated_sum(self.entries.values().map(|c| c * c))
    }

    pub fn l1_norm(&self) -> f64 {
        compensated_sum(self.entries.values().map(|c| c.abs()))
    }

    /// ‖c‖₂² ≤ 5Λ and ‖c‖₁ ≤ 3Λ, with slack 1e-6.
    pub fn norms_bounded(&self) -> bool {
        let lam = prime_count_closed_form(self.level, self.length) as f64;
        self.l2_norm_sq() <= 5.0 * lam + 1e-6 && self.l1_norm() <= 3.0 * lam + 1e-6
    }
}

pub fn build_amplifier(es: &EigenSystem, form: usize, length: f64) -> Result<AmplifierCoefficients> {
    if !(length >= 4.0) {
        return Err(Error::InvalidArgument(format!("amplifier length {length} < 4")));
    }
    es.form(form)?;
    let mut entries = BTreeMap::new();
    for (l, kind) in amplifier_support(es.level, length) {
        let c = match kind {
            EntryKind::Prime(p) => es
                .lambda(form, p)
                .ok_or(Error::InsufficientCoefficients { needed: p as usize, available: es.n_max })?,
            EntryKind::PrimeSquare(_) => -1.0,
        };
        entries.insert(l, c);
    }
    Ok(AmplifierCoefficients { length, level: es.level, form, entries })
}

/// Σ_l c_l λ_f(l) evaluated from the eigenvalues.
pub fn amplified_value_raw(es: &EigenSystem, coeffs: &AmplifierCoefficients) -> Result<f64> {
    let mut terms = Vec::with_capacity(coeffs.entries.len());
    for (&l, &c) in &coeffs.entries {
        let lam = es
            .lambda(coeffs.form, l)
            .ok_or(Error::InsufficientCoefficients { needed: l as usize, available: es.n_max })?;
        terms.push(c * lam);
    }
    Ok(compensated_sum(terms))
}

/// Λ_f(c); equals the prime count by λ(p)² − λ(p²) = 1.
pub fn amplified_value(coeffs: &AmplifierCoefficients) -> f64 {
    prime_count_closed_form(coeffs.level, coeffs.length) as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplifiedRow {
    pub form_index: usize,
    pub weight: f64,
    pub amplified: f64,
    pub central_value: f64,
    /// ω_f Λ_f² L(f,1/2)⁴.
    pub term: f64,
    /// (total / (ω_f Λ_f²))^{1/4}, an upper bound for L(f,1/2).
    pub implied_bound: f64,
    /// implied_bound / q^{1/4−δ}.
    pub bound_ratio: f64,
    /// ω_f q / log q.
    pub weight_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplifiedMoment {
    pub level: u64,
    pub length: f64,
    pub delta: f64,
    pub total: f64,
    pub rows: Vec<AmplifiedRow>,
}

/// Per-form amplified diagnostics with subconvexity exponent `delta`.
pub fn amplified_moment(es: &EigenSystem, length: f64, delta: f64) -> Result<AmplifiedMoment> {
    let q = es.level as f64;
    let values = central_values(es, crate::exec::Strategy::auto())?;
    let mut partial = Vec::with_capacity(es.len());
    for (f, cv) in values.iter().enumerate() {
        let w = es
            .form(f)?
            .weight
            .ok_or_else(|| Error::InvalidArgument(format!("form {f} has no weight")))?;
        let lam = amplified_value(&build_amplifier(es, f, length)?);
        partial.push((f, w, lam, cv.value, w * lam * lam * cv.value.powi(4)));
    }
    let total = compensated_sum(partial.iter().map(|p| p.4));
    let scale = q.powf(0.25 - delta);
    let rows = partial
        .into_iter()
        .map(|(form_index, weight, amplified, central_value, term)| {
            let implied_bound = (total / (weight * amplified * amplified)).powf(0.25);
            AmplifiedRow {
                form_index,
                weight,
                amplified,
                central_value,
                term,
                implied_bound,
                bound_ratio: implied_bound / scale,
                weight_ratio: weight * q / q.ln(),
            }
        })
        .collect();
    Ok(AmplifiedMoment { level: es.level, length, delta, total, rows })
}
