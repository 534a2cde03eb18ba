//! The twisted fourth moment Σ_f ω_f λ_f(l) L(f,1/2)⁴ at μ = 0.

use std::f64::consts::PI;

use crate::arith::{compensated_sum, is_prime};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::lfun::{central_values, fill_root_numbers};
use crate::modsym::{eigensystem_with, EigenOptions, EigenSystem};
use crate::tracesums::{harmonic_weights_with, WeightMethod};

/// Coefficient count used by default at level q; covers the doubled
/// symmetric-square truncation.
pub fn default_nmax(q: u64) -> usize {
    (20 * q as usize + 1).max(500)
}

/// Eigensystem with root numbers and symmetric-square weights filled in.
pub fn prepare_level(q: u64, n_max: usize, strategy: Strategy) -> Result<EigenSystem> {
    prepare_level_with(q, n_max, WeightMethod::default(), strategy)
}

pub fn prepare_level_with(q: u64, n_max: usize, method: WeightMethod, strategy: Strategy) -> Result<EigenSystem> {
    let opts = EigenOptions { strategy, ..EigenOptions::default() };
    let mut es = eigensystem_with(q, n_max, &opts)?;
    fill_root_numbers(&mut es)?;
    let (es, _) = harmonic_weights_with(&es, 0, method, strategy)?;
    Ok(es)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormContribution {
    pub form_index: usize,
    pub lambda_l: f64,
    pub central_value: f64,
    pub weight: f64,
    pub epsilon: i8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentDiagnostics {
    pub n_max: usize,
    /// Largest AFE truncation used.
    pub afe_terms: usize,
    /// Largest estimated error of a central value.
    pub max_value_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub level: u64,
    pub twist: u64,
    pub g: usize,
    pub harmonic_value: f64,
    pub natural_value: f64,
    pub per_form: Vec<FormContribution>,
    pub diagnostics: MomentDiagnostics,
}

impl MomentReport {
    /// Recomputes both averages from the per-form breakdown in the given order.
    pub fn recompute(per_form: &[FormContribution]) -> (f64, f64) {
        let h = compensated_sum(per_form.iter().map(|c| c.weight * c.lambda_l * c.central_value.powi(4)));
        let n = compensated_sum(per_form.iter().map(|c| c.lambda_l * c.central_value.powi(4)));
        (h, if per_form.is_empty() { 0.0 } else { n / per_form.len() as f64 })
    }
}

pub fn fourth_moment(es: &EigenSystem, l: u64) -> Result<MomentReport> {
    fourth_moment_with(es, l, Strategy::auto())
}

pub fn fourth_moment_with(es: &EigenSystem, l: u64, strategy: Strategy) -> Result<MomentReport> {
    let q = es.level;
    if l == 0 || l >= q {
        return Err(Error::InvalidArgument(format!("twist l = {l} must satisfy 1 <= l < q = {q}")));
    }
    let values = central_values(es, strategy)?;
    let mut per_form = Vec::with_capacity(es.len());
    for (f, cv) in values.iter().enumerate() {
        let form = es.form(f)?;
        let weight = form
            .weight
            .ok_or_else(|| Error::InvalidArgument(format!("form {f} at level {q} has no weight")))?;
        let lambda_l = es.lambda(f, l).ok_or(Error::InsufficientCoefficients { needed: l as usize, available: es.n_max })?;
        per_form.push(FormContribution { form_index: f, lambda_l, central_value: cv.value, weight, epsilon: cv.epsilon });
    }
    let (harmonic_value, natural_value) = MomentReport::recompute(&per_form);
    let diagnostics = MomentDiagnostics {
        n_max: es.n_max,
        afe_terms: values.iter().map(|v| v.truncation_length).max().unwrap_or(0),
        max_value_error: values.iter().map(|v| v.est_error).fold(0.0, f64::max),
    };
    Ok(MomentReport { level: q, twist: l, g: es.len(), harmonic_value, natural_value, per_form, diagnostics })
}

/// A polynomial in log q, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq)]
pub struct MainTermPolynomial {
    pub coefficients: Vec<f64>,
}

impl MainTermPolynomial {
    pub fn new(coefficients: Vec<f64>) -> Self {
        MainTermPolynomial { coefficients }
    }

    /// Only the known leading term (log q)⁶/(60π²).
    pub fn leading() -> Self {
        let mut c = vec![0.0; 7];
        c[6] = 1.0 / (60.0 * PI * PI);
        MainTermPolynomial { coefficients: c }
    }

    pub fn eval_log(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn eval(&self, q: u64) -> f64 {
        self.eval_log((q as f64).ln())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub level: u64,
    pub twist: u64,
    pub g: usize,
    pub harmonic_value: f64,
    pub natural_value: f64,
    pub main_term: Option<f64>,
}

impl SweepRow {
    pub fn residual(&self) -> Option<f64> {
        self.main_term.map(|p| self.harmonic_value - p)
    }

    pub fn ratio(&self) -> Option<f64> {
        self.main_term.map(|p| self.harmonic_value / p)
    }
}

/// One row per level; a failing level does not abort the others.
pub fn moment_sweep(
    levels: &[u64],
    l: u64,
    main_term: Option<&MainTermPolynomial>,
    strategy: Strategy,
) -> Vec<(u64, Result<SweepRow>)> {
    let rows = exec::map(strategy, levels, |&q| -> Result<SweepRow> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if l >= q {
            return Err(Error::InvalidArgument(format!("twist l = {l} must be < q = {q}")));
        }
        // Levels run concurrently; each is sequential inside.
        let es = prepare_level(q, default_nmax(q), Strategy::Sequential)?;
        let r = fourth_moment_with(&es, l, Strategy::Sequential)?;
        Ok(SweepRow {
            level: q,
            twist: l,
            g: r.g,
            harmonic_value: r.harmonic_value,
            natural_value: r.natural_value,
            main_term: main_term.map(|p| p.eval(q)),
        })
    });
    levels.iter().copied().zip(rows).collect()
}
