//! Newform eigensystems: float simultaneous diagonalization of exact Hecke
//! matrices, extended multiplicatively to all n ≤ n_max.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::space::ManinSymbolSpace;
use crate::arith::{factorize, gcd, is_prime, primes_up_to};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};

/// Target absolute precision of eigenvalue data.
pub const EIGEN_PRECISION: f64 = 1e-8;

/// One primitive newform of the level.
#[derive(Debug, Clone, PartialEq)]
pub struct Newform {
    /// λ(n) for 0 ≤ n ≤ n_max; λ(0) is unused and stored as 0.
    pub lambda: Vec<f64>,
    /// Root number ±1, or 0 while undetermined.
    pub epsilon: i8,
    /// Harmonic weight ω_f = 1/(4π⟨f,f⟩), once computed.
    pub weight: Option<f64>,
    /// |a_q| − 1 before projecting λ(q) onto ±q^{-1/2}.
    pub aq_deviation: f64,
}

/// All newforms of weight 2 and prime level q.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub level: u64,
    pub n_max: usize,
    pub precision: f64,
    pub forms: Vec<Newform>,
}

/// Knobs of the eigen-extraction.
#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    pub seed: u64,
    pub attempts: usize,
    pub strategy: Strategy,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { seed: 0x5eed_0f_4ec6e, attempts: 6, strategy: Strategy::auto() }
    }
}

/// λ(p^k) for k = 0..=kmax from λ(p), for p not dividing the level.
pub fn prime_power_lambdas(lp: f64, kmax: u32) -> Vec<f64> {
    let mut v = vec![1.0, lp];
    for k in 1..kmax as usize {
        v.push(lp * v[k] - v[k - 1]);
    }
    v.truncate(kmax as usize + 1);
    v
}

impl Newform {
    /// λ(n) multiplicatively from prime values; defined beyond n_max when
    /// every prime factor of n is ≤ n_max.
    pub fn lambda_at(&self, level: u64, n: u64) -> Option<f64> {
        if n == 0 {
            return None;
        }
        if (n as usize) < self.lambda.len() {
            return Some(self.lambda[n as usize]);
        }
        let mut acc = 1.0;
        for (p, e) in factorize(n) {
            let lp = *self.lambda.get(p as usize)?;
            acc *= if p == level { lp.powi(e as i32) } else { prime_power_lambdas(lp, e)[e as usize] };
        }
        Some(acc)
    }
}

impl EigenSystem {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn lambda(&self, form: usize, n: u64) -> Option<f64> {
        self.forms.get(form)?.lambda_at(self.level, n)
    }

    pub fn form(&self, form: usize) -> Result<&Newform> {
        self.forms
            .get(form)
            .ok_or_else(|| Error::InvalidArgument(format!("form index {form} out of range (g = {})", self.forms.len())))
    }

    /// Largest |λ(m)λ(n) − Σ_{d|(m,n),(d,q)=1} λ(mn/d²)| over mn ≤ bound.
    pub fn hecke_residual(&self, bound: u64) -> f64 {
        let mut worst = 0.0f64;
        for f in 0..self.forms.len() {
            for m in 1..=bound {
                for n in 1..=bound / m {
                    let (Some(a), Some(b)) = (self.lambda(f, m), self.lambda(f, n)) else { continue };
                    let g = gcd(m, n);
                    let mut rhs = 0.0;
                    for d in (1..=g).filter(|d| g % d == 0 && gcd(*d, self.level) == 1) {
                        rhs += self.lambda(f, m * n / (d * d)).unwrap_or(f64::NAN);
                    }
                    worst = worst.max((a * b - rhs).abs());
                }
            }
        }
        worst
    }
}

fn to_dmatrix(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

fn null_vector(a: &DMatrix<f64>, mu: f64) -> DVector<f64> {
    let n = a.nrows();
    let b = a - DMatrix::<f64>::identity(n, n) * mu;
    let svd = b.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty");
    let v = vt.row(idx).transpose();
    let v = v.normalize();
    // fix the overall sign for determinism
    let k = v.iamax();
    if v[k] < 0.0 {
        -v
    } else {
        v
    }
}

fn eigenvalue_of(t: &DMatrix<f64>, v: &DVector<f64>) -> (f64, f64) {
    let tv = t * v;
    let a = v.dot(&tv) / v.dot(v);
    let resid = (tv - v * a).norm() / v.norm();
    (a, resid)
}

/// Eigenvectors of a random combination of the given operators.
fn split(level: u64, ops: &[&DMatrix<f64>], opts: &EigenOptions) -> Result<Vec<DVector<f64>>> {
    let g = ops[0].nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ level.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut best_gap = 0.0;
    for _ in 0..opts.attempts.max(1) {
        let mut a = DMatrix::<f64>::zeros(g, g);
        for t in ops {
            let r: f64 = rng.gen_range(-1.0..1.0);
            a += *t * r;
        }
        let Some(ev) = a.clone().schur().eigenvalues() else { continue };
        let mut ev: Vec<f64> = ev.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let scale = 1.0 + ev.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let gap = ev.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        if g == 1 || gap > 1e-6 * scale {
            return Ok(ev.iter().map(|&mu| null_vector(&a, mu)).collect());
        }
        best_gap = f64::max(best_gap, gap);
    }
    Err(Error::EigenSeparation { level, gap: best_gap })
}

/// Eigensystem with default options.
pub fn eigensystem(q: u64, n_max: usize) -> Result<EigenSystem> {
    eigensystem_with(q, n_max, &EigenOptions::default())
}

pub fn eigensystem_with(q: u64, n_max: usize, opts: &EigenOptions) -> Result<EigenSystem> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("n_max must be ≥ 2, got {n_max}")));
    }
    let space = ManinSymbolSpace::new(q)?;
    eigensystem_from_space(&space, n_max, opts)
}

pub fn eigensystem_from_space(space: &ManinSymbolSpace, n_max: usize, opts: &EigenOptions) -> Result<EigenSystem> {
    let q = space.level();
    let g = space.cuspidal_plus_dimension();
    if g == 0 {
        return Ok(EigenSystem { level: q, n_max, precision: EIGEN_PRECISION, forms: Vec::new() });
    }
    let mut primes: Vec<u64> = primes_up_to(n_max as u64).into_iter().filter(|&p| p != q).collect();
    // primes up to the Sturm bound determine a form
    let sturm = (q + 1) / 6 + 2;
    let split_primes: Vec<u64> = primes_up_to(sturm.max(20)).into_iter().filter(|&p| p != q).collect();
    for &p in &split_primes {
        if !primes.contains(&p) {
            primes.push(p);
        }
    }
    primes.push(q);
    primes.sort_unstable();
    let mats = exec::map(opts.strategy, &primes, |&p| space.hecke_cuspidal_f64(p).map(|m| to_dmatrix(&m)));
    let mut ops = BTreeMap::new();
    for (p, m) in primes.iter().zip(mats) {
        ops.insert(*p, m?);
    }
    let split_ops: Vec<&DMatrix<f64>> = split_primes.iter().map(|p| &ops[p]).collect();
    let vectors = split(q, &split_ops, opts)?;

    let mut forms = Vec::with_capacity(g);
    for v in &vectors {
        let mut lp = BTreeMap::new();
        for (&p, t) in &ops {
            let (a, resid) = eigenvalue_of(t, v);
            if split_primes.contains(&p) && resid > EIGEN_PRECISION * (1.0 + a.abs()) {
                return Err(Error::EigenSeparation { level: q, gap: resid });
            }
            lp.insert(p, a);
        }
        let aq = lp[&q];
        let aq_deviation = aq.abs() - 1.0;
        let lq = aq.signum() / (q as f64).sqrt();
        let mut lambda = vec![0.0; n_max + 1];
        lambda[1] = 1.0;
        for (&p, &a) in &lp {
            if p as usize <= n_max {
                lambda[p as usize] = if p == q { lq } else { a / (p as f64).sqrt() };
            }
        }
        let prime_at = |p: u64| if p == q { lq } else { lp[&p] / (p as f64).sqrt() };
        for n in 2..=n_max {
            let mut acc = 1.0;
            for (p, e) in factorize(n as u64) {
                acc *= if p == q { lq.powi(e as i32) } else { prime_power_lambdas(prime_at(p), e)[e as usize] };
            }
            lambda[n] = acc;
        }
        forms.push(Newform { lambda, epsilon: 0, weight: None, aq_deviation });
    }
    sort_forms(q, &mut forms);
    Ok(EigenSystem { level: q, n_max, precision: EIGEN_PRECISION, forms })
}

/// Lexicographic order on (λ(2), λ(3), λ(5), …) rounded to 1e-6.
pub fn sort_forms(level: u64, forms: &mut [Newform]) {
    let key = |f: &Newform| -> Vec<i64> {
        let n_max = f.lambda.len().saturating_sub(1) as u64;
        primes_up_to(n_max)
            .into_iter()
            .filter(|&p| p != level)
            .map(|p| (f.lambda[p as usize] * 1e6).round() as i64)
            .collect()
    };
    forms.sort_by_cached_key(key);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_power_recursion() {
        let v = prime_power_lambdas(-2f64.sqrt(), 3);
        assert!((v[2] - 1.0).abs() < 1e-15);
        assert!((v[3] - (-2f64.sqrt() * 1.0 + 2f64.sqrt())).abs() < 1e-15);
    }
}
