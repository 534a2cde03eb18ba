//! The trilinear Kloosterman form
//! Σ_m a_m Σ_n b_n Σ_{(c,r)=1} g(m,n,c) S(d m r̄, ±n; sc)
//! and the large-sieve bound it is measured against.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::{Fft, FftPlanner};

use crate::arith::{factorize, gcd, mod_inverse};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::special::{sieve_test_function, SieveTestFunction};

/// Values on the integers of (S, 2S], starting at floor(S)+1.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicSequence {
    pub first: u64,
    pub values: Vec<Complex64>,
}

impl DyadicSequence {
    /// First and last integer of (s, 2s].
    pub fn range(scale: f64) -> (u64, u64) {
        (scale.floor() as u64 + 1, (2.0 * scale).floor() as u64)
    }

    pub fn zeros(scale: f64) -> Self {
        let (lo, hi) = Self::range(scale);
        DyadicSequence { first: lo, values: vec![Complex64::new(0.0, 0.0); (hi + 1).saturating_sub(lo) as usize] }
    }

    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| (self.first + i as u64, *v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SieveInstance {
    pub r: u64,
    pub s: u64,
    pub d: u64,
    pub scale_m: f64,
    pub scale_n: f64,
    pub scale_c: f64,
    pub a: DyadicSequence,
    pub b: DyadicSequence,
    pub g: SieveTestFunction,
    /// +1 or −1.
    pub sign: i8,
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

impl SieveInstance {
    pub fn new(
        (r, s, d): (u64, u64, u64),
        a: DyadicSequence,
        b: DyadicSequence,
        g: SieveTestFunction,
        sign: i8,
    ) -> Result<Self> {
        if r == 0 || s == 0 || d == 0 {
            return Err(Error::ZeroArgument);
        }
        if gcd(r, s) != 1 || gcd(r, d) != 1 || gcd(s, d) != 1 {
            return Err(Error::InvalidArgument(format!("r={r}, s={s}, d={d} not pairwise coprime")));
        }
        if !is_squarefree(r) || !is_squarefree(s) {
            return Err(Error::InvalidArgument(format!("r={r} and s={s} must be square-free")));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidArgument(format!("sign must be ±1, got {sign}")));
        }
        for (seq, scale, name) in [(&a, g.scale_m, "a"), (&b, g.scale_n, "b")] {
            let (lo, hi) = DyadicSequence::range(scale);
            let last = seq.first + seq.values.len() as u64;
            if !seq.values.is_empty() && (seq.first < lo || last > hi + 1) {
                return Err(Error::InvalidArgument(format!("sequence {name} leaves ({scale}, {}]", 2.0 * scale)));
            }
        }
        Ok(SieveInstance {
            r,
            s,
            d,
            scale_m: g.scale_m,
            scale_n: g.scale_n,
            scale_c: g.scale_c,
            a,
            b,
            g,
            sign,
        })
    }

    /// X_d = √(dMN)/(sC√r).
    pub fn x_d(&self) -> f64 {
        (self.d as f64 * self.scale_m * self.scale_n).sqrt() / (self.s as f64 * self.scale_c * (self.r as f64).sqrt())
    }

    /// Moduli c in the support of g with (c, r) = 1.
    pub fn c_values(&self) -> impl Iterator<Item = u64> + '_ {
        let (lo, hi) = DyadicSequence::range(self.scale_c);
        (lo..=hi).filter(move |&c| gcd(c, self.r) == 1 && self.g.factor_c(c as f64) != 0.0)
    }
}

/// Σ_j x_j e(j t/K) for all t mod K, x folded mod K.
fn exp_transform(fft: &dyn Fft<f64>, k: u64, seq: &DyadicSequence, weight: impl Fn(u64) -> f64) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); k as usize];
    for (m, v) in seq.iter() {
        buf[(m % k) as usize] += v * weight(m);
    }
    fft.process(&mut buf);
    buf
}

pub fn trilinear_sum(inst: &SieveInstance) -> Complex64 {
    let mut planner = FftPlanner::<f64>::new();
    let mut plans: HashMap<u64, Arc<dyn Fft<f64>>> = HashMap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for c in inst.c_values() {
        let k = inst.s * c;
        let fft = plans.entry(k).or_insert_with(|| planner.plan_fft_inverse(k as usize)).clone();
        let am = exp_transform(fft.as_ref(), k, &inst.a, |m| inst.g.factor_m(m as f64));
        let bn = exp_transform(fft.as_ref(), k, &inst.b, |n| inst.g.factor_n(n as f64));
        let rbar = mod_inverse(inst.r as i64, k).expect("r coprime to sc");
        let x_mult = (inst.d % k) * rbar % k;
        let acc = if k == 1 {
            am[0] * bn[0]
        } else {
            let mut acc = Complex64::new(0.0, 0.0);
            for u in 1..k {
                let Some(ub) = mod_inverse(u as i64, k) else { continue };
                let x = (x_mult as u128 * u as u128 % k as u128) as usize;
                let y = if inst.sign > 0 { ub } else { k - ub } as usize;
                acc += am[x] * bn[y];
            }
            acc
        };
        // Neumaier on each component.
        let term = acc * inst.g.factor_c(c as f64);
        let t = total + term;
        comp.re += if total.re.abs() >= term.re.abs() { (total.re - t.re) + term.re } else { (term.re - t.re) + total.re };
        comp.im += if total.im.abs() >= term.im.abs() { (total.im - t.im) + term.im } else { (term.im - t.im) + total.im };
        total = t;
    }
    total + comp
}

/// d^θ sC√r (1+X⁻¹)^{2θ}/(1+X) (1+X+√(M/rs)) (1+X+√(N/rs)) ‖a‖₂‖b‖₂,
/// with the C^ε factor and the implied constant set to 1.
pub fn ls_bound_rhs(inst: &SieveInstance, theta: f64) -> f64 {
    let x = inst.x_d();
    let rs = (inst.r * inst.s) as f64;
    (inst.d as f64).powf(theta)
        * inst.s as f64
        * inst.scale_c
        * (inst.r as f64).sqrt()
        * (1.0 + 1.0 / x).powf(2.0 * theta)
        / (1.0 + x)
        * (1.0 + x + (inst.scale_m / rs).sqrt())
        * (1.0 + x + (inst.scale_n / rs).sqrt())
        * inst.a.norm2()
        * inst.b.norm2()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SequenceKind {
    /// Independent ±1.
    #[default]
    Rademacher,
    /// Independent e(t), t uniform.
    UnitCircle,
    /// A single 1 at a random point.
    Singleton,
}

impl SequenceKind {
    fn sample(self, rng: &mut ChaCha8Rng, scale: f64) -> DyadicSequence {
        let mut seq = DyadicSequence::zeros(scale);
        let len = seq.values.len();
        match self {
            SequenceKind::Rademacher => {
                for v in &mut seq.values {
                    *v = Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0);
                }
            }
            SequenceKind::UnitCircle => {
                for v in &mut seq.values {
                    *v = Complex64::from_polar(1.0, 2.0 * PI * rng.gen::<f64>());
                }
            }
            SequenceKind::Singleton => {
                if len > 0 {
                    seq.values[rng.gen_range(0..len)] = Complex64::new(1.0, 0.0);
                }
            }
        }
        seq
    }
}

/// Admissible r, s (square-free) and d, pairwise coprime.
const RS_CHOICES: [u64; 6] = [1, 2, 3, 5, 6, 7];
const D_MAX: u64 = 6;

/// A random admissible instance with M, N, C uniform in [size/4, size].
pub fn random_instance(rng: &mut ChaCha8Rng, size: f64, kind: SequenceKind) -> Result<SieveInstance> {
    let (r, s, d) = loop {
        let r = RS_CHOICES[rng.gen_range(0..RS_CHOICES.len())];
        let s = RS_CHOICES[rng.gen_range(0..RS_CHOICES.len())];
        let d = rng.gen_range(1..=D_MAX);
        if gcd(r, s) == 1 && gcd(r, d) == 1 && gcd(s, d) == 1 {
            break (r, s, d);
        }
    };
    let lo = (size / 4.0).max(1.0);
    let mut draw = || if size > lo { rng.gen_range(lo..=size) } else { lo };
    let (m, n, c) = (draw(), draw(), draw());
    let g = sieve_test_function(m, n, c)?;
    let a = kind.sample(rng, m);
    let b = kind.sample(rng, n);
    let sign = if rng.gen::<bool>() { 1 } else { -1 };
    SieveInstance::new((r, s, d), a, b, g, sign)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub r: u64,
    pub s: u64,
    pub d: u64,
    pub scale_m: f64,
    pub scale_n: f64,
    pub scale_c: f64,
    pub sign: i8,
    pub value: Complex64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioStatistics {
    pub trials: Vec<TrialRecord>,
    pub max: f64,
    pub mean: f64,
}

/// θ used by the experiment.
pub const EXPERIMENT_THETA: f64 = 7.0 / 64.0;

pub fn ratio_experiment(trials: usize, size: f64, seed: u64) -> Result<RatioStatistics> {
    ratio_experiment_with(trials, size, seed, SequenceKind::Rademacher, Strategy::auto())
}

pub fn ratio_experiment_with(
    trials: usize,
    size: f64,
    seed: u64,
    kind: SequenceKind,
    strategy: Strategy,
) -> Result<RatioStatistics> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    if !(size >= 1.0 && size.is_finite()) {
        return Err(Error::InvalidArgument(format!("size must be >= 1, got {size}")));
    }
    let probe = sieve_test_function(1.0, 1.0, 1.0)?;
    let worst = probe.check_derivative_bounds(400);
    if worst > 1.0 {
        return Err(Error::InvalidArgument(format!("test function violates derivative bounds ({worst:.4})")));
    }
    let records = exec::map_range(strategy, 0..trials, |t| -> Result<TrialRecord> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let inst = random_instance(&mut rng, size, kind)?;
        let value = trilinear_sum(&inst);
        let rhs = ls_bound_rhs(&inst, EXPERIMENT_THETA);
        let ratio = if rhs > 0.0 { value.norm() / rhs } else { 0.0 };
        Ok(TrialRecord {
            trial: t,
            r: inst.r,
            s: inst.s,
            d: inst.d,
            scale_m: inst.scale_m,
            scale_n: inst.scale_n,
            scale_c: inst.scale_c,
            sign: inst.sign,
            value,
            rhs,
            ratio,
        })
    });
    let trials: Vec<TrialRecord> = records.into_iter().collect::<Result<_>>()?;
    let max = trials.iter().map(|t| t.ratio).fold(0.0, f64::max);
    let mean = trials.iter().map(|t| t.ratio).sum::<f64>() / trials.len() as f64;
    Ok(RatioStatistics { trials, max, mean })
}
