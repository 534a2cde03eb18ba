//! Compactly supported weights: the separable cutoff F_{M,N} and the smooth
//! test function g of the large-sieve harness.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Quintic smoothstep 6t⁵ − 15t⁴ + 10t³ clamped to [0, 1]; C² at both ends.
#[inline]
pub fn smoothstep5(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * t * (10.0 + t * (-15.0 + 6.0 * t))
}

/// Named bump shapes on [1/2, 3] equal to 1 on [1, 2].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BumpShape {
    /// Quintic smoothstep ramps on [1/2, 1] and [2, 3].
    #[default]
    Smoothstep,
}

impl BumpShape {
    #[inline]
    pub fn eval(self, t: f64) -> f64 {
        match self {
            BumpShape::Smoothstep => {
                if t <= 0.5 || t >= 3.0 {
                    0.0
                } else if t < 1.0 {
                    smoothstep5(2.0 * (t - 0.5))
                } else if t <= 2.0 {
                    1.0
                } else {
                    smoothstep5(3.0 - t)
                }
            }
        }
    }

    /// Points where the shape is piecewise polynomial: integrate piecewise.
    pub fn breakpoints(self) -> [f64; 4] {
        [0.5, 1.0, 2.0, 3.0]
    }
}

/// F_{M,N}(x, y) = (MN)^{-1/2} B(x/M) B(y/N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffProfile {
    pub scale_m: f64,
    pub scale_n: f64,
    pub shape: BumpShape,
}

impl CutoffProfile {
    pub fn new(scale_m: f64, scale_n: f64) -> Result<Self> {
        Self::with_shape(scale_m, scale_n, BumpShape::default())
    }

    pub fn with_shape(scale_m: f64, scale_n: f64, shape: BumpShape) -> Result<Self> {
        if !(scale_m > 0.0 && scale_n > 0.0 && scale_m.is_finite() && scale_n.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "cutoff scales must be positive, got M={scale_m}, N={scale_n}"
            )));
        }
        Ok(CutoffProfile { scale_m, scale_n, shape })
    }

    #[inline]
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let bx = self.shape.eval(x / self.scale_m);
        if bx == 0.0 {
            return 0.0;
        }
        bx * self.shape.eval(y / self.scale_n) / (self.scale_m * self.scale_n).sqrt()
    }

    /// (MN)^{-1/2} B(x/M), the x-factor including the normalization.
    #[inline]
    pub fn eval_m(&self, x: f64) -> f64 {
        self.shape.eval(x / self.scale_m) / (self.scale_m * self.scale_n).sqrt()
    }

    #[inline]
    pub fn eval_n(&self, y: f64) -> f64 {
        self.shape.eval(y / self.scale_n)
    }

    /// Integers in the closed support interval [M/2, 3M].
    pub fn m_lattice(&self) -> std::ops::RangeInclusive<u64> {
        lattice(self.scale_m)
    }

    pub fn n_lattice(&self) -> std::ops::RangeInclusive<u64> {
        lattice(self.scale_n)
    }

    /// Support breakpoints in x: M/2, M, 2M, 3M.
    pub fn m_breakpoints(&self) -> [f64; 4] {
        self.shape.breakpoints().map(|b| b * self.scale_m)
    }
}

fn lattice(scale: f64) -> std::ops::RangeInclusive<u64> {
    let lo = (0.5 * scale).ceil().max(1.0) as u64;
    let hi = (3.0 * scale).floor() as u64;
    #[allow(clippy::reversed_empty_ranges)]
    if hi < lo {
        1..=0
    } else {
        lo..=hi
    }
}

/// Value of F_{M,N}; exactly 0 outside [M/2, 3M] × [N/2, 3N].
pub fn cutoff_eval(p: &CutoffProfile, x: f64, y: f64) -> f64 {
    p.eval(x, y)
}

/// Raw bump exp(−1/((t−1)(2−t))) on (1, 2) and its first two derivatives.
fn raw_b2(t: f64) -> [f64; 3] {
    if t <= 1.0 || t >= 2.0 {
        return [0.0; 3];
    }
    let u = (t - 1.0) * (2.0 - t);
    let du = 3.0 - 2.0 * t;
    let b = (-1.0 / u).exp();
    let g = du / (u * u); // b'/b
    let dg = (-2.0 * u * u - 2.0 * u * du * du) / (u * u * u * u);
    [b, b * g, b * (g * g + dg)]
}

/// 1 / max(sup|b|, sup|b'|, sup|b''|), with a small safety margin.
fn b2_normalization() -> f64 {
    static K: OnceLock<f64> = OnceLock::new();
    *K.get_or_init(|| {
        let steps = 200_000;
        let mut sup = 0.0f64;
        for i in 1..steps {
            let v = raw_b2(1.0 + i as f64 / steps as f64);
            sup = sup.max(v[0].abs()).max(v[1].abs()).max(v[2].abs());
        }
        (1.0 - 1e-3) / sup
    })
}

/// The normalized C^∞ bump B₂ on [1, 2] and its derivatives of order 0..=2.
pub fn bump_b2(t: f64) -> [f64; 3] {
    let k = b2_normalization();
    raw_b2(t).map(|v| v * k)
}

/// g(m, n, c) = B₂(m/M) B₂(n/N) B₂(c/C), supported in [M,2M]×[N,2N]×[C,2C].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SieveTestFunction {
    pub scale_m: f64,
    pub scale_n: f64,
    pub scale_c: f64,
}

impl SieveTestFunction {
    #[inline]
    pub fn eval(&self, m: f64, n: f64, c: f64) -> f64 {
        bump_b2(m / self.scale_m)[0] * bump_b2(n / self.scale_n)[0] * bump_b2(c / self.scale_c)[0]
    }

    #[inline]
    pub fn factor_m(&self, m: f64) -> f64 {
        bump_b2(m / self.scale_m)[0]
    }

    #[inline]
    pub fn factor_n(&self, n: f64) -> f64 {
        bump_b2(n / self.scale_n)[0]
    }

    #[inline]
    pub fn factor_c(&self, c: f64) -> f64 {
        bump_b2(c / self.scale_c)[0]
    }

    /// Checks |∂ᵐ^j ∂ₙ^k ∂꜀^l g| ≤ M^{-j}N^{-k}C^{-l}, 0 ≤ j,k,l ≤ 2, by
    /// second-order central differences on an interior grid. Returns the
    /// largest observed ratio of derivative to bound.
    pub fn check_derivative_bounds(&self, grid: usize) -> f64 {
        let scales = [self.scale_m, self.scale_n, self.scale_c];
        let mut worst = 0.0f64;
        let deriv = |f: &dyn Fn(f64) -> f64, x: f64, h: f64, order: usize| -> f64 {
            match order {
                0 => f(x),
                1 => (f(x + h) - f(x - h)) / (2.0 * h),
                _ => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
            }
        };
        for i in 1..grid {
            let t = 1.0 + i as f64 / grid as f64;
            for (axis, &scale) in scales.iter().enumerate() {
                let x = t * scale;
                let h = 1e-4 * scale;
                let f = |y: f64| match axis {
                    0 => self.factor_m(y),
                    1 => self.factor_n(y),
                    _ => self.factor_c(y),
                };
                for order in 0..=2 {
                    let d = deriv(&f, x, h, order).abs();
                    worst = worst.max(d * scale.powi(order as i32));
                }
            }
        }
        worst
    }
}

pub fn sieve_test_function(scale_m: f64, scale_n: f64, scale_c: f64) -> Result<SieveTestFunction> {
    for s in [scale_m, scale_n, scale_c] {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidArgument(format!("sieve scales must be positive, got {s}")));
        }
    }
    Ok(SieveTestFunction { scale_m, scale_n, scale_c })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_basics() {
        let p = CutoffProfile::new(8.0, 5.0).unwrap();
        assert_eq!(cutoff_eval(&p, 32.0, 5.0), 0.0);
        assert_eq!(cutoff_eval(&p, 8.0, 5.0), 1.0 / 40f64.sqrt());
        assert_eq!(p.m_lattice(), 4..=24);
        assert!(CutoffProfile::new(0.1, 0.2).unwrap().m_lattice().is_empty());
        assert!(CutoffProfile::new(0.0, 1.0).is_err());
    }

    #[test]
    fn b2_normalized() {
        let mut sup = [0.0f64; 3];
        for i in 1..10_000 {
            let v = bump_b2(1.0 + i as f64 / 10_000.0);
            for k in 0..3 {
                sup[k] = sup[k].max(v[k].abs());
            }
        }
        assert!(sup.iter().all(|&s| s <= 1.0));
        assert!(sup.iter().any(|&s| s > 0.99));
        let g = sieve_test_function(10.0, 20.0, 30.0).unwrap();
        assert!(g.eval(15.0, 30.0, 45.0) > 0.0);
        assert_eq!(g.eval(5.0, 30.0, 45.0), 0.0);
    }
}
