//! Classical Kloosterman sums S(m,n;c) = Σ_{x unit mod c} cos(2π(mx + n·x̄)/c).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::RwLock;

use super::modular::{gcd, mod_inverse, modulo};
use super::summation::CompensatedSum;
use super::table::divisor_tau;
use crate::error::{Error, Result};

/// Units mod c with their inverses, plus a cosine table. Reuse one instance
/// for many (m, n) at the same modulus.
#[derive(Debug, Clone)]
pub struct KloostermanModulus {
    c: u64,
    // (x, x̄, multiplicity); x and c−x give equal terms, so only x < c/2 is kept
    units: Vec<(u32, u32, u8)>,
    cos: Vec<f64>,
}

impl KloostermanModulus {
    /// Panics if c = 0 or c ≥ 2³².
    pub fn new(c: u64) -> Self {
        assert!(c >= 1 && c < (1u64 << 32), "modulus out of range: {c}");
        let mut units = Vec::new();
        if c <= 2 {
            units.push((if c == 1 { 0 } else { 1 }, if c == 1 { 0 } else { 1 }, 1));
        } else {
            for x in 1..c.div_ceil(2) {
                if gcd(x, c) == 1 {
                    let xi = mod_inverse(x as i64, c).expect("unit");
                    units.push((x as u32, xi as u32, 2));
                }
            }
        }
        let cf = c as f64;
        let cos = (0..c)
            .map(|k| {
                let k = k.min(c - k);
                (2.0 * PI * k as f64 / cf).cos()
            })
            .collect();
        KloostermanModulus { c, units, cos }
    }

    pub fn modulus(&self) -> u64 {
        self.c
    }

    /// Number of units mod c.
    pub fn unit_count(&self) -> u64 {
        self.units.iter().map(|u| u.2 as u64).sum()
    }

    /// Units x with 0 < x < c/2 (or x = 1 for c ≤ 2) and their inverses.
    pub fn half_units(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.units.iter().map(|&(x, xi, _)| (x as u64, xi as u64))
    }

    /// cos(2πk/c) for 0 ≤ k < c.
    #[inline]
    pub fn cos_at(&self, k: u64) -> f64 {
        self.cos[k as usize]
    }

    /// S(m, n; c).
    pub fn sum(&self, m: i64, n: i64) -> f64 {
        let c = self.c;
        let (m, n) = (modulo(m, c), modulo(n, c));
        let mut acc = CompensatedSum::new();
        for &(x, xi, w) in &self.units {
            let k = (m * x as u64 + n * xi as u64) % c;
            acc.add(w as f64 * self.cos[k as usize]);
        }
        acc.value()
    }
}

/// S(m, n; c) by direct summation over units.
pub fn kloosterman(m: i64, n: i64, c: u64) -> Result<f64> {
    if c == 0 {
        return Err(Error::ZeroArgument);
    }
    Ok(KloostermanModulus::new(c).sum(m, n))
}

/// Weil bound τ(c)·gcd(m,n,c)^{1/2}·c^{1/2}.
pub fn weil_bound(m: i64, n: i64, c: u64) -> f64 {
    let g = gcd(gcd(m.unsigned_abs(), n.unsigned_abs()), c);
    divisor_tau(c).unwrap_or(0) as f64 * (g as f64).sqrt() * (c as f64).sqrt()
}

/// Memoized Kloosterman sums keyed by (min, max) of the reduced arguments
/// and c; read-mostly, writers excluded by an RwLock.
#[derive(Debug)]
pub struct KloostermanTable {
    max_c: u64,
    entries: RwLock<HashMap<(u64, u64, u64), f64>>,
}

impl KloostermanTable {
    pub fn new(max_c: u64) -> Self {
        KloostermanTable { max_c, entries: RwLock::new(HashMap::new()) }
    }

    pub fn max_c(&self) -> u64 {
        self.max_c
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, m: i64, n: i64, c: u64) -> Result<f64> {
        if c == 0 {
            return Err(Error::ZeroArgument);
        }
        if c > self.max_c {
            return Err(Error::InvalidArgument(format!(
                "modulus {c} exceeds table cap {}",
                self.max_c
            )));
        }
        let (a, b) = (modulo(m, c), modulo(n, c));
        let key = (a.min(b), a.max(b), c);
        if let Some(&v) = self.entries.read().expect("poisoned").get(&key) {
            return Ok(v);
        }
        let v = kloosterman(key.0 as i64, key.1 as i64, c)?;
        self.entries.write().expect("poisoned").insert(key, v);
        Ok(v)
    }

    /// Snapshot of all stored entries.
    pub fn entries(&self) -> Vec<((u64, u64, u64), f64)> {
        let mut v: Vec<_> = self.entries.read().expect("poisoned").iter().map(|(k, v)| (*k, *v)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}
