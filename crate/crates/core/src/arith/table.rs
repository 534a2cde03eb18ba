//! Shared multiplicative-function sieve with factorization fallback.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default sieve bound for the process-wide table.
pub const DEFAULT_SIEVE_BOUND: usize = 1_000_000;

/// Tables of τ, μ, φ and least prime factors for 1 ≤ n ≤ bound, built by a
/// linear sieve. Queries above the bound fall back to trial division.
#[derive(Debug, Clone)]
pub struct ArithTable {
    bound: usize,
    spf: Vec<u32>,
    tau: Vec<u32>,
    mu: Vec<i8>,
    phi: Vec<u32>,
    primes: Vec<u32>,
}

impl ArithTable {
    pub fn new(bound: usize) -> Self {
        let bound = bound.max(2);
        let mut spf = vec![0u32; bound + 1];
        let mut tau = vec![0u32; bound + 1];
        let mut mu = vec![0i8; bound + 1];
        let mut phi = vec![0u32; bound + 1];
        // exponent of the least prime in n, needed for τ
        let mut lp_exp = vec![0u8; bound + 1];
        let mut primes = Vec::new();
        tau[1] = 1;
        mu[1] = 1;
        phi[1] = 1;
        for i in 2..=bound {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
                tau[i] = 2;
                mu[i] = -1;
                phi[i] = i as u32 - 1;
                lp_exp[i] = 1;
            }
            for &p in &primes {
                let p = p as usize;
                let ip = i * p;
                if p > spf[i] as usize || ip > bound {
                    break;
                }
                spf[ip] = p as u32;
                if p == spf[i] as usize {
                    let e = lp_exp[i] as u32;
                    lp_exp[ip] = lp_exp[i] + 1;
                    tau[ip] = tau[i] / (e + 1) * (e + 2);
                    mu[ip] = 0;
                    phi[ip] = phi[i] * p as u32;
                } else {
                    lp_exp[ip] = 1;
                    tau[ip] = tau[i] * 2;
                    mu[ip] = -mu[i];
                    phi[ip] = phi[i] * (p as u32 - 1);
                }
            }
        }
        ArithTable { bound, spf, tau, mu, phi, primes }
    }

    /// The process-wide table with the default bound.
    pub fn global() -> &'static ArithTable {
        static TABLE: OnceLock<ArithTable> = OnceLock::new();
        TABLE.get_or_init(|| ArithTable::new(DEFAULT_SIEVE_BOUND))
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Prime factorization as (prime, exponent) pairs in increasing order.
    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut push = |p: u64| match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        };
        let mut n = n;
        if n as usize > self.bound {
            let mut p = 2u64;
            while p * p <= n && n as usize > self.bound {
                while n % p == 0 {
                    push(p);
                    n /= p;
                }
                p += if p == 2 { 1 } else { 2 };
            }
            if n as usize > self.bound {
                push(n);
                return out;
            }
        }
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            push(p);
            n /= p;
        }
        out
    }

    pub fn divisor_tau(&self, n: u64) -> Result<u64> {
        match n {
            0 => Err(Error::ZeroArgument),
            n if (n as usize) <= self.bound => Ok(self.tau[n as usize] as u64),
            n => Ok(self.factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()),
        }
    }

    pub fn mobius(&self, n: u64) -> Result<i8> {
        match n {
            0 => Err(Error::ZeroArgument),
            n if (n as usize) <= self.bound => Ok(self.mu[n as usize]),
            n => {
                let f = self.factorize(n);
                if f.iter().any(|&(_, e)| e > 1) {
                    Ok(0)
                } else if f.len() % 2 == 0 {
                    Ok(1)
                } else {
                    Ok(-1)
                }
            }
        }
    }

    pub fn euler_phi(&self, n: u64) -> Result<u64> {
        match n {
            0 => Err(Error::ZeroArgument),
            n if (n as usize) <= self.bound => Ok(self.phi[n as usize] as u64),
            n => Ok(self
                .factorize(n)
                .iter()
                .map(|&(p, e)| (p - 1) * p.pow(e - 1))
                .product()),
        }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n < 2 {
            return false;
        }
        if n as usize <= self.bound {
            return self.spf[n as usize] as u64 == n;
        }
        let f = self.factorize(n);
        f.len() == 1 && f[0].1 == 1
    }

    /// All primes ≤ n, ascending.
    pub fn primes_up_to(&self, n: u64) -> Vec<u64> {
        if n as usize <= self.bound {
            let end = self.primes.partition_point(|&p| p as u64 <= n);
            return self.primes[..end].iter().map(|&p| p as u64).collect();
        }
        let mut out: Vec<u64> = self.primes.iter().map(|&p| p as u64).collect();
        out.extend((self.bound as u64 + 1..=n).filter(|&k| self.is_prime(k)));
        out
    }
}

/// Number of positive divisors of n.
pub fn divisor_tau(n: u64) -> Result<u64> {
    ArithTable::global().divisor_tau(n)
}

/// Möbius function.
pub fn mobius(n: u64) -> Result<i8> {
    ArithTable::global().mobius(n)
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> Result<u64> {
    ArithTable::global().euler_phi(n)
}

pub fn is_prime(n: u64) -> bool {
    ArithTable::global().is_prime(n)
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    ArithTable::global().primes_up_to(n)
}

pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    ArithTable::global().factorize(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(divisor_tau(1), Ok(1));
        assert_eq!(divisor_tau(12), Ok(6));
        assert_eq!(divisor_tau(97), Ok(2));
        assert_eq!(mobius(1), Ok(1));
        assert_eq!(mobius(4), Ok(0));
        assert_eq!(mobius(30), Ok(-1));
        assert_eq!(euler_phi(1), Ok(1));
        assert_eq!(euler_phi(12), Ok(4));
        assert_eq!(euler_phi(97), Ok(96));
        assert_eq!(divisor_tau(0), Err(Error::ZeroArgument));
        assert_eq!(mobius(0), Err(Error::ZeroArgument));
        assert_eq!(euler_phi(0), Err(Error::ZeroArgument));
    }

    #[test]
    fn fallback_matches_sieve() {
        let small = ArithTable::new(100);
        let big = ArithTable::global();
        for n in 1..5000u64 {
            assert_eq!(small.divisor_tau(n), big.divisor_tau(n), "tau {n}");
            assert_eq!(small.mobius(n), big.mobius(n), "mu {n}");
            assert_eq!(small.euler_phi(n), big.euler_phi(n), "phi {n}");
            assert_eq!(small.is_prime(n), big.is_prime(n), "prime {n}");
        }
        assert_eq!(small.primes_up_to(200), big.primes_up_to(200));
    }

    #[test]
    fn beyond_default_bound() {
        let n = 1_000_003u64; // prime
        assert!(is_prime(n));
        assert_eq!(euler_phi(n), Ok(n - 1));
        assert_eq!(divisor_tau(2 * n), Ok(4));
        assert_eq!(mobius(4 * n), Ok(0));
    }
}
