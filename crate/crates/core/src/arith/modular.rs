//! Modular arithmetic on machine integers.

pub use num_integer::gcd;

/// Least nonnegative residue of `a` modulo `m` (m ≥ 1).
#[inline]
pub fn modulo(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

/// Inverse of `a` modulo `m`, or `None` when gcd(a, m) ≠ 1. For m = 1 the
/// inverse is 0.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (m as i128, modulo(a, m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let t = r0 / r1;
        (r0, r1) = (r1, r0 - t * r1);
        (s0, s1) = (s1, s0 - t * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(m as i128) as u64)
}

/// `a·b mod m` without overflow for any u64 inputs.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}
