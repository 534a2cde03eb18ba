//! Exact number-theoretic primitives: τ, μ, φ, modular inverses and
//! Kloosterman sums.

mod kloosterman;
mod modular;
mod summation;
mod table;

pub use kloosterman::{kloosterman, weil_bound, KloostermanModulus, KloostermanTable};
pub use modular::{gcd, mod_inverse, modulo, mul_mod};
pub use summation::{compensated_sum, CompensatedSum};
pub use table::{
    divisor_tau, euler_phi, factorize, is_prime, mobius, primes_up_to, ArithTable,
    DEFAULT_SIEVE_BOUND,
};
