//! Numerical workbench for the twisted fourth moment of weight-2 prime-level
//! L-functions: Kloosterman sums, Bessel kernels, modular-symbol
//! eigensystems, central values, Petersson weights, the amplifier, the
//! large-sieve harness and exact exponent balancing.

pub mod amplifier;
pub mod arith;
pub mod cache;
pub mod error;
pub mod exec;
pub mod exponents;
pub mod lfun;
pub mod modsym;
pub mod moments;
pub mod sieve;
pub mod special;
pub mod tracesums;

pub use error::{Error, Result};
pub use exec::Strategy;
