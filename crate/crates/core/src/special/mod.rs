//! Bessel kernels, gamma/zeta helpers, quadrature and cutoff weights.

pub mod bessel;
mod cutoff;
mod dd;
pub mod gamma;
pub mod quadrature;

pub use bessel::{bessel_j0, bessel_j1, bessel_y0, EULER_GAMMA};
pub use cutoff::{
    bump_b2, cutoff_eval, sieve_test_function, smoothstep5, BumpShape, CutoffProfile,
    SieveTestFunction,
};
pub use dd::Dd;
