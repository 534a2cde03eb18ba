//! Weight-2 newforms of prime level via modular symbols.

mod eigen;
pub mod heilbronn;
pub mod linalg;
mod space;

pub use eigen::{
    eigensystem, eigensystem_from_space, eigensystem_with, prime_power_lambdas, sort_forms,
    EigenOptions, EigenSystem, Newform, EIGEN_PRECISION,
};
pub use space::{build_space, cuspidal_plus_dimension, genus_formula, hecke_matrix, HeckeMatrix, ManinSymbolSpace};
