//! Trace-formula side: Petersson deltas, harmonic weights, the sums
//! T_{M,N}(c) and the off-diagonal tail integral.

mod petersson;
mod tod;
mod tsum;
mod weights;

pub use petersson::{
    petersson_batch, petersson_delta, petersson_delta_truncated, petersson_delta_with, tail_majorant,
    truncation_for, PeterssonConfig, PeterssonDelta, DEFAULT_HARD_CAP,
};
pub use tod::{phi_dirichlet, phi_dirichlet_log, phi_tail_sums, t_od_tail, t_od_tail_raw, y0j1_series_coefficients};
pub use tsum::{
    divisor_terms, lemma1_ratio, lemma1_ratio_with, lemma1_rhs, t_sum, Lemma1Config, Lemma1Ratio, THETA_KS,
};
pub use weights::{
    coprime_indices, harmonic_weights, harmonic_weights_with, sym2_coefficients, sym2_gamma, sym2_l1,
    sym2_l1_with, sym2_phi, sym2_terms_needed, WeightMethod, WeightReport, SYM2_WEIGHT_CUTOFF,
};
