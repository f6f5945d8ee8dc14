//! Poisson random measure with intensity `Lebesgue x nu`: sampling,
//! compensated pairings, Charlier functionals and the Levy field.

mod config;
mod identities;
mod integrals;
mod noise;

pub use config::{sample_prm, JumpPoint, PointConfiguration, PrmSampler, SampleBox};
pub use identities::{
    char_functional_check, char_functional_theory, compositions, moment_formula, moment_from_integrals, moment_with,
    CharFunctional,
};
pub use integrals::{
    charlier_eval, charlier_with, k_alpha_eval, low_order_indices, pair_centered, pair_compensated, pair_raw,
    DeltaSums, Intensity, KAlphaEvaluator,
};
pub use noise::{
    eta_chaos, eta_sample, eta_sample_with_mean, mixed_partial, prm_noise_chaos, white_noise_chaos,
    white_noise_chaos_with_m, white_noise_derivative_gap,
};
