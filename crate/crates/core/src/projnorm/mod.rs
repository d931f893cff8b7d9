//! The projected normal distribution `pr(X) = X/‖X‖`, `X ~ N(μ, Σ)`, on S².

mod density;
mod mills;
mod sample;

pub use density::{
    density, density_at_cosine, density_general, GeneralNormalParams, ProjNormParams,
};
pub use mills::{mills_ratio, mills_ratio_series, scaled_mills_ratio, SQRT_2PI};
pub use sample::{sample, sample_uniform, sample_with_rng, seeded_rng};

pub(crate) use density::shape_factor;
