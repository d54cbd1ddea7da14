//! Linear stability of the scheme: closed-form characteristic polynomials,
//! spectral-radius regions, root loci, parabolic radii and the
//! generating-function test for the largest usable order.

mod discriminant;
mod locus;
mod polys;
mod radius;
mod region;

pub use discriminant::{
    decay_witness, fourier_coefficients, fourier_discriminant, generating_eval, max_permissible_order,
    poly_value_direct, principal_pole, DecayRow, DecayWitness, MaxOrderOptions, MaxOrderResult, VariantValues,
};
pub use locus::{root_locus, RootLocusCurve};
pub use polys::{char_poly, char_poly_in_z, gelfand_shilov, variant_poly, variant_poly_real};
pub use radius::{parabolic_radius, radius_for_config, ParabolicRadiusResult};
pub use region::{stability_indicator, stability_indicator_fast, stability_region, IndicatorPaths, StabilityGrid};
