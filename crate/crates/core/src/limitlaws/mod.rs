//! Limiting distributions: closed forms and the quadratures that check them.

pub mod bessel;
pub mod laws;
pub mod quadrature;

pub use bessel::{bessel_gram, bessel_j, bessel_j_parts, bessel_kernel, bessel_kernel_diagonal};
pub use laws::{
    complex_modulus_cdf, condition_law_statistic, edelman_complex_cdf, edelman_real_cdf,
    edelman_real_cdf_quadrature, edelman_real_density, half_normal_cdf, mp_cdf, mp_cdf_closed,
    mp_density, sqrt_scale_cdf, st_taylor_check, LimitLaw, TaylorCheck,
};
pub use quadrature::{integrate, integrate_f64, Quadrature};
