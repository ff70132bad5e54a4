//! Cyclotomic polynomials, cyclotomic factor stripping, and exact arithmetic in `Q(zeta_N)`.

mod catalog;
mod field;

pub use catalog::{
    candidate_bound, cyclotomic_polynomial, divisors, euler_phi, strip_cyclotomic_factors,
    CycloFactorCertificate,
};
pub use field::{
    cyclo_add, cyclo_inverse, cyclo_mul, root_power, to_common_order, CyclotomicElement,
};
