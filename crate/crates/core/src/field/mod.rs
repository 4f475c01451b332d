//! Exact arithmetic in `F_q`, `F_{ℓ^k}` and `Q(ζ_m)`.

pub mod cyclotomic;
pub mod extension;
pub mod prime;

pub use cyclotomic::{cyclotomic_polynomial, CyclotomicNumber};
pub use extension::{build_extension, ExtField, ExtFieldElement};
pub use prime::{
    discrete_log, is_prime, legendre_symbol, primitive_root, smallest_nonsquare, FpElement,
    MulGroupElement, PrimeField,
};
