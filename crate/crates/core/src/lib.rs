//! Exact computations around twisted triple product root numbers for
//! prime-level weight-2 eigenforms, and the level-structure combinatorics of
//! the cycles `Δ₊`, `Δ₋` on `X₀(p)³`.
//!
//! * [`field`]: prime fields, extension fields and cyclotomic fields.
//! * [`character`]: local characters of `Q_q^×`, Gauss sums, epsilon factors
//!   of characters and the Hecke lift of the Legendre symbol.
//! * [`weil_deligne`]: monomial Weil–Deligne representations, their
//!   δ-factors, conductors, epsilon factors and local root numbers.
//! * [`triple_product`]: assembly of the local representations of
//!   `f₁ ⊗ f₂ ⊗ f₃ (⊗ χ)` and the global root number.
//! * [`orbits`]: marking triples, the `Det` invariant and the group actions
//!   on the cycle indices.
//! * [`pairing`]: elliptic curves over finite fields, the Weil pairing and the
//!   invariant `o(E; C₁, C₂, C₃)`.

pub mod character;
pub mod error;
pub mod field;
pub mod orbits;
pub mod pairing;
pub mod triple_product;
pub mod weil_deligne;

pub use error::{Error, Result};
