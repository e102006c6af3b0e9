//! Polynomials over F_p, their factorization, and extension fields.

mod factor;
mod field;
mod poly;
mod roots;

pub use factor::{canonical_cmp, factor_mod_p, factor_mod_p_seeded, is_irreducible, PolyFactor};
pub use field::{ext_mul, ext_pow, frobenius, norm_to_base, ExtField, FieldElement, MAX_EXT_DEGREE};
pub use poly::{poly_reduce, PolyModP, MAX_CHARACTERISTIC};
pub use roots::{roots_in_field, standard_field, standard_modulus};
