//! Exact integer arithmetic: primes, factorization, cyclotomic values and
//! divisor predicates.

mod cyclotomic;
mod divisors;
mod factor;
mod factorial;
pub mod modmath;
mod sieve;

pub use cyclotomic::{cyclotomic_eval, factor_pk_minus_1, CyclotomicTable, MAX_CYCLOTOMIC_INDEX};
pub use divisors::{has_rough_divisor_in_range, largest_prime_factor, DIVISOR_ENUMERATION_CAP};
pub use factor::{factor_integer, FactoredInteger, FACTOR_CAP, TRIAL_BOUND};
pub use factorial::{ell_of_q, FactorialCap};
pub use modmath::{is_prime, isqrt};
pub use sieve::{for_each_prime, sieve_primes, SIEVE_CAP};
