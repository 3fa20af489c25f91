//! Exact rationals and elementary number theory.

mod bigrat;
mod primes;
mod roots;

pub use bigrat::BigRat;
pub(crate) use bigrat::ValueKey;
pub use primes::{coprime, first_primes, is_prime, lpf, next_prime, Lpf, PrimeTable};
pub use roots::{floor_pow, isqrt, le_scaled_power};
