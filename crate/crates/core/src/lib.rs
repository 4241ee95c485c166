//! Non-linear locally recoverable codes over products of prime fields, built
//! from reductions of algebraic integers modulo the primes above totally split
//! rational primes.

pub mod bigmath;
pub mod code_params;
pub mod analysis;
pub mod codec;
pub mod error;
pub mod fp;
pub mod number_field;
pub mod prime_tools;
pub mod sim;
pub mod wire;

pub use error::{Error, Result};
pub use number_field::{AlgebraicInt, Irreducibility, NumberField};
