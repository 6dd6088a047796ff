//! Combinatorial star products on polynomial algebras.
//!
//! The crate is `no_std` (with `alloc`). It provides sparse polynomial
//! arithmetic over several coefficient rings, a word-rewriting engine that
//! realizes star products from deformation tails, closed-form products for
//! the standard families, seminorm probes, and deformed evaluation states
//! with their Gram matrices and GNS data.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod error;
pub mod linalg;
pub mod monomial;
pub mod params;
pub mod parse;
pub mod poisson;
pub mod poly;
pub mod reduction;
pub mod sample;
pub mod scalar;
pub mod states;
pub mod topology;

pub use error::{Error, Result};
pub use monomial::{MultiIndex, NcWord};
pub use poly::{GeneratorKind, NcPolynomial, Polynomial};
