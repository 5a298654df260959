//! Exact exterior algebra over `R^{2n}` with the standard symplectic form.
//!
//! The crate provides sparse rational forms and linear maps, the Lefschetz
//! operators `L`, `Λ`, `H` with the Hodge star of a compatible triple,
//! injectivity certificates for `α ↦ ω^{k-1} ^ α` on 2-forms, symplectic
//! generators with orbit-span saturation, and a volume-preserving diagonal
//! map that does not preserve `ω^k`. Every check is exact.

pub mod counterexample;
pub mod error;
pub mod form;
pub mod index;
pub mod injectivity;
pub mod json;
pub mod kahler;
pub mod lefschetz;
pub mod linalg;
pub mod linear_map;
pub mod metric;
pub mod report;
pub mod scalar;
pub mod suite;
pub mod symplectic;

pub use error::{Error, Result};
pub use form::{standard_symplectic_form, Form};
pub use index::{Basis, MultiIndex};
pub use linalg::Matrix;
pub use linear_map::{LinearMap, Vector};
pub use scalar::Scalar;
