//! Exact arithmetic and dense linear algebra over prime fields `F_q`.
//!
//! Residues are stored as `u16` and reduced after every operation, so the
//! modulus is limited to primes below `2^16`.

mod elimination;
mod field;
mod matrix;
mod permutation;
mod vector;

pub use elimination::{partial_gaussian_elim, PartialElimination};
pub use field::{FieldElement, PrimeField};
pub use matrix::FqMatrix;
pub use permutation::Permutation;
pub use vector::FqVector;
