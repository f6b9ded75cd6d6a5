//! Information set decoding over prime fields `F_q` under arbitrary additive
//! weight functions, and the asymptotic exponents of those decoders.
//!
//! The crate has two halves:
//!
//! * a working decoder: [`isd::isd_solve`] runs the permutation / partial
//!   elimination / list-merging / test loop on concrete instances, with
//!   Prange, Dumer and two Wagner-style (k-tree) back ends;
//! * an estimator: [`estimator`] evaluates the classical and quantum running
//!   time exponents of the same algorithms, optimizes their parameters and
//!   locates the hardest `(R, ω)` instances.
//!
//! Both halves rest on [`sphere`] (exact sphere sizes) and [`entropy`]
//! (their asymptotic exponents via a maximum-entropy program).
//!
//! ```
//! use isd_core::{entropy::sphere_exponent, weight::WeightFunction};
//!
//! let lee = WeightFunction::lee(5).unwrap();
//! // Uniform vectors of F_5 have average Lee weight (q²-1)/(4q) = 1.2.
//! let p = sphere_exponent(&lee, 1.2).unwrap();
//! assert!((p.s - 1.0).abs() < 1e-12);
//! ```

pub mod acceptance;
pub mod entropy;
mod error;
pub mod estimator;
pub mod isd;
pub mod linalg;
pub mod merge;
pub mod sphere;
pub mod weight;

pub use error::{Error, Result};
