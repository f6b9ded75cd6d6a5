//! Compiles the Rust listings of the guide in `book/` as doctests.

#[doc = include_str!("../../../book/src/intro.md")]
pub mod intro {}

#[doc = include_str!("../../../book/src/spheres.md")]
pub mod spheres {}

#[doc = include_str!("../../../book/src/isd.md")]
pub mod isd {}

#[doc = include_str!("../../../book/src/merging.md")]
pub mod merging {}

#[doc = include_str!("../../../book/src/estimator.md")]
pub mod estimator {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
