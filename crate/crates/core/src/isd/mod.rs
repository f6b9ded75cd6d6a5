//! The information set decoding framework and its CMSD back ends.
//!
//! One outer iteration picks a random column permutation, row-reduces the
//! permuted parity-check matrix into `[[I, H'], [0, H'']]`, asks a CMSD back
//! end for vectors `e''` with `H''e'' = s''` and `wt(e'') = p`, completes each
//! to `e' = s' - H'e''` and keeps the first with `wt(e') = w - p`.

mod cmsd;
mod instance;
mod solver;

pub use cmsd::{
    cmsd_dumer, cmsd_prange, cmsd_wagner_v1, cmsd_wagner_v2_build, enumerate_f, CmsdDescription,
    CmsdProblem, Enumeration, WeightSplit,
};
pub use instance::{generate_instance, SdInstance};
pub use solver::{isd_solve, IsdParams, SolveReport, Variant};
