//! Where the exponent peaks: the weights `ω±` with `s_ω = 1 - R`, the
//! hardest rate, and `ω`-sweeps for plotting.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{optimize_point, Algorithm, CodeParams, Model, WorkFactors};
use crate::entropy::SphereExponent;
use crate::error::{Error, Result};
use crate::weight::WeightFunction;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximaWeights {
    /// Root of `s_ω = 1 - R` below the mean weight.
    pub omega_minus: f64,
    /// Root above the mean weight, or the maximum weight if there is none.
    pub omega_plus: f64,
    pub plus_at_max: bool,
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    // f(lo) and f(hi) have opposite signs
    let up = f(lo) < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (f(mid) < 0.0) == up {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The two candidate hardest weights at rate `R`.
pub fn local_maxima_weights(wf: &WeightFunction, r: f64) -> Result<MaximaWeights> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidParams(format!("rate {r} outside (0, 1)")));
    }
    let sp = SphereExponent::new(wf);
    let target = 1.0 - r;
    let g = |w: f64| sp.value(w).expect("in range") - target;
    let (mean, max) = (sp.mean_weight(), sp.max_weight());
    let omega_minus = bisect(g, 0.0, mean);
    let (omega_plus, plus_at_max) = if g(max) >= 0.0 {
        (max, true)
    } else {
        (bisect(g, mean, max), false)
    };
    Ok(MaximaWeights {
        omega_minus,
        omega_plus,
        plus_at_max,
    })
}

/// One row of the estimator's CSV output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub q: u32,
    pub weight: String,
    #[serde(rename = "R")]
    pub r: f64,
    pub omega: f64,
    pub omega_normalized: f64,
    pub model: Model,
    pub algorithm: Algorithm,
    pub a: u32,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "P")]
    pub p: f64,
    pub alpha_q: f64,
    pub alpha_bin: f64,
}

impl EstimateRow {
    pub fn new(cp: &CodeParams, algorithm: Algorithm, w: &WorkFactors) -> Self {
        let wf = cp.weight_function();
        EstimateRow {
            q: wf.q(),
            weight: wf.kind().to_string(),
            r: cp.rate(),
            omega: cp.omega(),
            omega_normalized: wf.normalized_weight(cp.omega()),
            model: w.model,
            algorithm,
            a: w.point.a,
            l: w.point.l,
            p: w.point.p,
            alpha_q: w.total_q,
            alpha_bin: w.total_bin,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardestInstance {
    #[serde(rename = "R")]
    pub r: f64,
    pub omega: f64,
    /// `ω / max wt'`
    pub omega_normalized: f64,
    pub alpha: f64,
    pub alpha_hat: f64,
    pub factors: WorkFactors,
}

impl HardestInstance {
    pub fn row(&self, wf: &WeightFunction, algorithm: Algorithm) -> EstimateRow {
        let cp = CodeParams::new(wf, self.r, self.omega).expect("found by search");
        EstimateRow::new(&cp, algorithm, &self.factors)
    }
}

/// Best exponent over `ω ∈ {ω-, ω+}` at rate `R`.
fn at_rate(wf: &WeightFunction, r: f64, model: Model, algorithm: Algorithm, a_max: u32) -> HardestInstance {
    let m = local_maxima_weights(wf, r).expect("rate inside (0, 1)");
    let mut best: Option<HardestInstance> = None;
    for omega in [m.omega_minus, m.omega_plus] {
        let cp = CodeParams::new(wf, r, omega).expect("root is in range");
        let w = optimize_point(&cp, model, algorithm, a_max);
        if best.as_ref().map_or(true, |b| w.total_q > b.alpha_hat) {
            best = Some(HardestInstance {
                r,
                omega: cp.omega(),
                omega_normalized: wf.normalized_weight(cp.omega()),
                alpha: w.total_bin,
                alpha_hat: w.total_q,
                factors: w,
            });
        }
    }
    best.expect("two candidates")
}

const R_STEP: f64 = 0.02;
const R_TOL: f64 = 1e-4;

/// Maximizes the optimized exponent over `R`, with `ω` restricted to the
/// two candidate weights: a grid of step 0.02 over `R`, then golden-section
/// search around the best grid point.
pub fn hardest_instance(
    wf: &WeightFunction,
    model: Model,
    algorithm: Algorithm,
    a_max: u32,
) -> HardestInstance {
    let grid: Vec<f64> = (1..(1.0 / R_STEP).round() as usize)
        .map(|i| i as f64 * R_STEP)
        .collect();
    let coarse: Vec<HardestInstance> = grid
        .par_iter()
        .map(|&r| at_rate(wf, r, model, algorithm, a_max))
        .collect();
    let mut best = coarse
        .into_iter()
        .reduce(|a, b| if b.alpha_hat > a.alpha_hat { b } else { a })
        .expect("nonempty grid");

    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = ((best.r - R_STEP).max(1e-3), (best.r + R_STEP).min(1.0 - 1e-3));
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = at_rate(wf, x1, model, algorithm, a_max);
    let mut f2 = at_rate(wf, x2, model, algorithm, a_max);
    while hi - lo > R_TOL {
        if f1.alpha_hat >= f2.alpha_hat {
            hi = x2;
            (x2, f2) = (x1, f1);
            x1 = hi - phi * (hi - lo);
            f1 = at_rate(wf, x1, model, algorithm, a_max);
        } else {
            lo = x1;
            (x1, f1) = (x2, f2);
            x2 = lo + phi * (hi - lo);
            f2 = at_rate(wf, x2, model, algorithm, a_max);
        }
    }
    for cand in [f1, f2] {
        if cand.alpha_hat > best.alpha_hat {
            best = cand;
        }
    }
    best
}

/// Optimized exponents along a grid of weights at fixed `R`, one row per
/// `(ω, model, algorithm)` in that order.
pub fn sweep(
    wf: &WeightFunction,
    r: f64,
    models: &[Model],
    algorithms: &[Algorithm],
    omegas: &[f64],
    a_max: u32,
) -> Result<Vec<EstimateRow>> {
    let cps = omegas
        .iter()
        .map(|&w| CodeParams::new(wf, r, w))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<EstimateRow>> = cps
        .par_iter()
        .map(|cp| {
            let mut out = Vec::new();
            for &model in models {
                for &alg in algorithms {
                    let w = optimize_point(cp, model, alg, a_max);
                    out.push(EstimateRow::new(cp, alg, &w));
                }
            }
            out
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_csv<W: Write>(rows: &[EstimateRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<EstimateRow>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}
