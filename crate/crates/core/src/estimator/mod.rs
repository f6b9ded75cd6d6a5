//! Asymptotic running-time exponents of the decoders.
//!
//! Every quantity is a per-`n` exponent in base `q`: a cost `q^{α̂ n}`.
//! `α = α̂ log₂ q` is the same cost in bits.

mod hardest;
mod optimize;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::entropy::SphereExponent;
use crate::error::{Error, Result};
use crate::weight::WeightFunction;

pub use hardest::{
    hardest_instance, local_maxima_weights, read_csv, sweep, write_csv, EstimateRow,
    HardestInstance, MaximaWeights,
};
pub use optimize::{optimize_point, DEFAULT_A_MAX};

/// Feasibility slack on relative weights.
const TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Classical,
    Quantum,
}

/// Which decoder the exponent describes. `Dumer` is the one-level tree,
/// `Prange` fixes `L = 0`. Under the quantum model the tree variant with
/// the virtual last list is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Prange,
    Dumer,
    Wagner,
}

macro_rules! names {
    ($t:ty, $($v:ident => $s:literal),*) => {
        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $(Self::$v => $s),* })
            }
        }
        impl FromStr for $t {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok(Self::$v),)*
                    _ => Err(Error::InvalidParams(format!("unknown {} {s:?}", stringify!($t).to_lowercase()))),
                }
            }
        }
    };
}

names!(Model, Classical => "classical", Quantum => "quantum");
names!(Algorithm, Prange => "prange", Dumer => "dumer", Wagner => "wagner");

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Prange, Algorithm::Dumer, Algorithm::Wagner];
}

/// A code family: rate `R = k/n` and relative weight `ω = w/n`.
#[derive(Clone, Debug)]
pub struct CodeParams {
    wf: WeightFunction,
    sphere: SphereExponent,
    r: f64,
    omega: f64,
    s_omega: f64,
}

impl CodeParams {
    pub fn new(wf: &WeightFunction, r: f64, omega: f64) -> Result<Self> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidParams(format!("rate {r} outside (0, 1)")));
        }
        let sphere = SphereExponent::new(wf);
        let s_omega = sphere.value(omega)?;
        Ok(CodeParams {
            wf: wf.clone(),
            omega: omega.clamp(0.0, sphere.max_weight()),
            sphere,
            r,
            s_omega,
        })
    }

    pub fn weight_function(&self) -> &WeightFunction {
        &self.wf
    }

    pub fn rate(&self) -> f64 {
        self.r
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn s_omega(&self) -> f64 {
        self.s_omega
    }

    fn max(&self) -> f64 {
        self.sphere.max_weight()
    }

    fn s(&self, omega: f64) -> Option<f64> {
        self.sphere.value(omega).ok()
    }

    /// Range of `P` keeping both the inner and outer weights feasible.
    fn p_range(&self, l: f64) -> Option<(f64, f64)> {
        let mx = self.max();
        let lo = (self.omega - (1.0 - self.r - l) * mx).max(0.0);
        let hi = self.omega.min((self.r + l) * mx);
        (lo <= hi + TOL).then(|| (lo, hi.max(lo)))
    }

    fn pi1(&self, l: f64, p: f64) -> Option<f64> {
        let r = 1.0 - self.r - l;
        if l < -TOL || r < -TOL || p < -TOL || p > self.omega + TOL {
            return None;
        }
        let first = if r <= TOL {
            if self.omega - p > TOL {
                return None;
            }
            0.0
        } else {
            let w = (self.omega - p) / r;
            if w > self.max() + TOL {
                return None;
            }
            r * self.s(w.clamp(0.0, self.max()))?
        };
        Some((first - (self.s_omega - l).min(r).max(0.0)).min(0.0))
    }
}

/// Relative algorithm parameters: `L = ℓ/n`, `P = p/n`, tree depth `a`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgoPoint {
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "P")]
    pub p: f64,
    pub a: u32,
}

/// Exponents of the reduced problem: `Z`, `T_CMSD` and `Y` per `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmsdFactors {
    /// `u` for the first variant, `u'` for the second.
    pub u: f64,
    pub x: f64,
    pub zeta: f64,
    pub tau: f64,
    pub y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkFactors {
    pub pi1: f64,
    pub zeta: f64,
    pub tau: f64,
    pub y: f64,
    pub u: f64,
    pub x: f64,
    /// `α̂`
    pub total_q: f64,
    /// `α = α̂ log₂ q`
    pub total_bin: f64,
    pub point: AlgoPoint,
    pub model: Model,
}

/// `log_q P₁ / n`: the chance that one reduced solution completes.
pub fn p1_exponent(cp: &CodeParams, l: f64, p: f64) -> Result<f64> {
    cp.pi1(l, p).ok_or_else(|| infeasible(cp, l, p))
}

fn infeasible(cp: &CodeParams, l: f64, p: f64) -> Error {
    Error::Infeasible(format!(
        "L = {l}, P = {p} at R = {}, ω = {}",
        cp.rate(),
        cp.omega()
    ))
}

/// `(N', m₀, s_{ω₀})` for the reduced problem.
fn reduced(cp: &CodeParams, point: &AlgoPoint) -> Result<(f64, f64, f64)> {
    let n = cp.rate() + point.l;
    let w0 = point.p / n;
    if point.a == 0 || point.l < -TOL || point.p < -TOL || w0 > cp.max() + TOL {
        return Err(infeasible(cp, point.l, point.p));
    }
    let s0 = cp.s(w0.min(cp.max())).ok_or_else(|| infeasible(cp, point.l, point.p))?;
    Ok((n, point.l.max(0.0) / n, s0))
}

fn v1(n: f64, m0: f64, s0: f64, a: u32) -> CmsdFactors {
    let u = (s0 / f64::powi(2.0, a as i32)).min(m0 / a as f64);
    let x = m0 - (a as f64 - 1.0) * u;
    CmsdFactors {
        u,
        x,
        zeta: n * (2.0 * u - x),
        tau: n * u,
        y: n * u,
    }
}

fn v2(n: f64, m0: f64, s0: f64, a: u32) -> CmsdFactors {
    let u = (s0 / (f64::powi(2.0, a as i32) + 1.0)).min(m0 / a as f64);
    let x = m0 - (a as f64 - 1.0) * u;
    CmsdFactors {
        u,
        x,
        zeta: n * (3.0 * u - x),
        tau: n * u,
        y: 2.0 * n * u,
    }
}

/// Base lists of `q^{N u}` vectors merged over `a` levels.
pub fn wagner1_factors(cp: &CodeParams, point: &AlgoPoint) -> Result<CmsdFactors> {
    let (n, m0, s0) = reduced(cp, point)?;
    Ok(v1(n, m0, s0, point.a))
}

/// The variant with a virtual last list of `q^{2 N u'}` vectors.
pub fn wagner2_factors(cp: &CodeParams, point: &AlgoPoint) -> Result<CmsdFactors> {
    let (n, m0, s0) = reduced(cp, point)?;
    Ok(v2(n, m0, s0, point.a))
}

fn total(model: Model, pi1: f64, f: &CmsdFactors) -> f64 {
    let loops = (-pi1 - f.zeta).max(0.0);
    match model {
        Model::Classical => loops + f.tau.max(f.y),
        Model::Quantum => 0.5 * loops + f.tau.max(0.5 * f.y),
    }
}

fn assemble(cp: &CodeParams, point: AlgoPoint, model: Model, pi1: f64, f: CmsdFactors) -> WorkFactors {
    let total_q = total(model, pi1, &f);
    WorkFactors {
        pi1,
        zeta: f.zeta,
        tau: f.tau,
        y: f.y,
        u: f.u,
        x: f.x,
        total_q,
        total_bin: total_q * (cp.weight_function().q() as f64).log2(),
        point,
        model,
    }
}

/// `max{0, -π₁ - ζ} + max{τ, y}` with the first tree variant.
pub fn classical_exponent(cp: &CodeParams, point: &AlgoPoint) -> Result<WorkFactors> {
    let pi1 = p1_exponent(cp, point.l, point.p)?;
    let f = wagner1_factors(cp, point)?;
    Ok(assemble(cp, *point, Model::Classical, pi1, f))
}

/// `½ max{0, -π₁ - ζ} + max{τ, y/2}` with the virtual-list variant.
pub fn quantum_exponent(cp: &CodeParams, point: &AlgoPoint) -> Result<WorkFactors> {
    let pi1 = p1_exponent(cp, point.l, point.p)?;
    let f = wagner2_factors(cp, point)?;
    Ok(assemble(cp, *point, Model::Quantum, pi1, f))
}

pub fn exponent(cp: &CodeParams, point: &AlgoPoint, model: Model) -> Result<WorkFactors> {
    match model {
        Model::Classical => classical_exponent(cp, point),
        Model::Quantum => quantum_exponent(cp, point),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(wf: &WeightFunction, r: f64, omega: f64) -> CodeParams {
        CodeParams::new(wf, r, omega).unwrap()
    }

    /// Binary entropy in base 3 plus the `log_3 2` per nonzero symbol.
    fn h3(w: f64) -> f64 {
        (-(w * w.ln()) - (1.0 - w) * (1.0 - w).ln() + w * 2f64.ln()) / 3f64.ln()
    }

    #[test]
    fn p1_with_everything_inside() {
        let ham = WeightFunction::hamming(3).unwrap();
        let c = cp(&ham, 0.5, 0.1);
        assert!((c.s_omega() - h3(0.1)).abs() < 1e-10);
        assert!((c.s_omega() - 0.3590).abs() < 1e-4);
        let pi = p1_exponent(&c, 0.0, 0.1).unwrap();
        assert!((pi + c.s_omega()).abs() < 1e-12);
        for l in [0.05, 0.2, 0.3] {
            let pi = p1_exponent(&c, l, 0.1).unwrap();
            assert!((pi + (c.s_omega() - l).max(0.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn p1_at_the_unique_solution_boundary() {
        let lee = WeightFunction::lee(5).unwrap();
        let r = 0.4;
        let sp = SphereExponent::new(&lee);
        // s_ω = 1 - R on the lower branch
        let (mut lo, mut hi) = (0.0, sp.mean_weight());
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if sp.value(mid).unwrap() < 1.0 - r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let c = cp(&lee, r, lo);
        let pi = p1_exponent(&c, 0.0, 0.0).unwrap();
        let expect = (1.0 - r) * sp.value(lo / (1.0 - r)).unwrap() - (1.0 - r);
        assert!((pi - expect).abs() < 1e-9);
        assert!(pi <= 0.0);
    }

    #[test]
    fn infeasible_points_are_rejected() {
        let lee = WeightFunction::lee(5).unwrap();
        let c = cp(&lee, 0.5, 1.8);
        // outer part would need weight 1.8 / 0.5 > 2
        assert!(p1_exponent(&c, 0.0, 0.0).is_err());
        assert!(p1_exponent(&c, 0.0, 0.9).is_ok());
        assert!(p1_exponent(&c, 0.6, 0.0).is_err());
        assert!(classical_exponent(&c, &AlgoPoint { l: 0.1, p: 1.5, a: 1 }).is_err());
        assert!(CodeParams::new(&lee, 0.5, 2.5).is_err());
        assert!(CodeParams::new(&lee, 1.0, 1.0).is_err());
    }

    #[test]
    fn prange_degenerations() {
        let lee = WeightFunction::lee(7).unwrap();
        let c = cp(&lee, 0.5, 0.9);
        let pt = AlgoPoint { l: 0.0, p: 0.0, a: 3 };
        for f in [wagner1_factors(&c, &pt).unwrap(), wagner2_factors(&c, &pt).unwrap()] {
            assert_eq!((f.u, f.x, f.zeta, f.tau, f.y), (0.0, 0.0, 0.0, 0.0, 0.0));
        }
        let pi = p1_exponent(&c, 0.0, 0.0).unwrap();
        let cl = classical_exponent(&c, &pt).unwrap();
        let qu = quantum_exponent(&c, &pt).unwrap();
        assert!((cl.total_q + pi).abs() < 1e-15);
        assert!((qu.total_q + pi / 2.0).abs() < 1e-15);
    }

    #[test]
    fn factor_algebra() {
        let lee = WeightFunction::lee(13).unwrap();
        let c = cp(&lee, 0.5, 2.0);
        for a in 1..=4 {
            for (l, p) in [(0.05, 0.1), (0.2, 0.6), (0.01, 0.5)] {
                let pt = AlgoPoint { l, p, a };
                let f1 = wagner1_factors(&c, &pt).unwrap();
                let f2 = wagner2_factors(&c, &pt).unwrap();
                let n = 0.5 + l;
                let m0 = l / n;
                assert!((f1.zeta - n * (2.0 * f1.u - f1.x)).abs() < 1e-15);
                assert!((f1.x - (m0 - (a as f64 - 1.0) * f1.u)).abs() < 1e-15);
                assert!((f2.zeta - n * (3.0 * f2.u - f2.x)).abs() < 1e-15);
                assert!((f2.y - 2.0 * f2.tau).abs() < 1e-15);
                assert!(f2.u <= f1.u);
                if f1.u == m0 / a as f64 {
                    assert!((f1.zeta - n * f1.u).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn scaling_identity() {
        let lee = WeightFunction::lee(5).unwrap();
        let c = cp(&lee, 0.45, 1.5);
        for a in 1..=3 {
            for l in [0.0, 0.05, 0.1] {
                for p in [0.0, 0.05, 0.2] {
                    let pt = AlgoPoint { l, p, a };
                    let Ok(cl) = classical_exponent(&c, &pt) else { continue };
                    assert_eq!(cl.total_bin, cl.total_q * 5f64.log2());
                }
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for m in [Model::Classical, Model::Quantum] {
            assert_eq!(m.to_string().parse::<Model>().unwrap(), m);
        }
        for a in Algorithm::ALL {
            assert_eq!(a.to_string().parse::<Algorithm>().unwrap(), a);
        }
        assert!("stern".parse::<Algorithm>().is_err());
    }
}
