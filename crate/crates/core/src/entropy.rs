//! Asymptotic sphere exponents `s_ω = lim (1/n) log_q S^n_{ωn}`.
//!
//! `s_ω` is the maximum of `-Σ λ_x log_q λ_x` over distributions `λ` on the
//! `q` symbols with mean weight `Σ λ_x wt'(x) = ω`. The maximizer is the Gibbs
//! distribution `λ_x ∝ q^{-β wt'(x)}`, with the multiplier `β` fixed by the
//! mean-weight constraint. The mean is strictly decreasing in `β`, so a
//! safeguarded Newton/bisection iteration on `β` finds it. At `ω = 0` and
//! `ω = max wt'` the maximizer is uniform over the lightest or heaviest
//! symbols and `β = ±∞`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::weight::WeightFunction;

const WEIGHT_TOL: f64 = 1e-12;
const INITIAL_BRACKET: f64 = 50.0;

/// Maximizing distribution of the entropy program.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyProfile {
    /// `λ_x`, indexed by symbol; sums to 1.
    pub lambda: Vec<f64>,
    /// `s_ω` in `q`-ary units.
    pub s: f64,
    /// Dual multiplier; infinite at the weight boundaries.
    pub beta: f64,
}

/// Precomputed solver for one weight function. Symbols sharing a weight are
/// merged into one class, which halves the work for Lee weights.
#[derive(Clone, Debug)]
pub struct SphereExponent {
    /// (weight, multiplicity), ascending weight; the first class has weight 0.
    classes: Vec<(f64, f64)>,
    symbol_class: Vec<usize>,
    ln_q: f64,
    max: f64,
    mean: f64,
}

struct Gibbs {
    mean: f64,
    var: f64,
    entropy: f64,
}

impl SphereExponent {
    pub fn new(wf: &WeightFunction) -> Self {
        let table = wf.table();
        let mut classes: Vec<(f64, f64)> = Vec::new();
        for &w in &table {
            match classes.iter_mut().find(|(v, _)| *v == w) {
                Some((_, m)) => *m += 1.0,
                None => classes.push((w, 1.0)),
            }
        }
        classes.sort_by(|a, b| a.0.total_cmp(&b.0));
        let symbol_class = table
            .iter()
            .map(|w| classes.iter().position(|(v, _)| v == w).expect("present"))
            .collect();
        SphereExponent {
            classes,
            symbol_class,
            ln_q: (wf.q() as f64).ln(),
            max: wf.max_weight(),
            mean: wf.mean_weight(),
        }
    }

    pub fn max_weight(&self) -> f64 {
        self.max
    }

    /// Relative weight where `s_ω = 1`.
    pub fn mean_weight(&self) -> f64 {
        self.mean
    }

    /// Mean, variance and entropy (nats) of `λ ∝ exp(-β ln q · wt')`.
    fn gibbs(&self, beta: f64) -> Gibbs {
        let scale = -beta * self.ln_q;
        let shift = self
            .classes
            .iter()
            .map(|&(w, _)| scale * w)
            .fold(f64::NEG_INFINITY, f64::max);
        let (mut z, mut m1, mut m2, mut ez) = (0.0, 0.0, 0.0, 0.0);
        for &(w, mult) in &self.classes {
            let e = scale * w - shift;
            let p = mult * e.exp();
            z += p;
            m1 += p * w;
            m2 += p * w * w;
            ez += p * e;
        }
        let mean = m1 / z;
        Gibbs {
            mean,
            var: (m2 / z - mean * mean).max(0.0),
            // -Σ λ ln λ with ln λ_x = e_x - ln z
            entropy: z.ln() - ez / z,
        }
    }

    fn check(&self, omega: f64) -> Result<f64> {
        if !omega.is_finite() || omega < -WEIGHT_TOL || omega > self.max + WEIGHT_TOL {
            return Err(Error::WeightOutOfRange {
                omega,
                max: self.max,
            });
        }
        Ok(omega.clamp(0.0, self.max))
    }

    /// Multiplier `β` with mean weight `ω`; `ω` must be strictly inside
    /// `(0, max)`.
    fn solve_beta(&self, omega: f64) -> f64 {
        let residual = |b: f64| self.gibbs(b).mean - omega;
        // mean(β) is decreasing: residual(lo) > 0 > residual(hi).
        let (mut lo, mut hi) = (-INITIAL_BRACKET, INITIAL_BRACKET);
        while residual(lo) <= 0.0 {
            hi = lo;
            lo *= 2.0;
        }
        while residual(hi) >= 0.0 {
            lo = hi;
            hi *= 2.0;
        }
        let mut beta = if omega < self.mean { 0.0f64.max(lo) } else { 0.0f64.min(hi) };
        if beta <= lo || beta >= hi {
            beta = 0.5 * (lo + hi);
        }
        for _ in 0..200 {
            let g = self.gibbs(beta);
            let r = g.mean - omega;
            if r.abs() <= WEIGHT_TOL * self.max.max(1.0) {
                break;
            }
            if r > 0.0 {
                lo = beta;
            } else {
                hi = beta;
            }
            let slope = -self.ln_q * g.var;
            let newton = beta - r / slope;
            beta = if slope < 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= 1e-15 * (1.0 + beta.abs()) {
                break;
            }
        }
        beta
    }

    /// `(β, s_ω)`.
    pub fn solve(&self, omega: f64) -> Result<(f64, f64)> {
        let omega = self.check(omega)?;
        let first = self.classes[0];
        let last = *self.classes.last().expect("nonempty");
        if omega <= 0.0 {
            return Ok((f64::INFINITY, first.1.ln() / self.ln_q));
        }
        if omega >= self.max {
            return Ok((f64::NEG_INFINITY, last.1.ln() / self.ln_q));
        }
        let beta = self.solve_beta(omega);
        Ok((beta, self.gibbs(beta).entropy / self.ln_q))
    }

    /// `s_ω` alone.
    pub fn value(&self, omega: f64) -> Result<f64> {
        self.solve(omega).map(|(_, s)| s)
    }

    pub fn profile(&self, omega: f64) -> Result<EntropyProfile> {
        let omega = self.check(omega)?;
        let (beta, s) = self.solve(omega)?;
        let class_prob: Vec<f64> = if beta == f64::INFINITY {
            self.point_mass(0)
        } else if beta == f64::NEG_INFINITY {
            self.point_mass(self.classes.len() - 1)
        } else {
            let scale = -beta * self.ln_q;
            let shift = self
                .classes
                .iter()
                .map(|&(w, _)| scale * w)
                .fold(f64::NEG_INFINITY, f64::max);
            let raw: Vec<f64> = self
                .classes
                .iter()
                .map(|&(w, _)| (scale * w - shift).exp())
                .collect();
            let z: f64 = raw.iter().zip(&self.classes).map(|(p, c)| p * c.1).sum();
            raw.into_iter().map(|p| p / z).collect()
        };
        Ok(EntropyProfile {
            lambda: self.symbol_class.iter().map(|&c| class_prob[c]).collect(),
            s,
            beta,
        })
    }

    fn point_mass(&self, class: usize) -> Vec<f64> {
        let mut p = vec![0.0; self.classes.len()];
        p[class] = 1.0 / self.classes[class].1;
        p
    }
}

/// Entropy maximizer at mean weight `ω`.
pub fn sphere_exponent(wf: &WeightFunction, omega: f64) -> Result<EntropyProfile> {
    SphereExponent::new(wf).profile(omega)
}

/// Typical symbol frequencies of vectors of relative weight `ω`.
pub fn typical_pattern(wf: &WeightFunction, omega: f64) -> Result<Vec<f64>> {
    sphere_exponent(wf, omega).map(|p| p.lambda)
}

/// `-Σ λ_x log_q λ_x` with `0 log 0 = 0`.
pub fn entropy_q(lambda: &[f64], q: u32) -> f64 {
    -lambda
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| l * l.ln())
        .sum::<f64>()
        / (q as f64).ln()
}
