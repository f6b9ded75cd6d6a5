//! Minimizing an exponent over `(L, P, a)`.
//!
//! `P` is searched as a fraction `t` of its feasible interval at the given
//! `L`, so every grid point is feasible. A coarse grid is followed by a
//! compass search around the best cell for `a - 1`, `a` and `a + 1`.

use super::{exponent, v1, v2, AlgoPoint, Algorithm, CodeParams, Model, WorkFactors};

/// Default bound on the tree depth.
pub const DEFAULT_A_MAX: u32 = 10;

const GRID: usize = 64;
const STEP_MIN: f64 = 1e-5;

/// Everything about a `(L, t)` point that does not depend on `a`.
#[derive(Clone, Copy)]
struct Base {
    l: f64,
    p: f64,
    pi1: f64,
    n: f64,
    m0: f64,
    s0: f64,
}

fn base(cp: &CodeParams, l: f64, t: f64) -> Option<Base> {
    if !(0.0..=1.0).contains(&t) || l < 0.0 || l > 1.0 - cp.rate() {
        return None;
    }
    let (lo, hi) = cp.p_range(l)?;
    let p = lo + t * (hi - lo);
    let pi1 = cp.pi1(l, p)?;
    let n = cp.rate() + l;
    let s0 = cp.s((p / n).min(cp.max()))?;
    Some(Base {
        l,
        p,
        pi1,
        n,
        m0: l / n,
        s0,
    })
}

fn value(b: &Base, a: u32, model: Model) -> f64 {
    let f = match model {
        Model::Classical => v1(b.n, b.m0, b.s0, a),
        Model::Quantum => v2(b.n, b.m0, b.s0, a),
    };
    super::total(model, b.pi1, &f)
}

/// Best `(L, P, a)` for the given model and algorithm. `a` ranges over
/// `1..=a_max` for `Wagner`, is 1 for `Dumer`, and `Prange` pins `L = 0`.
/// Deterministic; never fails for valid `cp` since `L = 0` with the
/// smallest feasible `P` is always admissible. The result is never worse
/// than that of the algorithms nested inside this one.
pub fn optimize_point(cp: &CodeParams, model: Model, algorithm: Algorithm, a_max: u32) -> WorkFactors {
    let own = search(cp, model, algorithm, a_max);
    let nested = match algorithm {
        Algorithm::Prange => return own,
        Algorithm::Dumer => optimize_point(cp, model, Algorithm::Prange, 1),
        Algorithm::Wagner => optimize_point(cp, model, Algorithm::Dumer, 1),
    };
    if nested.total_q < own.total_q {
        nested
    } else {
        own
    }
}

fn search(cp: &CodeParams, model: Model, algorithm: Algorithm, a_max: u32) -> WorkFactors {
    let a_hi = match algorithm {
        Algorithm::Wagner => a_max.max(1),
        _ => 1,
    };
    let l_steps = if algorithm == Algorithm::Prange { 1 } else { GRID };
    let dl = (1.0 - cp.rate()) / GRID as f64;
    let dt = 1.0 / (GRID - 1) as f64;

    let mut best = (f64::INFINITY, 0.0, 0.0, 1);
    for i in 0..l_steps {
        let l = i as f64 * dl;
        for j in 0..GRID {
            let t = j as f64 * dt;
            let Some(b) = base(cp, l, t) else { continue };
            for a in 1..=a_hi {
                let v = value(&b, a, model);
                if v < best.0 {
                    best = (v, l, t, a);
                }
            }
        }
    }

    let (_, l0, t0, a0) = best;
    let moves: &[(f64, f64)] = if algorithm == Algorithm::Prange {
        &[(0.0, 1.0), (0.0, -1.0)]
    } else {
        &[
            (1.0, 0.0),
            (-1.0, 0.0),
            (0.0, 1.0),
            (0.0, -1.0),
            (1.0, 1.0),
            (-1.0, -1.0),
            (1.0, -1.0),
            (-1.0, 1.0),
        ]
    };
    for a in a0.saturating_sub(1).max(1)..=(a0 + 1).min(a_hi) {
        let (mut l, mut t) = (l0, t0);
        let Some(b) = base(cp, l, t) else { continue };
        let mut v = value(&b, a, model);
        let (mut sl, mut st) = (dl, dt);
        while sl.max(st) >= STEP_MIN {
            let mut moved = false;
            for &(ml, mt) in moves {
                let (nl, nt) = (l + ml * sl, t + mt * st);
                if let Some(b) = base(cp, nl, nt) {
                    let nv = value(&b, a, model);
                    if nv < v - 1e-13 {
                        (v, l, t, moved) = (nv, nl, nt, true);
                    }
                }
            }
            if !moved {
                sl /= 2.0;
                st /= 2.0;
            }
        }
        if v < best.0 {
            best = (v, l, t, a);
        }
    }

    let (_, l, t, a) = best;
    let b = base(cp, l, t).expect("best point is feasible");
    exponent(cp, &AlgoPoint { l: b.l, p: b.p, a }, model).expect("best point is feasible")
}
