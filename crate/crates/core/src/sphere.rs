//! Exact sphere surface areas `S^n_w = |{e ∈ F_q^n : wt(e) = w}|`, uniform
//! sampling and ranking of fixed-weight vectors.
//!
//! Counts come from expanding `(Σ_x z^{wt'(x)})^n` coordinate by coordinate,
//! which equals the multinomial sum over weight compositions.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{FieldElement, FqVector};
use crate::weight::{Weight, WeightFunction};

/// Weight units rescaled by the gcd of the nonzero symbol weights, so DP
/// arrays stay dense.
#[derive(Clone, Debug)]
struct Grid {
    step: u64,
    symbol: Vec<usize>,
    /// (reduced weight, number of symbols with that weight)
    classes: Vec<(usize, u32)>,
}

impl Grid {
    fn new(wf: &WeightFunction) -> Self {
        let step = wf
            .units()
            .iter()
            .filter(|&&u| u > 0)
            .fold(0u64, |g, &u| g.gcd(&(u as u64)));
        let symbol: Vec<usize> = wf.units().iter().map(|&u| (u as u64 / step) as usize).collect();
        let mut classes: Vec<(usize, u32)> = Vec::new();
        for &s in &symbol {
            match classes.iter_mut().find(|(w, _)| *w == s) {
                Some((_, m)) => *m += 1,
                None => classes.push((s, 1)),
            }
        }
        classes.sort_unstable();
        Grid {
            step,
            symbol,
            classes,
        }
    }

    fn reduce(&self, units: u64) -> Option<usize> {
        (units % self.step == 0).then(|| (units / self.step) as usize)
    }
}

/// Appends one coordinate to a weight distribution, truncated at `limit`.
fn extend(prev: &[BigUint], classes: &[(usize, u32)], limit: usize) -> Vec<BigUint> {
    let top = (prev.len() - 1 + classes.last().map_or(0, |c| c.0)).min(limit);
    let mut next = vec![BigUint::zero(); top + 1];
    for (w, c) in prev.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for &(v, m) in classes {
            if w + v > top {
                break;
            }
            if m == 1 {
                next[w + v] += c;
            } else {
                next[w + v] += c * m;
            }
        }
    }
    next
}

/// `S^n_w` for every achievable weight: entry `i` is the number of vectors
/// of weight `i · step / denom`, where `step` is returned alongside.
pub fn sphere_count_profile(wf: &WeightFunction, n: usize) -> (u64, Vec<BigUint>) {
    let grid = Grid::new(wf);
    let mut dist = vec![BigUint::from(1u32)];
    for _ in 0..n {
        dist = extend(&dist, &grid.classes, usize::MAX);
    }
    (grid.step, dist)
}

/// `S^n_w` for a weight given in units of `1/denom`.
pub fn sphere_count_units(wf: &WeightFunction, n: usize, units: u64) -> BigUint {
    let grid = Grid::new(wf);
    let Some(target) = grid.reduce(units) else {
        return BigUint::zero();
    };
    let mut dist = vec![BigUint::from(1u32)];
    for _ in 0..n {
        dist = extend(&dist, &grid.classes, target);
    }
    dist.get(target).cloned().unwrap_or_default()
}

/// `S^n_w`, zero when `w` is not a sum of `n` symbol weights.
pub fn sphere_count_exact(wf: &WeightFunction, n: usize, w: Weight) -> BigUint {
    let denom = wf.denom() as u64;
    let scaled = w * denom;
    if !scaled.is_integer() {
        return BigUint::zero();
    }
    sphere_count_units(wf, n, scaled.to_integer())
}

/// `log_q` of a big count, `-inf` for zero.
pub fn log_q(count: &BigUint, q: u32) -> f64 {
    if count.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = count.bits();
    let shift = bits.saturating_sub(64);
    let top = (count >> shift).to_f64().expect("fits");
    (top.ln() + shift as f64 * std::f64::consts::LN_2) / (q as f64).ln()
}

/// Suffix counts `T[i][r]` = number of length `n - i` vectors of reduced
/// weight `r`, for `r` up to a fixed target. Supports exact uniform
/// sampling, ranking and lexicographic enumeration of one sphere.
#[derive(Clone, Debug)]
pub struct SphereTable {
    wf: WeightFunction,
    grid: Grid,
    n: usize,
    target: usize,
    suffix: Vec<Vec<BigUint>>,
}

impl SphereTable {
    /// Table for the sphere of length `n` and weight `units / denom`.
    pub fn new(wf: &WeightFunction, n: usize, units: u64) -> Result<Self> {
        let grid = Grid::new(wf);
        let empty = || Error::EmptySphere {
            n,
            weight: wf.weight_from_units(units).to_string(),
        };
        let target = grid.reduce(units).ok_or_else(empty)?;
        let mut suffix = vec![Vec::new(); n + 1];
        suffix[n] = vec![BigUint::from(1u32)];
        for i in (0..n).rev() {
            suffix[i] = extend(&suffix[i + 1], &grid.classes, target);
        }
        let table = SphereTable {
            wf: wf.clone(),
            grid,
            n,
            target,
            suffix,
        };
        if table.count().is_zero() {
            return Err(empty());
        }
        Ok(table)
    }

    fn at(&self, i: usize, r: usize) -> Option<&BigUint> {
        self.suffix[i].get(r).filter(|c| !c.is_zero())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn count(&self) -> BigUint {
        self.suffix[0].get(self.target).cloned().unwrap_or_default()
    }

    /// Count as `u64`, saturating.
    pub fn count_u64(&self) -> u64 {
        self.count().to_u64().unwrap_or(u64::MAX)
    }

    /// The `rank`-th vector of the sphere in lexicographic order.
    pub fn unrank(&self, rank: &BigUint) -> Option<Vec<FieldElement>> {
        if *rank >= self.count() {
            return None;
        }
        let mut k = rank.clone();
        let mut r = self.target;
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut chosen = None;
            for (x, &sx) in self.grid.symbol.iter().enumerate() {
                if sx > r {
                    continue;
                }
                let Some(c) = self.at(i + 1, r - sx) else {
                    continue;
                };
                if k < *c {
                    chosen = Some((x, sx));
                    break;
                }
                k -= c;
            }
            let (x, sx) = chosen.expect("rank below count");
            out.push(x as FieldElement);
            r -= sx;
        }
        Some(out)
    }

    /// Exactly uniform draw from the sphere.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<FieldElement> {
        let rank = rng.gen_biguint_below(&self.count());
        self.unrank(&rank).expect("rank below count")
    }

    pub fn sample_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> FqVector {
        FqVector::from_raw(self.wf.field(), self.sample(rng))
    }

    /// Visits every vector of the sphere in lexicographic order.
    pub fn for_each<F: FnMut(&[FieldElement])>(&self, mut visit: F) {
        let mut buf = vec![0 as FieldElement; self.n];
        self.walk(0, self.target, &mut buf, &mut visit);
    }

    fn walk<F: FnMut(&[FieldElement])>(&self, i: usize, r: usize, buf: &mut [FieldElement], visit: &mut F) {
        if i == self.n {
            visit(buf);
            return;
        }
        for (x, &sx) in self.grid.symbol.iter().enumerate() {
            if sx <= r && self.at(i + 1, r - sx).is_some() {
                buf[i] = x as FieldElement;
                self.walk(i + 1, r - sx, buf, visit);
            }
        }
    }

    pub fn collect(&self) -> Vec<Vec<FieldElement>> {
        let mut out = Vec::new();
        self.for_each(|v| out.push(v.to_vec()));
        out
    }
}

/// Symbol counts `c_x` of a vector: `Σ c_x = n`, `Σ c_x wt'(x) = w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightComposition {
    pub counts: Vec<u32>,
}

impl WeightComposition {
    pub fn n(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn weight_units(&self, wf: &WeightFunction) -> u64 {
        self.counts
            .iter()
            .zip(wf.units())
            .map(|(&c, &u)| c as u64 * u as u64)
            .sum()
    }

    /// Number of vectors with these symbol counts, `n! / Π c_x!`.
    pub fn multinomial(&self) -> BigUint {
        let mut acc = BigUint::from(1u32);
        let mut placed = 0u64;
        for &c in &self.counts {
            for i in 1..=c as u64 {
                placed += 1;
                acc = acc * placed / i;
            }
        }
        acc
    }
}

/// Every composition of `n` coordinates with total weight `units / denom`.
pub fn compositions(wf: &WeightFunction, n: usize, units: u64) -> Vec<WeightComposition> {
    fn rec(
        units: &[u32],
        x: usize,
        left: u32,
        budget: u64,
        cur: &mut Vec<u32>,
        out: &mut Vec<WeightComposition>,
    ) {
        if x + 1 == units.len() {
            if left as u64 * units[x] as u64 == budget {
                cur.push(left);
                out.push(WeightComposition { counts: cur.clone() });
                cur.pop();
            }
            return;
        }
        for c in 0..=left {
            let spent = c as u64 * units[x] as u64;
            if spent > budget {
                break;
            }
            cur.push(c);
            rec(units, x + 1, left - c, budget - spent, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(wf.units(), 0, n as u32, units, &mut Vec::new(), &mut out);
    out
}

/// `S^n_w` as the multinomial sum over compositions.
pub fn sphere_count_multinomial(wf: &WeightFunction, n: usize, units: u64) -> BigUint {
    compositions(wf, n, units).iter().map(|c| c.multinomial()).sum()
}

/// Uniform draw of a length-`n` vector of weight `w`.
pub fn sample_uniform_weight_w<R: Rng + ?Sized>(
    wf: &WeightFunction,
    n: usize,
    w: Weight,
    rng: &mut R,
) -> Result<FqVector> {
    let scaled = w * wf.denom() as u64;
    if !scaled.is_integer() {
        return Err(Error::EmptySphere {
            n,
            weight: w.to_string(),
        });
    }
    Ok(SphereTable::new(wf, n, scaled.to_integer())?.sample_vector(rng))
}
