//! Back ends for the constrained syndrome problem
//! `H'' e'' = s''`, `wt(e'') = p` on `N = k + ℓ` coordinates.
//!
//! Every back end returns a [`CmsdDescription`]: a domain size `Y` and a
//! function `f` on `[0, Y)` that yields a solution or nothing.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::{BigUint, RandBigInt};
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{FieldElement, FqMatrix, FqVector, PrimeField};
use crate::merge::{merge, IndexedList, MergeEntry};
use crate::sphere::{log_q, sphere_count_profile, sphere_count_units, SphereTable};
use crate::weight::WeightFunction;

/// How the target weight `p` is shared among the base blocks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightSplit {
    /// One merge tree per achievable weight composition.
    #[default]
    All,
    /// Only the balanced composition, left blocks taking the remainder.
    Balanced,
}

/// The reduced problem handed to a back end.
#[derive(Clone, Copy, Debug)]
pub struct CmsdProblem<'a> {
    pub wf: &'a WeightFunction,
    /// `ℓ × N`
    pub h: &'a FqMatrix,
    /// length `ℓ`
    pub s: &'a FqVector,
    pub p_units: u64,
}

impl CmsdProblem<'_> {
    fn width(&self) -> usize {
        self.h.cols()
    }

    fn ell(&self) -> usize {
        self.h.rows()
    }

    fn field(&self) -> PrimeField {
        self.wf.field()
    }

    fn check(&self) -> Result<()> {
        if self.h.field() != self.field() || self.s.field() != self.field() {
            return Err(Error::ModulusMismatch {
                left: self.field().order(),
                right: self.h.field().order(),
            });
        }
        if self.s.len() != self.ell() {
            return Err(Error::DimensionMismatch {
                expected: self.ell(),
                actual: self.s.len(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Block {
    start: usize,
    len: usize,
    units: u64,
}

#[derive(Clone, Debug)]
struct Leaf {
    start: usize,
    vectors: Vec<Vec<FieldElement>>,
}

/// Lists of a merge tree, level 0 holding the base lists. Node `i` of
/// level `j` merges nodes `2i` and `2i + 1` of level `j - 1`.
#[derive(Clone, Debug)]
struct Tree {
    leaves: Vec<Leaf>,
    levels: Vec<Vec<IndexedList>>,
}

impl Tree {
    fn fill(&self, level: usize, node: usize, entry: usize, out: &mut [FieldElement]) {
        let (a, b) = self.levels[level][node].get(entry).backref;
        if level == 0 {
            let leaf = &self.leaves[node];
            let v = &leaf.vectors[a as usize];
            out[leaf.start..leaf.start + v.len()].copy_from_slice(v);
        } else {
            self.fill(level - 1, 2 * node, a as usize, out);
            self.fill(level - 1, 2 * node + 1, b as usize, out);
        }
    }

    fn sizes(&self) -> Vec<Vec<usize>> {
        self.levels
            .iter()
            .map(|lists| lists.iter().map(IndexedList::len).collect())
            .collect()
    }
}

#[derive(Clone, Debug)]
struct Virtual {
    tree: Tree,
    /// node index of the materialized left sibling at each level
    spine: Vec<usize>,
    j_sets: Vec<Vec<usize>>,
    targets: Vec<FqVector>,
    block: Block,
    table: SphereTable,
    ranks: Option<Vec<BigUint>>,
    h: FqMatrix,
}

#[derive(Clone, Debug)]
enum Backing {
    Single(FqVector),
    Trees { trees: Vec<Tree>, offsets: Vec<u64> },
    Virtual(Box<Virtual>),
}

/// A domain `[0, Y)` and a map from it to solutions of the reduced problem.
#[derive(Clone, Debug)]
pub struct CmsdDescription {
    field: PrimeField,
    width: usize,
    y: u64,
    expected: f64,
    backing: Backing,
}

impl CmsdDescription {
    /// `Y`, the number of points `f` can be evaluated at.
    pub fn domain_size(&self) -> u64 {
        self.y
    }

    /// Length `N` of the vectors `f` returns.
    pub fn width(&self) -> usize {
        self.width
    }

    /// Expected number of points with an output, from the list sizes.
    pub fn expected_outputs(&self) -> f64 {
        self.expected
    }

    /// Sizes of every list, per tree and level. Empty for Prange.
    pub fn list_sizes(&self) -> Vec<Vec<Vec<usize>>> {
        match &self.backing {
            Backing::Single(_) => Vec::new(),
            Backing::Trees { trees, .. } => trees.iter().map(Tree::sizes).collect(),
            Backing::Virtual(v) => vec![v.tree.sizes()],
        }
    }

    /// `f(k)`: a solution, or `None` when this point has none.
    pub fn try_evaluate(&self, k: u64) -> Option<FqVector> {
        if k >= self.y {
            return None;
        }
        match &self.backing {
            Backing::Single(v) => Some(v.clone()),
            Backing::Trees { trees, offsets } => {
                let t = offsets.partition_point(|&o| o <= k) - 1;
                let tree = &trees[t];
                let top = tree.levels.len() - 1;
                let mut out = vec![0; self.width];
                tree.fill(top, 0, (k - offsets[t]) as usize, &mut out);
                Some(FqVector::from_raw(self.field, out))
            }
            Backing::Virtual(v) => v.evaluate(self.field, self.width, k),
        }
    }

    /// `f(k)` with the zero vector standing for "no solution".
    pub fn evaluate(&self, k: u64) -> FqVector {
        self.try_evaluate(k)
            .unwrap_or_else(|| FqVector::zeros(self.field, self.width))
    }
}

impl Virtual {
    fn evaluate(&self, f: PrimeField, width: usize, k: u64) -> Option<FqVector> {
        let rank = match &self.ranks {
            Some(r) => r[k as usize].clone(),
            None => BigUint::from(k),
        };
        let b = self.table.unrank(&rank)?;
        let mut z = block_syndrome(&self.h, self.block.start, &b);
        let mut out = vec![0; width];
        out[self.block.start..self.block.start + b.len()].copy_from_slice(&b);
        let mut key = Vec::new();
        for (lvl, &node) in self.spine.iter().enumerate() {
            let list = &self.tree.levels[lvl][node];
            let j = &self.j_sets[lvl];
            let t = self.targets[lvl].entries();
            key.clear();
            key.extend(j.iter().map(|&c| f.sub(t[c], z[c])));
            let hit = list.equal_range(j, &key);
            if hit.is_empty() {
                return None;
            }
            let x = &list.get(hit.start).syndrome;
            for (zc, &xc) in z.iter_mut().zip(x) {
                *zc = f.add(*zc, xc);
            }
            self.tree.fill(lvl, node, hit.start, &mut out);
        }
        Some(FqVector::from_raw(f, out))
    }
}

/// Every output of `f` over its domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    /// Outputs in domain order, repeats kept.
    pub values: Vec<FqVector>,
    /// Number of distinct outputs.
    pub distinct: usize,
}

pub fn enumerate_f(desc: &CmsdDescription) -> Enumeration {
    let values: Vec<FqVector> = (0..desc.domain_size())
        .filter_map(|k| desc.try_evaluate(k))
        .collect();
    let distinct = values.iter().collect::<BTreeSet<_>>().len();
    Enumeration { values, distinct }
}

/// `ℓ = 0`, `p = 0`: a single point mapping to the zero vector.
pub fn cmsd_prange(problem: &CmsdProblem) -> Result<CmsdDescription> {
    problem.check()?;
    if problem.ell() != 0 || problem.p_units != 0 {
        return Err(Error::InvalidParams("Prange needs ℓ = 0 and p = 0".into()));
    }
    Ok(CmsdDescription {
        field: problem.field(),
        width: problem.width(),
        y: 1,
        expected: 1.0,
        backing: Backing::Single(FqVector::zeros(problem.field(), problem.width())),
    })
}

/// Two half-length lists merged on all `ℓ` coordinates, over every
/// achievable split of `p`. Returns exactly the solution set.
pub fn cmsd_dumer<R: Rng + ?Sized>(
    problem: &CmsdProblem,
    cap: usize,
    rng: &mut R,
) -> Result<CmsdDescription> {
    cmsd_wagner_v1(problem, 1, WeightSplit::All, cap, rng)
}

/// `2^a` base lists combined by a binary tree of merges. With `a ≥ 2`
/// base lists are subsampled to `q^{|J_1|}` vectors.
pub fn cmsd_wagner_v1<R: Rng + ?Sized>(
    problem: &CmsdProblem,
    a: u32,
    split: WeightSplit,
    cap: usize,
    rng: &mut R,
) -> Result<CmsdDescription> {
    problem.check()?;
    let parts = parts_for(a, 0)?;
    let layout = layout(problem.width(), parts)?;
    let splits = weight_splits(problem.wf, &layout, problem.p_units, split)?;
    let mut trees = Vec::with_capacity(splits.len());
    let mut offsets = vec![0u64];
    let mut expected = 0.0;
    for units in splits {
        let blocks: Vec<Block> = layout
            .iter()
            .zip(&units)
            .map(|(&(start, len), &units)| Block { start, len, units })
            .collect();
        let (tree, top) = build_tree(problem, &blocks, a, cap, rng)?;
        expected += top;
        let size = tree.levels[a as usize][0].len() as u64;
        offsets.push(offsets.last().unwrap() + size);
        trees.push(tree);
    }
    let y = offsets.pop().unwrap();
    Ok(CmsdDescription {
        field: problem.field(),
        width: problem.width(),
        y,
        expected,
        backing: Backing::Trees { trees, offsets },
    })
}

/// `2^a - 1` materialized base lists plus one virtual list spanning two
/// blocks, of twice the weight. `f(k)` takes the `k`-th virtual vector and
/// walks up the tree picking the lexicographically first partner.
pub fn cmsd_wagner_v2_build<R: Rng + ?Sized>(
    problem: &CmsdProblem,
    a: u32,
    cap: usize,
    rng: &mut R,
) -> Result<CmsdDescription> {
    problem.check()?;
    let f = problem.field();
    let ell = problem.ell();
    let parts = parts_for(a, 1)?;
    let lay = layout(problem.width(), parts)?;
    let units = weight_splits(problem.wf, &lay, problem.p_units, WeightSplit::Balanced)?
        .pop()
        .expect("balanced split");
    let mut blocks: Vec<Block> = lay
        .iter()
        .zip(&units)
        .map(|(&(start, len), &units)| Block { start, len, units })
        .collect();
    let last = blocks.pop().unwrap();
    let prev = blocks.pop().unwrap();
    let vblock = Block {
        start: prev.start,
        len: prev.len + last.len,
        units: prev.units + last.units,
    };

    let counts: Vec<BigUint> = blocks
        .iter()
        .map(|b| sphere_count_units(problem.wf, b.len, b.units))
        .collect();
    let u = subsample_exponent(&counts, problem.wf.q(), ell, a);
    let target = (a >= 2).then(|| pow_sat(problem.wf.q(), u));
    let leaves = blocks
        .iter()
        .map(|b| leaf(problem.wf, b, target, cap, rng))
        .collect::<Result<Vec<_>>>()?;
    let table = SphereTable::new(problem.wf, vblock.len, vblock.units)?;
    let vcount = table.count();
    let vtarget = if a >= 2 {
        pow_sat(problem.wf.q(), 2 * u).min(cap as u64)
    } else {
        cap as u64
    };
    let (y, ranks) = if vcount > BigUint::from(vtarget) {
        (vtarget, Some(distinct_ranks(&vcount, vtarget, rng)))
    } else {
        (vcount.to_u64().expect("below cap"), None)
    };

    let j_sets = partition_coords(ell, a as usize, u);
    let mut levels = vec![base_lists(problem, &leaves)?];
    let mut targets = Vec::new();
    for lvl in 1..=a as usize {
        let nodes = parts_for(a, 0)? >> lvl;
        let j = &j_sets[lvl - 1];
        let mut ts = random_targets(f, problem.s, j, nodes, rng);
        let below = &levels[lvl - 1];
        let merged = (0..nodes - 1)
            .map(|i| merge(&below[2 * i], &below[2 * i + 1], j, &ts[i], cap))
            .collect::<Result<Vec<_>>>()?;
        targets.push(ts.pop().unwrap());
        levels.push(merged);
    }
    let mut tree = Tree { leaves, levels };
    let spine: Vec<usize> = (1..=a as usize)
        .map(|lvl| (parts_for(a, 0).unwrap() >> (lvl - 1)) - 2)
        .collect();
    for (lvl, &node) in spine.iter().enumerate() {
        let pre: HashMap<_, Vec<FieldElement>> = (0..tree.levels[lvl][node].len())
            .map(|e| {
                let mut out = vec![0; problem.width()];
                tree.fill(lvl, node, e, &mut out);
                (tree.levels[lvl][node].get(e).backref, out)
            })
            .collect();
        tree.levels[lvl][node].sort_on_by(&j_sets[lvl], |x, y| pre[&x.backref].cmp(&pre[&y.backref]));
    }

    // each level of the walk finds a partner with probability about
    // 1 - exp(-E|S_j| / q^{|J_j|})
    let sizes = expected_sizes(&tree.leaves, &j_sets, problem.wf.q());
    let expected = spine.iter().enumerate().fold(y as f64, |acc, (lvl, &node)| {
        let mean = sizes[lvl][node] / (problem.wf.q() as f64).powi(j_sets[lvl].len() as i32);
        acc * -(-mean).exp_m1()
    });
    Ok(CmsdDescription {
        field: f,
        width: problem.width(),
        y,
        expected,
        backing: Backing::Virtual(Box::new(Virtual {
            tree,
            spine,
            j_sets,
            targets,
            block: vblock,
            table,
            ranks,
            h: problem.h.clone(),
        })),
    })
}

/// Expected list sizes per level from the base list sizes: a merge on `J`
/// keeps a `q^{-|J|}` fraction of all pairs. Nodes past the last leaf
/// (the virtual list) are absent.
fn expected_sizes(leaves: &[Leaf], j_sets: &[Vec<usize>], q: u32) -> Vec<Vec<f64>> {
    let mut levels = vec![leaves.iter().map(|l| l.vectors.len() as f64).collect::<Vec<_>>()];
    for j in j_sets {
        let below = levels.last().unwrap();
        let keep = (q as f64).powi(-(j.len() as i32));
        let next = below.chunks_exact(2).map(|c| c[0] * c[1] * keep).collect();
        levels.push(next);
    }
    levels
}

fn parts_for(a: u32, extra: usize) -> Result<usize> {
    if a == 0 || a > 20 {
        return Err(Error::InvalidParams(format!("tree depth a = {a} outside 1..=20")));
    }
    Ok((1usize << a) + extra)
}

/// `(start, len)` of `parts` contiguous blocks, the first `N mod parts`
/// one longer.
fn layout(width: usize, parts: usize) -> Result<Vec<(usize, usize)>> {
    if parts > width {
        return Err(Error::InvalidParams(format!(
            "{parts} blocks do not fit in {width} coordinates"
        )));
    }
    let mut start = 0;
    Ok(even(width as u64, parts)
        .into_iter()
        .map(|len| {
            let b = (start, len as usize);
            start += len as usize;
            b
        })
        .collect())
}

fn even(total: u64, parts: usize) -> Vec<u64> {
    let (base, extra) = (total / parts as u64, (total % parts as u64) as usize);
    (0..parts).map(|i| base + u64::from(i < extra)).collect()
}

/// Weight unit assignments to the blocks that sum to `p` and are
/// achievable on every block.
fn weight_splits(
    wf: &WeightFunction,
    layout: &[(usize, usize)],
    p_units: u64,
    split: WeightSplit,
) -> Result<Vec<Vec<u64>>> {
    let infeasible = || Error::Infeasible(format!(
        "weight {} cannot be split over blocks {:?}",
        wf.weight_from_units(p_units),
        layout.iter().map(|b| b.1).collect::<Vec<_>>()
    ));
    let (step, _) = sphere_count_profile(wf, 1);
    if p_units % step != 0 {
        return Err(infeasible());
    }
    let out = match split {
        WeightSplit::Balanced => {
            let units: Vec<u64> = even(p_units / step, layout.len())
                .into_iter()
                .map(|x| x * step)
                .collect();
            let ok = layout
                .iter()
                .zip(&units)
                .all(|(b, &u)| !sphere_count_units(wf, b.1, u).is_zero());
            if ok {
                vec![units]
            } else {
                vec![]
            }
        }
        WeightSplit::All => {
            let achievable: Vec<Vec<u64>> = layout
                .iter()
                .map(|b| {
                    let (step, prof) = sphere_count_profile(wf, b.1);
                    prof.iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, _)| i as u64 * step)
                        .filter(|&u| u <= p_units)
                        .collect()
                })
                .collect();
            let mut out = Vec::new();
            compose(&achievable, p_units, &mut Vec::new(), &mut out);
            out
        }
    };
    if out.is_empty() {
        return Err(infeasible());
    }
    Ok(out)
}

fn compose(sets: &[Vec<u64>], rest: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    let Some((first, tail)) = sets.split_first() else {
        if rest == 0 {
            out.push(cur.clone());
        }
        return;
    };
    let reach: u64 = tail.iter().map(|s| s.last().copied().unwrap_or(0)).sum();
    for &u in first {
        if u <= rest && rest - u <= reach {
            cur.push(u);
            compose(tail, rest - u, cur, out);
            cur.pop();
        }
    }
}

/// `|J_j|` for the lower levels: about `log_q` of the smallest base
/// sphere, at most `ℓ / a`.
fn subsample_exponent(counts: &[BigUint], q: u32, ell: usize, a: u32) -> usize {
    if a < 2 {
        return 0;
    }
    let smallest = counts
        .iter()
        .map(|c| log_q(c, q))
        .fold(f64::INFINITY, f64::min);
    (smallest.max(0.0).round() as usize).min(ell / a as usize)
}

fn partition_coords(ell: usize, a: usize, u: usize) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = (0..a - 1).map(|j| (j * u..(j + 1) * u).collect()).collect();
    sets.push(((a - 1) * u..ell).collect());
    sets
}

fn pow_sat(q: u32, e: usize) -> u64 {
    (q as u64).checked_pow(e as u32).unwrap_or(u64::MAX)
}

fn distinct_ranks<R: Rng + ?Sized>(count: &BigUint, t: u64, rng: &mut R) -> Vec<BigUint> {
    let mut ranks: Vec<BigUint> = match count.to_u64() {
        Some(c) if c <= 2 * t => rand::seq::index::sample(rng, c as usize, t as usize)
            .into_iter()
            .map(BigUint::from)
            .collect(),
        _ => {
            let mut seen = HashSet::new();
            let mut ranks = Vec::with_capacity(t as usize);
            while ranks.len() < t as usize {
                let r = rng.gen_biguint_below(count);
                if seen.insert(r.clone()) {
                    ranks.push(r);
                }
            }
            ranks
        }
    };
    ranks.sort();
    ranks
}

fn leaf<R: Rng + ?Sized>(
    wf: &WeightFunction,
    block: &Block,
    target: Option<u64>,
    cap: usize,
    rng: &mut R,
) -> Result<Leaf> {
    let table = SphereTable::new(wf, block.len, block.units)?;
    let count = table.count();
    let vectors = match target {
        Some(t) if count > BigUint::from(t) => {
            if t > cap as u64 {
                return Err(Error::CapExceeded {
                    size: t.min(usize::MAX as u64) as usize,
                    cap,
                });
            }
            distinct_ranks(&count, t, rng)
                .iter()
                .map(|r| table.unrank(r).expect("rank below count"))
                .collect()
        }
        _ => {
            if count > BigUint::from(cap) {
                return Err(Error::CapExceeded {
                    size: count.to_usize().unwrap_or(usize::MAX),
                    cap,
                });
            }
            table.collect()
        }
    };
    Ok(Leaf {
        start: block.start,
        vectors,
    })
}

fn block_syndrome(h: &FqMatrix, start: usize, b: &[FieldElement]) -> Vec<FieldElement> {
    let q = h.field().order() as u64;
    (0..h.rows())
        .map(|r| {
            let row = &h.row(r)[start..start + b.len()];
            let acc: u64 = row.iter().zip(b).map(|(&x, &y)| x as u64 * y as u64).sum();
            (acc % q) as FieldElement
        })
        .collect()
}

fn base_lists(problem: &CmsdProblem, leaves: &[Leaf]) -> Result<Vec<IndexedList>> {
    leaves
        .iter()
        .map(|leaf| {
            let entries = leaf
                .vectors
                .iter()
                .enumerate()
                .map(|(i, v)| MergeEntry {
                    syndrome: block_syndrome(problem.h, leaf.start, v),
                    backref: (i as u32, 0),
                })
                .collect();
            IndexedList::from_entries(problem.field(), problem.ell(), entries)
        })
        .collect()
}

/// `count` targets supported on `J` summing to `s` there; all but the last
/// uniform.
fn random_targets<R: Rng + ?Sized>(
    f: PrimeField,
    s: &FqVector,
    j: &[usize],
    count: usize,
    rng: &mut R,
) -> Vec<FqVector> {
    let m = s.len();
    let q = f.order();
    let mut rest = vec![0; m];
    for &c in j {
        rest[c] = s.entries()[c];
    }
    let mut out = Vec::with_capacity(count);
    for _ in 1..count {
        let mut t = vec![0; m];
        for &c in j {
            t[c] = rng.gen_range(0..q);
            rest[c] = f.sub(rest[c], t[c]);
        }
        out.push(FqVector::from_raw(f, t));
    }
    out.push(FqVector::from_raw(f, rest));
    out
}

/// Returns the tree and the expected size of its final list.
fn build_tree<R: Rng + ?Sized>(
    problem: &CmsdProblem,
    blocks: &[Block],
    a: u32,
    cap: usize,
    rng: &mut R,
) -> Result<(Tree, f64)> {
    let f = problem.field();
    let q = problem.wf.q();
    let counts: Vec<BigUint> = blocks
        .iter()
        .map(|b| sphere_count_units(problem.wf, b.len, b.units))
        .collect();
    let u = subsample_exponent(&counts, q, problem.ell(), a);
    let target = (a >= 2).then(|| pow_sat(q, u));
    let leaves = blocks
        .iter()
        .map(|b| leaf(problem.wf, b, target, cap, rng))
        .collect::<Result<Vec<_>>>()?;
    let j_sets = partition_coords(problem.ell(), a as usize, u);
    let top = expected_sizes(&leaves, &j_sets, q)[a as usize][0];
    let mut levels = vec![base_lists(problem, &leaves)?];
    for (lvl, j) in j_sets.iter().enumerate() {
        let below = &levels[lvl];
        let nodes = below.len() / 2;
        let ts = random_targets(f, problem.s, j, nodes, rng);
        let merged = (0..nodes)
            .map(|i| merge(&below[2 * i], &below[2 * i + 1], j, &ts[i], cap))
            .collect::<Result<Vec<_>>>()?;
        levels.push(merged);
    }
    Ok((Tree { leaves, levels }, top))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::merge::DEFAULT_LIST_CAP;

    /// All `e` with `H e = s`, `wt(e) = p`, by exhaustive search.
    fn oracle(p: &CmsdProblem) -> BTreeSet<FqVector> {
        let f = p.field();
        let n = p.width();
        let q = f.order() as usize;
        let mut out = BTreeSet::new();
        for code in 0..q.pow(n as u32) {
            let mut c = code;
            let v: Vec<FieldElement> = (0..n)
                .map(|_| {
                    let x = (c % q) as FieldElement;
                    c /= q;
                    x
                })
                .collect();
            let v = FqVector::from_raw(f, v);
            if p.wf.vector_units(&v).unwrap() == p.p_units && p.h.mul_vec(&v).unwrap() == *p.s {
                out.insert(v);
            }
        }
        out
    }

    fn random_problem(wf: &WeightFunction, ell: usize, n: usize, rng: &mut ChaCha8Rng) -> (FqMatrix, FqVector) {
        let f = wf.field();
        let h = FqMatrix::random(f, ell, n, rng);
        let s = FqVector::from_raw(f, (0..ell).map(|_| rng.gen_range(0..f.order())).collect());
        (h, s)
    }

    fn check_sound(p: &CmsdProblem, desc: &CmsdDescription) {
        for k in 0..desc.domain_size() {
            if let Some(e) = desc.try_evaluate(k) {
                assert_eq!(p.wf.vector_units(&e).unwrap(), p.p_units);
                assert_eq!(p.h.mul_vec(&e).unwrap(), *p.s);
            }
        }
    }

    #[test]
    fn prange_is_the_zero_vector() {
        let wf = WeightFunction::lee(5).unwrap();
        let f = wf.field();
        let h = FqMatrix::zeros(f, 0, 4);
        let s = FqVector::zeros(f, 0);
        let p = CmsdProblem { wf: &wf, h: &h, s: &s, p_units: 0 };
        let d = cmsd_prange(&p).unwrap();
        assert_eq!(d.domain_size(), 1);
        assert_eq!(d.evaluate(0), FqVector::zeros(f, 4));
        let bad = CmsdProblem { p_units: 1, ..p };
        assert!(cmsd_prange(&bad).is_err());
    }

    #[test]
    fn dumer_equals_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for wf in [WeightFunction::lee(5).unwrap(), WeightFunction::hamming(3).unwrap()] {
            for &(ell, n, p) in &[(2usize, 5usize, 2u64), (3, 6, 3), (0, 4, 1), (3, 5, 0)] {
                let (h, s) = random_problem(&wf, ell, n, &mut rng);
                let prob = CmsdProblem { wf: &wf, h: &h, s: &s, p_units: p };
                let d = cmsd_dumer(&prob, DEFAULT_LIST_CAP, &mut rng).unwrap();
                let en = enumerate_f(&d);
                assert_eq!(en.distinct, en.values.len());
                let got: BTreeSet<_> = en.values.into_iter().collect();
                assert_eq!(got, oracle(&prob), "{} ell={ell} n={n} p={p}", wf.kind());
            }
        }
    }

    #[test]
    fn wagner_v1_all_splits_a1_is_dumer() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let wf = WeightFunction::lee(7).unwrap();
        let (h, s) = random_problem(&wf, 2, 4, &mut rng);
        let prob = CmsdProblem { wf: &wf, h: &h, s: &s, p_units: 4 };
        let d = cmsd_wagner_v1(&prob, 1, WeightSplit::All, 1000, &mut rng).unwrap();
        let got: BTreeSet<_> = enumerate_f(&d).values.into_iter().collect();
        assert_eq!(got, oracle(&prob));
    }

    #[test]
    fn wagner_v1_deeper_is_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let wf = WeightFunction::lee(5).unwrap();
        for a in 2..=3 {
            let (h, s) = random_problem(&wf, 4, 8, &mut rng);
            for split in [WeightSplit::All, WeightSplit::Balanced] {
                let prob = CmsdProblem { wf: &wf, h: &h, s: &s, p_units: 8 };
                let d = cmsd_wagner_v1(&prob, a, split, DEFAULT_LIST_CAP, &mut rng).unwrap();
                check_sound(&prob, &d);
                let truth = oracle(&prob);
                for e in enumerate_f(&d).values {
                    assert!(truth.contains(&e));
                }
            }
        }
    }

    #[test]
    fn wagner_v1_list_sizes_follow_the_size_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let wf = WeightFunction::hamming(3).unwrap();
        let (h, s) = random_problem(&wf, 12, 32, &mut rng);
        let prob = CmsdProblem { wf: &wf, h: &h, s: &s, p_units: 8 };
        let d = cmsd_wagner_v1(&prob, 2, WeightSplit::Balanced, DEFAULT_LIST_CAP, &mut rng).unwrap();
        let sizes = &d.list_sizes()[0];
        // |J_1| = min(round(log_3 112), 6) = 4
        assert!(sizes[0].iter().all(|&x| x == 81));
        for &x in &sizes[1] {
            let ratio = x as f64 / 81.0;
            assert!((0.5..2.0).contains(&ratio), "{sizes:?}");
        }
        assert!(d.expected_outputs() > 0.0);
    }

    #[test]
    fn wagner_v2_a1_is_complete_for_its_profile() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for wf in [WeightFunction::lee(5).unwrap(), WeightFunction::hamming(3).unwrap()] {
            for trial in 0..6 {
                let (h, s) = random_problem(&wf, 2, 6, &mut rng);
                let p_units = 3 + trial % 2;
                let prob = CmsdProblem { wf: &wf, h: &h, s: &s, p_units };
                let d = cmsd_wagner_v2_build(&prob, 1, DEFAULT_LIST_CAP, &mut rng).unwrap();
                check_sound(&prob, &d);
                // blocks of length 2; the first carries ceil(p / 3)
                let w0 = even(p_units, 3)[0];
                let restricted: BTreeSet<FqVector> = oracle(&prob)
                    .into_iter()
                    .filter(|e| wf.units_of_slice(&e.entries()[..2]) == w0)
                    .collect();
                let got: BTreeSet<FqVector> = enumerate_f(&d).values.into_iter().collect();
                assert!(got.is_subset(&restricted));
                let tails: BTreeSet<&[FieldElement]> =
                    restricted.iter().map(|e| &e.entries()[2..]).collect();
                assert_eq!(got.len(), tails.len());
                assert_eq!(got.is_empty(), restricted.is_empty());
                // the chosen partner is the lexicographically first one
                for e in &got {
                    let first = restricted
                        .iter()
                        .filter(|r| r.entries()[2..] == e.entries()[2..])
                        .min()
                        .unwrap();
                    assert_eq!(e, first);
                }
            }
        }
    }

    #[test]
    fn wagner_v2_deeper_is_sound() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let wf = WeightFunction::lee(5).unwrap();
        let (h, s) = random_problem(&wf, 4, 10, &mut rng);
        for a in 1..=3 {
            let prob = CmsdProblem { wf: &wf, h: &h, s: &s, p_units: 9 };
            let d = cmsd_wagner_v2_build(&prob, a, DEFAULT_LIST_CAP, &mut rng).unwrap();
            check_sound(&prob, &d);
        }
    }

    #[test]
    fn rejects_bad_shapes_and_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let wf = WeightFunction::lee(5).unwrap();
        let (h, s) = random_problem(&wf, 2, 4, &mut rng);
        let prob = CmsdProblem { wf: &wf, h: &h, s: &s, p_units: 2 };
        assert!(cmsd_wagner_v1(&prob, 3, WeightSplit::All, 100, &mut rng).is_err());
        assert!(cmsd_wagner_v2_build(&prob, 2, 100, &mut rng).is_err());
        assert!(matches!(
            cmsd_dumer(&prob, 1, &mut rng),
            Err(Error::CapExceeded { .. })
        ));
        let heavy = CmsdProblem { p_units: 9, ..prob };
        assert!(matches!(cmsd_dumer(&heavy, 100, &mut rng), Err(Error::Infeasible(_))));
        let s3 = FqVector::zeros(wf.field(), 3);
        let bad = CmsdProblem { s: &s3, ..prob };
        assert!(cmsd_dumer(&bad, 100, &mut rng).is_err());
    }

    #[test]
    fn weight_splits_cover_all_compositions() {
        let wf = WeightFunction::lee(5).unwrap();
        let lay = layout(4, 2).unwrap();
        let all = weight_splits(&wf, &lay, 3, WeightSplit::All).unwrap();
        assert_eq!(all, vec![vec![0, 3], vec![1, 2], vec![2, 1], vec![3, 0]]);
        let bal = weight_splits(&wf, &lay, 3, WeightSplit::Balanced).unwrap();
        assert_eq!(bal, vec![vec![2, 1]]);
        assert_eq!(layout(7, 3).unwrap(), vec![(0, 3), (3, 2), (5, 2)]);
    }
}
