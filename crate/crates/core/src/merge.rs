//! Sort-and-match joining of syndrome lists on a coordinate subset.
//!
//! `L1 ⋈_J^t L2 = {x + y : x ∈ L1, y ∈ L2, x_J + y_J = t_J}`. `L1` is
//! sorted on the `J` projection; each `y ∈ L2` binary-searches the block
//! with projection `t_J - y_J`. Entries carry index pairs into their
//! parents instead of copies of the preimages.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::linalg::{FieldElement, FqVector, PrimeField};

/// Default ceiling on a merged list's length.
pub const DEFAULT_LIST_CAP: usize = 1 << 26;

/// Indices of the two parent entries (or any caller-chosen payload for
/// leaf lists).
pub type Backref = (u32, u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeEntry {
    pub syndrome: Vec<FieldElement>,
    pub backref: Backref,
}

/// A list of syndrome-space vectors of common length `m`.
#[derive(Clone, Debug)]
pub struct IndexedList {
    field: PrimeField,
    m: usize,
    entries: Vec<MergeEntry>,
    sorted_on: Option<Vec<usize>>,
}

fn cmp_on(a: &[FieldElement], b: &[FieldElement], j: &[usize]) -> Ordering {
    for &c in j {
        match a[c].cmp(&b[c]) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

impl IndexedList {
    pub fn new(field: PrimeField, m: usize) -> Self {
        IndexedList {
            field,
            m,
            entries: Vec::new(),
            sorted_on: None,
        }
    }

    pub fn from_entries(field: PrimeField, m: usize, entries: Vec<MergeEntry>) -> Result<Self> {
        let mut list = IndexedList::new(field, m);
        for e in entries {
            list.push(e)?;
        }
        Ok(list)
    }

    pub fn push(&mut self, entry: MergeEntry) -> Result<()> {
        if entry.syndrome.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                actual: entry.syndrome.len(),
            });
        }
        self.entries.push(entry);
        self.sorted_on = None;
        Ok(())
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Syndrome length.
    pub fn width(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[MergeEntry] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &MergeEntry {
        &self.entries[i]
    }

    pub fn sorted_on(&self) -> Option<&[usize]> {
        self.sorted_on.as_deref()
    }

    /// Stable sort by the `J` projection (coordinates compared in the order
    /// given).
    pub fn sort_on(&mut self, j: &[usize]) {
        self.entries
            .sort_by(|a, b| cmp_on(&a.syndrome, &b.syndrome, j));
        self.sorted_on = Some(j.to_vec());
    }

    /// Sorts by the `J` projection, breaking ties with `tie`.
    pub fn sort_on_by<F>(&mut self, j: &[usize], mut tie: F)
    where
        F: FnMut(&MergeEntry, &MergeEntry) -> Ordering,
    {
        self.entries
            .sort_by(|a, b| cmp_on(&a.syndrome, &b.syndrome, j).then_with(|| tie(a, b)));
        self.sorted_on = Some(j.to_vec());
    }

    /// Index range of entries whose `J` projection equals `key` (given on
    /// the `J` coordinates, in order). The list must be sorted on `J`.
    pub fn equal_range(&self, j: &[usize], key: &[FieldElement]) -> std::ops::Range<usize> {
        debug_assert_eq!(self.sorted_on(), Some(j));
        let cmp_key = |e: &MergeEntry| {
            for (k, &c) in j.iter().enumerate() {
                match e.syndrome[c].cmp(&key[k]) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        };
        let lo = self.entries.partition_point(|e| cmp_key(e) == Ordering::Less);
        let hi = lo + self.entries[lo..].partition_point(|e| cmp_key(e) != Ordering::Greater);
        lo..hi
    }
}

fn check_subset(j: &[usize], m: usize) -> Result<()> {
    let mut seen = vec![false; m];
    for &c in j {
        if c >= m || std::mem::replace(&mut seen[c], true) {
            return Err(Error::InvalidParams(format!(
                "merge coordinates {j:?} are not distinct indices below {m}"
            )));
        }
    }
    Ok(())
}

/// `L1 ⋈_J^t L2`. `t` has the full syndrome length; only `t_J` matters.
/// Output entries point back at `(index in L1, index in L2)` and appear in
/// `L2` order, matches within one `y` in `L1`'s `J` order.
pub fn merge(
    l1: &IndexedList,
    l2: &IndexedList,
    j: &[usize],
    t: &FqVector,
    cap: usize,
) -> Result<IndexedList> {
    let f = l1.field;
    if l2.field != f || t.field() != f {
        return Err(Error::ModulusMismatch {
            left: f.order(),
            right: if l2.field != f { l2.field.order() } else { t.field().order() },
        });
    }
    let m = l1.m;
    for len in [l2.m, t.len()] {
        if len != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                actual: len,
            });
        }
    }
    check_subset(j, m)?;

    let order: Vec<u32> = if l1.sorted_on() == Some(j) {
        (0..l1.len() as u32).collect()
    } else {
        let mut order: Vec<u32> = (0..l1.len() as u32).collect();
        order.sort_by(|&a, &b| {
            cmp_on(&l1.entries[a as usize].syndrome, &l1.entries[b as usize].syndrome, j)
        });
        order
    };
    let width = j.len();
    let keys: Vec<FieldElement> = order
        .iter()
        .flat_map(|&i| j.iter().map(move |&c| l1.entries[i as usize].syndrome[c]))
        .collect();
    let key_at = |k: usize| &keys[k * width..(k + 1) * width];

    let mut out = IndexedList::new(f, m);
    let mut want = vec![0 as FieldElement; width];
    let tv = t.entries();
    for (iy, y) in l2.entries.iter().enumerate() {
        for (k, &c) in j.iter().enumerate() {
            want[k] = f.sub(tv[c], y.syndrome[c]);
        }
        let lo = partition(order.len(), |k| key_at(k) < &want[..]);
        let mut k = lo;
        while k < order.len() && key_at(k) == &want[..] {
            if out.entries.len() >= cap {
                return Err(Error::CapExceeded {
                    size: out.entries.len() + 1,
                    cap,
                });
            }
            let ix = order[k];
            let x = &l1.entries[ix as usize].syndrome;
            out.entries.push(MergeEntry {
                syndrome: x.iter().zip(&y.syndrome).map(|(&a, &b)| f.add(a, b)).collect(),
                backref: (ix, iy as u32),
            });
            k += 1;
        }
    }
    Ok(out)
}

fn partition<P: Fn(usize) -> bool>(len: usize, pred: P) -> usize {
    let (mut lo, mut hi) = (0, len);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}
