use rand::seq::SliceRandom;
use rand::Rng;

use super::{FqMatrix, FqVector};
use crate::error::{Error, Result};

/// A bijection on `0..n`.
///
/// Applying it moves the entry at position `images[j]` to position `j`, so
/// the permuted matrix `H_π` has column `j` equal to column `images[j]` of
/// `H`. A solution `e` of `H_π e = s` maps back to a solution of `H x = s`
/// through [`Permutation::inverse`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.shuffle(rng);
        Permutation { images }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidParams(format!(
                    "{images:?} is not a permutation"
                )));
            }
        }
        Ok(Permutation { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (j, &i) in self.images.iter().enumerate() {
            inv[i] = j;
        }
        Permutation { images: inv }
    }

    /// `(self ∘ other)`: applying the result equals applying `self` first,
    /// then `other`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation> {
        self.check_len(other.len())?;
        Ok(Permutation {
            images: other.images.iter().map(|&j| self.images[j]).collect(),
        })
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.images.len() {
            return Err(Error::DimensionMismatch {
                expected: self.images.len(),
                actual: n,
            });
        }
        Ok(())
    }

    pub fn apply_vector(&self, v: &FqVector) -> Result<FqVector> {
        self.check_len(v.len())?;
        let e = v.entries();
        Ok(FqVector::from_raw(
            v.field(),
            self.images.iter().map(|&i| e[i]).collect(),
        ))
    }

    pub fn apply_columns(&self, m: &FqMatrix) -> Result<FqMatrix> {
        self.check_len(m.cols())?;
        let mut out = FqMatrix::zeros(m.field(), m.rows(), m.cols());
        for r in 0..m.rows() {
            let row = m.row(r);
            for (j, &i) in self.images.iter().enumerate() {
                out.set(r, j, row[i]);
            }
        }
        Ok(out)
    }
}
