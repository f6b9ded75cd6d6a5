use rand::Rng;

use super::{FieldElement, FqVector, PrimeField};
use crate::error::{Error, Result};

/// A dense row-major matrix over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl FqMatrix {
    pub fn new(field: PrimeField, rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if let Some(&bad) = data.iter().find(|&&x| x >= field.order()) {
            return Err(Error::InvalidParams(format!(
                "entry {bad} is not a residue mod {}",
                field.order()
            )));
        }
        Ok(FqMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from rows of integers, reducing them mod `q`.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    actual: row.len(),
                });
            }
            data.extend(row.iter().map(|&v| field.reduce(v)));
        }
        Ok(FqMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FqMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = FqMatrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.order();
        }
        m
    }

    /// Uniformly random matrix with every entry drawn from `F_q`.
    pub fn random<R: Rng + ?Sized>(field: PrimeField, rows: usize, cols: usize, rng: &mut R) -> Self {
        let q = field.order();
        FqMatrix {
            field,
            rows,
            cols,
            data: (0..rows * cols).map(|_| rng.gen_range(0..q)).collect(),
        }
    }

    /// Uniformly random matrix conditioned on having rank `rows`, by
    /// rejection sampling.
    pub fn random_full_rank<R: Rng + ?Sized>(
        field: PrimeField,
        rows: usize,
        cols: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if rows > cols {
            return Err(Error::InvalidParams(format!(
                "cannot have rank {rows} with only {cols} columns"
            )));
        }
        loop {
            let m = FqMatrix::random(field, rows, cols, rng);
            if m.rank() == rows {
                return Ok(m);
            }
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        debug_assert!(v < self.field.order());
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub(crate) fn data_mut(&mut self) -> &mut [FieldElement] {
        &mut self.data
    }

    /// `M v` over `F_q`.
    pub fn mul_vec(&self, v: &FqVector) -> Result<FqVector> {
        if self.field != v.field() {
            return Err(Error::ModulusMismatch {
                left: self.field.order(),
                right: v.field().order(),
            });
        }
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                actual: v.len(),
            });
        }
        let q = self.field.order() as u64;
        let out = (0..self.rows)
            .map(|i| {
                let acc = self
                    .row(i)
                    .iter()
                    .zip(v.entries())
                    .fold(0u64, |acc, (&a, &b)| acc + a as u64 * b as u64);
                (acc % q) as FieldElement
            })
            .collect();
        Ok(FqVector::from_raw(self.field, out))
    }

    /// The columns `range` of this matrix as a new matrix.
    pub fn columns(&self, range: std::ops::Range<usize>) -> FqMatrix {
        let cols = range.len();
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(&self.row(i)[range.clone()]);
        }
        FqMatrix {
            field: self.field,
            rows: self.rows,
            cols,
            data,
        }
    }

    /// The rows `range` of this matrix as a new matrix.
    pub fn row_block(&self, range: std::ops::Range<usize>) -> FqMatrix {
        FqMatrix {
            field: self.field,
            rows: range.len(),
            cols: self.cols,
            data: self.data[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }

    /// Rank via full Gaussian elimination on a scratch copy.
    pub fn rank(&self) -> usize {
        let f = self.field;
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            if p != rank {
                for j in 0..cols {
                    m.swap(p * cols + j, rank * cols + j);
                }
            }
            let inv = f.inv(m[rank * cols + c]).expect("nonzero pivot");
            for j in c..cols {
                m[rank * cols + j] = f.mul(m[rank * cols + j], inv);
            }
            for r in rank + 1..rows {
                let factor = m[r * cols + c];
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let t = f.mul(factor, m[rank * cols + j]);
                    m[r * cols + j] = f.sub(m[r * cols + j], t);
                }
            }
            rank += 1;
        }
        rank
    }
}
