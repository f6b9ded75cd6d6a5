use serde::{Deserialize, Serialize};

use super::{FieldElement, PrimeField};
use crate::error::{Error, Result};

/// A dense vector over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FqVector {
    field: PrimeField,
    entries: Vec<FieldElement>,
}

impl FqVector {
    /// Builds a vector from residues, rejecting entries `>= q`.
    pub fn new(field: PrimeField, entries: Vec<FieldElement>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&x| x >= field.order()) {
            return Err(Error::InvalidParams(format!(
                "entry {bad} is not a residue mod {}",
                field.order()
            )));
        }
        Ok(FqVector { field, entries })
    }

    /// Reduces arbitrary integers modulo `q`.
    pub fn from_i64(field: PrimeField, values: &[i64]) -> Self {
        FqVector {
            field,
            entries: values.iter().map(|&v| field.reduce(v)).collect(),
        }
    }

    pub fn zeros(field: PrimeField, len: usize) -> Self {
        FqVector {
            field,
            entries: vec![0; len],
        }
    }

    pub(crate) fn from_raw(field: PrimeField, entries: Vec<FieldElement>) -> Self {
        debug_assert!(entries.iter().all(|&x| x < field.order()));
        FqVector { field, entries }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<FieldElement> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    fn check_compatible(&self, other: &FqVector) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &FqVector) -> Result<FqVector> {
        self.check_compatible(other)?;
        let f = self.field;
        Ok(FqVector::from_raw(
            f,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        ))
    }

    pub fn sub(&self, other: &FqVector) -> Result<FqVector> {
        self.check_compatible(other)?;
        let f = self.field;
        Ok(FqVector::from_raw(
            f,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: FieldElement) -> FqVector {
        let f = self.field;
        FqVector::from_raw(f, self.entries.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Concatenation `(self | other)`.
    pub fn concat(&self, other: &FqVector) -> Result<FqVector> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(FqVector::from_raw(self.field, entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range_entries() {
        let f = PrimeField::new(3).unwrap();
        assert!(FqVector::new(f, vec![0, 1, 3]).is_err());
        assert_eq!(FqVector::from_i64(f, &[-1, 4]).entries(), &[2, 1]);
    }

    #[test]
    fn arithmetic_checks_shape_and_modulus() {
        let f3 = PrimeField::new(3).unwrap();
        let f5 = PrimeField::new(5).unwrap();
        let a = FqVector::from_i64(f3, &[1, 2]);
        assert!(matches!(
            a.add(&FqVector::zeros(f5, 2)),
            Err(Error::ModulusMismatch { .. })
        ));
        assert!(matches!(
            a.add(&FqVector::zeros(f3, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(a.add(&a).unwrap().entries(), &[2, 1]);
        assert!(a.sub(&a).unwrap().is_zero());
    }
}
