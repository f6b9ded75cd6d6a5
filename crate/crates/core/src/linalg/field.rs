use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A residue in `[0, q)`. The modulus is carried by the enclosing
/// [`PrimeField`], vector or matrix rather than by each element.
pub type FieldElement = u16;

/// The prime field `F_q`, `q < 2^16`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct PrimeField {
    q: u16,
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self> {
        if q >= 1 << 16 || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(PrimeField { q: q as u16 })
    }

    #[inline]
    pub fn order(self) -> u16 {
        self.q
    }

    /// Reduces any signed integer into `[0, q)`.
    #[inline]
    pub fn reduce(self, v: i64) -> FieldElement {
        v.rem_euclid(self.q as i64) as FieldElement
    }

    #[inline]
    pub fn add(self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a as u32 + b as u32;
        let q = self.q as u32;
        (if s >= q { s - q } else { s }) as FieldElement
    }

    #[inline]
    pub fn sub(self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a >= b {
            a - b
        } else {
            (a as u32 + self.q as u32 - b as u32) as FieldElement
        }
    }

    #[inline]
    pub fn neg(self, a: FieldElement) -> FieldElement {
        if a == 0 {
            0
        } else {
            self.q - a
        }
    }

    #[inline]
    pub fn mul(self, a: FieldElement, b: FieldElement) -> FieldElement {
        ((a as u32 * b as u32) % self.q as u32) as FieldElement
    }

    pub fn pow(self, mut base: FieldElement, mut exp: u32) -> FieldElement {
        let mut acc: FieldElement = 1 % self.q;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(self, a: FieldElement) -> Option<FieldElement> {
        if a % self.q == 0 {
            None
        } else {
            Some(self.pow(a, self.q as u32 - 2))
        }
    }
}

impl TryFrom<u32> for PrimeField {
    type Error = Error;

    fn try_from(q: u32) -> Result<Self> {
        PrimeField::new(q)
    }
}

impl From<PrimeField> for u32 {
    fn from(f: PrimeField) -> u32 {
        f.q as u32
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites() {
        for q in [0, 1, 4, 9, 15, 65536, 70001] {
            assert!(PrimeField::new(q).is_err(), "{q}");
        }
        for q in [2, 3, 5, 13, 331, 65521] {
            assert!(PrimeField::new(q).is_ok(), "{q}");
        }
    }

    #[test]
    fn inverses() {
        for q in [2u32, 3, 5, 7, 331] {
            let f = PrimeField::new(q).unwrap();
            assert_eq!(f.inv(0), None);
            for a in 1..q as u16 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn add_sub_neg_agree_with_integers() {
        let f = PrimeField::new(65521).unwrap();
        for (a, b) in [(0u16, 0u16), (65520, 65520), (1, 65520), (40000, 30000)] {
            assert_eq!(f.add(a, b) as i64, (a as i64 + b as i64) % 65521);
            assert_eq!(f.sub(a, b) as i64, (a as i64 - b as i64).rem_euclid(65521));
            assert_eq!(f.add(a, f.neg(a)), 0);
        }
    }
}
