use super::{FqMatrix, FqVector};
use crate::error::{Error, Result};

/// Blocks of `S H = [[I, H'], [0, H'']]` together with `S s = (s', s'')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialElimination {
    /// `(n-k-ℓ) × (k+ℓ)`
    pub h_prime: FqMatrix,
    /// `ℓ × (k+ℓ)`
    pub h_second: FqMatrix,
    pub s_prime: FqVector,
    pub s_second: FqVector,
}

/// Row-reduces `H` on its first `rows - ell` columns, carrying the row
/// operations into `s`. `S` itself is never formed.
///
/// Fails with [`Error::SingularTopLeft`] when those columns have rank below
/// `rows - ell`; the caller then picks another column permutation.
pub fn partial_gaussian_elim(h: &FqMatrix, ell: usize, s: &FqVector) -> Result<PartialElimination> {
    let f = h.field();
    if s.field() != f {
        return Err(Error::ModulusMismatch {
            left: f.order(),
            right: s.field().order(),
        });
    }
    let (rows, cols) = (h.rows(), h.cols());
    if s.len() != rows {
        return Err(Error::DimensionMismatch {
            expected: rows,
            actual: s.len(),
        });
    }
    if ell > rows || rows > cols {
        return Err(Error::InvalidParams(format!(
            "need 0 <= ell <= n-k <= n, got ell={ell}, n-k={rows}, n={cols}"
        )));
    }
    let top = rows - ell;
    let mut m = h.clone();
    let mut rhs = s.entries().to_vec();
    let data = m.data_mut();
    for c in 0..top {
        let Some(p) = (c..rows).find(|&r| data[r * cols + c] != 0) else {
            return Err(Error::SingularTopLeft(top));
        };
        if p != c {
            for j in 0..cols {
                data.swap(p * cols + j, c * cols + j);
            }
            rhs.swap(p, c);
        }
        let inv = f.inv(data[c * cols + c]).expect("nonzero pivot");
        for j in c..cols {
            data[c * cols + j] = f.mul(data[c * cols + j], inv);
        }
        rhs[c] = f.mul(rhs[c], inv);
        for r in 0..rows {
            if r == c {
                continue;
            }
            let factor = data[r * cols + c];
            if factor == 0 {
                continue;
            }
            for j in c..cols {
                let t = f.mul(factor, data[c * cols + j]);
                data[r * cols + j] = f.sub(data[r * cols + j], t);
            }
            rhs[r] = f.sub(rhs[r], f.mul(factor, rhs[c]));
        }
    }
    let right = m.columns(top..cols);
    Ok(PartialElimination {
        h_prime: right.row_block(0..top),
        h_second: right.row_block(top..rows),
        s_prime: FqVector::from_raw(f, rhs[..top].to_vec()),
        s_second: FqVector::from_raw(f, rhs[top..].to_vec()),
    })
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::linalg::PrimeField;

    #[test]
    fn systematic_input_with_no_redundancy() {
        let f = PrimeField::new(3).unwrap();
        let h = FqMatrix::from_rows(f, &[vec![1, 0, 2, 1], vec![0, 1, 1, 1]]).unwrap();
        let s = FqVector::from_i64(f, &[2, 1]);
        let pe = partial_gaussian_elim(&h, 0, &s).unwrap();
        assert_eq!(pe.h_prime, h.columns(2..4));
        assert_eq!(pe.h_second.rows(), 0);
        assert!(pe.s_second.is_empty());
        assert_eq!(pe.s_prime, s);
    }

    #[test]
    fn zero_first_column_is_singular() {
        let f = PrimeField::new(3).unwrap();
        let h = FqMatrix::from_rows(f, &[vec![0, 1, 2, 1], vec![0, 2, 1, 1]]).unwrap();
        let s = FqVector::zeros(f, 2);
        assert!(matches!(
            partial_gaussian_elim(&h, 1, &s),
            Err(Error::SingularTopLeft(1))
        ));
    }

    // Every x with H x = s satisfies x' + H'x'' = s' and H''x'' = s''.
    #[test]
    fn blocks_preserve_solution_set() {
        let f = PrimeField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 50 {
            let h = FqMatrix::random_full_rank(f, 4, 7, &mut rng).unwrap();
            let x = FqVector::new(f, (0..7).map(|_| rng.gen_range(0..3)).collect()).unwrap();
            let s = h.mul_vec(&x).unwrap();
            let Ok(pe) = partial_gaussian_elim(&h, 2, &s) else {
                continue;
            };
            assert_eq!((pe.h_prime.rows(), pe.h_prime.cols()), (2, 5));
            assert_eq!((pe.h_second.rows(), pe.h_second.cols()), (2, 5));
            let x1 = FqVector::new(f, x.entries()[..2].to_vec()).unwrap();
            let x2 = FqVector::new(f, x.entries()[2..].to_vec()).unwrap();
            assert_eq!(x1.add(&pe.h_prime.mul_vec(&x2).unwrap()).unwrap(), pe.s_prime);
            assert_eq!(pe.h_second.mul_vec(&x2).unwrap(), pe.s_second);
            checked += 1;
        }
    }
}
