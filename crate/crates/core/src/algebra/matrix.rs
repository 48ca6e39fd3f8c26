use super::{is_prime, AlgebraError};

/// Dense row-major matrix over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixModP {
    p: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl MatrixModP {
    pub fn new(p: u64, rows: usize, cols: usize, entries: &[i64]) -> Result<Self, AlgebraError> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(AlgebraError::NotPrime(p));
        }
        if entries.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        let entries = entries
            .iter()
            .map(|&e| e.rem_euclid(p as i64) as u64)
            .collect();
        Ok(Self { p, rows, cols, entries })
    }

    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Result<Self, AlgebraError> {
        let cols = rows.first().map_or(0, Vec::len);
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        Self::new(p, rows.len(), cols, &flat)
    }

    pub fn zero(p: u64, rows: usize, cols: usize) -> Result<Self, AlgebraError> {
        Self::new(p, rows, cols, &vec![0; rows * cols])
    }

    pub fn identity(p: u64, n: usize) -> Result<Self, AlgebraError> {
        let mut m = Self::zero(p, n, n)?;
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    fn inv_mod(&self, a: u64) -> u64 {
        let (mut base, mut exp, mut acc) = (a % self.p, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn row_reduce(&self) -> (Self, Vec<usize>) {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            for c in 0..m.cols {
                m.entries.swap(piv * m.cols + c, row * m.cols + c);
            }
            let inv = m.inv_mod(m.get(row, col));
            for c in 0..m.cols {
                let e = &mut m.entries[row * m.cols + c];
                *e = *e * inv % p;
            }
            for r in 0..m.rows {
                let factor = m.get(r, col);
                if r == row || factor == 0 {
                    continue;
                }
                for c in 0..m.cols {
                    let sub = factor * m.get(row, c) % p;
                    let e = &mut m.entries[r * m.cols + c];
                    *e = (*e + p - sub) % p;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().1.len()
    }

    /// `dim ker` of the map `F_p^cols -> F_p^rows`.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        if (self.rows, self.cols, self.p) != (other.rows, other.cols, other.p) {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.entries.len(),
                got: other.entries.len(),
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a + self.p - b) % self.p)
            .collect();
        Ok(Self { entries, ..*self })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_and_zero() {
        assert_eq!(MatrixModP::identity(5, 3).unwrap().kernel_dim(), 0);
        assert_eq!(MatrixModP::zero(5, 3, 3).unwrap().kernel_dim(), 3);
    }

    #[test]
    fn augmentation_generator_minus_one_mod_5() {
        // generator on {g^i - 1}, i = 1..4, columns are images
        let g = [
            vec![-1, -1, -1, -1],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
        ];
        let shifted: Vec<Vec<i64>> = g
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &e)| e - i64::from(i == j))
                    .collect()
            })
            .collect();
        let m = MatrixModP::from_rows(5, &shifted).unwrap();
        assert_eq!(m.kernel_dim(), 1);
    }

    #[test]
    fn bad_dimensions() {
        assert!(matches!(
            MatrixModP::new(5, 2, 2, &[1, 2, 3]),
            Err(AlgebraError::DimensionMismatch { expected: 4, got: 3 })
        ));
        assert_eq!(MatrixModP::new(4, 1, 1, &[1]), Err(AlgebraError::NotPrime(4)));
    }

    proptest! {
        #[test]
        fn rank_nullity(
            rows in 1usize..6,
            cols in 1usize..6,
            seed in prop::collection::vec(-10i64..10, 36),
        ) {
            let m = MatrixModP::new(5, rows, cols, &seed[..rows * cols]).unwrap();
            prop_assert_eq!(m.kernel_dim() + m.rank(), cols);
            prop_assert!(m.rank() <= rows.min(cols));
        }
    }
}
