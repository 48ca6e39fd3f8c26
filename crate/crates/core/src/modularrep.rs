//! First homology of the curve as the augmentation ideal `I ⊂ Z[Z/p]`, and
//! the de Rham numbers it forces on the two fibres of the quotient.
//!
//! Rationally `I ⊗ Q` is the sum of the nontrivial characters, so it has no
//! invariants. Modulo `p`, `F_p[Z/p] = F_p[g]/(g - 1)^p` is uniserial and the
//! invariants of `I ⊗ F_p` are spanned by the norm element, so they are
//! one-dimensional. Each curve factor contributes those invariants to `h^1`
//! and the elliptic factor contributes 2.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{is_prime, AlgebraError, MatrixModP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularRepError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The generator `g` acting on the basis `{g^i - 1 : i = 1..p-1}` of `I`;
/// column `j` holds the image of the `j`-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentationModule {
    p: u64,
    matrix: Vec<Vec<i64>>,
}

pub fn build_augmentation(p: u64) -> Result<AugmentationModule, ModularRepError> {
    if !is_prime(p) {
        return Err(ModularRepError::NotPrime(p));
    }
    let n = p as usize - 1;
    let mut matrix = vec![vec![0i64; n]; n];
    for j in 0..n {
        // g·(g^{j+1} - 1) = (g^{j+2} - 1) - (g - 1), and g^p = 1
        matrix[0][j] -= 1;
        if j + 1 < n {
            matrix[j + 1][j] += 1;
        }
    }
    Ok(AugmentationModule { p, matrix })
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for (k, brow) in b.iter().enumerate() {
            let aik = a[i][k];
            if aik == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] += aik * brow[j];
            }
        }
    }
    out
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

impl AugmentationModule {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn generator_matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn matrix_power(&self, k: u64) -> Vec<Vec<i64>> {
        (0..k).fold(identity(self.rank()), |acc, _| mat_mul(&acc, &self.matrix))
    }

    /// `Σ_{k=0}^{p-1} g^k` acting on `I`.
    pub fn norm_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut sum = vec![vec![0i64; n]; n];
        let mut power = identity(n);
        for _ in 0..self.p {
            for (srow, prow) in sum.iter_mut().zip(&power) {
                for (s, x) in srow.iter_mut().zip(prow) {
                    *s += x;
                }
            }
            power = mat_mul(&power, &self.matrix);
        }
        sum
    }

    fn generator_minus_identity(&self) -> Vec<Vec<i64>> {
        self.matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, &e)| e - i64::from(i == j))
                    .collect()
            })
            .collect()
    }

    /// `dim_Q ker(g - 1)`.
    pub fn invariant_dim_rational(&self) -> usize {
        let m = self.generator_minus_identity();
        self.rank() - rational_rank(&m)
    }

    /// `dim_{F_p} ker(g - 1)`.
    pub fn invariant_dim_mod_p(&self) -> Result<usize, ModularRepError> {
        let m = MatrixModP::from_rows(self.p, &self.generator_minus_identity())?;
        Ok(m.kernel_dim())
    }
}

/// Rank over `Q` by exact Gaussian elimination.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&e| BigRational::from_integer(BigInt::from(e))).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = BigRational::one() / &m[rank][col];
        let pivot_row: Vec<BigRational> = m[rank].iter().map(|x| x * &inv).collect();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &factor * y;
            }
        }
        m[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// De Rham `h^1` of the two fibres and the `p`-torsion it forces in `H^2_crys`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct H1Report {
    pub h1_special: usize,
    pub h1_generic: usize,
    pub torsion_dim: usize,
}

pub fn h1_dr_report(p: u64) -> Result<H1Report, ModularRepError> {
    let module = build_augmentation(p)?;
    let h1_special = 2 * module.invariant_dim_mod_p()? + 2;
    let h1_generic = 2 * module.invariant_dim_rational() + 2;
    Ok(H1Report { h1_special, h1_generic, torsion_dim: h1_special - h1_generic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::primes_between;

    /// Oracle: multiply group-ring elements of `Z[Z/p]` directly.
    fn group_ring_image(p: usize, i: usize) -> Vec<i64> {
        // g · (g^i - 1) as coefficients on g^0..g^{p-1}
        let mut elt = vec![0i64; p];
        elt[(i + 1) % p] += 1;
        elt[1] -= 1;
        // express in the basis g^k - 1, k = 1..p-1 (augmentation is 0)
        elt[1..].to_vec()
    }

    #[test]
    fn p3_matrix() {
        let m = build_augmentation(3).unwrap();
        assert_eq!(m.generator_matrix(), &[vec![-1, -1], vec![1, 0]]);
        for p in [3usize, 5, 7] {
            let m = build_augmentation(p as u64).unwrap();
            for j in 0..p - 1 {
                let col: Vec<i64> = m.generator_matrix().iter().map(|r| r[j]).collect();
                assert_eq!(col, group_ring_image(p, j + 1));
            }
        }
    }

    #[test]
    fn order_and_norm() {
        for p in primes_between(3, 13) {
            let m = build_augmentation(p).unwrap();
            assert_eq!(m.matrix_power(p), identity(p as usize - 1));
            assert_ne!(m.matrix_power(1), identity(p as usize - 1));
            assert!(m.norm_matrix().iter().flatten().all(|&e| e == 0));
            assert_eq!(rational_rank(m.generator_matrix()), p as usize - 1);
        }
    }

    #[test]
    fn invariant_dimensions() {
        for p in [3u64, 5, 13] {
            let m = build_augmentation(p).unwrap();
            assert_eq!(m.invariant_dim_rational(), 0);
            assert_eq!(m.invariant_dim_mod_p().unwrap(), 1);
        }
        assert_eq!(rational_rank(&vec![vec![0; 3]; 3]), 0);
        assert_eq!(3 - rational_rank(&vec![vec![0; 3]; 3]), 3);
        assert_eq!(build_augmentation(4), Err(ModularRepError::NotPrime(4)));
    }

    #[test]
    fn de_rham_numbers() {
        for p in primes_between(3, 50) {
            let r = h1_dr_report(p).unwrap();
            assert_eq!((r.h1_special, r.h1_generic, r.torsion_dim), (4, 2, 2), "p = {p}");
        }
    }
}
