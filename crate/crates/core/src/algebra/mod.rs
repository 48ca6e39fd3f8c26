//! Coefficient rings, univariate polynomials, the finite fields `F_p` and
//! `F_{p^2}`, and dense linear algebra modulo a prime.

mod fq;
mod matrix;
mod poly;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use fq::{FqElement, FqField};
pub use matrix::MatrixModP;
pub use poly::{Polynomial, SquarefreeCheck};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operands live in different coefficient rings")]
    RingMismatch,
    #[error("polynomial is constant")]
    ConstantPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("t^2 + {m1}t + {m0} is reducible over F_{p}")]
    ReducibleModulus { p: u64, m0: u64, m1: u64 },
    #[error("unsupported extension degree {0}")]
    UnsupportedDegree(u8),
    #[error("matrix dimension mismatch: expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A commutative ring whose elements carry enough context (conductor, field
/// descriptor, ...) to build constants of the same ring.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    type Ctx: Clone + PartialEq + fmt::Debug;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }
}

pub trait Field: Ring {
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
}

impl Ring for BigRational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        Zero::zero()
    }
    fn one(_: &()) -> Self {
        One::one()
    }
    fn from_i64(_: &(), n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Trial-division primality test; inputs here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}
