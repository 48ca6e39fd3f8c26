use std::cmp::Ordering;
use std::fmt;

use super::{is_prime, AlgebraError, Field, Ring};

/// `F_p` (`k = 1`) or `F_p[t]/(t^2 + m1·t + m0)` (`k = 2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FqField {
    p: u64,
    k: u8,
    m0: u64,
    m1: u64,
}

impl FqField {
    pub fn prime(p: u64) -> Result<Self, AlgebraError> {
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Self { p, k: 1, m0: 0, m1: 0 })
    }

    /// Quadratic extension with modulus `t^2 + m1·t + m0`, rejected unless
    /// the modulus has no root in `F_p`.
    pub fn quadratic(p: u64, m0: u64, m1: u64) -> Result<Self, AlgebraError> {
        let base = Self::prime(p)?;
        let (m0, m1) = (m0 % p, m1 % p);
        let has_root = (0..p).any(|x| (x * x % p + m1 * x + m0).is_multiple_of(p));
        if has_root {
            return Err(AlgebraError::ReducibleModulus { p, m0, m1 });
        }
        Ok(Self { k: 2, m0, m1, ..base })
    }

    /// `F_9 = F_3[t]/(t^2 + 1)`, so that `t` plays the role of `i`.
    pub fn f9() -> Self {
        Self::quadratic(3, 1, 0).expect("t^2 + 1 is irreducible over F_3")
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u8 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.k as u32)
    }

    pub fn element(&self, c0: i64, c1: i64) -> FqElement {
        let c1 = if self.k == 1 { 0 } else { self.reduce(c1) };
        FqElement { field: *self, c: [self.reduce(c0), c1] }
    }

    /// The generator `t` of a quadratic extension.
    pub fn gen(&self) -> Option<FqElement> {
        (self.k == 2).then(|| self.element(0, 1))
    }

    /// The element whose lift `c0 + p·c1` equals `idx`.
    pub fn from_lift(&self, idx: u64) -> FqElement {
        FqElement { field: *self, c: [idx % self.p, (idx / self.p) % self.p] }
    }

    /// All elements in increasing lift order.
    pub fn elements(&self) -> impl Iterator<Item = FqElement> + '_ {
        (0..self.order()).map(move |i| self.from_lift(i))
    }

    fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    fn mulmod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
}

impl fmt::Display for FqField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}[t]/(t^2 + {}t + {})", self.p, self.m1, self.m0)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FqElement {
    field: FqField,
    c: [u64; 2],
}

impl FqElement {
    pub fn field(&self) -> FqField {
        self.field
    }

    pub fn coords(&self) -> [u64; 2] {
        self.c
    }

    /// `c0 + p·c1`; the canonical ordering key.
    pub fn lift(&self) -> u64 {
        self.c[0] + self.field.p * self.c[1]
    }

    /// A square root found by exhaustive search, preferring the smaller lift.
    pub fn sqrt(&self) -> Option<FqElement> {
        self.field.elements().find(|x| x.mul(x) == *self)
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }
}

impl PartialOrd for FqElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FqElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lift().cmp(&other.lift())
    }
}

impl fmt::Display for FqElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.field.k, self.c) {
            (1, [a, _]) | (_, [a, 0]) => write!(f, "{a}"),
            (_, [0, 1]) => write!(f, "t"),
            (_, [0, b]) => write!(f, "{b}t"),
            (_, [a, 1]) => write!(f, "{a}+t"),
            (_, [a, b]) => write!(f, "{a}+{b}t"),
        }
    }
}

impl Ring for FqElement {
    type Ctx = FqField;

    fn ctx(&self) -> FqField {
        self.field
    }
    fn zero(ctx: &FqField) -> Self {
        ctx.element(0, 0)
    }
    fn one(ctx: &FqField) -> Self {
        ctx.element(1, 0)
    }
    fn from_i64(ctx: &FqField, n: i64) -> Self {
        ctx.element(n, 0)
    }
    fn is_zero(&self) -> bool {
        self.c == [0, 0]
    }
    fn add(&self, rhs: &Self) -> Self {
        let p = self.field.p;
        Self {
            field: self.field,
            c: [(self.c[0] + rhs.c[0]) % p, (self.c[1] + rhs.c[1]) % p],
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn neg(&self) -> Self {
        let p = self.field.p;
        Self { field: self.field, c: [(p - self.c[0]) % p, (p - self.c[1]) % p] }
    }
    fn mul(&self, rhs: &Self) -> Self {
        let fld = &self.field;
        let p = fld.p;
        let [a0, a1] = self.c;
        let [b0, b1] = rhs.c;
        let c0 = fld.mulmod(a0, b0);
        if fld.k == 1 {
            return Self { field: *fld, c: [c0, 0] };
        }
        let c1 = (fld.mulmod(a0, b1) + fld.mulmod(a1, b0)) % p;
        // t^2 = -m1·t - m0
        let top = fld.mulmod(a1, b1);
        let c0 = (c0 + p - fld.mulmod(top, fld.m0)) % p;
        let c1 = (c1 + p - fld.mulmod(top, fld.m1)) % p;
        Self { field: *fld, c: [c0, c1] }
    }
}

impl Field for FqElement {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Ring::pow(self, self.field.order() - 2))
        }
    }
}
