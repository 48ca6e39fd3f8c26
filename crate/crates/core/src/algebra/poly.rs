use super::{AlgebraError, Field, Ring};

/// Dense univariate polynomial, coefficients lowest degree first.
///
/// The coefficient ring context is stored alongside the coefficients so that
/// the zero polynomial still knows which ring it belongs to.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<R: Ring> {
    ctx: R::Ctx,
    coeffs: Vec<R>,
}

/// Result of a squarefreeness test: the flag and the monic `gcd(f, f')`.
#[derive(Clone, Debug, PartialEq)]
pub struct SquarefreeCheck<R: Ring> {
    pub squarefree: bool,
    pub gcd: Polynomial<R>,
}

impl<R: Ring> Polynomial<R> {
    pub fn new(ctx: R::Ctx, coeffs: Vec<R>) -> Result<Self, AlgebraError> {
        if coeffs.iter().any(|c| c.ctx() != ctx) {
            return Err(AlgebraError::RingMismatch);
        }
        let mut p = Self { ctx, coeffs };
        p.trim();
        Ok(p)
    }

    /// Builds a polynomial from nonempty coefficients, taking the ring from them.
    pub fn from_coeffs(coeffs: Vec<R>) -> Result<Self, AlgebraError> {
        let ctx = coeffs
            .first()
            .map(Ring::ctx)
            .ok_or(AlgebraError::ConstantPolynomial)?;
        Self::new(ctx, coeffs)
    }

    pub fn from_i64s(ctx: &R::Ctx, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| R::from_i64(ctx, c)).collect();
        let mut p = Self { ctx: ctx.clone(), coeffs };
        p.trim();
        p
    }

    pub fn zero(ctx: &R::Ctx) -> Self {
        Self { ctx: ctx.clone(), coeffs: Vec::new() }
    }

    pub fn one(ctx: &R::Ctx) -> Self {
        Self::constant(R::one(ctx))
    }

    pub fn constant(c: R) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: R, degree: usize) -> Self {
        let ctx = c.ctx();
        let mut coeffs = vec![R::zero(&ctx); degree];
        coeffs.push(c);
        let mut p = Self { ctx, coeffs };
        p.trim();
        p
    }

    /// The polynomial `u`.
    pub fn var(ctx: &R::Ctx) -> Self {
        Self::monomial(R::one(ctx), 1)
    }

    /// `a·u + b`.
    pub fn linear(a: R, b: R) -> Result<Self, AlgebraError> {
        Self::from_coeffs(vec![b, a])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Ring::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> &R::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| R::zero(&self.ctx))
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        Self::new(self.ctx.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(Ring::neg).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        let mut coeffs = vec![R::zero(&self.ctx); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        Self::new(self.ctx.clone(), coeffs)
    }

    pub fn scale(&self, c: &R) -> Result<Self, AlgebraError> {
        if c.ctx() != self.ctx {
            return Err(AlgebraError::RingMismatch);
        }
        Self::new(self.ctx.clone(), self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            base = base.mul(&base).expect("same ring");
            exp >>= 1;
        }
        acc
    }

    pub fn eval(&self, x: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(&self.ctx), |acc, c| acc.mul(x).add(c))
    }

    /// `self(g(u))`, by Horner's rule.
    pub fn compose(&self, g: &Self) -> Result<Self, AlgebraError> {
        self.check(g)?;
        let mut acc = Self::zero(&self.ctx);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g)?.add(&Self::constant(c.clone()))?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&R::from_i64(&self.ctx, i as i64)))
            .collect();
        let mut p = Self { ctx: self.ctx.clone(), coeffs };
        p.trim();
        p
    }

    /// `s^k · f(1/s)`, or `None` when `k < deg f` (the result would have
    /// negative powers of `s`).
    pub fn reversed_with_twist(&self, k: usize) -> Option<Self> {
        let d = match self.degree() {
            None => return Some(self.clone()),
            Some(d) => d,
        };
        if k < d {
            return None;
        }
        let mut coeffs = vec![R::zero(&self.ctx); k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[k - i] = c.clone();
        }
        let mut p = Self { ctx: self.ctx.clone(), coeffs };
        p.trim();
        Some(p)
    }

    /// Coefficient-wise image under a ring map.
    pub fn map<S: Ring, E>(
        &self,
        ctx: &S::Ctx,
        mut f: impl FnMut(&R) -> Result<S, E>,
    ) -> Result<Polynomial<S>, E> {
        let coeffs = self.coeffs.iter().map(&mut f).collect::<Result<Vec<_>, E>>()?;
        let mut p = Polynomial { ctx: ctx.clone(), coeffs };
        p.trim();
        Ok(p)
    }
}

impl<F: Field> Polynomial<F> {
    pub fn monic(&self) -> Self {
        match self.leading().and_then(Field::inv) {
            Some(inv) => self.scale(&inv).expect("same ring"),
            None => self.clone(),
        }
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), AlgebraError> {
        self.check(divisor)?;
        let dd = divisor.degree().ok_or(AlgebraError::DivisionByZero)?;
        let lead_inv = divisor
            .leading()
            .and_then(Field::inv)
            .ok_or(AlgebraError::DivisionByZero)?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(&self.ctx); rem.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = rem[top].mul(&lead_inv);
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    let idx = top - dd + j;
                    rem[idx] = rem[idx].sub(&c.mul(d));
                }
                quot[top - dd] = c;
            }
            rem.pop();
        }
        Ok((Self::new(self.ctx.clone(), quot)?, Self::new(self.ctx.clone(), rem)?))
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> Result<(Self, Self, Self), AlgebraError> {
        self.check(other)?;
        let ctx = self.ctx.clone();
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(&ctx), Self::zero(&ctx));
        let (mut t0, mut t1) = (Self::zero(&ctx), Self::one(&ctx));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let s = s0.sub(&q.mul(&s1)?)?;
            let t = t0.sub(&q.mul(&t1)?)?;
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().and_then(Field::inv) {
            Some(inv) => Ok((r0.scale(&inv)?, s0.scale(&inv)?, t0.scale(&inv)?)),
            None => Ok((r0, s0, t0)),
        }
    }

    /// Squarefree iff `gcd(f, f')` is a nonzero constant.
    pub fn squarefree_check(&self) -> Result<SquarefreeCheck<F>, AlgebraError> {
        match self.degree() {
            None | Some(0) => return Err(AlgebraError::ConstantPolynomial),
            _ => {}
        }
        let gcd = self.gcd(&self.derivative())?;
        Ok(SquarefreeCheck { squarefree: gcd.degree() == Some(0), gcd })
    }

    pub fn is_squarefree(&self) -> Result<bool, AlgebraError> {
        Ok(self.squarefree_check()?.squarefree)
    }
}
