//! Exact arithmetic in `Q(ζ_n)` and its ring of integers `Z[ζ_n]`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{φ(n)-1}` with one
//! shared positive denominator. The power basis is an integral basis, so an
//! element is an algebraic integer exactly when its reduced denominator is 1.
//!
//! [`PiSpec`] fixes a uniformizer `π` above a rational prime `p` and provides
//! the `π`-adic valuation and the reduction map to the residue field. Two
//! configurations are supported: `n = p` with `π = ζ - 1`, and `n = 12`,
//! `p = 3` with `ω = ζ^4`, `i = ζ^3`, `π = ω - 1` and residue field
//! `F_3[t]/(t^2 + 1)` (`i ↦ t`). Other conductors work for field arithmetic
//! but have no uniformizer configuration.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::algebra::{FqElement, FqField, Field, Polynomial, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclotomicError {
    #[error("conductor must be at least 2, got {0}")]
    InvalidConductor(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements of Q(zeta_{0}) and Q(zeta_{1}) cannot be combined")]
    ConductorMismatch(u32, u32),
    #[error("element has negative pi-adic valuation {0}")]
    NegativeValuation(i64),
    #[error("no uniformizer configuration for conductor {n} and prime {p}")]
    UnsupportedUniformizer { n: u32, p: u64 },
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    let n_usize = n as usize;
    let mut poly = vec![BigInt::zero(); n_usize + 1];
    poly[0] = BigInt::from(-1);
    poly[n_usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        poly = exact_div_monic(&poly, &cyclotomic_polynomial(d));
    }
    poly
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for k in (dd..num.len()).rev() {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[k - dd + j] -= &c * d;
        }
        quot[k - dd] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

#[derive(Debug)]
struct FieldData {
    n: u32,
    phi: Vec<BigInt>,
}

/// The field `Q(ζ_n)`, cheap to clone.
#[derive(Clone, Debug)]
pub struct CyclotomicField(Arc<FieldData>);

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.0.n == other.0.n
    }
}

impl Eq for CyclotomicField {}

impl CyclotomicField {
    pub fn new(n: u32) -> Result<Self, CyclotomicError> {
        if n < 2 {
            return Err(CyclotomicError::InvalidConductor(n));
        }
        let phi = cyclotomic_polynomial(n);
        Ok(Self(Arc::new(FieldData { n, phi })))
    }

    pub fn conductor(&self) -> u32 {
        self.0.n
    }

    /// `φ(n)`, the length of the power basis.
    pub fn degree(&self) -> usize {
        self.0.phi.len() - 1
    }

    pub fn phi(&self) -> &[BigInt] {
        &self.0.phi
    }

    pub fn zeta(&self) -> CyclotomicElement {
        self.zeta_pow(1)
    }

    pub fn zeta_pow(&self, k: i64) -> CyclotomicElement {
        let e = k.rem_euclid(self.0.n as i64) as usize;
        let mut raw = vec![BigInt::zero(); e + 1];
        raw[e] = BigInt::one();
        self.canonicalize(&raw)
    }

    pub fn integer(&self, k: impl Into<BigInt>) -> CyclotomicElement {
        self.canonicalize(&[k.into()])
    }

    pub fn rational(&self, num: impl Into<BigInt>, den: impl Into<BigInt>) -> Option<CyclotomicElement> {
        self.canonicalize_rational(&[num.into()], den.into())
    }

    /// Unique power-basis representative of `Σ raw[i]·ζ^i`.
    pub fn canonicalize(&self, raw: &[BigInt]) -> CyclotomicElement {
        self.canonicalize_rational(raw, BigInt::one())
            .expect("denominator 1 is nonzero")
    }

    pub fn canonicalize_i64(&self, raw: &[i64]) -> CyclotomicElement {
        let raw: Vec<BigInt> = raw.iter().map(|&c| BigInt::from(c)).collect();
        self.canonicalize(&raw)
    }

    /// `(Σ raw[i]·ζ^i) / den`; `None` if `den = 0`.
    pub fn canonicalize_rational(&self, raw: &[BigInt], den: BigInt) -> Option<CyclotomicElement> {
        if den.is_zero() {
            return None;
        }
        let n = self.0.n as usize;
        let mut folded = vec![BigInt::zero(); raw.len().min(n)];
        for (i, c) in raw.iter().enumerate() {
            folded[i % n] += c;
        }
        let num = self.reduce(folded);
        Some(CyclotomicElement::normalized(self.clone(), num, den))
    }

    /// Remainder modulo `Φ_n`, padded to length `φ(n)`.
    fn reduce(&self, mut coeffs: Vec<BigInt>) -> Vec<BigInt> {
        let phi = &self.0.phi;
        let deg = phi.len() - 1;
        while coeffs.len() > deg {
            let top = coeffs.len() - 1;
            let c = coeffs.pop().expect("nonempty");
            if !c.is_zero() {
                for (j, d) in phi.iter().enumerate().take(deg) {
                    coeffs[top - deg + j] -= &c * d;
                }
            }
        }
        coeffs.resize(deg, BigInt::zero());
        coeffs
    }
}

/// An element of `Q(ζ_n)`: `(Σ num[i]·ζ^i) / den`, with `den > 0` and
/// `gcd(den, content(num)) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclotomicElement {
    field: CyclotomicField,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CyclotomicElement {
    fn normalized(field: CyclotomicField, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if num.iter().all(Zero::is_zero) {
            return Self { field, num, den: BigInt::one() };
        }
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -c.clone());
        }
        let g = num.iter().fold(den.clone(), |g, c| g.gcd(c));
        if !g.is_one() {
            num.iter_mut().for_each(|c| *c /= &g);
            den /= &g;
        }
        Self { field, num, den }
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The integral element `den · self`.
    pub fn numerator(&self) -> Self {
        Self { field: self.field.clone(), num: self.num.clone(), den: BigInt::one() }
    }

    pub fn rational_value(&self) -> Option<BigRational> {
        self.num[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| BigRational::new(self.num[0].clone(), self.den.clone()))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self, CyclotomicError> {
        self.same_field(rhs)?;
        Ok(Ring::add(self, rhs))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, CyclotomicError> {
        self.same_field(rhs)?;
        Ok(Ring::mul(self, rhs))
    }

    pub fn try_inv(&self) -> Result<Self, CyclotomicError> {
        self.inv().ok_or(CyclotomicError::DivisionByZero)
    }

    fn same_field(&self, rhs: &Self) -> Result<(), CyclotomicError> {
        if self.field == rhs.field {
            Ok(())
        } else {
            Err(CyclotomicError::ConductorMismatch(self.conductor(), rhs.conductor()))
        }
    }

    fn as_rational_poly(&self) -> Polynomial<BigRational> {
        let coeffs = self
            .num
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        Polynomial::new((), coeffs).expect("rational coefficients")
    }
}

/// `z / w`, or `None` when `integral` is set and the quotient is not an
/// algebraic integer.
pub fn try_divide_exact(
    z: &CyclotomicElement,
    w: &CyclotomicElement,
    integral: bool,
) -> Result<Option<CyclotomicElement>, CyclotomicError> {
    z.same_field(w)?;
    let q = z.mul(&w.try_inv()?);
    Ok((!integral || q.is_integral()).then_some(q))
}

impl Ring for CyclotomicElement {
    type Ctx = CyclotomicField;

    fn ctx(&self) -> CyclotomicField {
        self.field.clone()
    }
    fn zero(ctx: &CyclotomicField) -> Self {
        ctx.integer(0)
    }
    fn one(ctx: &CyclotomicField) -> Self {
        ctx.integer(1)
    }
    fn from_i64(ctx: &CyclotomicField, n: i64) -> Self {
        ctx.integer(n)
    }
    fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }
    fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.field, rhs.field, "conductor mismatch");
        let num = self
            .num
            .iter()
            .zip(&rhs.num)
            .map(|(a, b)| a * &rhs.den + b * &self.den)
            .collect();
        Self::normalized(self.field.clone(), num, &self.den * &rhs.den)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn neg(&self) -> Self {
        Self {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.field, rhs.field, "conductor mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.field);
        }
        let mut prod = vec![BigInt::zero(); self.num.len() + rhs.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let num = self.field.reduce(prod);
        Self::normalized(self.field.clone(), num, &self.den * &rhs.den)
    }
}

impl Field for CyclotomicElement {
    /// Extended Euclid against `Φ_n` over `Q`.
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let phi = Polynomial::new(
            (),
            self.field
                .phi()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
        .expect("rational coefficients");
        let (g, s, _) = self.as_rational_poly().ext_gcd(&phi).ok()?;
        debug_assert!(g == Polynomial::one(&()));
        let common = s
            .coeffs()
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let num: Vec<BigInt> = (0..self.field.degree())
            .map(|i| {
                let c = s.coeff(i);
                c.numer() * (&common / c.denom()) * &self.den
            })
            .collect();
        Some(Self::normalized(self.field.clone(), num, common))
    }
}

impl fmt::Display for CyclotomicElement {
    /// Polynomial in `z` (standing for `ζ_n`), e.g. `(1 - 2*z^3)/5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "z".to_string(),
                (1, false) => format!("{mag}*z"),
                (_, true) => format!("z^{i}"),
                (_, false) => format!("{mag}*z^{i}"),
            };
            terms.push((c.is_negative(), body));
        }
        let mut s = String::new();
        for (k, (neg, body)) in terms.iter().enumerate() {
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(body);
        }
        if s.is_empty() {
            s.push('0');
        }
        if self.den.is_one() {
            write!(f, "{s}")
        } else if terms.len() > 1 {
            write!(f, "({s})/{}", self.den)
        } else {
            write!(f, "{s}/{}", self.den)
        }
    }
}

/// `π`-adic valuation; `Infinity` only for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

/// A uniformizer `π` above the rational prime `p` in `Z[ζ_n]`, together with
/// the residue field and the image of `ζ_n` in it.
#[derive(Clone, Debug)]
pub struct PiSpec {
    field: CyclotomicField,
    pi: CyclotomicElement,
    pi_inv: CyclotomicElement,
    p: u64,
    e: u32,
    root_of_unity: CyclotomicElement,
    residue_field: FqField,
    zeta_residue: FqElement,
}

impl PiSpec {
    /// `n = p`, `π = ζ_p - 1`, `e = p - 1`, residue field `F_p` with `ζ ↦ 1`.
    pub fn for_prime(p: u64) -> Result<Self, CyclotomicError> {
        let residue_field = FqField::prime(p)
            .map_err(|_| CyclotomicError::UnsupportedUniformizer { n: p as u32, p })?;
        let n = u32::try_from(p).map_err(|_| CyclotomicError::InvalidConductor(u32::MAX))?;
        let field = CyclotomicField::new(n)?;
        let zeta = field.zeta();
        let pi = zeta.sub(&field.integer(1));
        Self::assemble(field, pi, p, n - 1, zeta, residue_field, FqElement::one(&residue_field))
    }

    /// `n = 12`, `p = 3`: `π = ω - 1` with `ω = ζ^4`, `e = 2`, residue field
    /// `F_3[t]/(t^2 + 1)` where `i = ζ^3 ↦ t`, hence `ζ = ω·i^{-1} ↦ -t`.
    pub fn for_p3() -> Result<Self, CyclotomicError> {
        let field = CyclotomicField::new(12)?;
        let omega = field.zeta_pow(4);
        let pi = omega.sub(&field.integer(1));
        let f9 = FqField::f9();
        let zeta_residue = f9.element(0, -1);
        Self::assemble(field, pi, 3, 2, omega, f9, zeta_residue)
    }

    /// The configuration used for the curve at `p`: `for_p3` when `p = 3`.
    pub fn for_curve_prime(p: u64) -> Result<Self, CyclotomicError> {
        if p == 3 {
            Self::for_p3()
        } else {
            Self::for_prime(p)
        }
    }

    fn assemble(
        field: CyclotomicField,
        pi: CyclotomicElement,
        p: u64,
        e: u32,
        root_of_unity: CyclotomicElement,
        residue_field: FqField,
        zeta_residue: FqElement,
    ) -> Result<Self, CyclotomicError> {
        let pi_inv = pi.try_inv()?;
        let spec = Self { field, pi, pi_inv, p, e, root_of_unity, residue_field, zeta_residue };
        // ζ ↦ zeta_residue must be a ring map killing π
        let phi_at_residue = spec
            .field
            .phi()
            .iter()
            .rev()
            .fold(FqElement::zero(&residue_field), |acc, c| {
                acc.mul(&zeta_residue).add(&spec.reduce_integer(c))
            });
        if !phi_at_residue.is_zero() || !spec.residue_integral(&spec.pi).is_zero() {
            return Err(CyclotomicError::UnsupportedUniformizer { n: spec.field.conductor(), p });
        }
        Ok(spec)
    }

    pub fn field(&self) -> &CyclotomicField {
        &self.field
    }

    pub fn pi(&self) -> &CyclotomicElement {
        &self.pi
    }

    pub fn pi_inv(&self) -> &CyclotomicElement {
        &self.pi_inv
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Ramification index, `v_π(p)`.
    pub fn e(&self) -> u32 {
        self.e
    }

    /// The primitive `p`-th root of unity (`ζ_p`, or `ω` for `n = 12`).
    pub fn root_of_unity(&self) -> &CyclotomicElement {
        &self.root_of_unity
    }

    pub fn residue_field(&self) -> FqField {
        self.residue_field
    }

    pub fn zeta_residue(&self) -> FqElement {
        self.zeta_residue
    }

    fn reduce_integer(&self, c: &BigInt) -> FqElement {
        let r = c.mod_floor(&BigInt::from(self.p)).to_i64().expect("residue fits");
        FqElement::from_i64(&self.residue_field, r)
    }

    /// Image of the numerator `Σ num[i]·ζ^i` (ignores the denominator).
    fn residue_integral(&self, z: &CyclotomicElement) -> FqElement {
        z.num
            .iter()
            .rev()
            .fold(FqElement::zero(&self.residue_field), |acc, c| {
                acc.mul(&self.zeta_residue).add(&self.reduce_integer(c))
            })
    }

    /// Exact `π`-adic valuation: clear the denominator, then divide by `π`
    /// until the quotient stops being integral.
    pub fn valuation(&self, z: &CyclotomicElement) -> Valuation {
        assert_eq!(z.field, self.field, "conductor mismatch");
        if z.is_zero() {
            return Valuation::Infinity;
        }
        let mut den = z.den.clone();
        let p = BigInt::from(self.p);
        let mut den_p = 0i64;
        while (&den % &p).is_zero() {
            den /= &p;
            den_p += 1;
        }
        let mut a = z.numerator();
        let mut v = 0i64;
        loop {
            let q = a.mul(&self.pi_inv);
            if !q.is_integral() {
                break;
            }
            a = q;
            v += 1;
        }
        Valuation::Finite(v - self.e as i64 * den_p)
    }

    pub fn is_unit(&self, z: &CyclotomicElement) -> bool {
        self.valuation(z) == Valuation::Finite(0)
    }

    /// Reduction modulo `π` of an element of the valuation ring.
    pub fn residue(&self, z: &CyclotomicElement) -> Result<FqElement, CyclotomicError> {
        if let Valuation::Finite(v) = self.valuation(z) {
            if v < 0 {
                return Err(CyclotomicError::NegativeValuation(v));
            }
        }
        let den = self.reduce_integer(&z.den);
        // v ≥ 0 and (π) is the only prime above p, so p ∤ den
        let den_inv = den.inv().ok_or(CyclotomicError::UnsupportedUniformizer {
            n: self.field.conductor(),
            p: self.p,
        })?;
        Ok(self.residue_integral(z).mul(&den_inv))
    }
}
