//! The hyperelliptic family `v^2 = f(u)` over `R`, its special fibre, and the
//! affine automorphisms `(u, v) ↦ (αu + β, γv)` acting on it.
//!
//! For `p ≥ 5` the curve over `R = Z_p[ζ_p]` is
//! `v^2 = Σ_{i=0}^{p-1} binom(p, i)/π^i · u^{p-i}` with `π = ζ_p - 1`, which is
//! `((πu + 1)^p - 1)/π^p`. For `p = 3` the base is `Z[ζ_12]` with `π = ω - 1`
//! and `f = g^3 + g`, `g = u^3 + (ω^2 - 1)u^2 - ω^2·u = ((πu + 1)^3 - 1)/π^3`.
//! Both reduce to `v^2 = u^q - u`, `q` the size of the residue field.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{is_prime, AlgebraError, FqElement, FqField, Field, Polynomial, Ring};
use crate::cyclotomic::{try_divide_exact, CyclotomicElement, CyclotomicError, PiSpec, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
    #[error("p = 2 is not supported: no equivariant lift of this construction is known in characteristic 2")]
    CharacteristicTwo,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("operation requires p >= 5, got p = {0}")]
    NeedsLargePrime(u64),
    #[error("uniformizer data (conductor {conductor}, p = {spec_p}) does not match p = {p}")]
    SpecMismatch { p: u64, conductor: u32, spec_p: u64 },
    #[error("coefficient of u^{degree} is not integral")]
    NonIntegral { degree: usize },
    #[error("defining polynomial is not squarefree")]
    NotSquarefree,
    #[error("defining polynomial is constant")]
    Degenerate,
    #[error("map coefficient is not a unit")]
    NotUnit,
    #[error("order exceeds the bound {0}")]
    OrderBoundExceeded(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelLabel {
    GenericR,
    SpecialFibre,
    XyCoordinates,
    SecondChart,
}

/// `v^2 = f(u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperellipticModel<R: Ring> {
    f: Polynomial<R>,
    label: ModelLabel,
}

impl<R: Ring> HyperellipticModel<R> {
    pub fn new(f: Polynomial<R>, label: ModelLabel) -> Result<Self, CurveError> {
        match f.degree() {
            None | Some(0) => Err(CurveError::Degenerate),
            _ => Ok(Self { f, label }),
        }
    }

    pub fn f(&self) -> &Polynomial<R> {
        &self.f
    }

    pub fn label(&self) -> ModelLabel {
        self.label
    }

    pub fn degree(&self) -> usize {
        self.f.degree().expect("nonconstant")
    }

    /// `t^2 = s^{2k}·f(1/s)` for `v = t/s^k`; `None` if that has poles at `s = 0`.
    pub fn second_chart(&self, twist: usize) -> Option<Polynomial<R>> {
        self.f.reversed_with_twist(2 * twist)
    }
}

impl<F: Field> HyperellipticModel<F> {
    /// `floor((deg f - 1)/2)`, defined only for squarefree `f`.
    pub fn genus(&self) -> Result<usize, CurveError> {
        if !self.f.is_squarefree()? {
            return Err(CurveError::NotSquarefree);
        }
        Ok((self.degree() - 1) / 2)
    }

    /// Smoothness of the projective model over a field of odd characteristic:
    /// odd degree (one point at infinity), `f` squarefree, and the second
    /// chart `s^{d+1} f(1/s)` squarefree.
    pub fn is_smooth(&self) -> Result<bool, CurveError> {
        let d = self.degree();
        if d.is_multiple_of(2) || !self.f.is_squarefree()? {
            return Ok(false);
        }
        let chart = self.second_chart(d.div_ceil(2)).expect("twist covers the degree");
        Ok(chart.is_squarefree()?)
    }
}

fn check_prime(p: u64) -> Result<(), CurveError> {
    if p == 2 {
        return Err(CurveError::CharacteristicTwo);
    }
    if !is_prime(p) {
        return Err(CurveError::NotPrime(p));
    }
    Ok(())
}

fn check_spec(p: u64, spec: &PiSpec) -> Result<(), CurveError> {
    let conductor = spec.field().conductor();
    let expected = if p == 3 { 12 } else { p as u32 };
    if spec.p() != p || conductor != expected {
        return Err(CurveError::SpecMismatch { p, conductor, spec_p: spec.p() });
    }
    Ok(())
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `binom(p, i)/π^i`, required to be integral.
pub fn family_coefficient(p: u64, i: u64, spec: &PiSpec) -> Result<CyclotomicElement, CurveError> {
    let field = spec.field();
    let num = field.integer(binomial(p, i));
    try_divide_exact(&num, &spec.pi().pow(i), true)?
        .ok_or(CurveError::NonIntegral { degree: (p - i) as usize })
}

/// The curve over `R` for the prime `p` (`p = 3` uses the `Z[ζ_12]` model).
pub fn family_curve(p: u64, spec: &PiSpec) -> Result<HyperellipticModel<CyclotomicElement>, CurveError> {
    check_prime(p)?;
    check_spec(p, spec)?;
    let field = spec.field();
    let f = if p == 3 {
        let omega = spec.root_of_unity();
        let omega2 = omega.pow(2);
        let one = field.integer(1);
        let g = Polynomial::from_coeffs(vec![
            field.integer(0),
            omega2.neg(),
            omega2.sub(&one),
            one,
        ])?;
        let cube = g.pow(3);
        cube.add(&g)?
    } else {
        let mut coeffs = vec![field.integer(0); p as usize + 1];
        for i in 0..p {
            coeffs[(p - i) as usize] = family_coefficient(p, i, spec)?;
        }
        Polynomial::from_coeffs(coeffs)?
    };
    for (deg, c) in f.coeffs().iter().enumerate() {
        if !c.is_integral() {
            return Err(CurveError::NonIntegral { degree: deg });
        }
    }
    HyperellipticModel::new(f, ModelLabel::GenericR)
}

/// `u^q - u` over the residue field of `spec`.
pub fn special_fibre_target(spec: &PiSpec) -> Polynomial<FqElement> {
    let fld = spec.residue_field();
    let q = fld.order() as usize;
    let mut coeffs = vec![FqElement::zero(&fld); q + 1];
    coeffs[1] = FqElement::from_i64(&fld, -1);
    coeffs[q] = FqElement::one(&fld);
    Polynomial::new(fld, coeffs).expect("single field")
}

/// Coefficient-wise reduction modulo `π`.
pub fn reduce_model(
    model: &HyperellipticModel<CyclotomicElement>,
    spec: &PiSpec,
) -> Result<HyperellipticModel<FqElement>, CurveError> {
    let mut degree = 0;
    let f = model.f().map(&spec.residue_field(), |c| {
        let r = spec.residue(c).map_err(|_| CurveError::NonIntegral { degree });
        degree += 1;
        r
    })?;
    HyperellipticModel::new(f, ModelLabel::SpecialFibre)
}

/// `((πu + 1)^p - 1)/π^p`, the pull-back of `π^p y^2 = x^p - 1` along
/// `x = πu + 1`.
pub fn substituted_xy_model(p: u64, spec: &PiSpec) -> Result<Polynomial<CyclotomicElement>, CurveError> {
    let field = spec.field();
    let x = Polynomial::linear(spec.pi().clone(), field.integer(1))?;
    let xp_minus_one = x.pow(p as u32).sub(&Polynomial::one(field))?;
    Ok(xp_minus_one.scale(&spec.pi_inv().pow(p))?)
}

pub fn substitution_identity_holds(
    f: &Polynomial<CyclotomicElement>,
    p: u64,
    spec: &PiSpec,
) -> Result<bool, CurveError> {
    Ok(*f == substituted_xy_model(p, spec)?)
}

/// The curve equals `((πu + 1)^p - 1)/π^p` exactly (`p ≥ 5`).
pub fn substitution_check(p: u64, spec: &PiSpec) -> Result<bool, CurveError> {
    if p < 5 {
        check_prime(p)?;
        return Err(CurveError::NeedsLargePrime(p));
    }
    let curve = family_curve(p, spec)?;
    substitution_identity_holds(curve.f(), p, spec)
}

/// `(x^3 - 1)^3/π^9 + (x^3 - 1)/π^3` with `x` replaced by `x_sub(u)`.
pub fn p3_generic_rhs(
    x_sub: &Polynomial<CyclotomicElement>,
    spec: &PiSpec,
) -> Result<Polynomial<CyclotomicElement>, CurveError> {
    let field = spec.field();
    let c = x_sub.pow(3).sub(&Polynomial::one(field))?;
    let first = c.pow(3).scale(&spec.pi_inv().pow(9))?;
    let second = c.scale(&spec.pi_inv().pow(3))?;
    Ok(first.add(&second)?)
}

pub fn p3_substitution_holds(
    f: &Polynomial<CyclotomicElement>,
    x_sub: &Polynomial<CyclotomicElement>,
    spec: &PiSpec,
) -> Result<bool, CurveError> {
    Ok(*f == p3_generic_rhs(x_sub, spec)?)
}

/// The `p = 3` curve equals the generic-fibre equation under `x = πu + 1`.
pub fn substitution_check_p3(spec: &PiSpec) -> Result<bool, CurveError> {
    let curve = family_curve(3, spec)?;
    let x = Polynomial::linear(spec.pi().clone(), spec.field().integer(1))?;
    p3_substitution_holds(curve.f(), &x, spec)
}

/// `Σ_{i=0}^{p-1} binom(p, i)/π^i · s^{i+1}`.
pub fn expected_second_chart(p: u64, spec: &PiSpec) -> Result<Polynomial<CyclotomicElement>, CurveError> {
    let field = spec.field();
    let mut coeffs = vec![field.integer(0); p as usize + 1];
    for i in 0..p {
        coeffs[i as usize + 1] = family_coefficient(p, i, spec)?;
    }
    Ok(Polynomial::from_coeffs(coeffs)?)
}

pub fn chart_identity_holds(
    model: &HyperellipticModel<CyclotomicElement>,
    twist: usize,
    p: u64,
    spec: &PiSpec,
) -> Result<bool, CurveError> {
    let expected = expected_second_chart(p, spec)?;
    Ok(model.second_chart(twist).is_some_and(|h| h == expected))
}

/// `s^{p+1}·f(1/s)` is the second-chart polynomial (`p ≥ 5`).
pub fn chart_transition_check(p: u64, spec: &PiSpec) -> Result<bool, CurveError> {
    if p < 5 {
        check_prime(p)?;
        return Err(CurveError::NeedsLargePrime(p));
    }
    let curve = family_curve(p, spec)?;
    chart_identity_holds(&curve, (p as usize).div_ceil(2), p, spec)
}

/// Smooth proper over `R`: integral coefficients, unit leading coefficient,
/// and a smooth odd-degree model on both fibres.
pub fn is_relatively_smooth(
    model: &HyperellipticModel<CyclotomicElement>,
    spec: &PiSpec,
) -> Result<bool, CurveError> {
    for (degree, c) in model.f().coeffs().iter().enumerate() {
        if spec.valuation(c) < Valuation::Finite(0) {
            return Err(CurveError::NonIntegral { degree });
        }
    }
    let lead = model.f().leading().expect("nonconstant");
    if !spec.is_unit(lead) {
        return Ok(false);
    }
    let special = reduce_model(model, spec)?;
    Ok(model.is_smooth()? && special.is_smooth()?)
}

/// `(u, v) ↦ (αu + β, γv)` with `α, γ` invertible.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineCurveMap<F: Field> {
    alpha: F,
    beta: F,
    gamma: F,
}

impl<F: Field> AffineCurveMap<F> {
    pub fn new(alpha: F, beta: F, gamma: F) -> Result<Self, CurveError> {
        let ctx = alpha.ctx();
        if beta.ctx() != ctx || gamma.ctx() != ctx {
            return Err(AlgebraError::RingMismatch.into());
        }
        if alpha.is_zero() || gamma.is_zero() {
            return Err(CurveError::NotUnit);
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn from_i64s(ctx: &F::Ctx, alpha: i64, beta: i64, gamma: i64) -> Result<Self, CurveError> {
        Self::new(F::from_i64(ctx, alpha), F::from_i64(ctx, beta), F::from_i64(ctx, gamma))
    }

    pub fn identity(ctx: &F::Ctx) -> Self {
        Self { alpha: F::one(ctx), beta: F::zero(ctx), gamma: F::one(ctx) }
    }

    pub fn alpha(&self) -> &F {
        &self.alpha
    }

    pub fn beta(&self) -> &F {
        &self.beta
    }

    pub fn gamma(&self) -> &F {
        &self.gamma
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.alpha.ctx())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        Self {
            alpha: self.alpha.mul(&inner.alpha),
            beta: self.alpha.mul(&inner.beta).add(&self.beta),
            gamma: self.gamma.mul(&inner.gamma),
        }
    }

    pub fn inverse(&self) -> Self {
        let alpha = self.alpha.inv().expect("alpha is a unit");
        Self {
            beta: self.beta.mul(&alpha).neg(),
            gamma: self.gamma.inv().expect("gamma is a unit"),
            alpha,
        }
    }

    /// `self^k` by repeated composition.
    pub fn pow(&self, k: u64) -> Self {
        (0..k).fold(Self::identity(&self.alpha.ctx()), |acc, _| acc.compose(self))
    }

    pub fn order(&self, bound: u64) -> Result<u64, CurveError> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Ok(k);
            }
            acc = acc.compose(self);
        }
        Err(CurveError::OrderBoundExceeded(bound))
    }

    pub fn u_image(&self) -> Polynomial<F> {
        Polynomial::linear(self.alpha.clone(), self.beta.clone()).expect("same ring")
    }

    /// `γ^2·f(u) = f(αu + β)`.
    pub fn preserves(&self, model: &HyperellipticModel<F>) -> Result<bool, CurveError> {
        let lhs = model.f().scale(&self.gamma.pow(2))?;
        let rhs = model.f().compose(&self.u_image())?;
        Ok(lhs == rhs)
    }

    pub fn apply(&self, u: &F, v: &F) -> (F, F) {
        (self.alpha.mul(u).add(&self.beta), self.gamma.mul(v))
    }
}

impl AffineCurveMap<CyclotomicElement> {
    /// Over `R`: `α, γ` have valuation zero and `β` is integral.
    pub fn has_integral_units(&self, spec: &PiSpec) -> bool {
        spec.is_unit(&self.alpha)
            && spec.is_unit(&self.gamma)
            && spec.valuation(&self.beta) >= Valuation::Finite(0)
    }

    pub fn reduce(&self, spec: &PiSpec) -> Result<AffineCurveMap<FqElement>, CurveError> {
        AffineCurveMap::new(
            spec.residue(&self.alpha)?,
            spec.residue(&self.beta)?,
            spec.residue(&self.gamma)?,
        )
    }
}

/// `σ(u) = ζ·u + 1`, `σ(v) = v` over `R` (`ζ = ω` for `p = 3`).
pub fn sigma_generic(spec: &PiSpec) -> AffineCurveMap<CyclotomicElement> {
    let field = spec.field();
    AffineCurveMap::new(spec.root_of_unity().clone(), field.integer(1), field.integer(1))
        .expect("ζ is a unit")
}

/// `σ(u) = u + 1`, `σ(v) = v` on the special fibre.
pub fn sigma_special(field: &FqField) -> AffineCurveMap<FqElement> {
    AffineCurveMap::from_i64s(field, 1, 1, 1).expect("units")
}

/// The conjugating automorphism of `v^2 = u^q - u`: `(4u, 2v)` for `p ≥ 5`,
/// and `(2u, i·v)` with `i^2 = 2` in `F_9` for `p = 3`.
pub fn tau_special(field: &FqField) -> Result<AffineCurveMap<FqElement>, CurveError> {
    let p = field.characteristic();
    check_prime(p)?;
    if p == 3 {
        let two = FqElement::from_i64(field, 2);
        let root = two.sqrt().ok_or(CurveError::NotUnit)?;
        AffineCurveMap::new(two, FqElement::zero(field), root)
    } else {
        AffineCurveMap::from_i64s(field, 4, 0, 2)
    }
}

/// `τ∘σ∘τ^{-1} = σ^k`: 4 for `p ≥ 5`, 2 for `p = 3`.
pub fn conjugation_exponent(p: u64) -> u64 {
    if p == 3 {
        2
    } else {
        4
    }
}

pub fn conjugacy_check<F: Field>(tau: &AffineCurveMap<F>, sigma: &AffineCurveMap<F>, k: u64) -> bool {
    tau.compose(sigma).compose(&tau.inverse()) == sigma.pow(k)
}

/// `σ` in the `x = πu + 1` coordinate of the generic fibre.
pub fn xy_form(
    map: &AffineCurveMap<CyclotomicElement>,
    spec: &PiSpec,
) -> Result<AffineCurveMap<CyclotomicElement>, CurveError> {
    let field = spec.field();
    let to_x = AffineCurveMap::new(spec.pi().clone(), field.integer(1), field.integer(1))?;
    Ok(to_x.compose(map).compose(&to_x.inverse()))
}

/// Affine rational points of `v^2 = f(u)`, in lift order.
pub fn rational_points(model: &HyperellipticModel<FqElement>) -> Vec<(FqElement, FqElement)> {
    let fld = *model.f().ctx();
    let mut pts = Vec::new();
    for u in fld.elements() {
        let rhs = model.f().eval(&u);
        for v in fld.elements() {
            if v.mul(&v) == rhs {
                pts.push((u, v));
            }
        }
    }
    pts
}

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPoints {
    pub affine: Vec<(FqElement, FqElement)>,
    pub infinity_fixed: bool,
}

/// Fixed points of `map` on the smooth projective model. An odd-degree model
/// has a single point at infinity, which every map of this shape fixes.
pub fn affine_fixed_points(
    map: &AffineCurveMap<FqElement>,
    model: &HyperellipticModel<FqElement>,
) -> FixedPoints {
    let affine = rational_points(model)
        .into_iter()
        .filter(|(u, v)| map.apply(u, v) == (*u, *v))
        .collect();
    FixedPoints { affine, infinity_fixed: model.degree() % 2 == 1 }
}
