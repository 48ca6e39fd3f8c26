//! Elliptic curves `y^2 = x^3 + a2·x^2 + a4·x + a6` over `F_q`, `q` odd.
//!
//! The auxiliary curve of the construction is only checked on its special
//! fibre: a curve over `F_p` with exactly `p` points (trace 1, so ordinary
//! and cyclic of order `p`), and for `p = 3` an ordinary curve over `F_9`
//! carrying a rational point of order 3.

use std::fmt;

use thiserror::Error;

use crate::algebra::{FqElement, FqField, Field, Ring};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllipticError {
    #[error("curve is singular")]
    Singular,
    #[error("coefficients live in different fields")]
    FieldMismatch,
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("point ({0}, {1}) is not on the curve")]
    OffCurve(FqElement, FqElement),
    #[error("no rational point of exact order {0}")]
    NoPointOfOrder(u64),
    #[error("curve search over {0} exhausted")]
    SearchExhausted(FqField),
    #[error("{count} points over F_{q} violates the Hasse bound")]
    HasseViolation { q: u64, count: u64 },
    #[error("search over F_p needs p >= 5, got {0}")]
    NeedsLargePrime(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine(FqElement, FqElement),
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve {
    a2: FqElement,
    a4: FqElement,
    a6: FqElement,
}

impl WeierstrassCurve {
    pub fn new(a2: FqElement, a4: FqElement, a6: FqElement) -> Result<Self, EllipticError> {
        let fld = a2.field();
        if a4.field() != fld || a6.field() != fld {
            return Err(EllipticError::FieldMismatch);
        }
        if fld.characteristic() == 2 {
            return Err(EllipticError::CharacteristicTwo);
        }
        let curve = Self { a2, a4, a6 };
        if curve.cubic_discriminant().is_zero() {
            return Err(EllipticError::Singular);
        }
        Ok(curve)
    }

    /// `y^2 = x^3 + A·x + B`.
    pub fn short(a: FqElement, b: FqElement) -> Result<Self, EllipticError> {
        Self::new(FqElement::zero(&a.field()), a, b)
    }

    pub fn field(&self) -> FqField {
        self.a2.field()
    }

    pub fn coefficients(&self) -> [FqElement; 3] {
        [self.a2, self.a4, self.a6]
    }

    /// Discriminant of `x^3 + a2·x^2 + a4·x + a6`; the curve is smooth iff
    /// it is nonzero (odd characteristic).
    pub fn cubic_discriminant(&self) -> FqElement {
        let fld = self.field();
        let c = |n: i64| FqElement::from_i64(&fld, n);
        let (a, b, d) = (self.a2, self.a4, self.a6);
        let terms = [
            a.pow(2).mul(&b.pow(2)),
            c(-4).mul(&b.pow(3)),
            c(-4).mul(&a.pow(3)).mul(&d),
            c(-27).mul(&d.pow(2)),
            c(18).mul(&a).mul(&b).mul(&d),
        ];
        terms.iter().fold(c(0), |acc, t| acc.add(t))
    }

    pub fn rhs(&self, x: &FqElement) -> FqElement {
        x.mul(x).mul(x).add(&self.a2.mul(x).mul(x)).add(&self.a4.mul(x)).add(&self.a6)
    }

    pub fn contains(&self, pt: &CurvePoint) -> bool {
        match pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine(x, y) => y.mul(y) == self.rhs(x),
        }
    }

    pub fn point(&self, x: FqElement, y: FqElement) -> Result<CurvePoint, EllipticError> {
        let pt = CurvePoint::Affine(x, y);
        if self.contains(&pt) {
            Ok(pt)
        } else {
            Err(EllipticError::OffCurve(x, y))
        }
    }

    /// Number of rational points including infinity: each `x` contributes
    /// the number of square roots of the right-hand side.
    pub fn count_points(&self) -> u64 {
        let fld = self.field();
        let mut roots = vec![0u64; fld.order() as usize];
        for y in fld.elements() {
            roots[y.mul(&y).lift() as usize] += 1;
        }
        1 + fld
            .elements()
            .map(|x| roots[self.rhs(&x).lift() as usize])
            .sum::<u64>()
    }

    /// Trace of Frobenius `q + 1 - #E`.
    pub fn trace(&self) -> i64 {
        self.field().order() as i64 + 1 - self.count_points() as i64
    }

    pub fn is_ordinary(&self) -> bool {
        self.trace().rem_euclid(self.field().characteristic() as i64) != 0
    }

    /// Infinity first, then affine points ordered by `(x, y)` lifts.
    pub fn points(&self) -> Vec<CurvePoint> {
        let fld = self.field();
        let mut pts = vec![CurvePoint::Infinity];
        for x in fld.elements() {
            let r = self.rhs(&x);
            pts.extend(
                fld.elements()
                    .filter(|y| y.mul(y) == r)
                    .map(|y| CurvePoint::Affine(x, y)),
            );
        }
        pts
    }

    pub fn negate(&self, pt: &CurvePoint) -> CurvePoint {
        match pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine(x, y) => CurvePoint::Affine(*x, y.neg()),
        }
    }

    /// Chord-and-tangent addition.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint, EllipticError> {
        for pt in [p, q] {
            if let CurvePoint::Affine(x, y) = pt {
                if !self.contains(pt) {
                    return Err(EllipticError::OffCurve(*x, *y));
                }
            }
        }
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return *q,
            (_, CurvePoint::Infinity) => return *p,
            (CurvePoint::Affine(x1, y1), CurvePoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let fld = self.field();
        let slope = if x1 != x2 {
            y2.sub(y1).mul(&x2.sub(x1).inv().expect("x1 != x2"))
        } else if y1.add(y2).is_zero() {
            return CurvePoint::Infinity;
        } else {
            let three = FqElement::from_i64(&fld, 3);
            let two = FqElement::from_i64(&fld, 2);
            let num = three.mul(x1).mul(x1).add(&two.mul(&self.a2).mul(x1)).add(&self.a4);
            num.mul(&two.mul(y1).inv().expect("y1 != 0"))
        };
        let x3 = slope.mul(&slope).sub(&self.a2).sub(x1).sub(x2);
        let y3 = slope.mul(&x1.sub(&x3)).sub(y1);
        CurvePoint::Affine(x3, y3)
    }

    pub fn scalar_mul(&self, k: u64, pt: &CurvePoint) -> Result<CurvePoint, EllipticError> {
        if let CurvePoint::Affine(x, y) = pt {
            if !self.contains(pt) {
                return Err(EllipticError::OffCurve(*x, *y));
            }
        }
        let (mut acc, mut base, mut k) = (CurvePoint::Infinity, *pt, k);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Smallest `m ≥ 1` with `m·P = O`.
    pub fn order_of(&self, pt: &CurvePoint) -> Result<u64, EllipticError> {
        self.scalar_mul(1, pt)?;
        let mut acc = *pt;
        let mut m = 1;
        while acc != CurvePoint::Infinity {
            acc = self.add_unchecked(&acc, pt);
            m += 1;
        }
        Ok(m)
    }

    pub fn has_exact_order(&self, pt: &CurvePoint, l: u64) -> bool {
        self.order_of(pt).is_ok_and(|m| m == l)
    }

    /// First point (in [`points`](Self::points) order) of exact order `l`.
    pub fn torsion_point_of_exact_order(&self, l: u64) -> Result<CurvePoint, EllipticError> {
        if l <= 1 {
            return Err(EllipticError::NoPointOfOrder(l));
        }
        self.points()
            .into_iter()
            .find(|pt| self.has_exact_order(pt, l))
            .ok_or(EllipticError::NoPointOfOrder(l))
    }

    /// `Q + P ≠ Q` for every rational `Q`.
    pub fn translation_is_fixed_point_free(&self, p: &CurvePoint) -> Result<bool, EllipticError> {
        if *p == CurvePoint::Infinity {
            return Ok(false);
        }
        for q in self.points() {
            if self.add(&q, p)? == q {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y^2 = x^3 + ({})x^2 + ({})x + ({}) over {}",
            self.a2,
            self.a4,
            self.a6,
            self.field()
        )
    }
}

/// Hasse: `|#E - (q + 1)| ≤ 2√q`, checked as `(#E - q - 1)^2 ≤ 4q`.
pub fn within_hasse_bound(q: u64, count: u64) -> bool {
    let t = count as i128 - q as i128 - 1;
    t * t <= 4 * q as i128
}

fn checked_count(curve: &WeierstrassCurve) -> Result<u64, EllipticError> {
    let q = curve.field().order();
    let count = curve.count_points();
    if within_hasse_bound(q, count) {
        Ok(count)
    } else {
        Err(EllipticError::HasseViolation { q, count })
    }
}

/// Lexicographically least short Weierstrass `(A, B)` over `F_p` with exactly
/// `p` rational points.
pub fn find_ordinary_with_trace_one(p: u64) -> Result<WeierstrassCurve, EllipticError> {
    if p < 5 {
        return Err(EllipticError::NeedsLargePrime(p));
    }
    let fld = FqField::prime(p).map_err(|_| EllipticError::NeedsLargePrime(p))?;
    for a in fld.elements() {
        for b in fld.elements() {
            let Ok(curve) = WeierstrassCurve::short(a, b) else {
                continue;
            };
            if checked_count(&curve)? == p {
                return Ok(curve);
            }
        }
    }
    Err(EllipticError::SearchExhausted(fld))
}

#[derive(Clone, Debug, PartialEq)]
pub struct P3Curve {
    pub curve: WeierstrassCurve,
    pub count: u64,
    pub point: CurvePoint,
}

/// Lexicographically least `(a2, a4, a6)` over `F_9` giving an ordinary curve
/// with a rational point of exact order 3.
pub fn find_p3_curve() -> Result<P3Curve, EllipticError> {
    let f9 = FqField::f9();
    for a2 in f9.elements() {
        for a4 in f9.elements() {
            for a6 in f9.elements() {
                let Ok(curve) = WeierstrassCurve::new(a2, a4, a6) else {
                    continue;
                };
                let count = checked_count(&curve)?;
                if count % 3 != 0 || !curve.is_ordinary() {
                    continue;
                }
                let point = curve.torsion_point_of_exact_order(3)?;
                return Ok(P3Curve { curve, count, point });
            }
        }
    }
    Err(EllipticError::SearchExhausted(f9))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> FqField {
        FqField::prime(p).unwrap()
    }

    /// Oracle: test every `(x, y)` pair directly.
    fn brute_count(curve: &WeierstrassCurve) -> u64 {
        let fld = curve.field();
        let mut n = 1;
        for x in fld.elements() {
            for y in fld.elements() {
                if curve.contains(&CurvePoint::Affine(x, y)) {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn small_counts() {
        let f5 = fp(5);
        let c1 = WeierstrassCurve::short(f5.element(-1, 0), f5.element(0, 0)).unwrap();
        assert_eq!(c1.count_points(), 8);
        assert_eq!(brute_count(&c1), 8);
        let c2 = WeierstrassCurve::short(f5.element(0, 0), f5.element(1, 0)).unwrap();
        assert_eq!(c2.count_points(), 6);
        assert_eq!(brute_count(&c2), 6);
        assert_eq!(
            WeierstrassCurve::short(f5.element(0, 0), f5.element(0, 0)),
            Err(EllipticError::Singular)
        );
    }

    #[test]
    fn counts_match_brute_force_and_hasse() {
        for fld in [fp(5), fp(7), FqField::f9()] {
            for a4 in fld.elements() {
                for a6 in fld.elements() {
                    if let Ok(c) = WeierstrassCurve::new(fld.element(1, 0), a4, a6) {
                        let n = c.count_points();
                        assert_eq!(n, brute_count(&c));
                        assert_eq!(n as usize, c.points().len());
                        assert!(within_hasse_bound(fld.order(), n));
                    }
                }
            }
        }
    }

    #[test]
    fn trace_one_curves() {
        for p in [5u64, 7, 11, 13] {
            let c = find_ordinary_with_trace_one(p).unwrap();
            assert_eq!(c.count_points(), p);
            assert_eq!(c.trace(), 1);
            assert!(c.is_ordinary());
            for pt in c.points().iter().skip(1) {
                assert!(c.has_exact_order(pt, p));
            }
        }
        assert_eq!(find_ordinary_with_trace_one(3), Err(EllipticError::NeedsLargePrime(3)));
    }

    #[test]
    fn group_identities() {
        let c = find_ordinary_with_trace_one(7).unwrap();
        let n = c.count_points();
        for pt in c.points() {
            assert_eq!(c.add(&pt, &CurvePoint::Infinity).unwrap(), pt);
            assert_eq!(c.add(&pt, &c.negate(&pt)).unwrap(), CurvePoint::Infinity);
            assert_eq!(c.scalar_mul(n, &pt).unwrap(), CurvePoint::Infinity);
        }
        let pts = c.points();
        for a in &pts {
            for b in &pts {
                for d in &pts {
                    let l = c.add(&c.add(a, b).unwrap(), d).unwrap();
                    let r = c.add(a, &c.add(b, d).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn off_curve_rejected() {
        let f5 = fp(5);
        let c = WeierstrassCurve::short(f5.element(-1, 0), f5.element(0, 0)).unwrap();
        let bad = CurvePoint::Affine(f5.element(1, 0), f5.element(1, 0));
        assert!(matches!(c.add(&bad, &bad), Err(EllipticError::OffCurve(..))));
        assert!(c.point(f5.element(1, 0), f5.element(1, 0)).is_err());
    }

    #[test]
    fn torsion_points() {
        let c = find_ordinary_with_trace_one(5).unwrap();
        let pt = c.torsion_point_of_exact_order(5).unwrap();
        assert_ne!(pt, CurvePoint::Infinity);
        assert_eq!(c.torsion_point_of_exact_order(1), Err(EllipticError::NoPointOfOrder(1)));
        assert!(c.translation_is_fixed_point_free(&pt).unwrap());
        assert!(!c.translation_is_fixed_point_free(&CurvePoint::Infinity).unwrap());
    }

    #[test]
    fn curve_over_f9() {
        let found = find_p3_curve().unwrap();
        let c = found.curve;
        assert_eq!(found.count % 3, 0);
        assert_eq!(found.count, c.count_points());
        assert_ne!(c.trace().rem_euclid(3), 0);
        assert_eq!(c.scalar_mul(3, &found.point).unwrap(), CurvePoint::Infinity);
        assert!(c.has_exact_order(&found.point, 3));
        assert!(c.translation_is_fixed_point_free(&found.point).unwrap());
    }
}
