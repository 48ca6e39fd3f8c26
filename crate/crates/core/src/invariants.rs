//! Character bookkeeping for invariant holomorphic 3-forms on `C × C × E`.
//!
//! With `σ(x) = ζ^a·x` and `σ(y) = y`, the form `x^{k-1} dx/y` is an
//! eigenvector of weight `a·k mod p`. A product form
//! `ω_1 ∧ ω_2 ∧ ω_E` is invariant under the diagonal generator
//! `(σ^{a1}, σ^{a2}, τ_P)` iff `a1·w1 + a2·w2 ≡ 0 (mod p)`; the translation
//! `τ_P` acts trivially on the invariant differential of `E`, so the third
//! factor always has weight 0.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("multiplier {0} is divisible by p = {1}")]
    DegenerateMultiplier(u64, u64),
    #[error("weight multisets have moduli {0} and {1}")]
    ModulusMismatch(u64, u64),
    #[error("{factors} factors but {exponents} exponents")]
    LengthMismatch { factors: usize, exponents: usize },
    #[error("p = 2 is not supported: no equivariant lift of this construction is known in characteristic 2")]
    CharacteristicTwo,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the witness form needs p >= 5, got p = {0}")]
    WitnessNeedsLargePrime(u64),
    #[error("series needs an upper bound of at least 5, got {0}")]
    SeriesTooShort(u64),
    #[error("enumeration gives h_Y = {enumerated} at p = {p} but the closed form gives {closed_form}")]
    OracleDisagreement { p: u64, enumerated: usize, closed_form: usize },
}

/// Character exponents of a basis of global 1-forms, one per basis element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightMultiset {
    p: u64,
    weights: Vec<u64>,
}

impl WeightMultiset {
    pub fn new(p: u64, weights: impl IntoIterator<Item = u64>) -> Self {
        Self { p, weights: weights.into_iter().map(|w| w % p).collect() }
    }

    /// The invariant differential of the elliptic factor.
    pub fn elliptic(p: u64) -> Self {
        Self::new(p, [0])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Multiplicity of each residue.
    pub fn histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.p as usize];
        for &w in &self.weights {
            h[w as usize] += 1;
        }
        h
    }

    /// Sorted copy, for multiset comparison.
    pub fn sorted(&self) -> Vec<u64> {
        let mut w = self.weights.clone();
        w.sort_unstable();
        w
    }
}

/// Weights of `dx/y, x dx/y, …, x^{g-1} dx/y` under `σ(x) = ζ^a x`.
pub fn form_weights(p: u64, multiplier: u64, genus: usize) -> Result<WeightMultiset, InvariantsError> {
    if multiplier.is_multiple_of(p) {
        return Err(InvariantsError::DegenerateMultiplier(multiplier, p));
    }
    Ok(WeightMultiset::new(p, (1..=genus as u64).map(|k| multiplier % p * k % p)))
}

/// Generator of a diagonal cyclic action on `C × C × E`: it acts on factor
/// `j` through `σ^{a_j}` (the third exponent indexes `τ_P`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalAction {
    pub p: u64,
    pub exponents: [u64; 3],
}

impl DiagonalAction {
    pub fn new(p: u64, exponents: [u64; 3]) -> Self {
        Self { p, exponents: exponents.map(|a| a % p) }
    }

    /// `(σ, σ, τ_P)`.
    pub fn for_x(p: u64) -> Self {
        Self::new(p, [1, 1, 1])
    }

    /// `(σ, σ^4, τ_P)`, or `(σ, σ^2, τ_P)` when `p = 3`.
    pub fn for_y(p: u64) -> Self {
        let k = if p == 3 { 2 } else { 4 };
        Self::new(p, [1, k, 1])
    }
}

/// Invariant pairs `(w1, w2)` (with multiplicity) of `H^{3,0}(C × C × E)`.
pub fn kunneth30_invariant_pairs(
    w1: &WeightMultiset,
    w2: &WeightMultiset,
    action: &DiagonalAction,
) -> Result<Vec<(u64, u64)>, InvariantsError> {
    if w1.p != w2.p || w1.p != action.p {
        let other = if w1.p != w2.p { w2.p } else { action.p };
        return Err(InvariantsError::ModulusMismatch(w1.p, other));
    }
    let p = action.p;
    let [a1, a2, _] = action.exponents;
    let mut pairs = Vec::new();
    for &x in &w1.weights {
        for &y in &w2.weights {
            // elliptic factor: weight 0
            if (a1 * x + a2 * y) % p == 0 {
                pairs.push((x, y));
            }
        }
    }
    Ok(pairs)
}

pub fn kunneth30_invariant_dim(
    w1: &WeightMultiset,
    w2: &WeightMultiset,
    action: &DiagonalAction,
) -> Result<usize, InvariantsError> {
    Ok(kunneth30_invariant_pairs(w1, w2, action)?.len())
}

/// Number of tuples `(w_i)` with `Σ a_i·w_i ≡ 0 (mod p)`, by convolving
/// weight histograms.
pub fn general_invariant_dim(
    factors: &[WeightMultiset],
    exponents: &[u64],
    p: u64,
) -> Result<usize, InvariantsError> {
    if factors.len() != exponents.len() {
        return Err(InvariantsError::LengthMismatch {
            factors: factors.len(),
            exponents: exponents.len(),
        });
    }
    let n = p as usize;
    let mut dist = vec![0usize; n];
    dist[0] = 1;
    for (w, &a) in factors.iter().zip(exponents) {
        if w.p != p {
            return Err(InvariantsError::ModulusMismatch(p, w.p));
        }
        let mut scaled = vec![0usize; n];
        for (r, &m) in w.histogram().iter().enumerate() {
            scaled[(a % p) as usize * r % n] += m;
        }
        let mut next = vec![0usize; n];
        for (s, &x) in dist.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (r, &y) in scaled.iter().enumerate() {
                next[(s + r) % n] += x * y;
            }
        }
        dist = next;
    }
    Ok(dist[0])
}

fn check_prime(p: u64) -> Result<(), InvariantsError> {
    if p == 2 {
        return Err(InvariantsError::CharacteristicTwo);
    }
    if !is_prime(p) {
        return Err(InvariantsError::NotPrime(p));
    }
    Ok(())
}

/// Genus of the curve at `p`: `(p - 1)/2`, or 4 for the degree-9 model at `p = 3`.
pub fn curve_genus(p: u64) -> usize {
    if p == 3 {
        4
    } else {
        (p as usize - 1) / 2
    }
}

/// `x·dx/y` has weight 2 and `x^{(p-3)/2}·dx/y` weight `(p-1)/2`; under
/// `(σ, σ^4, τ_P)` their wedge with the elliptic form is invariant iff
/// `2 + 4·(p-1)/2 ≡ 0 (mod p)`. Both forms must be holomorphic, i.e. have
/// exponent at most `g - 1`.
pub fn witness_check(p: u64) -> Result<bool, InvariantsError> {
    check_prime(p)?;
    if p < 5 {
        return Err(InvariantsError::WitnessNeedsLargePrime(p));
    }
    let g = curve_genus(p) as u64;
    let (e1, e2) = (1u64, (p - 3) / 2);
    if e1 > g - 1 || e2 > g - 1 {
        return Ok(false);
    }
    let (w1, w2) = ((e1 + 1) % p, (e2 + 1) % p);
    Ok((w1 + 4 * w2) % p == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgePair {
    pub h_x: usize,
    pub h_y: usize,
}

/// `(h^{3,0}(X), h^{3,0}(Y))` from the invariant counts.
pub fn hodge30_pair(p: u64) -> Result<HodgePair, InvariantsError> {
    check_prime(p)?;
    let weights = form_weights(p, 1, curve_genus(p))?;
    let h_x = kunneth30_invariant_dim(&weights, &weights, &DiagonalAction::for_x(p))?;
    let h_y = kunneth30_invariant_dim(&weights, &weights, &DiagonalAction::for_y(p))?;
    Ok(HodgePair { h_x, h_y })
}

/// Closed form for `h^{3,0}(Y)`, `p ≥ 5`: the number of `j ∈ [1, (p-1)/2]`
/// with `-4j mod p ∈ [1, (p-1)/2]`, i.e. `4j mod p ∈ [(p+1)/2, p-1]`.
pub fn closed_form_h_y(p: u64) -> usize {
    let count = |lo: u64, hi: u64| if hi >= lo { (hi - lo + 1) as usize } else { 0 };
    let first = count((p + 1).div_ceil(8), (p - 1) / 4);
    let second = count((3 * p + 1).div_ceil(8), (p - 1) / 2);
    first + second
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscrepancyRow {
    pub p: u64,
    pub h_x: usize,
    pub h_y: usize,
    pub gap: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancySeries {
    pub rows: Vec<DiscrepancyRow>,
    /// Least-squares slope of `h_Y` against `p`.
    pub slope: f64,
}

pub fn discrepancy_series(p_max: u64) -> Result<DiscrepancySeries, InvariantsError> {
    if p_max < 5 {
        return Err(InvariantsError::SeriesTooShort(p_max));
    }
    let mut rows = Vec::new();
    for p in (5..=p_max).filter(|&p| is_prime(p)) {
        let HodgePair { h_x, h_y } = hodge30_pair(p)?;
        let closed_form = closed_form_h_y(p);
        if h_y != closed_form {
            return Err(InvariantsError::OracleDisagreement { p, enumerated: h_y, closed_form });
        }
        rows.push(DiscrepancyRow { p, h_x, h_y, gap: h_y as i64 - h_x as i64 });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.p as f64, r.h_y as f64)).collect();
    Ok(DiscrepancySeries { slope: least_squares_slope(&points), rows })
}

/// Slope of the ordinary least-squares line; 0 for fewer than two distinct `x`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
