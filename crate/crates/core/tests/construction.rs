use hodgelift::algebra::{FqField, Polynomial, Ring};
use hodgelift::curves::{
    chart_identity_holds, family_curve, rational_points, reduce_model, sigma_generic, sigma_special,
    substitution_identity_holds, tau_special, HyperellipticModel, ModelLabel,
};
use hodgelift::cyclotomic::PiSpec;
use hodgelift::elliptic::{within_hasse_bound, WeierstrassCurve};
use hodgelift::invariants::{curve_genus, hodge30_pair};
use proptest::prelude::*;

const SHIPPED: [u64; 5] = [3, 5, 7, 11, 13];

#[test]
fn special_fibre_points_are_the_branch_points() {
    // u^q - u vanishes on all of F_q, so every affine point has v = 0
    for p in SHIPPED {
        let spec = PiSpec::for_curve_prime(p).unwrap();
        let c0 = reduce_model(&family_curve(p, &spec).unwrap(), &spec).unwrap();
        let pts = rational_points(&c0);
        let q = spec.residue_field().order();
        assert_eq!(pts.len() as u64, q, "p = {p}");
        assert!(pts.iter().all(|(_, v)| v.is_zero()));
    }
}

#[test]
fn per_prime_invariants() {
    for p in SHIPPED {
        let spec = PiSpec::for_curve_prime(p).unwrap();
        let curve = family_curve(p, &spec).unwrap();
        assert_eq!(curve.genus().unwrap(), curve_genus(p));
        assert_eq!(curve.degree(), 2 * curve_genus(p) + 1);
        let sigma = sigma_generic(&spec);
        assert!(sigma.pow(p).is_identity());
        assert!(!sigma.pow(1).is_identity());
        let field = spec.residue_field();
        let s0 = sigma_special(&field);
        let t0 = tau_special(&field).unwrap();
        // tau normalizes <sigma> but is not in it
        assert!((1..p).any(|k| t0.compose(&s0).compose(&t0.inverse()) == s0.pow(k)));
        assert!((0..p).all(|k| t0 != s0.pow(k)));
        let h = hodge30_pair(p).unwrap();
        assert_ne!(h.h_x, h.h_y);
    }
}

#[test]
fn hasse_bound_for_every_short_curve() {
    for p in [5u64, 7, 11] {
        let f = FqField::prime(p).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                if let Ok(c) = WeierstrassCurve::short(a, b) {
                    assert!(within_hasse_bound(p, c.count_points()), "{c}");
                }
            }
        }
    }
}

fn perturbation() -> impl Strategy<Value = (u64, usize, Vec<i64>)> {
    prop::sample::select(vec![5u64, 7, 11]).prop_flat_map(|p| {
        (
            Just(p),
            0..=p as usize,
            prop::collection::vec(-3i64..=3, p as usize - 1)
                .prop_filter("nonzero", |v| v.iter().any(|&x| x != 0)),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn perturbed_curves_fail_both_identities((p, i, raw) in perturbation()) {
        let spec = PiSpec::for_curve_prime(p).unwrap();
        let curve = family_curve(p, &spec).unwrap();
        let bump = Polynomial::monomial(spec.field().canonicalize_i64(&raw), i);
        let g = curve.f().add(&bump).unwrap();
        prop_assert!(!substitution_identity_holds(&g, p, &spec).unwrap());
        let model = HyperellipticModel::new(g, ModelLabel::GenericR).unwrap();
        prop_assert!(!chart_identity_holds(&model, (p as usize).div_ceil(2), p, &spec).unwrap());
    }
}
