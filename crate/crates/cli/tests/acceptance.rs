//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hodgelift::algebra::{primes_between, Field, FqElement, FqField, Polynomial, Ring};
use hodgelift::curves::{
    affine_fixed_points, chart_identity_holds, chart_transition_check, conjugacy_check,
    p3_substitution_holds, family_curve, reduce_model, sigma_generic, sigma_special,
    substitution_check, substitution_check_p3, substitution_identity_holds, tau_special,
    AffineCurveMap, HyperellipticModel, ModelLabel,
};
use hodgelift::cyclotomic::{CyclotomicElement, PiSpec, Valuation};
use hodgelift::elliptic::{find_ordinary_with_trace_one, find_p3_curve, CurvePoint, WeierstrassCurve};
use hodgelift::invariants::{
    closed_form_h_y, curve_genus, form_weights, hodge30_pair, kunneth30_invariant_dim,
    DiagonalAction, WeightMultiset,
};
use hodgelift::modularrep::{build_augmentation, h1_dr_report};
use hodgelift::report::{table, VerificationReport};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const SHIPPED: [u64; 5] = [3, 5, 7, 11, 13];
const SEED: u64 = 0x5eed_2024;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn criterion(n: u32, name: &str, budget: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (ok, detail) = match result {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over budget")),
        Err(d) => (false, d),
    };
    println!(
        "[{}] {n} {name}: {detail} ({:.2}s, budget {}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    ok
}

fn run_cli(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hodgelift"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn headline_values() -> Check {
    let (code, stdout) = run_cli(&["verify", "--p", "3", "--format", "json"]);
    ensure(code == Some(0), || format!("verify --p 3 exited {code:?}"))?;
    let report: VerificationReport = serde_json::from_str(&stdout).map_err(e)?;
    let s = report.summary.ok_or("no summary for p = 3")?;
    ensure((s.h_x, s.h_y) == (5, 6), || format!("p = 3 gave hX = {}, hY = {}", s.h_x, s.h_y))?;
    let primes = primes_between(5, 97);
    for &p in &primes {
        let h = hodge30_pair(p).map_err(e)?;
        ensure(h.h_x == 0 && h.h_y >= 1, || format!("p = {p}: hX = {}, hY = {}", h.h_x, h.h_y))?;
    }
    Ok(format!("p = 3 -> (5, 6); hX = 0, hY >= 1 for {} primes in [5, 97]", primes.len()))
}

/// `u^q - u` over the residue field, built directly.
fn artin_schreier(field: FqField) -> Polynomial<FqElement> {
    let q = field.order() as usize;
    let mut coeffs = vec![field.element(0, 0); q + 1];
    coeffs[1] = field.element(-1, 0);
    coeffs[q] = field.element(1, 0);
    Polynomial::new(field, coeffs).expect("same field")
}

fn reduction_identity() -> Check {
    for p in SHIPPED {
        let spec = PiSpec::for_curve_prime(p).map_err(e)?;
        let field = spec.residue_field();
        let curve = family_curve(p, &spec).map_err(e)?;
        let reduced = reduce_model(&curve, &spec).map_err(e)?;
        ensure(*reduced.f() == artin_schreier(field), || format!("p = {p}: reduction differs"))?;
        let lin = curve.f().coeff(1);
        ensure(spec.valuation(&lin) == Valuation::Finite(0), || format!("p = {p}: linear coefficient not a unit"))?;
        let r = spec.residue(&lin).map_err(e)?;
        ensure(r == field.element(-1, 0), || format!("p = {p}: linear coefficient reduces to {r}"))?;
    }
    Ok("v^2 = u^q - u with linear coefficient -1 for p in {3, 5, 7, 11, 13}".into())
}

fn elliptic_data(p: u64) -> Result<(WeierstrassCurve, CurvePoint), String> {
    if p == 3 {
        let r = find_p3_curve().map_err(e)?;
        Ok((r.curve, r.point))
    } else {
        let c = find_ordinary_with_trace_one(p).map_err(e)?;
        let pt = c.torsion_point_of_exact_order(p).map_err(e)?;
        Ok((c, pt))
    }
}

fn conjugacy_and_action() -> Check {
    for p in SHIPPED {
        let spec = PiSpec::for_curve_prime(p).map_err(e)?;
        let field = spec.residue_field();
        let curve = family_curve(p, &spec).map_err(e)?;
        let special = reduce_model(&curve, &spec).map_err(e)?;
        let sigma0 = sigma_special(&field);
        let (tau, k) = if p == 3 {
            (tau_special(&field).map_err(e)?, 2)
        } else {
            (AffineCurveMap::from_i64s(&field, 4, 0, 2).map_err(e)?, 4)
        };
        ensure(tau.preserves(&special).map_err(e)?, || format!("p = {p}: tau does not preserve C_0"))?;
        ensure(conjugacy_check(&tau, &sigma0, k), || format!("p = {p}: tau sigma tau^-1 != sigma^{k}"))?;
        ensure(!conjugacy_check(&tau, &sigma0, 1), || format!("p = {p}: tau commutes with sigma"))?;

        let sigma = sigma_generic(&spec);
        ensure(sigma.preserves(&curve).map_err(e)?, || format!("p = {p}: sigma does not preserve C"))?;
        let order = sigma.order(4 * p).map_err(e)?;
        ensure(order == p, || format!("p = {p}: sigma has order {order}"))?;

        let fp = affine_fixed_points(&sigma0, &special);
        ensure(fp.affine.is_empty() && fp.infinity_fixed, || format!("p = {p}: sigma fixes {} affine points", fp.affine.len()))?;
        let (ec, pt) = elliptic_data(p)?;
        ensure(ec.translation_is_fixed_point_free(&pt).map_err(e)?, || format!("p = {p}: translation has fixed points"))?;
    }
    Ok("tau sigma tau^-1 = sigma^4 (sigma^2 over F_9), sigma of order p, free diagonal action".into())
}

fn perturb(f: &Polynomial<CyclotomicElement>, i: usize, by: CyclotomicElement) -> Polynomial<CyclotomicElement> {
    f.add(&Polynomial::monomial(by, i)).expect("same field")
}

fn substitution_and_chart() -> Check {
    let mut rng = StdRng::seed_from_u64(SEED);
    let mut controls = 0;
    for p in [5u64, 7, 11, 13] {
        let spec = PiSpec::for_curve_prime(p).map_err(e)?;
        let field = spec.field().clone();
        ensure(substitution_check(p, &spec).map_err(e)?, || format!("p = {p}: substitution fails"))?;
        ensure(chart_transition_check(p, &spec).map_err(e)?, || format!("p = {p}: chart transition fails"))?;
        let curve = family_curve(p, &spec).map_err(e)?;
        let twist = (p as usize).div_ceil(2);
        ensure(!chart_identity_holds(&curve, twist - 1, p, &spec).map_err(e)?, || format!("p = {p}: wrong twist accepted"))?;
        for i in 0..=p as usize {
            let k = rng.gen_range(0..field.degree() as i64);
            for by in [field.integer(1), field.zeta_pow(k)] {
                let g = perturb(curve.f(), i, by);
                ensure(!substitution_identity_holds(&g, p, &spec).map_err(e)?, || format!("p = {p}: perturbed u^{i} passes substitution"))?;
                let model = HyperellipticModel::new(g, ModelLabel::GenericR).map_err(e)?;
                ensure(!chart_identity_holds(&model, twist, p, &spec).map_err(e)?, || format!("p = {p}: perturbed u^{i} passes chart"))?;
                controls += 2;
            }
        }
    }
    let spec = PiSpec::for_curve_prime(3).map_err(e)?;
    let field = spec.field().clone();
    ensure(substitution_check_p3(&spec).map_err(e)?, || "p = 3: substitution fails".into())?;
    let curve = family_curve(3, &spec).map_err(e)?;
    let x = Polynomial::linear(spec.pi().clone(), field.integer(1)).map_err(e)?;
    let x_no_shift = Polynomial::linear(spec.pi().clone(), field.integer(0)).map_err(e)?;
    ensure(!p3_substitution_holds(curve.f(), &x_no_shift, &spec).map_err(e)?, || "p = 3: x = pi*u accepted".into())?;
    for i in 0..=9 {
        let g = perturb(curve.f(), i, field.integer(1));
        ensure(!p3_substitution_holds(&g, &x, &spec).map_err(e)?, || format!("p = 3: perturbed u^{i} passes"))?;
        controls += 1;
    }
    Ok(format!("identities hold for p <= 13; {controls} perturbations all rejected"))
}

/// `#E(F_q)` by trying every pair `(x, y)`.
fn brute_count(c: &WeierstrassCurve) -> u64 {
    let [a2, a4, a6] = c.coefficients();
    let field = c.field();
    let mut count = 1;
    for x in field.elements() {
        let rhs = x.mul(&x).mul(&x).add(&a2.mul(&x).mul(&x)).add(&a4.mul(&x)).add(&a6);
        count += field.elements().filter(|y| y.mul(y) == rhs).count() as u64;
    }
    count
}

fn elliptic_instances() -> Check {
    let primes = primes_between(5, 97);
    for &p in &primes {
        let c = find_ordinary_with_trace_one(p).map_err(e)?;
        let n = brute_count(&c);
        ensure(n == p, || format!("p = {p}: {c} has {n} points"))?;
        for pt in c.points().iter().filter(|pt| **pt != CurvePoint::Infinity) {
            let mul = c.scalar_mul(p, pt).map_err(e)?;
            ensure(mul == CurvePoint::Infinity, || format!("p = {p}: {pt} is not p-torsion"))?;
        }
    }
    let r = find_p3_curve().map_err(e)?;
    let n = brute_count(&r.curve);
    ensure(r.curve.field().order() == 9 && n == r.count && n.is_multiple_of(3), || format!("F_9 curve has {n} points"))?;
    ensure(r.curve.is_ordinary(), || "F_9 curve is supersingular".into())?;
    ensure(r.curve.has_exact_order(&r.point, 3), || format!("{} does not have order 3", r.point))?;
    Ok(format!("{} curves with exactly p points; F_9 curve with {n} points and a 3-torsion point", primes.len()))
}

fn de_rham_numbers() -> Check {
    let primes = primes_between(3, 50);
    for &p in &primes {
        let r = h1_dr_report(p).map_err(e)?;
        ensure((r.h1_special, r.h1_generic, r.torsion_dim) == (4, 2, 2), || format!("p = {p}: {r:?}"))?;
        let m = build_augmentation(p).map_err(e)?;
        ensure(m.invariant_dim_mod_p().map_err(e)? == 1, || format!("p = {p}: mod-p invariants"))?;
        ensure(m.invariant_dim_rational() == 0, || format!("p = {p}: rational invariants"))?;
    }
    Ok(format!("{{4, 2, 2}} for {} primes in [3, 50]", primes.len()))
}

/// Pairs `(j1, j2)` in `[1, (p-1)/2]^2` with `j1 + m*j2 = 0 mod p`.
fn pair_count(p: u64, m: u64) -> usize {
    let half = (p - 1) / 2;
    (1..=half)
        .flat_map(|a| (1..=half).map(move |b| (a, b)))
        .filter(|(a, b)| (a + m * b).is_multiple_of(p))
        .count()
}

fn linear_growth() -> Check {
    let series = table(500).map_err(e)?;
    let primes = primes_between(5, 500);
    ensure(series.rows.len() == primes.len(), || "row count".into())?;
    for (row, &p) in series.rows.iter().zip(&primes) {
        ensure(row.p == p, || format!("row for {} where {p} expected", row.p))?;
        let (hx, hy) = (pair_count(p, 1), pair_count(p, 4));
        ensure(row.h_x == hx && row.h_y == hy, || format!("p = {p}: table ({}, {}), oracle ({hx}, {hy})", row.h_x, row.h_y))?;
        ensure(closed_form_h_y(p) == hy, || format!("p = {p}: interval count {}", closed_form_h_y(p)))?;
    }
    let n = primes.len() as f64;
    let mx = primes.iter().map(|&p| p as f64).sum::<f64>() / n;
    let my = series.rows.iter().map(|r| r.h_y as f64).sum::<f64>() / n;
    let sxy: f64 = series.rows.iter().map(|r| (r.p as f64 - mx) * (r.h_y as f64 - my)).sum();
    let sxx: f64 = primes.iter().map(|&p| (p as f64 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    ensure((slope - series.slope).abs() < 1e-9, || format!("slope {} vs {slope}", series.slope))?;
    ensure((0.2..=0.3).contains(&slope), || format!("slope {slope:.6} outside [0.2, 0.3]"))?;
    Ok(format!("{} primes match the oracle, slope {slope:.6}", primes.len()))
}

fn random_element(rng: &mut StdRng, spec: &PiSpec, max_den: i64) -> CyclotomicElement {
    let field = spec.field();
    let raw: Vec<i64> = (0..field.conductor()).map(|_| rng.gen_range(-9..=9)).collect();
    let den = field.integer(rng.gen_range(1..=max_den));
    field.canonicalize_i64(&raw).mul(&den.inv().expect("nonzero denominator"))
}

fn property_suites() -> Check {
    const N: usize = 64;
    let mut rng = StdRng::seed_from_u64(SEED);
    let specs: Vec<PiSpec> = SHIPPED
        .iter()
        .map(|&p| PiSpec::for_curve_prime(p))
        .collect::<Result<_, _>>()
        .map_err(e)?;

    for i in 0..N {
        let spec = &specs[i % specs.len()];
        let a = random_element(&mut rng, spec, 30);
        let b = random_element(&mut rng, spec, 30);
        let (va, vb, vab) = (spec.valuation(&a), spec.valuation(&b), spec.valuation(&a.mul(&b)));
        ensure(vab == va + vb, || format!("valuation: v({a} * {b}) = {vab}, expected {va} + {vb}"))?;
    }

    for i in 0..N {
        let spec = &specs[i % specs.len()];
        let a = random_element(&mut rng, spec, 1);
        let b = random_element(&mut rng, spec, 1);
        let r = |z: &CyclotomicElement| spec.residue(z).map_err(e);
        ensure(r(&a.add(&b))? == r(&a)?.add(&r(&b)?), || format!("residue of {a} + {b}"))?;
        ensure(r(&a.mul(&b))? == r(&a)?.mul(&r(&b)?), || format!("residue of {a} * {b}"))?;
    }

    let mut assoc = 0;
    while assoc < N {
        let field = match rng.gen_range(0..5) {
            0 => FqField::f9(),
            k => FqField::prime([5, 7, 11, 13][k - 1]).map_err(e)?,
        };
        let q = field.order();
        let pick = |rng: &mut StdRng| field.from_lift(rng.gen_range(0..q));
        let Ok(c) = WeierstrassCurve::new(pick(&mut rng), pick(&mut rng), pick(&mut rng)) else {
            continue;
        };
        let pts = c.points();
        let [x, y, z] = [0; 3].map(|_| pts[rng.gen_range(0..pts.len())]);
        let left = c.add(&c.add(&x, &y).map_err(e)?, &z).map_err(e)?;
        let right = c.add(&x, &c.add(&y, &z).map_err(e)?).map_err(e)?;
        ensure(left == right, || format!("associativity on {c} at {x}, {y}, {z}"))?;
        assoc += 1;
    }

    for i in 0..N {
        let spec = &specs[i % specs.len()];
        let len = rng.gen_range(1..=3 * spec.field().conductor() as usize);
        let raw: Vec<i64> = (0..len).map(|_| rng.gen_range(-50..=50)).collect();
        let once = spec.field().canonicalize_i64(&raw);
        let twice = spec.field().canonicalize(once.coords());
        ensure(once == twice && once.coords() == twice.coords(), || format!("canonicalize {raw:?}"))?;
        ensure(once.coords().len() == spec.field().degree(), || "canonical length".into())?;
    }

    for _ in 0..N {
        let p = [3u64, 5, 7, 11, 13][rng.gen_range(0..5)];
        let w = |rng: &mut StdRng| {
            let len = rng.gen_range(1..=6);
            WeightMultiset::new(p, (0..len).map(|_| rng.gen_range(0..p)).collect::<Vec<_>>())
        };
        let (w1, w2) = (w(&mut rng), w(&mut rng));
        let exps = [rng.gen_range(1..p), rng.gen_range(1..p), rng.gen_range(0..p)];
        let unit = rng.gen_range(1..p);
        let base = kunneth30_invariant_dim(&w1, &w2, &DiagonalAction::new(p, exps)).map_err(e)?;
        let conj = kunneth30_invariant_dim(&w1, &w2, &DiagonalAction::new(p, exps.map(|a| a * unit))).map_err(e)?;
        ensure(base == conj, || format!("p = {p}: {exps:?} gives {base}, times {unit} gives {conj}"))?;
    }
    let g = curve_genus(7);
    let w = form_weights(7, 1, g).map_err(e)?;
    ensure(w.len() == g, || "weights length".into())?;
    Ok(format!("5 suites x {N} instances, seed {SEED:#x}"))
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "headline values", s(5), headline_values),
        criterion(2, "reduction identity", s(1), reduction_identity),
        criterion(3, "conjugacy and action", s(1), conjugacy_and_action),
        criterion(4, "substitution and chart identities", s(2), substitution_and_chart),
        criterion(5, "elliptic curves with p points", s(30), elliptic_instances),
        criterion(6, "de Rham numbers", s(5), de_rham_numbers),
        criterion(7, "linear growth", s(10), linear_growth),
        criterion(8, "property suites", s(30), property_suites),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
