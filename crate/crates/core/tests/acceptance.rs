//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tripleroot::character::{
    eps_character, gauss_sum, hecke_lift, hecke_product_check, AdditiveCharacter, HaarMeasure,
    LocalCharacter, MultiplicativeCharacter, UnitValue,
};
use tripleroot::field::{is_prime, CyclotomicNumber};
use tripleroot::orbits::{
    classify_pm, det_invariant, diamond_orbit_decomposition, field_of_definition_report,
    gks_vanishing_check, s3_sign_law_holds, sl2_act, sl2_orbit_table, MarkingTriple, Perm3,
    PmClass, ProductClass, Sl2Matrix, DEFAULT_ORBIT_BOUND,
};
use tripleroot::pairing::{
    o_det_bridge_check, o_invariant, select_curve, torsion_basis, weil_pairing, Curve, Point,
    TorsionBasis, DEFAULT_MAX_DEGREE, DEFAULT_MAX_ELL,
};
use tripleroot::triple_product::{
    assemble_local, global_conductor, global_root_number, single_form_root_numbers, Sign,
    TripleProductSpec,
};
use tripleroot::weil_deligne::{delta_factor, epsilon_weil};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

const LEVELS: [u64; 4] = [11, 17, 19, 23];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn int(n: i64) -> CyclotomicNumber {
    CyclotomicNumber::from_integer(n)
}

fn pow_int(p: u64, e: u32) -> CyclotomicNumber {
    CyclotomicNumber::from_rational(BigRational::from_integer(BigInt::from(p).pow(e)))
}

fn local_tools(q: u64) -> Result<(AdditiveCharacter, HaarMeasure), String> {
    Ok((
        AdditiveCharacter::standard(q).map_err(err)?,
        HaarMeasure::normalized(q),
    ))
}

fn twisted_root_number() -> Check {
    let start = Instant::now();
    for p in LEVELS {
        for signs in Sign::all_patterns() {
            let spec = TripleProductSpec::new(p, signs, true).map_err(err)?;
            let w = global_root_number(&spec).map_err(err)?.w_global;
            ensure(w == -1, || {
                format!("W(F, chi) = {w} at p = {p}, signs {signs:?}")
            })?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || {
        format!("took {elapsed:?}, limit 5 s")
    })
}

fn local_epsilon_at_p() -> Check {
    for p in LEVELS {
        let (psi, dx) = local_tools(p)?;
        for signs in Sign::all_patterns() {
            let spec = TripleProductSpec::new(p, signs, true).map_err(err)?;
            let rho = assemble_local(&spec, p).map_err(err)?;
            let eps = epsilon_weil(&rho, &psi, &dx).map_err(err)?;
            ensure(eps == pow_int(p, 16), || {
                format!("epsilon at p = {p} is {eps}, expected p^16")
            })?;
            let delta = delta_factor(&rho);
            ensure(delta.inertia_invariant_indices.is_empty(), || {
                format!("V^I nonzero at p = {p}")
            })?;
            ensure(delta.delta.is_one(), || {
                format!("delta = {} at p = {p}", delta.delta)
            })?;
        }
    }
    Ok(())
}

fn conductors() -> Check {
    for p in LEVELS {
        for signs in Sign::all_patterns() {
            for (twisted, exponent) in [(true, 8), (false, 5)] {
                let spec = TripleProductSpec::new(p, signs, twisted).map_err(err)?;
                let cond = global_conductor(&spec).map_err(err)?;
                let expected = BigInt::from(p).pow(exponent).to_biguint().unwrap();
                ensure(cond.value() == expected, || {
                    format!("conductor {cond} at p = {p}, twisted = {twisted}")
                })?;
            }
        }
    }
    Ok(())
}

fn untwisted_case() -> Check {
    for p in LEVELS {
        let (psi, dx) = local_tools(p)?;
        for signs in Sign::all_patterns() {
            let product: i64 = signs.iter().map(|s| s.value()).product();
            let spec = TripleProductSpec::new(p, signs, false).map_err(err)?;
            let w = global_root_number(&spec).map_err(err)?.w_global;
            ensure(w as i64 == product, || {
                format!("W(F) = {w} but a1 a2 a3 = {product} at p = {p}")
            })?;
            let rho = assemble_local(&spec, p).map_err(err)?;
            let eps = epsilon_weil(&rho, &psi, &dx).map_err(err)?;
            ensure(eps == int(1), || {
                format!("epsilon(sigma_F,p) = {eps} at p = {p}")
            })?;
            let delta = delta_factor(&rho).delta_value().map_err(err)?;
            let expected = &pow_int(p, 10) * &int(-product);
            ensure(delta == expected, || {
                format!("delta = {delta}, expected -p^10 a1 a2 a3 at p = {p}")
            })?;
        }
    }
    Ok(())
}

fn single_form() -> Check {
    for p in LEVELS {
        let chi_sign = hecke_lift(p).map_err(err)?.dirichlet_character().sign();
        for a_p in [Sign::Plus, Sign::Minus] {
            let w = single_form_root_numbers(p, a_p).map_err(err)?;
            ensure(w.w_f as i64 == a_p.value(), || {
                format!("W(f) = {} at p = {p}, a_p = {}", w.w_f, a_p.value())
            })?;
            ensure(w.w_f_chi == -chi_sign, || {
                format!("W(f, chi) = {} at p = {p}", w.w_f_chi)
            })?;
        }
    }
    Ok(())
}

fn gauss_identities() -> Check {
    for p in (3..=97).filter(|&p| is_prime(p)) {
        let chi = MultiplicativeCharacter::legendre(p).map_err(err)?;
        let g = gauss_sum(&chi);
        let expected = int(chi.sign() as i64 * p as i64);
        ensure(&g * &g == expected, || {
            format!("G(chi)^2 != chi(-1) p at p = {p}")
        })?;
        // independent oracle: chi(-1) from Euler's criterion
        let euler = if p % 4 == 1 { 1 } else { -1 };
        ensure(chi.sign() == euler, || format!("chi(-1) wrong at p = {p}"))?;
    }
    for q in (3..=50).filter(|&q| is_prime(q)) {
        let dx = HaarMeasure::normalized(q);
        for mu in MultiplicativeCharacter::all(q).map_err(err)? {
            if mu.is_trivial() {
                continue;
            }
            let z = gauss_sum(&mu).to_complex();
            ensure((z.norm_sqr() - q as f64).abs() < 1e-9, || {
                format!("|G|^2 = {} at q = {q}", z.norm_sqr())
            })?;
            let unit = UnitValue::root_of_unity(1, 3);
            let local = LocalCharacter::tame(q, unit, mu.clone()).map_err(err)?;
            let expected = int(mu.sign() as i64 * q as i64);
            for c in 1..q {
                let psi = AdditiveCharacter::new(q, c as i64).map_err(err)?;
                let e1 = eps_character(&local, &psi, &dx).map_err(err)?;
                let e2 = eps_character(&local.inverse(), &psi, &dx).map_err(err)?;
                ensure(&e1 * &e2 == expected, || {
                    format!("eps(mu) eps(mu^-1) != q mu(-1) at q = {q}, c = {c}")
                })?;
            }
        }
    }
    Ok(())
}

fn orbit_combinatorics() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [5u64, 7, 11, 13] {
        let start = Instant::now();
        let diamond = diamond_orbit_decomposition(p).map_err(err)?;
        let half = ((p - 1).pow(3) / 2) as usize;
        ensure(diamond.orbits.len() == 2, || {
            format!("diamond orbits at p = {p}")
        })?;
        ensure(diamond.orbits.iter().all(|o| o.size == half), || {
            format!("diamond orbit sizes at p = {p}")
        })?;
        ensure(diamond.stabilizer.len() == 2, || {
            format!("stabilizer at p = {p}")
        })?;
        ensure(diamond.identity_orbit_is_square_class, || {
            format!("identity orbit is not the square class at p = {p}")
        })?;

        if p <= 7 {
            // exhaustive: BFS checks constancy of Det along every edge
            let table = sl2_orbit_table(p, DEFAULT_ORBIT_BOUND).map_err(err)?;
            ensure(table.total_size() == ((p * p - 1).pow(3)) as usize, || {
                format!("orbit table does not cover all triples at p = {p}")
            })?;
            table.det_bijection_check().map_err(err)?;
        } else {
            for _ in 0..2000 {
                let t = MarkingTriple::random(p, &mut rng);
                let kappa = Sl2Matrix::random(p, &mut rng);
                let moved = sl2_act(&t, &kappa).map_err(err)?;
                ensure(det_invariant(&moved) == det_invariant(&t), || {
                    format!("Det changed under SL2 at p = {p}")
                })?;
            }
        }

        let perms = Perm3::all();
        for _ in 0..1000 {
            let t = MarkingTriple::random(p, &mut rng);
            let sigma = &perms[rng.gen_range(0..perms.len())];
            ensure(s3_sign_law_holds(sigma, &t), || {
                format!("S3 sign law fails at p = {p}")
            })?;
        }

        let field = field_of_definition_report(p).map_err(err)?;
        ensure(field.tau_swaps_classes && field.tau_is_involution, || {
            format!("tau does not swap the classes at p = {p}")
        })?;
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(60), || {
            format!("p = {p} took {elapsed:?}")
        })?;
    }
    Ok(())
}

fn projector_combinatorics() -> Check {
    for p in [5u64, 7, 11, 13] {
        let report = gks_vanishing_check(p).map_err(err)?;
        for pair in &report.pairs {
            ensure(classify_pm(&pair.plus) == PmClass::Plus, || {
                format!("plus witness misclassified for ({}, {})", pair.i, pair.j)
            })?;
            ensure(classify_pm(&pair.minus) == PmClass::Minus, || {
                format!("minus witness misclassified for ({}, {})", pair.i, pair.j)
            })?;
            let kept = [pair.i - 1, pair.j - 1];
            ensure(
                kept.iter().all(|&k| pair.plus.row(k) == pair.minus.row(k)),
                || {
                    format!(
                        "witnesses differ in kept coordinates ({}, {})",
                        pair.i, pair.j
                    )
                },
            )?;
        }
        ensure(report.compositions.iter().all(|c| c.holds), || {
            format!("composition identity fails at p = {p}")
        })?;
        ensure(report.all_pass, || format!("gks report fails at p = {p}"))?;
    }
    Ok(())
}

fn combo(curve: &Curve, basis: &TorsionBasis, a: u64, b: u64) -> Point {
    curve.add(
        &curve.mul_u64(&basis.p_point, a),
        &curve.mul_u64(&basis.q_point, b),
    )
}

fn pairing_realization() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [3u64, 5, 7] {
        let manifest = select_curve(p, DEFAULT_MAX_ELL, DEFAULT_MAX_DEGREE).map_err(err)?;
        let curve = manifest.curve().map_err(err)?;
        let basis = torsion_basis(&curve, p, 0).map_err(err)?;
        let zeta = &basis.zeta.0;
        let one = tripleroot::field::ExtFieldElement::one(curve.field());
        ensure(*zeta != one && zeta.pow_u64(p) == one, || {
            format!("zeta is not a primitive p-th root at p = {p}")
        })?;

        // e(aP + bQ, cP + dQ) = zeta^(ad - bc): bilinear, alternating, nondegenerate
        let full = p <= 5;
        let samples: Vec<[u64; 4]> = if full {
            (0..p.pow(4))
                .map(|n| [n % p, n / p % p, n / p / p % p, n / p / p / p])
                .collect()
        } else {
            (0..200)
                .map(|_| [0; 4].map(|_| rng.gen_range(0..p)))
                .collect()
        };
        for [a, b, c, d] in samples {
            let x = combo(&curve, &basis, a, b);
            let y = combo(&curve, &basis, c, d);
            let e = weil_pairing(&curve, &x, &y, p, 0).map_err(err)?;
            let exp = (a * d + p * p - b * c % p) % p;
            ensure(e == zeta.pow_u64(exp), || {
                format!("pairing of ({a},{b}), ({c},{d}) wrong at p = {p}")
            })?;
        }

        // bridge: exhaustive for p <= 5, sampled for p = 7
        let triples: Vec<[(i64, i64); 3]> = if full {
            let rows: Vec<(i64, i64)> = (0..p * p)
                .filter(|&n| n != 0)
                .map(|n| ((n % p) as i64, (n / p) as i64))
                .collect();
            let mut all = Vec::new();
            for &r1 in &rows {
                for &r2 in &rows {
                    for &r3 in &rows {
                        all.push([r1, r2, r3]);
                    }
                }
            }
            all
        } else {
            (0..300)
                .map(|_| MarkingTriple::random(p, &mut rng).rows())
                .map(|r| r.map(|[a, b]| (a as i64, b as i64)))
                .collect()
        };
        for coeffs in triples {
            let bridge = o_det_bridge_check(&curve, &basis, coeffs, 0).map_err(err)?;
            ensure(bridge.agrees, || {
                format!("bridge fails for {coeffs:?} at p = {p}")
            })?;
            let triple = MarkingTriple::new(p, coeffs).map_err(err)?;
            let induced = match bridge.o.class {
                ProductClass::Square => PmClass::Plus,
                ProductClass::Nonsquare => PmClass::Minus,
                ProductClass::Degenerate => PmClass::Degenerate,
            };
            ensure(induced == classify_pm(&triple), || {
                format!("pairing class disagrees with classify_pm for {coeffs:?}")
            })?;
        }

        // generator independence: rescale each generator by a unit
        for _ in 0..40 {
            let t = MarkingTriple::random(p, &mut rng).rows();
            let points: Vec<Point> = t
                .iter()
                .map(|&[a, b]| combo(&curve, &basis, a, b))
                .collect();
            let degenerate = points.iter().any(Point::is_infinity);
            if degenerate {
                continue;
            }
            let base = o_invariant(&curve, [&points[0], &points[1], &points[2]], zeta, p, 0)
                .map_err(err)?;
            let scales = [0; 3].map(|_| rng.gen_range(1..p));
            let scaled: Vec<Point> = points
                .iter()
                .zip(scales)
                .map(|(pt, s)| curve.mul_u64(pt, s))
                .collect();
            let other = o_invariant(&curve, [&scaled[0], &scaled[1], &scaled[2]], zeta, p, 3)
                .map_err(err)?;
            ensure(base.class == other.class, || {
                format!("o-invariant depends on generators at p = {p}")
            })?;
        }
    }
    Ok(())
}

fn hecke_lift_product() -> Check {
    let rat = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    for p in [5u64, 7, 11, 13, 17, 19, 23] {
        let family = hecke_lift(p).map_err(err)?;
        let pi = p as i64;
        let xs = [
            rat(1, 1),
            rat(-1, 1),
            rat(2, 1),
            rat(-2, 1),
            rat(3, 1),
            rat(-3, 1),
            rat(pi, 1),
            rat(1, pi),
            rat(-pi, 1),
            rat(6, 5),
        ];
        for x in &xs {
            let product = hecke_product_check(&family, x).map_err(err)?;
            ensure(product == CyclotomicNumber::one(1), || {
                format!("product over places of chi_v({x}) = {product} at p = {p}")
            })?;
        }
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("twisted global root number is -1", twisted_root_number),
        (
            "local epsilon at p is p^16 and delta is 1",
            local_epsilon_at_p,
        ),
        ("conductors p^8 and p^5", conductors),
        ("untwisted root number, delta and epsilon", untwisted_case),
        ("single-form root numbers", single_form),
        ("Gauss sum identities", gauss_identities),
        ("orbit combinatorics", orbit_combinatorics),
        ("projector combinatorics", projector_combinatorics),
        ("pairing realization", pairing_realization),
        ("Hecke lift is trivial on Q^x", hecke_lift_product),
    ];
    let mut failures = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.2} s)", n + 1),
            Err(msg) => {
                failures += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.2} s): {msg}", n + 1);
            }
        }
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
