//! The four subcommands. Each returns a [`Report`] or a [`Failure`] carrying its exit code.

use serde::Serialize;
use serde_json::{json, Map, Value};

use tripleroot::character::{gauss_sum, MultiplicativeCharacter};
use tripleroot::field::{is_prime, CyclotomicNumber};
use tripleroot::orbits::{
    diamond_orbit_decomposition, field_of_definition_report, gks_vanishing_check, sl2_orbit_table,
    ProductClass,
};
use tripleroot::pairing::{o_det_bridge_check, select_curve, torsion_basis};
use tripleroot::triple_product::{
    functional_equation_data, global_root_number, single_form_root_numbers, Sign, TripleProductSpec,
};

use crate::{Failure, GaussArgs, OInvariantArgs, OrbitsArgs, Report, RootNumberArgs};

type Outcome = std::result::Result<Report, Failure>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn map(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn parse_signs(s: &str) -> std::result::Result<[Sign; 3], Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Failure::invalid(format!(
            "expected three comma-separated signs, got {s:?}"
        )));
    }
    let mut out = [Sign::Plus; 3];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot = Sign::parse(part)?;
    }
    Ok(out)
}

/// Parses `"(a1,b1);(a2,b2);(a3,b3)"`.
pub fn parse_coeffs(s: &str) -> std::result::Result<[(i64, i64); 3], Failure> {
    let bad = || Failure::invalid(format!("cannot parse coefficient triple {s:?}"));
    let parts: Vec<&str> = s.split(';').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut out = [(0, 0); 3];
    for (slot, part) in out.iter_mut().zip(parts) {
        let inner = part
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        *slot = (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        );
    }
    Ok(out)
}

pub fn root_number(args: &RootNumberArgs) -> Outcome {
    let signs = parse_signs(&args.signs)?;
    let spec = TripleProductSpec::new(args.p, signs, args.twisted)?;
    let report = global_root_number(&spec)?;
    let fe = functional_equation_data(&spec)?;
    let singles = [Sign::Plus, Sign::Minus]
        .into_iter()
        .map(|s| single_form_root_numbers(args.p, s))
        .collect::<tripleroot::Result<Vec<_>>>()?;

    let expected = if args.twisted {
        -1
    } else {
        spec.sign_product() as i8
    };
    let expected_exponent = if args.twisted { 8 } else { 5 };
    let local_product: i8 = report.local_w.values().product();
    let checks = map(vec![
        ("W_global_expected", json!(report.w_global == expected)),
        (
            "W_global_is_product_of_local",
            json!(report.w_global == report.w_infinity * local_product),
        ),
        (
            "conductor_exponent_at_p",
            json!(report.conductor.exponent(args.p) == expected_exponent),
        ),
        (
            "functional_equation_sign",
            json!(fe.sign == report.w_global),
        ),
    ]);
    if let Some((name, _)) = checks.iter().find(|(_, v)| **v != json!(true)) {
        return Err(Failure::inconsistent(format!(
            "identity check {name} failed"
        )));
    }

    let config = map(vec![
        ("p", json!(args.p)),
        ("signs", to_value(&signs)),
        ("twisted", json!(args.twisted)),
    ]);
    let mut results = map(vec![
        ("W_global", json!(report.w_global)),
        ("conductor", to_value(&report.conductor)),
        ("W_infinity", json!(report.w_infinity)),
        (
            "local_W",
            Value::Object(
                report
                    .local_w
                    .iter()
                    .map(|(q, w)| (q.to_string(), json!(w)))
                    .collect(),
            ),
        ),
        ("epsilon_p", to_value(&report.epsilon_p)),
        ("delta_p", json!(report.delta_p.to_string())),
        ("functional_equation", to_value(&fe)),
        ("single_form", to_value(&singles)),
        ("checks", Value::Object(checks)),
    ]);
    results.insert("genus".into(), json!(spec.genus()));
    let anchor = map(vec![
        (
            "W_global",
            json!(if args.twisted {
                "global root number of the triple product twisted by the quadratic character of conductor p equals -1"
            } else {
                "global root number of the untwisted triple product equals the product of the Atkin-Lehner signs"
            }),
        ),
        (
            "conductor",
            json!(
                "conductor of the triple product at p: exponent 8 when twisted, 5 when untwisted"
            ),
        ),
        (
            "local_W",
            json!("product of local root numbers over all places with W at infinity equal to -1"),
        ),
    ]);
    Ok(Report {
        command: "root-number",
        config,
        results,
        warnings: spec.warnings(),
        anchor,
    })
}

pub fn orbits(args: &OrbitsArgs) -> Outcome {
    let p = args.p;
    let table = sl2_orbit_table(p, args.orbit_bound)?;
    table.det_bijection_check()?;
    let diamond = diamond_orbit_decomposition(p)?;
    let field = field_of_definition_report(p)?;
    let gks = gks_vanishing_check(p)?;

    let identity_orbit = diamond
        .orbits
        .iter()
        .find(|o| o.class == ProductClass::Square)
        .map(|o| o.size)
        .unwrap_or(0);
    let nondegenerate = table.nondegenerate().count();
    let degenerate = table.orbits.len() - nondegenerate;
    let checks = map(vec![
        (
            "det_bijection",
            json!(nondegenerate as u64 == (p - 1).pow(3)),
        ),
        (
            "identity_orbit_is_square_class",
            json!(diamond.identity_orbit_is_square_class),
        ),
        ("tau_swaps_classes", json!(field.tau_swaps_classes)),
        ("tau_is_involution", json!(field.tau_is_involution)),
        ("gks_vanishing", json!(gks.all_pass)),
    ]);
    if let Some((name, _)) = checks.iter().find(|(_, v)| **v != json!(true)) {
        return Err(Failure::inconsistent(format!(
            "identity check {name} failed"
        )));
    }

    let results = map(vec![
        ("diamond_orbits", json!(diamond.orbits.len())),
        ("orbit_size", json!(identity_orbit)),
        ("stabilizer", json!(diamond.stabilizer.len())),
        ("s3", json!(field.s3.as_str())),
        ("sl2_orbits", json!(table.orbits.len())),
        ("sl2_nondegenerate_orbits", json!(nondegenerate)),
        ("sl2_degenerate_orbits", json!(degenerate)),
        ("marking_triples", json!(table.total_size())),
        ("diamond", to_value(&diamond)),
        ("field_of_definition", to_value(&field)),
        ("gks", to_value(&gks)),
        ("checks", Value::Object(checks)),
    ]);
    let anchor = map(vec![
        (
            "diamond_orbits",
            json!("the diamond operators act on (F_p^x)^3 with two orbits of size (p-1)^3/2 and stabilizer {(1,1,1),(-1,-1,-1)}"),
        ),
        (
            "sl2_orbits",
            json!("Det gives a bijection between nondegenerate SL2(F_p)-orbits of marking triples and (F_p^x)^3"),
        ),
        (
            "s3",
            json!("S3 fixes the two cycles when p = 1 mod 4 and acts through the sign character when p = 3 mod 4"),
        ),
        (
            "field_of_definition",
            json!("the two cycles are defined over Q(sqrt(chi(-1) p)) and conjugate under its Galois group"),
        ),
    ]);
    Ok(Report {
        command: "orbits",
        config: map(vec![
            ("p", json!(p)),
            ("orbit_bound", json!(args.orbit_bound)),
        ]),
        results,
        warnings: Vec::new(),
        anchor,
    })
}

pub fn o_invariant(args: &OInvariantArgs, seed: u64) -> Outcome {
    let coeffs = parse_coeffs(&args.coeffs)?;
    let manifest = select_curve(args.p, args.max_ell, args.max_k)?;
    if let Some(path) = &args.manifest {
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        std::fs::write(path, text + "\n")
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))?;
    }
    let curve = manifest.curve()?;
    let basis = torsion_basis(&curve, args.p, seed)?;
    let bridge = o_det_bridge_check(&curve, &basis, coeffs, seed)?;
    if !bridge.agrees {
        return Err(Failure::inconsistent(format!(
            "pairing class {} disagrees with Det class {}",
            bridge.o.class.as_str(),
            bridge.det_class.as_str()
        )));
    }
    let config = map(vec![
        ("p", json!(args.p)),
        ("coeffs", json!(coeffs.map(|(a, b)| [a, b]))),
        ("max_ell", json!(args.max_ell)),
        ("max_k", json!(args.max_k)),
    ]);
    let results = map(vec![
        ("manifest", to_value(&manifest)),
        ("basis", to_value(&basis)),
        ("exponents", json!(bridge.o.exponents)),
        ("class", json!(bridge.o.class.as_str())),
        ("dets", json!(bridge.dets)),
        ("det_class", json!(bridge.det_class.as_str())),
        ("bridge", json!(bridge.agrees)),
    ]);
    let anchor = map(vec![
        (
            "class",
            json!("class in F_p^x / (F_p^x)^2 of abc, where e_p(P2,P3) = zeta^a, e_p(P3,P1) = zeta^b, e_p(P1,P2) = zeta^c"),
        ),
        (
            "bridge",
            json!("for Pi = a_i P + b_i Q the pairing exponents are the determinants of the coefficient rows"),
        ),
    ]);
    Ok(Report {
        command: "o-invariant",
        config,
        results,
        warnings: Vec::new(),
        anchor,
    })
}

fn exact_value(c: &CyclotomicNumber) -> Value {
    match c.to_rational() {
        Some(r) => json!(r.to_string()),
        None => to_value(c),
    }
}

pub fn gauss(args: &GaussArgs) -> Outcome {
    let q = args
        .p
        .or(args.q)
        .ok_or_else(|| Failure::invalid("one of --p or --q is required"))?;
    if q == 2 || !is_prime(q) {
        return Err(Failure::invalid(format!("{q} is not an odd prime")));
    }
    let mu = match args.char_exponent {
        Some(e) => MultiplicativeCharacter::new(q, e)?,
        None => MultiplicativeCharacter::legendre(q)?,
    };
    let g = gauss_sum(&mu);
    let g2 = &g * &g;
    let z = g.to_complex();

    let mut checks = Map::new();
    if mu.is_trivial() {
        checks.insert(
            "trivial_sum_is_minus_one".into(),
            json!(g == CyclotomicNumber::from_integer(-1)),
        );
    } else {
        checks.insert(
            "abs_squared_is_q".into(),
            json!((z.norm_sqr() - q as f64).abs() < 1e-9),
        );
        let conj = &g * &mu.inverse().eval_or_zero(-1);
        let product = &conj * &gauss_sum(&mu.inverse());
        checks.insert(
            "g_times_g_inverse_is_mu_minus_one_q".into(),
            json!(product == CyclotomicNumber::from_integer(q as i64)),
        );
    }
    if mu.order() == 2 {
        let expected = mu.sign() as i64 * q as i64;
        checks.insert(
            "square_is_chi_minus_one_q".into(),
            json!(g2 == CyclotomicNumber::from_integer(expected)),
        );
    }
    if let Some((name, _)) = checks.iter().find(|(_, v)| **v != json!(true)) {
        return Err(Failure::inconsistent(format!(
            "identity check {name} failed"
        )));
    }

    let config = map(vec![
        ("q", json!(q)),
        ("char_exponent", json!(mu.exponent())),
        ("character_order", json!(mu.order())),
    ]);
    let results = map(vec![
        ("G", exact_value(&g)),
        ("G_squared", exact_value(&g2)),
        ("G_complex", json!([z.re, z.im])),
        ("checks", Value::Object(checks)),
    ]);
    let anchor = map(vec![(
        "G_squared",
        json!("for the quadratic character chi modulo p, G(chi)^2 = chi(-1) p"),
    )]);
    Ok(Report {
        command: "gauss",
        config,
        results,
        warnings: Vec::new(),
        anchor,
    })
}
