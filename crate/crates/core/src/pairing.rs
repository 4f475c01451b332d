//! Elliptic curves `y² = x³ + Ax + B` over finite fields, bases of the
//! `p`-torsion, the Weil pairing `e_p` by Miller's algorithm, and the
//! invariant `o(E; C₁, C₂, C₃)`.
//!
//! Curves are defined over a prime field `F_ℓ` and points live in the
//! smallest extension `F_{ℓ^k}` that contains all of `E[p]`.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::field::prime::{multiplicative_order, reduce};
use crate::field::{
    build_extension, discrete_log, is_prime, legendre_symbol, ExtField, ExtFieldElement,
};
use crate::orbits::{det_invariant, MarkingTriple, ProductClass};

/// Largest base prime accepted by [`point_count`].
pub const MAX_POINT_COUNT_PRIME: u64 = 10_000;
/// Default bound on the extension degree `k`.
pub const DEFAULT_MAX_DEGREE: u32 = 24;
/// Default bound on the base prime `ℓ` in curve selection.
pub const DEFAULT_MAX_ELL: u64 = 5_000;
/// Shift points tried before a pairing evaluation gives up.
pub const PAIRING_RETRIES: u32 = 32;
/// Random points drawn while searching for a torsion basis.
const BASIS_SAMPLES: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct CurveSpec {
    ell: u64,
    a: u64,
    b: u64,
}

impl CurveSpec {
    pub fn new(ell: u64, a: i64, b: i64) -> Result<Self> {
        if ell <= 3 || !is_prime(ell) {
            return Err(Error::InvalidCurve(format!(
                "base field characteristic {ell} must be a prime above 3"
            )));
        }
        let (a, b) = (reduce(a, ell), reduce(b, ell));
        let disc = (4 * a % ell * a % ell * a + 27 * b % ell * b) % ell;
        if disc == 0 {
            return Err(Error::InvalidCurve(format!(
                "y^2 = x^3 + {a}x + {b} is singular over F_{ell}"
            )));
        }
        Ok(Self { ell, a, b })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// The quadratic twist `y² = x³ + d²Ax + d³B` by a nonsquare `d`.
    pub fn quadratic_twist(&self) -> Result<Self> {
        let ell = self.ell;
        let d = crate::field::smallest_nonsquare(ell)?;
        let d2 = d * d % ell;
        Self::new(
            ell,
            (d2 * self.a % ell) as i64,
            (d2 * d % ell * self.b % ell) as i64,
        )
    }
}

/// `#E(F_ℓ) = 1 + Σ_x (1 + (x³ + Ax + B / ℓ))`, checked against the Hasse bound.
pub fn point_count(spec: &CurveSpec) -> Result<u64> {
    let ell = spec.ell;
    if ell > MAX_POINT_COUNT_PRIME {
        return Err(Error::ResourceLimit(format!(
            "point count over F_{ell} exceeds the bound {MAX_POINT_COUNT_PRIME}"
        )));
    }
    let mut count: i64 = 1;
    for x in 0..ell {
        let rhs = (x * x % ell * x + spec.a * x + spec.b) % ell;
        count += 1 + legendre_symbol(rhs as i64, ell)? as i64;
    }
    let t = ell as i64 + 1 - count;
    if (t * t) as u64 > 4 * ell {
        return Err(Error::Inconsistency(format!(
            "point count {count} violates the Hasse bound over F_{ell}"
        )));
    }
    Ok(count as u64)
}

/// `#E(F_{ℓ^k}) = ℓ^k + 1 − s_k` with `s_0 = 2`, `s_1 = t`, `s_k = t s_{k−1} − ℓ s_{k−2}`.
pub fn extension_point_count(spec: &CurveSpec, k: u32) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::Precondition(
            "extension degree must be positive".into(),
        ));
    }
    let ell = BigInt::from(spec.ell);
    let t = BigInt::from(spec.ell + 1) - BigInt::from(point_count(spec)?);
    let (mut prev, mut cur) = (BigInt::from(2), t.clone());
    for _ in 1..k {
        let next = &t * &cur - &ell * &prev;
        prev = std::mem::replace(&mut cur, next);
    }
    let n: BigInt = num_traits::pow(ell, k as usize) + 1 - cur;
    n.to_biguint()
        .ok_or_else(|| Error::Inconsistency("negative point count".into()))
}

fn p_adic_valuation(n: &BigUint, p: u64) -> u32 {
    let pb = BigUint::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && (&n % &pb).is_zero() {
        n /= &pb;
        v += 1;
    }
    v
}

#[derive(Clone, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine(ExtFieldElement, ExtFieldElement),
}

impl Point {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Self::Infinity)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinity => write!(f, "O"),
            Self::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Infinity => s.serialize_str("infinity"),
            Self::Affine(x, y) => {
                let mut st = s.serialize_struct("Point", 2)?;
                st.serialize_field("x", x.coeffs())?;
                st.serialize_field("y", y.coeffs())?;
                st.end()
            }
        }
    }
}

/// `E` over `F_{ℓ^k}`.
#[derive(Clone, Debug)]
pub struct Curve {
    spec: CurveSpec,
    field: Arc<ExtField>,
    a: ExtFieldElement,
    b: ExtFieldElement,
    order: BigUint,
}

pub fn curve(spec: &CurveSpec, k: u32) -> Result<Curve> {
    let field = build_extension(spec.ell, k as usize)?;
    Ok(Curve {
        spec: *spec,
        a: ExtFieldElement::from_base(&field, spec.a as i64),
        b: ExtFieldElement::from_base(&field, spec.b as i64),
        order: extension_point_count(spec, k)?,
        field,
    })
}

impl Curve {
    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.field.degree() as u32
    }

    /// `#E(F_{ℓ^k})`.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    fn rhs(&self, x: &ExtFieldElement) -> ExtFieldElement {
        x.square().mul(x).add(&self.a.mul(x)).add(&self.b)
    }

    pub fn contains(&self, pt: &Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine(x, y) => y.square() == self.rhs(x),
        }
    }

    pub fn point(&self, x: ExtFieldElement, y: ExtFieldElement) -> Result<Point> {
        let pt = Point::Affine(x, y);
        if !self.contains(&pt) {
            return Err(Error::InvalidCurve("point is not on the curve".into()));
        }
        Ok(pt)
    }

    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        loop {
            let x = ExtFieldElement::random(&self.field, rng);
            if let Some(y) = self.rhs(&x).sqrt() {
                let y = if rng.gen::<bool>() { y.neg() } else { y };
                return Point::Affine(x, y);
            }
        }
    }

    pub fn neg(&self, pt: &Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), y.neg()),
        }
    }

    pub fn add(&self, p1: &Point, p2: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p1, p2) {
            (Point::Infinity, _) => return p2.clone(),
            (_, Point::Infinity) => return p1.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        if x1 == x2 && (y1 != y2 || y1.is_zero()) {
            return Point::Infinity;
        }
        let lambda = self.slope(x1, y1, x2, y2);
        let x3 = lambda.square().sub(x1).sub(x2);
        let y3 = lambda.mul(&x1.sub(&x3)).sub(y1);
        Point::Affine(x3, y3)
    }

    /// Slope of the chord (or tangent) through two points that do not sum to `O`.
    fn slope(
        &self,
        x1: &ExtFieldElement,
        y1: &ExtFieldElement,
        x2: &ExtFieldElement,
        y2: &ExtFieldElement,
    ) -> ExtFieldElement {
        if x1 == x2 {
            let num = x1.square().scale(3).add(&self.a);
            num.mul(&y1.scale(2).inv().expect("y ≠ 0 for a doubling"))
        } else {
            y2.sub(y1).mul(&x2.sub(x1).inv().expect("distinct x"))
        }
    }

    pub fn sub(&self, p1: &Point, p2: &Point) -> Point {
        self.add(p1, &self.neg(p2))
    }

    pub fn mul(&self, pt: &Point, n: &BigUint) -> Point {
        let mut acc = Point::Infinity;
        for i in (0..n.bits()).rev() {
            acc = self.add(&acc, &acc);
            if n.bit(i) {
                acc = self.add(&acc, pt);
            }
        }
        acc
    }

    pub fn mul_u64(&self, pt: &Point, n: u64) -> Point {
        self.mul(pt, &BigUint::from(n))
    }

    /// `m · P` for a possibly negative `m`.
    pub fn mul_i64(&self, pt: &Point, m: i64) -> Point {
        let q = self.mul_u64(pt, m.unsigned_abs());
        if m < 0 {
            self.neg(&q)
        } else {
            q
        }
    }

    /// Smallest `j ≤ bound` with `p^j · P = O`.
    fn p_power_order(&self, pt: &Point, p: u64, bound: u32) -> Option<u32> {
        let mut q = pt.clone();
        for j in 0..=bound {
            if q.is_infinity() {
                return Some(j);
            }
            q = self.mul_u64(&q, p);
        }
        None
    }

    pub fn has_order(&self, pt: &Point, p: u64) -> bool {
        !pt.is_infinity() && self.mul_u64(pt, p).is_infinity()
    }
}

/// Evaluation of a line-function quotient that hit a zero or a pole.
struct Collision;

/// Value at `x` of the Miller function with divisor `n(P) − n(O)`, returned
/// as a numerator and denominator.
fn miller(
    curve: &Curve,
    pt: &Point,
    n: u64,
    at: &Point,
) -> std::result::Result<(ExtFieldElement, ExtFieldElement), Collision> {
    let (ax, ay) = match at {
        Point::Infinity => return Err(Collision),
        Point::Affine(x, y) => (x, y),
    };
    let (px, py) = match pt {
        Point::Infinity => return Err(Collision),
        Point::Affine(x, y) => (x.clone(), y.clone()),
    };
    let one = ExtFieldElement::one(&curve.field);
    let mut num = one.clone();
    let mut den = one;
    let mut t = pt.clone();

    // multiplies in l_{T,U}(X) / v_{T+U}(X) and returns T + U
    let step = |t: &Point, u: &Point, num: &mut ExtFieldElement, den: &mut ExtFieldElement| {
        let (tx, ty) = match t {
            Point::Affine(x, y) => (x, y),
            Point::Infinity => return Err(Collision),
        };
        let (ux, uy) = match u {
            Point::Affine(x, y) => (x, y),
            Point::Infinity => return Err(Collision),
        };
        let sum = curve.add(t, u);
        let line = if sum.is_infinity() {
            ax.sub(tx)
        } else {
            let lambda = curve.slope(tx, ty, ux, uy);
            ay.sub(ty).sub(&lambda.mul(&ax.sub(tx)))
        };
        let vertical = match &sum {
            Point::Infinity => ExtFieldElement::one(&curve.field),
            Point::Affine(sx, _) => ax.sub(sx),
        };
        if line.is_zero() || vertical.is_zero() {
            return Err(Collision);
        }
        *num = num.mul(&line);
        *den = den.mul(&vertical);
        Ok(sum)
    };

    let base = Point::Affine(px, py);
    let bits = 64 - n.leading_zeros();
    for i in (0..bits - 1).rev() {
        num = num.square();
        den = den.square();
        t = step(&t.clone(), &t, &mut num, &mut den)?;
        if (n >> i) & 1 == 1 {
            t = step(&t.clone(), &base, &mut num, &mut den)?;
        }
    }
    if !t.is_infinity() {
        return Err(Collision);
    }
    Ok((num, den))
}

/// `e_p(P, Q) = [f_P(Q + S) / f_P(S)] / [f_Q(P − S) / f_Q(−S)]` for an
/// auxiliary point `S` drawn from a seeded sequence.
pub fn weil_pairing(
    curve: &Curve,
    p1: &Point,
    p2: &Point,
    p: u64,
    seed: u64,
) -> Result<ExtFieldElement> {
    for pt in [p1, p2] {
        if !curve.contains(pt) || !curve.mul_u64(pt, p).is_infinity() {
            return Err(Error::Precondition(
                "pairing arguments must lie in E[p]".into(),
            ));
        }
    }
    let one = ExtFieldElement::one(&curve.field);
    if p1.is_infinity() || p2.is_infinity() {
        return Ok(one);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..PAIRING_RETRIES {
        let s = curve.random_point(&mut rng);
        let attempt = (|| {
            let (n1, d1) = miller(curve, p1, p, &curve.add(p2, &s))?;
            let (n2, d2) = miller(curve, p1, p, &s)?;
            let (n3, d3) = miller(curve, p2, p, &curve.sub(p1, &s))?;
            let (n4, d4) = miller(curve, p2, p, &curve.neg(&s))?;
            // (n1/d1)(d2/n2)(d3/n3)(n4/d4)
            let top = n1.mul(&d2).mul(&d3).mul(&n4);
            let bottom = d1.mul(&n2).mul(&n3).mul(&d4);
            if bottom.is_zero() || top.is_zero() {
                return Err(Collision);
            }
            Ok(top.mul(&bottom.inv().expect("nonzero")))
        })();
        if let Ok(value) = attempt {
            if !value.pow_u64(p).is_one() {
                return Err(Error::Inconsistency(
                    "Weil pairing value is not a p-th root of unity".into(),
                ));
            }
            return Ok(value);
        }
    }
    Err(Error::RetryExhausted(PAIRING_RETRIES))
}

/// A basis `(P, Q)` of `E[p]` and `ζ = e_p(P, Q)`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TorsionBasis {
    pub p: u64,
    pub p_point: Point,
    pub q_point: Point,
    pub zeta: ZetaValue,
}

/// A pairing value as an element of `F_{ℓ^k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaValue(pub ExtFieldElement);

impl Serialize for ZetaValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.coeffs())
    }
}

/// Searches the Sylow `p`-subgroup of `E(F_{ℓ^k})` for two points of order
/// `p` with nontrivial pairing. Returns `None` when the subgroup is cyclic.
fn search_basis(curve: &Curve, p: u64, seed: u64) -> Result<Option<TorsionBasis>> {
    let v = p_adic_valuation(&curve.order, p);
    if v < 2 {
        return Ok(None);
    }
    let cofactor = &curve.order / BigUint::from(p).pow(v);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // (R₁, a): a point of the largest order p^a seen so far
    let mut best: Option<(Point, u32)> = None;
    for _ in 0..BASIS_SAMPLES {
        let mut r = curve.mul(&curve.random_point(&mut rng), &cofactor);
        let mut j = curve
            .p_power_order(&r, p, v)
            .ok_or_else(|| Error::Inconsistency("Sylow point of unexpected order".into()))?;
        if j == v {
            return Ok(None);
        }
        while j > 0 {
            let (r1, a) = match &best {
                Some((r1, a)) if *a >= j => (r1.clone(), *a),
                _ => {
                    let previous = best.replace((r.clone(), j));
                    match previous {
                        Some((old, old_j)) => {
                            r = old;
                            j = old_j;
                            continue;
                        }
                        None => break,
                    }
                }
            };
            let t1 = curve.mul(&r1, &BigUint::from(p).pow(a - 1));
            let s = curve.mul(&r, &BigUint::from(p).pow(j - 1));
            let e = weil_pairing(curve, &t1, &s, p, seed)?;
            if !e.is_one() {
                return Ok(Some(TorsionBasis {
                    p,
                    p_point: t1,
                    q_point: s,
                    zeta: ZetaValue(e),
                }));
            }
            let c = (1..p)
                .find(|&c| curve.mul_u64(&t1, c) == s)
                .ok_or_else(|| {
                    Error::Inconsistency("trivial pairing on independent p-torsion".into())
                })?;
            let shift = curve.mul(&r1, &(BigUint::from(c) * BigUint::from(p).pow(a - j)));
            r = curve.sub(&r, &shift);
            j = curve
                .p_power_order(&r, p, v)
                .ok_or_else(|| Error::Inconsistency("reduction raised the order".into()))?;
        }
    }
    Ok(None)
}

/// Smallest `k ≤ max_k` with `E[p] ⊆ E(F_{ℓ^k})`, among multiples of `ord_p(ℓ)`.
pub fn full_torsion_field(spec: &CurveSpec, p: u64, max_k: u32) -> Result<u32> {
    if !is_prime(p) || spec.ell.is_multiple_of(p) {
        return Err(Error::Precondition(format!(
            "p = {p} must be a prime different from the characteristic"
        )));
    }
    let r = multiplicative_order(spec.ell % p, p) as u32;
    let mut k = r;
    while k <= max_k {
        let n = extension_point_count(spec, k)?;
        if p_adic_valuation(&n, p) >= 2 && search_basis(&curve(spec, k)?, p, 0)?.is_some() {
            return Ok(k);
        }
        k += r;
    }
    Err(Error::ResourceLimit(format!(
        "E[{p}] is not rational over F_{}^k for any k <= {max_k}",
        spec.ell
    )))
}

/// A basis of `E[p]` over `F_{ℓ^k}`.
pub fn torsion_basis(curve: &Curve, p: u64, seed: u64) -> Result<TorsionBasis> {
    search_basis(curve, p, seed)?.ok_or_else(|| {
        Error::Inconsistency(format!(
            "no basis of E[{p}] found over F_{}^{}",
            curve.spec.ell,
            curve.degree()
        ))
    })
}

/// The pairing exponents `(a, b, c)` and the class of `abc`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct OInvariant {
    pub exponents: [u64; 3],
    pub class: ProductClass,
}

/// `o(E; ⟨P₁⟩, ⟨P₂⟩, ⟨P₃⟩)` relative to `zeta`: with `e_p(P₂, P₃) = ζ^a`,
/// `e_p(P₃, P₁) = ζ^b`, `e_p(P₁, P₂) = ζ^c`, the class of `abc`.
/// A zero exponent signals two equal subgroups and gives the degenerate class.
pub fn o_invariant(
    curve: &Curve,
    generators: [&Point; 3],
    zeta: &ExtFieldElement,
    p: u64,
    seed: u64,
) -> Result<OInvariant> {
    for g in generators {
        if !curve.has_order(g, p) {
            return Err(Error::Precondition("generators must have order p".into()));
        }
    }
    let [p1, p2, p3] = generators;
    let mut exponents = [0u64; 3];
    for (slot, (x, y)) in [(p2, p3), (p3, p1), (p1, p2)].into_iter().enumerate() {
        let e = weil_pairing(curve, x, y, p, seed)?;
        exponents[slot] = discrete_log(zeta, &e, p)?;
    }
    let product = exponents.iter().fold(1u64, |acc, &e| acc * e % p);
    Ok(OInvariant {
        exponents,
        class: ProductClass::of(product, p),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct BridgeCheck {
    pub o: OInvariant,
    pub dets: [u64; 3],
    pub det_class: ProductClass,
    pub agrees: bool,
}

/// Compares the class of `o(E; ⟨a_iP + b_iQ⟩)` with `ζ = e_p(P, Q)` against
/// the class of the `Det` product of the coefficient triple.
pub fn o_det_bridge_check(
    curve: &Curve,
    basis: &TorsionBasis,
    coeffs: [(i64, i64); 3],
    seed: u64,
) -> Result<BridgeCheck> {
    let p = basis.p;
    let triple = MarkingTriple::new(p, coeffs)?;
    let det = det_invariant(&triple);
    let points: Vec<Point> = coeffs
        .iter()
        .map(|&(a, b)| {
            curve.add(
                &curve.mul_i64(&basis.p_point, a),
                &curve.mul_i64(&basis.q_point, b),
            )
        })
        .collect();
    let o = o_invariant(
        curve,
        [&points[0], &points[1], &points[2]],
        &basis.zeta.0,
        p,
        seed,
    )?;
    Ok(BridgeCheck {
        agrees: o.class == det.product_class,
        o,
        dets: det.dets,
        det_class: det.product_class,
    })
}

/// The curve chosen for a given `p`, with everything needed to rebuild it.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CurveManifest {
    pub p: u64,
    pub ell: u64,
    pub a: u64,
    pub b: u64,
    pub point_count: u64,
    pub embedding_degree: u32,
    pub k: u32,
    pub extension_point_count: String,
    pub defining_polynomial: Vec<u64>,
}

/// Smallest `ℓ > 3`, `ℓ ≠ p`, then lexicographically smallest `(A, B)` with
/// `p | #E(F_ℓ)` and `E[p]` rational over some `F_{ℓ^k}` with `k ≤ max_k`.
pub fn select_curve(p: u64, max_ell: u64, max_k: u32) -> Result<CurveManifest> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not an odd prime")));
    }
    for ell in (5..=max_ell.min(MAX_POINT_COUNT_PRIME)).filter(|&l| l != p && is_prime(l)) {
        for a in 0..ell {
            for b in 0..ell {
                let Ok(spec) = CurveSpec::new(ell, a as i64, b as i64) else {
                    continue;
                };
                let n = point_count(&spec)?;
                if n % p != 0 {
                    continue;
                }
                let k = match full_torsion_field(&spec, p, max_k) {
                    Ok(k) => k,
                    Err(Error::ResourceLimit(_)) => continue,
                    Err(e) => return Err(e),
                };
                let field = build_extension(ell, k as usize)?;
                return Ok(CurveManifest {
                    p,
                    ell,
                    a,
                    b,
                    point_count: n,
                    embedding_degree: multiplicative_order(ell % p, p) as u32,
                    k,
                    extension_point_count: extension_point_count(&spec, k)?.to_string(),
                    defining_polynomial: field.modulus_poly().to_vec(),
                });
            }
        }
    }
    Err(Error::ResourceLimit(format!(
        "no curve with full {p}-torsion found for ell <= {max_ell}, k <= {max_k}"
    )))
}

impl CurveManifest {
    pub fn spec(&self) -> Result<CurveSpec> {
        CurveSpec::new(self.ell, self.a as i64, self.b as i64)
    }

    pub fn curve(&self) -> Result<Curve> {
        curve(&self.spec()?, self.k)
    }
}
