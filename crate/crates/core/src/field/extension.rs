//! Finite fields `F_{ℓ^k}` as `F_ℓ[x] / (f)` for the lexicographically
//! smallest monic irreducible `f` of degree `k`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use super::prime::{factorize, is_prime, mod_inv, MulGroupElement};
use crate::error::{Error, Result};

/// Dense polynomial over `F_ℓ`, lowest degree first, no trailing zeros.
type Poly = Vec<u64>;

fn trim(p: &mut Poly) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn poly_rem(a: &[u64], m: &[u64], ell: u64) -> Poly {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], ell);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % ell;
        for (i, &mi) in m.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + ell - c * mi % ell) % ell;
        }
        trim(&mut r);
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], ell: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % ell;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[u64], b: &[u64], ell: u64) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + ell - y) % ell
        })
        .collect();
    trim(&mut out);
    out
}

fn poly_gcd(a: &[u64], b: &[u64], ell: u64) -> Poly {
    let mut a: Poly = a.to_vec();
    let mut b: Poly = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, ell);
        a = b;
        b = r;
    }
    a
}

/// `x^(ℓ^d) mod f`, by repeated ℓ-th powering.
fn frobenius_power_of_x(f: &[u64], ell: u64, d: usize) -> Poly {
    let mut acc = poly_rem(&[0, 1], f, ell);
    for _ in 0..d {
        acc = poly_pow_mod(&acc, ell, f, ell);
    }
    acc
}

fn poly_pow_mod(base: &[u64], mut e: u64, f: &[u64], ell: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = poly_rem(base, f, ell);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &b, ell), f, ell);
        }
        b = poly_rem(&poly_mul(&b, &b, ell), f, ell);
        e >>= 1;
    }
    acc
}

/// Rabin's irreducibility test for a monic `f` of degree `k`:
/// `x^(ℓ^k) ≡ x (mod f)` and `gcd(x^(ℓ^(k/r)) − x, f) = 1` for every prime `r | k`.
pub fn is_irreducible(f: &[u64], ell: u64) -> bool {
    let k = f.len() - 1;
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    let top = frobenius_power_of_x(f, ell, k);
    if !poly_sub(&top, &x, ell).is_empty() {
        return false;
    }
    factorize(k as u64).into_iter().all(|(r, _)| {
        let h = poly_sub(&frobenius_power_of_x(f, ell, k / r as usize), &x, ell);
        poly_gcd(&h, f, ell).len() == 1
    })
}

/// Descriptor of `F_{ℓ^k}`.
#[derive(Debug, PartialEq, Eq)]
pub struct ExtField {
    ell: u64,
    degree: usize,
    /// Monic defining polynomial, lowest degree first, length `k + 1`.
    modulus: Vec<u64>,
    order: BigUint,
}

/// Lexicographically smallest monic irreducible polynomial of degree `k`
/// over `F_ℓ`, comparing coefficients from `x^(k-1)` down to the constant.
pub fn build_extension(ell: u64, k: usize) -> Result<Arc<ExtField>> {
    if !is_prime(ell) {
        return Err(Error::InvalidField(format!("{ell} is not prime")));
    }
    if k == 0 {
        return Err(Error::InvalidField(
            "extension degree must be positive".into(),
        ));
    }
    let mut digits = vec![0u64; k];
    loop {
        let mut f = digits.clone();
        f.push(1);
        if is_irreducible(&f, ell) {
            return Ok(Arc::new(ExtField {
                ell,
                degree: k,
                modulus: f,
                order: BigUint::from(ell).pow(k as u32),
            }));
        }
        // increment as a base-ℓ counter with the constant term least significant
        let mut i = 0;
        loop {
            if i == k {
                return Err(Error::Inconsistency(format!(
                    "no irreducible polynomial of degree {k} over F_{ell}"
                )));
            }
            digits[i] += 1;
            if digits[i] < ell {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

impl ExtField {
    pub fn characteristic(&self) -> u64 {
        self.ell
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus_poly(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of elements, `ℓ^k`.
    pub fn order(&self) -> &BigUint {
        &self.order
    }
}

/// Element of an [`ExtField`], stored as `k` coefficients in `F_ℓ`.
#[derive(Clone)]
pub struct ExtFieldElement {
    coeffs: Vec<u64>,
    field: Arc<ExtField>,
}

impl PartialEq for ExtFieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
            && (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field)
    }
}

impl Eq for ExtFieldElement {}

impl fmt::Debug for ExtFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExtFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl ExtFieldElement {
    pub fn zero(field: &Arc<ExtField>) -> Self {
        Self {
            coeffs: vec![0; field.degree],
            field: Arc::clone(field),
        }
    }

    pub fn one(field: &Arc<ExtField>) -> Self {
        Self::from_base(field, 1)
    }

    /// Image of an integer under `Z → F_ℓ ⊂ F_{ℓ^k}`.
    pub fn from_base(field: &Arc<ExtField>, value: i64) -> Self {
        let mut e = Self::zero(field);
        let v = value.rem_euclid(field.ell as i64) as u64;
        // k = 1 uses the polynomial x, so every constant is already reduced
        e.coeffs[0] = v;
        e
    }

    pub fn from_coeffs(field: &Arc<ExtField>, coeffs: &[u64]) -> Self {
        let reduced: Vec<u64> = coeffs.iter().map(|c| c % field.ell).collect();
        let mut r = poly_rem(&reduced, &field.modulus, field.ell);
        r.resize(field.degree, 0);
        Self {
            coeffs: r,
            field: Arc::clone(field),
        }
    }

    pub fn random<R: Rng + ?Sized>(field: &Arc<ExtField>, rng: &mut R) -> Self {
        let coeffs = (0..field.degree)
            .map(|_| rng.gen_range(0..field.ell))
            .collect();
        Self {
            coeffs,
            field: Arc::clone(field),
        }
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn ell(&self) -> u64 {
        self.field.ell
    }

    fn same_field(&self, other: &Self) {
        debug_assert!(Arc::ptr_eq(&self.field, &other.field) || self.field == other.field);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        let ell = self.ell();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % ell)
            .collect();
        Self {
            coeffs,
            field: Arc::clone(&self.field),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        let ell = self.ell();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + ell - b) % ell)
            .collect();
        Self {
            coeffs,
            field: Arc::clone(&self.field),
        }
    }

    pub fn neg(&self) -> Self {
        Self::zero(&self.field).sub(self)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        let ell = self.ell();
        let k = self.field.degree;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % ell;
            }
        }
        // the modulus is monic of degree k
        let m = &self.field.modulus;
        for top in (k..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for i in 0..k {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + ell - c * m[i] % ell) % ell;
            }
        }
        prod.truncate(k);
        Self {
            coeffs: prod,
            field: Arc::clone(&self.field),
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn scale(&self, c: u64) -> Self {
        let ell = self.ell();
        let c = c % ell;
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c % ell).collect(),
            field: Arc::clone(&self.field),
        }
    }

    pub fn pow(&self, exp: &BigUint) -> Self {
        let mut acc = Self::one(&self.field);
        for i in (0..exp.bits()).rev() {
            acc = acc.square();
            if exp.bit(i) {
                acc = acc.mul(self);
            }
        }
        acc
    }

    pub fn pow_u64(&self, exp: u64) -> Self {
        self.pow(&BigUint::from(exp))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm in `F_ℓ[x]`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let ell = self.ell();
        let mut r0: Poly = self.field.modulus.clone();
        let mut r1: Poly = self.coeffs.clone();
        trim(&mut r1);
        let mut s0: Poly = Vec::new();
        let mut s1: Poly = vec![1];
        while r1.len() > 1 {
            // polynomial division r0 = q r1 + r
            let mut rem = r0.clone();
            let d1 = r1.len() - 1;
            let lead_inv = mod_inv(r1[d1], ell);
            let mut quot = vec![0u64; rem.len().saturating_sub(d1)];
            while rem.len() > d1 {
                let shift = rem.len() - 1 - d1;
                let c = rem[rem.len() - 1] * lead_inv % ell;
                quot[shift] = c;
                for (i, &ri) in r1.iter().enumerate() {
                    rem[shift + i] = (rem[shift + i] + ell - c * ri % ell) % ell;
                }
                trim(&mut rem);
            }
            trim(&mut quot);
            let s2 = poly_sub(&s0, &poly_mul(&quot, &s1, ell), ell);
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant since the modulus is irreducible
        let c = mod_inv(r1[0], ell);
        let inv: Poly = s1.iter().map(|a| a * c % ell).collect();
        Ok(Self::from_coeffs(&self.field, &inv))
    }

    /// Quadratic-residue test by Euler's criterion (odd characteristic).
    pub fn is_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let e = (self.field.order.clone() - 1u32) >> 1;
        self.pow(&e).is_one()
    }

    /// A square root by Tonelli–Shanks, or `None` for non-residues.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if !self.is_square() {
            return None;
        }
        let field = &self.field;
        let q_minus_1 = field.order.clone() - 1u32;
        let s = q_minus_1.trailing_zeros().unwrap_or(0);
        let t = &q_minus_1 >> s;
        let z = non_residue(field);
        let mut m = s;
        let mut c = z.pow(&t);
        let mut tt = self.pow(&t);
        let mut r = self.pow(&((&t + 1u32) >> 1));
        while !tt.is_one() {
            let mut i = 0;
            let mut probe = tt.clone();
            while !probe.is_one() {
                probe = probe.square();
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            m = i;
            c = b.square();
            tt = tt.mul(&c);
            r = r.mul(&b);
        }
        Some(r)
    }
}

fn non_residue(field: &Arc<ExtField>) -> ExtFieldElement {
    let e = (field.order.clone() - 1u32) >> 1;
    let minus_one = ExtFieldElement::from_base(field, -1);
    // enumerate elements in base-ℓ counter order; the first non-residue is deterministic
    let mut digits = vec![0u64; field.degree];
    loop {
        let cand = ExtFieldElement::from_coeffs(field, &digits);
        if !cand.is_zero() && cand.pow(&e) == minus_one {
            return cand;
        }
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < field.ell {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

impl MulGroupElement for ExtFieldElement {
    fn identity_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn group_mul(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

impl ExtFieldElement {
    /// Multiplicative order, for nonzero elements.
    pub fn multiplicative_order(&self) -> Result<BigUint> {
        if self.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let n = self.field.order.clone() - 1u32;
        let mut order = n.clone();
        // ℓ^k − 1 can be large; factor it with trial division over u64 when it fits
        let small = u64::try_from(&n).map_err(|_| {
            Error::ResourceLimit("multiplicative order of a field larger than 2^64".into())
        })?;
        for (r, _) in factorize(small) {
            let r = BigUint::from(r);
            while (&order % &r).is_zero() && self.pow(&(&order / &r)).is_one() {
                order /= &r;
            }
        }
        Ok(order)
    }
}
