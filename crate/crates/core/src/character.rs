//! Characters of `Q_q^×` of conductor at most one, Gauss sums and the
//! epsilon factors of such characters.
//!
//! Characters are identified with characters of the Weil group through the
//! Artin map sending `q` to an inverse Frobenius, so the value of a character
//! at the uniformizer is its value on inverse Frobenius.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::prime::{factorize, mod_inv, reduce};
use crate::field::{is_prime, legendre_symbol, primitive_root, CyclotomicNumber};

/// A Dirichlet character modulo a prime `q`, `g^k ↦ ζ_{q−1}^{e·k}` for the
/// smallest primitive root `g`.
#[derive(Clone)]
pub struct MultiplicativeCharacter {
    modulus: u64,
    exponent: u64,
    /// `logs[x]` is the discrete log of `x` base `g`; index 0 unused.
    logs: Arc<Vec<u64>>,
}

impl PartialEq for MultiplicativeCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.exponent == other.exponent
    }
}

impl Eq for MultiplicativeCharacter {}

impl fmt::Debug for MultiplicativeCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplicativeCharacter")
            .field("modulus", &self.modulus)
            .field("exponent", &self.exponent)
            .field("order", &self.order())
            .finish()
    }
}

impl MultiplicativeCharacter {
    pub fn new(q: u64, exponent: i64) -> Result<Self> {
        let g = primitive_root(q)?.value();
        let mut logs = vec![0u64; q as usize];
        let mut x = 1u64;
        for k in 0..(q - 1) {
            logs[x as usize] = k;
            x = x * g % q;
        }
        Ok(Self {
            modulus: q,
            exponent: reduce(exponent, q - 1),
            logs: Arc::new(logs),
        })
    }

    pub fn trivial(q: u64) -> Result<Self> {
        Self::new(q, 0)
    }

    /// The quadratic character `(· / q)`.
    pub fn legendre(q: u64) -> Result<Self> {
        if q == 2 || !is_prime(q) {
            return Err(Error::InvalidField(format!(
                "the Legendre character needs an odd prime, got {q}"
            )));
        }
        Self::new(q, ((q - 1) / 2) as i64)
    }

    /// Every character modulo `q`, in order of exponent.
    pub fn all(q: u64) -> Result<Vec<Self>> {
        let base = Self::trivial(q)?;
        Ok((0..q - 1)
            .map(|e| Self {
                exponent: e,
                ..base.clone()
            })
            .collect())
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn order(&self) -> u64 {
        let n = self.modulus - 1;
        n / self.exponent.gcd(&n)
    }

    pub fn is_trivial(&self) -> bool {
        self.exponent == 0
    }

    pub fn inverse(&self) -> Self {
        let n = self.modulus - 1;
        Self {
            exponent: (n - self.exponent) % n,
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::PrimeMismatch(self.modulus, other.modulus));
        }
        let n = self.modulus - 1;
        Ok(Self {
            exponent: (self.exponent + other.exponent) % n,
            ..self.clone()
        })
    }

    /// `(d, j)` with `μ(x) = ζ_d^j`, `d` the order of `μ`.
    fn root_exponent(&self, x: u64) -> (u64, u64) {
        let n = self.modulus - 1;
        let d = self.order();
        let k = self.logs[x as usize];
        // ζ_n^{e k} = ζ_d^{(e / (n/d)) k}
        let e_reduced = self.exponent / (n / d);
        (d, (e_reduced * k) % d)
    }

    /// `μ(x)` for `x` prime to `q`.
    pub fn eval(&self, x: i64) -> Result<CyclotomicNumber> {
        let x = reduce(x, self.modulus);
        if x == 0 {
            return Err(Error::ZeroArgument);
        }
        let (d, j) = self.root_exponent(x);
        Ok(CyclotomicNumber::root_of_unity(d as usize, j as i64))
    }

    /// `μ(x)`, extended by `μ(0) = 0`.
    pub fn eval_or_zero(&self, x: i64) -> CyclotomicNumber {
        self.eval(x)
            .unwrap_or_else(|_| CyclotomicNumber::zero(self.order() as usize))
    }

    /// `μ(−1) ∈ {±1}`.
    pub fn sign(&self) -> i8 {
        if self.modulus == 2 {
            return 1;
        }
        let (d, j) = self.root_exponent(self.modulus - 1);
        if j == 0 {
            1
        } else {
            debug_assert_eq!(2 * j, d);
            -1
        }
    }
}

/// Gauss sum `G(μ) = Σ_{b ∈ F_q^×} μ(b) e^{2πib/q}` as an exact element of `Q(ζ_{qd})`.
pub fn gauss_sum(mu: &MultiplicativeCharacter) -> CyclotomicNumber {
    let q = mu.modulus;
    let d = mu.order();
    let m = (q * d) as usize;
    let mut coeffs = vec![BigRational::zero(); m];
    for b in 1..q {
        let (_, j) = mu.root_exponent(b);
        let idx = ((j * q + b * d) % m as u64) as usize;
        coeffs[idx] += BigRational::one();
    }
    CyclotomicNumber::from_coeffs(&coeffs)
}

/// Value of a character at the uniformizer: a positive rational times a
/// root of unity times a monomial in formal unramified units.
///
/// Formal units stand for unramified characters that are never pinned down,
/// such as the Satake parameters at primes away from the level.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UnitValue {
    magnitude: BigRational,
    /// `exp(2πi · num/den)`, with `0 ≤ num < den` and `gcd(num, den) = 1`.
    phase: (u64, u64),
    formal: BTreeMap<String, i64>,
}

fn reduce_phase(num: i64, den: u64) -> (u64, u64) {
    let n = num.rem_euclid(den as i64) as u64;
    if n == 0 {
        return (0, 1);
    }
    let g = n.gcd(&den);
    (n / g, den / g)
}

impl UnitValue {
    pub fn one() -> Self {
        Self {
            magnitude: BigRational::one(),
            phase: (0, 1),
            formal: BTreeMap::new(),
        }
    }

    pub fn rational(r: BigRational) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::Precondition("character values are nonzero".into()));
        }
        let phase = if r.is_negative() { (1, 2) } else { (0, 1) };
        Ok(Self {
            magnitude: r.abs(),
            phase,
            formal: BTreeMap::new(),
        })
    }

    pub fn integer(n: i64) -> Result<Self> {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `q^k` for a possibly negative `k`.
    pub fn prime_power(q: u64, k: i64) -> Self {
        let base = BigRational::from_integer(BigInt::from(q));
        let magnitude = if k >= 0 {
            num_traits::pow(base, k as usize)
        } else {
            num_traits::pow(base.recip(), (-k) as usize)
        };
        Self {
            magnitude,
            phase: (0, 1),
            formal: BTreeMap::new(),
        }
    }

    pub fn root_of_unity(k: i64, m: u64) -> Self {
        Self {
            magnitude: BigRational::one(),
            phase: reduce_phase(k, m),
            formal: BTreeMap::new(),
        }
    }

    /// An opaque unramified unit with the given name.
    pub fn formal(name: &str) -> Self {
        let mut formal = BTreeMap::new();
        formal.insert(name.to_string(), 1);
        Self {
            magnitude: BigRational::one(),
            phase: (0, 1),
            formal,
        }
    }

    pub fn magnitude(&self) -> &BigRational {
        &self.magnitude
    }

    pub fn phase(&self) -> (u64, u64) {
        self.phase
    }

    pub fn formal_part(&self) -> &BTreeMap<String, i64> {
        &self.formal
    }

    pub fn is_concrete(&self) -> bool {
        self.formal.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.magnitude.is_one() && self.phase == (0, 1) && self.formal.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let den = self.phase.1.lcm(&other.phase.1);
        let num = self.phase.0 * (den / self.phase.1) + other.phase.0 * (den / other.phase.1);
        let mut formal = self.formal.clone();
        for (k, e) in &other.formal {
            let entry = formal.entry(k.clone()).or_insert(0);
            *entry += e;
            if *entry == 0 {
                formal.remove(k);
            }
        }
        Self {
            magnitude: &self.magnitude * &other.magnitude,
            phase: reduce_phase(num as i64, den),
            formal,
        }
    }

    pub fn inv(&self) -> Self {
        Self {
            magnitude: self.magnitude.recip(),
            phase: reduce_phase(-(self.phase.0 as i64), self.phase.1),
            formal: self.formal.iter().map(|(k, e)| (k.clone(), -e)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.mul(&Self::root_of_unity(1, 2))
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// The sign when the value is a nonzero real rational.
    pub fn rational_value(&self) -> Option<BigRational> {
        if !self.is_concrete() {
            return None;
        }
        match self.phase {
            (0, 1) => Some(self.magnitude.clone()),
            (1, 2) => Some(-self.magnitude.clone()),
            _ => None,
        }
    }

    pub fn to_cyclotomic(&self) -> Result<CyclotomicNumber> {
        if !self.is_concrete() {
            return Err(Error::FormalValue(self.to_string()));
        }
        let (num, den) = self.phase;
        Ok(CyclotomicNumber::root_of_unity(den as usize, num as i64).scale(&self.magnitude))
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.phase {
            (0, 1) => parts.push(self.magnitude.to_string()),
            (1, 2) => parts.push(format!("-{}", self.magnitude)),
            (n, d) => parts.push(format!("{}*exp(2pi*i*{n}/{d})", self.magnitude)),
        }
        for (k, e) in &self.formal {
            parts.push(if *e == 1 {
                k.clone()
            } else {
                format!("{k}^{e}")
            });
        }
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for UnitValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A character of `Q_q^×` of conductor 0 or 1: its value at the uniformizer
/// and its restriction to `Z_q^×`, which factors through `F_q^×`.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalCharacter {
    prime: u64,
    uniformizer: UnitValue,
    ramified: Option<MultiplicativeCharacter>,
}

impl fmt::Debug for LocalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalCharacter(q={}, u={}", self.prime, self.uniformizer)?;
        if let Some(mu) = &self.ramified {
            write!(
                f,
                ", ramified exponent {} of order {}",
                mu.exponent,
                mu.order()
            )?;
        }
        write!(f, ")")
    }
}

impl LocalCharacter {
    pub fn unramified(prime: u64, uniformizer: UnitValue) -> Self {
        Self {
            prime,
            uniformizer,
            ramified: None,
        }
    }

    pub fn trivial(prime: u64) -> Self {
        Self::unramified(prime, UnitValue::one())
    }

    /// The norm character `ω_q`, unramified with `ω_q(Φ) = q^{-1}`.
    pub fn omega(prime: u64) -> Self {
        Self::unramified(prime, UnitValue::prime_power(prime, -1))
    }

    /// Character with the given value at `q` and restriction `mu` to the units.
    pub fn tame(prime: u64, uniformizer: UnitValue, mu: MultiplicativeCharacter) -> Result<Self> {
        if mu.modulus() != prime {
            return Err(Error::PrimeMismatch(prime, mu.modulus()));
        }
        Ok(Self {
            prime,
            uniformizer,
            ramified: (!mu.is_trivial()).then_some(mu),
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn uniformizer_value(&self) -> &UnitValue {
        &self.uniformizer
    }

    pub fn ramified_part(&self) -> Option<&MultiplicativeCharacter> {
        self.ramified.as_ref()
    }

    pub fn is_unramified(&self) -> bool {
        self.ramified.is_none()
    }

    /// Conductor exponent `a(μ) ∈ {0, 1}`.
    pub fn conductor(&self) -> u32 {
        u32::from(self.ramified.is_some())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch(self.prime, other.prime));
        }
        let ramified = match (&self.ramified, &other.ramified) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => Some(a.mul(b)?).filter(|c| !c.is_trivial()),
        };
        Ok(Self {
            prime: self.prime,
            uniformizer: self.uniformizer.mul(&other.uniformizer),
            ramified,
        })
    }

    pub fn inverse(&self) -> Self {
        Self {
            prime: self.prime,
            uniformizer: self.uniformizer.inv(),
            ramified: self.ramified.as_ref().map(MultiplicativeCharacter::inverse),
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::trivial(self.prime);
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base).expect("same prime");
        }
        acc
    }

    /// `μ(c)` for a unit `c`.
    pub fn value_at_unit(&self, c: i64) -> Result<CyclotomicNumber> {
        match &self.ramified {
            None => {
                if reduce(c, self.prime) == 0 {
                    return Err(Error::ZeroArgument);
                }
                Ok(CyclotomicNumber::one(1))
            }
            Some(mu) => mu.eval(c),
        }
    }

    /// `μ(x)` for nonzero rational `x = q^k u`.
    pub fn eval_rational(&self, x: &BigRational) -> Result<CyclotomicNumber> {
        let (k, unit) = split_rational(x, self.prime)?;
        let at_q = self.uniformizer.pow(k).to_cyclotomic()?;
        Ok(&at_q * &self.value_at_unit(unit as i64)?)
    }
}

/// `x = q^k · u` with `u` a `q`-adic unit; returns `(k, u mod q)`.
fn split_rational(x: &BigRational, q: u64) -> Result<(i64, u64)> {
    if x.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let qb = BigInt::from(q);
    let strip = |n: &BigInt| -> (i64, u64) {
        let mut n = n.abs();
        let mut k = 0;
        while (&n % &qb).is_zero() {
            n /= &qb;
            k += 1;
        }
        (k, (n % &qb).to_u64().expect("residue fits"))
    };
    let (kn, un) = strip(x.numer());
    let (kd, ud) = strip(x.denom());
    let mut unit = un * mod_inv(ud, q) % q;
    if x.is_negative() {
        unit = (q - unit) % q;
    }
    Ok((kn - kd, unit))
}

/// Additive character `ψ_c` of `Q_q` with `n(ψ) = 0` and `ψ(1/q) = e^{2πic/q}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AdditiveCharacter {
    prime: u64,
    c: u64,
}

impl AdditiveCharacter {
    pub fn new(prime: u64, c: i64) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::InvalidField(format!("{prime} is not prime")));
        }
        let c = reduce(c, prime);
        if c == 0 {
            return Err(Error::Precondition(
                "psi_c needs c in F_q^x (n(psi) = 0)".into(),
            ));
        }
        Ok(Self { prime, c })
    }

    pub fn standard(prime: u64) -> Result<Self> {
        Self::new(prime, 1)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    /// Largest `n` with `ψ` trivial on `q^{-n} Z_q`; always 0 here.
    pub fn level(&self) -> i32 {
        0
    }

    /// `ψ(b/q)` for an integer `b`.
    pub fn at_over_q(&self, b: i64) -> CyclotomicNumber {
        CyclotomicNumber::root_of_unity(self.prime as usize, b * self.c as i64)
    }
}

/// Haar measure on `Q_q` normalised by `∫_{Z_q} dx = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HaarMeasure {
    prime: u64,
}

impl HaarMeasure {
    pub fn normalized(prime: u64) -> Self {
        Self { prime }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn volume_of_integers(&self) -> BigRational {
        BigRational::one()
    }
}

/// `ε(μ, ψ, dx)` for a character of conductor at most one.
///
/// Unramified: `μω_q^{-1}(q^{n(ψ)}) ∫_{Z_q} dx = 1`. Conductor one:
/// `μ(c) μ(q) G(μ^{-1})` for `ψ = ψ_c`.
pub fn eps_character(
    mu: &LocalCharacter,
    psi: &AdditiveCharacter,
    dx: &HaarMeasure,
) -> Result<CyclotomicNumber> {
    if mu.prime != psi.prime {
        return Err(Error::PrimeMismatch(mu.prime, psi.prime));
    }
    if mu.prime != dx.prime {
        return Err(Error::PrimeMismatch(mu.prime, dx.prime));
    }
    match &mu.ramified {
        None => Ok(CyclotomicNumber::from_rational(dx.volume_of_integers())),
        Some(ramified) => {
            let at_c = ramified.eval(psi.c as i64)?;
            let at_q = mu.uniformizer.to_cyclotomic()?;
            let g = gauss_sum(&ramified.inverse());
            Ok(&(&at_c * &at_q) * &g)
        }
    }
}

/// `ε(σ ⊗ μ, ψ, dx) = μ(q^{a(σ)}) ε(σ, ψ, dx)` for unramified `μ` and `n(ψ) = 0`.
pub fn eps_unramified_twist(
    conductor: u32,
    _dimension: usize,
    mu: &LocalCharacter,
    eps_base: &CyclotomicNumber,
) -> Result<CyclotomicNumber> {
    if !mu.is_unramified() {
        return Err(Error::Precondition(
            "twisting formula needs an unramified character".into(),
        ));
    }
    // n(ψ) = 0, so the dimension term in the exponent vanishes
    if conductor == 0 {
        return Ok(eps_base.clone());
    }
    let factor = mu.uniformizer.pow(conductor as i64).to_cyclotomic()?;
    Ok(&factor * eps_base)
}

/// A place of `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Place {
    Infinity,
    Finite(u64),
}

/// The unitary Hecke character lifting the Legendre symbol modulo `p`.
#[derive(Clone, Debug)]
pub struct HeckeCharacterFamily {
    p: u64,
    chi: MultiplicativeCharacter,
}

/// Lift `(· / p)` to a character of `A_Q^× / Q^×`.
pub fn hecke_lift(p: u64) -> Result<HeckeCharacterFamily> {
    Ok(HeckeCharacterFamily {
        p,
        chi: MultiplicativeCharacter::legendre(p)?,
    })
}

impl HeckeCharacterFamily {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dirichlet_character(&self) -> &MultiplicativeCharacter {
        &self.chi
    }

    /// `χ_∞(x)`: trivial when `χ(−1) = 1`, the sign of `x` otherwise.
    pub fn infinity_component(&self, x: &BigRational) -> i8 {
        if self.chi.sign() == 1 || x.is_positive() {
            1
        } else {
            -1
        }
    }

    /// `χ_ℓ` as a local character: unramified with `χ_ℓ(ℓ) = (ℓ / p)` for `ℓ ≠ p`;
    /// at `p`, `χ_p(p) = 1` and `χ_p` restricted to units is `χ^{-1}`.
    pub fn local_character(&self, ell: u64) -> Result<LocalCharacter> {
        if !is_prime(ell) {
            return Err(Error::InvalidField(format!("{ell} is not prime")));
        }
        if ell == self.p {
            LocalCharacter::tame(ell, UnitValue::one(), self.chi.inverse())
        } else {
            Ok(LocalCharacter::unramified(
                ell,
                UnitValue::integer(legendre_symbol(ell as i64, self.p)? as i64)?,
            ))
        }
    }

    pub fn eval(&self, place: Place, x: &BigRational) -> Result<CyclotomicNumber> {
        if x.is_zero() {
            return Err(Error::ZeroArgument);
        }
        match place {
            Place::Infinity => Ok(CyclotomicNumber::from_integer(
                self.infinity_component(x) as i64
            )),
            Place::Finite(ell) => self.local_character(ell)?.eval_rational(x),
        }
    }

    /// Places where `χ_v(x)` can differ from 1: `∞`, `p`, and the primes dividing `x`.
    pub fn support(&self, x: &BigRational) -> Vec<Place> {
        let mut primes: Vec<u64> = vec![self.p];
        for part in [x.numer(), x.denom()] {
            let n = part.abs().to_u64().expect("desk-scale rational");
            primes.extend(factorize(n).into_iter().map(|(r, _)| r));
        }
        primes.sort_unstable();
        primes.dedup();
        std::iter::once(Place::Infinity)
            .chain(primes.into_iter().map(Place::Finite))
            .collect()
    }
}

/// `∏_v χ_v(x)` over the support of `x`; equals 1 because `χ_A` is trivial on `Q^×`.
pub fn hecke_product_check(
    family: &HeckeCharacterFamily,
    x: &BigRational,
) -> Result<CyclotomicNumber> {
    family
        .support(x)
        .into_iter()
        .try_fold(CyclotomicNumber::one(1), |acc, v| {
            Ok(&acc * &family.eval(v, x)?)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn cyc(n: i64) -> CyclotomicNumber {
        CyclotomicNumber::from_integer(n)
    }

    #[test]
    fn char_eval_examples() {
        assert_eq!(
            MultiplicativeCharacter::trivial(7)
                .unwrap()
                .eval(3)
                .unwrap(),
            cyc(1)
        );
        let leg = MultiplicativeCharacter::legendre(5).unwrap();
        assert_eq!(leg.eval(2).unwrap(), cyc(-1));
        assert_eq!(leg.eval(4).unwrap(), cyc(1));
        assert_eq!(leg.eval(0), Err(Error::ZeroArgument));
        assert!(leg.eval_or_zero(5).is_zero());
    }

    #[test]
    fn legendre_character_matches_symbol() {
        for p in [3u64, 5, 7, 11, 13, 97] {
            let leg = MultiplicativeCharacter::legendre(p).unwrap();
            for a in 1..p as i64 {
                assert_eq!(
                    leg.eval(a).unwrap(),
                    cyc(legendre_symbol(a, p).unwrap() as i64)
                );
            }
            assert_eq!(leg.sign(), legendre_symbol(-1, p).unwrap());
        }
    }

    #[test]
    fn characters_are_homomorphisms() {
        for q in [5u64, 7, 13] {
            for mu in MultiplicativeCharacter::all(q).unwrap() {
                for a in 1..q as i64 {
                    for b in 1..q as i64 {
                        assert_eq!(
                            mu.eval(a * b).unwrap(),
                            &mu.eval(a).unwrap() * &mu.eval(b).unwrap()
                        );
                    }
                    assert_eq!(
                        &mu.eval(a).unwrap() * &mu.inverse().eval(a).unwrap(),
                        cyc(1)
                    );
                }
            }
        }
    }

    #[test]
    fn gauss_sum_of_trivial_character() {
        for q in [3u64, 5, 11, 13] {
            assert_eq!(
                gauss_sum(&MultiplicativeCharacter::trivial(q).unwrap()),
                cyc(-1)
            );
        }
    }

    #[test]
    fn quadratic_gauss_sum_squares() {
        let g = gauss_sum(&MultiplicativeCharacter::legendre(5).unwrap());
        assert_eq!(&g * &g, cyc(5));
        let g = gauss_sum(&MultiplicativeCharacter::legendre(7).unwrap());
        assert_eq!(&g * &g, cyc(-7));
        // the quadratic Gauss sum equals Σ ζ^{n²}
        let p = 13;
        let direct = (0..p).fold(CyclotomicNumber::zero(p as usize), |acc, n| {
            &acc + &CyclotomicNumber::root_of_unity(p as usize, n * n)
        });
        assert_eq!(
            gauss_sum(&MultiplicativeCharacter::legendre(13).unwrap()),
            direct
        );
    }

    #[test]
    fn gauss_sum_conjugation_law() {
        for q in [5u64, 7, 11, 13] {
            for mu in MultiplicativeCharacter::all(q).unwrap() {
                let lhs = gauss_sum(&mu.inverse());
                let rhs = gauss_sum(&mu).conjugate().scale(&rat(mu.sign() as i64, 1));
                assert_eq!(lhs, rhs);
                if !mu.is_trivial() {
                    let g = gauss_sum(&mu);
                    assert_eq!(&g * &g.conjugate(), cyc(q as i64));
                    assert!((g.to_complex().norm_sqr() - q as f64).abs() < 1e-9);
                }
            }
        }
    }

    /// `ε(μ, ψ_c, dx) = ∫_{q^{-1}Z_q^×} μ^{-1}(x) ψ_c(x) dx`, summed over the
    /// cosets `q^{-1}(b + qZ_q)`, each of volume 1.
    fn eps_by_integral(mu: &LocalCharacter, c: i64) -> CyclotomicNumber {
        let q = mu.prime();
        let inv = mu.inverse();
        // μ^{-1}(q^{-1} b) = μ(q) μ^{-1}(b)
        let at_inverse_q = mu.uniformizer_value().to_cyclotomic().unwrap();
        (1..q as i64).fold(CyclotomicNumber::zero(1), |acc, b| {
            let term = &inv.value_at_unit(b).unwrap()
                * &CyclotomicNumber::root_of_unity(q as usize, c * b);
            &acc + &(&term * &at_inverse_q)
        })
    }

    #[test]
    fn eps_character_matches_integral_definition() {
        for q in [5u64, 7, 11] {
            let dx = HaarMeasure::normalized(q);
            for mu in MultiplicativeCharacter::all(q).unwrap().into_iter().skip(1) {
                for u in [
                    UnitValue::one(),
                    UnitValue::integer(-1).unwrap(),
                    UnitValue::prime_power(q, 2),
                ] {
                    let local = LocalCharacter::tame(q, u, mu.clone()).unwrap();
                    for c in 1..q as i64 {
                        let psi = AdditiveCharacter::new(q, c).unwrap();
                        assert_eq!(
                            eps_character(&local, &psi, &dx).unwrap(),
                            eps_by_integral(&local, c)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn eps_unramified_is_one_even_for_formal_units() {
        let dx = HaarMeasure::normalized(13);
        let psi = AdditiveCharacter::new(13, 4).unwrap();
        for u in [
            UnitValue::formal("xi"),
            UnitValue::prime_power(13, -3),
            UnitValue::integer(-1).unwrap(),
        ] {
            let mu = LocalCharacter::unramified(13, u);
            assert_eq!(eps_character(&mu, &psi, &dx).unwrap(), cyc(1));
        }
    }

    #[test]
    fn eps_of_chi_p_is_gauss_sum() {
        let family = hecke_lift(5).unwrap();
        let chi_p = family.local_character(5).unwrap();
        let psi = AdditiveCharacter::standard(5).unwrap();
        let eps = eps_character(&chi_p, &psi, &HaarMeasure::normalized(5)).unwrap();
        assert_eq!(
            eps,
            gauss_sum(&MultiplicativeCharacter::legendre(5).unwrap())
        );
    }

    #[test]
    fn eps_times_eps_inverse() {
        for q in [3u64, 5, 7, 11, 13] {
            let dx = HaarMeasure::normalized(q);
            for mu in MultiplicativeCharacter::all(q).unwrap().into_iter().skip(1) {
                let local = LocalCharacter::tame(q, UnitValue::one(), mu.clone()).unwrap();
                for c in 1..q as i64 {
                    let psi = AdditiveCharacter::new(q, c).unwrap();
                    let prod = &eps_character(&local, &psi, &dx).unwrap()
                        * &eps_character(&local.inverse(), &psi, &dx).unwrap();
                    assert_eq!(prod, cyc(q as i64 * mu.sign() as i64));
                }
            }
        }
    }

    #[test]
    fn unramified_twist_examples() {
        let q = 7;
        let dx = HaarMeasure::normalized(q);
        let psi = AdditiveCharacter::standard(q).unwrap();
        let nu = LocalCharacter::tame(
            q,
            UnitValue::one(),
            MultiplicativeCharacter::new(q, 1).unwrap(),
        )
        .unwrap();
        let base = eps_character(&nu, &psi, &dx).unwrap();
        let omega = LocalCharacter::omega(q);
        assert_eq!(
            eps_unramified_twist(1, 1, &omega, &base).unwrap(),
            base.scale(&rat(1, 7))
        );
        assert_eq!(
            eps_unramified_twist(
                0,
                1,
                &LocalCharacter::unramified(q, UnitValue::formal("xi")),
                &cyc(1)
            )
            .unwrap(),
            cyc(1)
        );
        // twisting a conductor-one character multiplies ε by μ(q)
        for u in [
            UnitValue::integer(-1).unwrap(),
            UnitValue::prime_power(q, -2),
            UnitValue::root_of_unity(1, 3),
        ] {
            let mu = LocalCharacter::unramified(q, u.clone());
            let twisted = eps_character(&nu.mul(&mu).unwrap(), &psi, &dx).unwrap();
            assert_eq!(twisted, &u.to_cyclotomic().unwrap() * &base);
            assert_eq!(twisted, eps_unramified_twist(1, 1, &mu, &base).unwrap());
        }
        assert!(eps_unramified_twist(1, 1, &nu, &base).is_err());
        assert!(matches!(
            eps_unramified_twist(
                1,
                1,
                &LocalCharacter::unramified(q, UnitValue::formal("xi")),
                &base
            ),
            Err(Error::FormalValue(_))
        ));
    }

    #[test]
    fn conductor_two_is_not_representable() {
        // conductor is 0 or 1 by construction; the trivial ramified part collapses
        let c = LocalCharacter::tame(
            5,
            UnitValue::one(),
            MultiplicativeCharacter::trivial(5).unwrap(),
        )
        .unwrap();
        assert_eq!(c.conductor(), 0);
        let l = LocalCharacter::tame(
            5,
            UnitValue::one(),
            MultiplicativeCharacter::legendre(5).unwrap(),
        )
        .unwrap();
        assert_eq!(l.conductor(), 1);
        assert_eq!(l.mul(&l).unwrap().conductor(), 0);
    }

    #[test]
    fn hecke_lift_examples() {
        let f5 = hecke_lift(5).unwrap();
        let x3 = BigRational::from_integer(BigInt::from(3));
        assert_eq!(f5.eval(Place::Finite(3), &x3).unwrap(), cyc(-1));
        let x5 = BigRational::from_integer(BigInt::from(5));
        assert_eq!(f5.eval(Place::Finite(5), &x5).unwrap(), cyc(1));
        let f7 = hecke_lift(7).unwrap();
        assert_eq!(f7.infinity_component(&rat(-1, 1)), -1);
        assert_eq!(f5.infinity_component(&rat(-1, 1)), 1);
    }

    #[test]
    fn hecke_character_is_trivial_on_rationals() {
        let xs = [
            rat(1, 1),
            rat(-1, 1),
            rat(2, 1),
            rat(-2, 1),
            rat(3, 1),
            rat(-3, 1),
            rat(6, 5),
        ];
        for p in [5u64, 7, 11, 13, 17, 19, 23] {
            let fam = hecke_lift(p).unwrap();
            let pp = p as i64;
            for x in xs
                .iter()
                .cloned()
                .chain([rat(pp, 1), rat(1, pp), rat(-pp, 1)])
            {
                assert_eq!(
                    hecke_product_check(&fam, &x).unwrap(),
                    cyc(1),
                    "p={p} x={x}"
                );
            }
        }
    }

    #[test]
    fn unit_value_arithmetic() {
        let a = UnitValue::integer(-3).unwrap();
        assert_eq!(a.rational_value(), Some(rat(-3, 1)));
        assert!(a.mul(&a.inv()).is_one());
        let xi = UnitValue::formal("xi");
        let prod = xi.mul(&xi.inv()).mul(&UnitValue::prime_power(5, 2));
        assert!(prod.is_concrete());
        assert_eq!(prod.rational_value(), Some(rat(25, 1)));
        assert_eq!(
            UnitValue::root_of_unity(2, 4),
            UnitValue::integer(-1).unwrap()
        );
        assert!(xi.to_cyclotomic().is_err());
        assert_eq!(UnitValue::root_of_unity(1, 3).pow(3), UnitValue::one());
    }
}
