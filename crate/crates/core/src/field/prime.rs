//! Prime fields, quadratic residues, primitive roots and brute-force
//! discrete logarithms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Trial-division primality test. Desk-scale inputs only.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub(crate) fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = m as u128;
    let mut b = (base % m) as u128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Reduce a signed integer into `[0, m)`.
pub fn reduce(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

/// Inverse modulo a prime via Fermat.
pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    mod_pow(a, p - 2, p)
}

/// Multiplicative order of `a` modulo `m`, for `gcd(a, m) = 1`.
pub fn multiplicative_order(a: u64, m: u64) -> u64 {
    let phi = totient(m);
    let mut order = phi;
    for (r, _) in factorize(phi) {
        while order.is_multiple_of(r) && mod_pow(a, order / r, m) == 1 {
            order /= r;
        }
    }
    order
}

pub fn totient(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (r, _)| acc / r * (r - 1))
}

/// Möbius function.
pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The prime field `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::InvalidField(format!("{q} is not prime")));
        }
        Ok(Self { q })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn elem(&self, value: i64) -> FpElement {
        FpElement {
            value: reduce(value, self.q),
            modulus: self.q,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FpElement> + '_ {
        (0..self.q).map(move |v| FpElement {
            value: v,
            modulus: self.q,
        })
    }
}

/// An element of `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FpElement {
    value: u64,
    modulus: u64,
}

impl FpElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(&self, exp: u64) -> Self {
        Self {
            value: mod_pow(self.value, exp, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.value == 0 {
            return Err(Error::ZeroArgument);
        }
        Ok(Self {
            value: mod_inv(self.value, self.modulus),
            modulus: self.modulus,
        })
    }

    fn with(&self, value: u64) -> Self {
        Self {
            value,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for FpElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        self.with((self.value + rhs.value) % self.modulus)
    }
}

impl Sub for FpElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        self.with((self.value + self.modulus - rhs.value) % self.modulus)
    }
}

impl Mul for FpElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        self.with(((self.value as u128 * rhs.value as u128) % self.modulus as u128) as u64)
    }
}

impl Neg for FpElement {
    type Output = Self;
    fn neg(self) -> Self {
        self.with((self.modulus - self.value) % self.modulus)
    }
}

/// Legendre symbol `(a / p)` for an odd prime `p`.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidField(format!(
            "Legendre symbol needs an odd prime, got {p}"
        )));
    }
    let a = reduce(a, p);
    if a == 0 {
        return Ok(0);
    }
    Ok(if mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    })
}

/// Smallest positive integer generating `F_q^×`.
pub fn primitive_root(q: u64) -> Result<FpElement> {
    let field = PrimeField::new(q)?;
    if q == 2 {
        return Ok(field.elem(1));
    }
    let factors = factorize(q - 1);
    let g = (2..q)
        .find(|&g| {
            factors
                .iter()
                .all(|&(r, _)| mod_pow(g, (q - 1) / r, q) != 1)
        })
        .expect("every prime field has a primitive root");
    Ok(field.elem(g as i64))
}

/// Smallest positive quadratic non-residue modulo an odd prime.
pub fn smallest_nonsquare(p: u64) -> Result<u64> {
    for a in 2..p {
        if legendre_symbol(a as i64, p)? == -1 {
            return Ok(a);
        }
    }
    Err(Error::InvalidField(format!("no non-residue modulo {p}")))
}

/// Minimal multiplicative interface needed by [`discrete_log`].
pub trait MulGroupElement: Clone + PartialEq {
    fn identity_like(&self) -> Self;
    fn group_mul(&self, other: &Self) -> Self;
}

impl MulGroupElement for FpElement {
    fn identity_like(&self) -> Self {
        self.with(1 % self.modulus)
    }
    fn group_mul(&self, other: &Self) -> Self {
        *self * *other
    }
}

fn group_pow<T: MulGroupElement>(base: &T, exp: u64) -> T {
    let mut acc = base.identity_like();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.group_mul(&b);
        }
        b = b.group_mul(&b);
        e >>= 1;
    }
    acc
}

/// Exponent `e ∈ [0, order)` with `base^e = value`, by linear scan.
///
/// `base` must have exact multiplicative order `order`.
pub fn discrete_log<T: MulGroupElement>(base: &T, value: &T, order: u64) -> Result<u64> {
    let one = base.identity_like();
    if order == 0 || group_pow(base, order) != one {
        return Err(Error::Precondition(format!(
            "base does not have order dividing {order}"
        )));
    }
    for (r, _) in factorize(order) {
        if group_pow(base, order / r) == one {
            return Err(Error::Precondition(format!(
                "base does not have exact order {order}"
            )));
        }
    }
    let mut acc = one;
    for e in 0..order {
        if &acc == value {
            return Ok(e);
        }
        acc = acc.group_mul(base);
    }
    Err(Error::NotInSubgroup)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_symbol(1, 7).unwrap(), 1);
        assert_eq!(legendre_symbol(2, 5).unwrap(), -1);
        assert_eq!(legendre_symbol(4, 5).unwrap(), 1);
        assert_eq!(legendre_symbol(10, 5).unwrap(), 0);
        assert!(legendre_symbol(3, 2).is_err());
        assert!(legendre_symbol(3, 9).is_err());
    }

    #[test]
    fn legendre_matches_square_enumeration() {
        for p in [3u64, 5, 7, 11, 13, 97] {
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 1..p {
                let expected = if squares.contains(&a) { 1 } else { -1 };
                assert_eq!(legendre_symbol(a as i64, p).unwrap(), expected);
            }
        }
    }

    #[test]
    fn legendre_is_multiplicative() {
        for p in (3..=97).filter(|&p| is_prime(p)) {
            for a in 1..p as i64 {
                for b in 1..p as i64 {
                    assert_eq!(
                        legendre_symbol(a * b, p).unwrap(),
                        legendre_symbol(a, p).unwrap() * legendre_symbol(b, p).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(5).unwrap().value(), 2);
        assert_eq!(primitive_root(7).unwrap().value(), 3);
        assert_eq!(primitive_root(2).unwrap().value(), 1);
        assert_eq!(primitive_root(23).unwrap().value(), 5);
        assert!(primitive_root(15).is_err());
    }

    #[test]
    fn discrete_log_in_f11() {
        let f = PrimeField::new(11).unwrap();
        let zeta = f.elem(3);
        assert_eq!(multiplicative_order(3, 11), 5);
        assert_eq!(discrete_log(&zeta, &f.elem(1), 5).unwrap(), 0);
        assert_eq!(discrete_log(&zeta, &zeta, 5).unwrap(), 1);
        assert_eq!(discrete_log(&zeta, &zeta.pow(3), 5).unwrap(), 3);
        assert_eq!(
            discrete_log(&zeta, &f.elem(2), 5),
            Err(Error::NotInSubgroup)
        );
        // 2 has order 10, not 5
        assert!(discrete_log(&f.elem(2), &f.elem(4), 5).is_err());
    }

    #[test]
    fn arithmetic_helpers() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(totient(36), 12);
        assert_eq!(moebius(30), -1);
        assert_eq!(moebius(12), 0);
        assert_eq!(smallest_nonsquare(7).unwrap(), 3);
        assert_eq!(smallest_nonsquare(17).unwrap(), 3);
        let f = PrimeField::new(13).unwrap();
        for a in 1..13 {
            let x = f.elem(a);
            assert_eq!(x * x.inv().unwrap(), f.elem(1));
        }
        assert!(f.elem(0).inv().is_err());
    }
}
