//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.
//!
//! Elements are stored in the group ring `Q[x]/(x^m − 1)` with a single
//! common denominator; two elements are equal when their difference vanishes
//! at `ζ_m`. The vanishing test multiplies by `∏_{r | m prime} (1 − x^{m/r})`,
//! which kills every non-primitive component of the group ring, so an element
//! is zero in `Q(ζ_m)` exactly when that product is zero in the group ring.
//! The division-based route through `Φ_m` ([`cyclotomic_polynomial`],
//! [`CyclotomicNumber::reduced`]) gives the canonical coordinates used for
//! serialization.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::prime::{factorize, moebius, totient, MulGroupElement};

#[derive(Clone)]
pub struct CyclotomicNumber {
    modulus: usize,
    numer: Vec<BigInt>,
    denom: BigInt,
}

impl CyclotomicNumber {
    pub fn zero(modulus: usize) -> Self {
        assert!(modulus > 0, "cyclotomic modulus must be positive");
        Self {
            modulus,
            numer: vec![BigInt::zero(); modulus],
            denom: BigInt::one(),
        }
    }

    pub fn one(modulus: usize) -> Self {
        Self::root_of_unity(modulus, 0)
    }

    /// `ζ_m^k`.
    pub fn root_of_unity(modulus: usize, k: i64) -> Self {
        let mut z = Self::zero(modulus);
        z.numer[k.rem_euclid(modulus as i64) as usize] = BigInt::one();
        z
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self {
            modulus: 1,
            numer: vec![r.numer().clone()],
            denom: r.denom().clone(),
        }
        .normalized()
    }

    /// Element `Σ coeffs[k] x^k` of `Q[x]/(x^m − 1)` with `m = coeffs.len()`.
    pub fn from_coeffs(coeffs: &[BigRational]) -> Self {
        let modulus = coeffs.len();
        assert!(modulus > 0, "cyclotomic modulus must be positive");
        let denom = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numer = coeffs
            .iter()
            .map(|c| c.numer() * (&denom / c.denom()))
            .collect();
        Self {
            modulus,
            numer,
            denom,
        }
        .normalized()
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// Group-ring coefficients (length `m`), not reduced modulo `Φ_m`.
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.numer
            .iter()
            .map(|n| BigRational::new(n.clone(), self.denom.clone()))
            .collect()
    }

    fn normalized(mut self) -> Self {
        let mut g = self.denom.clone();
        for n in &self.numer {
            if g.is_one() {
                break;
            }
            g = g.gcd(n);
        }
        if self.denom.is_negative() {
            g = -g;
        }
        if !g.is_one() && !g.is_zero() {
            for n in &mut self.numer {
                *n = &*n / &g;
            }
            self.denom = &self.denom / &g;
        }
        self
    }

    /// Same element viewed in `Q(ζ_target)`; `target` must be a multiple of the modulus.
    pub fn lift(&self, target: usize) -> Self {
        assert!(
            target.is_multiple_of(self.modulus),
            "cannot lift Q(zeta_{}) into Q(zeta_{target})",
            self.modulus
        );
        if target == self.modulus {
            return self.clone();
        }
        let step = target / self.modulus;
        let mut numer = vec![BigInt::zero(); target];
        for (k, c) in self.numer.iter().enumerate() {
            if !c.is_zero() {
                numer[k * step] = c.clone();
            }
        }
        Self {
            modulus: target,
            numer,
            denom: self.denom.clone(),
        }
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let m = self.modulus.lcm(&other.modulus);
        (self.lift(m), other.lift(m))
    }

    /// `a·x + b·y` on aligned operands, as a numerator vector over `denom_x·denom_y`.
    fn combine(&self, other: &Self, sign: i8) -> Self {
        let (a, b) = self.common(other);
        let numer = a
            .numer
            .iter()
            .zip(&b.numer)
            .map(|(x, y)| {
                let l = x * &b.denom;
                let r = y * &a.denom;
                if sign > 0 {
                    l + r
                } else {
                    l - r
                }
            })
            .collect();
        Self {
            modulus: a.modulus,
            numer,
            denom: &a.denom * &b.denom,
        }
        .normalized()
    }

    fn product(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let m = a.modulus;
        let mut numer = vec![BigInt::zero(); m];
        let lhs: Vec<(usize, &BigInt)> = a
            .numer
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        for (j, y) in b.numer.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            for &(i, x) in &lhs {
                numer[(i + j) % m] += x * y;
            }
        }
        Self {
            modulus: m,
            numer,
            denom: &a.denom * &b.denom,
        }
        .normalized()
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self {
            modulus: self.modulus,
            numer: self.numer.iter().map(|n| n * r.numer()).collect(),
            denom: &self.denom * r.denom(),
        }
        .normalized()
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conjugate(&self) -> Self {
        let m = self.modulus;
        let mut numer = vec![BigInt::zero(); m];
        for (k, c) in self.numer.iter().enumerate() {
            numer[(m - k) % m] = c.clone();
        }
        Self {
            modulus: m,
            numer,
            denom: self.denom.clone(),
        }
    }

    /// Galois action `σ_a : ζ_m ↦ ζ_m^a`, for `gcd(a, m) = 1`.
    pub fn galois(&self, a: i64) -> Self {
        let m = self.modulus;
        let mut numer = vec![BigInt::zero(); m];
        for (k, c) in self.numer.iter().enumerate() {
            let idx = ((k as i64 * a).rem_euclid(m as i64)) as usize;
            numer[idx] += c;
        }
        Self {
            modulus: m,
            numer,
            denom: self.denom.clone(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.modulus);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.product(&base);
            }
            base = base.product(&base);
            e >>= 1;
        }
        acc
    }

    /// `true` iff the element is zero in `Q(ζ_m)`.
    pub fn is_zero(&self) -> bool {
        annihilate_nonprimitive(&self.numer, self.modulus)
            .iter()
            .all(Zero::is_zero)
    }

    /// Trace from `Q(ζ_m)` down to `Q`.
    pub fn trace(&self) -> BigRational {
        let m = self.modulus as u64;
        let phi = totient(m) as i64;
        let mut acc = BigInt::zero();
        for (k, c) in self.numer.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc += c * ramanujan_sum(k as u64, m, phi);
        }
        BigRational::new(acc, self.denom.clone())
    }

    /// The rational number this element equals, if it is rational.
    pub fn to_rational(&self) -> Option<BigRational> {
        let phi = totient(self.modulus as u64);
        let candidate = self.trace() / BigRational::from_integer(BigInt::from(phi));
        let diff = self - &Self::from_rational(candidate.clone());
        diff.is_zero().then_some(candidate)
    }

    /// Image under the fixed embedding `ζ_m = exp(2πi/m)`.
    pub fn to_complex(&self) -> Complex64 {
        let d = self.denom.to_f64().unwrap_or(f64::INFINITY);
        let m = self.modulus as f64;
        self.numer
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let w = c.to_f64().unwrap_or(f64::NAN) / d;
                Complex64::from_polar(w, 2.0 * PI * k as f64 / m)
            })
            .sum()
    }

    /// Canonical coordinates: the remainder modulo `Φ_m`, padded to length `m`.
    pub fn reduced(&self) -> Vec<BigRational> {
        let phi = cyclotomic_polynomial(self.modulus);
        let mut rem: Vec<BigInt> = self.numer.clone();
        let deg = phi.len() - 1;
        // Φ_m is monic with integer coefficients, so division stays integral
        for top in (deg..rem.len()).rev() {
            let c = rem[top].clone();
            if c.is_zero() {
                continue;
            }
            for (i, pi) in phi.iter().enumerate() {
                rem[top - deg + i] -= &c * pi;
            }
        }
        rem.iter()
            .map(|n| BigRational::new(n.clone(), self.denom.clone()))
            .collect()
    }
}

fn ramanujan_sum(k: u64, m: u64, phi_m: i64) -> i64 {
    let g = k.gcd(&m);
    let d = m / g;
    moebius(d) * phi_m / totient(d) as i64
}

fn annihilate_nonprimitive(numer: &[BigInt], m: usize) -> Vec<BigInt> {
    let mut v = numer.to_vec();
    for (r, _) in factorize(m as u64) {
        let shift = m / r as usize;
        let prev = v.clone();
        for i in 0..m {
            v[i] = &prev[i] - &prev[(i + m - shift) % m];
        }
    }
    v
}

/// Integer coefficients of the `m`-th cyclotomic polynomial, lowest degree first,
/// by dividing `x^m − 1` by `Φ_d` for every proper divisor `d` of `m`.
pub fn cyclotomic_polynomial(m: usize) -> Vec<BigInt> {
    assert!(m > 0);
    let mut num: Vec<BigInt> = vec![BigInt::zero(); m + 1];
    num[0] = BigInt::from(-1);
    num[m] = BigInt::one();
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        let phi_d = cyclotomic_polynomial(d);
        num = exact_divide(&num, &phi_d);
    }
    num
}

fn exact_divide(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for top in (dd..num.len()).rev() {
        // divisor is monic
        let c = rem[top].clone();
        quot[top - dd] = c.clone();
        for (i, di) in den.iter().enumerate() {
            rem[top - dd + i] -= &c * di;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Eq for CyclotomicNumber {}

impl fmt::Debug for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.to_rational() {
            return write!(f, "{r}");
        }
        let terms: Vec<String> = self
            .reduced()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                _ => format!("({c})*z{}^{k}", self.modulus),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let coeffs: Vec<String> = self.reduced().iter().map(|c| c.to_string()).collect();
        let mut s = serializer.serialize_struct("CyclotomicNumber", 2)?;
        s.serialize_field("modulus", &self.modulus)?;
        s.serialize_field("coeffs", &coeffs)?;
        s.end()
    }
}

impl MulGroupElement for CyclotomicNumber {
    fn identity_like(&self) -> Self {
        Self::one(self.modulus)
    }
    fn group_mul(&self, other: &Self) -> Self {
        self.product(other)
    }
}

impl<'a> Add<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.combine(rhs, 1)
    }
}

impl<'a> Sub<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.combine(rhs, -1)
    }
}

impl<'a> Mul<&'a CyclotomicNumber> for &'a CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        self.product(rhs)
    }
}

impl Add for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            modulus: self.modulus,
            numer: self.numer.iter().map(|n| -n).collect(),
            denom: self.denom.clone(),
        }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> Self {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(int(n), int(d))
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |m| -> Vec<i64> {
            cyclotomic_polynomial(m)
                .iter()
                .map(|c| c.to_i64().unwrap())
                .collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        // Φ_105 is the first with a coefficient of absolute value 2
        let c105 = as_i64(105);
        assert_eq!(c105.len(), 49);
        assert!(c105.contains(&-2));
    }

    #[test]
    fn root_of_unity_relations_hold_exactly() {
        for m in 1..=30usize {
            let z = CyclotomicNumber::root_of_unity(m, 1);
            assert_eq!(z.pow(m as u32), CyclotomicNumber::one(m));
            let phi = cyclotomic_polynomial(m);
            let mut acc = CyclotomicNumber::zero(m);
            for (k, c) in phi.iter().enumerate() {
                let term = CyclotomicNumber::root_of_unity(m, k as i64)
                    .scale(&BigRational::from_integer(c.clone()));
                acc = &acc + &term;
            }
            assert!(acc.is_zero(), "Phi_{m}(zeta_{m}) != 0");
            // a proper divisor's polynomial does not vanish at a primitive root
            if m > 1 {
                let phi1 = CyclotomicNumber::root_of_unity(m, 1) - CyclotomicNumber::one(m);
                assert!(!phi1.is_zero());
            }
        }
    }

    #[test]
    fn annihilator_agrees_with_division_by_phi() {
        // two independent zero tests on a fixed family of group-ring elements
        for m in [5usize, 6, 8, 9, 12, 15, 30] {
            for seed in 0..20i64 {
                let coeffs: Vec<BigRational> = (0..m as i64)
                    .map(|k| rat((k * 7 + seed * 3) % 5 - 2, 1 + (k + seed) % 3))
                    .collect();
                let x = CyclotomicNumber::from_coeffs(&coeffs);
                let by_division = x.reduced().iter().all(Zero::is_zero);
                assert_eq!(x.is_zero(), by_division);
            }
            // Σ_k ζ^k over all m-th roots vanishes for m > 1
            let all_roots = CyclotomicNumber::from_coeffs(&vec![rat(1, 1); m]);
            assert!(all_roots.is_zero());
            assert!(all_roots.reduced().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rationals_and_trace() {
        let z5 = CyclotomicNumber::root_of_unity(5, 1);
        let s: CyclotomicNumber = (1..5)
            .map(|k| CyclotomicNumber::root_of_unity(5, k))
            .fold(CyclotomicNumber::zero(5), |a, b| a + b);
        assert_eq!(s.to_rational(), Some(rat(-1, 1)));
        assert_eq!(z5.to_rational(), None);
        assert_eq!(z5.trace(), rat(-1, 1));
        let half = CyclotomicNumber::from_rational(rat(1, 2));
        assert_eq!((&half + &half).to_rational(), Some(rat(1, 1)));
        assert_eq!(
            CyclotomicNumber::root_of_unity(2, 1).to_rational(),
            Some(rat(-1, 1))
        );
    }

    #[test]
    fn lift_preserves_value() {
        let minus_one = CyclotomicNumber::root_of_unity(2, 1);
        assert_eq!(minus_one.lift(10), CyclotomicNumber::from_integer(-1));
        let z3 = CyclotomicNumber::root_of_unity(3, 1);
        assert_eq!(z3.lift(12), CyclotomicNumber::root_of_unity(12, 4));
        assert_eq!(
            &z3 * &CyclotomicNumber::root_of_unity(4, 1),
            CyclotomicNumber::root_of_unity(12, 7)
        );
    }

    #[test]
    fn serialization_is_canonical() {
        let a = CyclotomicNumber::root_of_unity(3, 1) + CyclotomicNumber::root_of_unity(3, 2);
        let b = CyclotomicNumber::from_integer(-1).lift(3);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(
            serde_json::to_string(&b).unwrap(),
            r#"{"modulus":3,"coeffs":["-1","0","0"]}"#
        );
    }

    fn arb_element(m: usize) -> impl Strategy<Value = CyclotomicNumber> {
        proptest::collection::vec((-20i64..20, 1i64..5), m).prop_map(|v| {
            let coeffs: Vec<BigRational> = v.into_iter().map(|(n, d)| rat(n, d)).collect();
            CyclotomicNumber::from_coeffs(&coeffs)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn embedding_is_a_ring_homomorphism(a in arb_element(12), b in arb_element(12)) {
            let tol = 1e-9 * (1.0 + a.to_complex().norm() * b.to_complex().norm());
            prop_assert!(((&a + &b).to_complex() - (a.to_complex() + b.to_complex())).norm() < tol);
            prop_assert!(((&a * &b).to_complex() - a.to_complex() * b.to_complex()).norm() < tol);
        }

        #[test]
        fn equality_is_an_equivalence(a in arb_element(6), b in arb_element(6)) {
            prop_assert_eq!(&a, &a);
            prop_assert_eq!(a == b, b == a);
            // reducing mod Φ_m does not change the value
            let r = CyclotomicNumber::from_coeffs(&a.reduced());
            prop_assert_eq!(&r, &a);
            prop_assert_eq!(r == b, a == b);
        }

        #[test]
        fn conjugate_matches_complex_conjugate(a in arb_element(10)) {
            let lhs = a.conjugate().to_complex();
            let rhs = a.to_complex().conj();
            prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
        }
    }
}
