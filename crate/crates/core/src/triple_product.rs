//! Local and global data of `F ⊗ χ` for `F = f₁ ⊗ f₂ ⊗ f₃`, three weight-2
//! newforms of level `Γ₀(p)`, and `χ` the Hecke lift of `(· / p)`.
//!
//! Each `f_i` enters only through its eigenvalue `a_p(f_i) = ±1`.
//! Away from `p` the unramified parameters `ξ_{i,q}` are kept as formal units.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::character::{hecke_lift, AdditiveCharacter, HaarMeasure, LocalCharacter, UnitValue};
use crate::error::{Error, Result};
use crate::field::{is_prime, legendre_symbol, CyclotomicNumber};
use crate::weil_deligne::{
    delta_factor, epsilon_prime, epsilon_weil, local_root_number, wd_character, wd_conductor,
    wd_sp2, wd_sum, wd_tensor, wd_twist, RootNumber, WDRep,
};

/// Archimedean root number of `F` and of `F ⊗ χ`; twisting by a finite order
/// character leaves the Hodge structure unchanged.
pub const W_INFINITY_TRIPLE: i8 = -1;

/// Archimedean root number of a single weight-2 form.
pub const W_INFINITY_SINGLE: i8 = -1;

/// Primes `q ≠ p` at which the unramified local computation is carried out.
const SAMPLED_AUXILIARY_PRIMES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Self::Plus),
            -1 => Ok(Self::Minus),
            _ => Err(Error::Precondition(format!("{v} is not a sign"))),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "1" => Ok(Self::Plus),
            "-" | "-1" => Ok(Self::Minus),
            other => Err(Error::Precondition(format!(
                "cannot read {other:?} as a sign"
            ))),
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Self::Plus => 1,
            Self::Minus => -1,
        }
    }

    /// All eight patterns in the order `+++`, `++-`, …, `---`.
    pub fn all_patterns() -> Vec<[Sign; 3]> {
        (0..8)
            .map(|bits: u8| {
                let s = |k: u8| {
                    if bits >> (2 - k) & 1 == 0 {
                        Self::Plus
                    } else {
                        Self::Minus
                    }
                };
                [s(0), s(1), s(2)]
            })
            .collect()
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Plus => "+",
            Self::Minus => "-",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

/// Genus of `X₀(p)` for a prime `p`.
pub fn genus_x0(p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    }
    let nu2: i64 = if p == 2 {
        1
    } else {
        1 + legendre_symbol(-1, p)? as i64
    };
    let nu3: i64 = match p {
        2 => 0,
        3 => 1,
        _ => 1 + legendre_symbol(-3, p)? as i64,
    };
    // g = 1 + μ/12 − ν₂/4 − ν₃/3 − ν∞/2 with μ = p + 1 and ν∞ = 2
    let twelve_g = (p as i64 + 1) - 3 * nu2 - 4 * nu3;
    Ok((twelve_g / 12) as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleProductSpec {
    p: u64,
    signs: [Sign; 3],
    twisted: bool,
    genus: u64,
}

impl TripleProductSpec {
    /// Accepts any odd prime; a genus-zero `X₀(p)` only produces a warning.
    pub fn new(p: u64, signs: [Sign; 3], twisted: bool) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        Ok(Self {
            p,
            signs,
            twisted,
            genus: genus_x0(p)?,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn signs(&self) -> [Sign; 3] {
        self.signs
    }

    pub fn twisted(&self) -> bool {
        self.twisted
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn sign_product(&self) -> i64 {
        self.signs.iter().map(|s| s.value()).product()
    }

    pub fn warnings(&self) -> Vec<String> {
        if self.genus == 0 {
            vec![format!(
                "genus condition fails: X0({}) has genus 0, so no weight-2 newforms of this level exist",
                self.p
            )]
        } else {
            Vec::new()
        }
    }
}

fn omega_power(q: u64, k: i64) -> LocalCharacter {
    LocalCharacter::omega(q).pow(k)
}

/// `σ'_{f,q}` of a single form with `a_p(f) = sign`: `λω⁻¹ ⊗ sp(2)` at `p`,
/// `ξ ⊕ ξ⁻¹ω⁻¹` with a formal `ξ` elsewhere.
pub fn single_form_local(p: u64, sign: Sign, q: u64, label: &str) -> Result<WDRep> {
    if !is_prime(q) {
        return Err(Error::InvalidField(format!("{q} is not prime")));
    }
    if q == p {
        let lambda = LocalCharacter::unramified(p, UnitValue::integer(sign.value())?);
        wd_twist(&wd_sp2(p), &lambda.mul(&omega_power(p, -1))?)
    } else {
        let xi = LocalCharacter::unramified(q, UnitValue::formal(&format!("xi_{label},{q}")));
        let dual = xi.inverse().mul(&omega_power(q, -1))?;
        wd_sum(&wd_character(&xi), &wd_character(&dual))
    }
}

/// `σ'_{F,χ,q}` (or `σ'_{F,q}` when untwisted).
pub fn assemble_local(spec: &TripleProductSpec, q: u64) -> Result<WDRep> {
    let p = spec.p;
    let factors = spec
        .signs
        .iter()
        .enumerate()
        .map(|(i, &s)| single_form_local(p, s, q, &(i + 1).to_string()))
        .collect::<Result<Vec<_>>>()?;
    let product = wd_tensor(&wd_tensor(&factors[0], &factors[1])?, &factors[2])?;
    if spec.twisted {
        wd_twist(&product, &hecke_lift(p)?.local_character(q)?)
    } else {
        Ok(product)
    }
}

/// `∏ q^{a_q}`; the empty product is 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Conductor {
    exponents: BTreeMap<u64, u32>,
}

impl Conductor {
    pub fn from_local_reps(reps: &[WDRep]) -> Self {
        let mut exponents = BTreeMap::new();
        for rho in reps {
            let a = wd_conductor(rho);
            if a > 0 {
                *exponents.entry(rho.prime()).or_insert(0) += a;
            }
        }
        Self { exponents }
    }

    pub fn exponent(&self, q: u64) -> u32 {
        self.exponents.get(&q).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &BTreeMap<u64, u32> {
        &self.exponents
    }

    pub fn value(&self) -> BigUint {
        self.exponents
            .iter()
            .map(|(&q, &a)| BigUint::from(q).pow(a))
            .product()
    }
}

impl fmt::Display for Conductor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|(q, a)| format!("{q}^{a}"))
            .collect();
        f.write_str(&parts.join("*"))
    }
}

impl Serialize for Conductor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Everything computed at one finite place.
#[derive(Clone, Debug, Serialize)]
pub struct LocalPlaceData {
    pub prime: u64,
    pub epsilon: CyclotomicNumber,
    pub delta: UnitValue,
    pub epsilon_prime: CyclotomicNumber,
    pub root_number: i8,
    pub conductor_exponent: u32,
}

fn exact_sign(w: &RootNumber, what: &str) -> Result<i8> {
    w.as_sign()
        .ok_or_else(|| Error::Inconsistency(format!("{what} is not ±1: {:?}", w.to_complex())))
}

/// Local data of `ρ` with `ψ = ψ₁` and the Haar measure giving `Z_q` volume 1.
pub fn local_place_data(rho: &WDRep) -> Result<LocalPlaceData> {
    let q = rho.prime();
    let psi = AdditiveCharacter::standard(q)?;
    let dx = HaarMeasure::normalized(q);
    let w = local_root_number(rho, &psi)?;
    Ok(LocalPlaceData {
        prime: q,
        epsilon: epsilon_weil(rho, &psi, &dx)?,
        delta: delta_factor(rho).delta,
        epsilon_prime: epsilon_prime(rho, &psi, &dx)?,
        root_number: exact_sign(&w, &format!("local root number at {q}"))?,
        conductor_exponent: wd_conductor(rho),
    })
}

/// The first few primes different from `p`.
pub fn auxiliary_primes(p: u64, count: usize) -> Vec<u64> {
    (2..)
        .filter(|&q| q != p && is_prime(q))
        .take(count)
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct GlobalRootNumberReport {
    #[serde(rename = "W_infinity")]
    pub w_infinity: i8,
    /// Root numbers at `p` and at the sampled primes `q ≠ p`.
    #[serde(rename = "local_W")]
    pub local_w: BTreeMap<u64, i8>,
    #[serde(rename = "W_global")]
    pub w_global: i8,
    pub epsilon_p: CyclotomicNumber,
    pub delta_p: UnitValue,
    pub conductor: Conductor,
}

/// `W = W_∞ · ∏_q W_q`. Every `q ≠ p` contributes the same unramified
/// computation with formal parameters; it is evaluated at a sample of such `q`.
pub fn global_root_number(spec: &TripleProductSpec) -> Result<GlobalRootNumberReport> {
    let at_p = local_place_data(&assemble_local(spec, spec.p)?)?;
    let mut local_w = BTreeMap::new();
    local_w.insert(spec.p, at_p.root_number);
    let mut reps = vec![assemble_local(spec, spec.p)?];
    for q in auxiliary_primes(spec.p, SAMPLED_AUXILIARY_PRIMES) {
        let rho = assemble_local(spec, q)?;
        local_w.insert(q, local_place_data(&rho)?.root_number);
        reps.push(rho);
    }
    let w_global = local_w.values().fold(W_INFINITY_TRIPLE, |acc, w| acc * w);
    Ok(GlobalRootNumberReport {
        w_infinity: W_INFINITY_TRIPLE,
        local_w,
        w_global,
        epsilon_p: at_p.epsilon,
        delta_p: at_p.delta,
        conductor: Conductor::from_local_reps(&reps),
    })
}

/// `cond(F, χ)`, or `cond(F)` when untwisted.
pub fn global_conductor(spec: &TripleProductSpec) -> Result<Conductor> {
    let mut reps = vec![assemble_local(spec, spec.p)?];
    for q in auxiliary_primes(spec.p, SAMPLED_AUXILIARY_PRIMES) {
        reps.push(assemble_local(spec, q)?);
    }
    Ok(Conductor::from_local_reps(&reps))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SingleFormRootNumbers {
    #[serde(rename = "W_f")]
    pub w_f: i8,
    #[serde(rename = "W_f_chi")]
    pub w_f_chi: i8,
}

/// `(W(f), W(f, χ))` for a form with `a_p(f) = a_p`, assembled from the
/// local root numbers of `σ'_{f,q}` and `σ'_{f,q} ⊗ χ_q`.
pub fn single_form_root_numbers(p: u64, a_p: Sign) -> Result<SingleFormRootNumbers> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not an odd prime")));
    }
    let chi = hecke_lift(p)?;
    let mut w_f = W_INFINITY_SINGLE;
    let mut w_f_chi = W_INFINITY_SINGLE;
    let places = std::iter::once(p).chain(auxiliary_primes(p, SAMPLED_AUXILIARY_PRIMES));
    for q in places {
        let rho = single_form_local(p, a_p, q, "f")?;
        let twisted = wd_twist(&rho, &chi.local_character(q)?)?;
        w_f *= local_place_data(&rho)?.root_number;
        w_f_chi *= local_place_data(&twisted)?.root_number;
    }
    let expected_twisted = -chi.dirichlet_character().sign();
    if w_f != a_p.value() as i8 || w_f_chi != expected_twisted {
        return Err(Error::Inconsistency(format!(
            "single-form root numbers ({w_f}, {w_f_chi}) differ from (a_p, -chi(-1)) = ({}, {expected_twisted})",
            a_p.value()
        )));
    }
    Ok(SingleFormRootNumbers { w_f, w_f_chi })
}

/// Shape of the completed `L`-function and its functional equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionalEquationData {
    /// `Λ(F, χ, s)` in terms of `L(F, χ, s)`.
    pub gamma_factor: String,
    /// `Λ*` as the conductor-normalised completion; the primary form.
    pub completed: String,
    /// The alternative display with an explicit `p^{4s}`, recorded verbatim.
    pub completed_alternative: String,
    pub hodge_numbers: BTreeMap<String, u32>,
    pub center: i64,
    pub reflection: String,
    pub sign: i8,
    pub conductor: Conductor,
    pub conductor_exponent: u32,
}

impl FunctionalEquationData {
    /// `s ↦ 4 − s`.
    pub fn reflect(&self, s: &BigRational) -> BigRational {
        BigRational::from_integer(4.into()) - s
    }
}

pub fn functional_equation_data(spec: &TripleProductSpec) -> Result<FunctionalEquationData> {
    let report = global_root_number(spec)?;
    let hodge_numbers = [("h30".to_string(), 1), ("h21".to_string(), 3)]
        .into_iter()
        .collect();
    Ok(FunctionalEquationData {
        gamma_factor: "2^4 (2 pi)^(3-4s) Gamma(s-1)^3 Gamma(s) L(s)".into(),
        completed: "cond^(s/2) * 2^4 (2 pi)^(3-4s) Gamma(s-1)^3 Gamma(s) L(s)".into(),
        completed_alternative: format!(
            "2^4 {}^(4s) (2 pi)^(3-4s) Gamma(s-1)^3 Gamma(s) L(s)",
            spec.p
        ),
        hodge_numbers,
        center: 2,
        reflection: "s -> 4 - s".into(),
        sign: report.w_global,
        conductor_exponent: report.conductor.exponent(spec.p),
        conductor: report.conductor,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn genus_values() {
        let expected = [
            (11, 1),
            (13, 0),
            (17, 1),
            (19, 1),
            (23, 2),
            (29, 2),
            (31, 2),
            (37, 2),
            (2, 0),
            (3, 0),
            (5, 0),
            (7, 0),
        ];
        for (p, g) in expected {
            assert_eq!(genus_x0(p).unwrap(), g, "p = {p}");
        }
    }

    #[test]
    fn sign_patterns_enumerated() {
        let all = Sign::all_patterns();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], [Sign::Plus; 3]);
        assert_eq!(all[7], [Sign::Minus; 3]);
        assert_eq!(Sign::parse(" - ").unwrap(), Sign::Minus);
        assert!(Sign::parse("0").is_err());
    }

    #[test]
    fn local_rep_at_p_has_expected_summands() {
        let spec = TripleProductSpec::new(11, [Sign::Plus; 3], true).unwrap();
        let rho = assemble_local(&spec, 11).unwrap();
        let powers: Vec<i64> = rho
            .summands()
            .iter()
            .map(|s| {
                assert!(!s.is_unramified());
                let m = s.uniformizer_value().rational_value().unwrap();
                let mut k = 0;
                let mut v = m;
                while v != BigRational::from_integer(1.into()) {
                    v /= BigRational::from_integer(11.into());
                    k += 1;
                }
                k
            })
            .collect();
        // χλω^{-3} ⊕ 3·χλω^{-2} ⊕ 3·χλω^{-1} ⊕ χλ
        assert_eq!(powers, vec![3, 2, 2, 1, 2, 1, 1, 0]);
    }

    #[test]
    fn local_rep_away_from_p_is_unramified_and_flat() {
        let spec = TripleProductSpec::new(19, [Sign::Plus, Sign::Minus, Sign::Plus], true).unwrap();
        for q in auxiliary_primes(19, 6) {
            let rho = assemble_local(&spec, q).unwrap();
            assert_eq!(rho.dim(), 8);
            assert!(rho.summands().iter().all(LocalCharacter::is_unramified));
            assert!(rho.monodromy().iter().flatten().all(|&x| x == 0));
            let data = local_place_data(&rho).unwrap();
            assert_eq!(data.epsilon_prime, CyclotomicNumber::one(1));
            assert_eq!(data.root_number, 1);
        }
    }

    #[test]
    fn twisted_and_untwisted_reports() {
        for p in [11u64, 17, 19, 23] {
            for signs in Sign::all_patterns() {
                let tw =
                    global_root_number(&TripleProductSpec::new(p, signs, true).unwrap()).unwrap();
                assert_eq!(tw.w_global, -1);
                assert_eq!(tw.local_w[&p], 1);
                assert_eq!(tw.conductor.to_string(), format!("{p}^8"));
                let p16 = num_traits::pow(BigInt::from(p), 16);
                assert_eq!(
                    tw.epsilon_p,
                    CyclotomicNumber::from_rational(BigRational::from_integer(p16))
                );

                let spec = TripleProductSpec::new(p, signs, false).unwrap();
                let un = global_root_number(&spec).unwrap();
                assert_eq!(un.w_global as i64, spec.sign_product());
                assert_eq!(un.conductor.exponent(p), 5);
                assert_eq!(
                    un.delta_p.rational_value().unwrap(),
                    BigRational::from_integer(
                        -spec.sign_product() * num_traits::pow(BigInt::from(p), 10)
                    )
                );
            }
        }
    }

    #[test]
    fn empty_conductor_is_one() {
        let c = Conductor::from_local_reps(&[]);
        assert_eq!(c.to_string(), "1");
        assert_eq!(c.value(), BigUint::from(1u32));
    }

    #[test]
    fn single_form_values() {
        for p in [11u64, 13, 17, 19, 23] {
            for a in [Sign::Plus, Sign::Minus] {
                let w = single_form_root_numbers(p, a).unwrap();
                assert_eq!(w.w_f as i64, a.value());
                assert_eq!(w.w_f_chi, if p % 4 == 1 { -1 } else { 1 });
            }
        }
    }

    #[test]
    fn functional_equation_sign_matches() {
        let tw = TripleProductSpec::new(11, [Sign::Plus; 3], true).unwrap();
        let fe = functional_equation_data(&tw).unwrap();
        assert_eq!((fe.center, fe.sign, fe.conductor_exponent), (2, -1, 8));
        let center = BigRational::from_integer(2.into());
        assert_eq!(fe.reflect(&center), center);
        let un = TripleProductSpec::new(11, [Sign::Plus, Sign::Minus, Sign::Plus], false).unwrap();
        assert_eq!(functional_equation_data(&un).unwrap().sign, -1);
        let un = TripleProductSpec::new(11, [Sign::Plus; 3], false).unwrap();
        assert_eq!(functional_equation_data(&un).unwrap().sign, 1);
    }

    #[test]
    fn genus_zero_warns() {
        let spec = TripleProductSpec::new(13, [Sign::Plus; 3], true).unwrap();
        assert!(spec.warnings()[0].starts_with("genus condition fails"));
        assert!(TripleProductSpec::new(11, [Sign::Plus; 3], true)
            .unwrap()
            .warnings()
            .is_empty());
        assert!(TripleProductSpec::new(15, [Sign::Plus; 3], true).is_err());
    }
}
