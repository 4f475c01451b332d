//! Monomial Weil–Deligne representations at a finite prime `q`.
//!
//! A representation is a list of characters of `Q_q^×`, one per basis line,
//! together with an integer matrix `N`. The relation `σ(g) N σ(g)^{-1} = ω_q(g) N`
//! reads, line by line, as: `N[i][j]` may be nonzero only when
//! `summand_i = summand_j · ω_q`. Frobenius acts diagonally, by the
//! uniformizer value of each summand.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::character::{eps_character, AdditiveCharacter, HaarMeasure, LocalCharacter, UnitValue};
use crate::error::{Error, Result};
use crate::field::CyclotomicNumber;

#[derive(Clone, PartialEq, Eq)]
pub struct WDRep {
    prime: u64,
    summands: Vec<LocalCharacter>,
    monodromy: Vec<Vec<i64>>,
}

impl std::fmt::Debug for WDRep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WDRep")
            .field("prime", &self.prime)
            .field("summands", &self.summands)
            .field("N", &self.monodromy)
            .finish()
    }
}

impl WDRep {
    /// Validates shape, primes, the compatibility rule and nilpotency.
    pub fn new(
        prime: u64,
        summands: Vec<LocalCharacter>,
        monodromy: Vec<Vec<i64>>,
    ) -> Result<Self> {
        let dim = summands.len();
        if monodromy.len() != dim || monodromy.iter().any(|row| row.len() != dim) {
            return Err(Error::Precondition(format!(
                "monodromy must be a {dim}x{dim} matrix"
            )));
        }
        if let Some(s) = summands.iter().find(|s| s.prime() != prime) {
            return Err(Error::PrimeMismatch(prime, s.prime()));
        }
        let omega = LocalCharacter::omega(prime);
        for (i, row) in monodromy.iter().enumerate() {
            for (j, &entry) in row.iter().enumerate() {
                if entry != 0 && summands[i] != summands[j].mul(&omega)? {
                    return Err(Error::IncompatibleMonodromy { row: i, col: j });
                }
            }
        }
        if !is_nilpotent(&monodromy) {
            return Err(Error::NotNilpotent);
        }
        Ok(Self {
            prime,
            summands,
            monodromy,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn dim(&self) -> usize {
        self.summands.len()
    }

    pub fn summands(&self) -> &[LocalCharacter] {
        &self.summands
    }

    pub fn monodromy(&self) -> &[Vec<i64>] {
        &self.monodromy
    }

    /// Diagonal of Frobenius: the uniformizer value of each summand.
    pub fn frobenius_diagonal(&self) -> Vec<UnitValue> {
        self.summands
            .iter()
            .map(|s| s.uniformizer_value().clone())
            .collect()
    }

    /// Reorders the basis so that new line `k` is old line `perm[k]`,
    /// conjugating `N` accordingly.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let dim = self.dim();
        let mut seen = vec![false; dim];
        if perm.len() != dim
            || perm
                .iter()
                .any(|&k| k >= dim || std::mem::replace(&mut seen[k], true))
        {
            return Err(Error::Precondition("not a permutation of the basis".into()));
        }
        let summands = perm.iter().map(|&k| self.summands[k].clone()).collect();
        let monodromy = perm
            .iter()
            .map(|&i| perm.iter().map(|&j| self.monodromy[i][j]).collect())
            .collect();
        Ok(Self {
            prime: self.prime,
            summands,
            monodromy,
        })
    }
}

fn is_nilpotent(n: &[Vec<i64>]) -> bool {
    let dim = n.len();
    if dim == 0 {
        return true;
    }
    let base: Vec<Vec<BigInt>> = n
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut power = base.clone();
    for _ in 1..dim {
        power = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| (0..dim).map(|k| &power[i][k] * &base[k][j]).sum())
                    .collect()
            })
            .collect();
    }
    power.iter().flatten().all(Zero::is_zero)
}

/// A character as a one-dimensional representation with `N = 0`.
pub fn wd_character(chi: &LocalCharacter) -> WDRep {
    WDRep {
        prime: chi.prime(),
        summands: vec![chi.clone()],
        monodromy: vec![vec![0]],
    }
}

/// `sp(2)`: `σ = diag(1, ω_q)` and `N = [[0, 0], [1, 0]]`.
pub fn wd_sp2(q: u64) -> WDRep {
    WDRep::new(
        q,
        vec![LocalCharacter::trivial(q), LocalCharacter::omega(q)],
        vec![vec![0, 0], vec![1, 0]],
    )
    .expect("sp(2) is compatible")
}

pub fn wd_sum(a: &WDRep, b: &WDRep) -> Result<WDRep> {
    if a.prime != b.prime {
        return Err(Error::PrimeMismatch(a.prime, b.prime));
    }
    let (da, db) = (a.dim(), b.dim());
    let mut monodromy = vec![vec![0; da + db]; da + db];
    for i in 0..da {
        monodromy[i][..da].copy_from_slice(&a.monodromy[i]);
    }
    for i in 0..db {
        monodromy[da + i][da..].copy_from_slice(&b.monodromy[i]);
    }
    Ok(WDRep {
        prime: a.prime,
        summands: a.summands.iter().chain(&b.summands).cloned().collect(),
        monodromy,
    })
}

/// Tensor product with basis `e_i ⊗ f_j` at index `i · dim(b) + j` and
/// `N = N_a ⊗ 1 + 1 ⊗ N_b`.
pub fn wd_tensor(a: &WDRep, b: &WDRep) -> Result<WDRep> {
    if a.prime != b.prime {
        return Err(Error::PrimeMismatch(a.prime, b.prime));
    }
    let (da, db) = (a.dim(), b.dim());
    let mut summands = Vec::with_capacity(da * db);
    for s in &a.summands {
        for t in &b.summands {
            summands.push(s.mul(t)?);
        }
    }
    let mut monodromy = vec![vec![0; da * db]; da * db];
    for i in 0..da {
        for j in 0..db {
            for k in 0..da {
                for l in 0..db {
                    let mut v = 0;
                    if j == l {
                        v += a.monodromy[i][k];
                    }
                    if i == k {
                        v += b.monodromy[j][l];
                    }
                    monodromy[i * db + j][k * db + l] = v;
                }
            }
        }
    }
    WDRep::new(a.prime, summands, monodromy)
}

/// `ρ ⊗ μ` for a character `μ`; `N` is unchanged.
pub fn wd_twist(rho: &WDRep, mu: &LocalCharacter) -> Result<WDRep> {
    if rho.prime != mu.prime() {
        return Err(Error::PrimeMismatch(rho.prime, mu.prime()));
    }
    let summands = rho
        .summands
        .iter()
        .map(|s| s.mul(mu))
        .collect::<Result<Vec<_>>>()?;
    Ok(WDRep {
        prime: rho.prime,
        summands,
        monodromy: rho.monodromy.clone(),
    })
}

/// Lines fixed by inertia, i.e. summands with trivial restriction to units.
pub fn inertia_invariants(rho: &WDRep) -> Vec<usize> {
    (0..rho.dim())
        .filter(|&i| rho.summands[i].is_unramified())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaQuotientReport {
    pub inertia_invariant_indices: Vec<usize>,
    /// `dim (V^I ∩ ker N)`.
    pub kernel_intersection_dim: usize,
    /// Lines whose span is a complement of `V^I ∩ ker N` in `V^I`.
    pub quotient_indices: Vec<usize>,
    /// `det(−Φ)` on the quotient, possibly involving formal units.
    pub delta: UnitValue,
}

impl DeltaQuotientReport {
    pub fn quotient_dim(&self) -> usize {
        self.quotient_indices.len()
    }

    pub fn delta_value(&self) -> Result<CyclotomicNumber> {
        self.delta.to_cyclotomic()
    }
}

/// `δ(ρ) = det(−Φ | V^I / (V^I ∩ ker N))`.
///
/// Columns of `N` indexed by `V^I` are scanned in increasing order and kept
/// when independent of those already kept. `N` sends the `u`-eigenspace of
/// Frobenius into the `u/q`-eigenspace and these targets are disjoint for
/// distinct `u`, so the kept lines contain exactly `rank(N|E_u)` lines of
/// each eigenvalue `u` and their Frobenius determinant is that of the quotient.
pub fn delta_factor(rho: &WDRep) -> DeltaQuotientReport {
    let invariant = inertia_invariants(rho);
    let dim = rho.dim();
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new();
    let mut pivots = Vec::new();
    for &j in &invariant {
        let mut col: Vec<BigRational> = (0..dim)
            .map(|i| BigRational::from_integer(BigInt::from(rho.monodromy[i][j])))
            .collect();
        for (lead, v) in &basis {
            if !col[*lead].is_zero() {
                let factor = &col[*lead] / &v[*lead];
                for (c, x) in col.iter_mut().zip(v) {
                    *c -= &factor * x;
                }
            }
        }
        if let Some(lead) = col.iter().position(|c| !c.is_zero()) {
            basis.push((lead, col));
            pivots.push(j);
        }
    }
    let delta = pivots.iter().fold(UnitValue::one(), |acc, &j| {
        acc.mul(&rho.summands[j].uniformizer_value().neg())
    });
    DeltaQuotientReport {
        kernel_intersection_dim: invariant.len() - pivots.len(),
        inertia_invariant_indices: invariant,
        quotient_indices: pivots,
        delta,
    }
}

/// `a(ρ') = Σ a(summand_i) + dim V^I / (V^I ∩ ker N)`.
pub fn wd_conductor(rho: &WDRep) -> u32 {
    let characters: u32 = rho.summands.iter().map(LocalCharacter::conductor).sum();
    characters + delta_factor(rho).quotient_dim() as u32
}

/// `ε(σ, ψ, dx)` as the product of the epsilon factors of the summands.
pub fn epsilon_weil(
    rho: &WDRep,
    psi: &AdditiveCharacter,
    dx: &HaarMeasure,
) -> Result<CyclotomicNumber> {
    rho.summands
        .iter()
        .try_fold(CyclotomicNumber::one(1), |acc, s| {
            Ok(&acc * &eps_character(s, psi, dx)?)
        })
}

/// `ε'(ρ', ψ, dx) = ε(ρ, ψ, dx) · δ(ρ')`.
pub fn epsilon_prime(
    rho: &WDRep,
    psi: &AdditiveCharacter,
    dx: &HaarMeasure,
) -> Result<CyclotomicNumber> {
    let eps = epsilon_weil(rho, psi, dx)?;
    let delta = delta_factor(rho).delta_value()?;
    Ok(&eps * &delta)
}

/// A local root number `ε'/|ε'|`.
#[derive(Clone, Debug, PartialEq)]
pub enum RootNumber {
    /// `ε'` is a real multiple of a root of unity, so `W` is that root of unity.
    Exact(CyclotomicNumber),
    /// Only the complex embedding is available.
    Numeric(Complex64),
}

impl RootNumber {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Self::Exact(w) => w.to_complex(),
            Self::Numeric(z) => *z,
        }
    }

    /// `±1` when the root number is exactly rational.
    pub fn as_sign(&self) -> Option<i8> {
        match self {
            Self::Exact(w) => w.to_rational().and_then(|r| {
                if r == BigRational::from_integer(1.into()) {
                    Some(1)
                } else if r == BigRational::from_integer((-1).into()) {
                    Some(-1)
                } else {
                    None
                }
            }),
            Self::Numeric(_) => None,
        }
    }
}

const UNIT_TOLERANCE: f64 = 1e-9;

/// `ε / |ε|` for a nonzero cyclotomic number.
///
/// The nearest roots `ζ_m^k` and `−ζ_m^k` to the complex argument are tried
/// exactly; if `ε ζ_m^{-k}` is a rational `r`, the answer is `sign(r) ζ_m^k`.
pub fn normalize_to_unit(eps: &CyclotomicNumber) -> Result<RootNumber> {
    let z = eps.to_complex();
    let norm = z.norm();
    if eps.is_zero() || norm < UNIT_TOLERANCE {
        return Err(Error::NumericInstability(
            "epsilon factor is numerically zero".into(),
        ));
    }
    let m = eps.modulus() as i64;
    let theta = z.arg();
    for shift in [0.0, PI] {
        let k = ((theta - shift) * m as f64 / (2.0 * PI)).round() as i64;
        let rotated = eps * &CyclotomicNumber::root_of_unity(eps.modulus(), -k);
        if let Some(r) = rotated.to_rational() {
            let root = CyclotomicNumber::root_of_unity(eps.modulus(), k);
            let w = if r.is_negative() { -root } else { root };
            return Ok(RootNumber::Exact(w));
        }
    }
    let w = z / norm;
    if (w.norm() - 1.0).abs() > UNIT_TOLERANCE {
        return Err(Error::NumericInstability(format!(
            "|W| = {} after normalisation",
            w.norm()
        )));
    }
    Ok(RootNumber::Numeric(w))
}

/// `W(ρ', ψ) = ε'(ρ', ψ, dx) / |ε'(ρ', ψ, dx)|`; independent of `dx`.
pub fn local_root_number(rho: &WDRep, psi: &AdditiveCharacter) -> Result<RootNumber> {
    let eps = epsilon_prime(rho, psi, &HaarMeasure::normalized(rho.prime))?;
    normalize_to_unit(&eps)
}
