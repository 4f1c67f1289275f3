//! Factored naturals and the basic arithmetic objects built from them:
//! L_M = lcm(1..M), Q_M = M!/L_M, the Chebyshev function ψ(M) = log L_M,
//! the level exponents (α_p, β_p) and the Wilson residue of L_M above M.
//!
//! Floor logarithms are computed by integer power comparison, never by
//! floating point, so the boundary cases p^a = M are exact.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modular::{factorial_mod, inv_mod, mul_mod, pow_mod};
use crate::primes::{is_prime, sieve_primes};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime-power exponent must be at least 1")]
    ZeroExponent,
    #[error("prime {p} exceeds the level bound K = {k}")]
    PrimeAboveK { p: u64, k: u64 },
    #[error("require p > M for the Wilson residue (got p = {p}, M = {m})")]
    PrimeNotAboveM { p: u64, m: u64 },
}

/// A prime power p^a with p prime and a ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    p: u64,
    a: u32,
}

impl PrimePower {
    pub fn new(p: u64, a: u32) -> Result<Self, ArithError> {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if a == 0 {
            return Err(ArithError::ZeroExponent);
        }
        Ok(PrimePower { p, a })
    }

    /// Unvalidated constructor for internal range bounds.
    pub(crate) fn raw(p: u64, a: u32) -> Self {
        PrimePower { p, a }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.a
    }

    pub fn value(&self) -> BigUint {
        BigUint::from(self.p).pow(self.a)
    }

    /// The value as u64 when it fits.
    pub fn value_u64(&self) -> Option<u64> {
        let mut acc = 1u64;
        for _ in 0..self.a {
            acc = acc.checked_mul(self.p)?;
        }
        Some(acc)
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.a)
        }
    }
}

/// A positive integer held as its prime factorization. The empty map is 1.
/// Exponents are always ≥ 1, so equality of maps is equality of values.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FactoredNat {
    factors: BTreeMap<u64, u32>,
}

impl FactoredNat {
    pub fn one() -> Self {
        FactoredNat::default()
    }

    pub fn from_factors<I: IntoIterator<Item = (u64, u32)>>(iter: I) -> Result<Self, ArithError> {
        let mut factors = BTreeMap::new();
        for (p, e) in iter {
            if !is_prime(p) {
                return Err(ArithError::NotPrime(p));
            }
            if e == 0 {
                return Err(ArithError::ZeroExponent);
            }
            *factors.entry(p).or_insert(0) += e;
        }
        Ok(FactoredNat { factors })
    }

    /// Exponent of p in the value (0 if absent).
    pub fn factor_of(&self, p: u64) -> u32 {
        self.factors.get(&p).copied().unwrap_or(0)
    }

    /// Multiply in p^e. `e = 0` is a no-op.
    pub fn push(&mut self, p: u64, e: u32) {
        if e > 0 {
            *self.factors.entry(p).or_insert(0) += e;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.factors.iter().map(|(&p, &e)| (p, e))
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn num_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn to_integer(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (&p, &e) in &self.factors {
            acc *= BigUint::from(p).pow(e);
        }
        acc
    }

    /// Natural log of the value, as Σ e·ln p.
    pub fn log_value(&self) -> f64 {
        self.factors
            .iter()
            .fold(0.0, |acc, (&p, &e)| acc + e as f64 * (p as f64).ln())
    }

    /// Base-2 log upper estimate, for deciding when materializing is cheap.
    pub fn log2_value(&self) -> f64 {
        self.factors
            .iter()
            .fold(0.0, |acc, (&p, &e)| acc + e as f64 * (p as f64).log2())
    }

    /// The value reduced mod m.
    pub fn mod_u64(&self, m: u64) -> u64 {
        let mut acc = 1 % m;
        for (&p, &e) in &self.factors {
            acc = mul_mod(acc, pow_mod(p, e as u64, m), m);
        }
        acc
    }

    pub fn product(&self, other: &FactoredNat) -> FactoredNat {
        let mut out = self.clone();
        for (p, e) in other.iter() {
            out.push(p, e);
        }
        out
    }
}

impl fmt::Display for FactoredNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(&p, &e)| {
                if e == 1 {
                    format!("{p}")
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Largest a ≥ 0 with p^a ≤ n, by repeated checked multiplication.
pub fn floor_log(p: u64, n: u64) -> u32 {
    debug_assert!(p >= 2);
    let mut a = 0u32;
    let mut power = 1u64;
    loop {
        match power.checked_mul(p) {
            Some(next) if next <= n => {
                power = next;
                a += 1;
            }
            _ => return a,
        }
    }
}

/// Level exponents of a prime p relative to the pair M ≤ K:
/// α_p = ⌊log_p M⌋, β_p = ⌊log_p K⌋ + 1, B_p = β_p − α_p, m_p = p^{B_p}.
/// Rejects p > K.
pub fn alpha_beta(p: u64, m_bound: u64, k_bound: u64) -> Result<(u32, u32, u32, u64), ArithError> {
    assert!(m_bound >= 2 && k_bound >= m_bound, "need 2 <= M <= K");
    if p > k_bound {
        return Err(ArithError::PrimeAboveK { p, k: k_bound });
    }
    let alpha = floor_log(p, m_bound);
    let beta = floor_log(p, k_bound) + 1;
    let b = beta - alpha;
    debug_assert!(b >= 1);
    let mp = p.checked_pow(b).expect("m_p fits in u64 at these scales");
    Ok((alpha, beta, b, mp))
}

/// L_M = lcm(1..M) as a factored natural: each prime p ≤ M appears with
/// the largest exponent α_p such that p^{α_p} ≤ M.
pub fn lcm_factored(m: u64) -> FactoredNat {
    let mut out = FactoredNat::one();
    for p in sieve_primes(m) {
        out.push(p, floor_log(p, m));
    }
    out
}

/// Q_M = M!/L_M as a factored natural. The exponent of p is the Legendre
/// valuation of M! minus α_p.
pub fn qm_factored(m: u64) -> FactoredNat {
    let mut out = FactoredNat::one();
    for p in sieve_primes(m) {
        out.push(p, legendre_valuation(m, p) - floor_log(p, m));
    }
    out
}

/// v_p(M!) = Σ_{i≥1} ⌊M/p^i⌋.
pub fn legendre_valuation(m: u64, p: u64) -> u32 {
    let mut total = 0u64;
    let mut q = m / p;
    while q > 0 {
        total += q;
        q /= p;
    }
    total as u32
}

/// ψ(M) = Σ_{p^a ≤ M} log p = log lcm(1..M).
pub fn chebyshev_psi(m: u64) -> f64 {
    sieve_primes(m)
        .into_iter()
        .map(|p| floor_log(p, m) as f64 * (p as f64).ln())
        .sum()
}

/// The residue of L_M modulo a prime p > M, computed through the Wilson
/// identity L_M ≡ (−1)^d ((d−1)! Q_M)^{−1} (mod p) with d = p − M.
pub fn wilson_lm_residue(m: u64, p: u64) -> Result<u64, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if p <= m {
        return Err(ArithError::PrimeNotAboveM { p, m });
    }
    let d = p - m;
    let qm = qm_factored(m).mod_u64(p);
    let fact = factorial_mod(d - 1, p);
    let inner = mul_mod(fact, qm, p);
    let inv = inv_mod(inner, p).expect("d-1 < p and Q_M has no factor >= p");
    Ok(if d.is_multiple_of(2) { inv } else { (p - inv) % p })
}
