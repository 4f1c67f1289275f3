//! Modular arithmetic over u64 moduli plus Chinese-remainder combination
//! of residues at pairwise-coprime prime powers.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::factored::PrimePower;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrtError {
    #[error("prime {0} appears in more than one modulus")]
    RepeatedPrime(u64),
}

/// (a * b) mod m without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m by square and multiply.
pub fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Inverse of a mod m, if gcd(a, m) = 1.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// n! mod m for n < m (no wraparound through 0 when m is prime and n < m).
pub fn factorial_mod(n: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    for i in 2..=n {
        acc = mul_mod(acc, i, m);
    }
    acc
}

/// Least signed representative of `r` mod an odd prime `p`: the value
/// h with h ≡ r and |h| ≤ (p-1)/2.
pub fn signed_rep(r: u64, p: u64) -> i64 {
    let r = r % p;
    if r <= (p - 1) / 2 {
        r as i64
    } else {
        r as i64 - p as i64
    }
}

/// Combine residues at pairwise-coprime prime powers into the unique
/// residue modulo their product. Rejects two moduli sharing a prime.
pub fn crt_combine(pairs: &[(BigUint, PrimePower)]) -> Result<(BigUint, BigUint), CrtError> {
    let mut seen = std::collections::BTreeSet::new();
    for (_, pp) in pairs {
        if !seen.insert(pp.prime()) {
            return Err(CrtError::RepeatedPrime(pp.prime()));
        }
    }
    let mut residue = BigUint::zero();
    let mut modulus = BigUint::one();
    for (r, pp) in pairs {
        let m2 = pp.value();
        let r2 = r % &m2;
        // solve residue + modulus * x ≡ r2 (mod m2)
        let inv = big_inv_mod(&modulus, &m2).expect("moduli are pairwise coprime");
        let diff = (&r2 + &m2 - (&residue % &m2)) % &m2;
        let x = (diff * inv) % &m2;
        residue += &modulus * x;
        modulus *= m2;
    }
    Ok((residue, modulus))
}

/// Inverse of a mod m over big integers, if it exists.
pub fn big_inv_mod(a: &BigUint, m: &BigUint) -> Option<BigUint> {
    use num_bigint::BigInt;
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(&m).to_biguint().unwrap())
}
