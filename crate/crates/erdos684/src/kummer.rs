//! Kummer carry counting and the smooth/rough binomial split.
//!
//! The p-adic valuation of C(n,k) equals the number of levels p^a at which
//! k mod p^a > n mod p^a (the carries when adding k and n−k in base p).
//! Enumeration stops early at the first level a₀ with p^{a₀} > k and
//! n mod p^{a₀} ≥ k: above such a level the residue of n only grows by
//! nonnegative multiples of p^{a₀} while k mod p^a stays k, so no further
//! carry can occur.
//!
//! Everything here runs on two backends: an explicit big integer, or a
//! [`ResidueSystem`] that knows n only through residues at declared prime
//! powers (and, optionally, log n). The residue backend is how the
//! multiplier seeds t·L_M − 1 are analyzed without materializing them.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::factored::{FactoredNat, PrimePower};
use crate::primes::sieve_primes;
use crate::rational::log_biguint;

#[derive(Debug, Error, PartialEq)]
pub enum KummerError {
    #[error("k = {k} exceeds n")]
    KExceedsN { k: u64 },
    #[error("residue system cannot certify carry termination for prime {0}")]
    MissingLevels(u64),
    #[error("residue system has no log value")]
    MissingLogValue,
    #[error("residue {residue} out of range for {level}")]
    ResidueOutOfRange { level: String, residue: String },
    #[error("incoherent residues for prime {p}: level {a} disagrees with level {b}")]
    Incoherent { p: u64, a: u32, b: u32 },
}

/// The carry levels of one prime for a fixed pair (n, k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarryProfile {
    pub p: u64,
    pub carry_levels: BTreeSet<u32>,
}

impl CarryProfile {
    /// v_p(C(n,k)).
    pub fn count(&self) -> u32 {
        self.carry_levels.len() as u32
    }
}

/// A huge integer known only through residues at a set of prime powers.
#[derive(Debug, Clone, Default)]
pub struct ResidueSystem {
    entries: BTreeMap<PrimePower, BigUint>,
    log_value: Option<f64>,
    label: String,
}

impl ResidueSystem {
    pub fn new(label: impl Into<String>) -> Self {
        ResidueSystem {
            entries: BTreeMap::new(),
            log_value: None,
            label: label.into(),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn log_value(&self) -> Option<f64> {
        self.log_value
    }

    /// The natural log of the represented integer. Callers that know the
    /// construction set this; the engine never estimates it.
    pub fn set_log_value(&mut self, log_value: f64) {
        assert!(log_value >= 0.0, "log value must be nonnegative");
        self.log_value = Some(log_value);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PrimePower, &BigUint)> {
        self.entries.iter()
    }

    /// Insert a residue at a prime-power level, checking range and
    /// coherence with every stored level of the same prime.
    pub fn insert(&mut self, level: PrimePower, residue: BigUint) -> Result<(), KummerError> {
        if residue >= level.value() {
            return Err(KummerError::ResidueOutOfRange {
                level: level.to_string(),
                residue: residue.to_string(),
            });
        }
        let p = level.prime();
        for (other, r_other) in self.entries_for(p) {
            let (lo, hi, r_lo, r_hi) = if other.exponent() < level.exponent() {
                (other, level, r_other.clone(), residue.clone())
            } else {
                (level, other, residue.clone(), r_other.clone())
            };
            if &r_hi % lo.value() != r_lo {
                return Err(KummerError::Incoherent {
                    p,
                    a: lo.exponent(),
                    b: hi.exponent(),
                });
            }
        }
        self.entries.insert(level, residue);
        Ok(())
    }

    fn entries_for(&self, p: u64) -> impl Iterator<Item = (PrimePower, &BigUint)> {
        self.entries
            .range(PrimePower::raw(p, 1)..=PrimePower::raw(p, u32::MAX))
            .map(|(pp, r)| (*pp, r))
    }

    /// Highest stored exponent for p, with its residue.
    pub fn top_level(&self, p: u64) -> Option<(u32, &BigUint)> {
        self.entries_for(p)
            .last()
            .map(|(pp, r)| (pp.exponent(), r))
    }

    /// Residue of the represented integer mod p^a, when a stored level
    /// determines it.
    pub fn residue(&self, p: u64, a: u32) -> Option<BigUint> {
        let (top_a, top_r) = self.top_level(p)?;
        if top_a < a {
            return None;
        }
        if top_a == a {
            return Some(top_r.clone());
        }
        Some(top_r % BigUint::from(p).pow(a))
    }

    /// Build from an explicit integer at the given levels.
    pub fn from_integer(
        n: &BigUint,
        levels: &[PrimePower],
        label: impl Into<String>,
    ) -> Result<Self, KummerError> {
        let mut rs = ResidueSystem::new(label);
        for &pp in levels {
            rs.insert(pp, n % pp.value())?;
        }
        rs.set_log_value(log_biguint(n));
        Ok(rs)
    }
}

/// The split C(n,k) = u·v with u supported on primes ≤ k and v on primes > k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothSplit {
    pub u: FactoredNat,
    pub v: FactoredNat,
    pub n: u64,
    pub k: u64,
}

/// Carry levels of p for (n, k), explicit backend. Rejects k > n.
pub fn carry_count(n: &BigUint, k: u64, p: u64) -> Result<CarryProfile, KummerError> {
    if BigUint::from(k) > *n {
        return Err(KummerError::KExceedsN { k });
    }
    let mut levels = BTreeSet::new();
    let mut modulus = BigUint::from(p);
    let mut a = 1u32;
    loop {
        if modulus > *n {
            break; // k mod p^a = k <= n = n mod p^a from here on
        }
        let r = n % &modulus;
        let k_mod = k_mod_big(k, &modulus);
        if BigUint::from(k_mod) > r {
            levels.insert(a);
        }
        if modulus > BigUint::from(k) && r >= BigUint::from(k) {
            break; // certified: no carries at any higher level
        }
        modulus *= p;
        a += 1;
    }
    Ok(CarryProfile { p, carry_levels: levels })
}

fn k_mod_big(k: u64, modulus: &BigUint) -> u64 {
    match modulus.to_u64() {
        Some(m) => k % m,
        None => k,
    }
}

/// Carry levels of p for (n, k) when n is a residue system. Fails with
/// `MissingLevels(p)` when the stored levels cannot certify termination.
pub fn carry_count_residues(
    rs: &ResidueSystem,
    k: u64,
    p: u64,
    level_cap: Option<u32>,
) -> Result<CarryProfile, KummerError> {
    let Some((top_a, top_r)) = rs.top_level(p) else {
        return Err(KummerError::MissingLevels(p));
    };
    let a_max = level_cap.map_or(top_a, |cap| cap.min(top_a));
    let mut levels = BTreeSet::new();
    let mut modulus = BigUint::from(p);
    for a in 1..=a_max {
        let r = top_r % &modulus;
        let k_mod = k_mod_big(k, &modulus);
        if BigUint::from(k_mod) > r {
            levels.insert(a);
        }
        if modulus > BigUint::from(k) && r >= BigUint::from(k) {
            return Ok(CarryProfile { p, carry_levels: levels });
        }
        modulus *= p;
    }
    Err(KummerError::MissingLevels(p))
}

/// Split C(n,k) into its ≤k-smooth and >k-rough parts via carry counts
/// over all primes ≤ n.
pub fn uv_split(n: u64, k: u64) -> Result<SmoothSplit, KummerError> {
    if k > n {
        return Err(KummerError::KExceedsN { k });
    }
    let big_n = BigUint::from(n);
    let mut u = FactoredNat::one();
    let mut v = FactoredNat::one();
    for p in sieve_primes(n) {
        let c = carry_count(&big_n, k, p)?.count();
        if p <= k {
            u.push(p, c);
        } else {
            v.push(p, c);
        }
    }
    Ok(SmoothSplit { u, v, n, k })
}

/// log u_k(n) = Σ_{p ≤ k} v_p(C(n,k)) · log p, explicit backend.
pub fn log_u(n: &BigUint, k: u64, level_cap: Option<u32>) -> Result<f64, KummerError> {
    Ok(smooth_part(n, k, level_cap)?.log_value())
}

/// The ≤k-smooth part of C(n,k) as a factored natural, explicit backend.
pub fn smooth_part(
    n: &BigUint,
    k: u64,
    level_cap: Option<u32>,
) -> Result<FactoredNat, KummerError> {
    if BigUint::from(k) > *n {
        return Err(KummerError::KExceedsN { k });
    }
    let mut u = FactoredNat::one();
    for p in sieve_primes(k) {
        let profile = carry_count(n, k, p)?;
        let count = match level_cap {
            None => profile.count(),
            Some(cap) => profile.carry_levels.iter().filter(|&&a| a <= cap).count() as u32,
        };
        u.push(p, count);
    }
    Ok(u)
}

/// log u_k over a residue system.
pub fn log_u_residues(
    rs: &ResidueSystem,
    k: u64,
    level_cap: Option<u32>,
) -> Result<f64, KummerError> {
    let mut total = 0.0;
    for p in sieve_primes(k) {
        let profile = carry_count_residues(rs, k, p, level_cap)?;
        total += profile.count() as f64 * (p as f64).ln();
    }
    Ok(total)
}

/// How u_k compares to n²: exact whenever u is small enough to
/// materialize, otherwise logs with an exact recheck near ties.
const EXACT_COMPARE_BITS: f64 = 4096.0;
const LOG_TIE_MARGIN: f64 = 1e-9;

fn u_exceeds_n_squared(u: &FactoredNat, n_squared: &BigUint, log_n: f64) -> bool {
    if u.log2_value() <= EXACT_COMPARE_BITS {
        return u.to_integer() > *n_squared;
    }
    let log_u = u.log_value();
    let bound = 2.0 * log_n;
    if (log_u - bound).abs() > LOG_TIE_MARGIN * bound.max(1.0) {
        log_u > bound
    } else {
        u.to_integer() > *n_squared
    }
}

/// f(n): the least 0 ≤ k ≤ k_max with u_k(n) > n², or None. k_max
/// defaults to n. For small n no such k may exist.
pub fn f_exact(n: &BigUint, k_max: Option<u64>) -> Option<u64> {
    assert!(!n.is_zero(), "f(n) needs n >= 1");
    let k_max = k_max.unwrap_or_else(|| n.to_u64().unwrap_or(u64::MAX));
    let n_squared = n * n;
    let log_n = log_biguint(n);
    let mut primes: Vec<u64> = Vec::new();
    let mut sieved_to = 1u64;
    let mut residues = CarryCache::new(n.clone());
    let mut k = 0u64;
    while k <= k_max && BigUint::from(k) <= *n {
        if k > sieved_to {
            sieved_to = (2 * k).max(64);
            primes = sieve_primes(sieved_to);
        }
        let mut u = FactoredNat::one();
        for &p in primes.iter().take_while(|&&p| p <= k) {
            u.push(p, residues.carries(k, p));
        }
        if u_exceeds_n_squared(&u, &n_squared, log_n) {
            return Some(k);
        }
        k += 1;
    }
    None
}

/// Per-prime residue ladders of a fixed n, shared across the k-loop.
struct CarryCache {
    n: BigUint,
    ladders: BTreeMap<u64, Vec<BigUint>>,
}

impl CarryCache {
    fn new(n: BigUint) -> Self {
        CarryCache { n, ladders: BTreeMap::new() }
    }

    /// Residues n mod p^a for a = 1.. while p^a ≤ n.
    fn ladder(&mut self, p: u64) -> &[BigUint] {
        let n = &self.n;
        self.ladders.entry(p).or_insert_with(|| {
            let mut v = Vec::new();
            let mut modulus = BigUint::from(p);
            while modulus <= *n {
                v.push(n % &modulus);
                modulus *= p;
            }
            v
        })
    }

    fn carries(&mut self, k: u64, p: u64) -> u32 {
        let big_k = BigUint::from(k);
        let ladder = self.ladder(p);
        let mut count = 0u32;
        let mut modulus = BigUint::from(p);
        for r in ladder {
            let k_mod = k_mod_big(k, &modulus);
            if BigUint::from(k_mod) > *r {
                count += 1;
            }
            if modulus > big_k && *r >= big_k {
                break;
            }
            modulus *= p;
        }
        count
    }
}

/// Outcome of checking u_k(n) ≤ n² for every k up to a bound.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FLowerReport {
    pub pass: bool,
    pub k_bound: u64,
    /// k maximizing log u_k, with its margin log(n²/u_k).
    pub worst_k: u64,
    pub worst_margin: f64,
    pub first_violation: Option<u64>,
}

/// Certify u_k(n) ≤ n² for every 0 ≤ k ≤ k_bound, explicit backend
/// (exact comparisons).
pub fn verify_f_lower(n: &BigUint, k_bound: u64) -> Result<FLowerReport, KummerError> {
    let n_squared = n * n;
    let log_n = log_biguint(n);
    let mut worst = (0u64, f64::INFINITY);
    for k in 0..=k_bound {
        if BigUint::from(k) > *n {
            break;
        }
        let u = smooth_part(n, k, None)?;
        let margin = 2.0 * log_n - u.log_value();
        if margin < worst.1 {
            worst = (k, margin);
        }
        if u.to_integer() > n_squared {
            return Ok(FLowerReport {
                pass: false,
                k_bound,
                worst_k: k,
                worst_margin: margin,
                first_violation: Some(k),
            });
        }
    }
    Ok(FLowerReport {
        pass: true,
        k_bound,
        worst_k: worst.0,
        worst_margin: worst.1,
        first_violation: None,
    })
}

/// Residue-system version: log n comes from the system's log value.
pub fn verify_f_lower_residues(
    rs: &ResidueSystem,
    k_bound: u64,
) -> Result<FLowerReport, KummerError> {
    let log_n = rs.log_value().ok_or(KummerError::MissingLogValue)?;
    let bound = 2.0 * log_n;
    let mut worst = (0u64, f64::INFINITY);
    for k in 0..=k_bound {
        let log_u = log_u_residues(rs, k, None)?;
        let margin = bound - log_u;
        if margin < worst.1 {
            worst = (k, margin);
        }
        if log_u > bound {
            return Ok(FLowerReport {
                pass: false,
                k_bound,
                worst_k: k,
                worst_margin: margin,
                first_violation: Some(k),
            });
        }
    }
    Ok(FLowerReport {
        pass: true,
        k_bound,
        worst_k: worst.0,
        worst_margin: worst.1,
        first_violation: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    /// Pascal-recurrence binomial, the independent oracle.
    fn binom(n: u64, k: u64) -> BigUint {
        let mut row = vec![BigUint::from(1u32)];
        for _ in 0..n {
            let mut next = vec![BigUint::from(1u32)];
            for i in 1..row.len() {
                next.push(&row[i - 1] + &row[i]);
            }
            next.push(BigUint::from(1u32));
            row = next;
        }
        row[k as usize].clone()
    }

    /// Trial-division valuation of a big integer.
    fn valuation(mut x: BigUint, p: u64) -> u32 {
        let p = BigUint::from(p);
        let mut v = 0;
        while (&x % &p).is_zero() && !x.is_zero() {
            x /= &p;
            v += 1;
        }
        v
    }

    /// The smooth part of C(n,k) by direct factorization (oracle).
    fn smooth_oracle(n: u64, k: u64) -> BigUint {
        let b = binom(n, k);
        let mut u = BigUint::from(1u32);
        for p in sieve_primes(k) {
            u *= BigUint::from(p).pow(valuation(b.clone(), p));
        }
        u
    }

    /// f(n) by the direct-factorization oracle.
    fn f_oracle(n: u64) -> Option<u64> {
        let n_sq = BigUint::from(n) * BigUint::from(n);
        (0..=n).find(|&k| smooth_oracle(n, k) > n_sq)
    }

    #[test]
    fn carry_worked_examples() {
        let profile = carry_count(&BigUint::from(10u32), 4, 2).unwrap();
        assert_eq!(profile.count(), 1);
        assert_eq!(profile.carry_levels, BTreeSet::from([3]));

        let profile = carry_count(&BigUint::from(35u32), 3, 3).unwrap();
        assert_eq!(profile.count(), 0);

        for n in [5u32, 100, 1000] {
            let profile = carry_count(&BigUint::from(n), 0, 7).unwrap();
            assert_eq!(profile.count(), 0, "C(n,0) = 1");
        }

        assert_eq!(
            carry_count(&BigUint::from(3u32), 4, 2),
            Err(KummerError::KExceedsN { k: 4 })
        );
    }

    #[test]
    fn carry_equals_valuation_exhaustive() {
        for n in 0..=60u64 {
            for k in 0..=n {
                let b = binom(n, k);
                for p in [2u64, 3, 5, 7, 11] {
                    let c = carry_count(&BigUint::from(n), k, p).unwrap().count();
                    assert_eq!(c, valuation(b.clone(), p), "n={n} k={k} p={p}");
                }
            }
        }
    }

    #[test]
    fn uv_split_worked_examples() {
        let s = uv_split(10, 4).unwrap();
        assert_eq!(s.u.to_integer(), BigUint::from(6u32));
        assert_eq!(s.v.to_integer(), BigUint::from(35u32));

        let s = uv_split(17, 17).unwrap();
        assert!(s.u.is_one());
        assert!(s.v.is_one());

        let s = uv_split(35, 3).unwrap();
        assert!(s.u.is_one());
        assert_eq!(
            s.v,
            FactoredNat::from_factors([(5, 1), (7, 1), (11, 1), (17, 1)]).unwrap()
        );
    }

    #[test]
    fn uv_product_identity_and_separation() {
        for n in 0..=80u64 {
            for k in 0..=n {
                let s = uv_split(n, k).unwrap();
                assert_eq!(s.u.to_integer() * s.v.to_integer(), binom(n, k), "n={n} k={k}");
                for (p, _) in s.u.iter() {
                    assert!(p <= k);
                }
                for (p, _) in s.v.iter() {
                    assert!(p > k);
                }
            }
        }
    }

    #[test]
    fn log_u_worked_examples() {
        let l = log_u(&BigUint::from(10u32), 4, None).unwrap();
        assert!((l - 6f64.ln()).abs() < 1e-12);
        let l = log_u(&BigUint::from(999u32), 0, None).unwrap();
        assert_eq!(l, 0.0);
    }

    #[test]
    fn log_u_residue_backend_matches_explicit() {
        let n = BigUint::from(10u32);
        let levels: Vec<PrimePower> = [(2u64, 4u32), (3, 3)]
            .iter()
            .map(|&(p, a)| PrimePower::new(p, a).unwrap())
            .collect();
        let rs = ResidueSystem::from_integer(&n, &levels, "n=10").unwrap();
        let a = log_u(&n, 4, None).unwrap();
        let b = log_u_residues(&rs, 4, None).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn residue_backend_missing_levels() {
        let n = BigUint::from(1000u32);
        // only p=2 up to 2^3: cannot certify termination for k=4 (8 mod: r=0 < 4)
        let levels = vec![PrimePower::new(2, 3).unwrap()];
        let rs = ResidueSystem::from_integer(&n, &levels, "thin").unwrap();
        assert_eq!(
            log_u_residues(&rs, 4, None),
            Err(KummerError::MissingLevels(2))
        );
        // p=3 entirely absent
        let err = log_u_residues(&rs, 3, None);
        assert_eq!(err, Err(KummerError::MissingLevels(2)));
    }

    #[test]
    fn residue_system_coherence() {
        let mut rs = ResidueSystem::new("test");
        rs.insert(PrimePower::new(2, 3).unwrap(), BigUint::from(7u32))
            .unwrap();
        // 2^5 entry must reduce to 7 mod 8
        let err = rs.insert(PrimePower::new(2, 5).unwrap(), BigUint::from(8u32));
        assert!(matches!(err, Err(KummerError::Incoherent { p: 2, .. })));
        rs.insert(PrimePower::new(2, 5).unwrap(), BigUint::from(15u32))
            .unwrap();
        assert_eq!(rs.residue(2, 1), Some(BigUint::from(1u32)));
        assert_eq!(rs.residue(2, 4), Some(BigUint::from(15u32)));
        assert_eq!(rs.residue(2, 6), None);
        let err = rs.insert(PrimePower::new(3, 1).unwrap(), BigUint::from(3u32));
        assert!(matches!(err, Err(KummerError::ResidueOutOfRange { .. })));
    }

    #[test]
    fn f_exact_no_k_for_tiny_n() {
        // max C(3,k) = 3 < 9, so every u_k <= 3 < n^2
        assert_eq!(f_exact(&BigUint::from(3u32), None), None);
        assert_eq!(f_oracle(3), None);
    }

    #[test]
    fn f_exact_of_35_matches_oracle() {
        // 35 = M_3 - 1 so f(35) > 3
        let f = f_exact(&BigUint::from(35u32), None);
        assert_eq!(f, f_oracle(35));
        let f = f.expect("f(35) exists");
        assert!(f > 3);
        assert_eq!(f, 11); // frozen from the direct-factorization oracle
    }

    #[test]
    fn f_exact_of_1000_matches_oracle() {
        let f = f_exact(&BigUint::from(1000u32), None);
        assert_eq!(f, f_oracle(1000));
        assert_eq!(f, Some(29)); // frozen from the direct-factorization oracle
    }

    #[test]
    fn verify_f_lower_examples() {
        let n = BigUint::from(35u32);
        let r = verify_f_lower(&n, 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.first_violation, None);

        // fails at some k <= 34 iff f(35) <= 34, which it is
        let r = verify_f_lower(&n, 34).unwrap();
        assert_eq!(r.pass, f_oracle(35).is_none_or(|f| f > 34));
        assert_eq!(r.first_violation, f_oracle(35));

        // k = 0 always passes
        for n in [1u32, 2, 17] {
            let r = verify_f_lower(&BigUint::from(n), 0).unwrap();
            assert!(r.pass);
        }
    }

    #[test]
    fn early_stop_is_sound() {
        // oracle: enumerate every level p^a <= n with no early stop
        let mut rng = SplitMix64::new(0xE5);
        for _ in 0..200 {
            let n = 1 + rng.below(1_000_000);
            let k = rng.below(n + 1);
            let p = [2u64, 3, 5, 7, 11, 13][rng.below(6) as usize];
            let fast = carry_count(&BigUint::from(n), k, p).unwrap();
            let mut slow = BTreeSet::new();
            let mut pa = p as u128;
            let mut a = 1u32;
            while pa <= n as u128 {
                if (k as u128) % pa > (n as u128) % pa {
                    slow.insert(a);
                }
                pa *= p as u128;
                a += 1;
            }
            assert_eq!(fast.carry_levels, slow, "n={n} k={k} p={p}");
        }
    }

    #[test]
    fn f_exact_respects_k_max() {
        assert_eq!(f_exact(&BigUint::from(35u32), Some(3)), None);
        assert_eq!(f_exact(&BigUint::from(35u32), Some(10)), None);
        assert_eq!(f_exact(&BigUint::from(35u32), Some(11)), Some(11));
    }
}
