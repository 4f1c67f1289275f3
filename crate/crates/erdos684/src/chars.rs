//! Dirichlet characters modulo a prime: χ_j(g^i) = e(2πi·j·i/(p−1)) for a
//! fixed primitive root g. Band sums over primes, residue-class counts,
//! exact product-mixing ratios, and interval (Burgess-style) profiles.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::product_coefficient;
use crate::modular::{inv_mod, mul_mod, pow_mod};
use crate::primes::{distinct_prime_factors, is_prime, primes_in_band};

#[derive(Debug, Error, PartialEq)]
pub enum CharError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("chi^ell is principal; the band bound does not apply")]
    PrincipalPower,
    #[error("{0} is divisible by the character modulus")]
    Ramified(u64),
    #[error("coefficient degree {k} out of range 1..={max}")]
    DegreeOutOfRange { k: usize, max: usize },
}

/// Least primitive root modulo a prime p, by exhaustive order checking
/// against the factored p−1. For p = 2 the group is trivial and g = 1.
pub fn primitive_root(p: u64) -> u64 {
    assert!(is_prime(p), "{p} is not prime");
    if p == 2 {
        return 1;
    }
    let order = p - 1;
    let factors = distinct_prime_factors(order);
    'outer: for g in 2..p {
        for &q in &factors {
            if pow_mod(g, order / q, p) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

/// Baby-step/giant-step discrete logs base g mod p, precomputed per (p, g).
struct Bsgs {
    p: u64,
    step: u64,
    baby: HashMap<u64, u64>,
    giant: u64, // g^{-step} mod p
}

impl Bsgs {
    fn new(p: u64, g: u64) -> Self {
        let order = p - 1;
        let step = (order as f64).sqrt().ceil() as u64 + 1;
        let mut baby = HashMap::with_capacity(step as usize);
        let mut acc = 1u64;
        for i in 0..step {
            baby.entry(acc).or_insert(i);
            acc = mul_mod(acc, g, p);
        }
        let giant = inv_mod(pow_mod(g, step, p), p).expect("g is a unit");
        Bsgs { p, step, baby, giant }
    }

    fn dlog(&self, x: u64) -> Option<u64> {
        let x = x % self.p;
        if x == 0 {
            return None;
        }
        let mut y = x;
        for t in 0..=(self.p - 1) / self.step + 1 {
            if let Some(&i) = self.baby.get(&y) {
                return Some(t * self.step + i);
            }
            y = mul_mod(y, self.giant, self.p);
        }
        unreachable!("dlog exists for every unit")
    }
}

/// A Dirichlet character mod p, indexed by 0 ≤ j < p−1 against the least
/// primitive root: χ(g^i) = e(2πi·j·i/(p−1)).
pub struct Character {
    p: u64,
    g: u64,
    j: u64,
    order: u64,
    dlog: Bsgs,
}

impl Character {
    pub fn new(p: u64, j: u64) -> Result<Self, CharError> {
        if !is_prime(p) {
            return Err(CharError::NotPrime(p));
        }
        let g = primitive_root(p);
        let j = if p == 2 { 0 } else { j % (p - 1) };
        let order = if p == 2 {
            1
        } else {
            (p - 1) / num_integer::gcd(j, p - 1)
        };
        Ok(Character {
            p,
            g,
            j,
            order,
            dlog: Bsgs::new(p, g),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    pub fn index(&self) -> u64 {
        self.j
    }

    /// The order d of χ in the character group.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_principal(&self) -> bool {
        self.j == 0
    }

    /// Discrete log of x base g, None when p | x.
    pub fn dlog(&self, x: u64) -> Option<u64> {
        self.dlog.dlog(x)
    }

    /// The exponent e with χ(x) = e(2πi·e/(p−1)), None when p | x.
    pub fn exponent(&self, x: u64) -> Option<u64> {
        let i = self.dlog(x)?;
        Some(mul_mod(self.j, i, self.p - 1))
    }

    /// χ(x) as a complex number (0 on multiples of p).
    pub fn eval(&self, x: u64) -> Complex64 {
        match self.exponent(x) {
            None => Complex64::new(0.0, 0.0),
            Some(e) => Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * e as f64 / (self.p - 1) as f64,
            ),
        }
    }

    /// The residue class 0 ≤ r < d with χ(x) = ζ_d^r, None when p | x.
    pub fn class_of(&self, x: u64) -> Option<u64> {
        let e = self.exponent(x)?;
        debug_assert_eq!(e % ((self.p - 1) / self.order), 0);
        Some(e / ((self.p - 1) / self.order))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BandSum {
    pub p: u64,
    pub j: u64,
    pub ell: u64,
    pub m: u64,
    pub band_hi: u64,
    pub band_count: u64,
    pub sum_re: f64,
    pub sum_im: f64,
    pub magnitude: f64,
    /// |Σ χ^ℓ(q)| / #band.
    pub normalized: f64,
}

/// Σ_{M < q ≤ CM, q prime, q ≠ p} χ^ℓ(q), exact band boundaries from the
/// rational C. Rejects principal χ^ℓ.
pub fn band_char_sum(
    chi: &Character,
    ell: u64,
    m: u64,
    c: &BigRational,
) -> Result<BandSum, CharError> {
    let p = chi.p;
    if p == 2 || mul_mod(chi.j, ell % (p - 1), p - 1) == 0 {
        return Err(CharError::PrincipalPower);
    }
    let band_hi = band_upper(m, c);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut band_count = 0u64;
    for q in primes_in_band(m, band_hi) {
        if q == p {
            continue;
        }
        band_count += 1;
        let i = chi.dlog(q).expect("q != p is a unit");
        let e = mul_mod(mul_mod(chi.j, ell % (p - 1), p - 1), i, p - 1);
        sum += Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::PI * e as f64 / (p - 1) as f64,
        );
    }
    let magnitude = sum.norm();
    Ok(BandSum {
        p,
        j: chi.j,
        ell,
        m,
        band_hi,
        band_count,
        sum_re: sum.re,
        sum_im: sum.im,
        magnitude,
        normalized: if band_count > 0 {
            magnitude / band_count as f64
        } else {
            0.0
        },
    })
}

/// ⌊CM⌋ from the exact rational C.
pub fn band_upper(m: u64, c: &BigRational) -> u64 {
    (c * BigRational::from_integer(m.into()))
        .floor()
        .to_integer()
        .to_u64()
        .expect("band bound fits u64")
}

/// n_r = #{q ∈ V : χ(q) = ζ_d^r} for r = 0..d−1, via discrete logs.
pub fn class_counts(v: &[u64], chi: &Character) -> Result<Vec<u64>, CharError> {
    let mut counts = vec![0u64; chi.order as usize];
    for &q in v {
        let r = chi.class_of(q).ok_or(CharError::Ramified(q))?;
        counts[r as usize] += 1;
    }
    Ok(counts)
}

/// The coefficient-cancellation measurement of one character on one
/// prime list.
#[derive(Debug, Clone, Serialize)]
pub struct MixingReport {
    pub p: u64,
    pub j: u64,
    pub order: u64,
    pub v_len: usize,
    pub k: usize,
    pub coeff_abs: f64,
    pub coeff_is_zero: bool,
    /// C(|V|, k), unabbreviated.
    pub binom_ref: String,
    pub ratio: f64,
    pub balanced: bool,
    pub class_counts: Vec<u64>,
}

/// |[z^k] ∏_{q∈V}(1 + z·χ(q))| / C(|V|, k), with the coefficient computed
/// exactly in `Z[ζ_d]` and the magnitude taken at the very end.
pub fn mixing_ratio(v: &[u64], chi: &Character, k: usize) -> Result<MixingReport, CharError> {
    if v.is_empty() || k == 0 || k >= v.len() {
        return Err(CharError::DegreeOutOfRange {
            k,
            max: v.len().saturating_sub(1),
        });
    }
    let mut labels = Vec::with_capacity(v.len());
    for &q in v {
        labels.push(chi.class_of(q).ok_or(CharError::Ramified(q))?);
    }
    let counts = class_counts(v, chi)?;
    let report = mixing_from_labels(&labels, chi.order, k);
    Ok(MixingReport {
        p: chi.p,
        j: chi.j,
        balanced: counts.iter().all(|&c| c == counts[0]),
        class_counts: counts,
        ..report
    })
}

/// Label-level mixing measurement: the classes need not come from an
/// actual character (used for synthetic balanced inputs).
pub fn mixing_from_labels(labels: &[u64], d: u64, k: usize) -> MixingReport {
    assert!(k <= labels.len());
    let coeff = product_coefficient(labels, d, k);
    let coeff_is_zero = coeff.is_zero();
    let coeff_abs = if coeff_is_zero { 0.0 } else { coeff.magnitude() };
    let binom = num_integer::binomial(BigUint::from(labels.len() as u64), BigUint::from(k as u64));
    let binom_f = binom.to_f64().unwrap();
    let mut counts = vec![0u64; d as usize];
    for &r in labels {
        counts[(r % d) as usize] += 1;
    }
    MixingReport {
        p: 0,
        j: 0,
        order: d,
        v_len: labels.len(),
        k,
        coeff_abs,
        coeff_is_zero,
        binom_ref: binom.to_string(),
        ratio: coeff_abs / binom_f,
        balanced: counts.iter().all(|&c| c == counts[0]),
        class_counts: counts,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BurgessRow {
    pub x0: u64,
    pub y: u64,
    pub magnitude: f64,
    /// |Σ_{x0<n≤x0+y} χ(n)| / y.
    pub normalized: f64,
}

/// Exact interval character sums over the integers, for inspecting the
/// short-interval saving.
pub fn burgess_profile(chi: &Character, x0_grid: &[u64], y_grid: &[u64]) -> Vec<BurgessRow> {
    let mut rows = Vec::new();
    for &x0 in x0_grid {
        for &y in y_grid {
            let mut sum = Complex64::new(0.0, 0.0);
            for n in x0 + 1..=x0 + y {
                sum += chi.eval(n % chi.p);
            }
            let magnitude = sum.norm();
            rows.push(BurgessRow {
                x0,
                y,
                magnitude,
                normalized: magnitude / y as f64,
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn primitive_roots_known() {
        assert_eq!(primitive_root(2), 1);
        assert_eq!(primitive_root(7), 3);
        assert_eq!(primitive_root(11), 2);
        assert_eq!(primitive_root(101), 2);
        // defining property at a sample of primes
        for p in [13u64, 31, 101, 409, 12007] {
            let g = primitive_root(p);
            for q in distinct_prime_factors(p - 1) {
                assert_ne!(pow_mod(g, (p - 1) / q, p), 1, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn dlog_roundtrip() {
        let chi = Character::new(101, 1).unwrap();
        for x in 1..101u64 {
            let i = chi.dlog(x).unwrap();
            assert_eq!(pow_mod(chi.generator(), i, 101), x);
        }
        assert_eq!(chi.dlog(0), None);
    }

    #[test]
    fn character_is_multiplicative() {
        let chi = Character::new(31, 5).unwrap();
        for x in 1..31u64 {
            for y in 1..31u64 {
                let lhs = chi.exponent(mul_mod(x, y, 31)).unwrap();
                let rhs = (chi.exponent(x).unwrap() + chi.exponent(y).unwrap()) % 30;
                assert_eq!(lhs, rhs, "x={x} y={y}");
            }
        }
    }

    #[test]
    fn orthogonality_is_exact_in_class_counts() {
        // a nonprincipal character hits each exponent class equally often,
        // hence the complete sum vanishes
        for j in [1u64, 2, 5, 10, 50] {
            let chi = Character::new(101, j).unwrap();
            let units: Vec<u64> = (1..101).collect();
            let counts = class_counts(&units, &chi).unwrap();
            let d = chi.order();
            assert!(counts.iter().all(|&c| c == 100 / d), "j={j}");
            // float version for good measure
            let s: Complex64 = units.iter().map(|&x| chi.eval(x)).sum();
            assert!(s.norm() < 1e-9, "j={j} |sum|={}", s.norm());
        }
    }

    #[test]
    fn class_counts_match_direct_evaluation() {
        // oracle: walk powers of g forward, marking classes without dlogs
        let p = 101u64;
        let chi = Character::new(p, 25).unwrap(); // order 4
        assert_eq!(chi.order(), 4);
        let v = primes_in_band(50, 100);
        let counts = class_counts(&v, &chi).unwrap();

        let g = chi.generator();
        let d = chi.order();
        let mut class_by_value = vec![u64::MAX; p as usize];
        let mut acc = 1u64;
        for i in 0..p - 1 {
            class_by_value[acc as usize] = mul_mod(chi.index(), i, p - 1) / ((p - 1) / d);
            acc = mul_mod(acc, g, p);
        }
        let mut oracle = vec![0u64; d as usize];
        for &q in &v {
            oracle[class_by_value[(q % p) as usize] as usize] += 1;
        }
        assert_eq!(counts, oracle);
        assert_eq!(counts.iter().sum::<u64>(), v.len() as u64);
    }

    #[test]
    fn band_sum_rejects_principal_and_conjugates() {
        let chi = Character::new(101, 1).unwrap();
        assert!(matches!(
            band_char_sum(&chi, 0, 50, &rat(2, 1)),
            Err(CharError::PrincipalPower)
        ));
        assert!(matches!(
            band_char_sum(&chi, 100, 50, &rat(2, 1)),
            Err(CharError::PrincipalPower)
        ));
        // conjugate character gives the conjugate sum
        let conj = Character::new(101, 99).unwrap(); // j and p-1-j are conjugate
        let a = band_char_sum(&chi, 1, 50, &rat(2, 1)).unwrap();
        let b = band_char_sum(&conj, 1, 50, &rat(2, 1)).unwrap();
        assert!((a.sum_re - b.sum_re).abs() < 1e-12);
        assert!((a.sum_im + b.sum_im).abs() < 1e-12);
        assert!((a.magnitude - b.magnitude).abs() < 1e-12);
    }

    #[test]
    fn band_sum_worked_example() {
        // p = 101, j = 1, ell = 1, M = 50, C = 2; frozen from a direct
        // summation oracle (independent primitive root and index walk)
        let chi = Character::new(101, 1).unwrap();
        let s = band_char_sum(&chi, 1, 50, &rat(2, 1)).unwrap();
        assert_eq!(s.band_count, 10);
        assert!((s.sum_re - -1.940524157138133).abs() < 1e-12);
        assert!((s.sum_im - -0.795180066783785).abs() < 1e-12);
        assert!((s.normalized - 0.209712787951687).abs() < 1e-12);
    }

    #[test]
    fn band_sum_empty_band() {
        let chi = Character::new(101, 1).unwrap();
        // no prime in (13, 16]
        let s = band_char_sum(&chi, 1, 13, &rat(16, 13)).unwrap();
        assert_eq!(s.band_count, 0);
        assert_eq!(s.magnitude, 0.0);
    }

    #[test]
    fn mixing_balanced_closed_form() {
        // d = 2, n_0 = n_1 = 10: ∏ = (1−z²)^10, odd coefficients vanish,
        // k = 10 gives |C(10,5)| = 252
        let labels: Vec<u64> = (0..20).map(|i| i % 2).collect();
        for k in (1..20).step_by(2) {
            let rep = mixing_from_labels(&labels, 2, k);
            assert!(rep.coeff_is_zero, "k={k}");
        }
        let rep = mixing_from_labels(&labels, 2, 10);
        assert!((rep.coeff_abs - 252.0).abs() < 1e-9);
        assert_eq!(rep.binom_ref, "184756");
        assert!((rep.ratio - 252.0 / 184756.0).abs() < 1e-12);
        assert!(rep.balanced);
    }

    #[test]
    fn mixing_with_real_character_matches_label_path() {
        let chi = Character::new(101, 50).unwrap(); // order 2: the Legendre symbol
        assert_eq!(chi.order(), 2);
        let v = primes_in_band(50, 100);
        let k = v.len() / 2;
        let rep = mixing_ratio(&v, &chi, k).unwrap();
        assert_eq!(rep.class_counts.iter().sum::<u64>(), v.len() as u64);
        assert!(rep.ratio <= 1.0);
        // oracle: direct (1+z·(±1)) integer polynomial product
        let mut poly = vec![0f64; v.len() + 1];
        poly[0] = 1.0;
        for &q in &v {
            let sign = if chi.class_of(q).unwrap() == 0 { 1.0 } else { -1.0 };
            for j in (1..poly.len()).rev() {
                poly[j] += sign * poly[j - 1];
            }
        }
        assert!((rep.coeff_abs - poly[k].abs()).abs() < 1e-9);
    }

    #[test]
    fn mixing_rejects_bad_degree() {
        let chi = Character::new(11, 1).unwrap();
        let v = vec![2u64, 3, 5];
        assert!(mixing_ratio(&v, &chi, 0).is_err());
        assert!(mixing_ratio(&v, &chi, 3).is_err());
        assert!(mixing_ratio(&v, &chi, 2).is_ok());
    }

    #[test]
    fn burgess_full_period_vanishes() {
        let chi = Character::new(101, 7).unwrap();
        let rows = burgess_profile(&chi, &[0], &[101]);
        assert!(rows[0].magnitude < 1e-9, "orthogonality over a full period");
        let rows = burgess_profile(&chi, &[17], &[1]);
        assert!(rows[0].magnitude <= 1.0 + 1e-12);
    }
}
