//! Frequency vectors, their exact rational values Φ(a) = Σ a_p·L_M/p^{β_p},
//! the exact reduced denominator q(a) = ∏ p^{B_p − v_p(a_p)}, normalized
//! local Fourier tables of the sets A_p, and enumerable partial sums of
//! the sieve criterion Σ_a 𝒲(a)·min(1, 1/(N·‖Φ(a)‖)).

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construction::{ConstructionParams, ConstructionError, LocalSet};
use crate::dft::indicator_dft;
use crate::factored::{alpha_beta, lcm_factored};
use crate::rational::dist_to_nearest_int;

#[derive(Debug, Error, PartialEq)]
pub enum FourierError {
    #[error("the zero frequency vector has no denominator")]
    ZeroVector,
    #[error("prime {p} exceeds K = {k}")]
    PrimeAboveK { p: u64, k: u64 },
    #[error("frequency {a} out of range for m_p = {m} at p = {p}")]
    FrequencyOutOfRange { p: u64, a: u64, m: u64 },
}

/// A sparse Fourier mode: a_p ∈ Z/m_p, nonzero on its support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreqVector {
    support: BTreeMap<u64, u64>,
}

impl FreqVector {
    /// Build from (p, a_p) pairs, validating p ≤ K and 0 < a_p < m_p.
    pub fn new(
        params: &ConstructionParams,
        entries: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self, FourierError> {
        let mut support = BTreeMap::new();
        for (p, a) in entries {
            let (_, _, _, m) = alpha_beta(p, params.m(), params.k_bound())
                .map_err(|_| FourierError::PrimeAboveK { p, k: params.k_bound() })?;
            if a == 0 || a >= m {
                return Err(FourierError::FrequencyOutOfRange { p, a, m });
            }
            support.insert(p, a);
        }
        if support.is_empty() {
            return Err(FourierError::ZeroVector);
        }
        Ok(FreqVector { support })
    }

    /// Top-band prefix mode a_p = h_p·p from signed heights (h ≠ 0).
    pub fn from_heights(
        params: &ConstructionParams,
        heights: impl IntoIterator<Item = (u64, i64)>,
    ) -> Result<Self, FourierError> {
        let entries: Vec<(u64, u64)> = heights
            .into_iter()
            .map(|(p, h)| {
                assert!(h != 0 && h.unsigned_abs() < p, "height must be 0 < |h| < p");
                let m = p * p;
                let a = (h.rem_euclid(p as i64) as u64) * p % m;
                (p, a)
            })
            .collect();
        FreqVector::new(params, entries)
    }

    pub fn support(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.support.iter().map(|(&p, &a)| (p, a))
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }
}

/// Φ(a) = Σ_p a_p·L_M/p^{β_p}, exact.
pub fn phi(params: &ConstructionParams, freq: &FreqVector) -> BigRational {
    let lm = BigInt::from(lcm_factored(params.m()).to_integer());
    let mut total = BigRational::zero();
    for (p, a) in freq.support() {
        let (_, beta, _, _) = alpha_beta(p, params.m(), params.k_bound()).unwrap();
        let denom = BigInt::from(p).pow(beta);
        total += BigRational::new(BigInt::from(a) * &lm, denom);
    }
    total
}

/// Exact distance ‖Φ(a)‖ to the nearest integer.
pub fn phi_distance(params: &ConstructionParams, freq: &FreqVector) -> BigRational {
    dist_to_nearest_int(&phi(params, freq))
}

/// The exact reduced denominator of Φ(a), asserted against the formula
/// q(a) = ∏_{p: a_p≠0} p^{B_p − v_p(a_p)}.
pub fn exact_denominator(
    params: &ConstructionParams,
    freq: &FreqVector,
) -> Result<BigUint, FourierError> {
    if freq.support_size() == 0 {
        return Err(FourierError::ZeroVector);
    }
    let mut formula = BigUint::one();
    for (p, a) in freq.support() {
        let (_, _, b, _) = alpha_beta(p, params.m(), params.k_bound()).unwrap();
        let mut v = 0u32;
        let mut x = a;
        while x % p == 0 {
            v += 1;
            x /= p;
        }
        debug_assert!(v < b, "a_p nonzero in Z/m_p has v_p < B_p");
        formula *= BigUint::from(p).pow(b - v);
    }
    let reduced = phi(params, freq).denom().to_biguint().unwrap();
    assert_eq!(
        formula, reduced,
        "exact-denominator law failed for {freq:?}"
    );
    Ok(formula)
}

/// Normalized Fourier table of one local set A_p over Z/m.
#[derive(Debug, Clone)]
pub struct LocalFourier {
    pub p: u64,
    pub m: u64,
    pub size: u64,
    /// |hat 1_A(a)| / (|A|/m) for every a ∈ Z/m.
    pub normalized: Vec<f64>,
    /// Σ_a |hat 1_A(a)| / (|A|/m).
    pub l1_mass: f64,
    /// Top-band prefix weights w_p(h) for h = 1..=H_p (empty unless the
    /// set is a top-band one: α_p = 0, B_p = 2).
    pub prefix_weights: Vec<f64>,
    /// L_p* = Σ_{0<|h|≤H_p} w_p(h).
    pub l_star: f64,
}

impl LocalFourier {
    /// w_p(h) for signed h, using w(−h) = w(h).
    pub fn weight(&self, h: i64) -> f64 {
        let idx = h.unsigned_abs() as usize;
        assert!(idx >= 1 && idx <= self.prefix_weights.len(), "h out of range");
        self.prefix_weights[idx - 1]
    }

    pub fn h_bound(&self) -> u64 {
        self.prefix_weights.len() as u64
    }
}

/// Full normalized DFT of the indicator of A_p.
pub fn local_fourier(set: &LocalSet, budget: u64) -> Result<LocalFourier, ConstructionError> {
    if set.m > budget {
        return Err(ConstructionError::BudgetExceeded {
            p: set.p,
            m: set.m,
            budget,
        });
    }
    let members: Vec<u64> = (0..set.m).filter(|&y| set.contains(y)).collect();
    let size = members.len() as u64;
    let hat = indicator_dft(&members, set.m);
    let density = size as f64 / set.m as f64;
    let normalized: Vec<f64> = hat.iter().map(|z| z.norm() / density).collect();
    let l1_mass = normalized.iter().sum();
    let mut prefix_weights = Vec::new();
    if set.alpha == 0 && set.b_levels == 2 {
        let h_bound = (set.p - 1) / 2;
        for h in 1..=h_bound {
            prefix_weights.push(normalized[(h * set.p) as usize]);
        }
    }
    let l_star = 2.0 * prefix_weights.iter().sum::<f64>();
    Ok(LocalFourier {
        p: set.p,
        m: set.m,
        size,
        normalized,
        l1_mass,
        prefix_weights,
        l_star,
    })
}

/// One enumerated mode of the criterion sum.
#[derive(Debug, Clone, Serialize)]
pub struct ModeRow {
    pub primes: Vec<u64>,
    pub heights: Vec<i64>,
    pub weight: f64,
    pub denominator: String,
    pub distance: f64,
    pub term: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionSum {
    pub shell: usize,
    pub h_cap: u64,
    pub n_scale: String,
    pub sum: f64,
    pub modes: u64,
    pub truncated: bool,
}

/// Partial sum of Σ 𝒲(a)·min(1, 1/(N‖Φ(a)‖)) over top-band prefix modes
/// with |supp a| = shell and heights |h_p| ≤ h_cap, in deterministic
/// lexicographic order (supports ascending, then height tuples).
/// Truncation by `count_cap` is flagged, not fatal.
pub fn criterion_partial_sum(
    params: &ConstructionParams,
    n_scale: &BigUint,
    shell: usize,
    h_cap: u64,
    count_cap: u64,
    budget: u64,
    mut row_sink: Option<&mut Vec<ModeRow>>,
) -> Result<CriterionSum, ConstructionError> {
    let band = params.top_band();
    let mut sum = 0.0f64;
    let mut compensation = 0.0f64;
    let mut modes = 0u64;
    let mut truncated = false;
    if shell == 0 || shell > band.len() {
        return Ok(CriterionSum {
            shell,
            h_cap,
            n_scale: n_scale.to_string(),
            sum: 0.0,
            modes: 0,
            truncated: false,
        });
    }
    // local Fourier tables once per band prime
    let mut tables = BTreeMap::new();
    for &p in &band {
        let set = params.local_set(p)?;
        tables.insert(p, local_fourier(&set, budget)?);
    }
    let n_rat = BigRational::from_integer(BigInt::from(n_scale.clone()));

    let mut support_idx: Vec<usize> = (0..shell).collect();
    'outer: loop {
        let primes: Vec<u64> = support_idx.iter().map(|&i| band[i]).collect();
        // signed heights per support prime, each in
        // [-cap..-1] ∪ [1..cap] with cap = min(h_cap, (p-1)/2)
        let caps: Vec<i64> = primes
            .iter()
            .map(|&p| h_cap.min((p - 1) / 2) as i64)
            .collect();
        let mut heights: Vec<i64> = caps.iter().map(|&c| -c).collect();
        loop {
            if modes >= count_cap {
                truncated = true;
                break 'outer;
            }
            modes += 1;
            let weight: f64 = primes
                .iter()
                .zip(&heights)
                .map(|(&p, &h)| tables[&p].weight(h))
                .product();
            let freq = FreqVector::from_heights(
                params,
                primes.iter().copied().zip(heights.iter().copied()),
            )
            .expect("heights are nonzero and in range");
            let dist = phi_distance(params, &freq);
            let n_dist = &n_rat * &dist;
            let term = if n_dist.is_zero() {
                weight
            } else if n_dist >= BigRational::one() {
                weight / n_dist.to_f64().unwrap()
            } else {
                weight
            };
            // Neumaier-compensated accumulation in enumeration order
            let t = sum + term;
            compensation += if sum.abs() >= term.abs() {
                (sum - t) + term
            } else {
                (term - t) + sum
            };
            sum = t;
            if let Some(rows) = row_sink.as_deref_mut() {
                rows.push(ModeRow {
                    primes: primes.clone(),
                    heights: heights.clone(),
                    weight,
                    denominator: exact_denominator(params, &freq).unwrap().to_string(),
                    distance: dist.to_f64().unwrap(),
                    term,
                });
            }
            if !next_height_tuple(&mut heights, &caps) {
                break;
            }
        }
        if !next_combination(&mut support_idx, band.len()) {
            break;
        }
    }
    Ok(CriterionSum {
        shell,
        h_cap,
        n_scale: n_scale.to_string(),
        sum: sum + compensation,
        modes,
        truncated,
    })
}

/// Advance a signed height odometer over [-cap..-1] ∪ [1..cap] per slot,
/// rightmost fastest. False when exhausted.
fn next_height_tuple(heights: &mut [i64], caps: &[i64]) -> bool {
    for i in (0..heights.len()).rev() {
        heights[i] += 1;
        if heights[i] == 0 {
            heights[i] = 1;
        }
        if heights[i] <= caps[i] {
            return true;
        }
        heights[i] = -caps[i];
    }
    false
}

/// Advance a k-combination of 0..n in lexicographic order. False when done.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for j in (0..k).rev() {
        if idx[j] < n - (k - j) {
            idx[j] += 1;
            for l in j + 1..k {
                idx[l] = idx[l - 1] + 1;
            }
            return true;
        }
    }
    false
}
