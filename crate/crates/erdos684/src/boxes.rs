//! Q_M-box congruences, signed heights, census bounds, height histograms,
//! elementary symmetric masses, and the finite Buchstab band inversion.
//!
//! A box is a disjoint pair of prime sets S = U ⊔ A in the top band with a
//! numerator r coprime to P_U·P_A. For a petal p ∈ A the signed height is
//! the unique |h_p| ≤ H_p = (p−1)/2 with
//!   h_p ≡ r·Q_M·(c_p·P_U·P_{A∖{p}})⁻¹ (mod p),
//! where Q_M = M!/L_M and c_p = (−1)^{p−M}·((p−M−1)!)⁻¹. This is the local
//! form of the near-zero condition for L_M·Σ h_p/p.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::construction::{ConstructionError, ConstructionParams};
use crate::factored::qm_factored;
use crate::fourier::{local_fourier, next_combination, LocalFourier};
use crate::modular::{factorial_mod, inv_mod, mul_mod, signed_rep};
use crate::primes::factorize;

#[derive(Debug, Error, PartialEq)]
pub enum BoxError {
    #[error("core and petal sets must be disjoint")]
    Overlap,
    #[error("numerator r must be nonzero")]
    ZeroNumerator,
    #[error("numerator {r} shares a factor with the support product")]
    NotCoprime { r: i64 },
    #[error("prime {p} is not a petal of this box")]
    NotAPetal { p: u64 },
    #[error("petal {p} must lie in the open band above M = {m}")]
    PetalNotAboveM { p: u64, m: u64 },
    #[error("n = {0} is not squarefree")]
    NotSquarefree(u64),
}

/// A Q_M-box: core primes U, petal primes A, numerator r with
/// gcd(r, P_U·P_A) = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxInstance {
    core: Vec<u64>,
    petals: Vec<u64>,
    r: i64,
}

impl BoxInstance {
    pub fn new(core: Vec<u64>, petals: Vec<u64>, r: i64) -> Result<Self, BoxError> {
        if r == 0 {
            return Err(BoxError::ZeroNumerator);
        }
        let mut core = core;
        let mut petals = petals;
        core.sort_unstable();
        petals.sort_unstable();
        let distinct = core.windows(2).all(|w| w[0] != w[1])
            && petals.windows(2).all(|w| w[0] != w[1]);
        if !distinct || core.iter().any(|p| petals.binary_search(p).is_ok()) {
            return Err(BoxError::Overlap);
        }
        for &p in core.iter().chain(&petals) {
            if r.unsigned_abs().is_multiple_of(p) {
                return Err(BoxError::NotCoprime { r });
            }
        }
        Ok(BoxInstance { core, petals, r })
    }

    pub fn core(&self) -> &[u64] {
        &self.core
    }

    pub fn petals(&self) -> &[u64] {
        &self.petals
    }

    pub fn numerator(&self) -> i64 {
        self.r
    }

    pub fn core_product(&self) -> BigUint {
        self.core.iter().map(|&p| BigUint::from(p)).product()
    }

    pub fn petal_product(&self) -> BigUint {
        self.petals.iter().map(|&p| BigUint::from(p)).product()
    }

    /// ρ_U(A, r) = r·P_A⁻¹ (mod P_U).
    pub fn rho(&self) -> BigUint {
        let pu = self.core_product();
        if pu.is_one() {
            return BigUint::zero();
        }
        let pa = self.petal_product() % &pu;
        let inv = crate::modular::big_inv_mod(&pa, &pu).expect("gcd(P_A, P_U) = 1");
        let r_mod = num_bigint::BigInt::from(self.r)
            .mod_floor(&num_bigint::BigInt::from(pu.clone()))
            .to_biguint()
            .unwrap();
        r_mod * inv % pu
    }
}

/// A signed Q_M-box height, or the degenerate zero class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Height {
    Zero,
    Signed(i64),
}

impl Height {
    pub fn magnitude(&self) -> Option<u64> {
        match self {
            Height::Zero => None,
            Height::Signed(h) => Some(h.unsigned_abs()),
        }
    }
}

/// The signed height of petal p in a box, with the unreduced congruence
/// r·Q_M ≡ h·c_p·(P_U·P_A/p) (mod p) re-checked on every call.
pub fn qm_box_height(p: u64, bx: &BoxInstance, m: u64) -> Result<Height, BoxError> {
    if bx.petals.binary_search(&p).is_err() {
        return Err(BoxError::NotAPetal { p });
    }
    if p <= m {
        return Err(BoxError::PetalNotAboveM { p, m });
    }
    let qm = qm_factored(m).mod_u64(p);
    let c = wilson_unit(p, m);
    let pu = product_mod(&bx.core, p);
    let pa_without = product_mod_excluding(&bx.petals, p, p);
    let r_mod = (bx.r.rem_euclid(p as i64)) as u64;
    let denom = mul_mod(c, mul_mod(pu, pa_without, p), p);
    let inv = inv_mod(denom, p).expect("box invariants make the denominator a unit");
    let h_raw = mul_mod(r_mod, mul_mod(qm, inv, p), p);
    if h_raw == 0 {
        return Ok(Height::Zero);
    }
    let h = signed_rep(h_raw, p);
    // unreduced form: r·Q_M ≡ h·c_p·(P_U·P_A/p) (mod p)
    let lhs = mul_mod(r_mod, qm, p);
    let h_mod = (h.rem_euclid(p as i64)) as u64;
    let rhs = mul_mod(h_mod, denom, p);
    assert_eq!(lhs, rhs, "reduced and unreduced height congruences disagree");
    Ok(Height::Signed(h))
}

/// c_p = (−1)^{p−M}·((p−M−1)!)⁻¹ mod p.
fn wilson_unit(p: u64, m: u64) -> u64 {
    let d = p - m;
    let inv = inv_mod(factorial_mod(d - 1, p), p).expect("(d-1)! is a unit for d-1 < p");
    if d.is_multiple_of(2) {
        inv
    } else {
        (p - inv) % p
    }
}

fn product_mod(set: &[u64], p: u64) -> u64 {
    set.iter().fold(1 % p, |acc, &q| mul_mod(acc, q % p, p))
}

fn product_mod_excluding(set: &[u64], skip: u64, p: u64) -> u64 {
    set.iter()
        .filter(|&&q| q != skip)
        .fold(1 % p, |acc, &q| mul_mod(acc, q % p, p))
}

/// Elementary symmetric polynomial e_a of the weights, by the ascending
/// one-dimensional recurrence. e_0 = 1; a must be ≤ the list length.
pub fn elem_sym(weights: &[f64], a: usize) -> f64 {
    assert!(a <= weights.len(), "degree {a} exceeds {} weights", weights.len());
    let mut e = vec![0.0f64; a + 1];
    e[0] = 1.0;
    for &w in weights {
        for j in (1..=a).rev() {
            e[j] += w * e[j - 1];
        }
    }
    e[a]
}

/// Census of one dyadic numerator shell R < |r| ≤ 2R over a fixed core
/// fiber ξ = ρ_U(A, r).
#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub a: usize,
    pub shell_r: u64,
    pub count: u64,
    pub weighted: f64,
    /// e_a({L_q*}) over the petal pool.
    pub bound_main: f64,
    /// (2R/P_U)·e_a({L_q*/q}).
    pub bound_reciprocal: f64,
    /// weighted / (bound_main + bound_reciprocal).
    pub observed_constant: f64,
}

/// Enumerate triples (A, r, h): A ⊆ pool with |A| = a, R < |r| ≤ 2R,
/// gcd(r, P_U·P_A) = 1, ρ_U(A, r) = ξ; h is the height vector the box
/// determines. Returns the count weighted by ∏ w_p(h_p) next to the two
/// CRT bound terms.
#[allow(clippy::too_many_arguments)]
pub fn t_r_census(
    params: &ConstructionParams,
    core: &[u64],
    pool: &[u64],
    a: usize,
    shell_r: u64,
    xi: &BigUint,
    pair_budget: u128,
    dft_budget: u64,
) -> Result<CensusReport, ConstructionError> {
    assert!(a <= pool.len());
    assert!(
        pool.iter().all(|p| !core.contains(p)),
        "petal pool must be disjoint from the core"
    );
    let m = params.m();
    let mut tables: Vec<LocalFourier> = Vec::new();
    for &p in pool {
        tables.push(local_fourier(&params.local_set(p)?, dft_budget)?);
    }
    let lam: Vec<f64> = tables.iter().map(|t| t.l_star).collect();
    let lam_over_q: Vec<f64> = tables
        .iter()
        .zip(pool)
        .map(|(t, &q)| t.l_star / q as f64)
        .collect();
    let pu = core.iter().map(|&p| BigUint::from(p)).product::<BigUint>();

    let n_subsets = binomial_u128(pool.len() as u128, a as u128);
    let pairs = n_subsets * 2 * shell_r as u128;
    if pairs > pair_budget {
        return Err(ConstructionError::CensusBudget { pairs, budget: pair_budget });
    }

    let mut count = 0u64;
    let mut weighted = 0.0f64;
    if a > 0 {
        let mut idx: Vec<usize> = (0..a).collect();
        loop {
            let petals: Vec<u64> = idx.iter().map(|&i| pool[i]).collect();
            // magnitude ascending, positive sign first
            for mag in shell_r + 1..=2 * shell_r {
                for r in [mag as i64, -(mag as i64)] {
                    let Ok(bx) = BoxInstance::new(core.to_vec(), petals.clone(), r) else {
                        continue;
                    };
                    if bx.rho() != *xi {
                        continue;
                    }
                    let mut w = 1.0f64;
                    let mut ok = true;
                    for (&p, &i) in petals.iter().zip(idx.iter()) {
                        match qm_box_height(p, &bx, m).expect("petal of this box") {
                            Height::Zero => {
                                ok = false;
                                break;
                            }
                            Height::Signed(h) => w *= tables[i].weight(h),
                        }
                    }
                    if ok {
                        count += 1;
                        weighted += w;
                    }
                }
            }
            if !next_combination(&mut idx, pool.len()) {
                break;
            }
        }
    }

    let bound_main = elem_sym(&lam, a);
    let pu_f = pu.to_f64().unwrap_or(f64::MAX);
    let bound_reciprocal = 2.0 * shell_r as f64 / pu_f * elem_sym(&lam_over_q, a);
    let denom = bound_main + bound_reciprocal;
    Ok(CensusReport {
        a,
        shell_r,
        count,
        weighted,
        bound_main,
        bound_reciprocal,
        observed_constant: if denom > 0.0 { weighted / denom } else { 0.0 },
    })
}

fn binomial_u128(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All boxes with empty core, petals A ∋ p drawn from the top band of
/// `params`, and numerators 1 ≤ r ≤ r_max coprime to P_A.
pub fn enumerate_box_family(
    params: &ConstructionParams,
    p: u64,
    r_max: i64,
) -> Vec<BoxInstance> {
    let band = params.top_band();
    let others: Vec<u64> = band.iter().copied().filter(|&q| q != p).collect();
    let mut family = Vec::new();
    for mask in 0..(1u32 << others.len()) {
        let mut petals = vec![p];
        for (i, &q) in others.iter().enumerate() {
            if mask >> i & 1 == 1 {
                petals.push(q);
            }
        }
        for r in 1..=r_max {
            if let Ok(bx) = BoxInstance::new(Vec::new(), petals.clone(), r) {
                family.push(bx);
            }
        }
    }
    family
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramRow {
    pub t: u64,
    pub count: u64,
    /// count / ((t/H_p)·count_at_H_p); the averaged-cap diagnostic.
    pub cap_ratio: f64,
}

/// N_p(t) = #{(A, r) in the family : |h_p(A, r)| ≤ t} on a grid of t,
/// plus the ratio against the linear cap (t/H_p)·N_p(H_p).
pub fn height_histogram(
    p: u64,
    family: &[BoxInstance],
    m: u64,
    t_grid: &[u64],
) -> Result<Vec<HistogramRow>, BoxError> {
    let h_bound = (p - 1) / 2;
    let mut magnitudes = Vec::with_capacity(family.len());
    for bx in family {
        match qm_box_height(p, bx, m)? {
            Height::Zero => {}
            Height::Signed(h) => magnitudes.push(h.unsigned_abs()),
        }
    }
    let at_cap = magnitudes.iter().filter(|&&h| h <= h_bound).count() as u64;
    let mut rows = Vec::new();
    for &t in t_grid {
        let count = magnitudes.iter().filter(|&&h| h <= t).count() as u64;
        let expected = t as f64 / h_bound as f64 * at_cap as f64;
        rows.push(HistogramRow {
            t,
            count,
            cap_ratio: if expected > 0.0 {
                count as f64 / expected
            } else {
                0.0
            },
        });
    }
    Ok(rows)
}

/// The finite Buchstab inversion on a squarefree n: the indicator of
/// "every prime factor lies in (M, CM]" equals the indicator of "every
/// prime factor exceeds M" times Σ_{d|n, p|d ⇒ p > CM} μ(d). Both sides
/// are evaluated exactly and compared.
pub fn buchstab_check(n: u64, m: u64, c: &BigRational) -> Result<bool, BoxError> {
    assert!(n >= 1);
    let factors = factorize(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        return Err(BoxError::NotSquarefree(n));
    }
    let primes: Vec<u64> = factors.into_iter().map(|(p, _)| p).collect();
    let c_num = c.numer().to_u64().expect("small C");
    let c_den = c.denom().to_u64().expect("small C");
    // q ≤ CM ⟺ q·den ≤ num·M, exactly
    let in_band = |q: u64| q > m && (q as u128 * c_den as u128) <= (c_num as u128 * m as u128);
    let above_cm = |q: u64| (q as u128 * c_den as u128) > (c_num as u128 * m as u128);

    let lhs: i64 = i64::from(primes.iter().all(|&q| in_band(q)));

    let rough: Vec<u64> = primes.iter().copied().filter(|&q| above_cm(q)).collect();
    let mut moebius_sum = 0i64;
    for mask in 0..(1u32 << rough.len()) {
        moebius_sum += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
    }
    let rhs = i64::from(primes.iter().all(|&q| q > m)) * moebius_sum;

    Ok(lhs == rhs)
}
