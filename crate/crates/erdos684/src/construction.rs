//! The two lower constructions and their end-to-end verifier.
//!
//! The packed seed M_K = ∏_{p≤K} p^{⌊log_p K⌋+1} satisfies f(M_K−1) > K
//! because M_K − 1 is ≡ −1 at every prime power up to K. The multiplier
//! seed n = t·L_M − 1 reaches the same carry-freeness up to K = ⌊CM⌋ with
//! a far smaller modulus: t is chosen so that, for every prime p ≤ K, the
//! residue y_p = t·u_p mod m_p lands in a local admissible set A_p
//! (u_p = L_M/p^{α_p}, m_p = p^{β_p−α_p}).
//!
//! A residue class y ∈ Z/m_p is in A_p iff y = 0, or y ≥ ⌈(K+1)/p^{α_p}⌉
//! and for every 1 ≤ b < B_p the prefix y mod p^b is 0 or lies in the
//! upper strip [θp^b, p^b). θ ∈ (0,1) is an exact rational chosen so that
//! C·Σ_{j=0}^{⌊C⌋} (1/(j+θ) − 1/(j+1)) < 2, which caps log u_k(n) below
//! 2·log n for every k ≤ K. All strip boundaries are compared in exact
//! rational arithmetic.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factored::{
    alpha_beta, chebyshev_psi, floor_log, lcm_factored, ArithError, FactoredNat, PrimePower,
};
use crate::kummer::{carry_count_residues, verify_f_lower_residues, KummerError, ResidueSystem};
use crate::primes::sieve_primes;
use crate::rational::{ceil_div, format_rational, log_biguint};

pub const DEFAULT_ENUM_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("enumeration budget exceeded at p = {p}: m_p = {m} > budget {budget}")]
    BudgetExceeded { p: u64, m: u64, budget: u64 },
    #[error("census budget exceeded: {pairs} (A, r) pairs > {budget}")]
    CensusBudget { pairs: u128, budget: u128 },
    #[error("invalid parameters: {0}")]
    Invalid(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// The value C·Σ_{j=0}^{⌊C⌋}(1/(j+θ) − 1/(j+1)) and whether it is < 2,
/// evaluated in exact rational arithmetic.
pub fn theta_condition(c: &BigRational, theta: &BigRational) -> (BigRational, bool) {
    assert!(c > &BigRational::one(), "need C > 1");
    assert!(
        theta > &BigRational::zero() && theta < &BigRational::one(),
        "need 0 < theta < 1"
    );
    let floor_c = c.floor().to_integer().to_u64().unwrap();
    let mut sum = BigRational::zero();
    for j in 0..=floor_c {
        let j_rat = BigRational::from_integer(j.into());
        let lhs = (&j_rat + theta).recip();
        let rhs = (&j_rat + BigRational::one()).recip();
        sum += lhs - rhs;
    }
    let value = c * sum;
    let ok = value < BigRational::from_integer(2.into());
    (value, ok)
}

/// The packed seed M_K = ∏_{p≤K} p^{⌊log_p K⌋+1}: every prime p ≤ K
/// appears with its first power exceeding K.
pub fn apssv_seed(k: u64) -> FactoredNat {
    assert!(k >= 2, "need K >= 2");
    let mut out = FactoredNat::one();
    for p in sieve_primes(k) {
        out.push(p, floor_log(p, k) + 1);
    }
    out
}

/// Parameters of one multiplier construction: M, C > 1, θ ∈ (0,1) with
/// the theta condition satisfied, K = ⌊CM⌋, and the search bound t_max.
#[derive(Debug, Clone)]
pub struct ConstructionParams {
    m: u64,
    c: BigRational,
    theta: BigRational,
    k: u64,
    t_max: u64,
}

impl ConstructionParams {
    pub fn new(
        m: u64,
        c: BigRational,
        theta: BigRational,
        t_max: u64,
    ) -> Result<Self, ConstructionError> {
        if m < 2 {
            return Err(ConstructionError::Invalid("need M >= 2".into()));
        }
        if c <= BigRational::one() {
            return Err(ConstructionError::Invalid("need C > 1".into()));
        }
        if theta <= BigRational::zero() || theta >= BigRational::one() {
            return Err(ConstructionError::Invalid("need 0 < theta < 1".into()));
        }
        if t_max < 1 {
            return Err(ConstructionError::Invalid("need t_max >= 1".into()));
        }
        let (value, ok) = theta_condition(&c, &theta);
        if !ok {
            return Err(ConstructionError::Invalid(format!(
                "theta condition fails: value {} >= 2",
                format_rational(&value)
            )));
        }
        let k = (&c * BigRational::from_integer(m.into()))
            .floor()
            .to_integer()
            .to_u64()
            .ok_or_else(|| ConstructionError::Invalid("K overflows u64".into()))?;
        debug_assert!(k >= m);
        Ok(ConstructionParams { m, c, theta, k, t_max })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    pub fn theta(&self) -> &BigRational {
        &self.theta
    }

    /// K = ⌊CM⌋.
    pub fn k_bound(&self) -> u64 {
        self.k
    }

    pub fn t_max(&self) -> u64 {
        self.t_max
    }

    /// Primes in the top band (M, K].
    pub fn top_band(&self) -> Vec<u64> {
        crate::primes::primes_in_band(self.m, self.k)
    }

    /// The local sets A_p for every prime p ≤ K, ascending in p.
    pub fn local_sets(&self) -> Vec<LocalSet> {
        let lm = lcm_factored(self.m);
        sieve_primes(self.k)
            .into_iter()
            .map(|p| LocalSet::build(p, self, &lm).expect("p <= K by construction"))
            .collect()
    }

    pub fn local_set(&self, p: u64) -> Result<LocalSet, ConstructionError> {
        let lm = lcm_factored(self.m);
        LocalSet::build(p, self, &lm)
    }
}

/// The admissible residue set A_p ⊂ Z/m_p for one prime, with its
/// membership thresholds precomputed as exact integers.
#[derive(Debug, Clone)]
pub struct LocalSet {
    pub p: u64,
    pub alpha: u32,
    pub beta: u32,
    pub b_levels: u32,
    pub m: u64,
    pub k_bound: u64,
    /// u_p = L_M / p^{α_p} reduced mod m_p; coprime to p.
    pub u_p_residue: u64,
    /// ⌈(K+1)/p^{α_p}⌉, the final-level floor.
    lower_cut: u64,
    /// ⌈θ·p^b⌉ for b = 1..B_p−1 (empty when B_p = 1).
    prefix_cuts: Vec<u64>,
    /// p^b for b = 1..B_p−1.
    prefix_moduli: Vec<u64>,
}

impl LocalSet {
    pub fn build(
        p: u64,
        params: &ConstructionParams,
        lm: &FactoredNat,
    ) -> Result<Self, ConstructionError> {
        let (alpha, beta, b_levels, m) = alpha_beta(p, params.m, params.k)?;
        let mut u_p = FactoredNat::one();
        for (q, e) in lm.iter() {
            if q != p {
                u_p.push(q, e);
            }
        }
        let u_p_residue = u_p.mod_u64(m);
        debug_assert!(!u_p_residue.is_multiple_of(p));
        let p_alpha = p.checked_pow(alpha).expect("p^alpha fits");
        let lower_cut = ceil_div(params.k + 1, p_alpha);
        let theta_num = params.theta.numer().to_u64().ok_or_else(|| {
            ConstructionError::Invalid("theta numerator too large".into())
        })?;
        let theta_den = params.theta.denom().to_u64().ok_or_else(|| {
            ConstructionError::Invalid("theta denominator too large".into())
        })?;
        let mut prefix_cuts = Vec::new();
        let mut prefix_moduli = Vec::new();
        for b in 1..b_levels {
            let pb = p.pow(b);
            // ⌈θ·p^b⌉ exactly; s ≥ θp^b for integral s is s ≥ this cut
            let cut = ceil_div(
                (theta_num as u128 * pb as u128)
                    .try_into()
                    .expect("theta * p^b fits u64"),
                theta_den,
            );
            prefix_cuts.push(cut);
            prefix_moduli.push(pb);
        }
        Ok(LocalSet {
            p,
            alpha,
            beta,
            b_levels,
            m,
            k_bound: params.k,
            u_p_residue,
            lower_cut,
            prefix_cuts,
            prefix_moduli,
        })
    }

    /// Membership of a residue 0 ≤ y < m in A_p.
    pub fn contains(&self, y: u64) -> bool {
        assert!(y < self.m, "residue {y} out of range for m = {}", self.m);
        if y == 0 {
            return true;
        }
        if y < self.lower_cut {
            return false;
        }
        for (i, &pb) in self.prefix_moduli.iter().enumerate() {
            let s = y % pb;
            if s != 0 && s < self.prefix_cuts[i] {
                return false;
            }
        }
        true
    }

    /// |A_p| by full enumeration, guarded by the budget.
    pub fn size(&self, budget: u64) -> Result<u64, ConstructionError> {
        if self.m > budget {
            return Err(ConstructionError::BudgetExceeded {
                p: self.p,
                m: self.m,
                budget,
            });
        }
        Ok((0..self.m).filter(|&y| self.contains(y)).count() as u64)
    }

    /// Membership bitset over 0..m, for the sieve inner loop.
    fn bitset(&self, budget: u64) -> Result<Vec<u64>, ConstructionError> {
        if self.m > budget {
            return Err(ConstructionError::BudgetExceeded {
                p: self.p,
                m: self.m,
                budget,
            });
        }
        let mut words = vec![0u64; (self.m as usize).div_ceil(64)];
        for y in 0..self.m {
            if self.contains(y) {
                words[(y / 64) as usize] |= 1 << (y % 64);
            }
        }
        Ok(words)
    }
}

/// One row of the density table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LocalDensity {
    pub p: u64,
    pub m: u64,
    pub size: u64,
    pub accept_ratio: f64,
    pub log_inv_contrib: f64,
}

/// log δ⁻¹ = Σ_p log(m_p/|A_p|) with its per-prime breakdown, plus the
/// leading-order prediction (C−1)·log(1/(1−θ))·M/log M for comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityReport {
    pub m: u64,
    pub k_bound: u64,
    pub log_delta_inv: f64,
    pub leading_order_prediction: f64,
    pub per_prime: Vec<LocalDensity>,
}

pub fn density(
    params: &ConstructionParams,
    budget: u64,
) -> Result<DensityReport, ConstructionError> {
    let mut per_prime = Vec::new();
    let mut log_delta_inv = 0.0;
    for set in params.local_sets() {
        let size = set.size(budget)?;
        let contrib = (set.m as f64 / size as f64).ln();
        log_delta_inv += contrib;
        per_prime.push(LocalDensity {
            p: set.p,
            m: set.m,
            size,
            accept_ratio: size as f64 / set.m as f64,
            log_inv_contrib: contrib,
        });
    }
    let c = params.c.to_f64().unwrap();
    let theta = params.theta.to_f64().unwrap();
    let m = params.m as f64;
    let prediction = (c - 1.0) * (1.0 / (1.0 - theta)).ln() * m / m.ln();
    Ok(DensityReport {
        m: params.m,
        k_bound: params.k,
        log_delta_inv,
        leading_order_prediction: prediction,
        per_prime,
    })
}

/// Acceptance statistics of one local condition, reported by the sieve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PrimeAcceptance {
    pub p: u64,
    pub m: u64,
    pub size: u64,
    pub ratio: f64,
}

/// Outcome of the multiplier sieve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchReport {
    /// Least t ≤ t_max with t·u_p mod m_p ∈ A_p for every p ≤ K.
    pub found: Option<u64>,
    pub scanned: u64,
    pub t_max: u64,
    /// Sorted by ascending acceptance ratio: the scan order.
    pub per_prime: Vec<PrimeAcceptance>,
}

/// Exhaustive scan for the least admissible multiplier t ∈ [1, t_max].
/// The scan tests primes in ascending order of |A_p|/m_p so the most
/// restrictive congruence rejects first; blocks of t are scanned by
/// independent workers and the least passing t wins regardless of the
/// worker count.
pub fn multiplier_search(params: &ConstructionParams) -> Result<SearchReport, ConstructionError> {
    multiplier_search_with_budget(params, DEFAULT_ENUM_BUDGET)
}

pub fn multiplier_search_with_budget(
    params: &ConstructionParams,
    budget: u64,
) -> Result<SearchReport, ConstructionError> {
    struct Sieve {
        m: u64,
        u_res: u64,
        bits: Vec<u64>,
        p: u64,
        size: u64,
    }
    let mut sieves = Vec::new();
    for set in params.local_sets() {
        let bits = set.bitset(budget)?;
        let size = bits.iter().map(|w| w.count_ones() as u64).sum();
        sieves.push(Sieve {
            m: set.m,
            u_res: set.u_p_residue % set.m,
            bits,
            p: set.p,
            size,
        });
    }
    sieves.sort_by(|a, b| {
        (a.size as u128 * b.m as u128)
            .cmp(&(b.size as u128 * a.m as u128))
            .then(a.p.cmp(&b.p))
    });
    let per_prime: Vec<PrimeAcceptance> = sieves
        .iter()
        .map(|s| PrimeAcceptance {
            p: s.p,
            m: s.m,
            size: s.size,
            ratio: s.size as f64 / s.m as f64,
        })
        .collect();

    let admits = |s: &Sieve, r: u64| s.bits[(r / 64) as usize] >> (r % 64) & 1 == 1;
    let t_max = params.t_max;
    const BLOCK: u64 = 1 << 16;
    let n_blocks = t_max.div_ceil(BLOCK);
    let found = (0..n_blocks)
        .into_par_iter()
        .find_map_first(|blk| {
            let lo = blk * BLOCK + 1;
            let hi = ((blk + 1) * BLOCK).min(t_max);
            let first = &sieves[0];
            // residue of t*u for the most selective prime, stepped additively
            let mut r0 = (lo as u128 * first.u_res as u128 % first.m as u128) as u64;
            for t in lo..=hi {
                if admits(first, r0)
                    && sieves[1..].iter().all(|s| {
                        admits(s, (t as u128 * s.u_res as u128 % s.m as u128) as u64)
                    })
                {
                    return Some(t);
                }
                r0 += first.u_res;
                if r0 >= first.m {
                    r0 -= first.m;
                }
            }
            None
        });
    let scanned = found.unwrap_or(t_max);
    Ok(SearchReport {
        found,
        scanned,
        t_max,
        per_prime,
    })
}

/// Residues of t·L_M − 1 at every p^a with p ≤ K, a ≤ β_p + extra_levels,
/// with log value log t + ψ(M) + log(1 − 1/(tL_M)).
pub fn assemble_n(t: u64, params: &ConstructionParams, extra_levels: u32) -> ResidueSystem {
    assert!(t >= 1);
    let lm = lcm_factored(params.m);
    let mut rs = ResidueSystem::new(format!("{}*L_{}-1", t, params.m));
    for p in sieve_primes(params.k) {
        let beta = floor_log(p, params.k) + 1;
        for a in 1..=beta + extra_levels {
            let level = PrimePower::new(p, a).expect("p prime");
            let modulus = level.value();
            let lm_mod = lm_mod_level(&lm, p, a, &modulus);
            let t_lm = (BigUint::from(t) * lm_mod) % &modulus;
            let residue = (t_lm + &modulus - BigUint::one()) % &modulus;
            rs.insert(level, residue).expect("reductions of one integer cohere");
        }
    }
    let log_t_lm = (t as f64).ln() + chebyshev_psi(params.m);
    let correction = (-(-log_t_lm).exp()).ln_1p();
    rs.set_log_value(log_t_lm + correction);
    rs
}

fn lm_mod_level(lm: &FactoredNat, p: u64, a: u32, modulus: &BigUint) -> BigUint {
    let mut acc = BigUint::one();
    for (q, e) in lm.iter() {
        if q == p {
            // p^e mod p^a is zero once e >= a
            if e >= a {
                return BigUint::zero();
            }
            acc = acc * BigUint::from(q).pow(e) % modulus;
        } else {
            acc = acc * BigUint::from(q).modpow(&BigUint::from(e), modulus) % modulus;
        }
    }
    acc
}

/// One verified condition at one level.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CheckRecord {
    pub check: String,
    pub p: u64,
    pub level: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    pub pass: bool,
    pub witness: String,
}

/// End-to-end certificate that a residue system built as t·L_M − 1
/// realizes carry-freeness up to K: congruences at low levels, the
/// final-level floor, the middle-level strips, carry-interval
/// localization for every k ≤ K, and the smooth-part bound u_k ≤ n².
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Certificate {
    pub label: String,
    pub m: u64,
    pub k_bound: u64,
    pub c: String,
    pub theta: String,
    pub pass: bool,
    pub worst_k: u64,
    pub worst_margin: f64,
    pub records: Vec<CheckRecord>,
}

impl Certificate {
    /// The verdict must equal the conjunction of all records.
    pub fn verdict_consistent(&self) -> bool {
        self.pass == self.records.iter().all(|r| r.pass)
    }
}

pub fn verify_construction(
    rs: &ResidueSystem,
    params: &ConstructionParams,
) -> Result<Certificate, KummerError> {
    let mut records = Vec::new();
    let k_bound = params.k_bound();
    let m_bound = params.m();
    let theta_num = params.theta().numer().to_u64().expect("small theta");
    let theta_den = params.theta().denom().to_u64().expect("small theta");
    let floor_c = params
        .c()
        .floor()
        .to_integer()
        .to_u64()
        .expect("small C");

    for p in sieve_primes(k_bound) {
        let alpha = floor_log(p, m_bound);
        let beta = floor_log(p, k_bound) + 1;

        // (i) n ≡ −1 (mod p^a) for a ≤ α_p
        for a in 1..=alpha {
            let pa = BigUint::from(p).pow(a);
            let want = &pa - BigUint::one();
            let got = rs.residue(p, a);
            let pass = got.as_ref() == Some(&want);
            records.push(CheckRecord {
                check: "congruent-minus-one".into(),
                p,
                level: a,
                k: None,
                pass,
                witness: format!(
                    "n mod {p}^{a} = {}",
                    got.map_or("missing".into(), |g| g.to_string())
                ),
            });
        }

        // (ii) n mod p^{β_p} ≥ K
        let got = rs.residue(p, beta);
        let pass = got.as_ref().is_some_and(|g| *g >= BigUint::from(k_bound));
        records.push(CheckRecord {
            check: "final-level-floor".into(),
            p,
            level: beta,
            k: None,
            pass,
            witness: format!(
                "n mod {p}^{beta} = {} vs K = {k_bound}",
                got.map_or("missing".into(), |g| g.to_string())
            ),
        });

        // (iii) middle levels M < p^a ≤ K: residue ≡ −1 or ≥ θ·p^a − 1
        for a in alpha + 1..beta {
            let q = p.pow(a);
            let Some(r) = rs.residue(p, a).and_then(|r| r.to_u64()) else {
                records.push(CheckRecord {
                    check: "middle-strip".into(),
                    p,
                    level: a,
                    k: None,
                    pass: false,
                    witness: format!("missing residue at {p}^{a}"),
                });
                continue;
            };
            let minus_one = r == q - 1;
            // r ≥ θq − 1 ⟺ (r+1)·den ≥ num·q, exactly
            let in_strip = (r + 1) as u128 * theta_den as u128 >= theta_num as u128 * q as u128;
            records.push(CheckRecord {
                check: "middle-strip".into(),
                p,
                level: a,
                k: None,
                pass: minus_one || in_strip,
                witness: format!("n mod {q} = {r}, theta*q-1 = {theta_num}*{q}/{theta_den}-1"),
            });
        }
    }

    // (iv) carry-interval localization: every realized middle-level carry
    // at q = p^a sits in k/(j+1) < q < k/(j+theta) + 1 for j = ⌊k/q⌋
    for k in 0..=k_bound {
        for p in sieve_primes(k.min(k_bound)) {
            let alpha = floor_log(p, m_bound);
            let beta = floor_log(p, k_bound) + 1;
            let profile = carry_count_residues(rs, k, p, None)?;
            for &a in &profile.carry_levels {
                if a <= alpha || a >= beta {
                    continue; // only middle levels are localized
                }
                let q = p.pow(a);
                let j = k / q;
                let left_ok = (q as u128) * (j as u128 + 1) > k as u128;
                // q < k/(j+θ) + 1 ⟺ (q−1)(j·den + num) < k·den
                let right_ok = (q as u128 - 1) * (j as u128 * theta_den as u128 + theta_num as u128)
                    < k as u128 * theta_den as u128;
                let j_ok = j <= floor_c;
                records.push(CheckRecord {
                    check: "carry-interval".into(),
                    p,
                    level: a,
                    k: Some(k),
                    pass: left_ok && right_ok && j_ok,
                    witness: format!(
                        "carry at q = {q}, j = {j}, interval ({}/{}, {}/{}+1)",
                        k,
                        j + 1,
                        k,
                        format_rational(&(BigRational::from_integer(j.into()) + params.theta()))
                    ),
                });
            }
        }
    }

    // (v) u_k(n) ≤ n² for every k ≤ K
    let lower = verify_f_lower_residues(rs, k_bound)?;
    records.push(CheckRecord {
        check: "smooth-bound".into(),
        p: 0,
        level: 0,
        k: lower.first_violation,
        pass: lower.pass,
        witness: format!(
            "worst k = {}, margin log(n^2/u_k) = {:.6}",
            lower.worst_k, lower.worst_margin
        ),
    });

    let pass = records.iter().all(|r| r.pass);
    Ok(Certificate {
        label: rs.label().to_string(),
        m: m_bound,
        k_bound,
        c: format_rational(params.c()),
        theta: format_rational(params.theta()),
        pass,
        worst_k: lower.worst_k,
        worst_margin: lower.worst_margin,
        records,
    })
}

/// Materialize t·L_M − 1 exactly (for cross-checks on desk-scale t, M).
pub fn materialize_n(t: u64, m: u64) -> BigUint {
    BigUint::from(t) * lcm_factored(m).to_integer() - BigUint::one()
}

/// log(t·L_M − 1) straight from the materialized integer.
pub fn materialized_log(t: u64, m: u64) -> f64 {
    log_biguint(&materialize_n(t, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn params(m: u64, c: (i64, i64), theta: (i64, i64), t_max: u64) -> ConstructionParams {
        ConstructionParams::new(m, rat(c.0, c.1), rat(theta.0, theta.1), t_max).unwrap()
    }

    #[test]
    fn theta_condition_examples() {
        let (v, ok) = theta_condition(&rat(2, 1), &rat(9, 10));
        assert!(ok);
        assert!((v.to_f64().unwrap() - 0.2979).abs() < 1e-4);

        let (v, ok) = theta_condition(&rat(2, 1), &rat(1, 2));
        assert!(!ok);
        assert!((v.to_f64().unwrap() - 2.4667).abs() < 1e-4);

        // theta -> 1^-: every summand vanishes
        let (v, ok) = theta_condition(&rat(3, 1), &rat(999_999, 1_000_000));
        assert!(ok);
        assert!(v.to_f64().unwrap() < 1e-4);
    }

    #[test]
    fn apssv_seed_values() {
        assert_eq!(
            apssv_seed(2),
            FactoredNat::from_factors([(2, 2)]).unwrap()
        );
        let m3 = apssv_seed(3);
        assert_eq!(m3, FactoredNat::from_factors([(2, 2), (3, 2)]).unwrap());
        assert_eq!(m3.to_integer(), BigUint::from(36u32));
        // every prime power in the seed exceeds K
        for k in 2..=40u64 {
            for (p, e) in apssv_seed(k).iter() {
                assert!(BigUint::from(p).pow(e) > BigUint::from(k));
                assert!(BigUint::from(p).pow(e - 1) <= BigUint::from(k));
            }
        }
    }

    #[test]
    fn local_set_worked_example() {
        // p = 11, M = 10, K = 20, theta = 9/10
        let pr = params(10, (2, 1), (9, 10), 100);
        let set = pr.local_set(11).unwrap();
        assert_eq!((set.alpha, set.beta, set.b_levels, set.m), (0, 2, 2, 121));
        assert!(set.contains(0));
        assert!(set.contains(21)); // 21 >= 21 and 21 mod 11 = 10 >= ceil(9.9)
        assert!(!set.contains(23)); // 23 mod 11 = 1
        assert!(set.contains(22)); // 22 mod 11 = 0
        assert_eq!(set.size(DEFAULT_ENUM_BUDGET).unwrap(), 20);
    }

    #[test]
    fn local_set_size_matches_filter_oracle() {
        // oracle: independent membership re-derivation by digit scan
        let pr = params(10, (2, 1), (9, 10), 100);
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19] {
            let set = pr.local_set(p).unwrap();
            let theta = 0.9f64;
            let oracle = (0..set.m)
                .filter(|&y| {
                    if y == 0 {
                        return true;
                    }
                    let p_alpha = p.pow(set.alpha);
                    if (y as f64) < ((set.k_bound + 1) as f64 / p_alpha as f64).ceil() {
                        return false;
                    }
                    (1..set.b_levels).all(|b| {
                        let s = y % p.pow(b);
                        s == 0 || s as f64 >= theta * p.pow(b) as f64
                    })
                })
                .count() as u64;
            assert_eq!(set.size(DEFAULT_ENUM_BUDGET).unwrap(), oracle, "p={p}");
        }
    }

    #[test]
    fn local_set_monotone_in_theta() {
        // raising theta never adds elements
        let lo = params(10, (2, 1), (7, 10), 100);
        let hi = params(10, (2, 1), (9, 10), 100);
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19] {
            let a_lo = lo.local_set(p).unwrap();
            let a_hi = hi.local_set(p).unwrap();
            for y in 0..a_lo.m {
                if a_hi.contains(y) {
                    assert!(a_lo.contains(y), "p={p} y={y}");
                }
            }
        }
    }

    #[test]
    fn density_contribution_example() {
        let pr = params(10, (2, 1), (9, 10), 100);
        let report = density(&pr, DEFAULT_ENUM_BUDGET).unwrap();
        let p11 = report.per_prime.iter().find(|r| r.p == 11).unwrap();
        assert_eq!(p11.size, 20);
        assert!((p11.log_inv_contrib - (121f64 / 20f64).ln()).abs() < 1e-12);
        assert!(report.log_delta_inv > 0.0);
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let pr = params(10, (2, 1), (9, 10), 100);
        let set = pr.local_set(11).unwrap();
        assert!(matches!(
            set.size(100),
            Err(ConstructionError::BudgetExceeded { p: 11, m: 121, .. })
        ));
    }

    #[test]
    fn search_finds_least_t_and_self_checks() {
        let pr = params(10, (3, 2), (7, 10), 10_000_000);
        let report = multiplier_search(&pr).unwrap();
        let t = report.found.expect("a multiplier exists at M=10");
        // oracle: single-threaded scan testing primes in ascending order
        let sets = pr.local_sets();
        let oracle = (1..=pr.t_max())
            .find(|&cand| {
                sets.iter()
                    .all(|s| s.contains(crate::modular::mul_mod(cand, s.u_p_residue, s.m)))
            })
            .unwrap();
        assert_eq!(t, oracle);
        assert_eq!(t, 20); // frozen from the oracle scan
        // postcondition restated: every local condition passes at t
        for s in &sets {
            assert!(s.contains(crate::modular::mul_mod(t, s.u_p_residue, s.m)));
        }
    }

    #[test]
    fn search_not_found_when_t_max_tiny() {
        let pr = params(10, (3, 2), (7, 10), 3);
        let report = multiplier_search(&pr).unwrap();
        if report.found.is_none() {
            assert_eq!(report.scanned, 3);
            assert!(!report.per_prime.is_empty());
        }
    }

    #[test]
    fn assemble_matches_direct_residues() {
        let pr = params(10, (2, 1), (9, 10), 100);
        let rs = assemble_n(1, &pr, 0);
        // 2520 - 1 = 2519 ≡ 7 (mod 8)
        assert_eq!(rs.residue(2, 3), Some(BigUint::from(7u32)));
        // n ≡ −1 (mod p^a) for a ≤ α_p
        for p in [2u64, 3, 5, 7] {
            let alpha = floor_log(p, 10);
            for a in 1..=alpha {
                let pa = BigUint::from(p).pow(a);
                assert_eq!(rs.residue(p, a), Some(&pa - BigUint::one()));
            }
        }
        // every stored level matches the materialized integer
        let n = materialize_n(1, 10);
        for (pp, r) in rs.iter() {
            assert_eq!(&n % pp.value(), *r, "level {pp}");
        }
        // log value matches the materialized log
        let direct = materialized_log(1, 10);
        assert!((rs.log_value().unwrap() - direct).abs() < 1e-9);
    }

    #[test]
    fn end_to_end_verify_at_m10() {
        let pr = params(10, (3, 2), (7, 10), 10_000_000);
        let t = multiplier_search(&pr).unwrap().found.unwrap();
        let rs = assemble_n(t, &pr, 0);
        let cert = verify_construction(&rs, &pr).unwrap();
        assert!(cert.pass, "failing records: {:?}", cert
            .records
            .iter()
            .filter(|r| !r.pass)
            .collect::<Vec<_>>());
        assert!(cert.verdict_consistent());
        // cross-check on the materialized integer
        let n = materialize_n(t, 10);
        let direct = crate::kummer::verify_f_lower(&n, pr.k_bound()).unwrap();
        assert!(direct.pass);
    }

    #[test]
    fn bad_multiplier_fails_at_its_prime() {
        let pr = params(10, (3, 2), (7, 10), 10_000_000);
        // t = 1 gives y_p = u_p mod m_p; find a prime where that is outside A_p
        let sets = pr.local_sets();
        let bad = sets
            .iter()
            .find(|s| !s.contains(crate::modular::mul_mod(1, s.u_p_residue, s.m)));
        let Some(bad) = bad else {
            return; // t = 1 happens to work; nothing to test
        };
        // extra levels so carry enumeration can certify despite the bad t
        let rs = assemble_n(1, &pr, 8);
        let cert = verify_construction(&rs, &pr).unwrap();
        assert!(!cert.pass);
        let failing: Vec<&CheckRecord> =
            cert.records.iter().filter(|r| !r.pass).collect();
        assert!(
            failing.iter().any(|r| r.p == bad.p),
            "expected a failure at p = {}",
            bad.p
        );
    }

    #[test]
    fn verify_with_k_equal_m_is_vacuous_in_the_middle() {
        // C barely above 1: K = M, no middle levels, so the strip and
        // carry-interval conditions are vacuous
        let pr = ConstructionParams::new(10, rat(101, 100), rat(9, 10), 100).unwrap();
        assert_eq!(pr.k_bound(), 10);
        let rs = assemble_n(1, &pr, 8);
        let cert = verify_construction(&rs, &pr).unwrap();
        assert!(cert.records.iter().all(|r| r.check != "middle-strip"));
        assert!(cert.records.iter().all(|r| r.check != "carry-interval"));
    }
}
