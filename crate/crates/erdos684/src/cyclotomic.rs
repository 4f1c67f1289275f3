//! Exact integer arithmetic in `Z[ζ_d]`.
//!
//! Elements are carried as length-d integer vectors over the group ring
//! `Z[x]/(x^d − 1)`, where multiplication by a root of unity is a rotation.
//! Identities (is the element zero? what is |α|²?) are decided after
//! canonical reduction mod the d-th cyclotomic polynomial, so vanishing
//! statements are exact, not merely small.

/// Coefficients of the d-th cyclotomic polynomial, ascending degree.
pub fn cyclotomic_polynomial(d: u64) -> Vec<i128> {
    // x^d - 1 divided by the product of Φ_e over proper divisors e | d
    let mut num = vec![0i128; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in 1..d {
        if d.is_multiple_of(e) {
            let phi_e = cyclotomic_polynomial(e);
            num = poly_div_exact(&num, &phi_e);
        }
    }
    num
}

/// Exact division of integer polynomials (remainder must vanish).
fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let nd = rem.len() - 1;
    let mut quot = vec![0i128; nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division was not exact");
    quot
}

/// An element of `Z[ζ_d]` in the redundant power basis ζ^0..ζ^{d−1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycInt {
    pub d: u64,
    coeffs: Vec<i128>,
}

impl CycInt {
    pub fn zero(d: u64) -> Self {
        CycInt { d, coeffs: vec![0; d as usize] }
    }

    pub fn one(d: u64) -> Self {
        let mut c = vec![0; d as usize];
        c[0] = 1;
        CycInt { d, coeffs: c }
    }

    /// ζ_d^r.
    pub fn root_power(d: u64, r: u64) -> Self {
        let mut c = vec![0; d as usize];
        c[(r % d) as usize] = 1;
        CycInt { d, coeffs: c }
    }

    pub fn add_assign(&mut self, other: &CycInt) {
        debug_assert_eq!(self.d, other.d);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = a.checked_add(*b).expect("cyclotomic coefficient overflow");
        }
    }

    /// Multiply by ζ_d^r: a rotation of the coefficient vector.
    pub fn mul_root_power(&self, r: u64) -> CycInt {
        let d = self.d as usize;
        let r = (r % self.d) as usize;
        let mut c = vec![0; d];
        for (i, &x) in self.coeffs.iter().enumerate() {
            c[(i + r) % d] = x;
        }
        CycInt { d: self.d, coeffs: c }
    }

    /// Complex conjugate: ζ ↦ ζ^{−1}.
    pub fn conj(&self) -> CycInt {
        let d = self.d as usize;
        let mut c = vec![0; d];
        for (i, &x) in self.coeffs.iter().enumerate() {
            c[(d - i) % d] = x;
        }
        CycInt { d: self.d, coeffs: c }
    }

    /// Full product in the group ring (cyclic convolution).
    pub fn mul(&self, other: &CycInt) -> CycInt {
        debug_assert_eq!(self.d, other.d);
        let d = self.d as usize;
        let mut c = vec![0i128; d];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let slot = &mut c[(i + j) % d];
                *slot = slot
                    .checked_add(a.checked_mul(b).expect("overflow"))
                    .expect("overflow");
            }
        }
        CycInt { d: self.d, coeffs: c }
    }

    /// Canonical coordinates mod Φ_d: degree < φ(d), exact.
    pub fn canonical(&self) -> Vec<i128> {
        let phi = cyclotomic_polynomial(self.d);
        let deg = phi.len() - 1;
        let mut rem = self.coeffs.clone();
        for i in (deg..rem.len()).rev() {
            let c = rem[i];
            if c != 0 {
                rem[i] = 0;
                for (j, &pj) in phi.iter().enumerate().take(deg) {
                    rem[i - deg + j] -= c * pj;
                }
            }
        }
        rem.truncate(deg);
        rem
    }

    /// Exact zero test in `Z[ζ_d]`.
    pub fn is_zero(&self) -> bool {
        self.canonical().iter().all(|&c| c == 0)
    }

    /// |α|²: the exact ring element α·ᾱ evaluated at ζ_d (it is real).
    pub fn norm_sqr(&self) -> f64 {
        let prod = self.mul(&self.conj()).canonical();
        let mut acc = 0.0f64;
        for (i, &c) in prod.iter().enumerate() {
            acc += c as f64 * (2.0 * std::f64::consts::PI * i as f64 / self.d as f64).cos();
        }
        acc.max(0.0)
    }

    /// |α|, one floating square root at the very end.
    pub fn magnitude(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// `[z^k] ∏_q (1 + z·ζ_d^{label_q})`, exact in `Z[ζ_d]`.
pub fn product_coefficient(labels: &[u64], d: u64, k: usize) -> CycInt {
    assert!(k <= labels.len());
    let mut coeffs: Vec<CycInt> = (0..=k).map(|_| CycInt::zero(d)).collect();
    coeffs[0] = CycInt::one(d);
    for (seen, &r) in labels.iter().enumerate() {
        let top = k.min(seen + 1);
        for j in (1..=top).rev() {
            let shifted = coeffs[j - 1].mul_root_power(r);
            coeffs[j].add_assign(&shifted);
        }
    }
    coeffs.swap_remove(k)
}
