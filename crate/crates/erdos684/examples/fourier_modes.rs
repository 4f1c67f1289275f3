//! Frequency vectors: exact values Φ(a) = Σ a_p·L_M/p^{β_p}, the exact
//! denominator law q(a) = ∏ p^{B_p − v_p(a_p)}, normalized local Fourier
//! weights, and an enumerated partial sum of the sieve criterion.
//!
//!     cargo run --release --example fourier_modes

use erdos684::construction::{ConstructionParams, DEFAULT_ENUM_BUDGET};
use erdos684::fourier::{
    criterion_partial_sum, exact_denominator, local_fourier, phi, phi_distance, FreqVector,
};
use num_bigint::BigUint;
use num_rational::BigRational;

fn main() {
    let params = ConstructionParams::new(
        10,
        BigRational::new(2.into(), 1.into()),
        BigRational::new(9.into(), 10.into()),
        1,
    )
    .unwrap();

    println!("single-prime modes at M = 10, K = 20:");
    for (p, a) in [(11u64, 11u64), (11, 22), (11, 1), (13, 13)] {
        let fv = FreqVector::new(&params, [(p, a)]).unwrap();
        println!(
            "  a_{p} = {a:>3}: Phi = {}, q(a) = {}, dist to Z = {}",
            phi(&params, &fv),
            exact_denominator(&params, &fv).unwrap(),
            phi_distance(&params, &fv)
        );
    }

    println!("\nnormalized prefix weights w_p(h) of the top-band sets:");
    for p in params.top_band() {
        let table = local_fourier(&params.local_set(p).unwrap(), DEFAULT_ENUM_BUDGET).unwrap();
        let w: Vec<String> = (1..=table.h_bound().min(5))
            .map(|h| format!("w({h}) = {:.4}", table.weight(h as i64)))
            .collect();
        println!("  p = {p}: {} ; L_p* = {:.4}", w.join(", "), table.l_star);
    }

    for n in [1_000u64, 100_000, 10_000_000] {
        let sum = criterion_partial_sum(
            &params,
            &BigUint::from(n),
            1,
            5,
            100_000,
            DEFAULT_ENUM_BUDGET,
            None,
        )
        .unwrap();
        println!(
            "\ncriterion partial sum, shell size 1, |h| <= 5, N = {n}: {:.6} over {} modes",
            sum.sum, sum.modes
        );
    }
}
