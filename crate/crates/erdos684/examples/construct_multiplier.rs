//! End-to-end multiplier construction: sieve for the least admissible t,
//! assemble n = t·L_M − 1 as a residue system, verify every carry
//! condition up to K = ⌊CM⌋, and cross-check on the materialized integer.
//!
//!     cargo run --release --example construct_multiplier

use erdos684::construction::{
    assemble_n, materialize_n, multiplier_search, verify_construction, ConstructionParams,
};
use erdos684::kummer::f_exact;
use num_rational::BigRational;

fn main() {
    let m = 20u64;
    let c = BigRational::new(2.into(), 1.into());
    let theta = BigRational::new(9.into(), 10.into());
    let params = ConstructionParams::new(m, c, theta, 100_000_000).unwrap();
    println!("M = {m}, K = {}, theta = 9/10", params.k_bound());

    let search = multiplier_search(&params).unwrap();
    println!("\nlocal acceptance ratios (scan order, most restrictive first):");
    for pa in &search.per_prime {
        println!("  p = {:>3}: |A_p|/m_p = {:>4}/{:<5} = {:.4}", pa.p, pa.size, pa.m, pa.ratio);
    }

    let Some(t) = search.found else {
        println!("no multiplier up to t_max = {}", search.t_max);
        return;
    };
    println!("\nleast multiplier t = {t} (after scanning {} candidates)", search.scanned);

    let rs = assemble_n(t, &params, 0);
    println!("n = {} with log n = {:.4}", rs.label(), rs.log_value().unwrap());

    let cert = verify_construction(&rs, &params).unwrap();
    println!(
        "certificate: {} ({} records, worst margin log(n^2/u_k) = {:.3} at k = {})",
        if cert.pass { "PASS" } else { "FAIL" },
        cert.records.len(),
        cert.worst_margin,
        cert.worst_k
    );

    let n = materialize_n(t, m);
    println!(
        "materialized n = {n}\nf_exact(n, k_max = K) = {:?}  (None means f(n) > K)",
        f_exact(&n, Some(params.k_bound()))
    );
}
