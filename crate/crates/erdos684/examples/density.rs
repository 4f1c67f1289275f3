//! Local densities of the admissible sets A_p and the total log δ⁻¹,
//! against the leading-order prediction (C−1)·log(1/(1−θ))·M/log M.
//!
//!     cargo run --release --example density

use erdos684::construction::{density, ConstructionParams, DEFAULT_ENUM_BUDGET};
use num_rational::BigRational;

fn main() {
    for m in [10u64, 20, 50] {
        let params = ConstructionParams::new(
            m,
            BigRational::new(2.into(), 1.into()),
            BigRational::new(9.into(), 10.into()),
            1,
        )
        .unwrap();
        let report = density(&params, DEFAULT_ENUM_BUDGET).unwrap();
        println!("M = {m}, K = {}:", report.k_bound);
        for row in &report.per_prime {
            println!(
                "  p = {:>3}: |A_p| = {:>5} / {:<6} log(m/|A|) = {:.4}",
                row.p, row.size, row.m, row.log_inv_contrib
            );
        }
        println!(
            "  log delta^-1 = {:.4}, leading-order prediction = {:.4}\n",
            report.log_delta_inv, report.leading_order_prediction
        );
    }
}
