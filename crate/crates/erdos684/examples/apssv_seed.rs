//! The packed seeds M_K = ∏_{p≤K} p^{⌊log_p K⌋+1}: every prime power
//! exceeds K, so M_K − 1 is ≡ −1 at all of them and f(M_K − 1) > K.
//!
//!     cargo run --release --example apssv_seed

use erdos684::construction::apssv_seed;
use erdos684::kummer::verify_f_lower;
use num_bigint::BigUint;
use num_traits::One;

fn main() {
    println!("{:>3}  {:>28}  {:<30} f(M_K - 1) > K?", "K", "M_K", "factored");
    for k in 2..=20u64 {
        let seed = apssv_seed(k);
        let n = seed.to_integer() - BigUint::one();
        let report = verify_f_lower(&n, k).unwrap();
        println!(
            "{k:>3}  {:>28}  {:<30} {} (worst margin {:.2} at k = {})",
            seed.to_integer(),
            seed.to_string(),
            if report.pass { "yes" } else { "NO" },
            report.worst_margin,
            report.worst_k
        );
    }
}
