//! Compute f(n) — the least k whose ≤k-smooth part of C(n,k) exceeds n² —
//! for a range of n, and show how it compares to log n and (log n)².
//!
//!     cargo run --release --example f_values

use erdos684::kummer::f_exact;
use num_bigint::BigUint;

fn main() {
    println!("{:>6} {:>6} {:>10} {:>12}", "n", "f(n)", "f/log n", "f/(log n)^2");
    for n in [10u64, 35, 100, 300, 1000, 2000, 5000, 10000] {
        let f = f_exact(&BigUint::from(n), None);
        let log_n = (n as f64).ln();
        match f {
            None => println!("{n:>6} {:>6}", "none"),
            Some(f) => println!(
                "{n:>6} {f:>6} {:>10.4} {:>12.4}",
                f as f64 / log_n,
                f as f64 / (log_n * log_n)
            ),
        }
    }

    // the packed seed 36 = M_3 has f(36 - 1) > 3
    let n = BigUint::from(35u32);
    println!("\nf(35) = {:?} (35 = M_3 - 1, so f > 3 by construction)", f_exact(&n, None));
}
