//! Split binomial coefficients into their ≤k-smooth and >k-rough parts
//! via Kummer carry counting, and show the carry levels of each prime.
//!
//!     cargo run --release --example smooth_split

use erdos684::kummer::{carry_count, uv_split};
use erdos684::primes::sieve_primes;
use num_bigint::BigUint;

fn main() {
    for (n, k) in [(10u64, 4u64), (35, 3), (100, 12), (2000, 29)] {
        let s = uv_split(n, k).unwrap();
        println!(
            "C({n},{k}) = {} * {}   (u = {}, v = {})",
            s.u, s.v,
            s.u.to_integer(),
            s.v.to_integer()
        );
    }

    println!("\ncarry levels for C(10,4):");
    let n = BigUint::from(10u32);
    for p in sieve_primes(10) {
        let profile = carry_count(&n, 4, p).unwrap();
        println!(
            "  p = {p}: v_p = {} at levels {:?}",
            profile.count(),
            profile.carry_levels
        );
    }
}
