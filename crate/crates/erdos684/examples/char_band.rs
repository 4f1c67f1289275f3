//! Dirichlet character sums over the prime band (M, 2M] and short
//! interval profiles: the desk-scale face of the Burgess saving.
//!
//!     cargo run --release --example char_band

use erdos684::chars::{band_char_sum, burgess_profile, class_counts, Character};
use erdos684::primes::primes_in_band;
use num_rational::BigRational;

fn main() {
    let two = BigRational::new(2.into(), 1.into());

    for p in [101u64, 211, 401] {
        let m = p / 2;
        let mut max_norm: f64 = 0.0;
        let mut arg_j = 0;
        for j in 1..p - 1 {
            let chi = Character::new(p, j).unwrap();
            let s = band_char_sum(&chi, 1, m, &two).unwrap();
            if s.normalized > max_norm {
                max_norm = s.normalized;
                arg_j = j;
            }
        }
        println!(
            "p = {p:>3}, band ({m}, {}]: max over nonprincipal chi of |sum|/#band = {max_norm:.4} (at j = {arg_j})",
            2 * m
        );
    }

    // class counts of an order-4 character on the band primes
    let chi = Character::new(101, 25).unwrap();
    let v = primes_in_band(50, 100);
    println!(
        "\nchi mod 101 of order {}: class counts over {:?}\n  n_r = {:?}",
        chi.order(),
        v,
        class_counts(&v, &chi).unwrap()
    );

    // short-interval sums of a character mod 10007
    let chi = Character::new(10007, 1).unwrap();
    println!("\ninterval sums |sum over (x0, x0+y]| / y for chi mod 10007:");
    for row in burgess_profile(&chi, &[0, 2500, 5000], &[100, 1000, 10007]) {
        println!(
            "  x0 = {:>4}, y = {:>5}: {:.4}",
            row.x0, row.y, row.normalized
        );
    }
}
