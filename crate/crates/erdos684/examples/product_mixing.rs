//! Coefficient cancellation in ∏_{q∈V}(1 + z·χ(q)): exact cyclotomic
//! coefficients against the binomial envelope, for synthetic balanced
//! classes and for a real quadratic character.
//!
//!     cargo run --release --example product_mixing

use erdos684::chars::{mixing_from_labels, mixing_ratio, Character};
use erdos684::primes::primes_in_band;

fn main() {
    // balanced synthetic classes: the product collapses to (1 - (-z)^d)^{|V|/d}
    for d in [2u64, 3, 4] {
        let labels: Vec<u64> = (0..12 * d).map(|i| i % d).collect();
        println!("balanced d = {d}, |V| = {}:", labels.len());
        for k in 1..=6usize {
            let rep = mixing_from_labels(&labels, d, k);
            println!(
                "  [z^{k}]: |coeff| = {:>6}  ratio to C(|V|,k) = {:.3e}{}",
                rep.coeff_abs,
                rep.ratio,
                if rep.coeff_is_zero { "  (exactly zero)" } else { "" }
            );
        }
    }

    // the quadratic character mod 101 on the band primes (50, 100]
    let chi = Character::new(101, 50).unwrap();
    let v = primes_in_band(50, 100);
    println!(
        "\nquadratic character mod 101 on {:?} (classes {:?}):",
        v,
        erdos684::chars::class_counts(&v, &chi).unwrap()
    );
    for k in 1..v.len() {
        let rep = mixing_ratio(&v, &chi, k).unwrap();
        println!(
            "  k = {k}: |coeff| = {:>5}  /  C({},{k}) = {:<8}  ratio = {:.4}",
            rep.coeff_abs,
            v.len(),
            rep.binom_ref,
            rep.ratio
        );
    }
}
