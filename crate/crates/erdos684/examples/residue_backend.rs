//! The residue-system backend: analyzing n = t·L_M − 1 through residues
//! at declared prime powers only, without ever materializing the integer.
//! The explicit and residue paths must agree wherever both apply.
//!
//!     cargo run --release --example residue_backend

use erdos684::construction::{assemble_n, materialize_n, multiplier_search, ConstructionParams};
use erdos684::kummer::{log_u, log_u_residues, verify_f_lower, verify_f_lower_residues};
use num_rational::BigRational;

fn main() {
    let params = ConstructionParams::new(
        30,
        BigRational::new(3.into(), 2.into()),
        BigRational::new(7.into(), 10.into()),
        100_000_000,
    )
    .unwrap();
    let t = multiplier_search(&params).unwrap().found.expect("multiplier exists");
    let rs = assemble_n(t, &params, 0);
    println!(
        "n = {} known through {} prime-power residues, log n = {:.6}",
        rs.label(),
        rs.len(),
        rs.log_value().unwrap()
    );

    let n = materialize_n(t, params.m());
    println!("materialized n has {} bits\n", n.bits());

    println!("{:>4} {:>14} {:>14}", "k", "log u (resid)", "log u (exact)");
    for k in [5u64, 11, 20, 31, 45] {
        let a = log_u_residues(&rs, k, None).unwrap();
        let b = log_u(&n, k, None).unwrap();
        assert!((a - b).abs() < 1e-9);
        println!("{k:>4} {a:>14.6} {b:>14.6}");
    }

    let via_residues = verify_f_lower_residues(&rs, params.k_bound()).unwrap();
    let via_integer = verify_f_lower(&n, params.k_bound()).unwrap();
    println!(
        "\nf(n) > K = {}: residues say {}, the materialized integer says {}",
        params.k_bound(),
        via_residues.pass,
        via_integer.pass
    );
}
