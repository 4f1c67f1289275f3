//! Q_M-box heights: the signed residues h_p ≡ r·Q_M·(c_p·P_U·P_{A∖p})⁻¹
//! mod p, their shell census against the elementary-symmetric bound, and
//! the height histogram behind the averaged local cap.
//!
//!     cargo run --release --example qm_boxes

use erdos684::boxes::{
    enumerate_box_family, height_histogram, qm_box_height, t_r_census, BoxInstance,
};
use erdos684::construction::{ConstructionParams, DEFAULT_ENUM_BUDGET};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

fn main() {
    let m = 10u64;
    let params = ConstructionParams::new(
        m,
        BigRational::new(2.into(), 1.into()),
        BigRational::new(9.into(), 10.into()),
        1,
    )
    .unwrap();
    let band = params.top_band();
    println!("top band of M = {m}: {band:?}");

    println!("\nheights of the box U = {{}}, A = {{11, 13}}:");
    for r in [1i64, 2, 3, -3, 7] {
        let bx = BoxInstance::new(vec![], vec![11, 13], r).unwrap();
        println!(
            "  r = {r:>2}: h_11 = {:?}, h_13 = {:?}",
            qm_box_height(11, &bx, m).unwrap(),
            qm_box_height(13, &bx, m).unwrap()
        );
    }

    let census = t_r_census(
        &params,
        &[],
        &band,
        2,
        50,
        &BigUint::zero(),
        1 << 24,
        DEFAULT_ENUM_BUDGET,
    )
    .unwrap();
    println!(
        "\ncensus over |A| = 2, 50 < |r| <= 100: {} boxes, weighted mass {:.4}",
        census.count, census.weighted
    );
    println!(
        "  e_a bound = {:.4}, reciprocal term = {:.4}, observed constant = {:.4}",
        census.bound_main, census.bound_reciprocal, census.observed_constant
    );

    let p = 11u64;
    let family = enumerate_box_family(&params, p, 200);
    let h_bound = (p - 1) / 2;
    let grid: Vec<u64> = (1..=h_bound).collect();
    println!("\nheight histogram at p = {p} over {} boxes:", family.len());
    for row in height_histogram(p, &family, m, &grid).unwrap() {
        println!(
            "  N({}) = {:>5}   vs linear cap ratio {:.4}",
            row.t, row.count, row.cap_ratio
        );
    }
}
