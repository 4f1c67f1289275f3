//! Cross-module invariants that don't belong to a single unit-test block:
//! backend equivalence of the carry engine, the density prediction
//! comparison, certificate round-trips, and in-process CLI determinism.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use erdos684::construction::{
    assemble_n, density, materialize_n, multiplier_search, verify_construction,
    ConstructionParams, DEFAULT_ENUM_BUDGET,
};
use erdos684::factored::PrimePower;
use erdos684::kummer::{
    f_exact, log_u, log_u_residues, verify_f_lower, verify_f_lower_residues, ResidueSystem,
};
use erdos684::primes::sieve_primes;
use erdos684::rng::SplitMix64;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Levels that let a residue system certify carries for every k ≤ k_max:
/// for each prime p ≤ k_max, one level past n.
fn covering_levels(n: u64, k_max: u64) -> Vec<PrimePower> {
    let mut levels = Vec::new();
    for p in sieve_primes(k_max) {
        let mut a = 1u32;
        let mut pa = p as u128;
        while pa <= n as u128 {
            pa *= p as u128;
            a += 1;
        }
        levels.push(PrimePower::new(p, a).unwrap());
    }
    levels
}

#[test]
fn residue_backend_matches_explicit_on_random_inputs() {
    let mut rng = SplitMix64::new(0xBACC);
    for _ in 0..200 {
        let n = 2 + rng.below(1_000_000 - 2);
        let k = rng.below(n.min(1000) + 1);
        let big_n = BigUint::from(n);
        let rs = ResidueSystem::from_integer(&big_n, &covering_levels(n, k), "random").unwrap();
        let explicit = log_u(&big_n, k, None).unwrap();
        let via_residues = log_u_residues(&rs, k, None).unwrap();
        assert!(
            (explicit - via_residues).abs() < 1e-9,
            "backends disagree at n={n} k={k}: {explicit} vs {via_residues}"
        );
    }
}

#[test]
fn residue_f_lower_matches_explicit() {
    let mut rng = SplitMix64::new(0xF10);
    for _ in 0..25 {
        let n = 100 + rng.below(100_000);
        let k_bound = 1 + rng.below(40);
        let big_n = BigUint::from(n);
        let rs =
            ResidueSystem::from_integer(&big_n, &covering_levels(n, k_bound), "random").unwrap();
        let a = verify_f_lower(&big_n, k_bound).unwrap();
        let b = verify_f_lower_residues(&rs, k_bound).unwrap();
        assert_eq!(a.pass, b.pass, "n={n} k_bound={k_bound}");
        assert_eq!(a.first_violation, b.first_violation, "n={n} k_bound={k_bound}");
    }
}

#[test]
fn density_tracks_leading_order_prediction() {
    // report-only comparison: both sides computed and printed; no
    // acceptance constant is pinned here
    for m in [50u64, 100] {
        let params = ConstructionParams::new(m, rat(2, 1), rat(9, 10), 1).unwrap();
        let report = density(&params, DEFAULT_ENUM_BUDGET).unwrap();
        assert!(report.log_delta_inv.is_finite() && report.log_delta_inv > 0.0);
        assert!(report.leading_order_prediction > 0.0);
        let ratio = report.log_delta_inv / report.leading_order_prediction;
        println!(
            "M={m}: log delta^-1 = {:.3}, leading-order prediction = {:.3}, ratio = {ratio:.3}",
            report.log_delta_inv, report.leading_order_prediction
        );
    }
}

#[test]
fn end_to_end_verify_implies_f_lower_and_f_exact() {
    let params = ConstructionParams::new(12, rat(2, 1), rat(9, 10), 10_000_000).unwrap();
    let t = multiplier_search(&params)
        .unwrap()
        .found
        .expect("M=12 grid point admits a multiplier");
    let rs = assemble_n(t, &params, 0);
    let cert = verify_construction(&rs, &params).unwrap();
    assert!(cert.pass);
    // certificate pass implies the residue-side smooth bound...
    let lower = verify_f_lower_residues(&rs, params.k_bound()).unwrap();
    assert!(lower.pass);
    // ...and cross-checks against the materialized integer when it is small
    let n = materialize_n(t, params.m());
    assert!(n.bits() < 100_000);
    let direct = verify_f_lower(&n, params.k_bound()).unwrap();
    assert!(direct.pass);
    assert_eq!(f_exact(&n, Some(params.k_bound())), None);
}

#[test]
fn found_multiplier_satisfies_every_local_alternative() {
    // Lemma's alternatives restated: y_p = 0, or y_p >= ceil((K+1)/p^alpha)
    // with every prefix in {0} ∪ [theta p^b, p^b)
    let params = ConstructionParams::new(15, rat(3, 2), rat(7, 10), 10_000_000).unwrap();
    let t = multiplier_search(&params).unwrap().found.expect("multiplier exists");
    for set in params.local_sets() {
        let y = erdos684::modular::mul_mod(t, set.u_p_residue, set.m);
        assert!(set.contains(y), "y_p outside A_p at p = {}", set.p);
    }
}

#[test]
fn certificate_json_roundtrip_is_exact() {
    let params = ConstructionParams::new(10, rat(3, 2), rat(7, 10), 10_000_000).unwrap();
    let t = multiplier_search(&params).unwrap().found.unwrap();
    let rs = assemble_n(t, &params, 0);
    let cert = verify_construction(&rs, &params).unwrap();
    assert!(cert.verdict_consistent());
    let json = serde_json::to_string_pretty(&cert).unwrap();
    let parsed: erdos684::construction::Certificate = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed, cert);
    let rejson = serde_json::to_string_pretty(&parsed).unwrap();
    assert_eq!(json, rejson, "certificate JSON must round-trip byte for byte");
}

#[test]
fn cli_outputs_identical_across_worker_counts() {
    use clap::Parser;
    let dir = std::env::temp_dir().join("erdos684-test-determinism");
    std::fs::create_dir_all(&dir).unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "8"] {
        let path = dir.join(format!("construct-{workers}.json"));
        let cli = erdos684::cli::Cli::try_parse_from([
            "erdos684",
            "--workers",
            workers,
            "--out",
            path.to_str().unwrap(),
            "construct",
            "--M",
            "10",
            "--C",
            "3/2",
            "--theta",
            "7/10",
            "--tmax",
            "10000000",
        ])
        .unwrap();
        erdos684::cli::run(cli).unwrap();
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1], "construct output depends on worker count");
}

#[test]
fn smooth_parts_multiply_back_with_rough_parts() {
    // exhaustive beyond the unit-test range but below the acceptance range
    let mut row: Vec<BigUint> = vec![BigUint::one()];
    for n in 0..=150u64 {
        if n > 0 {
            let mut next = vec![BigUint::one()];
            for i in 1..row.len() {
                next.push(&row[i - 1] + &row[i]);
            }
            next.push(BigUint::one());
            row = next;
        }
        for k in (0..=n).step_by(3) {
            let s = erdos684::kummer::uv_split(n, k).unwrap();
            assert_eq!(s.u.to_integer() * s.v.to_integer(), row[k as usize]);
        }
    }
}
