//! Desk-scale toolkit for Erdős problem 684.
//!
//! For 0 ≤ k ≤ n write C(n,k) = u_k(n)·v_k(n), where u_k collects the
//! prime factors ≤ k and v_k the prime factors > k, and let f(n) be the
//! least k with u_k(n) > n². This crate computes these objects exactly and
//! builds the two known families of integers with slowly growing f:
//!
//! - the packed seeds M_K = ∏_{p≤K} p^{⌊log_p K⌋+1}, for which f(M_K−1) > K;
//! - multiplier seeds n = t·lcm(1..M) − 1, where t is found by an
//!   exhaustive congruence sieve over local residue sets A_p that turn off
//!   binomial carries at every prime-power level up to ⌊CM⌋.
//!
//! Around the constructions sit exact diagnostics: Kummer carry counting,
//! Fourier coefficients and exact denominators of the frequency values
//! Φ(a) = Σ a_p·L_M/p^{β_p}, Q_M-box height congruences, elementary
//! symmetric mass bounds, Dirichlet character sums over prime bands, and
//! cyclotomic-exact product mixing ratios.
//!
//! Entry points: [`kummer::f_exact`] for f(n), [`construction`] for the
//! seeds, [`fourier`]/[`boxes`]/[`chars`] for the diagnostics, and
//! [`cli::run`] behind the `erdos684` binary. Each major capability also
//! has a runnable demo under `examples/`.

pub mod boxes;
pub mod chars;
pub mod cli;
pub mod construction;
pub mod cyclotomic;
pub mod dft;
pub mod factored;
pub mod fourier;
pub mod kummer;
pub mod modular;
pub mod primes;
pub mod rational;
pub mod report;
pub mod rng;

pub use factored::{FactoredNat, PrimePower};
pub use kummer::{ResidueSystem, SmoothSplit};
pub use construction::{Certificate, ConstructionParams, LocalSet};
