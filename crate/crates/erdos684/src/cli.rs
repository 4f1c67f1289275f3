//! Command-line front end. The binary is a thin wrapper: it parses the
//! command line, merges defaults from an optional JSON config file, sets
//! the worker pool, dispatches to the library, and maps errors to exit
//! codes (1 validation, 2 budget exhaustion, 3 failed certificate).
//! Errors go to stderr as one-line JSON objects.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::construction::{
    self, apssv_seed, density, verify_construction, Certificate,
    ConstructionError, ConstructionParams, DEFAULT_ENUM_BUDGET,
};
use crate::chars::{band_char_sum, mixing_ratio, Character};
use crate::fourier::criterion_partial_sum;
use crate::kummer::{f_exact, verify_f_lower};
use crate::primes::primes_in_band;
use crate::rational::{format_rational, parse_rational};
use crate::report::{fmt_sig12, CsvWriter};

pub const WORKERS_ENV: &str = "ERDOS684_WORKERS";

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Budget(String),
    FailedCertificate(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Budget(_) => 2,
            CliError::FailedCertificate(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Budget(_) => "budget",
            CliError::FailedCertificate(_) => "failed-certificate",
            CliError::Io(_) => "io",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Validation(m) | CliError::Budget(m) | CliError::FailedCertificate(m) => {
                m.clone()
            }
            CliError::Io(e) => e.to_string(),
        }
    }

    /// The machine-readable stderr object.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": {
                "code": self.exit_code(),
                "kind": self.kind(),
                "message": self.message(),
            }
        })
        .to_string()
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<ConstructionError> for CliError {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::BudgetExceeded { .. } | ConstructionError::CensusBudget { .. } => {
                CliError::Budget(e.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "erdos684", about = "Smooth-part toolkit for Erdős problem 684")]
pub struct Cli {
    /// Worker pool size (default: ERDOS684_WORKERS or all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// JSON config file providing defaults for the flags of the chosen
    /// subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed recorded in outputs of randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output path (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print f(n), or "none" when no k ≤ kmax works.
    F {
        n: String,
        #[arg(long)]
        kmax: Option<u64>,
    },
    /// CSV of (n, f(n), f/log n, f/(log n)^2) for 2 ≤ n ≤ max.
    Table {
        #[arg(long)]
        max: u64,
    },
    /// The packed seed M_K and the certificate that f(M_K − 1) > K.
    SeedApssv {
        #[arg(long = "K", alias = "k")]
        k: u64,
    },
    /// Multiplier search + assembly + verification, as one JSON report.
    Construct(ParamArgs),
    /// Re-read a certificate, re-check its verdict, re-emit it.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Per-prime local densities and log δ⁻¹.
    Density(ParamArgs),
    /// Criterion partial sum over one support shell, with a CSV of modes.
    Fourier {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        shell: usize,
        #[arg(long, default_value_t = 5)]
        hcap: u64,
        /// The scale N in min(1, 1/(N·dist)).
        #[arg(long, short = 'N', default_value = "1000000")]
        n_scale: String,
        #[arg(long, default_value_t = 1_000_000)]
        count_cap: u64,
        /// Write the per-mode table (one CSV row per mode) to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Q_M-box census or height histogram.
    Boxes(BoxesArgs),
    /// Band character sum Σ_{M<q≤CM} χ^ℓ(q).
    Charsum {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        j: u64,
        #[arg(long, default_value_t = 1)]
        ell: u64,
        #[arg(long = "M", alias = "m")]
        m: u64,
        #[arg(long = "C", alias = "c", default_value = "2")]
        c: String,
    },
    /// Product-mixing ratio of one character over the top band.
    Mixing {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        j: u64,
        #[arg(long)]
        k: usize,
        #[arg(long = "M", alias = "m")]
        m: u64,
        #[arg(long = "C", alias = "c", default_value = "2")]
        c: String,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    #[arg(long = "M", alias = "m")]
    pub m: Option<u64>,
    /// C as an exact rational ("3/2") or decimal string ("1.5").
    #[arg(long = "C", alias = "c")]
    pub c: Option<String>,
    /// θ as an exact rational ("9/10") or decimal string ("0.9").
    #[arg(long)]
    pub theta: Option<String>,
    #[arg(long)]
    pub tmax: Option<u64>,
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct BoxesArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Census over one dyadic shell R < |r| ≤ 2R.
    #[arg(long, conflicts_with = "histogram")]
    pub census: bool,
    /// Height histogram N_p(t) over the full small box family.
    #[arg(long)]
    pub histogram: bool,
    /// Petal prime under test (histogram) .
    #[arg(long)]
    pub p: Option<u64>,
    /// Core primes, comma separated (census).
    #[arg(long, value_delimiter = ',')]
    pub core: Vec<u64>,
    /// Petal-set size a (census).
    #[arg(long, default_value_t = 2)]
    pub a: usize,
    /// Dyadic shell base R (census) or numerator range bound (histogram).
    #[arg(long, default_value_t = 50)]
    pub r: u64,
    /// Core fiber ξ mod P_U (census).
    #[arg(long, default_value_t = 0)]
    pub xi: u64,
    /// Number of grid points for the histogram.
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
}

/// Values a JSON config file may pre-set (command-line flags win).
#[derive(Debug, Default, Deserialize)]
pub struct FileConfig {
    pub m: Option<u64>,
    pub c: Option<String>,
    pub theta: Option<String>,
    pub tmax: Option<u64>,
    pub budget: Option<u64>,
    pub workers: Option<usize>,
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, CliError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Validation(format!("bad config file: {e}")))
        }
    }
}

fn parse_rat_arg(name: &str, s: &str) -> Result<BigRational, CliError> {
    parse_rational(s).map_err(|e| CliError::Validation(format!("{name}: {e}")))
}

fn resolve_params(args: &ParamArgs, file: &FileConfig) -> Result<ConstructionParams, CliError> {
    let m = args
        .m
        .or(file.m)
        .ok_or_else(|| CliError::Validation("missing --M".into()))?;
    let c = args
        .c
        .clone()
        .or_else(|| file.c.clone())
        .ok_or_else(|| CliError::Validation("missing --C".into()))?;
    let theta = args
        .theta
        .clone()
        .or_else(|| file.theta.clone())
        .ok_or_else(|| CliError::Validation("missing --theta".into()))?;
    let tmax = args.tmax.or(file.tmax).unwrap_or(10_000_000);
    let c = parse_rat_arg("--C", &c)?;
    let theta = parse_rat_arg("--theta", &theta)?;
    ConstructionParams::new(m, c, theta, tmax).map_err(CliError::from)
}

/// The combined JSON emitted by `construct`.
#[derive(Debug, Serialize)]
struct ConstructReport {
    seed: u64,
    m: u64,
    k_bound: u64,
    c: String,
    theta: String,
    theta_condition_value: String,
    t: Option<u64>,
    scanned: u64,
    t_max: u64,
    per_prime_acceptance: Vec<construction::PrimeAcceptance>,
    density: construction::DensityReport,
    certificate: Option<Certificate>,
}

struct Output {
    path: Option<PathBuf>,
}

impl Output {
    fn write_all(&self, content: &str) -> Result<(), CliError> {
        match &self.path {
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(content.as_bytes())?;
                Ok(())
            }
            Some(p) => {
                fs::write(p, content)?;
                Ok(())
            }
        }
    }
}

/// Entry point behind the binary. Returns what the process should exit with.
pub fn run(cli: Cli) -> Result<(), CliError> {
    let file_cfg = load_config(&cli.config)?;
    let workers = cli
        .workers
        .or(file_cfg.workers)
        .or_else(|| {
            std::env::var(WORKERS_ENV)
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let out = Output { path: cli.out.clone() };
    pool.install(|| dispatch(cli, file_cfg, out))
}

fn dispatch(cli: Cli, file_cfg: FileConfig, out: Output) -> Result<(), CliError> {
    let seed = cli.seed;
    match cli.command {
        Command::F { n, kmax } => {
            let n = BigUint::from_str(n.trim())
                .map_err(|_| CliError::Validation(format!("bad integer `{n}`")))?;
            if n.is_zero() {
                return Err(CliError::Validation("need n >= 1".into()));
            }
            match f_exact(&n, kmax) {
                Some(k) => out.write_all(&format!("{k}\n")),
                None => out.write_all("none\n"),
            }
        }
        Command::Table { max } => {
            if max < 2 {
                return Err(CliError::Validation("need --max >= 2".into()));
            }
            use rayon::prelude::*;
            let rows: Vec<(u64, Option<u64>)> = (2..=max)
                .into_par_iter()
                .map(|n| (n, f_exact(&BigUint::from(n), None)))
                .collect();
            let mut w = CsvWriter::new(Vec::new(), &["n", "f", "f_over_log", "f_over_log_sq"])?;
            for (n, f) in rows {
                let log_n = (n as f64).ln();
                match f {
                    Some(f) => w.row(&[
                        n.to_string(),
                        f.to_string(),
                        fmt_sig12(f as f64 / log_n),
                        fmt_sig12(f as f64 / (log_n * log_n)),
                    ])?,
                    None => w.row(&[n.to_string(), "none".into(), String::new(), String::new()])?,
                }
            }
            out.write_all(&String::from_utf8(w.into_inner()).unwrap())
        }
        Command::SeedApssv { k } => {
            if k < 2 {
                return Err(CliError::Validation("need K >= 2".into()));
            }
            let seed = apssv_seed(k);
            let n = seed.to_integer() - BigUint::from(1u32);
            let report = verify_f_lower(&n, k)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let json = serde_json::json!({
                "k": k,
                "seed": seed.to_integer().to_string(),
                "seed_factored": seed.to_string(),
                "verify_f_lower": report,
            });
            let pass = report_passes(&json);
            out.write_all(&format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))?;
            if pass {
                Ok(())
            } else {
                Err(CliError::FailedCertificate(format!(
                    "f(M_K - 1) <= K at K = {k}"
                )))
            }
        }
        Command::Construct(args) => {
            let params = resolve_params(&args, &file_cfg)?;
            let budget = args.budget.or(file_cfg.budget).unwrap_or(DEFAULT_ENUM_BUDGET);
            let (theta_value, _) =
                construction::theta_condition(params.c(), params.theta());
            let search = construction::multiplier_search_with_budget(&params, budget)?;
            let dens = density(&params, budget)?;
            let certificate = match search.found {
                None => None,
                Some(t) => {
                    let rs = construction::assemble_n(t, &params, 0);
                    Some(verify_construction(&rs, &params)
                        .map_err(|e| CliError::Validation(e.to_string()))?)
                }
            };
            let report = ConstructReport {
                seed,
                m: params.m(),
                k_bound: params.k_bound(),
                c: format_rational(params.c()),
                theta: format_rational(params.theta()),
                theta_condition_value: format_rational(&theta_value),
                t: search.found,
                scanned: search.scanned,
                t_max: search.t_max,
                per_prime_acceptance: search.per_prime,
                density: dens,
                certificate: certificate.clone(),
            };
            out.write_all(&format!(
                "{}\n",
                serde_json::to_string_pretty(&report).unwrap()
            ))?;
            match certificate {
                Some(c) if !c.pass => Err(CliError::FailedCertificate(
                    "construction certificate failed".into(),
                )),
                _ => Ok(()),
            }
        }
        Command::Verify { cert } => {
            let text = fs::read_to_string(&cert)?;
            let parsed: Certificate = serde_json::from_str(&text)
                .map_err(|e| CliError::Validation(format!("bad certificate: {e}")))?;
            if !parsed.verdict_consistent() {
                return Err(CliError::FailedCertificate(
                    "verdict does not match the conjunction of records".into(),
                ));
            }
            out.write_all(&format!(
                "{}\n",
                serde_json::to_string_pretty(&parsed).unwrap()
            ))?;
            if parsed.pass {
                Ok(())
            } else {
                Err(CliError::FailedCertificate("certificate records a failure".into()))
            }
        }
        Command::Density(args) => {
            let params = resolve_params(&args, &file_cfg)?;
            let budget = args.budget.or(file_cfg.budget).unwrap_or(DEFAULT_ENUM_BUDGET);
            let report = density(&params, budget)?;
            out.write_all(&format!(
                "{}\n",
                serde_json::to_string_pretty(&report).unwrap()
            ))
        }
        Command::Fourier {
            params,
            shell,
            hcap,
            n_scale,
            count_cap,
            csv,
        } => {
            let budget = params.budget.or(file_cfg.budget).unwrap_or(DEFAULT_ENUM_BUDGET);
            let params = resolve_params(&params, &file_cfg)?;
            let n_scale = BigUint::from_str(n_scale.trim())
                .map_err(|_| CliError::Validation(format!("bad integer `{n_scale}`")))?;
            let mut rows = Vec::new();
            let summary = criterion_partial_sum(
                &params,
                &n_scale,
                shell,
                hcap,
                count_cap,
                budget,
                Some(&mut rows),
            )?;
            let mut w = CsvWriter::new(
                Vec::new(),
                &["primes", "heights", "weight", "denominator", "distance", "term"],
            )?;
            for r in &rows {
                w.row(&[
                    join_u64(&r.primes),
                    join_i64(&r.heights),
                    fmt_sig12(r.weight),
                    r.denominator.clone(),
                    fmt_sig12(r.distance),
                    fmt_sig12(r.term),
                ])?;
            }
            let table = String::from_utf8(w.into_inner()).unwrap();
            let json = match &csv {
                Some(path) => {
                    fs::write(path, &table)?;
                    serde_json::json!({ "summary": summary, "csv_path": path })
                }
                None => serde_json::json!({ "summary": summary, "csv": table }),
            };
            out.write_all(&format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
        }
        Command::Boxes(args) => run_boxes(args, &file_cfg, out),
        Command::Charsum { p, j, ell, m, c } => {
            let c = parse_rat_arg("--C", &c)?;
            let chi = Character::new(p, j).map_err(|e| CliError::Validation(e.to_string()))?;
            let sum = band_char_sum(&chi, ell, m, &c)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            out.write_all(&format!(
                "{}\n",
                serde_json::to_string_pretty(&sum).unwrap()
            ))
        }
        Command::Mixing { p, j, k, m, c } => {
            let c = parse_rat_arg("--C", &c)?;
            let chi = Character::new(p, j).map_err(|e| CliError::Validation(e.to_string()))?;
            let hi = crate::chars::band_upper(m, &c);
            let v: Vec<u64> = primes_in_band(m, hi).into_iter().filter(|&q| q != p).collect();
            let report =
                mixing_ratio(&v, &chi, k).map_err(|e| CliError::Validation(e.to_string()))?;
            out.write_all(&format!(
                "{}\n",
                serde_json::to_string_pretty(&report).unwrap()
            ))
        }
    }
}

fn run_boxes(args: BoxesArgs, file_cfg: &FileConfig, out: Output) -> Result<(), CliError> {
    let params = resolve_params(&args.params, file_cfg)?;
    let budget = args.params.budget.or(file_cfg.budget).unwrap_or(DEFAULT_ENUM_BUDGET);
    if args.census == args.histogram {
        return Err(CliError::Validation(
            "choose exactly one of --census / --histogram".into(),
        ));
    }
    if args.census {
        let pool: Vec<u64> = params
            .top_band()
            .into_iter()
            .filter(|p| !args.core.contains(p))
            .collect();
        let report = crate::boxes::t_r_census(
            &params,
            &args.core,
            &pool,
            args.a,
            args.r,
            &BigUint::from(args.xi),
            budget as u128,
            budget,
        )?;
        out.write_all(&format!(
            "{}\n",
            serde_json::to_string_pretty(&report).unwrap()
        ))
    } else {
        let p = args
            .p
            .ok_or_else(|| CliError::Validation("histogram needs --p".into()))?;
        if !params.top_band().contains(&p) {
            return Err(CliError::Validation(format!(
                "p = {p} is not in the top band ({}, {}]",
                params.m(),
                params.k_bound()
            )));
        }
        let family = crate::boxes::enumerate_box_family(&params, p, args.r as i64);
        let h_bound = (p - 1) / 2;
        let grid: Vec<u64> = (1..=args.grid as u64)
            .map(|i| (i * h_bound).div_ceil(args.grid as u64))
            .collect();
        let rows = crate::boxes::height_histogram(p, &family, params.m(), &grid)
            .map_err(|e| CliError::Validation(e.to_string()))?;
        let mut w = CsvWriter::new(Vec::new(), &["t", "count", "cap_ratio"])?;
        for r in &rows {
            w.row(&[r.t.to_string(), r.count.to_string(), fmt_sig12(r.cap_ratio)])?;
        }
        out.write_all(&String::from_utf8(w.into_inner()).unwrap())
    }
}

fn join_u64(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn join_i64(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn report_passes(json: &serde_json::Value) -> bool {
    json.pointer("/verify_f_lower/pass")
        .and_then(|v| v.as_bool())
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_parses_spec_shapes() {
        let cli = Cli::try_parse_from([
            "erdos684", "construct", "--M", "10", "--C", "3/2", "--theta", "7/10", "--tmax",
            "10000000",
        ])
        .unwrap();
        match cli.command {
            Command::Construct(args) => {
                assert_eq!(args.m, Some(10));
                assert_eq!(args.c.as_deref(), Some("3/2"));
            }
            _ => panic!("wrong command"),
        }
        assert!(Cli::try_parse_from(["erdos684", "f", "35"]).is_ok());
        assert!(Cli::try_parse_from(["erdos684", "seed-apssv", "--K", "3"]).is_ok());
        assert!(Cli::try_parse_from(["erdos684", "charsum", "--p", "101", "--j", "1", "--M", "50"]).is_ok());
    }

    #[test]
    fn error_objects_have_codes() {
        let e = CliError::Budget("too big".into());
        assert_eq!(e.exit_code(), 2);
        let json = e.to_json();
        assert!(json.contains("\"code\":2"));
        assert!(json.contains("budget"));
    }
}
