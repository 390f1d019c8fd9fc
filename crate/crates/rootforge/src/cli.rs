//! Command-line frontend: parse polynomials, run the solvers, emit JSON.
//!
//! Exit codes: 0 success, 2 parse/input error, 3 precision cap (likely a
//! wrong root count), 4 non-coprime system, 5 internal invariant violation.

use crate::intpoly2::IntPoly2;
use crate::isolator::{isolate, refine, IsolateError, IsolatorConfig, RootResult};
use crate::oracle::{OracleError, OracleHandle};
use crate::parse::{parse_polynomial, Parsed};
use crate::topnt::{solve_system, topology, TopError, TopOptions};
use crate::interval::ComplexDyadic;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "rootforge",
    about = "Certified complex root isolation, curve topology, and bivariate solving"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// RNG seed (falls back to ROOTFORGE_SEED, then 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Cap on the internal backward-error budget, in bits.
    #[arg(long)]
    b_max: Option<i64>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Include oracle query counts and the maximum precision requested.
    #[arg(long)]
    stats: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Isolate the distinct complex roots of a univariate polynomial.
    Isolate {
        /// Inline polynomial, a file path, or "-" for stdin.
        input: String,
        /// Number of distinct roots (required for dyadic coefficients).
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Isolate and then shrink every disk below 2^-kappa.
    Refine {
        input: String,
        #[arg(long)]
        kappa: i64,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Compute a graph isotopic to the real curve f(x, y) = 0.
    Topology {
        input: String,
        /// Force a specific shear value.
        #[arg(long)]
        shear: Option<i64>,
        /// Force a specific modular gate prime.
        #[arg(long)]
        prime: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Isolate the real solutions of the system g = h = 0.
    Solve2 {
        g: String,
        h: String,
        #[arg(long)]
        shear: Option<i64>,
        #[arg(long)]
        prime: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

fn load_input(arg: &str) -> Result<String, String> {
    if arg == "-" {
        use std::io::Read;
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| e.to_string())?;
        return Ok(s);
    }
    let p = std::path::Path::new(arg);
    if p.is_file() {
        return std::fs::read_to_string(p).map_err(|e| e.to_string());
    }
    Ok(arg.to_string())
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("ROOTFORGE_SEED")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}

fn isolator_config(common: &Common) -> IsolatorConfig {
    let mut cfg = IsolatorConfig::default();
    if let Some(b) = common.b_max {
        cfg.b_max = b;
    }
    cfg
}

fn root_json(h: &OracleHandle, r: &RootResult, stats: bool) -> serde_json::Value {
    let roots: Vec<_> = r
        .disks
        .iter()
        .enumerate()
        .map(|(i, d)| {
            json!({
                "center": {
                    "re": d.center.re.to_string(),
                    "im": d.center.im.to_string(),
                },
                "radius": d.radius.to_string(),
                "multiplicity": r.multiplicities[i],
                "real": r.real_flags[i],
            })
        })
        .collect();
    let mut v = json!({
        "k": r.k(),
        "b_final": r.b_final,
        "roots": roots,
    });
    if stats {
        let (queries, max_l) = h.stats();
        v["stats"] = json!({ "oracle_queries": queries, "oracle_max_l": max_l });
    }
    v
}

fn print_roots(h: &OracleHandle, r: &RootResult, common: &Common) {
    match common.format {
        Format::Json => println!("{}", root_json(h, r, common.stats)),
        Format::Text => {
            println!("k = {}, b_final = {}", r.k(), r.b_final);
            for (i, d) in r.disks.iter().enumerate() {
                println!(
                    "root {}: center = ({}, {}), radius = {}, multiplicity = {}{}",
                    i,
                    d.center.re,
                    d.center.im,
                    d.radius,
                    r.multiplicities[i],
                    if r.real_flags[i] { ", real" } else { "" }
                );
            }
            if common.stats {
                let (queries, max_l) = h.stats();
                println!("oracle queries = {queries}, max precision = {max_l}");
            }
        }
    }
}

enum Failure {
    Input(String),
    Precision(String),
    NotCoprime,
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 2,
            Failure::Precision(_) => 3,
            Failure::NotCoprime => 4,
            Failure::Internal(_) => 5,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(m) | Failure::Precision(m) | Failure::Internal(m) => m.clone(),
            Failure::NotCoprime => "input polynomials are not coprime".into(),
        }
    }
}

impl From<IsolateError> for Failure {
    fn from(e: IsolateError) -> Self {
        match &e {
            IsolateError::BudgetExceeded { .. } => Failure::Precision(e.to_string()),
            IsolateError::Oracle(OracleError::PrecisionCap { .. }) => {
                Failure::Precision(e.to_string())
            }
            IsolateError::Oracle(_) => Failure::Internal(e.to_string()),
        }
    }
}

impl From<TopError> for Failure {
    fn from(e: TopError) -> Self {
        match &e {
            TopError::NotCoprime => Failure::NotCoprime,
            TopError::NotSquareFree | TopError::Degenerate => Failure::Input(e.to_string()),
            TopError::Isolate(inner) => match inner {
                IsolateError::BudgetExceeded { .. } => Failure::Precision(e.to_string()),
                IsolateError::Oracle(OracleError::PrecisionCap { .. }) => {
                    Failure::Precision(e.to_string())
                }
                _ => Failure::Internal(e.to_string()),
            },
            TopError::ShearExhausted(_) | TopError::SeparationCap => {
                Failure::Internal(e.to_string())
            }
        }
    }
}

/// Prepares an oracle and root count from a parsed univariate polynomial.
fn univariate_job(parsed: Parsed, k: Option<usize>) -> Result<(OracleHandle, usize), Failure> {
    match parsed {
        Parsed::Int(p) => {
            if p.deg() < 1 {
                return Err(Failure::Input("polynomial must have degree >= 1".into()));
            }
            let k = k.unwrap_or_else(|| p.square_free_part().deg());
            Ok((OracleHandle::from_int(p), k))
        }
        Parsed::DyadicCoeffs(c) => {
            let k = k.ok_or_else(|| {
                Failure::Input("--k is required for dyadic coefficient input".into())
            })?;
            let coeffs: Vec<ComplexDyadic> = c.into_iter().map(ComplexDyadic::real).collect();
            if coeffs.len() < 2 {
                return Err(Failure::Input("polynomial must have degree >= 1".into()));
            }
            Ok((OracleHandle::from_dyadic(coeffs), k))
        }
        Parsed::Int2(_) => Err(Failure::Input(
            "expected a univariate polynomial in x".into(),
        )),
    }
}

fn bivariate(parsed: Parsed) -> Result<IntPoly2, Failure> {
    match parsed {
        Parsed::Int2(f) => Ok(f),
        Parsed::Int(p) => Ok(IntPoly2::from_x(p)),
        Parsed::DyadicCoeffs(_) => Err(Failure::Input(
            "curve input must have integer coefficients".into(),
        )),
    }
}

fn run_inner(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Isolate { input, k, common } => {
            let text = load_input(&input).map_err(Failure::Input)?;
            let parsed = parse_polynomial(text.trim()).map_err(|e| Failure::Input(e.to_string()))?;
            let cfg = isolator_config(&common);
            let (h, k) = univariate_job(parsed, k)?;
            if k < 1 || k > h.degree() {
                return Err(Failure::Input("k must be in 1..=degree".into()));
            }
            let r = isolate(&h, k, &cfg)?;
            print_roots(&h, &r, &common);
            Ok(())
        }
        Cmd::Refine {
            input,
            kappa,
            k,
            common,
        } => {
            let text = load_input(&input).map_err(Failure::Input)?;
            let parsed = parse_polynomial(text.trim()).map_err(|e| Failure::Input(e.to_string()))?;
            if kappa < 1 {
                return Err(Failure::Input("kappa must be positive".into()));
            }
            let cfg = isolator_config(&common);
            let (h, k) = univariate_job(parsed, k)?;
            if k < 1 || k > h.degree() {
                return Err(Failure::Input("k must be in 1..=degree".into()));
            }
            let r = isolate(&h, k, &cfg)?;
            let r = refine(&h, &r, kappa, &cfg)?;
            print_roots(&h, &r, &common);
            Ok(())
        }
        Cmd::Topology {
            input,
            shear,
            prime,
            common,
        } => {
            let text = load_input(&input).map_err(Failure::Input)?;
            let parsed = parse_polynomial(text.trim()).map_err(|e| Failure::Input(e.to_string()))?;
            let f = bivariate(parsed)?;
            let opts = TopOptions {
                seed: resolve_seed(common.seed),
                forced_shear: shear,
                forced_prime: prime,
                isolator: isolator_config(&common),
                ..TopOptions::default()
            };
            let t = topology(&f, &opts)?;
            match common.format {
                Format::Json => {
                    let vertices: Vec<_> = t
                        .vertices
                        .iter()
                        .map(|v| {
                            json!({
                                "x": [v.x.lo.to_string(), v.x.hi.to_string()],
                                "y": [v.y.lo.to_string(), v.y.hi.to_string()],
                                "multiplicity": v.multiplicity,
                            })
                        })
                        .collect();
                    println!(
                        "{}",
                        json!({
                            "vertices": vertices,
                            "edges": t.edges,
                            "components": t.components,
                            "cycles": t.cycles,
                            "shear_s": t.shear_s,
                            "prime": t.prime,
                        })
                    );
                }
                Format::Text => {
                    println!(
                        "vertices = {}, edges = {}, components = {}, cycles = {} (shear {}, prime {})",
                        t.vertices.len(),
                        t.edges.len(),
                        t.components,
                        t.cycles,
                        t.shear_s,
                        t.prime
                    );
                }
            }
            Ok(())
        }
        Cmd::Solve2 {
            g,
            h,
            shear,
            prime,
            common,
        } => {
            let gt = load_input(&g).map_err(Failure::Input)?;
            let ht = load_input(&h).map_err(Failure::Input)?;
            let gp = bivariate(parse_polynomial(gt.trim()).map_err(|e| Failure::Input(e.to_string()))?)?;
            let hp = bivariate(parse_polynomial(ht.trim()).map_err(|e| Failure::Input(e.to_string()))?)?;
            let opts = TopOptions {
                seed: resolve_seed(common.seed),
                forced_shear: shear,
                forced_prime: prime,
                isolator: isolator_config(&common),
                ..TopOptions::default()
            };
            let s = solve_system(&gp, &hp, &opts)?;
            match common.format {
                Format::Json => {
                    let solutions: Vec<_> = s
                        .boxes
                        .iter()
                        .map(|(x, y)| {
                            json!({
                                "x": [x.lo.to_string(), x.hi.to_string()],
                                "y": [y.lo.to_string(), y.hi.to_string()],
                            })
                        })
                        .collect();
                    println!("{}", json!({ "solutions": solutions }));
                }
                Format::Text => {
                    println!("{} solution(s)", s.boxes.len());
                    for (x, y) in &s.boxes {
                        println!("x in [{}, {}], y in [{}, {}]", x.lo, x.hi, y.lo, y.hi);
                    }
                }
            }
            Ok(())
        }
    }
}

/// Entry point for the `rootforge` binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version requests print and succeed; real errors exit 2
            let benign = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if benign { 0 } else { 2 };
        }
    };
    match run_inner(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}
