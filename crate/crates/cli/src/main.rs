//! Command line interface over the parabolic bundle calculus.
//!
//! Objects come from a workspace JSON file; every command writes canonical
//! JSON (rationals as "p/q" in lowest terms) to standard output or to
//! `--output`. Exit codes: 0 on success, 1 on a domain error or failed
//! verification trial, 2 on a usage error.

// Failures wrap the library error, which keeps exact diagnostics inline; the
// error path is cold, so the variant size is fine.
#![allow(clippy::result_large_err)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use parabolic_core::galois::galois_closure_data_with_cap;
use parabolic_core::generate::{random_bundle, random_covering};
use parabolic_core::{
    classify, direct_image, pullback, run_suite, verify_decomposition, DecompositionReport, Error,
    ParabolicBundle, Rat, SideComparison, SuiteReport, Workspace, DEFAULT_GROUP_CAP, SUITES,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "parabolic",
    version,
    about = "Exact calculus for parabolic vector bundles on marked curves"
)]
struct Cli {
    /// Workspace JSON file holding named curves, coverings and bundles
    #[arg(long, global = true, value_name = "FILE")]
    workspace: Option<PathBuf>,

    /// Write the command's JSON to this file instead of standard output
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    /// Master seed for randomized commands
    #[arg(long, global = true, value_name = "INT")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parabolic degree of a bundle
    Pardeg {
        #[arg(long)]
        bundle: String,
    },
    /// Parabolic slope of a bundle
    Slope {
        #[arg(long)]
        bundle: String,
    },
    /// Harder-Narasimhan spectrum with the extremal slopes
    Hn {
        #[arg(long)]
        bundle: String,
    },
    /// Ample, nef, anti-ample and anti-nef verdicts
    Classify {
        #[arg(long)]
        bundle: String,
    },
    /// Parabolic dual
    Dual {
        #[arg(long)]
        bundle: String,
        /// Name for the result bundle
        #[arg(long)]
        name: Option<String>,
    },
    /// Direct sum of two bundles (pass --bundle twice)
    Sum {
        #[arg(long = "bundle", value_name = "BUNDLE")]
        bundles: Vec<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Tensor product of two bundles (pass --bundle twice)
    Tensor {
        #[arg(long = "bundle", value_name = "BUNDLE")]
        bundles: Vec<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Symmetric power
    Sym {
        #[arg(long)]
        bundle: String,
        #[arg(short = 'k', long = "power")]
        power: u64,
        #[arg(long)]
        name: Option<String>,
    },
    /// Pullback of a bundle on the target curve along a covering
    Pullback {
        #[arg(long)]
        covering: String,
        #[arg(long)]
        bundle: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Direct image of a bundle on the source curve along a covering
    Pushforward {
        #[arg(long)]
        covering: String,
        #[arg(long)]
        bundle: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Galois closure of a covering, optionally with the direct-image
    /// decomposition report for a bundle on its source
    Galois {
        #[arg(long)]
        covering: String,
        #[arg(long)]
        bundle: Option<String>,
    },
    /// Run a randomized verification suite ("all" runs every suite)
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
    },
    /// Generate a deterministic random workspace: one covering plus a
    /// bundle on each of its curves
    Generate,
}

enum Failure {
    Usage(String),
    Domain(Error),
    Trials(u64),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Trials(n)) => {
            eprintln!("error: {n} verification trial(s) failed");
            ExitCode::from(1)
        }
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Domain(Error::from(e))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_value(out: &Option<PathBuf>, value: Value) -> Result<(), Failure> {
    emit(out, &format!("{value}\n"))
}

fn load_workspace(path: &Option<PathBuf>) -> Result<Workspace, Failure> {
    let path = path
        .as_ref()
        .ok_or_else(|| Failure::Usage("this command needs --workspace <FILE>".to_string()))?;
    Ok(Workspace::load(path)?)
}

fn emit_result_bundle(
    out: &Option<PathBuf>,
    name: &str,
    bundle: ParabolicBundle,
) -> Result<(), Failure> {
    let mut ws = Workspace::new();
    ws.insert_bundle(name, bundle)?;
    emit(out, &ws.to_json())
}

fn two_bundles(bundles: &[String]) -> Result<(&str, &str), Failure> {
    match bundles {
        [a, b] => Ok((a, b)),
        _ => Err(Failure::Usage(
            "pass --bundle exactly twice to pick both operands".to_string(),
        )),
    }
}

fn group_cap() -> Result<usize, Failure> {
    match std::env::var("PARABOLIC_CAP") {
        Ok(text) => text.trim().parse().map_err(|_| {
            Failure::Usage(format!(
                "PARABOLIC_CAP must be a positive integer, got {text:?}"
            ))
        }),
        Err(_) => Ok(DEFAULT_GROUP_CAP),
    }
}

fn side_json(side: &SideComparison) -> Value {
    json!({
        "lhs_rank": side.lhs_rank,
        "rhs_rank": side.rhs_rank,
        "lhs_par_deg": side.lhs_par_deg.to_string(),
        "rhs_par_deg": side.rhs_par_deg.to_string(),
        "matches": side.matches,
    })
}

fn decomposition_json(report: &DecompositionReport) -> Value {
    json!({
        "gamma_order": report.gamma_order,
        "stabilizer_order": report.stabilizer_order,
        "transversal_size": report.transversal_size,
        "left_cosets": report.left_cosets,
        "right_cosets": report.right_cosets,
        "transversal_meets_stabilizer_trivially": report.transversal_meets_stabilizer_trivially,
        "invariant_rank_matches": report.invariant_rank_matches,
        "regular_side": side_json(&report.regular_side),
        "induced_side": side_json(&report.induced_side),
        "spectra_match": report.spectra_match,
        "galois": report.f_is_galois,
        "ok": report.ok,
    })
}

fn report_json(report: &SuiteReport) -> Value {
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| {
            let minimized = f
                .minimized
                .as_ref()
                .map(|m| serde_json::from_str(m).unwrap_or_else(|_| Value::String(m.clone())))
                .unwrap_or(Value::Null);
            json!({
                "trial": f.trial,
                "seed": f.seed,
                "detail": f.detail,
                "minimized": minimized,
            })
        })
        .collect();
    json!({
        "suite": report.suite,
        "trials": report.trials,
        "passed": report.passed,
        "elapsed_ms": report.elapsed_ms as u64,
        "failures": failures,
    })
}

fn run(cli: Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Pardeg { bundle } => {
            let ws = load_workspace(&cli.workspace)?;
            let v = ws.bundle(bundle)?;
            emit_value(&cli.output, json!({"par_deg": v.par_deg().to_string()}))
        }
        Command::Slope { bundle } => {
            let ws = load_workspace(&cli.workspace)?;
            let v = ws.bundle(bundle)?;
            emit_value(&cli.output, json!({"par_slope": v.par_slope().to_string()}))
        }
        Command::Hn { bundle } => {
            let ws = load_workspace(&cli.workspace)?;
            let v = ws.bundle(bundle)?;
            let spectrum: Vec<Value> = v
                .hn_spectrum()
                .graded()
                .iter()
                .map(|piece| {
                    let slope = piece.par_degree().clone() / Rat::from(piece.rank());
                    json!({
                        "rank": piece.rank(),
                        "par_degree": piece.par_degree().to_string(),
                        "slope": slope.to_string(),
                    })
                })
                .collect();
            emit_value(
                &cli.output,
                json!({
                    "spectrum": spectrum,
                    "mu_min": v.mu_min().to_string(),
                    "mu_max": v.mu_max().to_string(),
                    "d_min": v.d_min().to_string(),
                }),
            )
        }
        Command::Classify { bundle } => {
            let ws = load_workspace(&cli.workspace)?;
            let verdict = classify(ws.bundle(bundle)?);
            emit_value(
                &cli.output,
                json!({
                    "ample": verdict.ample,
                    "nef": verdict.nef,
                    "anti_ample": verdict.anti_ample,
                    "anti_nef": verdict.anti_nef,
                    "mu_min": verdict.mu_min.to_string(),
                    "mu_max": verdict.mu_max.to_string(),
                }),
            )
        }
        Command::Dual { bundle, name } => {
            let ws = load_workspace(&cli.workspace)?;
            let result = ws.bundle(bundle)?.dual();
            let name = name.clone().unwrap_or_else(|| format!("{bundle}_dual"));
            emit_result_bundle(&cli.output, &name, result)
        }
        Command::Sum { bundles, name } => {
            let ws = load_workspace(&cli.workspace)?;
            let (a, b) = two_bundles(bundles)?;
            let result = ws.bundle(a)?.direct_sum(ws.bundle(b)?)?;
            let name = name.clone().unwrap_or_else(|| format!("{a}_plus_{b}"));
            emit_result_bundle(&cli.output, &name, result)
        }
        Command::Tensor { bundles, name } => {
            let ws = load_workspace(&cli.workspace)?;
            let (a, b) = two_bundles(bundles)?;
            let result = ws.bundle(a)?.tensor(ws.bundle(b)?)?;
            let name = name.clone().unwrap_or_else(|| format!("{a}_tensor_{b}"));
            emit_result_bundle(&cli.output, &name, result)
        }
        Command::Sym {
            bundle,
            power,
            name,
        } => {
            let ws = load_workspace(&cli.workspace)?;
            let result = ws.bundle(bundle)?.sym_power(*power)?;
            let name = name.clone().unwrap_or_else(|| format!("{bundle}_sym{power}"));
            emit_result_bundle(&cli.output, &name, result)
        }
        Command::Pullback {
            covering,
            bundle,
            name,
        } => {
            let ws = load_workspace(&cli.workspace)?;
            let result = pullback(ws.covering(covering)?, ws.bundle(bundle)?)?;
            let name = name.clone().unwrap_or_else(|| format!("{bundle}_pullback"));
            emit_result_bundle(&cli.output, &name, result)
        }
        Command::Pushforward {
            covering,
            bundle,
            name,
        } => {
            let ws = load_workspace(&cli.workspace)?;
            let result = direct_image(ws.covering(covering)?, ws.bundle(bundle)?)?;
            let name = name
                .clone()
                .unwrap_or_else(|| format!("{bundle}_pushforward"));
            emit_result_bundle(&cli.output, &name, result)
        }
        Command::Galois { covering, bundle } => {
            let ws = load_workspace(&cli.workspace)?;
            let f = ws.covering(covering)?;
            let closure = galois_closure_data_with_cap(f, group_cap()?)?;
            let mut doc = json!({
                "covering": covering,
                "degree": f.degree(),
                "group_order": closure.group_order(),
                "stabilizer_order": closure.stabilizer_order(),
                "left_cosets": closure.left_coset_count(),
                "right_cosets": closure.right_coset_count(),
                "transversal_size": closure.transversal_size(),
                "galois": closure.f_is_galois(),
                "closure_curve": {
                    "name": closure.z_curve().name(),
                    "genus": closure.z_curve().genus(),
                    "points": closure.z_curve().point_count(),
                },
                "closure_degree": closure.h().degree(),
                "complement_degree": closure.g().degree(),
            });
            if let Some(bundle) = bundle {
                let report = verify_decomposition(&closure, ws.bundle(bundle)?)?;
                doc["decomposition"] = decomposition_json(&report);
            }
            emit_value(&cli.output, doc)
        }
        Command::Verify { suite, trials } => {
            let seed = cli.seed.unwrap_or(0);
            let names: Vec<&str> = if suite == "all" {
                SUITES.to_vec()
            } else {
                vec![suite.as_str()]
            };
            let mut reports = Vec::new();
            let mut failed = 0u64;
            for name in names {
                let report = run_suite(name, seed, *trials)?;
                failed += report.failures.len() as u64;
                reports.push(report_json(&report));
            }
            emit_value(
                &cli.output,
                json!({"reports": reports, "ok": failed == 0}),
            )?;
            if failed > 0 {
                return Err(Failure::Trials(failed));
            }
            Ok(())
        }
        Command::Generate => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed.unwrap_or(0));
            let covering = random_covering(&mut rng, "Y", "X", 5);
            let on_source = random_bundle(&mut rng, covering.source());
            let on_target = random_bundle(&mut rng, covering.target());
            let mut ws = Workspace::new();
            ws.insert_covering("f", covering)?;
            ws.insert_bundle("V", on_source)?;
            ws.insert_bundle("E", on_target)?;
            emit(&cli.output, &ws.to_json())
        }
    }
}
