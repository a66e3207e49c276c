//! Command-line front end: run fixture cases, compute single flag
//! curvatures, validate algebra constructions, and emit JSON reports.
//!
//! Exit codes: 0 when all verdicts match the expected outcome, 1 on a
//! verdict mismatch, 2 on input or configuration errors.

use clap::{Args, Parser, Subcommand};
use homfin::error::Error;
use homfin::fixtures::{fixture, CaseId, ALL_CASES};
use homfin::liealg::{self, INNER_PRODUCT_CONVENTION};
use homfin::norm::{LFunction, NormKind, NormShape};
use homfin::obstruct::{self, CaseReport, Verdict};
use homfin::report::{write_atomic, Report, RunConfig, Tolerances};
use homfin::rootsys::{build_root_system, Family};
use homfin::{coset, curvature, specfile};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Parser)]
#[command(
    name = "homfin",
    about = "Flag curvature and homogeneity obstructions for very standard Finsler metrics on compact coset spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Number of random norms to sample per case.
    #[arg(long, default_value_t = 5)]
    norms: usize,
    /// Number of flags for positivity sampling.
    #[arg(long, default_value_t = 200)]
    flags: usize,
    /// Seed for all random sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the machine-readable JSON report here (atomically).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Threshold below which curvatures and residuals count as zero.
    #[arg(long, default_value_t = 1e-9)]
    tolerance_zero: f64,
    /// Allowed deviation between closed-form and finite-difference Hessians.
    #[arg(long, default_value_t = 1e-5)]
    tolerance_hessian: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Run one built-in case and check its verdict.
    VerifyCase {
        /// Case id: C1..C5, AW_degenerate, sphere_SU, sphere_Sp.
        case: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Run every built-in case.
    VerifyAll {
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Compute the flag curvature of one commuting flag.
    Curvature {
        /// Case id or path to a space file.
        space: String,
        /// First flag vector, e.g. "u[2e1]" or "t[e1+e2-2e3]".
        #[arg(long)]
        y: String,
        /// Second flag vector.
        #[arg(long)]
        v: String,
        /// Path to a norm file; defaults to the normal metric.
        #[arg(long)]
        norm: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tolerance_zero: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a root system and compact real form and print its residuals.
    ValidateAlgebra {
        /// Family: A, C, or G2.
        family: String,
        /// Rank (ambient dimension is rank+1 for family A).
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Compute and print the isotropy decomposition of a space.
    Split {
        /// Case id or path to a space file.
        space: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::FixtureMismatch(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

/// Expected verdict for a built-in case.
fn expected_verdict(case: CaseId) -> Verdict {
    if fixture(case).obstruction.is_some() {
        Verdict::Obstructed
    } else {
        Verdict::PositivitySampled
    }
}

fn print_case_summary(r: &CaseReport, expected: Verdict) {
    let status = if r.verdict == expected { "ok" } else { "MISMATCH" };
    println!("case {}: {}", r.case_id, r.description);
    println!(
        "  summand dims {:?}, rank gap {}",
        r.summand_dims, r.rank_gap
    );
    println!("  norms tested: {}", r.norms_tested.len());
    match r.verdict {
        Verdict::Obstructed => {
            if let Some(c) = r.certificates.first() {
                println!(
                    "  obstructed: zero flag ({}, {}) certified for all norms (|K| <= {:.3e})",
                    c.y,
                    c.v,
                    r.certificates
                        .iter()
                        .map(|c| c.certificate.k.abs())
                        .fold(0.0_f64, f64::max)
                );
            }
            if let Some((y, v)) = &r.search_pair {
                println!("  search found pair ({y}, {v})");
            }
        }
        Verdict::PositivitySampled => {
            if let Some(p) = &r.positivity {
                println!(
                    "  positivity sampled: {} flags, min K = {:.6}, mean K = {:.6}",
                    p.n_flags_admissible,
                    p.min_k.unwrap_or(f64::NAN),
                    p.mean_k.unwrap_or(f64::NAN)
                );
            }
        }
        Verdict::Inconclusive => println!("  inconclusive"),
    }
    println!("  verdict: {:?} (expected {:?}) [{status}]", r.verdict, expected);
}

fn run(cmd: Command) -> Result<ExitCode, Error> {
    match cmd {
        Command::VerifyCase { case, opts } => {
            let case = CaseId::from_str(&case)?;
            let report = obstruct::verify_case(
                case,
                opts.norms,
                opts.flags,
                opts.seed,
                opts.tolerance_zero,
            )?;
            let expected = expected_verdict(case);
            print_case_summary(&report, expected);
            let ok = report.verdict == expected;
            emit_report(&opts, vec![report])?;
            Ok(ExitCode::from(if ok { 0 } else { 1 }))
        }
        Command::VerifyAll { opts } => {
            let mut ok = true;
            let mut reports = Vec::new();
            for case in ALL_CASES {
                let report = obstruct::verify_case(
                    case,
                    opts.norms,
                    opts.flags,
                    opts.seed,
                    opts.tolerance_zero,
                )?;
                let expected = expected_verdict(case);
                print_case_summary(&report, expected);
                ok &= report.verdict == expected;
                reports.push(report);
            }
            println!(
                "{}",
                if ok {
                    "all cases match expectations"
                } else {
                    "verdict mismatch"
                }
            );
            emit_report(&opts, reports)?;
            Ok(ExitCode::from(if ok { 0 } else { 1 }))
        }
        Command::Curvature {
            space,
            y,
            v,
            norm,
            tolerance_zero,
            out,
        } => {
            let split = load_split(&space)?;
            let lf = match norm {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)?;
                    specfile::parse_norm(&path.display().to_string(), &text)?
                        .realize(split.summand_dims())?
                }
                None => LFunction::new(
                    NormShape::Reversible,
                    NormKind::Diagonal {
                        coeffs: vec![1.0; split.num_summands()],
                    },
                    split.summand_dims(),
                )?,
            };
            let yv = specfile::parse_vector_spec(&split.algebra, &y)?;
            let vv = specfile::parse_vector_spec(&split.algebra, &v)?;
            let result = curvature::flag_curvature(&split, &lf, &yv, &vv, tolerance_zero)?;
            let json = serde_json::to_string_pretty(&result)
                .map_err(|e| Error::InvalidArgument(format!("serialization failed: {e}")))?;
            println!("K = {:.12}", result.k);
            println!(
                "commutator residual {:.3e}, pole residual {:.3e}",
                result.commutator_residual, result.pole_residual
            );
            if let Some(path) = out {
                write_atomic(&path, &(json + "\n"))?;
            } else {
                println!("{json}");
            }
            Ok(ExitCode::from(0))
        }
        Command::ValidateAlgebra { family, rank } => {
            let family = Family::from_str(&family)?;
            let rs = build_root_system(family, rank)?;
            let g = liealg::build_compact_algebra(&rs)?;
            println!("{} rank {}: dimension {}", family.as_str(), rank, g.dim);
            println!("convention: {INNER_PRODUCT_CONVENTION}");
            let jac = g.jacobi_residual();
            println!("jacobi residual: {jac:.3e}");
            let inv = g.ad_invariance_residual();
            println!("ad-invariance residual: {inv:.3e}");
            if let Ok(check) = g.classical_matrix_check() {
                println!(
                    "matrix-realization bracket residual: {:.3e}",
                    check.max_bracket_discrepancy
                );
            }
            if jac < 1e-9 && inv < 1e-9 {
                Ok(ExitCode::from(0))
            } else {
                Err(Error::FixtureMismatch(format!(
                    "residuals exceed 1e-9 (jacobi {jac:.3e}, invariance {inv:.3e})"
                )))
            }
        }
        Command::Split { space } => {
            let split = load_split(&space)?;
            println!(
                "dim m = {}, {} summands, rank gap {}",
                split.dim_m(),
                split.num_summands(),
                split.rank_gap()
            );
            for p in 0..split.num_summands() {
                println!("  m{}: {}", p + 1, split.summand_description(p));
            }
            println!(
                "invariance residual {:.3e}, pairwise-commuting residual {:.3e}",
                split.invariance_residual(),
                split.very_standard_residual()
            );
            let l4 = split.check_normalizer_structure()?;
            println!(
                "last-summand centralizer check: dim {} vs centralizer {} ({})",
                l4.ms_dim,
                l4.centralizer_dim,
                if l4.ok { "ok" } else { "FAILED" }
            );
            Ok(ExitCode::from(0))
        }
    }
}

fn load_split(space: &str) -> Result<coset::ReductiveSplit, Error> {
    if let Ok(case) = CaseId::from_str(space) {
        return obstruct::build_case_split(&fixture(case));
    }
    let text = std::fs::read_to_string(space)?;
    let spec = specfile::parse_space(space, &text)?;
    let rs = build_root_system(spec.family, spec.rank)?;
    let g = Arc::new(liealg::build_compact_algebra(&rs)?);
    let split = coset::reductive_split(g, &spec.subalgebra)?;
    if spec.expected_summands.is_empty() {
        Ok(split)
    } else {
        split.match_expected(&spec.expected_summands)
    }
}

fn emit_report(opts: &CommonOpts, cases: Vec<CaseReport>) -> Result<(), Error> {
    if let Some(path) = &opts.out {
        let report = Report::new(
            Tolerances {
                zero: opts.tolerance_zero,
                hessian: opts.tolerance_hessian,
            },
            RunConfig {
                norms: opts.norms,
                flags: opts.flags,
                seed: opts.seed,
            },
            cases,
        );
        write_atomic(path, &report.to_json()?)?;
        println!("report written to {}", path.display());
    }
    Ok(())
}
