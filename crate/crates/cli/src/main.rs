//! Command-line front end: builds congruence quotients, computes twisted
//! conjugacy partitions, runs distinctness certificates, and executes the
//! self-check suites. Exit codes: 0 success, 1 inconclusive certificate,
//! 2 usage error, 3 resource limit, 4 invalid automorphism, 5 verification
//! failure.

use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use twisted_conjugacy::automorphism::parse_automorphism_descriptor;
use twisted_conjugacy::error::Error;
use twisted_conjugacy::groups::{
    is_prime, parse_group_descriptor, prime_order_formula, FiniteMatrixGroup, GroupFamily,
    DEFAULT_ELEMENT_CAP,
};
use twisted_conjugacy::orbits::twisted_partition;
use twisted_conjugacy::suites::{run_suite, SuiteReport, SUITE_NAMES};
use twisted_conjugacy::witness::{CertifyOutcome, CertifySession, WitnessKind};

const ELEMENT_CAP_VAR: &str = "TCONJ_ELEMENT_CAP";

/// Append a line to the output buffer; everything is written to stdout in
/// one shot at the end so a closed pipe (e.g. `tconj ... | head`) never
/// panics mid-report.
macro_rules! outln {
    ($dst:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($dst, $($arg)*);
    }};
}

#[derive(Parser)]
#[command(
    name = "tconj",
    version,
    about = "Twisted conjugacy classes in integer matrix groups and their congruence quotients"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled (non-exhaustive) checks; printed in reports.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on enumerated group elements (overrides TCONJ_ELEMENT_CAP).
    #[arg(long, global = true)]
    element_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build a congruence quotient and report its order.
    Quotient {
        /// Group descriptor, e.g. sl:2:3, gl:2:3, sp:4:2.
        #[arg(long)]
        group: String,
    },
    /// Compute the twisted conjugacy partition and class count.
    Reidemeister {
        #[arg(long)]
        group: String,
        /// Automorphism descriptor: id, tau, sigma, theta, inner:<file>,
        /// chartwist:detsign, chartwist:<file>, or compositions joined
        /// with dots (applied right to left).
        #[arg(long)]
        aut: String,
    },
    /// Search listed moduli for a quotient separating two witnesses.
    Certify {
        /// Witness family: A, X, A_at(i,j) or X_at(i,j).
        #[arg(long)]
        family: String,
        #[arg(long)]
        aut: String,
        /// Matrix dimension.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        l: i64,
        /// Comma-separated moduli, tried in order.
        #[arg(long, value_delimiter = ',', required = true)]
        moduli: Vec<u64>,
        /// Ambient group kind (sl, gl, sp); default sp for theta twists,
        /// sl otherwise.
        #[arg(long)]
        group_kind: Option<String>,
    },
    /// Run a self-check suite.
    Verify {
        /// identities, lemmas, brauer, oracles, or all.
        #[arg(long)]
        suite: String,
    },
}

#[derive(Serialize)]
struct QuotientReport {
    group: String,
    order: usize,
    generators: usize,
    modulus: u64,
    modulus_is_prime: bool,
    formula_order: Option<u128>,
    formula_matches: Option<bool>,
}

#[derive(Serialize)]
struct InconclusiveReport {
    verdict: String,
    trials: Vec<twisted_conjugacy::witness::ModulusTrial>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let element_cap = cli.element_cap.unwrap_or_else(|| {
        std::env::var(ELEMENT_CAP_VAR)
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(DEFAULT_ELEMENT_CAP)
    });
    let mut out = String::new();
    let code = match run(&cli, element_cap, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    };
    use std::io::Write as _;
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(2);
        }
    }
    code
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit { .. } => 3,
        Error::InvalidAutomorphism(_) => 4,
        Error::Verification(_) => 5,
        _ => 2,
    }
}

fn run(cli: &Cli, element_cap: usize, out: &mut String) -> Result<ExitCode, Error> {
    match &cli.command {
        Command::Quotient { group } => cmd_quotient(cli, group, element_cap, out),
        Command::Reidemeister { group, aut } => {
            cmd_reidemeister(cli, group, aut, element_cap, out)
        }
        Command::Certify {
            family,
            aut,
            n,
            k,
            l,
            moduli,
            group_kind,
        } => cmd_certify(
            cli,
            family,
            aut,
            *n,
            *k,
            *l,
            moduli,
            group_kind.as_deref(),
            element_cap,
            out,
        ),
        Command::Verify { suite } => cmd_verify(cli, suite, element_cap, out),
    }
}

fn build_group(descriptor: &str, element_cap: usize) -> Result<FiniteMatrixGroup, Error> {
    let (family, modulus) = parse_group_descriptor(descriptor)?;
    FiniteMatrixGroup::build_quotient(&family, modulus, element_cap)
}

fn cmd_quotient(
    cli: &Cli,
    descriptor: &str,
    element_cap: usize,
    out: &mut String,
) -> Result<ExitCode, Error> {
    let (family, modulus) = parse_group_descriptor(descriptor)?;
    let group = FiniteMatrixGroup::build_quotient(&family, modulus, element_cap)?;
    let formula_order = if is_prime(modulus) {
        prime_order_formula(&family, modulus)
    } else {
        None
    };
    let report = QuotientReport {
        group: descriptor.to_string(),
        order: group.order(),
        generators: group.generator_indices().len(),
        modulus,
        modulus_is_prime: is_prime(modulus),
        formula_matches: formula_order.map(|f| f == group.order() as u128),
        formula_order,
    };
    match cli.format {
        Format::Json => outln!(out, "{}", serde_json::to_string_pretty(&report)?),
        Format::Text => {
            outln!(
                out,
                "group {}: order {}, {} generators",
                report.group,
                report.order,
                report.generators
            );
            match (report.formula_order, report.formula_matches) {
                (Some(f), Some(ok)) => outln!(
                    out,
                    "order formula: {f} ({})",
                    if ok { "matches" } else { "MISMATCH" }
                ),
                _ => outln!(out, "order formula: not applicable (modulus not prime)"),
            }
        }
    }
    if report.formula_matches == Some(false) {
        return Err(Error::Verification(
            "group order disagrees with the order formula".into(),
        ));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_reidemeister(
    cli: &Cli,
    descriptor: &str,
    aut: &str,
    element_cap: usize,
    out: &mut String,
) -> Result<ExitCode, Error> {
    let phi_int = parse_automorphism_descriptor(aut)?;
    let group = Arc::new(build_group(descriptor, element_cap)?);
    let phi = phi_int.induced_mod(group.modulus())?;
    let partition = twisted_partition(group, &phi, cli.seed)?;
    let report = partition.report(aut);
    match cli.format {
        Format::Json => outln!(out, "{}", serde_json::to_string_pretty(&report)?),
        Format::Text => {
            outln!(
                out,
                "group {}, automorphism {}: {} twisted classes (seed {})",
                report.group,
                report.automorphism,
                report.reidemeister_number,
                cli.seed
            );
            for class in &report.classes {
                outln!(
                    out,
                    "  class {}: size {}, representative {:?}",
                    class.id,
                    class.size,
                    class.representative
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_certify(
    cli: &Cli,
    family: &str,
    aut: &str,
    n: usize,
    k: i64,
    l: i64,
    moduli: &[u64],
    group_kind: Option<&str>,
    element_cap: usize,
    out: &mut String,
) -> Result<ExitCode, Error> {
    let kind = WitnessKind::parse(family)?;
    let phi = parse_automorphism_descriptor(aut)?;
    let ambient = match group_kind {
        Some("sl") => GroupFamily::special_linear(n)?,
        Some("gl") => GroupFamily::general_linear(n)?,
        Some("sp") => GroupFamily::symplectic(n)?,
        Some(other) => {
            return Err(Error::InvalidInput(format!(
                "unknown group kind {other:?} (expected sl, gl or sp)"
            )))
        }
        None if aut.split('.').any(|t| t == "theta") => GroupFamily::symplectic(n)?,
        None => GroupFamily::special_linear(n)?,
    };
    let mut session = CertifySession::new(ambient, phi, aut, element_cap, cli.seed);
    match session.certify_pair(kind, k, l, moduli)? {
        CertifyOutcome::Distinct(cert) => {
            match cli.format {
                Format::Json => outln!(out, "{}", serde_json::to_string_pretty(&cert)?),
                Format::Text => outln!(
                    out,
                    "distinct: {} witnesses k={} and l={} separate mod {} \
                     (classes {} and {}, group kind {})",
                    cert.family,
                    cert.k,
                    cert.l,
                    cert.modulus,
                    cert.class_ids[0],
                    cert.class_ids[1],
                    ambient.kind().token()
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        CertifyOutcome::Inconclusive(trials) => {
            match cli.format {
                Format::Json => {
                    let report = InconclusiveReport {
                        verdict: "inconclusive".into(),
                        trials,
                    };
                    outln!(out, "{}", serde_json::to_string_pretty(&report)?);
                }
                Format::Text => {
                    outln!(out, "inconclusive: no listed modulus separated the pair");
                    for trial in trials {
                        outln!(out, "  modulus {}: {}", trial.modulus, trial.note);
                    }
                }
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_verify(
    cli: &Cli,
    suite: &str,
    element_cap: usize,
    out: &mut String,
) -> Result<ExitCode, Error> {
    let names: Vec<&str> = if suite == "all" {
        SUITE_NAMES.to_vec()
    } else {
        vec![suite]
    };
    let mut reports: Vec<SuiteReport> = Vec::new();
    for name in names {
        reports.push(run_suite(name, cli.seed, element_cap)?);
    }
    let all_passed = reports.iter().all(|r| r.passed);
    match cli.format {
        Format::Json => outln!(out, "{}", serde_json::to_string_pretty(&reports)?),
        Format::Text => {
            for report in &reports {
                outln!(out, "suite {} (seed {})", report.suite, report.seed);
                for check in &report.checks {
                    outln!(
                        out,
                        "  [{}] {} ({})",
                        if check.passed { "PASS" } else { "FAIL" },
                        check.name,
                        check.detail
                    );
                }
            }
        }
    }
    if all_passed {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(5))
    }
}
