//! Command-line front end: decompose, verify, halmos, campaign.
//!
//! Exit codes: 0 success, 1 check failure, 2 input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cleanmat::{
    almost_star_clean, almost_star_clean_blocks, clean_decompose, clean_decompose_blocks,
    decompose_pair, run_campaign, verify_certificate, BlockOperator64, CampaignConfig,
    CleanCertificate64, Matrix64, Projection64, ToleranceProfile64,
};

#[derive(Parser)]
#[command(
    name = "cleanmat",
    about = "Certified clean and almost-*-clean decompositions of complex matrices",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DecomposeKind {
    /// Idempotent summand with the certified inverse-norm bound 4.
    Clean,
    /// Projection summand with a measured inverse norm.
    AlmostStar,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose an element into invertible + idempotent (or projection).
    Decompose {
        /// Matrix JSON or block-operator JSON.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "clean")]
        kind: DecomposeKind,
        /// Certificate JSON destination.
        #[arg(long)]
        output: PathBuf,
        /// Tolerance-profile JSON; per-dimension defaults when omitted.
        #[arg(long)]
        tol_profile: Option<PathBuf>,
    },
    /// Re-verify a certificate against its element.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        tol_profile: Option<PathBuf>,
    },
    /// Two-projections decomposition of a pair of projections.
    Halmos {
        #[arg(long)]
        e: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        tol_profile: Option<PathBuf>,
    },
    /// Run a property campaign from a config file.
    Campaign {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
}

/// Input problems exit with 2, failed checks with 1.
enum CliError {
    Input(String),
    Check(String),
}

impl CliError {
    fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

type CliResult = Result<(), CliError>;

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| {
        CliError::input(format!(
            "{}: line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::input(format!("serialization failed: {e}")))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))
}

enum Element {
    Matrix(Matrix64),
    Block(BlockOperator64),
}

fn load_element(path: &Path) -> Result<Element, CliError> {
    let text = read_file(path)?;
    let value: serde_json::Value = parse_json(path, &text)?;
    if value.get("blocks").is_some() {
        let b: BlockOperator64 = parse_json(path, &text)?;
        Ok(Element::Block(b))
    } else {
        let m: Matrix64 = parse_json(path, &text)?;
        Ok(Element::Matrix(m))
    }
}

fn load_profile(path: &Option<PathBuf>) -> Result<Option<ToleranceProfile64>, CliError> {
    match path {
        None => Ok(None),
        Some(p) => {
            let text = read_file(p)?;
            let profile: ToleranceProfile64 = parse_json(p, &text)?;
            profile
                .validate()
                .map_err(|e| CliError::input(format!("{}: {e}", p.display())))?;
            Ok(Some(profile))
        }
    }
}

fn profile_for(dim: usize, explicit: &Option<ToleranceProfile64>) -> ToleranceProfile64 {
    explicit.unwrap_or_else(|| ToleranceProfile64::for_dim(dim))
}

fn summarize(cert: &CleanCertificate64) -> String {
    let bound = cert
        .claimed_bound
        .map(|b| format!("{b}"))
        .unwrap_or_else(|| "none".into());
    format!(
        "kind {:?}: inverse_norm {:.12}, claimed_bound {}, idempotency residual {:.3e}, lambda {:.12}",
        cert.kind, cert.inverse_norm, bound, cert.idempotency_residual, cert.lambda
    )
}

fn cmd_decompose(
    input: &Path,
    kind: DecomposeKind,
    output: &Path,
    tol_profile: &Option<PathBuf>,
) -> CliResult {
    let explicit = load_profile(tol_profile)?;
    match load_element(input)? {
        Element::Matrix(t) => {
            let profile = profile_for(t.dim(), &explicit);
            let cert = match kind {
                DecomposeKind::Clean => clean_decompose(&t, &profile),
                DecomposeKind::AlmostStar => almost_star_clean(&t, &profile),
            }
            .map_err(|e| CliError::Check(format!("decomposition failed: {e}")))?;
            println!("{}", summarize(&cert));
            write_json(output, &cert)
        }
        Element::Block(b) => {
            let certs = match kind {
                DecomposeKind::Clean => clean_decompose_blocks(&b, explicit.as_ref()),
                DecomposeKind::AlmostStar => almost_star_clean_blocks(&b, explicit.as_ref()),
            }
            .map_err(|e| CliError::Check(format!("decomposition failed: {e}")))?;
            let worst = certs
                .iter()
                .map(|c| c.inverse_norm)
                .fold(f64::NEG_INFINITY, f64::max);
            for (i, c) in certs.iter().enumerate() {
                println!("block {i}: {}", summarize(c));
            }
            println!("aggregate inverse_norm over blocks: {worst:.12}");
            write_json(output, &serde_json::json!({ "blocks": certs }))
        }
    }
}

fn cmd_verify(input: &Path, cert: &Path, tol_profile: &Option<PathBuf>) -> CliResult {
    let explicit = load_profile(tol_profile)?;
    let cert_text = read_file(cert)?;
    match load_element(input)? {
        Element::Matrix(t) => {
            let c: CleanCertificate64 = parse_json(cert, &cert_text)?;
            let report = verify_certificate(&t, &c, &profile_for(t.dim(), &explicit));
            println!("{report}");
            if report.passed {
                Ok(())
            } else {
                let failed: Vec<&str> = report
                    .checks
                    .iter()
                    .filter(|ch| !ch.passed)
                    .map(|ch| ch.name.as_str())
                    .collect();
                Err(CliError::Check(format!(
                    "certificate verification failed: {}",
                    failed.join(", ")
                )))
            }
        }
        Element::Block(b) => {
            #[derive(serde::Deserialize)]
            struct BlockCerts {
                blocks: Vec<CleanCertificate64>,
            }
            let cs: BlockCerts = parse_json(cert, &cert_text)?;
            if cs.blocks.len() != b.blocks().len() {
                return Err(CliError::input(format!(
                    "certificate has {} blocks, element has {}",
                    cs.blocks.len(),
                    b.blocks().len()
                )));
            }
            let mut all_ok = true;
            for (i, (block, c)) in b.blocks().iter().zip(&cs.blocks).enumerate() {
                let report = verify_certificate(block, c, &profile_for(block.dim(), &explicit));
                println!("block {i}:\n{report}");
                all_ok &= report.passed;
            }
            if all_ok {
                Ok(())
            } else {
                Err(CliError::Check("block certificate verification failed".into()))
            }
        }
    }
}

fn cmd_halmos(e: &Path, f: &Path, output: &Path, tol_profile: &Option<PathBuf>) -> CliResult {
    let explicit = load_profile(tol_profile)?;
    let e_text = read_file(e)?;
    let em: Matrix64 = parse_json(e, &e_text)?;
    let f_text = read_file(f)?;
    let fm: Matrix64 = parse_json(f, &f_text)?;
    let profile = profile_for(em.dim(), &explicit);
    let ep = Projection64::try_new(em, &profile)
        .map_err(|err| CliError::input(format!("{}: {err}", e.display())))?;
    let fp = Projection64::try_new(fm, &profile)
        .map_err(|err| CliError::input(format!("{}: {err}", f.display())))?;
    let pd = decompose_pair(&ep, &fp, &profile)
        .map_err(|err| CliError::Check(format!("pair decomposition failed: {err}")))?;
    println!(
        "meets: E^F rank {}, E^F' rank {}, E'^F rank {}, E'^F' rank {}; generic unit rank {}",
        pd.meet_ef.rank(),
        pd.meet_efp.rank(),
        pd.meet_epf.rank(),
        pd.meet_epfp.rank(),
        pd.generic_unit.rank()
    );
    write_json(output, &pd)
}

fn cmd_campaign(config: &Path, report_path: &Path) -> CliResult {
    let text = read_file(config)?;
    let cfg: CampaignConfig<f64> = parse_json(config, &text)?;
    cfg.validate()
        .map_err(|e| CliError::input(format!("{}: {e}", config.display())))?;
    let report = run_campaign(&cfg).map_err(|e| CliError::Check(format!("campaign failed: {e}")))?;
    println!("{report}");
    write_json(report_path, &report)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Check(format!(
            "{} campaign check(s) failed",
            report.failures.len()
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Decompose {
            input,
            kind,
            output,
            tol_profile,
        } => cmd_decompose(input, *kind, output, tol_profile),
        Command::Verify {
            input,
            cert,
            tol_profile,
        } => cmd_verify(input, cert, tol_profile),
        Command::Halmos {
            e,
            f,
            output,
            tol_profile,
        } => cmd_halmos(e, f, output, tol_profile),
        Command::Campaign { config, report } => cmd_campaign(config, report),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
