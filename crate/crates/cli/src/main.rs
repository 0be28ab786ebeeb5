use clap::{Args, Parser, Subcommand};
use rec_cli::commands::{cmd_decode, cmd_encode, CliError};
use rec_cli::container::MechanismSpec;
use rec_cli::verify::{Fault, VerifyOptions};
use rec_cli::{bench, parse_mechanism, verify};
use rec_core::harness::{format_table, to_csv, CsvRow};
use rec_core::{Budget, CodecKind};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "rec",
    about = "Relative entropy coding: encode exact conditional samples with shared randomness",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MechanismArgs {
    /// Mechanism family: categorical | gaussian | uniform-additive
    #[arg(long)]
    mechanism: String,
    /// Comma-separated mechanism parameters (see `rec encode --help`)
    #[arg(long, default_value = "")]
    params: String,
}

#[derive(Subcommand)]
enum Command {
    /// Encode newline-separated decimal records into a container file
    Encode {
        #[command(flatten)]
        mechanism: MechanismArgs,
        /// Coding algorithm: rejection | pfr | dq | lq
        #[arg(long)]
        codec: String,
        /// Shared randomness seed; travels in the container header
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Proposal cap for the selection codecs
        #[arg(long)]
        budget: Option<u64>,
        /// On budget exhaustion return the best candidate instead of failing
        /// (approximate sampling; the output law degrades unreported)
        #[arg(long)]
        approximate: bool,
        /// Permit unlimited budgets on the gaussian mechanism, whose
        /// expected selection runtime is infinite
        #[arg(long)]
        allow_unlimited: bool,
        /// Input record file
        input: PathBuf,
        /// Output container path
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Decode a container file back into records
    Decode {
        /// Input container
        input: PathBuf,
        /// Output record file
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run the verification suites; exit 0 iff every check passes
    Verify {
        /// Run only suites whose name contains this string
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Write per-check results as CSV
        #[arg(long)]
        out: Option<PathBuf>,
        /// Inject a deliberate defect (biased-uniform) to confirm the
        /// suite catches it
        #[arg(long)]
        inject_fault: Option<String>,
    },
    /// Sweep mechanisms x codecs and report rates, steps, and wall time
    Bench {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Records per sweep cell
        #[arg(long, default_value_t = 2000)]
        trials: usize,
        /// Proposal cap for selection codecs on the gaussian mechanism
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Write the sweep as CSV
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn selection_budget(
    spec: &MechanismSpec,
    codec: CodecKind,
    budget: Option<u64>,
    approximate: bool,
    allow_unlimited: bool,
) -> Result<Budget, CliError> {
    let mut b = match budget {
        Some(steps) => Budget::limited(steps),
        None => {
            let selection = matches!(codec, CodecKind::Rejection | CodecKind::Pfr);
            if selection && matches!(spec, MechanismSpec::Gaussian { .. }) && !allow_unlimited {
                return Err(CliError::Format(
                    "selection codecs on the gaussian mechanism need --budget (or --allow-unlimited): \
                     the expected uncapped runtime is infinite"
                        .into(),
                ));
            }
            Budget::unlimited()
        }
    };
    if approximate {
        b = b.with_approximation();
    }
    Ok(b)
}

fn run() -> Result<(), CliError> {
    match Cli::parse().command {
        Command::Encode {
            mechanism,
            codec,
            seed,
            budget,
            approximate,
            allow_unlimited,
            input,
            out,
        } => {
            let spec = parse_mechanism(&mechanism.mechanism, &mechanism.params)?;
            let codec = CodecKind::parse(&codec)
                .ok_or_else(|| CliError::Format(format!("unknown codec {codec:?}")))?;
            let budget = selection_budget(&spec, codec, budget, approximate, allow_unlimited)?;
            cmd_encode(&spec, codec, seed, budget, &input, &out)
        }
        Command::Decode { input, out } => cmd_decode(&input, &out),
        Command::Verify {
            suite,
            seed,
            out,
            inject_fault,
        } => {
            let fault = match inject_fault.as_deref() {
                None => None,
                Some(name) => Some(Fault::parse(name).ok_or_else(|| {
                    CliError::Format(format!(
                        "unknown fault {name:?}; available: biased-uniform"
                    ))
                })?),
            };
            let results = verify::run(&VerifyOptions { seed, suite, fault });
            if results.is_empty() {
                return Err(CliError::Format("no suite matches the filter".into()));
            }
            let mut failures = 0;
            for r in &results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                println!(
                    "[{status}] {:<18} {} (value {:.6}, threshold {:.6}, n={})",
                    r.suite, r.check, r.value, r.threshold, r.n
                );
                if !r.pass {
                    failures += 1;
                }
            }
            println!(
                "{} of {} checks passed",
                results.len() - failures,
                results.len()
            );
            if let Some(path) = out {
                let mut csv = String::from("suite,check,value,threshold,pass,n\n");
                for r in &results {
                    csv.push_str(&format!(
                        "{},\"{}\",{},{},{},{}\n",
                        r.suite, r.check, r.value, r.threshold, r.pass, r.n
                    ));
                }
                std::fs::write(&path, csv)
                    .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
            }
            if failures > 0 {
                return Err(CliError::Verification(failures));
            }
            Ok(())
        }
        Command::Bench {
            seed,
            trials,
            budget,
            out,
        } => {
            let rows: Vec<CsvRow> = bench::run(&bench::BenchOptions {
                seed,
                trials,
                gaussian_budget: budget,
            });
            print!("{}", format_table(&rows));
            if let Some(path) = out {
                std::fs::write(&path, to_csv(&rows))
                    .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
