use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use odat::harness::{run, Branch, Command, GenFormat, RunConfig, SignalKind};
use odat::propagator::ExponentSign;
use odat::{Error, ErrorKind};

const EXIT_CONFIG: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

#[derive(Parser)]
#[command(
    name = "odat",
    version,
    about = "Orthogonal discrete auditory transform experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write DFT and ODAT spectra of the configured signal as CSV.
    Spectrum,
    /// Run the thresholding denoiser over the SNR grid and seeds.
    DenoiseSweep,
    /// Dump the spreading matrix and the real/imaginary parts of T_w.
    DumpMatrices,
    /// Write the configured signal to CSV or WAV.
    Gen {
        #[arg(long, value_enum, default_value = "csv")]
        format: GenFormat,
    },
}

#[derive(Args)]
struct Overrides {
    /// Flat TOML config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    fs: Option<f64>,
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    sigma1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    sigma2: Option<f64>,
    /// First noise seed of a sweep.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of consecutive seeds per SNR level.
    #[arg(long, global = true)]
    seeds: Option<usize>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    branch: Option<Branch>,
    #[arg(long, value_parser = parse_signal, global = true)]
    signal: Option<SignalKind>,
    /// WAV or CSV file for wav_slice / csv_slice signals.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[arg(long, global = true)]
    offset: Option<usize>,
    /// Use exp(-iH) instead of exp(+iH) for the time-one map.
    #[arg(long, global = true)]
    negative_exponent: bool,
}

fn parse_signal(s: &str) -> Result<SignalKind, String> {
    serde_json::from_value(serde_json::Value::String(s.replace('-', "_")))
        .map_err(|_| format!("unknown signal {s:?}; expected two_tone, harmonic, noise_burst, wav_slice or csv_slice"))
}

fn resolve(o: &Overrides) -> Result<RunConfig, Error> {
    let mut cfg = match &o.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    macro_rules! apply {
        ($($field:ident),*) => { $( if let Some(v) = o.$field.clone() { cfg.$field = v; } )* };
    }
    apply!(fs, n, sigma1, sigma2, seed, seeds, out, branch, signal, offset);
    if let Some(input) = &o.input {
        cfg.input = Some(input.clone());
    }
    if o.negative_exponent {
        cfg.sign = ExponentSign::Negative;
    }
    Ok(cfg)
}

fn exit_code(err: &Error) -> u8 {
    match err.kind() {
        ErrorKind::Config => EXIT_CONFIG,
        ErrorKind::Io => EXIT_IO,
        ErrorKind::Numerical => EXIT_NUMERICAL,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Spectrum => Command::Spectrum,
        Cmd::DenoiseSweep => Command::DenoiseSweep,
        Cmd::DumpMatrices => Command::DumpMatrices,
        Cmd::Gen { format } => Command::Gen(format),
    };
    let result = resolve(&cli.overrides).and_then(|cfg| run(&cfg, command));
    match result {
        Ok(artifacts) => {
            for a in artifacts {
                println!("{}: {}", a.path.display(), a.summary);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("odat: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
