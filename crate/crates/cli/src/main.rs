use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hlmoments_cli::commands::{
    cmd_conjecture2, cmd_correlations, cmd_identity_suite, cmd_moments, cmd_report, cmd_s0,
    cmd_sieve, cmd_singular,
};
use hlmoments_cli::{CliError, CliResult, RunConfig};

#[derive(Parser)]
#[command(
    name = "hlmoments",
    version,
    about = "Primes in short intervals: moments, singular series, k-tuple error terms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Command {
    /// Write PKML sieve segments covering [1, --n] into --cache-dir
    Sieve,
    /// Empirical M_K(N;H) against the Gaussian main term (moments.csv)
    Moments,
    /// Singular series of --tuple as JSON
    Singular,
    /// Centred singular series of --tuple as JSON
    S0,
    /// Correlation sums and error terms of --tuple at x = --n
    Correlations,
    /// Mean-square tuple error over an x-grid (conjecture2.csv)
    Conjecture2,
    /// Exact identity checks; exit status 1 on any failure
    #[command(alias = "identity-suite")]
    ExpansionCheck,
    /// Moments, conjecture-2 data and gnuplot script into the --out directory
    Report,
}

#[derive(Args)]
struct Flags {
    #[arg(long, global = true)]
    n: Option<u64>,
    /// Interval length(s), comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    h: Option<Vec<u64>>,
    /// Moment order(s) or tuple size, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    k: Option<Vec<u32>>,
    #[arg(long, global = true)]
    kmax: Option<u32>,
    /// Comma-separated offsets, e.g. 0,2,6
    #[arg(long, global = true, allow_hyphen_values = true)]
    tuple: Option<String>,
    #[arg(long, global = true)]
    pmax: Option<u64>,
    #[arg(long = "x-min", global = true)]
    x_min: Option<u64>,
    #[arg(long = "x-max", global = true)]
    x_max: Option<u64>,
    #[arg(long = "x-points", global = true)]
    x_points: Option<usize>,
    #[arg(long = "cache-dir", global = true)]
    cache_dir: Option<PathBuf>,
    /// Output file (`-` for stdout) or, for `report`, output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long = "segment-length", global = true)]
    segment_length: Option<usize>,
    /// JSON config file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl Flags {
    fn into_config(self) -> CliResult<RunConfig> {
        let base = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let cfg = base.overlay(RunConfig {
            n: self.n,
            h: self.h,
            k: self.k,
            kmax: self.kmax,
            tuple: self.tuple,
            pmax: self.pmax,
            x_min: self.x_min,
            x_max: self.x_max,
            x_points: self.x_points,
            cache_dir: self.cache_dir,
            out: self.out,
            threads: self.threads,
            segment_length: self.segment_length,
        });
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(out: Option<&Path>, default: Option<&str>, text: &str) -> CliResult<()> {
    let target = out
        .map(Path::to_path_buf)
        .or_else(|| default.map(PathBuf::from));
    match target {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::write(&p, text)?;
            eprintln!("wrote {}", p.display());
        }
        _ => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = cli.flags.into_config()?;
    let out = cfg.out.as_deref();
    match cli.command {
        Command::Sieve => {
            let s = cmd_sieve(&cfg)?;
            println!(
                "segments written: {}, regenerated: {}, already valid: {}",
                s.written, s.regenerated, s.skipped
            );
        }
        Command::Moments => emit(out, Some("moments.csv"), &cmd_moments(&cfg)?)?,
        Command::Singular => emit(out, None, &cmd_singular(&cfg)?)?,
        Command::S0 => emit(out, None, &cmd_s0(&cfg)?)?,
        Command::Correlations => emit(out, None, &cmd_correlations(&cfg)?)?,
        Command::Conjecture2 => emit(out, Some("conjecture2.csv"), &cmd_conjecture2(&cfg)?)?,
        Command::ExpansionCheck => {
            let report = cmd_identity_suite(&cfg)?;
            for line in &report.lines {
                println!("{line}");
            }
            if !report.passed {
                return Err(CliError::IdentityFailure);
            }
        }
        Command::Report => {
            let dir = out.unwrap_or(Path::new("report"));
            for f in cmd_report(&cfg, dir)? {
                eprintln!("wrote {}", dir.join(f).display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
