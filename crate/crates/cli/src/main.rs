//! `ifsf`: analyses, reports and images for grid IFS measures.
//!
//! Exit codes: 0 success, 1 input error, 2 budget exceeded, 3 failed check
//! in `diagnose`.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Thread count override for the internal parallelism.
const THREADS_ENV: &str = "IFSF_THREADS";

#[derive(Parser, Debug)]
#[command(name = "ifsf", version, about = "Fourier analysis of grid IFS measures on the unit square")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    knobs: Knobs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and check a spec file.
    Validate { spec: PathBuf },
    /// Row and column counts, marginal weights, gamma and xi statistics.
    Stats { spec: PathBuf },
    /// Hausdorff dimension of the attractor.
    Dim { spec: PathBuf },
    /// Admissibility verdict with the full criterion trace.
    Classify { spec: PathBuf },
    /// Affinity of a marginal against Lebesgue measure and its product curve.
    Kakutani { spec: PathBuf },
    /// Frostman pair of a marginal, checked on random intervals.
    Frostman { spec: PathBuf },
    /// Transform values with certified error bounds.
    Moments { spec: PathBuf },
    /// Exact raster of rectangle measures as PGM.
    Render { spec: PathBuf },
    /// Seeded samples of the invariant measure.
    Sample { spec: PathBuf },
    /// Kaczmarz expansion of `exp(2 pi i k x)` over a marginal.
    Expand1d { spec: PathBuf },
    /// Double series expansion of `exp(2 pi i (k x + l y))`.
    Expand2d { spec: PathBuf },
    /// Frame diagnostics for the 1D and 2D expansions; exits 3 on failure.
    Diagnose { spec: PathBuf },
}

#[derive(Args, Debug, Clone)]
pub struct Knobs {
    /// Discretization depth (digits per coordinate).
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Truncation tolerance for transforms; tolerance for diagnostics.
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Outer number of terms.
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    /// Inner number of terms.
    #[arg(long = "M", global = true)]
    pub m: Option<usize>,
    /// Raster iterations, or product-curve terms for `kakutani`.
    #[arg(long, global = true)]
    pub iters: Option<usize>,
    /// Random trials (`frostman`) or sample count (`sample`).
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Output file, written atomically; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Marginal axis for 1D commands.
    #[arg(long, global = true, value_enum)]
    pub axis: Option<AxisArg>,
    /// Frequency: `k` for 1D, `k,l` for 2D; the range bound `K` for `moments`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub freq: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = RuleArg::Auxiliary)]
    pub rule: RuleArg,
    #[arg(long, global = true, value_enum, default_value_t = SeriesArg::Auto)]
    pub series: SeriesArg,
    /// y-descriptor `"c0 c1 [period: q0 q1]"` or `"a/b"`; `moments` then reports the slice.
    #[arg(long, global = true)]
    pub slice: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
    Pgm,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AxisArg {
    X,
    Y,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleArg {
    Auxiliary,
    Residual,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesArg {
    Auto,
    Sing,
    Leb,
}

/// Raised by `diagnose` when a check fails; maps to exit code 3.
#[derive(Debug)]
pub struct CheckFailed(pub String);

impl std::fmt::Display for CheckFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "check failed: {}", self.0)
    }
}

impl std::error::Error for CheckFailed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<CheckFailed>().is_some() {
        3
    } else if err.downcast_ref::<ifs_fourier::Error>().is_some_and(ifs_fourier::Error::is_budget) {
        2
    } else {
        1
    }
}

fn configure_threads() -> anyhow::Result<()> {
    if let Ok(value) = std::env::var(THREADS_ENV) {
        let threads: usize = value.parse().map_err(|_| anyhow::anyhow!("{THREADS_ENV}={value:?} is not a count"))?;
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    match configure_threads().and_then(|()| commands::run(&cli.command, &cli.knobs)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&CheckFailed("bessel".into()).into()), 3);
        assert_eq!(exit_code(&ifs_fourier::Error::Budget("big".into()).into()), 2);
        assert_eq!(exit_code(&ifs_fourier::Error::EmptyGrid.into()), 1);
        assert_eq!(exit_code(&anyhow::Error::from(ifs_fourier::Error::Budget("big".into())).context("while expanding")), 2);
        assert_eq!(exit_code(&anyhow::anyhow!("io")), 1);
    }

    #[test]
    fn flags_parse_anywhere() {
        let cli = Cli::try_parse_from(["ifsf", "--N", "8", "expand2d", "a.json", "--M", "4", "--freq", "-1,2"]).unwrap();
        assert_eq!((cli.knobs.n, cli.knobs.m), (Some(8), Some(4)));
        assert_eq!(cli.knobs.freq.as_deref(), Some("-1,2"));
        assert_eq!(cli.knobs.seed, 1);
        assert!(Cli::try_parse_from(["ifsf", "dim", "a.json", "--format", "svg"]).is_err());
    }
}
