use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use gauss_ht::cli::{Format, Overrides, main_with};

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Error exponents for discriminating lattice Gaussian states.
#[derive(Parser)]
#[command(name = "gauss-ht", version)]
struct Args {
    /// JSON run configuration.
    config: PathBuf,
    /// Output directory; overrides `out` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report encoding; overrides `format` in the config.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Largest dense matrix dimension; overrides `dense_cap` in the config.
    #[arg(long)]
    cap: Option<usize>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let overrides = Overrides {
        out: args.out,
        format: args.format.map(|f| match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }),
        cap: args.cap,
    };
    ExitCode::from(main_with(&args.config, &overrides) as u8)
}
