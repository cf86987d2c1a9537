use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use sgwigner::coherence::DeltaMethod;
use sgwigner::pde::Limiter;
use sgwigner::{ExportFormat, FieldKind};

#[derive(Debug, Parser)]
#[command(name = "sgwigner", version, about = "Stern-Gerlach matrix Wigner function in a Caldeira-Leggett bath")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// Scenario JSON; missing keys take the silver-sg values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print lambda, D and a tau(t) table.
    Derive {
        #[command(flatten)]
        config: ConfigArg,
        /// Times for the tau table (s, or with ms/us/ns suffix).
        #[arg(long, value_delimiter = ',', value_parser = parse_time, default_value = "0,50us,100us,200us,400us")]
        times: Vec<f64>,
        /// Also tabulate D and D/gamma for these damping rates.
        #[arg(long, value_delimiter = ',', value_parser = parse_positive)]
        gammas: Vec<f64>,
    },
    /// Sample a field of the closed-form solution at each time.
    Evolve {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, value_delimiter = ',', value_parser = parse_time, required = true)]
        times: Vec<f64>,
        /// trace | diag+ | diag- | offdiag-re | offdiag-im | offdiag-abs
        #[arg(long, default_value = "trace")]
        kind: FieldKind,
        #[arg(long)]
        out: PathBuf,
        /// csv | grid-bin
        #[arg(long, default_value = "csv")]
        format: ExportFormat,
        /// Window half-width in Gaussian widths beyond the centers.
        #[arg(long, default_value_t = 5.0)]
        n_sigmas: f64,
        /// Fixed window `z_half,p_half` instead of the per-time auto window.
        #[arg(long, value_delimiter = ',', num_args = 2, value_parser = parse_positive)]
        window: Option<Vec<f64>>,
        #[arg(long, default_value_t = 201)]
        nz: usize,
        #[arg(long, default_value_t = 201)]
        np: usize,
    },
    /// Centers and widths of the diagonal blocks over time.
    Marginals {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, value_parser = parse_time)]
        t_max: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Damping rates to tabulate (default: the config's).
        #[arg(long, value_delimiter = ',', value_parser = parse_positive)]
        gammas: Vec<f64>,
    },
    /// Coherence curves, decoherence times and, with enough rates, the fit.
    Coherence {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, value_delimiter = ',', value_parser = parse_positive, required = true)]
        gammas: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
        /// analytic | quadrature
        #[arg(long, default_value = "analytic", value_parser = parse_method)]
        method: DeltaMethod,
        /// Longest time sampled on the curves.
        #[arg(long, value_parser = parse_time, default_value = "1")]
        t_max: f64,
    },
    /// Power-law fit t_d = a gamma^b of a decoherence-time table.
    Fit {
        #[arg(long = "in", value_name = "FILE")]
        input: PathBuf,
        /// Also write the fit as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Finite-difference solver against the closed forms.
    OracleCompare {
        /// Run the nondimensional validation suite (the only supported mode).
        #[arg(long)]
        nondim: bool,
        #[arg(long)]
        out: PathBuf,
        /// Fine grid size; the coarse run uses half.
        #[arg(long, default_value_t = 256)]
        n: usize,
        /// upwind | van-leer | mc | lax-wendroff
        #[arg(long, default_value = "mc")]
        limiter: Limiter,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
    },
    /// Viscosity and damping rate from kinetic theory.
    EstimateGamma {
        /// Vacuum JSON; missing keys take the beam-pipe values.
        #[arg(long, value_name = "FILE")]
        vacuum: Option<PathBuf>,
    },
}

/// Seconds, optionally with an s, ms, us or ns suffix.
pub fn parse_time(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (num, scale) = [("ns", 1e-9), ("us", 1e-6), ("µs", 1e-6), ("ms", 1e-3), ("s", 1.0)]
        .iter()
        .find_map(|(suf, k)| s.strip_suffix(suf).map(|n| (n, *k)))
        .unwrap_or((s, 1.0));
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("invalid time '{s}'"))?;
    if !(v >= 0.0 && v.is_finite()) {
        return Err(format!("time must be finite and >= 0, got '{s}'"));
    }
    Ok(v * scale)
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a positive number, got '{s}'")),
    }
}

fn parse_method(s: &str) -> Result<DeltaMethod, String> {
    match s {
        "analytic" => Ok(DeltaMethod::Analytic),
        "quadrature" => Ok(DeltaMethod::Quadrature),
        _ => Err(format!("unknown method '{s}' (analytic | quadrature)")),
    }
}
