//! `sectorscatter`: scatter nodes, run layered placements, tabulate
//! path-loss densities and run the verification suite.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 verification
//! failure.

// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sectorscatter_core::pathloss::{default_grid, pl_histogram, pl_pdf_closed_form, pl_pdf_numeric};
use sectorscatter_core::verify::{self, RadiusGenerator};
use sectorscatter_core::{load_layout, run_csa, sample_batch, PathLossParams, RandomStream, SectorAnnulus};

use output::{emit, render, CsaRow, Format, HistRow, PdfRow, ScatterRow};

#[derive(Debug, Parser)]
#[command(
    name = "sectorscatter",
    version,
    about = "Exact random node placement in sectored cells"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Scatter nodes uniformly in one sector annulus (rows: x,y,r,theta).
    Scatter(ScatterArgs),
    /// Run a layered placement from a JSON layout (rows: layer,sector,x,y,r,theta).
    Csa(CsaArgs),
    /// Tabulate the path-loss density, closed form next to quadrature.
    PlPdf(PlPdfArgs),
    /// Monte Carlo path-loss histogram next to the closed-form density.
    PlHist(PlHistArgs),
    /// Run every verification check and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct ScatterArgs {
    /// Inner radius.
    #[arg(long)]
    l1: f64,
    /// Outer radius.
    #[arg(long)]
    l2: f64,
    /// Lower angle (radians, or degrees with --degrees).
    #[arg(long, allow_hyphen_values = true)]
    a1: f64,
    /// Upper angle (radians, or degrees with --degrees).
    #[arg(long, allow_hyphen_values = true)]
    a2: f64,
    /// Read --a1/--a2 in degrees.
    #[arg(long)]
    degrees: bool,
    /// Number of nodes.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CsaArgs {
    /// Layout JSON file.
    #[arg(long)]
    layout: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent runs appended in order; run k uses seed + k.
    #[arg(long, default_value_t = 1)]
    runs: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, default_value_t = 200.0)]
    l1: f64,
    #[arg(long, default_value_t = 1000.0)]
    l2: f64,
    /// Close-in reference distance.
    #[arg(long, default_value_t = 1.0)]
    r0: f64,
    /// Intercept in dB.
    #[arg(long, default_value_t = 30.0, allow_hyphen_values = true)]
    alpha: f64,
    /// Slope in dB per decade.
    #[arg(long, default_value_t = 35.0)]
    beta: f64,
    /// Shadowing standard deviation in dB.
    #[arg(long = "sigma-psi-db", default_value_t = 8.0)]
    sigma_psi_db: f64,
}

impl ModelArgs {
    fn params(&self) -> Result<PathLossParams<f64>> {
        Ok(PathLossParams::new(
            self.l1,
            self.l2,
            self.r0,
            self.alpha,
            self.beta,
            self.sigma_psi_db,
        )?)
    }
}

#[derive(Debug, Args)]
struct PlPdfArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Grid start in dB (default: w1 − 4σ).
    #[arg(long, allow_hyphen_values = true)]
    lo: Option<f64>,
    /// Grid end in dB (default: w2 + 4σ).
    #[arg(long, allow_hyphen_values = true)]
    hi: Option<f64>,
    #[arg(long, default_value_t = 200)]
    points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct PlHistArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    #[arg(long, default_value_t = 60)]
    bins: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = verify::DEFAULT_SEED)]
    seed: u64,
    /// Test hook: drop the square root from the radius generator.
    #[arg(long, hide = true)]
    mutate_sqrt: bool,
}

fn scatter(args: &ScatterArgs) -> Result<()> {
    let (a1, a2) = if args.degrees {
        (args.a1.to_radians(), args.a2.to_radians())
    } else {
        (args.a1, args.a2)
    };
    let region = SectorAnnulus::new(args.l1, args.l2, a1, a2)?;
    let batch = sample_batch(&region, args.n, &mut RandomStream::new(args.seed));
    let rows: Vec<ScatterRow> = batch
        .polar
        .iter()
        .zip(&batch.points)
        .map(|(p, q)| ScatterRow {
            x: q.x,
            y: q.y,
            r: p.r,
            theta: p.theta,
        })
        .collect();
    emit(&render(&rows, args.output.format)?, args.output.out.as_deref())
}

fn csa(args: &CsaArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.layout)
        .with_context(|| format!("reading layout {}", args.layout.display()))?;
    let layout = load_layout::<f64>(&text).with_context(|| format!("in {}", args.layout.display()))?;
    if args.runs == 0 {
        bail!("--runs must be at least 1");
    }
    let mut rows = Vec::with_capacity(layout.total_nodes() * args.runs as usize);
    for k in 0..args.runs {
        let placement = run_csa(&layout, &RandomStream::new(args.seed.wrapping_add(k)))?;
        rows.extend(placement.superposed.iter().map(|t| CsaRow {
            layer: t.layer,
            sector: t.sector,
            x: t.point.x,
            y: t.point.y,
            r: t.polar.r,
            theta: t.polar.theta,
        }));
    }
    emit(&render(&rows, args.output.format)?, args.output.out.as_deref())
}

fn pl_pdf(args: &PlPdfArgs) -> Result<()> {
    let params = args.model.params()?;
    if args.points < 2 {
        bail!("--points must be at least 2, got {}", args.points);
    }
    let (default_lo, default_hi) = default_grid(&params);
    let lo = args.lo.unwrap_or(default_lo);
    let hi = args.hi.unwrap_or(default_hi);
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        bail!("grid needs finite lo < hi, got [{lo}, {hi}]");
    }
    if params.sigma_psi() == 0.0 {
        eprintln!("note: sigma_psi_db = 0, both columns hold the unshadowed density");
    }
    let rows = (0..args.points)
        .map(|k| {
            let l = lo + (hi - lo) * k as f64 / (args.points - 1) as f64;
            Ok(PdfRow {
                l_db: l,
                f_closed_form: pl_pdf_closed_form(&params, l)?,
                f_numeric: pl_pdf_numeric(&params, l)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    emit(&render(&rows, args.output.format)?, args.output.out.as_deref())
}

fn pl_hist(args: &PlHistArgs) -> Result<()> {
    let params = args.model.params()?;
    let region = SectorAnnulus::annulus(params.region_l1(), params.region_l2())?;
    let hist = pl_histogram(
        &params,
        &region,
        args.n,
        args.bins,
        &mut RandomStream::new(args.seed),
    )?;
    let rows = hist
        .bins
        .iter()
        .map(|b| {
            Ok(HistRow {
                l_db: b.l,
                f_empirical: b.density,
                f_closed_form: pl_pdf_closed_form(&params, b.l)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    emit(&render(&rows, args.output.format)?, args.output.out.as_deref())
}

fn run_verify(args: &VerifyArgs) -> bool {
    let generator = if args.mutate_sqrt {
        RadiusGenerator::MissingSqrt
    } else {
        RadiusGenerator::InverseCdf
    };
    let outcomes = verify::run_all(args.seed, generator);
    print!("{}", verify::format_table(&outcomes));
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!(
        "{} checks, {} failed (seed {})",
        outcomes.len(),
        failed,
        args.seed
    );
    failed == 0
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Scatter(a) => scatter(a),
        Command::Csa(a) => csa(a),
        Command::PlPdf(a) => pl_pdf(a),
        Command::PlHist(a) => pl_hist(a),
        Command::Verify(a) => {
            return if run_verify(a) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            };
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
