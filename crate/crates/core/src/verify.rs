//! End-to-end verification checks.
//!
//! Each check produces [`CheckOutcome`]s holding the measured statistic,
//! the pinned threshold and the verdict. The CLI `verify` command and the
//! acceptance test target both run these.

use std::cell::RefCell;
use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::csa::{run_csa, CellLayout, LayerSpec};
use crate::error::Result;
use crate::geometry::{canonical_angle, PolarPoint, SectorAnnulus};
use crate::layout_file::demo_layout;
use crate::pathloss::{pl_histogram, pl_pdf_closed_form, pl_pdf_numeric, PathLossParams};
use crate::rng::RandomStream;
use crate::sampler::{inverse_angle, inverse_radius, sample_batch};
use crate::statistics::{chi_square_uniform, correlation, integrate, ks_test, mean_and_std};

pub const DEFAULT_SEED: u64 = 1;

/// Scatter region of the distributional checks.
pub const SCATTER_REGION: (f64, f64, f64, f64) = (200.0, 1000.0, 0.0, TAU);
pub const SCATTER_N: usize = 1_000_000;
pub const ANGLE_BINS: usize = 32;
pub const ROUND_TRIP_TOL: f64 = 1e-12;
pub const ROUND_TRIP_GRID: usize = 10_000;
pub const ROUND_TRIP_REGIONS: usize = 10;
pub const ORACLE_TOL: f64 = 1e-8;
pub const ORACLE_GRID: usize = 200;
pub const NORMALIZATION_TOL: f64 = 1e-6;
pub const PL_MC_N: usize = 1_000_000;
pub const PL_MC_BINS: usize = 60;
pub const PL_MC_MIN_DENSITY: f64 = 1e-3;
pub const PL_MC_SIGMAS: f64 = 4.0;
pub const PL_MC_MIN_PASSING: usize = 58;
pub const CSA_PER_SECTOR: usize = 100_000;
pub const MIXTURE_COUNTS: (usize, usize) = (75_000, 25_000);
pub const MIXTURE_RATIO_TOL: f64 = 0.05;
pub const MEAN_SQUARE_SE: f64 = 3.0;
pub const INDEPENDENCE_TOL: f64 = 0.005;

pub const RUNTIME_SCATTER: Duration = Duration::from_secs(5);
pub const RUNTIME_ROUND_TRIP: Duration = Duration::from_secs(1);
pub const RUNTIME_ORACLE: Duration = Duration::from_secs(30);
pub const RUNTIME_PL_MC: Duration = Duration::from_secs(10);

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn below(name: impl Into<String>, statistic: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            statistic,
            threshold,
            passed: statistic < threshold,
            detail: detail.into(),
        }
    }

    fn at_most(name: impl Into<String>, statistic: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            passed: statistic <= threshold,
            ..Self::below(name, statistic, threshold, detail)
        }
    }

    fn at_least(name: impl Into<String>, statistic: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Self {
            passed: statistic >= threshold,
            ..Self::below(name, statistic, threshold, detail)
        }
    }

    fn runtime(name: &str, elapsed: Duration, limit: Duration) -> Self {
        Self::below(
            format!("{name}: runtime [s]"),
            elapsed.as_secs_f64(),
            limit.as_secs_f64(),
            "",
        )
    }

    fn failed(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self {
            name: name.into(),
            statistic: f64::NAN,
            threshold: f64::NAN,
            passed: false,
            detail: format!("error: {err}"),
        }
    }
}

/// Radius generator used by the sampler checks. The mutation hook swaps it
/// to show that the checks catch a broken inverse transform.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum RadiusGenerator {
    #[default]
    InverseCdf,
    /// `r = u(l2² − l1²) + l1²`: the square root dropped.
    MissingSqrt,
}

impl RadiusGenerator {
    fn radius(self, region: &SectorAnnulus<f64>, u: f64) -> f64 {
        match self {
            RadiusGenerator::InverseCdf => inverse_radius(region, u).expect("u in [0, 1]"),
            RadiusGenerator::MissingSqrt => u * region.radial_span_sq() + region.l1() * region.l1(),
        }
    }

    fn scatter(
        self,
        region: &SectorAnnulus<f64>,
        n: usize,
        stream: &mut RandomStream,
    ) -> Vec<PolarPoint<f64>> {
        match self {
            RadiusGenerator::InverseCdf => sample_batch(region, n, stream).polar,
            RadiusGenerator::MissingSqrt => (0..n)
                .map(|_| {
                    let u1: f64 = stream.uniform();
                    let u2: f64 = stream.uniform();
                    PolarPoint::new(
                        self.radius(region, u1),
                        inverse_angle(region, u2).expect("u in [0, 1)"),
                    )
                })
                .collect(),
        }
    }
}

fn scatter_region() -> SectorAnnulus<f64> {
    let (l1, l2, a1, a2) = SCATTER_REGION;
    SectorAnnulus::new(l1, l2, a1, a2).expect("valid constant region")
}

/// KS of radii and χ² of angles for a 10⁶-point scatter.
pub fn inverse_transform(seed: u64, generator: RadiusGenerator) -> Vec<CheckOutcome> {
    let name = "inverse-transform";
    let start = Instant::now();
    let region = scatter_region();
    let pts = generator.scatter(&region, SCATTER_N, &mut RandomStream::new(seed));
    let radii: Vec<f64> = pts.iter().map(|p| p.r).collect();
    let angles: Vec<f64> = pts.iter().map(|p| p.theta).collect();
    let mut out = Vec::new();
    match ks_test(&radii, |r| region.radial_cdf(r)) {
        Ok(ks) => out.push(CheckOutcome::below(
            format!("{name}: KS radius vs radial CDF"),
            ks.statistic,
            ks.critical,
            format!("n={}", ks.n),
        )),
        Err(e) => out.push(CheckOutcome::failed(format!("{name}: KS"), e)),
    }
    match chi_square_uniform(&angles, region.a1(), region.a2(), ANGLE_BINS) {
        Ok(chi) => out.push(CheckOutcome::below(
            format!("{name}: chi-square angle, {} bins", ANGLE_BINS),
            chi.statistic,
            chi.critical,
            format!("0.99 quantile of chi2({})", ANGLE_BINS - 1),
        )),
        Err(e) => out.push(CheckOutcome::failed(format!("{name}: chi-square"), e)),
    }
    match correlation(&radii, &angles) {
        Ok(rho) => out.push(CheckOutcome::below(
            format!("{name}: |corr(r, theta)|"),
            rho.abs(),
            INDEPENDENCE_TOL,
            "",
        )),
        Err(e) => out.push(CheckOutcome::failed(format!("{name}: correlation"), e)),
    }
    out.push(CheckOutcome::runtime(name, start.elapsed(), RUNTIME_SCATTER));
    out
}

/// `radial_cdf(inverse_radius(u)) = u` on a 10⁴-point grid in ten random regions.
pub fn round_trip(seed: u64, generator: RadiusGenerator) -> Vec<CheckOutcome> {
    let name = "round-trip";
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..ROUND_TRIP_REGIONS {
        let l1 = rng.random_range(0.0..1000.0);
        let l2 = l1 + rng.random_range(10.0..2000.0);
        let a1 = rng.random_range(0.0..PI);
        let a2 = rng.random_range(a1 + 0.01..TAU);
        let region = SectorAnnulus::new(l1, l2, a1, a2).expect("constructed valid");
        for k in 0..ROUND_TRIP_GRID {
            let u = k as f64 / (ROUND_TRIP_GRID - 1) as f64;
            let back = region.radial_cdf(generator.radius(&region, u));
            worst = worst.max((back - u).abs());
        }
    }
    vec![
        CheckOutcome::at_most(
            format!("{name}: max |F(F^-1(u)) - u|"),
            worst,
            ROUND_TRIP_TOL,
            format!("{ROUND_TRIP_REGIONS} regions x {ROUND_TRIP_GRID} u"),
        ),
        CheckOutcome::runtime(name, start.elapsed(), RUNTIME_ROUND_TRIP),
    ]
}

/// Parameter sets for the density checks, covering `l1 = 0` and `l1 > 0`.
pub fn oracle_param_sets() -> Vec<PathLossParams<f64>> {
    [
        (0.0, 1000.0, 1.0, 30.0, 35.0, 8.0),
        (200.0, 1000.0, 1.0, 30.0, 35.0, 8.0),
        (1.0, 100.0, 1.0, 30.0, 35.0, 8.0),
        (0.0, 500.0, 10.0, 40.0, 20.0, 4.0),
        (50.0, 60.0, 1.0, 15.3, 37.6, 2.0),
        (10.0, 2000.0, 100.0, 100.0, 30.0, 12.0),
    ]
    .iter()
    .map(|&(l1, l2, r0, a, b, s)| PathLossParams::new(l1, l2, r0, a, b, s).expect("valid constant set"))
    .collect()
}

fn describe(p: &PathLossParams<f64>) -> String {
    format!(
        "L1={} L2={} r0={} alpha={} beta={} sigma={}",
        p.region_l1(),
        p.region_l2(),
        p.r0(),
        p.alpha(),
        p.beta(),
        p.sigma_psi()
    )
}

/// Grid `[w1 − 4σ, w2 + 4σ]` (lower edge at `r = 10⁻³·l2` when `l1 = 0`).
pub fn oracle_grid(p: &PathLossParams<f64>) -> Vec<f64> {
    let (lo, hi) = p.support(4.0, 1e-3);
    (0..ORACLE_GRID)
        .map(|k| lo + (hi - lo) * k as f64 / (ORACLE_GRID - 1) as f64)
        .collect()
}

fn max_oracle_gap(p: &PathLossParams<f64>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for l in oracle_grid(p) {
        let a = pl_pdf_closed_form(p, l)?;
        let b = pl_pdf_numeric(p, l)?;
        worst = worst.max((a - b).abs());
    }
    Ok(worst)
}

/// Closed form against the convolution quadrature on 200-point grids.
pub fn oracle_agreement() -> Vec<CheckOutcome> {
    let name = "closed-form vs convolution";
    let start = Instant::now();
    let mut out: Vec<CheckOutcome> = oracle_param_sets()
        .iter()
        .map(|p| match max_oracle_gap(p) {
            Ok(gap) => CheckOutcome::at_most(format!("{name}: max abs gap"), gap, ORACLE_TOL, describe(p)),
            Err(e) => CheckOutcome::failed(format!("{name}: {}", describe(p)), e),
        })
        .collect();
    out.push(CheckOutcome::runtime(name, start.elapsed(), RUNTIME_ORACLE));
    out
}

fn mass(p: &PathLossParams<f64>, numeric: bool) -> Result<f64> {
    // ±8σ, lower edge at r = 10⁻⁵·l2 when l1 = 0 (radial mass 1e-10 below)
    let (lo, hi) = p.support(8.0, 1e-5);
    if numeric {
        let failure = RefCell::new(None);
        let v = integrate(
            |l| {
                pl_pdf_numeric(p, l).unwrap_or_else(|e| {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                })
            },
            lo,
            hi,
            1e-8,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        v
    } else {
        integrate(|l| pl_pdf_closed_form(p, l).unwrap_or(f64::NAN), lo, hi, 1e-10)
    }
}

/// Unit mass of both density evaluations for every parameter set.
pub fn normalization() -> Vec<CheckOutcome> {
    let name = "density normalization";
    let mut out = Vec::new();
    for p in oracle_param_sets() {
        for (label, numeric) in [("closed form", false), ("convolution", true)] {
            out.push(match mass(&p, numeric) {
                Ok(m) => CheckOutcome::at_most(
                    format!("{name}: |mass - 1|, {label}"),
                    (m - 1.0).abs(),
                    NORMALIZATION_TOL,
                    describe(&p),
                ),
                Err(e) => CheckOutcome::failed(format!("{name}: {label}, {}", describe(&p)), e),
            });
        }
    }
    out
}

/// Monte Carlo histogram of shadowed losses against the closed form.
pub fn monte_carlo_pathloss(seed: u64) -> Vec<CheckOutcome> {
    let name = "Monte Carlo path loss";
    let start = Instant::now();
    let region = scatter_region();
    let params = PathLossParams::demo(region.l1(), region.l2()).expect("valid demo set");
    let hist = match pl_histogram(
        &params,
        &region,
        PL_MC_N,
        PL_MC_BINS,
        &mut RandomStream::new(seed),
    ) {
        Ok(h) => h,
        Err(e) => return vec![CheckOutcome::failed(name, e)],
    };
    let n = PL_MC_N as f64;
    let mut passing = 0;
    let mut worst_z: f64 = 0.0;
    for bin in &hist.bins {
        let f = match pl_pdf_closed_form(&params, bin.l) {
            Ok(f) => f,
            Err(e) => return vec![CheckOutcome::failed(name, e)],
        };
        if f <= PL_MC_MIN_DENSITY {
            passing += 1;
            continue;
        }
        let p = f * hist.width;
        let sd = (p * (1.0 - p) / n).sqrt() / hist.width;
        let z = (bin.density - f).abs() / sd;
        worst_z = worst_z.max(z);
        if z <= PL_MC_SIGMAS {
            passing += 1;
        }
    }
    vec![
        CheckOutcome::at_least(
            format!("{name}: bins within {PL_MC_SIGMAS} sd"),
            passing as f64,
            PL_MC_MIN_PASSING as f64,
            format!(
                "of {} bins; worst z = {worst_z:.2}; {}",
                hist.bins.len(),
                describe(&params)
            ),
        ),
        CheckOutcome::runtime(name, start.elapsed(), RUNTIME_PL_MC),
    ]
}

/// Seven-sector demo layout at 10⁵ nodes per sector, plus the 75/25 half-disc mixture.
pub fn csa_exactness(seed: u64) -> Vec<CheckOutcome> {
    let name = "CSA";
    let mut out = Vec::new();
    let layout: CellLayout<f64> = demo_layout::<f64>().with_uniform_counts(CSA_PER_SECTOR);
    let placement = match run_csa(&layout, &RandomStream::new(seed)) {
        Ok(p) => p,
        Err(e) => return vec![CheckOutcome::failed(name, e)],
    };

    let miscounted = layout
        .sectors()
        .zip(&placement.per_sector)
        .filter(|((_, _, spec), batch)| batch.len() != spec.node_count)
        .count();
    let total_ok = placement.superposed.len() == layout.total_nodes();
    out.push(CheckOutcome::at_most(
        format!("{name}: sectors with wrong count"),
        miscounted as f64 + if total_ok { 0.0 } else { 1.0 },
        0.0,
        format!(
            "{} sectors, {} nodes",
            layout.sector_count(),
            placement.superposed.len()
        ),
    ));

    let sectors: Vec<_> = layout.sectors().map(|(_, _, s)| s.region).collect();
    let outside = placement
        .superposed
        .iter()
        .filter(|t| !sectors[t.sector_index].contains(t.polar))
        .count();
    out.push(CheckOutcome::at_most(
        format!("{name}: points outside their sector"),
        outside as f64,
        0.0,
        "",
    ));

    for ((layer, sector, spec), batch) in layout.sectors().zip(&placement.per_sector) {
        let radii: Vec<f64> = batch.radii().collect();
        let angles: Vec<f64> = batch.angles().collect();
        let region = spec.region;
        let tag = format!("layers[{layer}].sectors[{sector}]");
        out.push(match ks_test(&radii, |r| region.radial_cdf(r)) {
            Ok(ks) => CheckOutcome::below(format!("{name}: KS radius {tag}"), ks.statistic, ks.critical, ""),
            Err(e) => CheckOutcome::failed(format!("{name}: KS {tag}"), e),
        });
        out.push(
            match chi_square_uniform(&angles, region.a1(), region.a2(), ANGLE_BINS) {
                Ok(c) => CheckOutcome::below(
                    format!("{name}: chi-square angle {tag}"),
                    c.statistic,
                    c.critical,
                    "",
                ),
                Err(e) => CheckOutcome::failed(format!("{name}: chi-square {tag}"), e),
            },
        );
    }

    let (upper_n, lower_n) = MIXTURE_COUNTS;
    let halves = LayerSpec::new(0.0, 1000.0, &[(0.0, PI, upper_n), (PI, TAU, lower_n)])
        .map(|l| CellLayout::new(vec![l]));
    match halves.and_then(|h| run_csa(&h, &RandomStream::new(seed ^ 0xC5A))) {
        Ok(mix) => {
            let upper = mix
                .superposed
                .iter()
                .filter(|t| canonical_angle(t.point.y.atan2(t.point.x)) < PI)
                .count();
            let lower = mix.superposed.len() - upper;
            let ratio = upper as f64 / lower as f64;
            out.push(CheckOutcome::at_most(
                format!("{name}: |half-disc occupancy ratio - 3|"),
                (ratio - 3.0).abs(),
                MIXTURE_RATIO_TOL,
                format!("{upper}/{lower} = {ratio:.4}"),
            ));
        }
        Err(e) => out.push(CheckOutcome::failed(format!("{name}: mixture"), e)),
    }
    out
}

/// Equal seeds give bit-identical batches and placements.
pub fn determinism(seed: u64) -> Vec<CheckOutcome> {
    let name = "determinism";
    let region = scatter_region();
    let a = sample_batch(&region, 10_000, &mut RandomStream::new(seed));
    let b = sample_batch(&region, 10_000, &mut RandomStream::new(seed));
    let same_batch = a
        .polar
        .iter()
        .zip(&b.polar)
        .all(|(p, q)| p.r.to_bits() == q.r.to_bits() && p.theta.to_bits() == q.theta.to_bits());
    let layout: CellLayout<f64> = demo_layout();
    let same_csa = match (
        run_csa(&layout, &RandomStream::new(seed)),
        run_csa(&layout, &RandomStream::new(seed)),
    ) {
        (Ok(x), Ok(y)) => x.superposed.iter().zip(&y.superposed).all(|(p, q)| {
            p.point.x.to_bits() == q.point.x.to_bits() && p.point.y.to_bits() == q.point.y.to_bits()
        }),
        _ => false,
    };
    let mismatches = (!same_batch) as u8 + (!same_csa) as u8;
    vec![CheckOutcome::at_most(
        format!("{name}: runs differing bitwise"),
        mismatches as f64,
        0.0,
        "sample_batch and run_csa, two runs each",
    )]
}

/// Empirical `E[r²]` against `(l1² + l2²)/2` in standard errors.
pub fn mean_square_radius(seed: u64, generator: RadiusGenerator) -> Vec<CheckOutcome> {
    let name = "mean-square radius";
    let mut out = Vec::new();
    for (k, &(l1, l2)) in [(0.0, 1.0), (SCATTER_REGION.0, SCATTER_REGION.1)]
        .iter()
        .enumerate()
    {
        let region = SectorAnnulus::annulus(l1, l2).expect("valid constant region");
        let pts = generator.scatter(
            &region,
            SCATTER_N,
            &mut RandomStream::new(seed).substream(k as u64),
        );
        let r2: Vec<f64> = pts.iter().map(|p| p.r * p.r).collect();
        out.push(match mean_and_std(&r2) {
            Ok((mean, sd)) => {
                let expected = (l1 * l1 + l2 * l2) / 2.0;
                let se = sd / (r2.len() as f64).sqrt();
                CheckOutcome::below(
                    format!("{name}: |mean - (l1^2+l2^2)/2| / se"),
                    (mean - expected).abs() / se,
                    MEAN_SQUARE_SE,
                    format!("l1={l1} l2={l2} mean={mean:.6} expected={expected}"),
                )
            }
            Err(e) => CheckOutcome::failed(name, e),
        });
    }
    out
}

/// Every check, in acceptance order.
pub fn run_all(seed: u64, generator: RadiusGenerator) -> Vec<CheckOutcome> {
    let mut out = inverse_transform(seed, generator);
    out.extend(round_trip(seed, generator));
    out.extend(oracle_agreement());
    out.extend(normalization());
    out.extend(monte_carlo_pathloss(seed));
    out.extend(csa_exactness(seed));
    out.extend(determinism(seed));
    out.extend(mean_square_radius(seed, generator));
    out
}

/// Fixed-width table, one line per check.
pub fn format_table(outcomes: &[CheckOutcome]) -> String {
    let width = outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0).max(5);
    let mut s = format!(
        "{:<width$}  {:>14}  {:>14}  {}\n",
        "check", "statistic", "threshold", "result"
    );
    for o in outcomes {
        s.push_str(&format!(
            "{:<width$}  {:>14.6e}  {:>14.6e}  {}{}\n",
            o.name,
            o.statistic,
            o.threshold,
            if o.passed { "PASS" } else { "FAIL" },
            if o.detail.is_empty() {
                String::new()
            } else {
                format!("  ({})", o.detail)
            },
        ));
    }
    s
}
