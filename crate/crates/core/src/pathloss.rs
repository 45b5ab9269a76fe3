//! Log-distance path loss with lognormal shadowing for nodes spread
//! uniformly over an annulus around the base station.
//!
//! A node at distance `r` sees `L = α + β·log10(r/r0) + Ψ` dB with
//! `Ψ ~ N(0, σ²)`. With `R` distributed as the radial law of the annulus
//! `[l1, l2]`, the deterministic part `X = α + β·log10(R/r0)` lives on
//! `[w1, w2]` with density `2 ln10 r0² 10^{2(x−α)/β} / (β(l2² − l1²))`, and
//! the density of `L` is its convolution with the shadowing Gaussian.
//!
//! Two independent evaluations are provided: [`pl_pdf_closed_form`] uses
//! the Gaussian-integral solution
//!
//! ```text
//! f(l) = 2 r0² ln10 / (β(l2² − l1²)) · 10^{2(ln10·σ² + β(l − α))/β²}
//!        · [Q((Ω − β·log10 l2)/σ) − Q((Ω − β·log10 l1)/σ)]
//! Ω    = l − α + β·log10(r0) + 2 ln10 σ²/β
//! ```
//!
//! and [`pl_pdf_numeric`] integrates the convolution directly.

use crate::error::{Error, Result};
use crate::geometry::SectorAnnulus;
use crate::rng::RandomStream;
use crate::sampler::sample_node;
use crate::scalar::Real;
use crate::statistics::{density_histogram, integrate_panels};

/// Shadowing is integrated over `|τ| ≤ TAU_CUTOFF_SIGMAS · σ`; the Gaussian
/// mass outside is below 1e-32.
const TAU_CUTOFF_SIGMAS: f64 = 12.0;

/// Tolerance allowed on the wrong side of zero before the closed-form
/// bracket is treated as an error.
const BRACKET_SLACK: f64 = 1e-12;

/// Model parameters `[l1, l2, r0, α, β, σΨ]`.
///
/// Lengths in meters, `alpha` and `sigma_psi` in dB, `beta` in dB per
/// decade. `sigma_psi` is the shadowing standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossParams<T> {
    region_l1: T,
    region_l2: T,
    r0: T,
    alpha: T,
    beta: T,
    sigma_psi: T,
}

impl<T: Real> PathLossParams<T> {
    pub fn new(region_l1: T, region_l2: T, r0: T, alpha: T, beta: T, sigma_psi: T) -> Result<Self> {
        let finite = [region_l1, region_l2, r0, alpha, beta, sigma_psi]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("all parameters must be finite".into()));
        }
        if !(T::zero() <= region_l1 && region_l1 < region_l2) {
            return Err(Error::InvalidParams(format!(
                "radii must satisfy 0 <= l1 < l2, got l1={region_l1}, l2={region_l2}"
            )));
        }
        if !(r0 > T::zero()) {
            return Err(Error::InvalidParams(format!("r0 must be positive, got {r0}")));
        }
        if !(beta > T::zero()) {
            return Err(Error::InvalidParams(format!("beta must be positive, got {beta}")));
        }
        if sigma_psi < T::zero() {
            return Err(Error::InvalidParams(format!(
                "sigma_psi must be non-negative, got {sigma_psi}"
            )));
        }
        Ok(Self {
            region_l1,
            region_l2,
            r0,
            alpha,
            beta,
            sigma_psi,
        })
    }

    /// Parameters over the radii of `region`.
    pub fn for_region(region: &SectorAnnulus<T>, r0: T, alpha: T, beta: T, sigma_psi: T) -> Result<Self> {
        Self::new(region.l1(), region.l2(), r0, alpha, beta, sigma_psi)
    }

    /// Demonstration set: r0 = 1 m, α = 30 dB, β = 35 dB/decade, σ = 8 dB.
    pub fn demo(region_l1: T, region_l2: T) -> Result<Self> {
        Self::new(
            region_l1,
            region_l2,
            T::one(),
            T::lit(30.0),
            T::lit(35.0),
            T::lit(8.0),
        )
    }

    pub fn region_l1(&self) -> T {
        self.region_l1
    }
    pub fn region_l2(&self) -> T {
        self.region_l2
    }
    pub fn r0(&self) -> T {
        self.r0
    }
    pub fn alpha(&self) -> T {
        self.alpha
    }
    pub fn beta(&self) -> T {
        self.beta
    }
    pub fn sigma_psi(&self) -> T {
        self.sigma_psi
    }

    /// Copy with a different shadowing deviation.
    pub fn with_sigma(&self, sigma_psi: T) -> Result<Self> {
        Self::new(
            self.region_l1,
            self.region_l2,
            self.r0,
            self.alpha,
            self.beta,
            sigma_psi,
        )
    }

    /// Unshadowed loss at distance `r`: `α + β·log10(r/r0)`.
    #[inline]
    pub fn median_loss(&self, r: T) -> T {
        self.alpha + self.beta * (r / self.r0).log10()
    }

    /// Lower edge of the unshadowed support; `−∞` when `l1 = 0`.
    pub fn w1(&self) -> T {
        if self.region_l1 == T::zero() {
            T::neg_infinity()
        } else {
            self.median_loss(self.region_l1)
        }
    }

    pub fn w2(&self) -> T {
        self.median_loss(self.region_l2)
    }

    #[inline]
    fn radial_span_sq(&self) -> T {
        (self.region_l2 - self.region_l1) * (self.region_l2 + self.region_l1)
    }

    /// Finite interval `[w1 − kσ, w2 + kσ]` for grids and integration.
    ///
    /// When `l1 = 0` the lower edge is taken at the loss of radius
    /// `l2 · floor_ratio`, below which the radial law carries mass
    /// `floor_ratio²`.
    pub fn support(&self, k_sigma: T, floor_ratio: T) -> (T, T) {
        let lower = if self.region_l1 == T::zero() {
            self.median_loss(self.region_l2 * floor_ratio)
        } else {
            self.w1()
        };
        (
            lower - k_sigma * self.sigma_psi,
            self.w2() + k_sigma * self.sigma_psi,
        )
    }

    /// `E[L] = α + β·E[log10(R/r0)]`, from
    /// `∫ ln r · 2r dr = r² ln r − r²/2`.
    pub fn expected_loss(&self) -> T {
        let ln10 = T::LN_10();
        let r_sq_ln_r = |r: T| if r == T::zero() { T::zero() } else { r * r * r.ln() };
        let e_ln_r =
            (r_sq_ln_r(self.region_l2) - r_sq_ln_r(self.region_l1)) / self.radial_span_sq() - T::half();
        self.alpha + self.beta * (e_ln_r / ln10 - self.r0.log10())
    }
}

/// A point of a path-loss density curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossDensityPoint<T> {
    pub l: T,
    pub density: T,
}

/// Gaussian tail probability `Q(x) = erfc(x/√2)/2`.
#[inline]
pub fn q_function<T: Real>(x: T) -> T {
    (x * T::FRAC_1_SQRT_2()).erfc() * T::half()
}

/// `Q(a) − Q(b)` without cancellation in either tail. `b` may be `+∞`.
fn q_difference<T: Real>(a: T, b: T) -> T {
    if a >= T::zero() {
        q_function(a) - q_function(b)
    } else if b <= T::zero() {
        q_function(-b) - q_function(-a)
    } else {
        ((b * T::FRAC_1_SQRT_2()).erf() - (a * T::FRAC_1_SQRT_2()).erf()) * T::half()
    }
}

/// One shadowed path-loss draw for a node at distance `r`.
pub fn sample_pathloss<T: Real>(params: &PathLossParams<T>, r: T, stream: &mut RandomStream) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::NonPositiveDistance(r.to_f64().unwrap_or(f64::NAN)));
    }
    let psi = stream.standard_normal::<T>() * params.sigma_psi;
    Ok(params.median_loss(r) + psi)
}

/// Density of the unshadowed loss `α + β·log10(R/r0)`: the radial density
/// carried through the change of variables, supported on `[w1, w2]`.
pub fn pl_pdf_unshadowed<T: Real>(params: &PathLossParams<T>, l: T) -> T {
    if l < params.w1() || l > params.w2() {
        return T::zero();
    }
    let ln10 = T::LN_10();
    let log_density = (T::two() * ln10 * params.r0 * params.r0 / (params.beta * params.radial_span_sq()))
        .ln()
        + T::two() * ln10 * (l - params.alpha) / params.beta;
    log_density.exp()
}

/// Path-loss density in closed form. Falls back to
/// [`pl_pdf_unshadowed`] when `σ = 0`.
pub fn pl_pdf_closed_form<T: Real>(params: &PathLossParams<T>, l: T) -> Result<T> {
    if !l.is_finite() {
        return Err(Error::Precondition(format!("path loss must be finite, got {l}")));
    }
    let sigma = params.sigma_psi;
    if sigma == T::zero() {
        return Ok(pl_pdf_unshadowed(params, l));
    }
    let ln10 = T::LN_10();
    let beta = params.beta;
    let omega = l - params.alpha + beta * params.r0.log10() + T::two() * ln10 * sigma * sigma / beta;
    let arg = |r: T| (omega - beta * r.log10()) / sigma;
    let upper = arg(params.region_l2);
    // r = 0 sends the argument to +∞ where Q vanishes
    let lower = if params.region_l1 == T::zero() {
        T::infinity()
    } else {
        arg(params.region_l1)
    };
    let bracket = q_difference(upper, lower);
    if bracket < -T::lit(BRACKET_SLACK) {
        return Err(Error::NegativeDensity {
            l: l.to_f64().unwrap_or(f64::NAN),
            bracket: bracket.to_f64().unwrap_or(f64::NAN),
        });
    }
    if bracket <= T::zero() {
        return Ok(T::zero());
    }
    // log space: the exponential factor overflows long before the
    // bracket underflows
    let log_prefactor = (T::two() * params.r0 * params.r0 * ln10 / (beta * params.radial_span_sq())).ln();
    let log_growth = ln10 * T::two() * (ln10 * sigma * sigma + beta * (l - params.alpha)) / (beta * beta);
    Ok((log_prefactor + log_growth + bracket.ln()).exp())
}

/// Default absolute tolerance of [`pl_pdf_numeric`]: 1e-10, or a few
/// machine epsilons where the scalar cannot resolve that.
pub fn numeric_tolerance<T: Real>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(0.1))
}

/// Path-loss density by adaptive quadrature of the shadowing convolution
/// `∫ N(τ; 0, σ²) · g(l − τ) dτ` over `τ ∈ [l − w2, l − w1]`, where `g` is
/// [`pl_pdf_unshadowed`]. Falls back to [`pl_pdf_unshadowed`] when `σ = 0`.
pub fn pl_pdf_numeric<T: Real>(params: &PathLossParams<T>, l: T) -> Result<T> {
    pl_pdf_numeric_with_tol(params, l, numeric_tolerance())
}

pub fn pl_pdf_numeric_with_tol<T: Real>(params: &PathLossParams<T>, l: T, abs_tol: T) -> Result<T> {
    if !l.is_finite() {
        return Err(Error::Precondition(format!("path loss must be finite, got {l}")));
    }
    let sigma = params.sigma_psi;
    if sigma == T::zero() {
        return Ok(pl_pdf_unshadowed(params, l));
    }
    let cutoff = T::lit(TAU_CUTOFF_SIGMAS) * sigma;
    let lo = (l - params.w2()).max(-cutoff);
    let hi = (l - params.w1()).min(cutoff);
    if !(lo < hi) {
        return Ok(T::zero());
    }

    let ln10 = T::LN_10();
    let beta = params.beta;
    let norm = (T::two() * T::PI()).sqrt() * sigma;
    let span = params.radial_span_sq();
    let integrand = |tau: T| {
        let gauss = (-(tau * tau) / (T::two() * sigma * sigma)).exp() / norm;
        let r = params.r0 * T::lit(10.0).powf((l - tau - params.alpha) / beta);
        let radial = T::two() * r / span;
        gauss * ln10 * r * radial / beta
    };
    // 16 starting panels so a narrow Gaussian is never stepped over
    let value = integrate_panels(integrand, lo, hi, abs_tol, 16)?;
    Ok(value.max(T::zero()))
}

/// Empirical path-loss density from a Monte Carlo scatter.
#[derive(Debug, Clone, PartialEq)]
pub struct PlHistogram<T> {
    pub width: T,
    pub bins: Vec<PathLossDensityPoint<T>>,
}

/// Scatters `n` nodes in `region`, draws one shadowed loss per node and
/// bins the losses into a unit-mass histogram with `bins` equal bins.
pub fn pl_histogram<T: Real>(
    params: &PathLossParams<T>,
    region: &SectorAnnulus<T>,
    n: usize,
    bins: usize,
    stream: &mut RandomStream,
) -> Result<PlHistogram<T>> {
    if region.l1() != params.region_l1 || region.l2() != params.region_l2 {
        return Err(Error::Precondition(format!(
            "region radii [{}, {}] differ from parameter radii [{}, {}]",
            region.l1(),
            region.l2(),
            params.region_l1,
            params.region_l2
        )));
    }
    if n == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    if bins == 0 {
        return Err(Error::Precondition("need at least one bin".into()));
    }
    let losses = sample_pathlosses(params, region, n, stream)?;
    let (hist, width) = density_histogram(&losses, bins)?;
    Ok(PlHistogram {
        width,
        bins: hist
            .into_iter()
            .map(|(l, density)| PathLossDensityPoint { l, density })
            .collect(),
    })
}

/// `n` shadowed losses for nodes scattered in `region`.
pub fn sample_pathlosses<T: Real>(
    params: &PathLossParams<T>,
    region: &SectorAnnulus<T>,
    n: usize,
    stream: &mut RandomStream,
) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let node = sample_node(region, stream);
        // r = 0 only when l1 = 0 and u1 = 0 exactly; nudge onto the support
        let r = node.r.max(T::min_positive_value());
        out.push(sample_pathloss(params, r, stream)?);
    }
    Ok(out)
}

/// `(lo, hi)` of the default f64 density grid: ±4σ around the support.
pub fn default_grid(params: &PathLossParams<f64>) -> (f64, f64) {
    params.support(4.0, 1e-3)
}
