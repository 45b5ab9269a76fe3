//! Goodness-of-fit and quadrature utilities used to check the samplers and
//! densities: empirical CDF, Kolmogorov–Smirnov distance, Pearson χ² against
//! a flat histogram, adaptive Gauss–Kronrod integration and density
//! histograms.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Asymptotic one-sample KS coefficient at α = 0.01; the critical distance
/// is `KS_C_ALPHA_01 / √n`, valid for n ≥ 50.
pub const KS_C_ALPHA_01: f64 = 1.63;

/// Significance level used by the default tests.
pub const ALPHA: f64 = 0.01;

/// Subdivision cap for [`integrate`].
pub const MAX_INTERVALS: usize = 2000;

fn total_cmp<T: Real>(a: &T, b: &T) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

/// Right-continuous step function built from a sample.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf<T> {
    sorted: Vec<T>,
}

impl<T: Real> EmpiricalCdf<T> {
    pub fn new(samples: &[T]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySample);
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::Precondition("sample contains NaN".into()));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_unstable_by(total_cmp);
        Ok(Self { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.sorted
    }

    /// Fraction of the sample `≤ x`.
    pub fn eval(&self, x: T) -> T {
        let k = self.sorted.partition_point(|v| *v <= x);
        T::from_count(k) / T::from_count(self.sorted.len())
    }

    /// `sup |F_n − F|` for a continuous reference CDF.
    pub fn ks_distance<F: Fn(T) -> T>(&self, cdf: F) -> T {
        let n = T::from_count(self.sorted.len());
        self.sorted.iter().enumerate().fold(T::zero(), |d, (i, &x)| {
            let f = cdf(x);
            let above = T::from_count(i + 1) / n - f;
            let below = f - T::from_count(i) / n;
            d.max(above).max(below)
        })
    }
}

/// Outcome of a goodness-of-fit test. `passed` is `statistic < critical`.
#[derive(Debug, Clone, PartialEq)]
pub struct GofReport {
    pub test: &'static str,
    pub n: usize,
    pub statistic: f64,
    pub critical: f64,
    pub alpha: f64,
    pub passed: bool,
}

impl GofReport {
    fn new(test: &'static str, n: usize, statistic: f64, critical: f64, alpha: f64) -> Self {
        Self {
            test,
            n,
            statistic,
            critical,
            alpha,
            passed: statistic < critical,
        }
    }
}

/// KS distance `D_n` between the sample and `cdf`.
pub fn ks_statistic<T: Real, F: Fn(T) -> T>(samples: &[T], cdf: F) -> Result<T> {
    Ok(EmpiricalCdf::new(samples)?.ks_distance(cdf))
}

pub fn ks_critical_value(n: usize) -> f64 {
    KS_C_ALPHA_01 / (n as f64).sqrt()
}

/// One-sample KS test at α = 0.01 with the asymptotic critical value.
pub fn ks_test<T: Real, F: Fn(T) -> T>(samples: &[T], cdf: F) -> Result<GofReport> {
    let d = ks_statistic(samples, cdf)?;
    let n = samples.len();
    Ok(GofReport::new(
        "kolmogorov-smirnov",
        n,
        d.to_f64().unwrap_or(f64::NAN),
        ks_critical_value(n),
        ALPHA,
    ))
}

/// Pearson statistic of the bin counts of `samples` against a flat
/// expectation over `[lo, hi]`.
pub fn chi_square_statistic<T: Real>(samples: &[T], lo: T, hi: T, bins: usize) -> Result<T> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if bins < 2 {
        return Err(Error::Precondition(format!("need at least 2 bins, got {bins}")));
    }
    if !(lo < hi) {
        return Err(Error::Precondition(format!("empty range [{lo}, {hi}]")));
    }
    let n = samples.len();
    let expected = T::from_count(n) / T::from_count(bins);
    if expected < T::lit(5.0) {
        return Err(Error::Precondition(format!(
            "expected count per bin {expected} below 5"
        )));
    }
    let width = (hi - lo) / T::from_count(bins);
    let mut counts = vec![0usize; bins];
    for &x in samples {
        if !(x >= lo && x <= hi) {
            return Err(Error::Precondition(format!("sample {x} outside [{lo}, {hi}]")));
        }
        let k = ((x - lo) / width).to_usize().unwrap_or(bins - 1).min(bins - 1);
        counts[k] += 1;
    }
    Ok(counts.iter().fold(T::zero(), |acc, &c| {
        let d = T::from_count(c) - expected;
        acc + d * d / expected
    }))
}

/// χ² uniformity test at α = 0.01.
pub fn chi_square_uniform<T: Real>(samples: &[T], lo: T, hi: T, bins: usize) -> Result<GofReport> {
    let stat = chi_square_statistic(samples, lo, hi, bins)?;
    Ok(GofReport::new(
        "chi-square-uniform",
        samples.len(),
        stat.to_f64().unwrap_or(f64::NAN),
        chi_square_quantile(1.0 - ALPHA, (bins - 1) as f64)?,
        ALPHA,
    ))
}

/// Regularized lower incomplete gamma `P(a, x)`.
///
/// Series expansion for `x < a + 1`, Lentz continued fraction for the
/// complement otherwise.
pub fn regularized_gamma_p<T: Real>(a: T, x: T) -> Result<T> {
    if !(a > T::zero()) || x < T::zero() || x.is_nan() {
        return Err(Error::Precondition(format!(
            "P(a, x) needs a > 0, x >= 0; got a={a}, x={x}"
        )));
    }
    if x == T::zero() {
        return Ok(T::zero());
    }
    let eps = T::epsilon();
    let log_prefix = a * x.ln() - x - a.ln_gamma();
    if x < a + T::one() {
        let mut ap = a;
        let mut term = a.recip();
        let mut sum = term;
        for _ in 0..10_000 {
            ap = ap + T::one();
            term = term * x / ap;
            sum = sum + term;
            if term.abs() < sum.abs() * eps {
                return Ok((sum.ln() + log_prefix).exp().min(T::one()));
            }
        }
    } else {
        let tiny = T::min_positive_value() / eps;
        let mut b = x + T::one() - a;
        let mut c = tiny.recip();
        let mut d = b.recip();
        let mut h = d;
        for i in 1..10_000usize {
            let i = T::from_count(i);
            let an = -i * (i - a);
            b = b + T::two();
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = d.recip();
            let delta = d * c;
            h = h * delta;
            if (delta - T::one()).abs() < eps {
                let q = (h.ln() + log_prefix).exp();
                return Ok((T::one() - q).max(T::zero()));
            }
        }
    }
    Err(Error::Precondition(format!(
        "incomplete gamma failed to converge at a={a}, x={x}"
    )))
}

pub fn chi_square_cdf<T: Real>(x: T, dof: T) -> Result<T> {
    if x <= T::zero() {
        return Ok(T::zero());
    }
    regularized_gamma_p(dof / T::two(), x / T::two())
}

/// Quantile of χ²(dof) at probability `p`, by bracketing and bisection on
/// [`chi_square_cdf`].
pub fn chi_square_quantile(p: f64, dof: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) || !(dof > 0.0) {
        return Err(Error::Precondition(format!(
            "quantile needs 0 < p < 1, dof > 0; got p={p}, dof={dof}"
        )));
    }
    let mut lo = 0.0;
    let mut hi = dof.max(1.0);
    while chi_square_cdf(hi, dof)? < p {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if chi_square_cdf(mid, dof)? < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// 15-point Kronrod nodes on [0, 1] half of [-1, 1]; odd indices are the
// embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy)]
struct Panel<T> {
    lo: T,
    hi: T,
    value: T,
    error: T,
}

fn gauss_kronrod_15<T: Real, F: Fn(T) -> T>(f: &F, lo: T, hi: T) -> Panel<T> {
    let center = (lo + hi) / T::two();
    let half = (hi - lo) / T::two();
    let fc = f(center);
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + T::lit(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss = gauss + T::lit(WG[j / 2]) * pair;
        }
    }
    Panel {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[lo, hi]`.
///
/// The panel with the largest error estimate `|K15 − G7|` is bisected until
/// the summed estimate is at most `abs_tol`. Fails after
/// [`MAX_INTERVALS`] panels or when a panel can no longer be split.
pub fn integrate<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, abs_tol: T) -> Result<T> {
    integrate_panels(f, lo, hi, abs_tol, 1)
}

/// [`integrate`] seeded with `initial` equal panels, for integrands with
/// narrow features that a single 15-point panel could step over.
pub fn integrate_panels<T: Real, F: Fn(T) -> T>(f: F, lo: T, hi: T, abs_tol: T, initial: usize) -> Result<T> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Precondition(format!(
            "integration needs finite lo < hi, got [{lo}, {hi}]"
        )));
    }
    if !(abs_tol > T::zero()) {
        return Err(Error::Precondition(format!(
            "tolerance must be positive, got {abs_tol}"
        )));
    }
    let initial = initial.max(1);
    let step = (hi - lo) / T::from_count(initial);
    let mut panels: Vec<Panel<T>> = (0..initial)
        .map(|k| {
            let a = lo + step * T::from_count(k);
            let b = if k + 1 == initial { hi } else { a + step };
            gauss_kronrod_15(&f, a, b)
        })
        .collect();

    let fail = |panels: &[Panel<T>], error: T| Error::QuadratureNonConvergence {
        lo: lo.to_f64().unwrap_or(f64::NAN),
        hi: hi.to_f64().unwrap_or(f64::NAN),
        error: error.to_f64().unwrap_or(f64::NAN),
        tol: abs_tol.to_f64().unwrap_or(f64::NAN),
        intervals: panels.len(),
    };

    loop {
        let error = panels.iter().fold(T::zero(), |acc, p| acc + p.error);
        if !error.is_finite() {
            return Err(fail(&panels, error));
        }
        if error <= abs_tol {
            return Ok(panels.iter().fold(T::zero(), |acc, p| acc + p.value));
        }
        if panels.len() >= MAX_INTERVALS {
            return Err(fail(&panels, error));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| total_cmp(&a.1.error, &b.1.error))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = (p.lo + p.hi) / T::two();
        if !(p.lo < mid && mid < p.hi) {
            panels.push(p);
            return Err(fail(&panels, error));
        }
        panels.push(gauss_kronrod_15(&f, p.lo, mid));
        panels.push(gauss_kronrod_15(&f, mid, p.hi));
    }
}

/// Equal-width histogram over `[min, max]` of the sample, normalized to unit
/// mass. Returns `(bin center, density)` pairs and the bin width.
pub fn density_histogram<T: Real>(samples: &[T], bins: usize) -> Result<(Vec<(T, T)>, T)> {
    if samples.is_empty() {
        return Err(Error::EmptySample);
    }
    if bins == 0 {
        return Err(Error::Precondition("need at least one bin".into()));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::Precondition("sample contains non-finite values".into()));
    }
    let (min, max) = samples
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let (lo, hi) = if max > min {
        (min, max)
    } else {
        // all samples equal: a unit-width bin around the value
        (min - T::half(), min + T::half())
    };
    let width = (hi - lo) / T::from_count(bins);
    let mut counts = vec![0usize; bins];
    for &x in samples {
        let k = ((x - lo) / width).to_usize().unwrap_or(0).min(bins - 1);
        counts[k] += 1;
    }
    let norm = T::from_count(samples.len()) * width;
    let hist = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let center = lo + width * (T::from_count(k) + T::half());
            (center, T::from_count(c) / norm)
        })
        .collect();
    Ok((hist, width))
}

/// Sample mean and unbiased standard deviation.
pub fn mean_and_std<T: Real>(xs: &[T]) -> Result<(T, T)> {
    if xs.len() < 2 {
        return Err(Error::Precondition("need at least two values".into()));
    }
    let n = T::from_count(xs.len());
    let mean = xs.iter().fold(T::zero(), |a, &x| a + x) / n;
    let ss = xs.iter().fold(T::zero(), |a, &x| a + (x - mean) * (x - mean));
    Ok((mean, (ss / (n - T::one())).sqrt()))
}

/// Pearson correlation coefficient of two equally long series.
pub fn correlation<T: Real>(xs: &[T], ys: &[T]) -> Result<T> {
    if xs.len() != ys.len() {
        return Err(Error::Precondition("series lengths differ".into()));
    }
    let (mx, sx) = mean_and_std(xs)?;
    let (my, sy) = mean_and_std(ys)?;
    let n = T::from_count(xs.len());
    let cov = xs
        .iter()
        .zip(ys)
        .fold(T::zero(), |a, (&x, &y)| a + (x - mx) * (y - my))
        / (n - T::one());
    Ok(cov / (sx * sy))
}
