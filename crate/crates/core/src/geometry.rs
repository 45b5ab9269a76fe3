//! Circular-sector annulus regions and their analytic densities.
//!
//! A [`SectorAnnulus`] is the set `{(r, θ) : l1 ≤ r ≤ l2, a1 ≤ θ ≤ a2}`.
//! A point spread uniformly over its area has the polar density
//! `2r / ((l2² − l1²)(a2 − a1))`, which factors into a radial part
//! `2r / (l2² − l1²)` and a flat angular part. All bounds are inclusive.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Maps an angle into `[0, 2π)`.
#[inline]
pub fn canonical_angle<T: Real>(theta: T) -> T {
    let tau = T::tau();
    let t = theta % tau;
    let t = if t < T::zero() { t + tau } else { t };
    // `t + τ` can round up to τ for tiny negative inputs
    if t >= tau {
        T::zero()
    } else {
        t
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint<T> {
    pub r: T,
    pub theta: T,
}

impl<T: Real> PolarPoint<T> {
    pub fn new(r: T, theta: T) -> Self {
        Self { r, theta }
    }

    /// Same point with `theta` folded into `[0, 2π)`.
    pub fn canonical(self) -> Self {
        Self {
            r: self.r,
            theta: canonical_angle(self.theta),
        }
    }

    pub fn to_planar(self) -> PlanarPoint<T> {
        let (s, c) = self.theta.sin_cos();
        PlanarPoint {
            x: self.r * c,
            y: self.r * s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarPoint<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> PlanarPoint<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    /// Polar form with `theta` in `[0, 2π)`.
    pub fn to_polar(self) -> PolarPoint<T> {
        PolarPoint {
            r: self.x.hypot(self.y),
            theta: canonical_angle(self.y.atan2(self.x)),
        }
    }
}

/// Region bounded by two radii and two angles (radians).
///
/// Angles are kept exactly as given, so `a2 = 2π` stays representable;
/// only query points are canonicalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorAnnulus<T> {
    l1: T,
    l2: T,
    a1: T,
    a2: T,
}

impl<T: Real> SectorAnnulus<T> {
    /// Requires `0 ≤ l1 < l2` and `0 ≤ a1 < a2 ≤ 2π`, all finite.
    pub fn new(l1: T, l2: T, a1: T, a2: T) -> Result<Self> {
        let all_finite = [l1, l2, a1, a2].iter().all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidRegion(format!(
                "non-finite bound in (l1={l1}, l2={l2}, a1={a1}, a2={a2})"
            )));
        }
        if !(T::zero() <= l1 && l1 < l2) {
            return Err(Error::InvalidRegion(format!(
                "radii must satisfy 0 <= l1 < l2, got l1={l1}, l2={l2}"
            )));
        }
        if !(T::zero() <= a1 && a1 < a2 && a2 <= T::tau()) {
            return Err(Error::InvalidRegion(format!(
                "angles must satisfy 0 <= a1 < a2 <= 2pi, got a1={a1}, a2={a2}"
            )));
        }
        Ok(Self { l1, l2, a1, a2 })
    }

    /// Full annulus `[l1, l2] × [0, 2π]`.
    pub fn annulus(l1: T, l2: T) -> Result<Self> {
        Self::new(l1, l2, T::zero(), T::tau())
    }

    /// Full disc of radius `radius`.
    pub fn disc(radius: T) -> Result<Self> {
        Self::annulus(T::zero(), radius)
    }

    pub fn l1(&self) -> T {
        self.l1
    }
    pub fn l2(&self) -> T {
        self.l2
    }
    pub fn a1(&self) -> T {
        self.a1
    }
    pub fn a2(&self) -> T {
        self.a2
    }

    /// `l2² − l1²`, computed as a product of sum and difference.
    #[inline]
    pub fn radial_span_sq(&self) -> T {
        (self.l2 - self.l1) * (self.l2 + self.l1)
    }

    #[inline]
    pub fn angular_span(&self) -> T {
        self.a2 - self.a1
    }

    pub fn area(&self) -> T {
        self.radial_span_sq() * self.angular_span() / T::two()
    }

    /// Joint density of `(R, Θ)` with respect to `dr dθ`.
    pub fn joint_pdf(&self, p: PolarPoint<T>) -> T {
        if self.contains(p) {
            T::two() * p.r / (self.radial_span_sq() * self.angular_span())
        } else {
            T::zero()
        }
    }

    /// Density with respect to planar area `dx dy`: `1 / area` inside.
    pub fn planar_pdf(&self, p: PlanarPoint<T>) -> T {
        if self.contains(p.to_polar()) {
            self.area().recip()
        } else {
            T::zero()
        }
    }

    pub fn radial_cdf(&self, r: T) -> T {
        if r <= self.l1 {
            T::zero()
        } else if r >= self.l2 {
            T::one()
        } else {
            // (r − l1)(r + l1) keeps relative accuracy when r is close to l1
            ((r - self.l1) * (r + self.l1) / self.radial_span_sq()).min(T::one())
        }
    }

    pub fn radial_pdf(&self, r: T) -> T {
        if r < self.l1 || r > self.l2 {
            T::zero()
        } else {
            T::two() * r / self.radial_span_sq()
        }
    }

    pub fn angular_cdf(&self, theta: T) -> T {
        if theta <= self.a1 {
            T::zero()
        } else if theta >= self.a2 {
            T::one()
        } else {
            (theta - self.a1) / self.angular_span()
        }
    }

    /// Inclusive membership; the query angle is canonicalized first.
    pub fn contains(&self, p: PolarPoint<T>) -> bool {
        if !(self.l1 <= p.r && p.r <= self.l2) {
            return false;
        }
        let theta = canonical_angle(p.theta);
        let in_span = |t: T| self.a1 <= t && t <= self.a2;
        // θ = 0 is also θ = 2π, which matters when a2 = 2π
        in_span(theta) || (theta == T::zero() && in_span(T::tau()))
    }

    /// Same region with both radii multiplied by `c > 0`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(self.l1 * c, self.l2 * c, self.a1, self.a2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

    fn region(l1: f64, l2: f64, a1: f64, a2: f64) -> SectorAnnulus<f64> {
        SectorAnnulus::new(l1, l2, a1, a2).unwrap()
    }

    #[test]
    fn construction_rejects_degenerate_regions() {
        assert!(SectorAnnulus::new(1.0, 1.0, 0.0, PI).is_err());
        assert!(SectorAnnulus::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(SectorAnnulus::new(-1.0, 1.0, 0.0, PI).is_err());
        assert!(SectorAnnulus::new(0.0, 1.0, 0.0, TAU + 1e-9).is_err());
        assert!(SectorAnnulus::new(0.0, 1.0, -0.1, 1.0).is_err());
        assert!(SectorAnnulus::new(0.0, f64::INFINITY, 0.0, 1.0).is_err());
        assert!(SectorAnnulus::new(0.0, 1.0, 0.0, f64::NAN).is_err());
        assert!(SectorAnnulus::new(0.0, 1.0, 0.0, TAU).is_ok());
    }

    #[test]
    fn area_examples() {
        assert_relative_eq!(region(0.0, 1.0, 0.0, TAU).area(), PI, max_relative = 1e-15);
        assert_relative_eq!(region(0.0, 1.0, 0.0, PI).area(), FRAC_PI_2, max_relative = 1e-15);
        assert_relative_eq!(
            region(3.0, 5.0, 0.0, FRAC_PI_2).area(),
            4.0 * PI,
            max_relative = 1e-15
        );
    }

    #[test]
    fn area_matches_hit_counting() {
        // Plain rejection counting in the bounding square, independent of the sampler.
        let reg = region(3.0, 5.0, 0.0, FRAC_PI_2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 400_000;
        let hits = (0..n)
            .filter(|_| {
                let x: f64 = rng.random::<f64>() * 5.0;
                let y: f64 = rng.random::<f64>() * 5.0;
                reg.contains(PlanarPoint::new(x, y).to_polar())
            })
            .count();
        let p = hits as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt() * 25.0;
        assert!((25.0 * p - 4.0 * PI).abs() < 4.0 * se, "estimate {}", 25.0 * p);
    }

    #[test]
    fn joint_pdf_examples() {
        let disc = region(0.0, 1.0, 0.0, TAU);
        assert_relative_eq!(
            disc.joint_pdf(PolarPoint::new(0.5, 1.0)),
            1.0 / TAU,
            max_relative = 1e-15
        );
        assert_eq!(disc.joint_pdf(PolarPoint::new(1.5, 1.0)), 0.0);
    }

    #[test]
    fn joint_pdf_normalizes_over_region() {
        // Tensor Gauss–Legendre is overkill; the integrand is linear in r and
        // constant in θ, so the midpoint rule is exact up to rounding.
        for reg in [
            region(0.0, 1.0, 0.0, TAU),
            region(3.0, 5.0, FRAC_PI_4, FRAC_PI_2),
            region(200.0, 1000.0, 1.0, 4.0),
        ] {
            let (nr, nt) = (64, 16);
            let hr = (reg.l2() - reg.l1()) / nr as f64;
            let ht = reg.angular_span() / nt as f64;
            let mut total = 0.0;
            let mut planar = 0.0;
            for i in 0..nr {
                let r = reg.l1() + (i as f64 + 0.5) * hr;
                for j in 0..nt {
                    let t = reg.a1() + (j as f64 + 0.5) * ht;
                    let p = PolarPoint::new(r, t);
                    total += reg.joint_pdf(p) * hr * ht;
                    planar += reg.planar_pdf(p.to_planar()) * r * hr * ht;
                }
            }
            assert!((total - 1.0).abs() < 1e-9, "joint total {total}");
            assert!((planar - 1.0).abs() < 1e-9, "planar total {planar}");
        }
    }

    #[test]
    fn radial_cdf_examples() {
        let reg = region(3.0, 5.0, 0.0, 1.0);
        assert_eq!(reg.radial_cdf(4.0), 0.4375);
        assert_eq!(reg.radial_cdf(3.0), 0.0);
        assert_eq!(reg.radial_cdf(5.0), 1.0);
        assert_eq!(reg.radial_cdf(2.0), 0.0);
        assert_eq!(reg.radial_cdf(7.0), 1.0);
    }

    #[test]
    fn radial_pdf_examples() {
        let reg = region(0.0, 1.0, 0.0, 1.0);
        assert_eq!(reg.radial_pdf(1.0), 2.0);
        assert_eq!(reg.radial_pdf(2.0), 0.0);
        assert_eq!(reg.radial_pdf(-0.5), 0.0);
        // trapezoid is exact for a linear integrand
        let n = 1000;
        let h = 1.0 / n as f64;
        let s: f64 = (0..n)
            .map(|i| 0.5 * h * (reg.radial_pdf(i as f64 * h) + reg.radial_pdf((i + 1) as f64 * h)))
            .sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pdf_is_derivative_of_cdf() {
        let reg = region(200.0, 1000.0, 0.0, TAU);
        let h = 1e-5 * (reg.l2() - reg.l1());
        for k in 1..20 {
            let r = reg.l1() + (reg.l2() - reg.l1()) * k as f64 / 20.0;
            let fd = (reg.radial_cdf(r + h) - reg.radial_cdf(r - h)) / (2.0 * h);
            assert!((fd - reg.radial_pdf(r)).abs() < 1e-9, "r={r}");
        }
    }

    #[test]
    fn contains_examples() {
        let half = region(0.0, 1.0, 0.0, PI);
        assert!(half.contains(PolarPoint::new(0.5, FRAC_PI_2)));
        assert!(!half.contains(PolarPoint::new(0.5, 3.0 * FRAC_PI_2)));
        let ring = region(1.0, 2.0, 0.0, PI);
        assert!(ring.contains(PolarPoint::new(1.0, 0.0)));
        assert!(ring.contains(PolarPoint::new(2.0, PI)));
        assert!(!ring.contains(PolarPoint::new(0.999, 1.0)));
    }

    #[test]
    fn contains_handles_wraparound() {
        let upper = region(0.0, 1.0, PI, TAU);
        assert!(upper.contains(PolarPoint::new(0.5, TAU)));
        assert!(upper.contains(PolarPoint::new(0.5, 0.0)));
        assert!(upper.contains(PolarPoint::new(0.5, -FRAC_PI_2)));
        assert!(!upper.contains(PolarPoint::new(0.5, FRAC_PI_2)));
    }

    #[test]
    fn canonical_angle_range() {
        assert_eq!(canonical_angle(TAU), 0.0);
        assert_eq!(canonical_angle(-1e-300), 0.0);
        assert_relative_eq!(canonical_angle(-FRAC_PI_2), 3.0 * FRAC_PI_2);
        assert_relative_eq!(canonical_angle(5.0 * PI), PI, max_relative = 1e-15);
    }

    #[test]
    fn works_in_single_precision() {
        let reg = SectorAnnulus::<f32>::new(3.0, 5.0, 0.0, std::f32::consts::FRAC_PI_2).unwrap();
        assert!((reg.radial_cdf(4.0) - 0.4375).abs() < 1e-7);
        assert!((reg.area() - 4.0 * std::f32::consts::PI).abs() < 1e-5);
    }
}
