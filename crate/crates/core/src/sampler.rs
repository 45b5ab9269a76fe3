//! Rejection-free uniform scattering in a [`SectorAnnulus`].
//!
//! The radius comes from inverting the radial CDF,
//! `r = √(u₁(l2² − l1²) + l1²)`, and the angle from the affine map
//! `θ = u₂(a2 − a1) + a1`, with `u₁`, `u₂` consecutive draws of one stream.

use crate::error::{Error, Result};
use crate::geometry::{PlanarPoint, PolarPoint, SectorAnnulus};
use crate::rng::RandomStream;
use crate::scalar::Real;

fn check_unit<T: Real>(u: T) -> Result<()> {
    if u >= T::zero() && u <= T::one() {
        Ok(())
    } else {
        Err(Error::UniformOutOfRange(u.to_f64().unwrap_or(f64::NAN)))
    }
}

#[inline]
fn radius_unchecked<T: Real>(region: &SectorAnnulus<T>, u: T) -> T {
    let l1 = region.l1();
    let r = (u * region.radial_span_sq() + l1 * l1).sqrt();
    // rounding may step one ulp past either bound
    r.max(l1).min(region.l2())
}

#[inline]
fn angle_unchecked<T: Real>(region: &SectorAnnulus<T>, u: T) -> T {
    (u * region.angular_span() + region.a1())
        .max(region.a1())
        .min(region.a2())
}

/// Inverse of the radial CDF. `u` must lie in `[0, 1]`.
pub fn inverse_radius<T: Real>(region: &SectorAnnulus<T>, u: T) -> Result<T> {
    check_unit(u)?;
    Ok(radius_unchecked(region, u))
}

/// Inverse of the angular CDF. `u` must lie in `[0, 1]`.
pub fn inverse_angle<T: Real>(region: &SectorAnnulus<T>, u: T) -> Result<T> {
    check_unit(u)?;
    Ok(angle_unchecked(region, u))
}

pub fn sample_node<T: Real>(region: &SectorAnnulus<T>, stream: &mut RandomStream) -> PolarPoint<T> {
    let u1 = stream.uniform::<T>();
    let u2 = stream.uniform::<T>();
    PolarPoint::new(radius_unchecked(region, u1), angle_unchecked(region, u2))
}

/// Points scattered in one region, in generation order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch<T> {
    pub region: SectorAnnulus<T>,
    pub polar: Vec<PolarPoint<T>>,
    pub points: Vec<PlanarPoint<T>>,
    pub seed: u64,
}

impl<T: Real> SampleBatch<T> {
    pub fn len(&self) -> usize {
        self.polar.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polar.is_empty()
    }

    pub fn radii(&self) -> impl Iterator<Item = T> + '_ {
        self.polar.iter().map(|p| p.r)
    }

    pub fn angles(&self) -> impl Iterator<Item = T> + '_ {
        self.polar.iter().map(|p| p.theta)
    }
}

/// `n` nodes from `sample_node`, keeping both coordinate forms.
pub fn sample_batch<T: Real>(
    region: &SectorAnnulus<T>,
    n: usize,
    stream: &mut RandomStream,
) -> SampleBatch<T> {
    let polar: Vec<PolarPoint<T>> = (0..n).map(|_| sample_node(region, stream)).collect();
    let points = polar.iter().map(|p| p.to_planar()).collect();
    SampleBatch {
        region: *region,
        polar,
        points,
        seed: stream.seed(),
    }
}
