//! Exact uniform node scattering in circular-sector annuli, path-loss
//! densities under lognormal shadowing, and layered superposition
//! placement of nodes around a base station.
//!
//! The numeric code is generic over [`Real`] (`f32` or `f64`); the `*64`
//! and `*32` aliases below name the common instantiations.

// `!(a < b)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod csa;
pub mod error;
pub mod geometry;
pub mod layout_file;
pub mod pathloss;
pub mod rng;
pub mod sampler;
pub mod scalar;
pub mod statistics;
pub mod verify;

pub use csa::{
    run_csa, superposed_density, validate_layout, CellLayout, Issue, LayerSpec, PlacementResult, SectorSpec,
    TaggedPoint, ValidationReport,
};
pub use error::{Error, Result};
pub use geometry::{canonical_angle, PlanarPoint, PolarPoint, SectorAnnulus};
pub use layout_file::{demo_layout, load_layout, LayoutFile};
pub use pathloss::{
    pl_histogram, pl_pdf_closed_form, pl_pdf_numeric, pl_pdf_unshadowed, q_function, sample_pathloss,
    PathLossDensityPoint, PathLossParams, PlHistogram,
};
pub use rng::RandomStream;
pub use sampler::{inverse_angle, inverse_radius, sample_batch, sample_node, SampleBatch};
pub use scalar::Real;

pub type SectorAnnulus64 = SectorAnnulus<f64>;
pub type SectorAnnulus32 = SectorAnnulus<f32>;
pub type PolarPoint64 = PolarPoint<f64>;
pub type PolarPoint32 = PolarPoint<f32>;
pub type PlanarPoint64 = PlanarPoint<f64>;
pub type PlanarPoint32 = PlanarPoint<f32>;
pub type PathLossParams64 = PathLossParams<f64>;
pub type PathLossParams32 = PathLossParams<f32>;
pub type CellLayout64 = CellLayout<f64>;
pub type CellLayout32 = CellLayout<f32>;
pub type SampleBatch64 = SampleBatch<f64>;
pub type SampleBatch32 = SampleBatch<f32>;
pub type PlacementResult64 = PlacementResult<f64>;
pub type PlacementResult32 = PlacementResult<f32>;
