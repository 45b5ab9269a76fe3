//! Cell-wide superposition placement.
//!
//! A cell is split into concentric layers, each layer into angular sectors,
//! and every sector receives a fixed number of uniformly scattered nodes.
//! Concatenating the per-sector scatters (layer-major, then sector, then
//! node) gives a heterogeneous placement whose density is the count-weighted
//! mixture of the per-sector uniform densities.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{PlanarPoint, PolarPoint, SectorAnnulus};
use crate::rng::RandomStream;
use crate::sampler::{sample_batch, SampleBatch};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorSpec<T> {
    pub region: SectorAnnulus<T>,
    pub node_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerSpec<T> {
    pub inner_radius: T,
    pub outer_radius: T,
    pub sectors: Vec<SectorSpec<T>>,
}

impl<T: Real> LayerSpec<T> {
    /// Layer `[inner, outer]` cut into sectors given as `(θ_lo, θ_hi, count)`.
    pub fn new(inner: T, outer: T, sectors: &[(T, T, usize)]) -> Result<Self> {
        let sectors = sectors
            .iter()
            .map(|&(lo, hi, count)| {
                Ok(SectorSpec {
                    region: SectorAnnulus::new(inner, outer, lo, hi)?,
                    node_count: count,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            inner_radius: inner,
            outer_radius: outer,
            sectors,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellLayout<T> {
    pub layers: Vec<LayerSpec<T>>,
}

impl<T: Real> CellLayout<T> {
    pub fn new(layers: Vec<LayerSpec<T>>) -> Self {
        Self { layers }
    }

    /// Total number of sectors.
    pub fn sector_count(&self) -> usize {
        self.layers.iter().map(|l| l.sectors.len()).sum()
    }

    pub fn total_nodes(&self) -> usize {
        self.sectors().map(|(_, _, s)| s.node_count).sum()
    }

    /// `(layer index, sector index within layer, sector)` in layout order.
    pub fn sectors(&self) -> impl Iterator<Item = (usize, usize, &SectorSpec<T>)> + '_ {
        self.layers
            .iter()
            .enumerate()
            .flat_map(|(i, layer)| layer.sectors.iter().enumerate().map(move |(j, s)| (i, j, s)))
    }

    /// Same geometry with every sector count replaced by `count`.
    pub fn with_uniform_counts(&self, count: usize) -> Self {
        let mut out = self.clone();
        for layer in &mut out.layers {
            for s in &mut layer.sectors {
                s.node_count = count;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Issue {
    NoSectors,
    EmptyLayer {
        layer: usize,
    },
    SectorRadiusMismatch {
        layer: usize,
        sector: usize,
    },
    RadialOverlap {
        layer: usize,
        next: usize,
    },
    AngularOverlap {
        layer: usize,
        first: usize,
        second: usize,
    },
    RadialGap {
        from: f64,
        to: f64,
    },
    AngularGap {
        layer: usize,
        uncovered: f64,
    },
    NoNodes,
}

impl Issue {
    /// Overlaps and structural faults are errors; uncovered space is not.
    pub fn is_error(&self) -> bool {
        matches!(
            self,
            Issue::NoSectors
                | Issue::SectorRadiusMismatch { .. }
                | Issue::RadialOverlap { .. }
                | Issue::AngularOverlap { .. }
        )
    }
}

impl std::fmt::Display for Issue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Issue::NoSectors => write!(f, "layout has no sectors"),
            Issue::EmptyLayer { layer } => write!(f, "layers[{layer}] has no sectors"),
            Issue::SectorRadiusMismatch { layer, sector } => write!(
                f,
                "layers[{layer}].sectors[{sector}] radii differ from the layer radii"
            ),
            Issue::RadialOverlap { layer, next } => write!(
                f,
                "layers[{layer}] and layers[{next}] overlap or are out of order"
            ),
            Issue::AngularOverlap { layer, first, second } => write!(
                f,
                "layers[{layer}].sectors[{first}] and layers[{layer}].sectors[{second}] overlap"
            ),
            Issue::RadialGap { from, to } => write!(f, "radii ({from}, {to}) are not covered"),
            Issue::AngularGap { layer, uncovered } => {
                write!(f, "layers[{layer}] leaves {uncovered} rad uncovered")
            }
            Issue::NoNodes => write!(f, "every sector count is zero"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.is_error())
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| !i.is_error())
    }

    pub fn is_ok(&self) -> bool {
        self.errors().next().is_none()
    }
}

pub fn validate_layout<T: Real>(layout: &CellLayout<T>) -> ValidationReport {
    let mut issues = Vec::new();
    if layout.sector_count() == 0 {
        issues.push(Issue::NoSectors);
    }
    let as_f64 = |v: T| v.to_f64().unwrap_or(f64::NAN);

    let mut covered_to = T::zero();
    for (i, layer) in layout.layers.iter().enumerate() {
        if layer.sectors.is_empty() {
            issues.push(Issue::EmptyLayer { layer: i });
        }
        for (j, s) in layer.sectors.iter().enumerate() {
            if s.region.l1() != layer.inner_radius || s.region.l2() != layer.outer_radius {
                issues.push(Issue::SectorRadiusMismatch { layer: i, sector: j });
            }
        }

        if let Some(next) = layout.layers.get(i + 1) {
            if layer.outer_radius > next.inner_radius {
                issues.push(Issue::RadialOverlap {
                    layer: i,
                    next: i + 1,
                });
            }
        }
        if layer.inner_radius > covered_to {
            issues.push(Issue::RadialGap {
                from: as_f64(covered_to),
                to: as_f64(layer.inner_radius),
            });
        }
        covered_to = covered_to.max(layer.outer_radius);

        let mut order: Vec<usize> = (0..layer.sectors.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (layer.sectors[a].region.a1(), layer.sectors[b].region.a1());
            x.partial_cmp(&y).unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut spanned = T::zero();
        for w in order.windows(2) {
            let (a, b) = (&layer.sectors[w[0]].region, &layer.sectors[w[1]].region);
            if b.a1() < a.a2() {
                issues.push(Issue::AngularOverlap {
                    layer: i,
                    first: w[0].min(w[1]),
                    second: w[0].max(w[1]),
                });
            }
        }
        for s in &layer.sectors {
            spanned = spanned + s.region.angular_span();
        }
        if !layer.sectors.is_empty() {
            let uncovered = T::tau() - spanned;
            if uncovered > T::lit(1e-9) {
                issues.push(Issue::AngularGap {
                    layer: i,
                    uncovered: as_f64(uncovered),
                });
            }
        }
    }
    if layout.sector_count() > 0 && layout.total_nodes() == 0 {
        issues.push(Issue::NoNodes);
    }
    ValidationReport { issues }
}

/// One node of the superposed placement, tagged with its sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaggedPoint<T> {
    pub layer: usize,
    pub sector: usize,
    /// Position of the sector in layout order.
    pub sector_index: usize,
    pub point: PlanarPoint<T>,
    pub polar: PolarPoint<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacementResult<T> {
    pub per_sector: Vec<SampleBatch<T>>,
    pub superposed: Vec<TaggedPoint<T>>,
    pub seed: u64,
}

/// Scatters every sector of `layout` and superposes the results.
///
/// Sector `m` (layout order) draws from `stream.substream(m)`, so sectors
/// run in parallel and the output depends only on the stream's seed.
pub fn run_csa<T: Real>(layout: &CellLayout<T>, stream: &RandomStream) -> Result<PlacementResult<T>> {
    let report = validate_layout(layout);
    if !report.is_ok() {
        let msg = report
            .errors()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::Layout(msg));
    }
    let sectors: Vec<(usize, usize, SectorSpec<T>)> = layout.sectors().map(|(i, j, s)| (i, j, *s)).collect();
    let per_sector: Vec<SampleBatch<T>> = sectors
        .par_iter()
        .enumerate()
        .map(|(m, (_, _, spec))| {
            let mut sub = stream.substream(m as u64);
            sample_batch(&spec.region, spec.node_count, &mut sub)
        })
        .collect();

    let mut superposed = Vec::with_capacity(layout.total_nodes());
    for (m, ((layer, sector, _), batch)) in sectors.iter().zip(&per_sector).enumerate() {
        superposed.extend(batch.polar.iter().zip(&batch.points).map(|(p, q)| TaggedPoint {
            layer: *layer,
            sector: *sector,
            sector_index: m,
            point: *q,
            polar: *p,
        }));
    }
    Ok(PlacementResult {
        per_sector,
        superposed,
        seed: stream.seed(),
    })
}

/// Density (w.r.t. `dr dθ`) of a point drawn at random from the superposed
/// placement: `(n_m / N) · joint_pdf(sector_m, p)` for the first sector in
/// layout order that contains `p`, or 0.
pub fn superposed_density<T: Real>(layout: &CellLayout<T>, p: PolarPoint<T>) -> T {
    let total = layout.total_nodes();
    if total == 0 {
        return T::zero();
    }
    layout
        .sectors()
        .find(|(_, _, s)| s.region.contains(p))
        .map(|(_, _, s)| T::from_count(s.node_count) / T::from_count(total) * s.region.joint_pdf(p))
        .unwrap_or_else(T::zero)
}
