//! JSON layout files.
//!
//! ```json
//! {
//!   "layers": [
//!     { "r_inner": 0.0, "r_outer": 300.0,
//!       "sectors": [ { "theta_lo": 0.0, "theta_hi": 6.283185307179586, "count": 400 } ] }
//!   ]
//! }
//! ```
//!
//! Radii in meters, angles in radians, counts non-negative integers.
//! Unknown fields are rejected.

use serde::{Deserialize, Serialize};

use crate::csa::{validate_layout, CellLayout, LayerSpec, SectorSpec};
use crate::error::{Error, Result};
use crate::geometry::SectorAnnulus;
use crate::scalar::Real;

/// Three layers, seven sectors, 1000 m cell.
pub const DEMO_LAYOUT_JSON: &str = include_str!("../data/demo_layout.json");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorFile {
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerFile {
    pub r_inner: f64,
    pub r_outer: f64,
    pub sectors: Vec<SectorFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutFile {
    pub layers: Vec<LayerFile>,
}

impl LayoutFile {
    /// Parses JSON; errors carry serde's line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Layout(format!("parse error: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("layout serializes")
    }

    /// Builds the layout, naming the offending field on failure. Geometry
    /// errors (overlaps) are left to [`validate_layout`].
    pub fn to_layout<T: Real>(&self) -> Result<CellLayout<T>> {
        let lit = |v: f64| T::from_f64(v).ok_or_else(|| Error::Layout(format!("{v} not representable")));
        let mut layers = Vec::with_capacity(self.layers.len());
        for (i, layer) in self.layers.iter().enumerate() {
            let (inner, outer) = (lit(layer.r_inner)?, lit(layer.r_outer)?);
            let mut sectors = Vec::with_capacity(layer.sectors.len());
            for (j, s) in layer.sectors.iter().enumerate() {
                let region = SectorAnnulus::new(inner, outer, lit(s.theta_lo)?, lit(s.theta_hi)?)
                    .map_err(|e| Error::Layout(format!("layers[{i}].sectors[{j}]: {e}")))?;
                sectors.push(SectorSpec {
                    region,
                    node_count: s.count,
                });
            }
            layers.push(LayerSpec {
                inner_radius: inner,
                outer_radius: outer,
                sectors,
            });
        }
        Ok(CellLayout::new(layers))
    }

    pub fn from_layout<T: Real>(layout: &CellLayout<T>) -> Self {
        let f = |v: T| v.to_f64().unwrap_or(f64::NAN);
        Self {
            layers: layout
                .layers
                .iter()
                .map(|l| LayerFile {
                    r_inner: f(l.inner_radius),
                    r_outer: f(l.outer_radius),
                    sectors: l
                        .sectors
                        .iter()
                        .map(|s| SectorFile {
                            theta_lo: f(s.region.a1()),
                            theta_hi: f(s.region.a2()),
                            count: s.node_count,
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Parses, builds and validates a layout in one step.
pub fn load_layout<T: Real>(text: &str) -> Result<CellLayout<T>> {
    let layout = LayoutFile::from_json(text)?.to_layout()?;
    let report = validate_layout(&layout);
    if !report.is_ok() {
        let msg = report
            .errors()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::Layout(msg));
    }
    Ok(layout)
}

pub fn demo_layout<T: Real>() -> CellLayout<T> {
    load_layout(DEMO_LAYOUT_JSON).expect("bundled demo layout is valid")
}
