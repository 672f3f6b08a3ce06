//! Spatiotemporal scale classification and paradigm recommendation.
//!
//! Range and tolerable latency map onto Small/Medium/Large bands. A
//! requirement is classified at its demanding end (shortest range, tightest
//! latency) and at its relaxed end. The paradigm follows from the band pair:
//!
//! * Large spatial scale, or Large temporal scale with a cloud link: cellular.
//! * Small spatial and Small temporal scale: V2V.
//! * Anything else: both paradigms apply.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::types::{AppRequirement, Bound, LatencySpec, RangeSpec, SymbolicRange};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scale {
    Small,
    Medium,
    Large,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Paradigm {
    V2V,
    Cellular,
    Both,
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Paradigm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpatioTemporalClass {
    pub spatial: Scale,
    pub temporal: Scale,
    pub paradigm: Paradigm,
}

/// Class at the demanding end of each requirement, plus the relaxed end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub demanding: SpatioTemporalClass,
    pub relaxed: SpatioTemporalClass,
}

/// Band edges. Values on an edge belong to the smaller band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierThresholds {
    pub spatial_small_max_m: f64,
    pub spatial_medium_max_m: f64,
    pub temporal_small_max_ms: f64,
    pub temporal_medium_max_ms: f64,
    /// Stand-in length for "cellular radius" ranges. A default, not measured data.
    pub cellular_radius_m: f64,
    /// Stand-in length for inter-vehicle-gap and V2I-distance ranges.
    pub short_range_m: f64,
}

impl Default for ClassifierThresholds {
    fn default() -> Self {
        Self {
            spatial_small_max_m: 300.0,
            spatial_medium_max_m: 1000.0,
            temporal_small_max_ms: 100.0,
            temporal_medium_max_ms: 10_000.0,
            cellular_radius_m: 3000.0,
            short_range_m: 300.0,
        }
    }
}

impl ClassifierThresholds {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.spatial_small_max_m,
            self.spatial_medium_max_m,
            self.temporal_small_max_ms,
            self.temporal_medium_max_ms,
            self.cellular_radius_m,
            self.short_range_m,
        ];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidThresholds("all thresholds must be finite and > 0".into()));
        }
        if self.spatial_small_max_m > self.spatial_medium_max_m {
            return Err(Error::InvalidThresholds("spatial Small edge exceeds Medium edge".into()));
        }
        if self.temporal_small_max_ms > self.temporal_medium_max_ms {
            return Err(Error::InvalidThresholds("temporal Small edge exceeds Medium edge".into()));
        }
        Ok(())
    }
}

/// One end of a requirement on a numeric axis.
#[derive(Debug, Clone, Copy)]
enum End {
    /// `beyond` marks an open lower bound (">= value"): the requirement
    /// reaches past `value`, so an edge value falls into the larger band.
    Value { value: f64, beyond: bool },
    Unbounded,
    Fixed(Scale),
}

impl End {
    fn at(value: f64) -> Self {
        End::Value { value, beyond: false }
    }

    fn past(value: f64) -> Self {
        End::Value { value, beyond: true }
    }

    fn band(self, small_max: f64, medium_max: f64) -> Scale {
        match self {
            End::Unbounded => Scale::Large,
            End::Fixed(scale) => scale,
            End::Value { value, beyond } => {
                let within = |edge: f64| if beyond { value < edge } else { value <= edge };
                if within(small_max) {
                    Scale::Small
                } else if within(medium_max) {
                    Scale::Medium
                } else {
                    Scale::Large
                }
            }
        }
    }
}

fn spatial_ends(range: &RangeSpec, t: &ClassifierThresholds) -> (End, End) {
    match range {
        RangeSpec::Fixed { meters, .. } => (End::at(*meters), End::at(*meters)),
        RangeSpec::Between {
            min_m,
            max_m,
            open_above,
        } => (
            End::at(*min_m),
            End::Value {
                value: *max_m,
                beyond: *open_above,
            },
        ),
        RangeSpec::AtLeast { min_m } => (End::past(*min_m), End::Unbounded),
        RangeSpec::Symbolic {
            scales,
            nominal_m,
            floor_m,
            ceiling_m,
        } => {
            let clamp = |v: f64| {
                let v = floor_m.map_or(v, |lo| v.max(lo));
                ceiling_m.map_or(v, |hi| v.min(hi))
            };
            let mut lengths: Vec<Option<f64>> = scales
                .iter()
                .map(|s| match s {
                    SymbolicRange::CellularRadius => Some(t.cellular_radius_m),
                    SymbolicRange::InterVehicleGaps | SymbolicRange::V2iDistance => Some(t.short_range_m),
                    SymbolicRange::VehicleUserDistance => None,
                    SymbolicRange::ContextDependent => *nominal_m,
                })
                .collect();
            if let Some(n) = nominal_m {
                lengths.push(Some(*n));
            }
            // `None` is unbounded unless a ceiling caps it.
            let resolve = |len: Option<f64>| match (len, ceiling_m) {
                (Some(v), _) => Some(clamp(v)),
                (None, Some(hi)) => Some(*hi),
                (None, None) => None,
            };
            let resolved: Vec<Option<f64>> = lengths.into_iter().map(resolve).collect();
            let shortest = resolved
                .iter()
                .flatten()
                .copied()
                .fold(f64::INFINITY, f64::min);
            let demanding = if shortest.is_finite() {
                End::at(shortest)
            } else {
                End::Unbounded
            };
            let relaxed = if resolved.iter().any(Option::is_none) {
                End::Unbounded
            } else {
                End::at(resolved.iter().flatten().copied().fold(0.0, f64::max))
            };
            (demanding, relaxed)
        }
    }
}

fn temporal_ends(latency: &LatencySpec) -> (End, End) {
    match latency {
        LatencySpec::Bounded { ms, bound } => match bound {
            Bound::AtLeast => (End::past(*ms), End::Unbounded),
            _ => (End::at(*ms), End::at(*ms)),
        },
        LatencySpec::Between { min_ms, max_ms } => (End::at(*min_ms), End::at(*max_ms)),
        LatencySpec::BestEffort => (End::Unbounded, End::Unbounded),
        // No function is given for distance-dependent latency; treated as Medium.
        LatencySpec::DistanceDependent => (End::Fixed(Scale::Medium), End::Fixed(Scale::Medium)),
        LatencySpec::BestEffortOr(inner) => (temporal_ends(inner).0, End::Unbounded),
    }
}

/// Paradigm rule for one (spatial, temporal) cell.
pub fn recommend(spatial: Scale, temporal: Scale, uses_cloud: bool) -> Paradigm {
    match (spatial, temporal) {
        (Scale::Large, _) => Paradigm::Cellular,
        (_, Scale::Large) if uses_cloud => Paradigm::Cellular,
        (Scale::Small, Scale::Small) => Paradigm::V2V,
        _ => Paradigm::Both,
    }
}

pub fn classify(app: &AppRequirement, thresholds: &ClassifierThresholds) -> Result<Classification> {
    app.validate()?;
    thresholds.validate()?;
    let t = thresholds;
    let (near, far) = spatial_ends(&app.range, t);
    let (tight, loose) = temporal_ends(&app.latency);
    let cloud = app.uses_cloud();
    let class = |space: End, time: End| {
        let spatial = space.band(t.spatial_small_max_m, t.spatial_medium_max_m);
        let temporal = time.band(t.temporal_small_max_ms, t.temporal_medium_max_ms);
        SpatioTemporalClass {
            spatial,
            temporal,
            paradigm: recommend(spatial, temporal, cloud),
        }
    };
    Ok(Classification {
        demanding: class(near, tight),
        relaxed: class(far, loose),
    })
}
