//! Communication-requirement vocabulary for CAV applications.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Communication endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Endpoint {
    Vehicle,
    Infrastructure,
    Cloud,
    MobileDevice,
    Sensor,
}

impl Endpoint {
    fn code(self) -> &'static str {
        match self {
            Endpoint::Vehicle => "V",
            Endpoint::Infrastructure => "I",
            Endpoint::Cloud => "C",
            Endpoint::MobileDevice => "M",
            Endpoint::Sensor => "Sensor",
        }
    }

    fn from_code(code: &str) -> Option<Self> {
        Some(match code {
            "V" => Endpoint::Vehicle,
            "I" => Endpoint::Infrastructure,
            "C" => Endpoint::Cloud,
            "M" => Endpoint::MobileDevice,
            "Sensor" => Endpoint::Sensor,
            _ => return None,
        })
    }
}

/// Directed link, optionally relayed (`V2C2V`).
///
/// Serialized as its short code, e.g. `"I2V"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct CommLink {
    pub from: Endpoint,
    pub via: Option<Endpoint>,
    pub to: Endpoint,
}

impl CommLink {
    pub const fn direct(from: Endpoint, to: Endpoint) -> Self {
        Self { from, via: None, to }
    }

    pub const fn relayed(from: Endpoint, via: Endpoint, to: Endpoint) -> Self {
        Self {
            from,
            via: Some(via),
            to,
        }
    }

    /// Direct link between vehicles and/or roadside infrastructure, the
    /// links a V2V radio can carry.
    pub fn is_v2x_direct(&self) -> bool {
        use Endpoint::*;
        self.via.is_none()
            && matches!(
                (self.from, self.to),
                (Vehicle, Vehicle) | (Vehicle, Infrastructure) | (Infrastructure, Vehicle)
            )
    }

    pub fn touches_cloud(&self) -> bool {
        self.from == Endpoint::Cloud || self.to == Endpoint::Cloud || self.via == Some(Endpoint::Cloud)
    }
}

impl fmt::Display for CommLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}2", self.from.code())?;
        if let Some(via) = self.via {
            write!(f, "{}2", via.code())?;
        }
        f.write_str(self.to.code())
    }
}

impl FromStr for CommLink {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRequirement {
            id: String::new(),
            reason: format!("unrecognized link `{s}`"),
        };
        let parts = s
            .trim()
            .split('2')
            .map(|p| Endpoint::from_code(p).ok_or_else(bad))
            .collect::<Result<Vec<_>>>()?;
        match parts.as_slice() {
            [from, to] => Ok(CommLink::direct(*from, *to)),
            [from, via, to] => Ok(CommLink::relayed(*from, *via, *to)),
            _ => Err(bad()),
        }
    }
}

impl TryFrom<String> for CommLink {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CommLink> for String {
    fn from(link: CommLink) -> Self {
        link.to_string()
    }
}

/// Qualifier attached to a numeric requirement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Exact,
    Approx,
    AtMost,
    AtLeast,
}

impl Bound {
    fn prefix(self) -> &'static str {
        match self {
            Bound::Exact => "",
            Bound::Approx => "~",
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        }
    }
}

/// Range scales that are not a number of meters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolicRange {
    CellularRadius,
    VehicleUserDistance,
    InterVehicleGaps,
    V2iDistance,
    ContextDependent,
}

impl SymbolicRange {
    fn label(self) -> &'static str {
        match self {
            SymbolicRange::CellularRadius => "cellular radius",
            SymbolicRange::VehicleUserDistance => "vehicle-user distance",
            SymbolicRange::InterVehicleGaps => "inter-vehicle gaps",
            SymbolicRange::V2iDistance => "V2I distance",
            SymbolicRange::ContextDependent => "context dependent",
        }
    }
}

/// Communication range requirement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RangeSpec {
    Fixed {
        meters: f64,
        #[serde(default)]
        approx: bool,
    },
    /// `min-max`; `open_above` marks a trailing "+" (e.g. 10m-1km+).
    Between {
        min_m: f64,
        max_m: f64,
        #[serde(default)]
        open_above: bool,
    },
    AtLeast { min_m: f64 },
    Symbolic {
        scales: Vec<SymbolicRange>,
        /// Typical value quoted next to the symbolic scale, if any.
        #[serde(default)]
        nominal_m: Option<f64>,
        #[serde(default)]
        floor_m: Option<f64>,
        #[serde(default)]
        ceiling_m: Option<f64>,
    },
}

fn fmt_m(m: f64) -> String {
    if m >= 1000.0 && (m / 1000.0).fract() == 0.0 {
        format!("{}km", m / 1000.0)
    } else {
        format!("{m}m")
    }
}

fn positive(value: f64) -> bool {
    value.is_finite() && value > 0.0
}

impl RangeSpec {
    pub fn validate(&self) -> std::result::Result<(), String> {
        match self {
            RangeSpec::Fixed { meters, .. } if !positive(*meters) => Err("range must be > 0".into()),
            RangeSpec::Between { min_m, max_m, .. } => {
                if !positive(*min_m) || !positive(*max_m) {
                    Err("range bounds must be > 0".into())
                } else if min_m > max_m {
                    Err(format!("range interval {min_m}..{max_m} is reversed"))
                } else {
                    Ok(())
                }
            }
            RangeSpec::AtLeast { min_m } if !positive(*min_m) => Err("range bound must be > 0".into()),
            RangeSpec::Symbolic {
                scales,
                nominal_m,
                floor_m,
                ceiling_m,
            } => {
                if scales.is_empty() {
                    return Err("symbolic range needs at least one scale".into());
                }
                for v in [nominal_m, floor_m, ceiling_m].into_iter().flatten() {
                    if !positive(*v) {
                        return Err("symbolic range bounds must be > 0".into());
                    }
                }
                if let (Some(lo), Some(hi)) = (floor_m, ceiling_m) {
                    if lo > hi {
                        return Err("symbolic floor exceeds ceiling".into());
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for RangeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RangeSpec::Fixed { meters, approx } => {
                write!(f, "{}{}", if *approx { "~" } else { "" }, fmt_m(*meters))
            }
            RangeSpec::Between {
                min_m,
                max_m,
                open_above,
            } => write!(
                f,
                "{}-{}{}",
                fmt_m(*min_m),
                fmt_m(*max_m),
                if *open_above { "+" } else { "" }
            ),
            RangeSpec::AtLeast { min_m } => write!(f, ">={}", fmt_m(*min_m)),
            RangeSpec::Symbolic {
                scales,
                nominal_m,
                floor_m,
                ceiling_m,
            } => {
                let mut parts: Vec<String> = Vec::new();
                if let Some(n) = nominal_m {
                    parts.push(format!("~{}", fmt_m(*n)));
                }
                parts.extend(scales.iter().map(|s| s.label().to_string()));
                f.write_str(&parts.join(" | "))?;
                if let Some(lo) = floor_m {
                    write!(f, " (>={})", fmt_m(*lo))?;
                }
                if let Some(hi) = ceiling_m {
                    write!(f, " (<={})", fmt_m(*hi))?;
                }
                Ok(())
            }
        }
    }
}

/// Message generation pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FrequencySpec {
    Periodic { hz: f64, bound: Bound },
    EventDriven,
    /// Event-driven messages on top of a bounded periodic stream.
    Mixed { hz: f64, bound: Bound },
}

impl FrequencySpec {
    /// Highest stated periodic rate (the number in the requirement), if any.
    pub fn max_stated_hz(&self) -> Option<f64> {
        match self {
            FrequencySpec::Periodic { hz, .. } | FrequencySpec::Mixed { hz, .. } => Some(*hz),
            FrequencySpec::EventDriven => None,
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        match self.max_stated_hz() {
            Some(hz) if !positive(hz) => Err("frequency must be > 0 Hz".into()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FrequencySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrequencySpec::Periodic { hz, bound } => write!(f, "{}{hz}Hz", bound.prefix()),
            FrequencySpec::EventDriven => f.write_str("event-driven"),
            FrequencySpec::Mixed { hz, bound } => {
                write!(f, "event-driven + periodic {}{hz}Hz", bound.prefix())
            }
        }
    }
}

/// Tolerable latency.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum LatencySpec {
    Bounded { ms: f64, bound: Bound },
    Between { min_ms: f64, max_ms: f64 },
    BestEffort,
    DistanceDependent,
    /// Best effort in general, with the inner bound for some traffic.
    BestEffortOr(Box<LatencySpec>),
}

fn fmt_ms(ms: f64) -> String {
    if ms >= 60_000.0 && (ms / 60_000.0).fract() == 0.0 {
        format!("{}min", ms / 60_000.0)
    } else if ms >= 5000.0 && (ms / 1000.0).fract() == 0.0 {
        format!("{}s", ms / 1000.0)
    } else {
        format!("{ms}ms")
    }
}

impl LatencySpec {
    /// Tightest numeric bound in milliseconds; `None` when nothing is promised.
    pub fn tightest_ms(&self) -> Option<f64> {
        match self {
            LatencySpec::Bounded { ms, .. } => Some(*ms),
            LatencySpec::Between { min_ms, .. } => Some(*min_ms),
            LatencySpec::BestEffort | LatencySpec::DistanceDependent => None,
            LatencySpec::BestEffortOr(inner) => inner.tightest_ms(),
        }
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        match self {
            LatencySpec::Bounded { ms, .. } if !positive(*ms) => Err("latency must be > 0 ms".into()),
            LatencySpec::Between { min_ms, max_ms } => {
                if !positive(*min_ms) || !positive(*max_ms) {
                    Err("latency bounds must be > 0 ms".into())
                } else if min_ms > max_ms {
                    Err("latency interval is reversed".into())
                } else {
                    Ok(())
                }
            }
            LatencySpec::BestEffortOr(inner) => match inner.as_ref() {
                LatencySpec::BestEffort | LatencySpec::BestEffortOr(_) => {
                    Err("best-effort fallback must wrap a numeric bound".into())
                }
                other => other.validate(),
            },
            _ => Ok(()),
        }
    }
}

impl fmt::Display for LatencySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatencySpec::Bounded { ms, bound } => write!(f, "{}{}", bound.prefix(), fmt_ms(*ms)),
            LatencySpec::Between { min_ms, max_ms } => {
                write!(f, "{}-{}", fmt_ms(*min_ms), fmt_ms(*max_ms))
            }
            LatencySpec::BestEffort => f.write_str("best-effort"),
            LatencySpec::DistanceDependent => f.write_str("distance-dependent"),
            LatencySpec::BestEffortOr(inner) => write!(f, "best-effort | {inner}"),
        }
    }
}

/// Application family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    ActiveSafety,
    FuelEmission,
    Automation,
    Infotainment,
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Category::ActiveSafety => "ActiveSafety",
            Category::FuelEmission => "FuelEmission",
            Category::Automation => "Automation",
            Category::Infotainment => "Infotainment",
        })
    }
}

/// Communication requirements of one application.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppRequirement {
    pub id: String,
    pub name: String,
    pub category: Category,
    pub links: Vec<CommLink>,
    pub range: RangeSpec,
    pub frequency: FrequencySpec,
    pub latency: LatencySpec,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

impl AppRequirement {
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: String| Error::InvalidRequirement {
            id: self.id.clone(),
            reason,
        };
        if self.id.trim().is_empty() {
            return Err(fail("empty id".into()));
        }
        if self.links.is_empty() {
            return Err(fail("no communication links".into()));
        }
        self.range.validate().map_err(fail)?;
        self.frequency.validate().map_err(fail)?;
        self.latency.validate().map_err(fail)?;
        Ok(())
    }

    /// Whether a direct V2V/V2I/I2V radio carries any of this application's links.
    pub fn uses_v2x_direct(&self) -> bool {
        self.links.iter().any(CommLink::is_v2x_direct)
    }

    pub fn uses_cloud(&self) -> bool {
        self.links.iter().any(CommLink::touches_cloud)
    }

    pub fn links_label(&self) -> String {
        self.links
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_table_link_parses_and_prints() {
        for code in ["V2V", "I2V", "V2I", "C2V", "V2C", "M2C", "C2M", "V2C2V", "V2Sensor"] {
            let link: CommLink = code.parse().unwrap();
            assert_eq!(link.to_string(), code);
        }
        assert!("V2X".parse::<CommLink>().is_err());
        assert!("V".parse::<CommLink>().is_err());
        assert!("V2C2I2V".parse::<CommLink>().is_err());
    }

    #[test]
    fn link_kinds() {
        let v2c2v: CommLink = "V2C2V".parse().unwrap();
        assert!(!v2c2v.is_v2x_direct());
        assert!(v2c2v.touches_cloud());
        assert!("I2V".parse::<CommLink>().unwrap().is_v2x_direct());
        assert!(!"V2Sensor".parse::<CommLink>().unwrap().is_v2x_direct());
    }

    #[test]
    fn spec_validation() {
        assert!(RangeSpec::Between { min_m: 300.0, max_m: 50.0, open_above: false }
            .validate()
            .is_err());
        assert!(RangeSpec::Fixed { meters: 0.0, approx: false }.validate().is_err());
        assert!(RangeSpec::Symbolic {
            scales: vec![],
            nominal_m: None,
            floor_m: None,
            ceiling_m: None
        }
        .validate()
        .is_err());
        assert!(FrequencySpec::Periodic { hz: -1.0, bound: Bound::Exact }.validate().is_err());
        assert!(LatencySpec::Between { min_ms: 10.0, max_ms: 1.0 }.validate().is_err());
        assert!(LatencySpec::BestEffortOr(Box::new(LatencySpec::BestEffort))
            .validate()
            .is_err());
    }

    #[test]
    fn display_matches_table_notation() {
        assert_eq!(RangeSpec::AtLeast { min_m: 1000.0 }.to_string(), ">=1km");
        assert_eq!(
            RangeSpec::Between { min_m: 10.0, max_m: 1000.0, open_above: true }.to_string(),
            "10m-1km+"
        );
        assert_eq!(
            LatencySpec::Bounded { ms: 10_000.0, bound: Bound::AtLeast }.to_string(),
            ">=10s"
        );
        assert_eq!(
            FrequencySpec::Periodic { hz: 10.0, bound: Bound::Approx }.to_string(),
            "~10Hz"
        );
    }
}
