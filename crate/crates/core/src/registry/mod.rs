//! Communication requirements of 26 canonical CAV applications and their
//! spatiotemporal classification.

mod classify;
mod data;
mod report;
mod types;

use std::collections::HashSet;

pub use classify::{
    classify, recommend, Classification, ClassifierThresholds, Paradigm, Scale, SpatioTemporalClass,
};
pub use report::{registry_report, ReportEntry, ReportFormat, CSV_HEADER};
pub use types::{
    AppRequirement, Bound, Category, CommLink, Endpoint, FrequencySpec, LatencySpec, RangeSpec,
    SymbolicRange,
};

use crate::error::{Error, Result};

/// Rows per category, in table order.
pub const CATEGORY_SIZES: [(Category, usize); 4] = [
    (Category::ActiveSafety, 8),
    (Category::FuelEmission, 5),
    (Category::Automation, 5),
    (Category::Infotainment, 8),
];

/// Immutable, validated application list.
#[derive(Debug, Clone, PartialEq)]
pub struct Registry {
    apps: Vec<AppRequirement>,
}

/// The built-in registry, ordered by table then row.
pub fn load_registry() -> Vec<AppRequirement> {
    data::builtin()
}

impl Registry {
    pub fn builtin() -> Self {
        Self { apps: data::builtin() }
    }

    /// Validates a replacement list against the registry invariants.
    pub fn from_apps(apps: Vec<AppRequirement>) -> Result<Self> {
        for app in &apps {
            app.validate()?;
        }
        let mut seen = HashSet::new();
        for app in &apps {
            if !seen.insert(app.id.as_str()) {
                return Err(Error::InvalidRegistry(format!("duplicate id `{}`", app.id)));
            }
        }
        let expected: usize = CATEGORY_SIZES.iter().map(|(_, n)| n).sum();
        if apps.len() != expected {
            return Err(Error::InvalidRegistry(format!(
                "expected {expected} applications, found {}",
                apps.len()
            )));
        }
        for (category, n) in CATEGORY_SIZES {
            let found = apps.iter().filter(|a| a.category == category).count();
            if found != n {
                return Err(Error::InvalidRegistry(format!(
                    "expected {n} {category} applications, found {found}"
                )));
            }
        }
        Ok(Self { apps })
    }

    /// Parses a JSON array of applications. A `classification` member on
    /// an entry (as emitted by the JSON report) is ignored; any other
    /// unknown member is rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Vec<serde_json::Value> = serde_json::from_str(text)?;
        let apps = raw
            .into_iter()
            .map(|mut value| {
                if let Some(obj) = value.as_object_mut() {
                    obj.remove("classification");
                }
                serde_json::from_value::<AppRequirement>(value)
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::from_apps(apps)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.apps)?)
    }

    pub fn apps(&self) -> &[AppRequirement] {
        &self.apps
    }

    pub fn get(&self, id: &str) -> Option<&AppRequirement> {
        self.apps.iter().find(|a| a.id.eq_ignore_ascii_case(id))
    }

    pub fn len(&self) -> usize {
        self.apps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.apps.is_empty()
    }

    /// Regime-rule violations over the whole registry; empty when consistent.
    pub fn regime_violations(&self, thresholds: &ClassifierThresholds) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for app in &self.apps {
            let c = classify(app, thresholds)?;
            for (end, class) in [("demanding", c.demanding), ("relaxed", c.relaxed)] {
                let small_small = class.spatial == Scale::Small && class.temporal == Scale::Small;
                if small_small && class.paradigm != Paradigm::V2V {
                    out.push(format!("{} ({end}): Small/Small but {}", app.id, class.paradigm));
                }
                if class.spatial == Scale::Large && class.paradigm == Paradigm::V2V {
                    out.push(format!("{} ({end}): Large spatial scale recommended V2V", app.id));
                }
                if class.paradigm == Paradigm::V2V && !small_small {
                    out.push(format!("{} ({end}): V2V outside Small/Small", app.id));
                }
            }
        }
        Ok(out)
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}
