//! Scenario configuration: a sectioned TOML file, optional `section.key=value`
//! overrides, and validation. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::deployment::ScenarioGeometry;
use crate::engine::AssociationBias;
use crate::error::{Error, Result};
use crate::link::L2sConfig;
use crate::propagation::PropagationConfig;
use crate::reuse::ReusePolicy;
use crate::scheduler::SchedulerConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub ttis: usize,
    pub drops: usize,
    pub output_dir: String,
    /// Report only UEs served by, and cells belonging to, the centre site.
    pub center_site_only: bool,
    pub macro_bias_db: f64,
    pub pico_bias_db: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            ttis: 250,
            drops: 1,
            output_dir: "out".into(),
            center_site_only: false,
            macro_bias_db: 0.0,
            pico_bias_db: 0.0,
        }
    }
}

impl RunConfig {
    pub fn bias(&self) -> AssociationBias {
        AssociationBias {
            macro_db: self.macro_bias_db,
            pico_db: self.pico_bias_db,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub geometry: ScenarioGeometry,
    pub propagation: PropagationConfig,
    pub l2s: L2sConfig,
    pub reuse: ReusePolicy,
    pub scheduler: SchedulerConfig,
    pub run: RunConfig,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self::reference()
    }
}

const REFERENCE_HEADER: &str = "\
# Reference heterogeneous deployment: 19 tri-sector macro sites (57 sectors),
# outdoor picos per macro sector, 3420 uniformly dropped UEs, 10 MHz carrier
# (50 RBs), full reuse, full-buffer Round Robin scheduling, 250 TTIs.
# Every key is listed with its default value.

";

impl ScenarioConfig {
    pub fn reference() -> Self {
        Self {
            geometry: ScenarioGeometry {
                picos_per_sector: 2,
                ..Default::default()
            },
            propagation: PropagationConfig::default(),
            l2s: L2sConfig::default(),
            reuse: ReusePolicy::default(),
            scheduler: SchedulerConfig::default(),
            run: RunConfig::default(),
        }
    }

    /// Reference scenario as a commented TOML document.
    pub fn reference_toml() -> String {
        format!("{REFERENCE_HEADER}{}", Self::reference().to_toml())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config is always representable in TOML")
    }

    pub fn from_toml_str(text: &str, origin: &str) -> Result<Self> {
        let table: toml::Table = toml::from_str(text).map_err(|e| parse_error(origin, e))?;
        Self::from_table(table, origin)
    }

    fn from_table(table: toml::Table, origin: &str) -> Result<Self> {
        let cfg: Self = toml::Value::Table(table).try_into().map_err(|e| parse_error(origin, e))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads `path` (or the reference scenario when `None`) and applies the
    /// `section.key=value` overrides in order.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let (text, origin) = match path {
            Some(p) => (
                std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?,
                p.display().to_string(),
            ),
            None => (Self::reference().to_toml(), "<reference>".to_string()),
        };
        let mut table: toml::Table = toml::from_str(&text).map_err(|e| parse_error(&origin, e))?;
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        Self::from_table(table, &origin)
    }

    /// Applies one `section.key=value` override to an already resolved config.
    pub fn with_override(&self, assignment: &str) -> Result<Self> {
        let mut table: toml::Table = toml::from_str(&self.to_toml()).expect("own TOML output parses");
        apply_override(&mut table, assignment)?;
        Self::from_table(table, "<override>")
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.propagation.validate()?;
        self.l2s.validate()?;
        self.reuse.validate(self.l2s.n_rb)?;
        self.scheduler.validate()?;
        if self.run.ttis == 0 {
            return Err(Error::config("run.ttis must be >= 1"));
        }
        if self.run.drops == 0 {
            return Err(Error::config("run.drops must be >= 1"));
        }
        if self.run.seed > i64::MAX as u64 {
            return Err(Error::config("run.seed must fit in a signed 64-bit integer"));
        }
        Ok(())
    }
}

fn parse_error(origin: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse {
        origin: origin.to_string(),
        message: e.to_string().trim_end().to_string(),
    }
}

fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let bad = |why: &str| Error::Parse {
        origin: "--set".into(),
        message: format!("{assignment:?}: {why}"),
    };
    let (key, raw) = assignment.split_once('=').ok_or_else(|| bad("expected section.key=value"))?;
    let (section, field) = key.trim().split_once('.').ok_or_else(|| bad("key must be section.key"))?;
    if section.is_empty() || field.is_empty() || field.contains('.') {
        return Err(bad("key must be section.key"));
    }
    let raw = raw.trim();
    // TOML literal if it parses as one, bare string otherwise
    let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    let entry = table
        .entry(section.to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    let toml::Value::Table(sec) = entry else {
        return Err(bad("section is not a table"));
    };
    // integers given for float fields are fine; floats for integer fields are not
    sec.insert(field.to_string(), value);
    Ok(())
}
