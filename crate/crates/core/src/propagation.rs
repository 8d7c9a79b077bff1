//! Static cell-to-UE link gains: distance path loss, horizontal sector
//! antenna pattern and log-normal shadowing.

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::deployment::{wrap_degrees, NetworkLayout, Node, NodeKind, Point};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::rng::{substream, Stream};

/// Distances below this are clamped before evaluating path loss.
pub const MIN_DISTANCE_M: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagationConfig {
    pub macro_pathloss_intercept: f64,
    pub macro_pathloss_slope: f64,
    pub pico_pathloss_intercept: f64,
    pub pico_pathloss_slope: f64,
    pub macro_shadow_sigma: f64,
    pub pico_shadow_sigma: f64,
    pub shadowing_enabled: bool,
    pub antenna_theta3db: f64,
    pub antenna_max_attenuation: f64,
}

impl Default for PropagationConfig {
    fn default() -> Self {
        Self {
            macro_pathloss_intercept: 128.1,
            macro_pathloss_slope: 37.6,
            pico_pathloss_intercept: 140.7,
            pico_pathloss_slope: 36.7,
            macro_shadow_sigma: 8.0,
            pico_shadow_sigma: 10.0,
            shadowing_enabled: true,
            antenna_theta3db: 70.0,
            antenna_max_attenuation: 25.0,
        }
    }
}

impl PropagationConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.macro_pathloss_slope > 0.0
            && self.pico_pathloss_slope > 0.0
            && self.macro_shadow_sigma >= 0.0
            && self.pico_shadow_sigma >= 0.0
            && self.antenna_theta3db > 0.0
            && self.antenna_theta3db <= 180.0
            && self.antenna_max_attenuation > 0.0
            && self.macro_pathloss_intercept.is_finite()
            && self.pico_pathloss_intercept.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::config(
                "propagation: slopes must be > 0, sigmas >= 0, theta3db in (0, 180], max attenuation > 0",
            ))
        }
    }

    /// Same configuration with shadowing switched off.
    pub fn without_shadowing(&self) -> Self {
        Self {
            shadowing_enabled: false,
            ..self.clone()
        }
    }
}

fn log_distance(intercept: f64, slope: f64, distance_m: f64) -> f64 {
    let d_km = distance_m.max(MIN_DISTANCE_M) / 1000.0;
    intercept + slope * d_km.log10()
}

/// Macro-to-UE path loss in dB.
pub fn pathloss_macro(distance_m: f64, cfg: &PropagationConfig) -> f64 {
    log_distance(cfg.macro_pathloss_intercept, cfg.macro_pathloss_slope, distance_m)
}

/// Pico-to-UE path loss in dB.
pub fn pathloss_pico(distance_m: f64, cfg: &PropagationConfig) -> f64 {
    log_distance(cfg.pico_pathloss_intercept, cfg.pico_pathloss_slope, distance_m)
}

pub fn pathloss(kind: NodeKind, distance_m: f64, cfg: &PropagationConfig) -> f64 {
    match kind {
        NodeKind::MacroSector => pathloss_macro(distance_m, cfg),
        NodeKind::Pico => pathloss_pico(distance_m, cfg),
        NodeKind::Ue => panic!("path loss requested for a UE transmitter"),
    }
}

/// Horizontal sector pattern, `-min(12 (θ/θ3dB)², A_max)`.
pub fn macro_antenna_pattern(angle_offset_deg: f64, cfg: &PropagationConfig) -> f64 {
    let theta = if angle_offset_deg.abs() <= 180.0 {
        angle_offset_deg.abs()
    } else {
        wrap_degrees(angle_offset_deg).abs()
    };
    -(12.0 * (theta / cfg.antenna_theta3db).powi(2)).min(cfg.antenna_max_attenuation)
}

/// Pattern gain of `cell` towards `target`; 0 dB for omnidirectional cells.
pub fn pattern_gain(cell: &Node, target: Point, cfg: &PropagationConfig) -> f64 {
    match cell.boresight_azimuth {
        Some(az) => macro_antenna_pattern(cell.position.bearing_to(target) - az, cfg),
        None => 0.0,
    }
}

/// Deterministic part of the link gain (everything except shadowing), dB.
pub fn mean_link_gain_db(cell: &Node, target: Point, rx_gain_dbi: f64, cfg: &PropagationConfig) -> f64 {
    let d = cell.position.distance(target);
    -pathloss(cell.kind, d, cfg) + cell.antenna_gain_dbi + rx_gain_dbi + pattern_gain(cell, target, cfg)
}

fn shadow_sigma(kind: NodeKind, cfg: &PropagationConfig) -> f64 {
    match kind {
        NodeKind::MacroSector => cfg.macro_shadow_sigma,
        _ => cfg.pico_shadow_sigma,
    }
}

/// Gain in dB for every (cell, UE) pair, row-major by cell.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkGainMatrix {
    n_cells: usize,
    n_ues: usize,
    gains_db: Vec<f64>,
}

impl LinkGainMatrix {
    pub fn from_rows(n_ues: usize, rows: Vec<Vec<f64>>) -> Self {
        let n_cells = rows.len();
        let gains_db: Vec<f64> = rows.into_iter().flatten().collect();
        assert_eq!(gains_db.len(), n_cells * n_ues);
        Self {
            n_cells,
            n_ues,
            gains_db,
        }
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn n_ues(&self) -> usize {
        self.n_ues
    }

    pub fn gain_db(&self, cell: usize, ue: usize) -> f64 {
        self.gains_db[cell * self.n_ues + ue]
    }

    pub fn row(&self, cell: usize) -> &[f64] {
        &self.gains_db[cell * self.n_ues..(cell + 1) * self.n_ues]
    }
}

/// Builds the gain matrix for `layout`. Each cell row draws its shadowing
/// from a substream keyed by the cell id, so rows can be filled in parallel.
pub fn build_link_gain_matrix(layout: &NetworkLayout, cfg: &PropagationConfig, exec: Exec) -> LinkGainMatrix {
    let cells: Vec<&Node> = layout.cells().collect();
    let rows = exec.map_range(cells.len(), |c| {
        let cell = cells[c];
        let mut row: Vec<f64> = layout
            .ues
            .iter()
            .map(|u| mean_link_gain_db(cell, u.position, u.antenna_gain_dbi, cfg))
            .collect();
        let sigma = shadow_sigma(cell.kind, cfg);
        if cfg.shadowing_enabled && sigma > 0.0 {
            let mut rng = substream(layout.seed, layout.drop_index, Stream::Shadowing, cell.id as u64);
            let normal = Normal::new(0.0, sigma).expect("finite sigma");
            for g in &mut row {
                *g += normal.sample(&mut rng);
            }
        }
        row
    });
    LinkGainMatrix::from_rows(layout.ues.len(), rows)
}
