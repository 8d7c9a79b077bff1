//! Full-buffer downlink schedulers working at RB granularity.
//!
//! All three policies walk the cell's allowed RBs in index order and only
//! ever pick a UE whose eligibility mask contains the RB. Ties go to the
//! lowest UE id.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reuse::RbMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchedulerPolicy {
    RoundRobin,
    ProportionalFair,
    BestCqi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchedulerConfig {
    pub policy: SchedulerPolicy,
    /// EWMA window of the PF average throughput, in TTIs.
    pub pf_time_constant: f64,
    /// Initial PF average throughput in bits/TTI.
    pub pf_init_epsilon: f64,
}

impl Default for SchedulerConfig {
    fn default() -> Self {
        Self {
            policy: SchedulerPolicy::RoundRobin,
            pf_time_constant: 100.0,
            pf_init_epsilon: 1e-6,
        }
    }
}

impl SchedulerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.pf_time_constant >= 1.0) {
            return Err(Error::config("scheduler.pf_time_constant must be >= 1"));
        }
        if !(self.pf_init_epsilon > 0.0) {
            return Err(Error::config("scheduler.pf_init_epsilon must be > 0"));
        }
        Ok(())
    }
}

/// RB → UE id for one cell and one TTI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleDecision {
    pub assignment: Vec<Option<usize>>,
}

impl ScheduleDecision {
    pub fn unassigned(n_rb: usize) -> Self {
        Self {
            assignment: vec![None; n_rb],
        }
    }

    /// `(rb, ue id)` for every assigned RB.
    pub fn assigned(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(rb, u)| u.map(|u| (rb, u)))
    }

    pub fn count_for(&self, ue: usize) -> usize {
        self.assignment.iter().filter(|a| **a == Some(ue)).count()
    }
}

/// Per-cell scheduler memory. Indices refer to positions in the cell's UE
/// list, which stays fixed for the drop.
#[derive(Debug, Clone, PartialEq)]
pub struct SchedulerState {
    pub rr_pointer: usize,
    pub pf_avg_throughput: Vec<f64>,
}

impl SchedulerState {
    pub fn new(n_ues: usize, cfg: &SchedulerConfig) -> Self {
        Self {
            rr_pointer: 0,
            pf_avg_throughput: vec![cfg.pf_init_epsilon; n_ues],
        }
    }
}

fn check_inputs(ues: &[usize], eligibility: &[RbMask]) {
    debug_assert_eq!(ues.len(), eligibility.len());
    debug_assert!(ues.windows(2).all(|w| w[0] < w[1]), "UE list must be sorted by id");
}

pub fn schedule_rr(
    ues: &[usize],
    cell_mask: &RbMask,
    eligibility: &[RbMask],
    state: &mut SchedulerState,
) -> ScheduleDecision {
    check_inputs(ues, eligibility);
    let mut out = ScheduleDecision::unassigned(cell_mask.len());
    let n = ues.len();
    if n == 0 {
        return out;
    }
    let mut ptr = state.rr_pointer % n;
    for rb in cell_mask.ones() {
        if let Some(k) = (0..n).map(|k| (ptr + k) % n).find(|&k| eligibility[k].contains(rb)) {
            out.assignment[rb] = Some(ues[k]);
            ptr = (k + 1) % n;
        }
    }
    state.rr_pointer = ptr;
    out
}

/// Index of the eligible UE maximising `score(k)`; first index wins ties.
fn argmax_eligible(n: usize, rb: usize, eligibility: &[RbMask], score: impl Fn(usize) -> f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for k in 0..n {
        if !eligibility[k].contains(rb) {
            continue;
        }
        let s = score(k);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((k, s));
        }
    }
    best.map(|b| b.0)
}

/// `rates[k][rb]` is the bits UE `ues[k]` would get on `rb` this TTI.
pub fn schedule_bcqi(
    ues: &[usize],
    rates: &[Vec<f64>],
    cell_mask: &RbMask,
    eligibility: &[RbMask],
) -> ScheduleDecision {
    check_inputs(ues, eligibility);
    let mut out = ScheduleDecision::unassigned(cell_mask.len());
    for rb in cell_mask.ones() {
        out.assignment[rb] = argmax_eligible(ues.len(), rb, eligibility, |k| rates[k][rb]).map(|k| ues[k]);
    }
    out
}

/// Proportional fair: per RB, maximise instantaneous rate over average
/// throughput, then fold this TTI's served bits into every UE's average.
pub fn schedule_pf(
    ues: &[usize],
    rates: &[Vec<f64>],
    state: &mut SchedulerState,
    cfg: &SchedulerConfig,
    cell_mask: &RbMask,
    eligibility: &[RbMask],
) -> ScheduleDecision {
    check_inputs(ues, eligibility);
    let n = ues.len();
    let mut out = ScheduleDecision::unassigned(cell_mask.len());
    let mut served = vec![0.0; n];
    let avg = &state.pf_avg_throughput;
    for rb in cell_mask.ones() {
        if let Some(k) = argmax_eligible(n, rb, eligibility, |k| rates[k][rb] / avg[k]) {
            out.assignment[rb] = Some(ues[k]);
            served[k] += rates[k][rb];
        }
    }
    let alpha = 1.0 / cfg.pf_time_constant;
    for (t, s) in state.pf_avg_throughput.iter_mut().zip(served) {
        *t = (1.0 - alpha) * *t + alpha * s;
    }
    out
}

/// Scheduler for one cell over a drop.
#[derive(Debug, Clone)]
pub struct CellScheduler {
    cfg: SchedulerConfig,
    state: SchedulerState,
}

impl CellScheduler {
    pub fn new(cfg: &SchedulerConfig, n_ues: usize) -> Self {
        Self {
            cfg: cfg.clone(),
            state: SchedulerState::new(n_ues, cfg),
        }
    }

    pub fn state(&self) -> &SchedulerState {
        &self.state
    }

    pub fn schedule(
        &mut self,
        ues: &[usize],
        rates: &[Vec<f64>],
        cell_mask: &RbMask,
        eligibility: &[RbMask],
    ) -> ScheduleDecision {
        match self.cfg.policy {
            SchedulerPolicy::RoundRobin => schedule_rr(ues, cell_mask, eligibility, &mut self.state),
            SchedulerPolicy::BestCqi => schedule_bcqi(ues, rates, cell_mask, eligibility),
            SchedulerPolicy::ProportionalFair => {
                schedule_pf(ues, rates, &mut self.state, &self.cfg, cell_mask, eligibility)
            }
        }
    }
}
