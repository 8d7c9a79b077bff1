//! Drop orchestration: association, reuse masks, per-RB SINR, the TTI loop
//! and statistics. Also the best-server SINR map.
//!
//! Without fast fading every per-RB SINR is fixed for the whole drop, so it
//! is computed once; the TTI loop still runs every TTI because scheduler
//! state (RR pointer, PF averages) evolves. Cells have disjoint UE sets and
//! no cross-cell coordination, so each cell runs its own TTI loop and cells
//! are processed in parallel. Throughput is accumulated as integer bits.

use std::collections::HashMap;
use std::time::Instant;

use crate::config::ScenarioConfig;
use crate::deployment::{build_layout, NetworkLayout, NodeKind, Point};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::link::{db_to_linear, linear_to_db, noise_power_per_rb, rb_bits, L2sConfig, SinrVector};
use crate::propagation::{build_link_gain_matrix, mean_link_gain_db, LinkGainMatrix, PropagationConfig};
use crate::reuse::{self, RbMask, ReusePlan};
use crate::scheduler::{CellScheduler, SchedulerConfig};

/// Association bias per cell kind, dB.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AssociationBias {
    pub macro_db: f64,
    pub pico_db: f64,
}

impl AssociationBias {
    fn for_kind(&self, kind: NodeKind) -> f64 {
        match kind {
            NodeKind::MacroSector => self.macro_db,
            _ => self.pico_db,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssociationMap {
    /// Serving cell id per UE index.
    pub serving_cell: Vec<usize>,
    pub bias: AssociationBias,
}

impl AssociationMap {
    /// Cells that serve at least one UE.
    pub fn active_cells(&self, n_cells: usize) -> Vec<bool> {
        let mut active = vec![false; n_cells];
        for &c in &self.serving_cell {
            active[c] = true;
        }
        active
    }

    /// UE indices per cell, ascending.
    pub fn members(&self, n_cells: usize) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); n_cells];
        for (u, &c) in self.serving_cell.iter().enumerate() {
            m[c].push(u);
        }
        m
    }
}

/// Received power in mW for every (UE, cell), UE-major.
#[derive(Debug, Clone)]
pub struct RxPowerTable {
    n_cells: usize,
    mw: Vec<f64>,
}

impl RxPowerTable {
    pub fn new(layout: &NetworkLayout, gains: &LinkGainMatrix, exec: Exec) -> Self {
        let tx: Vec<f64> = layout.cells().map(|c| c.tx_power_dbm.unwrap_or(f64::NEG_INFINITY)).collect();
        let n_cells = tx.len();
        let rows = exec.map_range(gains.n_ues(), |u| {
            (0..n_cells).map(|c| db_to_linear(tx[c] + gains.gain_db(c, u))).collect::<Vec<_>>()
        });
        Self {
            n_cells,
            mw: rows.into_iter().flatten().collect(),
        }
    }

    pub fn ue(&self, ue: usize) -> &[f64] {
        &self.mw[ue * self.n_cells..(ue + 1) * self.n_cells]
    }
}

/// Serving cell = argmax of `tx_power + gain + bias`, ties to the lowest id.
pub fn associate(layout: &NetworkLayout, gains: &LinkGainMatrix, bias: AssociationBias, exec: Exec) -> AssociationMap {
    let metric: Vec<(f64, f64)> = layout
        .cells()
        .map(|c| (c.tx_power_dbm.unwrap_or(f64::NEG_INFINITY), bias.for_kind(c.kind)))
        .collect();
    let serving_cell = exec.map_range(gains.n_ues(), |u| {
        let mut best = (usize::MAX, f64::NEG_INFINITY);
        for (c, &(p, b)) in metric.iter().enumerate() {
            let v = p + gains.gain_db(c, u) + b;
            if v > best.1 {
                best = (c, v);
            }
        }
        best.0
    });
    AssociationMap { serving_cell, bias }
}

/// Co-channel interference on `rb` at `ue`, in mW: every other active cell
/// whose mask contains the RB.
pub fn per_rb_interference(
    ue: usize,
    rb: usize,
    serving: usize,
    masks: &[RbMask],
    active: &[bool],
    rx: &RxPowerTable,
) -> f64 {
    rx.ue(ue)
        .iter()
        .enumerate()
        .filter(|&(c, _)| c != serving && active[c] && masks[c].contains(rb))
        .map(|(_, p)| p)
        .sum()
}

/// Groups cells sharing the same mask so per-UE interference is summed per
/// group and then spread over the group's RBs.
struct MaskGroups {
    masks: Vec<RbMask>,
    of_cell: Vec<usize>,
}

impl MaskGroups {
    fn new(cell_masks: &[RbMask]) -> Self {
        let mut index: HashMap<&RbMask, usize> = HashMap::new();
        let mut masks = Vec::new();
        let of_cell = cell_masks
            .iter()
            .map(|m| {
                *index.entry(m).or_insert_with(|| {
                    masks.push(m.clone());
                    masks.len() - 1
                })
            })
            .collect();
        Self { masks, of_cell }
    }

    fn interference(&self, powers: &[f64], serving: usize, active: &[bool], n_rb: usize) -> Vec<f64> {
        let mut per_group = vec![0.0; self.masks.len()];
        for (c, &p) in powers.iter().enumerate() {
            if c != serving && active[c] {
                per_group[self.of_cell[c]] += p;
            }
        }
        let mut out = vec![0.0; n_rb];
        for (g, m) in self.masks.iter().enumerate() {
            if per_group[g] != 0.0 {
                for rb in m.ones() {
                    out[rb] += per_group[g];
                }
            }
        }
        out
    }
}

/// Results of one drop. UE and cell vectors are indexed by UE index and
/// cell id respectively.
#[derive(Debug, Clone, PartialEq)]
pub struct DropStatistics {
    pub drop_index: u64,
    pub seed: u64,
    pub tti_count: usize,
    pub serving_cell: Vec<usize>,
    pub cell_kind: Vec<NodeKind>,
    /// Macro site of each cell (for picos, the site they were dropped in).
    pub cell_site: Vec<Option<usize>>,
    pub per_ue_bits: Vec<u64>,
    pub per_ue_throughput: Vec<f64>,
    pub per_ue_wideband_sinr_db: Vec<f64>,
    pub per_cell_bits: Vec<u64>,
    pub per_cell_throughput: Vec<f64>,
    pub per_cell_ues: Vec<usize>,
    /// RBs handed out per cell over the whole drop.
    pub per_cell_scheduled_rbs: Vec<u64>,
    pub wallclock_seconds: f64,
}

impl DropStatistics {
    pub fn n_ues(&self) -> usize {
        self.serving_cell.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cell_kind.len()
    }

    pub fn mean_ue_throughput(&self) -> f64 {
        if self.per_ue_throughput.is_empty() {
            return 0.0;
        }
        self.per_ue_throughput.iter().sum::<f64>() / self.per_ue_throughput.len() as f64
    }

    /// Equality of everything except the timing field.
    pub fn same_results(&self, other: &Self) -> bool {
        let strip = |s: &Self| Self {
            wallclock_seconds: 0.0,
            ..s.clone()
        };
        strip(self) == strip(other)
    }
}

/// Engine inputs that do not depend on the layout.
#[derive(Debug, Clone, Copy)]
pub struct EngineParams<'a> {
    pub l2s: &'a L2sConfig,
    pub reuse: &'a reuse::ReusePolicy,
    pub scheduler: &'a SchedulerConfig,
    pub bias: AssociationBias,
    pub ttis: usize,
}

impl<'a> EngineParams<'a> {
    pub fn from_config(cfg: &'a ScenarioConfig) -> Self {
        Self {
            l2s: &cfg.l2s,
            reuse: &cfg.reuse,
            scheduler: &cfg.scheduler,
            bias: cfg.run.bias(),
            ttis: cfg.run.ttis,
        }
    }
}

/// Everything fixed for a drop once association and masks are known.
pub struct DropState {
    pub association: AssociationMap,
    pub plan: ReusePlan,
    pub active: Vec<bool>,
    pub sinr: Vec<SinrVector>,
    /// Whole bits per RB per TTI for each UE, 0 where it may not be served.
    pub rb_bits: Vec<Vec<u64>>,
}

/// Association, reuse masks and per-RB SINR/rates for a given layout.
pub fn prepare_drop(layout: &NetworkLayout, gains: &LinkGainMatrix, p: &EngineParams<'_>, exec: Exec) -> Result<DropState> {
    let n_rb = p.l2s.n_rb;
    let n_cells = layout.n_cells();
    let rx = RxPowerTable::new(layout, gains, exec);
    let association = associate(layout, gains, p.bias, exec);
    let active = association.active_cells(n_cells);
    let noise_mw = db_to_linear(noise_power_per_rb(p.l2s));

    // full-reuse wideband SINR drives the FFR centre/edge split
    let reference_db = exec.map_range(layout.ues.len(), |u| {
        let s = association.serving_cell[u];
        let pw = rx.ue(u);
        let i: f64 = pw
            .iter()
            .enumerate()
            .filter(|&(c, _)| c != s && active[c])
            .map(|(_, p)| p)
            .sum();
        linear_to_db(pw[s] / (i + noise_mw))
    });
    let plan = reuse::plan(layout, &association.serving_cell, &reference_db, p.reuse, n_rb)?;

    let groups = MaskGroups::new(&plan.cell_masks);
    let mapper = p.l2s.mapper();
    let hz_s = p.l2s.rb_hz_seconds();
    let per_ue = exec.map_range(layout.ues.len(), |u| {
        let s = association.serving_cell[u];
        let pw = rx.ue(u);
        let interference = groups.interference(pw, s, &active, n_rb);
        let mask = &plan.cell_masks[s];
        let v = SinrVector::from_powers(pw[s], &interference, noise_mw, |rb| mask.contains(rb));
        let elig = &plan.ue_eligibility[u];
        let bits = (0..n_rb)
            .map(|rb| if elig.contains(rb) { rb_bits(&mapper, v.per_rb[rb], hz_s) } else { 0 })
            .collect::<Vec<u64>>();
        (v, bits)
    });
    let (sinr, rb_bits) = per_ue.into_iter().unzip();
    Ok(DropState {
        association,
        plan,
        active,
        sinr,
        rb_bits,
    })
}

/// Runs the TTI loop on a prepared drop. Returns served bits per UE and
/// scheduled RBs per cell.
pub fn run_ttis(state: &DropState, n_cells: usize, p: &EngineParams<'_>, exec: Exec) -> (Vec<u64>, Vec<u64>) {
    let members = state.association.members(n_cells);
    let per_cell = exec.map_range(n_cells, |c| {
        let ues = &members[c];
        let mask = &state.plan.cell_masks[c];
        if ues.is_empty() {
            return (Vec::new(), 0u64);
        }
        let elig: Vec<RbMask> = ues.iter().map(|&u| state.plan.ue_eligibility[u].clone()).collect();
        let rates: Vec<Vec<f64>> = ues
            .iter()
            .map(|&u| state.rb_bits[u].iter().map(|&b| b as f64).collect())
            .collect();
        let mut sched = CellScheduler::new(p.scheduler, ues.len());
        let mut bits = vec![0u64; ues.len()];
        let mut rbs = 0u64;
        for _ in 0..p.ttis {
            let d = sched.schedule(ues, &rates, mask, &elig);
            for (rb, u) in d.assigned() {
                let k = ues.binary_search(&u).expect("scheduled UE not in cell");
                debug_assert!(mask.contains(rb) && elig[k].contains(rb));
                bits[k] += state.rb_bits[u][rb];
                rbs += 1;
            }
        }
        (bits, rbs)
    });
    let mut ue_bits = vec![0u64; state.association.serving_cell.len()];
    let mut cell_rbs = vec![0u64; n_cells];
    for (c, (bits, rbs)) in per_cell.into_iter().enumerate() {
        for (&u, b) in members[c].iter().zip(bits) {
            ue_bits[u] = b;
        }
        cell_rbs[c] = rbs;
    }
    (ue_bits, cell_rbs)
}

/// Simulates a drop on an existing layout and gain matrix.
pub fn simulate_layout(
    layout: &NetworkLayout,
    gains: &LinkGainMatrix,
    p: &EngineParams<'_>,
    exec: Exec,
) -> Result<DropStatistics> {
    if p.ttis == 0 {
        return Err(Error::config("run.ttis must be >= 1"));
    }
    let started = Instant::now();
    let n_cells = layout.n_cells();
    let state = prepare_drop(layout, gains, p, exec)?;
    let (per_ue_bits, per_cell_scheduled_rbs) = run_ttis(&state, n_cells, p, exec);

    let seconds = p.ttis as f64 * p.l2s.tti_duration;
    let serving = state.association.serving_cell.clone();
    let mut per_cell_bits = vec![0u64; n_cells];
    let mut per_cell_ues = vec![0usize; n_cells];
    for (u, &c) in serving.iter().enumerate() {
        per_cell_bits[c] += per_ue_bits[u];
        per_cell_ues[c] += 1;
    }
    Ok(DropStatistics {
        drop_index: layout.drop_index,
        seed: layout.seed,
        tti_count: p.ttis,
        cell_kind: layout.cells().map(|c| c.kind).collect(),
        cell_site: layout.cells().map(|c| c.site).collect(),
        per_ue_throughput: per_ue_bits.iter().map(|&b| b as f64 / seconds).collect(),
        per_ue_wideband_sinr_db: state.sinr.iter().map(|v| linear_to_db(v.wideband)).collect(),
        per_cell_throughput: per_cell_bits.iter().map(|&b| b as f64 / seconds).collect(),
        serving_cell: serving,
        per_ue_bits,
        per_cell_bits,
        per_cell_ues,
        per_cell_scheduled_rbs,
        wallclock_seconds: started.elapsed().as_secs_f64(),
    })
}

/// One complete Monte-Carlo drop: deploy, build gains, simulate.
/// `wallclock_seconds` covers all of it.
pub fn run_drop(cfg: &ScenarioConfig, seed: u64, drop_index: u64, exec: Exec) -> Result<DropStatistics> {
    let started = Instant::now();
    let inner = || -> Result<DropStatistics> {
        let layout = build_layout(&cfg.geometry, seed, drop_index)?;
        let gains = build_link_gain_matrix(&layout, &cfg.propagation, exec);
        simulate_layout(&layout, &gains, &EngineParams::from_config(cfg), exec)
    };
    let mut stats = inner().map_err(|e| Error::Drop {
        drop: drop_index,
        source: Box::new(e),
    })?;
    stats.wallclock_seconds = started.elapsed().as_secs_f64();
    Ok(stats)
}

/// Best-server wideband SINR sampled on a regular grid, row-major with
/// `y` as the slow axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrMapGrid {
    pub resolution: f64,
    pub origin: Point,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl SinrMapGrid {
    pub fn point(&self, ix: usize, iy: usize) -> Point {
        Point::new(
            self.origin.x + ix as f64 * self.resolution,
            self.origin.y + iy as f64 * self.resolution,
        )
    }

    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    /// Pixel closest to `p`, if `p` lies on the grid.
    pub fn nearest(&self, p: Point) -> Option<(usize, usize)> {
        let fx = ((p.x - self.origin.x) / self.resolution).round();
        let fy = ((p.y - self.origin.y) / self.resolution).round();
        if fx < 0.0 || fy < 0.0 || fx as usize >= self.nx || fy as usize >= self.ny {
            return None;
        }
        Some((fx as usize, fy as usize))
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Best-server SINR of a probe UE at `p`: strongest received power over the
/// sum of all other cells plus noise, all cells transmitting on the full band.
pub fn probe_sinr_db(layout: &NetworkLayout, p: Point, rx_gain_dbi: f64, prop: &PropagationConfig, noise_mw: f64) -> f64 {
    let mut best = 0.0f64;
    let mut total = 0.0f64;
    for cell in layout.cells() {
        let dbm = cell.tx_power_dbm.unwrap_or(f64::NEG_INFINITY) + mean_link_gain_db(cell, p, rx_gain_dbi, prop);
        let mw = db_to_linear(dbm);
        total += mw;
        best = best.max(mw);
    }
    linear_to_db(best / (total - best + noise_mw))
}

/// SINR map over the macro-grid bounding box. Shadowing is never applied.
pub fn compute_sinr_map(
    layout: &NetworkLayout,
    prop: &PropagationConfig,
    l2s: &L2sConfig,
    rx_gain_dbi: f64,
    resolution: f64,
    exec: Exec,
) -> Result<SinrMapGrid> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::config("map resolution must be > 0"));
    }
    let (lo, hi) = layout.bounding_box();
    let nx = ((hi.x - lo.x) / resolution).ceil() as usize + 1;
    let ny = ((hi.y - lo.y) / resolution).ceil() as usize + 1;
    let noise_mw = db_to_linear(noise_power_per_rb(l2s));
    let prop = prop.without_shadowing();
    let rows = exec.map_range(ny, |iy| {
        (0..nx)
            .map(|ix| {
                let p = Point::new(lo.x + ix as f64 * resolution, lo.y + iy as f64 * resolution);
                probe_sinr_db(layout, p, rx_gain_dbi, &prop, noise_mw)
            })
            .collect::<Vec<_>>()
    });
    Ok(SinrMapGrid {
        resolution,
        origin: lo,
        nx,
        ny,
        values: rows.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deployment::{Node, ScenarioGeometry};
    use crate::link::rb_rate;
    use crate::reuse::{ReusePolicy, ReuseScheme};
    use crate::scheduler::SchedulerPolicy;

    fn cell(id: usize, kind: NodeKind, at: Point) -> Node {
        let (tx, g, az) = match kind {
            NodeKind::MacroSector => (46.0, 14.0, Some(30.0)),
            _ => (30.0, 5.0, None),
        };
        Node {
            id,
            kind,
            position: at,
            boresight_azimuth: az,
            tx_power_dbm: Some(tx),
            antenna_gain_dbi: g,
            site: Some(0),
            sector: Some(0),
        }
    }

    fn ue(id: usize, at: Point) -> Node {
        Node {
            id,
            kind: NodeKind::Ue,
            position: at,
            boresight_azimuth: None,
            tx_power_dbm: None,
            antenna_gain_dbi: 0.0,
            site: None,
            sector: None,
        }
    }

    fn layout(macros: Vec<Node>, picos: Vec<Node>, ues: Vec<Node>) -> NetworkLayout {
        NetworkLayout {
            sites: vec![Point::ORIGIN],
            inter_site_distance: 500.0,
            macro_sectors: macros,
            picos,
            ues,
            drop_index: 0,
            seed: 1,
        }
    }

    fn gains(l: &NetworkLayout) -> LinkGainMatrix {
        build_link_gain_matrix(l, &PropagationConfig::default().without_shadowing(), Exec::Sequential)
    }

    #[test]
    fn single_cell_single_ue_closed_form() {
        let l = layout(vec![], vec![cell(0, NodeKind::Pico, Point::ORIGIN)], vec![ue(1, Point::new(120.0, 0.0))]);
        let g = gains(&l);
        let cfg = ScenarioConfig::default();
        let p = EngineParams::from_config(&cfg);
        let stats = simulate_layout(&l, &g, &p, Exec::Sequential).unwrap();

        let noise = noise_power_per_rb(&cfg.l2s);
        let sinr = db_to_linear(30.0 + g.gain_db(0, 0) - noise);
        let per_tti = 50.0 * rb_rate(sinr, &cfg.l2s).round();
        assert_eq!(stats.per_ue_throughput[0], per_tti * 1000.0);
        assert_eq!(stats.per_ue_bits[0], per_tti as u64 * 250);
        assert!((stats.per_ue_wideband_sinr_db[0] - linear_to_db(sinr)).abs() < 1e-9);
    }

    #[test]
    fn macro_beats_pico_at_equal_path_loss() {
        let m = cell(0, NodeKind::MacroSector, Point::ORIGIN);
        let pco = cell(1, NodeKind::Pico, Point::new(0.0, 200.0));
        let l = layout(vec![m], vec![pco], vec![ue(2, Point::new(0.0, 100.0))]);
        // same path loss on both links: 46 + 14 vs 30 + 5
        let g = LinkGainMatrix::from_rows(1, vec![vec![-100.0 + 14.0], vec![-100.0 + 5.0]]);
        let a = associate(&l, &g, AssociationBias::default(), Exec::Sequential);
        assert_eq!(a.serving_cell, vec![0]);
    }

    #[test]
    fn pico_bias_flips_association_in_gap() {
        // line topology; brute force over UE positions
        let m = cell(0, NodeKind::MacroSector, Point::ORIGIN);
        let pco = cell(1, NodeKind::Pico, Point::new(400.0, 0.0));
        let m = Node {
            boresight_azimuth: Some(0.0),
            ..m
        };
        let ues: Vec<Node> = (0..60).map(|i| ue(2 + i, Point::new(20.0 + 6.0 * i as f64, 0.0))).collect();
        let l = layout(vec![m], vec![pco], ues);
        let g = gains(&l);
        let plain = associate(&l, &g, AssociationBias::default(), Exec::Sequential);
        let biased = associate(
            &l,
            &g,
            AssociationBias {
                macro_db: 0.0,
                pico_db: 10.0,
            },
            Exec::Sequential,
        );
        for u in 0..60 {
            let pm = 46.0 + g.gain_db(0, u);
            let pp = 30.0 + g.gain_db(1, u);
            let expect_plain = if pp > pm { 1 } else { 0 };
            let expect_biased = if pp + 10.0 > pm { 1 } else { 0 };
            assert_eq!(plain.serving_cell[u], expect_plain);
            assert_eq!(biased.serving_cell[u], expect_biased);
        }
        let flipped = (0..60)
            .filter(|&u| plain.serving_cell[u] != biased.serving_cell[u])
            .count();
        assert!(flipped > 0);
    }

    #[test]
    fn interference_cases() {
        let rx = RxPowerTable {
            n_cells: 3,
            mw: vec![1.0, 1.0, 2.0],
        };
        let full = vec![RbMask::full(6); 3];
        // no other active cell
        assert_eq!(per_rb_interference(0, 0, 0, &full, &[true, false, false], &rx), 0.0);
        // equal-gain co-channel cell
        assert_eq!(per_rb_interference(0, 0, 0, &full, &[true, true, false], &rx), 1.0);
        // disjoint reuse-3 chunks
        let hard: Vec<RbMask> = (0..3).map(|k| reuse::mask_hard_reuse3(k, 6)).collect();
        for rb in hard[0].ones() {
            assert_eq!(per_rb_interference(0, rb, 0, &hard, &[true; 3], &rx), 0.0);
        }
        assert_eq!(per_rb_interference(0, 5, 0, &hard, &[true; 3], &rx), 2.0);
    }

    #[test]
    fn silent_cells_do_not_interfere() {
        let l = layout(
            vec![],
            vec![
                cell(0, NodeKind::Pico, Point::ORIGIN),
                cell(1, NodeKind::Pico, Point::new(100.0, 0.0)),
            ],
            vec![ue(2, Point::new(10.0, 10.0))],
        );
        let g = gains(&l);
        let cfg = ScenarioConfig::default();
        let st = prepare_drop(&l, &g, &EngineParams::from_config(&cfg), Exec::Sequential).unwrap();
        assert_eq!(st.active, vec![true, false]);
        let noise = db_to_linear(noise_power_per_rb(&cfg.l2s));
        let s = db_to_linear(30.0 + g.gain_db(0, 0));
        assert!((st.sinr[0].wideband - s / noise).abs() / (s / noise) < 1e-12);
    }

    fn small_scenario(picos: usize, reuse: ReuseScheme, policy: SchedulerPolicy) -> ScenarioConfig {
        let mut cfg = ScenarioConfig::default();
        cfg.geometry = ScenarioGeometry {
            n_macro_sites: 7,
            picos_per_sector: picos,
            n_ues: 420,
            ..Default::default()
        };
        cfg.reuse = ReusePolicy {
            scheme: reuse,
            ..Default::default()
        };
        cfg.scheduler.policy = policy;
        cfg.run.ttis = 40;
        cfg
    }

    #[test]
    fn drop_invariants_all_schemes() {
        for scheme in [ReuseScheme::Full1, ReuseScheme::Hard3, ReuseScheme::Ffr, ReuseScheme::FAloha] {
            for policy in [SchedulerPolicy::RoundRobin, SchedulerPolicy::ProportionalFair, SchedulerPolicy::BestCqi] {
                let cfg = small_scenario(2, scheme, policy);
                let s = run_drop(&cfg, 3, 0, Exec::default()).unwrap();
                assert_eq!(s.n_ues(), 420);
                for c in 0..s.n_cells() {
                    let sum: u64 = (0..s.n_ues())
                        .filter(|&u| s.serving_cell[u] == c)
                        .map(|u| s.per_ue_bits[u])
                        .sum();
                    assert_eq!(sum, s.per_cell_bits[c]);
                    if s.per_cell_ues[c] == 0 {
                        assert_eq!(s.per_cell_scheduled_rbs[c], 0);
                    }
                    assert!(s.per_cell_scheduled_rbs[c] <= 50 * 40);
                }
                assert!(s.per_ue_throughput.iter().all(|t| *t >= 0.0));
                assert!(s.per_ue_wideband_sinr_db.iter().all(|t| t.is_finite()));
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let cfg = small_scenario(3, ReuseScheme::Ffr, SchedulerPolicy::ProportionalFair);
        let a = run_drop(&cfg, 9, 2, Exec::Sequential).unwrap();
        let b = run_drop(&cfg, 9, 2, Exec::Parallel).unwrap();
        assert!(a.same_results(&b));
    }

    #[test]
    fn removing_interferer_never_lowers_sinr() {
        let cfg = small_scenario(2, ReuseScheme::Full1, SchedulerPolicy::RoundRobin);
        let l = build_layout(&cfg.geometry, 4, 0).unwrap();
        let g = build_link_gain_matrix(&l, &cfg.propagation, Exec::default());
        let rx = RxPowerTable::new(&l, &g, Exec::default());
        let a = associate(&l, &g, AssociationBias::default(), Exec::default());
        let masks = vec![RbMask::full(50); l.n_cells()];
        let active = a.active_cells(l.n_cells());
        for off in (0..l.n_cells()).step_by(5) {
            let mut fewer = active.clone();
            fewer[off] = false;
            for u in (0..l.ues.len()).step_by(7) {
                let s = a.serving_cell[u];
                if s == off {
                    continue;
                }
                let before = per_rb_interference(u, 0, s, &masks, &active, &rx);
                let after = per_rb_interference(u, 0, s, &masks, &fewer, &rx);
                assert!(after <= before);
            }
        }
    }

    #[test]
    fn zero_ttis_rejected() {
        let mut cfg = small_scenario(0, ReuseScheme::Full1, SchedulerPolicy::RoundRobin);
        cfg.run.ttis = 0;
        assert!(run_drop(&cfg, 0, 0, Exec::Sequential).is_err());
    }

    #[test]
    fn map_single_cell_radially_decreasing() {
        let l = layout(vec![], vec![cell(0, NodeKind::Pico, Point::ORIGIN)], vec![]);
        let cfg = ScenarioConfig::default();
        let map = compute_sinr_map(&l, &cfg.propagation, &cfg.l2s, 0.0, 25.0, Exec::default()).unwrap();
        let mut pts: Vec<(f64, f64)> = (0..map.ny)
            .flat_map(|iy| (0..map.nx).map(move |ix| (ix, iy)))
            .map(|(ix, iy)| (map.point(ix, iy).distance(Point::ORIGIN), map.get(ix, iy)))
            .filter(|(d, _)| *d >= 10.0)
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pts.windows(2) {
            if w[1].0 > w[0].0 + 1e-9 {
                assert!(w[1].1 < w[0].1);
            }
        }
    }

    #[test]
    fn map_midpoint_of_twin_cells_is_zero_db() {
        let l = layout(
            vec![],
            vec![
                cell(0, NodeKind::Pico, Point::new(-50.0, 0.0)),
                cell(1, NodeKind::Pico, Point::new(50.0, 0.0)),
            ],
            vec![],
        );
        let cfg = ScenarioConfig::default();
        let noise = db_to_linear(noise_power_per_rb(&cfg.l2s));
        let v = probe_sinr_db(&l, Point::ORIGIN, 0.0, &cfg.propagation, noise);
        assert!(v.abs() < 0.01, "{v}");
    }
}
