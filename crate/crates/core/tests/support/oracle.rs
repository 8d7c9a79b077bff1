//! Brute-force reference simulator for tiny instances.
//!
//! Recomputes every quantity from positions on every TTI, straight from the
//! textbook formulas, with no shared code beyond the input structs.

use densecell::deployment::{NetworkLayout, NodeKind};
use densecell::reuse::ReuseScheme;
use densecell::scheduler::SchedulerPolicy;
use densecell::ScenarioConfig;

fn mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

fn gain_db(layout: &NetworkLayout, cfg: &ScenarioConfig, cell: usize, ue: usize) -> f64 {
    let c = layout.cells().nth(cell).unwrap();
    let u = &layout.ues[ue];
    let dx = u.position.x - c.position.x;
    let dy = u.position.y - c.position.y;
    let d_km = (dx * dx + dy * dy).sqrt().max(10.0) / 1000.0;
    let p = &cfg.propagation;
    let pl = match c.kind {
        NodeKind::MacroSector => p.macro_pathloss_intercept + p.macro_pathloss_slope * d_km.log10(),
        _ => p.pico_pathloss_intercept + p.pico_pathloss_slope * d_km.log10(),
    };
    let pattern = match c.boresight_azimuth {
        Some(az) => {
            let mut off = dy.atan2(dx).to_degrees() - az;
            while off > 180.0 {
                off -= 360.0;
            }
            while off < -180.0 {
                off += 360.0;
            }
            -f64::min(12.0 * (off / p.antenna_theta3db).powi(2), p.antenna_max_attenuation)
        }
        None => 0.0,
    };
    -pl + c.antenna_gain_dbi + u.antenna_gain_dbi + pattern
}

fn tx_dbm(layout: &NetworkLayout, cell: usize) -> f64 {
    layout.cells().nth(cell).unwrap().tx_power_dbm.unwrap()
}

/// Which RBs `cell` may use.
fn allowed(layout: &NetworkLayout, cfg: &ScenarioConfig, cell: usize, rb: usize) -> bool {
    let n = cfg.l2s.n_rb;
    let c = layout.cells().nth(cell).unwrap();
    match (cfg.reuse.scheme, c.kind) {
        (ReuseScheme::Hard3, NodeKind::MacroSector) => {
            let k = c.sector.unwrap();
            let sizes: Vec<usize> = (0..3).map(|i| n / 3 + if i < n % 3 { 1 } else { 0 }).collect();
            let start: usize = sizes[..k].iter().sum();
            rb >= start && rb < start + sizes[k]
        }
        (ReuseScheme::Full1, _) | (ReuseScheme::Hard3, _) => true,
        _ => panic!("oracle covers full and hard reuse only"),
    }
}

/// Served bits per UE over the whole run.
pub fn reference_bits(layout: &NetworkLayout, cfg: &ScenarioConfig) -> Vec<u64> {
    let n_cells = layout.n_cells();
    let n_ues = layout.ues.len();
    let n_rb = cfg.l2s.n_rb;
    let l2s = &cfg.l2s;

    let rx = |c: usize, u: usize| tx_dbm(layout, c) + gain_db(layout, cfg, c, u);
    let serving: Vec<usize> = (0..n_ues)
        .map(|u| {
            let mut best = 0;
            for c in 1..n_cells {
                if rx(c, u) > rx(best, u) {
                    best = c;
                }
            }
            best
        })
        .collect();
    let active = |c: usize| serving.contains(&c);
    let noise_dbm = l2s.thermal_noise_density + 10.0 * l2s.rb_bandwidth.log10() + l2s.noise_figure;

    let bits_on = |u: usize, rb: usize| -> u64 {
        let s = serving[u];
        let mut interference = 0.0;
        for c in 0..n_cells {
            if c != s && active(c) && allowed(layout, cfg, c, rb) {
                interference += mw(rx(c, u));
            }
        }
        let sinr = mw(rx(s, u)) / (interference + mw(noise_dbm));
        let se = f64::min(
            l2s.bandwidth_efficiency * (1.0 + sinr / l2s.snr_efficiency).log2(),
            l2s.max_spectral_efficiency,
        );
        (se * l2s.rb_bandwidth * l2s.tti_duration).round() as u64
    };

    let mut total = vec![0u64; n_ues];
    let mut rr_next = vec![0usize; n_cells];
    let mut avg = vec![cfg.scheduler.pf_init_epsilon; n_ues];
    for _ in 0..cfg.run.ttis {
        let mut served_now = vec![0u64; n_ues];
        for c in 0..n_cells {
            let ues: Vec<usize> = (0..n_ues).filter(|&u| serving[u] == c).collect();
            if ues.is_empty() {
                continue;
            }
            for rb in (0..n_rb).filter(|&rb| allowed(layout, cfg, c, rb)) {
                let pick = match cfg.scheduler.policy {
                    SchedulerPolicy::RoundRobin => {
                        let k = rr_next[c] % ues.len();
                        rr_next[c] = k + 1;
                        ues[k]
                    }
                    SchedulerPolicy::BestCqi => *ues
                        .iter()
                        .rev()
                        .max_by(|&&a, &&b| bits_on(a, rb).cmp(&bits_on(b, rb)))
                        .unwrap(),
                    SchedulerPolicy::ProportionalFair => *ues
                        .iter()
                        .rev()
                        .max_by(|&&a, &&b| {
                            (bits_on(a, rb) as f64 / avg[a]).total_cmp(&(bits_on(b, rb) as f64 / avg[b]))
                        })
                        .unwrap(),
                };
                served_now[pick] += bits_on(pick, rb);
            }
        }
        let a = 1.0 / cfg.scheduler.pf_time_constant;
        for u in 0..n_ues {
            total[u] += served_now[u];
            avg[u] = (1.0 - a) * avg[u] + a * served_now[u] as f64;
        }
    }
    total
}
