//! Random tiny layouts: up to 3 cells, 4 UEs.

use densecell::deployment::{NetworkLayout, Node, NodeKind, Point, SECTOR_AZIMUTHS};
use densecell::reuse::ReuseScheme;
use densecell::scheduler::SchedulerPolicy;
use densecell::ScenarioConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct MicroInstance {
    pub layout: NetworkLayout,
    pub config: ScenarioConfig,
}

pub fn micro_instance(seed: u64) -> MicroInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_macro = rng.random_range(0..=2usize);
    let n_pico = rng.random_range(usize::from(n_macro == 0)..=3 - n_macro);
    let n_ues = rng.random_range(1..=4usize);

    let macro_sectors: Vec<Node> = (0..n_macro)
        .map(|k| Node {
            id: k,
            kind: NodeKind::MacroSector,
            position: Point::ORIGIN,
            boresight_azimuth: Some(SECTOR_AZIMUTHS[k]),
            tx_power_dbm: Some(46.0),
            antenna_gain_dbi: 14.0,
            site: Some(0),
            sector: Some(k),
        })
        .collect();
    let picos: Vec<Node> = (0..n_pico)
        .map(|i| Node {
            id: n_macro + i,
            kind: NodeKind::Pico,
            position: Point::new(rng.random_range(-250.0..250.0), rng.random_range(-250.0..250.0)),
            boresight_azimuth: None,
            tx_power_dbm: Some(30.0),
            antenna_gain_dbi: 5.0,
            site: Some(0),
            sector: Some(0),
        })
        .collect();
    let ues: Vec<Node> = (0..n_ues)
        .map(|i| Node {
            id: n_macro + n_pico + i,
            kind: NodeKind::Ue,
            position: Point::new(rng.random_range(-300.0..300.0), rng.random_range(-300.0..300.0)),
            boresight_azimuth: None,
            tx_power_dbm: None,
            antenna_gain_dbi: 0.0,
            site: None,
            sector: None,
        })
        .collect();

    let mut config = ScenarioConfig::reference();
    config.propagation.shadowing_enabled = false;
    config.l2s.n_rb = rng.random_range(3..=6);
    config.reuse.scheme = if rng.random_bool(0.5) { ReuseScheme::Full1 } else { ReuseScheme::Hard3 };
    config.scheduler.policy = match rng.random_range(0..3) {
        0 => SchedulerPolicy::RoundRobin,
        1 => SchedulerPolicy::BestCqi,
        _ => SchedulerPolicy::ProportionalFair,
    };
    config.run.ttis = rng.random_range(1..=12);

    MicroInstance {
        layout: NetworkLayout {
            sites: vec![Point::ORIGIN],
            inter_site_distance: 500.0,
            macro_sectors,
            picos,
            ues,
            drop_index: 0,
            seed,
        },
        config,
    }
}
