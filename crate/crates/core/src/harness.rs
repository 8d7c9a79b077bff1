//! Result files and the three front-end operations: scenario runs, the
//! pico-density runtime sweep and SINR map export.
//!
//! Every CSV is long-format with a header row and a trailing `seed` column.
//! UE ids are UE indices within the drop; cell ids are cell indices (macro
//! sectors first, then picos).

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::deployment::{build_layout, NetworkLayout};
use crate::engine::{compute_sinr_map, run_drop, DropStatistics, SinrMapGrid};
use crate::error::{Error, Result};
use crate::exec::Exec;

pub const UE_SINR_CSV: &str = "ue_sinr.csv";
pub const UE_THROUGHPUT_CSV: &str = "ue_throughput.csv";
pub const CELL_THROUGHPUT_CSV: &str = "cell_throughput.csv";
pub const SUMMARY_CSV: &str = "summary.csv";
pub const RESOLVED_CONFIG: &str = "resolved_config.toml";
pub const RUNTIME_CSV: &str = "runtime.csv";
pub const RUNTIME_LONG_CSV: &str = "runtime_long.csv";
pub const SINR_MAP_CSV: &str = "sinr_map.csv";
pub const MAP_CELLS_CSV: &str = "map_cells.csv";

#[derive(Debug, Serialize)]
struct UeSinrRow {
    drop: u64,
    ue_id: usize,
    serving_cell: usize,
    cell_kind: &'static str,
    wideband_sinr_db: f64,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct UeThroughputRow {
    drop: u64,
    ue_id: usize,
    throughput_bps: f64,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct CellThroughputRow {
    drop: u64,
    cell_id: usize,
    cell_kind: &'static str,
    n_ues: usize,
    throughput_bps: f64,
    seed: u64,
}

/// Mean and percentiles of one metric over all reported rows of all drops.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub metric: &'static str,
    pub count: usize,
    pub mean: f64,
    pub p5: f64,
    pub p50: f64,
    pub p95: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuntimeRecord {
    pub picos_per_sector: usize,
    pub n_cells: usize,
    pub n_ues: usize,
    pub wallclock_s: f64,
    pub seed: u64,
}

#[derive(Debug, Serialize)]
struct RuntimeLongRow {
    picos_per_sector: usize,
    metric: &'static str,
    value: f64,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct MapRow {
    x_m: f64,
    y_m: f64,
    sinr_db: f64,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct MapCellRow {
    cell_id: usize,
    cell_kind: &'static str,
    x_m: f64,
    y_m: f64,
    seed: u64,
}

/// Everything a scenario run produced.
#[derive(Debug, Clone)]
pub struct ResultBundle {
    pub config: ScenarioConfig,
    pub drops: Vec<DropStatistics>,
    pub summary: Vec<SummaryRow>,
    /// Engine wall-clock per drop, seconds.
    pub runtime: Vec<f64>,
    pub files: Vec<PathBuf>,
}

/// Linear-interpolated percentile of sorted data, `q` in [0, 100].
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q / 100.0 * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn summarize(metric: &'static str, mut values: Vec<f64>, seed: u64) -> SummaryRow {
    values.sort_by(f64::total_cmp);
    let count = values.len();
    let mean = if count == 0 {
        f64::NAN
    } else {
        values.iter().sum::<f64>() / count as f64
    };
    SummaryRow {
        metric,
        count,
        mean,
        p5: percentile(&values, 5.0),
        p50: percentile(&values, 50.0),
        p95: percentile(&values, 95.0),
        seed,
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<PathBuf> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(file);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(path.to_path_buf())
}

fn write_text(path: &Path, text: &str) -> Result<PathBuf> {
    fs::write(path, text).map_err(|e| Error::io(path, e))?;
    Ok(path.to_path_buf())
}

/// Runs `run.drops` drops and returns their statistics in drop order.
pub fn run_drops(cfg: &ScenarioConfig, exec: Exec) -> Result<Vec<DropStatistics>> {
    cfg.validate()?;
    exec.map_range(cfg.run.drops, |d| run_drop(cfg, cfg.run.seed, d as u64, exec))
        .into_iter()
        .collect()
}

fn reported_ue(s: &DropStatistics, cfg: &ScenarioConfig, u: usize) -> bool {
    !cfg.run.center_site_only || s.cell_site[s.serving_cell[u]] == Some(0)
}

fn reported_cell(s: &DropStatistics, cfg: &ScenarioConfig, c: usize) -> bool {
    !cfg.run.center_site_only || s.cell_site[c] == Some(0)
}

/// Runs the scenario and writes the per-UE, per-cell and summary CSVs plus
/// the resolved configuration into `out_dir`.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path, exec: Exec) -> Result<ResultBundle> {
    let drops = run_drops(cfg, exec)?;
    let seed = cfg.run.seed;
    create_dir(out_dir)?;
    let mut files = Vec::new();

    let ue_rows = || {
        drops.iter().flat_map(move |s| {
            (0..s.n_ues())
                .filter(move |&u| reported_ue(s, cfg, u))
                .map(move |u| (s, u))
        })
    };
    files.push(write_csv(
        &out_dir.join(UE_SINR_CSV),
        ue_rows().map(|(s, u)| UeSinrRow {
            drop: s.drop_index,
            ue_id: u,
            serving_cell: s.serving_cell[u],
            cell_kind: s.cell_kind[s.serving_cell[u]].as_str(),
            wideband_sinr_db: s.per_ue_wideband_sinr_db[u],
            seed,
        }),
    )?);
    files.push(write_csv(
        &out_dir.join(UE_THROUGHPUT_CSV),
        ue_rows().map(|(s, u)| UeThroughputRow {
            drop: s.drop_index,
            ue_id: u,
            throughput_bps: s.per_ue_throughput[u],
            seed,
        }),
    )?);
    files.push(write_csv(
        &out_dir.join(CELL_THROUGHPUT_CSV),
        drops.iter().flat_map(|s| {
            (0..s.n_cells())
                .filter(move |&c| reported_cell(s, cfg, c))
                .map(move |c| CellThroughputRow {
                    drop: s.drop_index,
                    cell_id: c,
                    cell_kind: s.cell_kind[c].as_str(),
                    n_ues: s.per_cell_ues[c],
                    throughput_bps: s.per_cell_throughput[c],
                    seed,
                })
        }),
    )?);

    let summary = vec![
        summarize(
            "ue_throughput_bps",
            ue_rows().map(|(s, u)| s.per_ue_throughput[u]).collect(),
            seed,
        ),
        summarize(
            "ue_wideband_sinr_db",
            ue_rows().map(|(s, u)| s.per_ue_wideband_sinr_db[u]).collect(),
            seed,
        ),
        summarize(
            "cell_throughput_bps",
            drops
                .iter()
                .flat_map(|s| {
                    (0..s.n_cells())
                        .filter(move |&c| reported_cell(s, cfg, c))
                        .map(move |c| s.per_cell_throughput[c])
                })
                .collect(),
            seed,
        ),
    ];
    files.push(write_csv(&out_dir.join(SUMMARY_CSV), summary.iter())?);
    files.push(write_text(&out_dir.join(RESOLVED_CONFIG), &cfg.to_toml())?);

    let runtime = drops.iter().map(|s| s.wallclock_seconds).collect();
    Ok(ResultBundle {
        config: cfg.clone(),
        drops,
        summary,
        runtime,
        files,
    })
}

/// Runs the scenario once per pico density and records the engine
/// wall-clock. With `repeats > 1` each density is timed that many times and
/// the fastest run is kept.
pub fn run_density_sweep(
    cfg: &ScenarioConfig,
    densities: &[usize],
    repeats: usize,
    out_dir: &Path,
    exec: Exec,
) -> Result<Vec<RuntimeRecord>> {
    if densities.is_empty() {
        return Err(Error::config("density sweep needs at least one density"));
    }
    let repeats = repeats.max(1);
    let mut records = Vec::with_capacity(densities.len());
    for &d in densities {
        let mut c = cfg.clone();
        c.geometry.picos_per_sector = d;
        c.validate()?;
        let mut best = f64::INFINITY;
        for _ in 0..repeats {
            let mut total = 0.0;
            for drop in 0..c.run.drops {
                // drops timed one after another so each figure is a single-drop cost
                total += run_drop(&c, c.run.seed, drop as u64, exec)?.wallclock_seconds;
            }
            best = best.min(total);
        }
        records.push(RuntimeRecord {
            picos_per_sector: d,
            n_cells: c.geometry.n_cells(),
            n_ues: c.geometry.n_ues,
            wallclock_s: best,
            seed: c.run.seed,
        });
    }
    create_dir(out_dir)?;
    write_csv(&out_dir.join(RUNTIME_CSV), records.iter())?;
    write_csv(
        &out_dir.join(RUNTIME_LONG_CSV),
        records.iter().flat_map(|r| {
            [
                ("n_cells", r.n_cells as f64),
                ("n_ues", r.n_ues as f64),
                ("wallclock_s", r.wallclock_s),
            ]
            .map(|(metric, value)| RuntimeLongRow {
                picos_per_sector: r.picos_per_sector,
                metric,
                value,
                seed: r.seed,
            })
        }),
    )?;
    write_text(&out_dir.join(RESOLVED_CONFIG), &cfg.to_toml())?;
    Ok(records)
}

/// Best-server SINR map of drop 0 of the scenario, written as `sinr_map.csv`
/// with the cell positions alongside in `map_cells.csv`.
pub fn export_sinr_map(
    cfg: &ScenarioConfig,
    resolution: f64,
    out_dir: &Path,
    exec: Exec,
) -> Result<(NetworkLayout, SinrMapGrid)> {
    cfg.validate()?;
    let layout = build_layout(&cfg.geometry, cfg.run.seed, 0)?;
    let map = compute_sinr_map(
        &layout,
        &cfg.propagation,
        &cfg.l2s,
        cfg.geometry.ue_antenna_gain_dbi,
        resolution,
        exec,
    )?;
    let seed = cfg.run.seed;
    create_dir(out_dir)?;
    write_csv(
        &out_dir.join(SINR_MAP_CSV),
        (0..map.ny).flat_map(|iy| {
            let map = &map;
            (0..map.nx).map(move |ix| {
                let p = map.point(ix, iy);
                MapRow {
                    x_m: p.x,
                    y_m: p.y,
                    sinr_db: map.get(ix, iy),
                    seed,
                }
            })
        }),
    )?;
    write_csv(
        &out_dir.join(MAP_CELLS_CSV),
        layout.cells().map(|c| MapCellRow {
            cell_id: c.id,
            cell_kind: c.kind.as_str(),
            x_m: c.position.x,
            y_m: c.position.y,
            seed,
        }),
    )?;
    write_text(&out_dir.join(RESOLVED_CONFIG), &cfg.to_toml())?;
    Ok((layout, map))
}
