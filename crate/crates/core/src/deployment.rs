//! Network geometry for one Monte-Carlo drop.
//!
//! Macro sites sit on a hexagonal lattice (centre site plus zero, one or two
//! rings). Each site carries three sectors with boresights at 30°, 150° and
//! 270°, angles measured counter-clockwise from the +x axis. A sector's area
//! is the 120° wedge of the site's hexagonal Voronoi cell centred on its
//! boresight. Picos are dropped uniformly inside their sector's area, UEs
//! uniformly over the union of all site hexagons; both are re-sampled until
//! the minimum-distance constraints hold.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{substream, Stream};

/// Boresight azimuths of the three sectors of a site, in degrees.
pub const SECTOR_AZIMUTHS: [f64; 3] = [30.0, 150.0, 270.0];

/// Re-sampling budget per node before placement gives up.
pub const MAX_PLACEMENT_ATTEMPTS: usize = 1000;

/// UE speed. Recorded for reference only, there is no mobility model.
pub const UE_SPEED_KMH: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioGeometry {
    pub inter_site_distance: f64,
    pub n_macro_sites: usize,
    pub sectors_per_site: usize,
    pub picos_per_sector: usize,
    pub n_ues: usize,
    pub min_macro_pico_dist: f64,
    pub min_pico_pico_dist: f64,
    pub min_macro_ue_dist: f64,
    pub min_pico_ue_dist: f64,
    pub macro_tx_power_dbm: f64,
    pub pico_tx_power_dbm: f64,
    pub macro_antenna_gain_dbi: f64,
    pub pico_antenna_gain_dbi: f64,
    pub ue_antenna_gain_dbi: f64,
}

impl Default for ScenarioGeometry {
    fn default() -> Self {
        Self {
            inter_site_distance: 500.0,
            n_macro_sites: 19,
            sectors_per_site: 3,
            picos_per_sector: 0,
            n_ues: 3420,
            min_macro_pico_dist: 75.0,
            min_pico_pico_dist: 40.0,
            min_macro_ue_dist: 35.0,
            min_pico_ue_dist: 10.0,
            macro_tx_power_dbm: 46.0,
            pico_tx_power_dbm: 30.0,
            macro_antenna_gain_dbi: 14.0,
            pico_antenna_gain_dbi: 5.0,
            ue_antenna_gain_dbi: 0.0,
        }
    }
}

impl ScenarioGeometry {
    pub fn validate(&self) -> Result<()> {
        if !(self.inter_site_distance.is_finite() && self.inter_site_distance > 0.0) {
            return Err(Error::config("geometry.inter_site_distance must be > 0"));
        }
        let minima = [
            ("min_macro_pico_dist", self.min_macro_pico_dist),
            ("min_pico_pico_dist", self.min_pico_pico_dist),
            ("min_macro_ue_dist", self.min_macro_ue_dist),
            ("min_pico_ue_dist", self.min_pico_ue_dist),
        ];
        for (name, v) in minima {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::config(format!("geometry.{name} must be >= 0")));
            }
        }
        if self.sectors_per_site != 3 || !matches!(self.n_macro_sites, 1 | 7 | 19) {
            return Err(Error::UnsupportedGridSize(self.n_macro_sites));
        }
        Ok(())
    }

    pub fn n_macro_sectors(&self) -> usize {
        self.n_macro_sites * self.sectors_per_site
    }

    pub fn n_cells(&self) -> usize {
        self.n_macro_sectors() * (1 + self.picos_per_sector)
    }

    /// Circumradius of a site hexagon.
    fn hex_radius(&self) -> f64 {
        self.inter_site_distance / 3f64.sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Direction from `self` towards `other` in degrees, in (-180, 180].
    pub fn bearing_to(self, other: Point) -> f64 {
        (other.y - self.y).atan2(other.x - self.x).to_degrees()
    }

    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    MacroSector,
    Pico,
    Ue,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::MacroSector => "macro",
            NodeKind::Pico => "pico",
            NodeKind::Ue => "ue",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    /// Unique within the layout: macro sectors first, then picos, then UEs.
    pub id: usize,
    pub kind: NodeKind,
    pub position: Point,
    /// Degrees in [0, 360); macro sectors only.
    pub boresight_azimuth: Option<f64>,
    /// Cells only.
    pub tx_power_dbm: Option<f64>,
    pub antenna_gain_dbi: f64,
    /// Macro site the cell belongs to (for a pico, the site it was dropped in).
    pub site: Option<usize>,
    /// Sector index 0..3 of the macro sector, or of the sector a pico was
    /// dropped in.
    pub sector: Option<usize>,
}

impl Node {
    pub fn is_cell(&self) -> bool {
        self.kind != NodeKind::Ue
    }

    pub fn speed_kmh(&self) -> Option<f64> {
        (self.kind == NodeKind::Ue).then_some(UE_SPEED_KMH)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkLayout {
    pub sites: Vec<Point>,
    pub inter_site_distance: f64,
    pub macro_sectors: Vec<Node>,
    pub picos: Vec<Node>,
    pub ues: Vec<Node>,
    pub drop_index: u64,
    pub seed: u64,
}

impl NetworkLayout {
    /// All cells, macro sectors first. A cell's position in this sequence
    /// equals its `id`.
    pub fn cells(&self) -> impl Iterator<Item = &Node> + Clone {
        self.macro_sectors.iter().chain(self.picos.iter())
    }

    pub fn n_cells(&self) -> usize {
        self.macro_sectors.len() + self.picos.len()
    }

    pub fn cell(&self, id: usize) -> &Node {
        let m = self.macro_sectors.len();
        if id < m {
            &self.macro_sectors[id]
        } else {
            &self.picos[id - m]
        }
    }

    /// Axis-aligned box enclosing every site hexagon, as (min, max).
    pub fn bounding_box(&self) -> (Point, Point) {
        grid_bounding_box(&self.sites, self.inter_site_distance)
    }

    pub fn contains(&self, p: Point) -> bool {
        self.sites
            .iter()
            .any(|&s| in_site_hexagon(p.sub(s), self.inter_site_distance))
    }
}

/// Site centres for a grid of `n_sites` (1, 7 or 19), centre site first,
/// then ring by ring counter-clockwise starting from 30°.
pub fn site_positions(n_sites: usize, isd: f64) -> Result<Vec<Point>> {
    let rings: i32 = match n_sites {
        1 => 0,
        7 => 1,
        19 => 2,
        n => return Err(Error::UnsupportedGridSize(n)),
    };
    // axial coordinates on lattice vectors at 30° and 90°
    let a = Point::new(isd * 30f64.to_radians().cos(), isd * 30f64.to_radians().sin());
    let b = Point::new(0.0, isd);
    let mut sites = Vec::with_capacity(n_sites);
    for q in -rings..=rings {
        for r in -rings..=rings {
            let ring = q.abs().max(r.abs()).max((q + r).abs());
            if ring > rings {
                continue;
            }
            let p = Point::new(q as f64 * a.x + r as f64 * b.x, q as f64 * a.y + r as f64 * b.y);
            let mut ang = p.y.atan2(p.x).to_degrees() - 30.0;
            if ang < -1e-9 {
                ang += 360.0;
            }
            sites.push((ring, ang, p));
        }
    }
    sites.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
    Ok(sites.into_iter().map(|s| s.2).collect())
}

/// Three co-located sector nodes per site.
pub fn build_macro_grid(geometry: &ScenarioGeometry) -> Result<Vec<Node>> {
    geometry.validate()?;
    let sites = site_positions(geometry.n_macro_sites, geometry.inter_site_distance)?;
    Ok(macro_sectors_for(&sites, geometry))
}

fn macro_sectors_for(sites: &[Point], geometry: &ScenarioGeometry) -> Vec<Node> {
    let mut out = Vec::with_capacity(sites.len() * 3);
    for (site, &pos) in sites.iter().enumerate() {
        for (sector, &az) in SECTOR_AZIMUTHS.iter().enumerate() {
            out.push(Node {
                id: out.len(),
                kind: NodeKind::MacroSector,
                position: pos,
                boresight_azimuth: Some(az),
                tx_power_dbm: Some(geometry.macro_tx_power_dbm),
                antenna_gain_dbi: geometry.macro_antenna_gain_dbi,
                site: Some(site),
                sector: Some(sector),
            });
        }
    }
    out
}

/// `rel` is relative to the site centre.
fn in_site_hexagon(rel: Point, isd: f64) -> bool {
    let half = isd / 2.0 + 1e-9;
    [30f64, 90.0, 150.0].iter().all(|deg| {
        let (s, c) = deg.to_radians().sin_cos();
        (rel.x * c + rel.y * s).abs() <= half
    })
}

/// Signed difference `a - b` wrapped to [-180, 180).
pub fn wrap_degrees(d: f64) -> f64 {
    (d + 180.0).rem_euclid(360.0) - 180.0
}

fn in_sector_wedge(rel: Point, azimuth: f64) -> bool {
    let bearing = rel.y.atan2(rel.x).to_degrees();
    let off = wrap_degrees(bearing - azimuth);
    (-60.0..60.0).contains(&off)
}

fn grid_bounding_box(sites: &[Point], isd: f64) -> (Point, Point) {
    let rx = isd / 3f64.sqrt();
    let ry = isd / 2.0;
    let mut lo = Point::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for s in sites {
        lo.x = lo.x.min(s.x - rx);
        lo.y = lo.y.min(s.y - ry);
        hi.x = hi.x.max(s.x + rx);
        hi.y = hi.y.max(s.y + ry);
    }
    (lo, hi)
}

/// Uniform point in the site hexagon, relative to the site centre.
fn sample_in_hexagon<R: Rng + ?Sized>(rng: &mut R, geometry: &ScenarioGeometry) -> Point {
    let rx = geometry.hex_radius();
    let ry = geometry.inter_site_distance / 2.0;
    loop {
        let p = Point::new(rng.random_range(-rx..rx), rng.random_range(-ry..ry));
        if in_site_hexagon(p, geometry.inter_site_distance) {
            return p;
        }
    }
}

fn sample_in_sector<R: Rng + ?Sized>(
    rng: &mut R,
    geometry: &ScenarioGeometry,
    azimuth: f64,
) -> Point {
    loop {
        let p = sample_in_hexagon(rng, geometry);
        if in_sector_wedge(p, azimuth) {
            return p;
        }
    }
}

/// Places `picos_per_sector` picos in every macro sector area.
pub fn drop_picos<R: Rng + ?Sized>(
    sites: &[Point],
    macro_sectors: &[Node],
    geometry: &ScenarioGeometry,
    rng: &mut R,
) -> Result<Vec<Node>> {
    let n = macro_sectors.len() * geometry.picos_per_sector;
    let mut picos: Vec<Node> = Vec::with_capacity(n);
    for m in macro_sectors {
        let site = m.site.expect("macro sector without site");
        let az = m.boresight_azimuth.expect("macro sector without azimuth");
        for _ in 0..geometry.picos_per_sector {
            let index = picos.len();
            let mut placed = None;
            for _ in 0..MAX_PLACEMENT_ATTEMPTS {
                let p = sites[site].add(sample_in_sector(rng, geometry, az));
                let far_from_macros = sites
                    .iter()
                    .all(|&s| p.distance(s) >= geometry.min_macro_pico_dist);
                let far_from_picos = picos
                    .iter()
                    .all(|q| p.distance(q.position) >= geometry.min_pico_pico_dist);
                if far_from_macros && far_from_picos {
                    placed = Some(p);
                    break;
                }
            }
            let position = placed.ok_or(Error::PlacementFailure {
                what: "pico",
                index,
                attempts: MAX_PLACEMENT_ATTEMPTS,
            })?;
            picos.push(Node {
                id: macro_sectors.len() + index,
                kind: NodeKind::Pico,
                position,
                boresight_azimuth: None,
                tx_power_dbm: Some(geometry.pico_tx_power_dbm),
                antenna_gain_dbi: geometry.pico_antenna_gain_dbi,
                site: Some(site),
                sector: m.sector,
            });
        }
    }
    Ok(picos)
}

/// Places `n_ues` UEs uniformly over the union of site hexagons.
pub fn drop_ues<R: Rng + ?Sized>(
    sites: &[Point],
    picos: &[Node],
    first_id: usize,
    geometry: &ScenarioGeometry,
    rng: &mut R,
) -> Result<Vec<Node>> {
    let mut ues = Vec::with_capacity(geometry.n_ues);
    for index in 0..geometry.n_ues {
        let mut placed = None;
        for _ in 0..MAX_PLACEMENT_ATTEMPTS {
            // site hexagons have equal area, so pick one uniformly first
            let site = rng.random_range(0..sites.len());
            let p = sites[site].add(sample_in_hexagon(rng, geometry));
            let ok = sites
                .iter()
                .all(|&s| p.distance(s) >= geometry.min_macro_ue_dist)
                && picos
                    .iter()
                    .all(|q| p.distance(q.position) >= geometry.min_pico_ue_dist);
            if ok {
                placed = Some(p);
                break;
            }
        }
        let position = placed.ok_or(Error::PlacementFailure {
            what: "ue",
            index,
            attempts: MAX_PLACEMENT_ATTEMPTS,
        })?;
        ues.push(Node {
            id: first_id + index,
            kind: NodeKind::Ue,
            position,
            boresight_azimuth: None,
            tx_power_dbm: None,
            antenna_gain_dbi: geometry.ue_antenna_gain_dbi,
            site: None,
            sector: None,
        });
    }
    Ok(ues)
}

/// Full layout for one drop. Picos and UEs draw from their own substreams of
/// `(seed, drop_index)`.
pub fn build_layout(geometry: &ScenarioGeometry, seed: u64, drop_index: u64) -> Result<NetworkLayout> {
    geometry.validate()?;
    let sites = site_positions(geometry.n_macro_sites, geometry.inter_site_distance)?;
    let macro_sectors = macro_sectors_for(&sites, geometry);
    let mut rng = substream(seed, drop_index, Stream::Picos, 0);
    let picos = drop_picos(&sites, &macro_sectors, geometry, &mut rng)?;
    let mut rng = substream(seed, drop_index, Stream::Ues, 0);
    let first_ue = macro_sectors.len() + picos.len();
    let ues = drop_ues(&sites, &picos, first_ue, geometry, &mut rng)?;
    Ok(NetworkLayout {
        sites,
        inter_site_distance: geometry.inter_site_distance,
        macro_sectors,
        picos,
        ues,
        drop_index,
        seed,
    })
}
