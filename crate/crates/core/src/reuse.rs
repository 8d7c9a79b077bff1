//! Resource-block masks for the supported spectrum-reuse schemes.
//!
//! Macro sectors follow the scheme directly (full reuse, hard reuse-3 or
//! FFR). Picos transmit on the full band except under F-ALOHA, where each
//! pico draws a random fixed-size RB subset once per drop. With
//! `picos_follow_macro` set, picos take the macro-style mask of the sector
//! they were dropped in instead.

use std::fmt;
use std::ops::Range;

use fixedbitset::FixedBitSet;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::deployment::{NetworkLayout, NodeKind};
use crate::error::{Error, Result};
use crate::rng::{substream, Stream};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RbMask(FixedBitSet);

impl RbMask {
    pub fn empty(n_rb: usize) -> Self {
        Self(FixedBitSet::with_capacity(n_rb))
    }

    pub fn full(n_rb: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(n_rb);
        b.insert_range(..);
        Self(b)
    }

    pub fn from_range(n_rb: usize, range: Range<usize>) -> Self {
        let mut m = Self::empty(n_rb);
        m.0.insert_range(range);
        m
    }

    pub fn from_indices(n_rb: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut m = Self::empty(n_rb);
        for i in idx {
            m.0.insert(i);
        }
        m
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, rb: usize) -> bool {
        self.0.contains(rb)
    }

    pub fn count(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn union(&self, other: &RbMask) -> RbMask {
        let mut b = self.0.clone();
        b.union_with(&other.0);
        Self(b)
    }

    pub fn is_disjoint(&self, other: &RbMask) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &RbMask) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl fmt::Debug for RbMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len()).map(|i| if self.contains(i) { '1' } else { '0' }).collect();
        write!(f, "RbMask({s})")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReuseScheme {
    Full1,
    Hard3,
    Ffr,
    #[serde(rename = "faloha")]
    FAloha,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReusePolicy {
    pub scheme: ReuseScheme,
    pub ffr_center_fraction: f64,
    /// dB; UEs below it are edge UEs.
    pub ffr_edge_sinr_threshold: f64,
    pub faloha_fraction: f64,
    pub picos_follow_macro: bool,
}

impl Default for ReusePolicy {
    fn default() -> Self {
        Self {
            scheme: ReuseScheme::Full1,
            ffr_center_fraction: 0.5,
            ffr_edge_sinr_threshold: 5.0,
            faloha_fraction: 1.0 / 3.0,
            picos_follow_macro: false,
        }
    }
}

impl ReusePolicy {
    pub fn validate(&self, n_rb: usize) -> Result<()> {
        if !(0.0..=1.0).contains(&self.ffr_center_fraction) {
            return Err(Error::config("reuse.ffr_center_fraction must be in [0, 1]"));
        }
        if !(self.faloha_fraction > 0.0 && self.faloha_fraction <= 1.0) {
            return Err(Error::config("reuse.faloha_fraction must be in (0, 1]"));
        }
        if !self.ffr_edge_sinr_threshold.is_finite() {
            return Err(Error::config("reuse.ffr_edge_sinr_threshold must be finite"));
        }
        match self.scheme {
            ReuseScheme::Hard3 if n_rb < 3 => Err(Error::config("hard reuse-3 needs at least 3 RBs")),
            ReuseScheme::Ffr => ffr_bands(n_rb, self.ffr_center_fraction).map(|_| ()),
            _ => Ok(()),
        }
    }
}

/// `ceil(fraction * n)` that ignores rounding noise in the product.
fn ceil_fraction(fraction: f64, n: usize) -> usize {
    ((fraction * n as f64) - 1e-9).ceil().max(0.0) as usize
}

/// Three contiguous chunks of `range`, sizes differing by at most one, the
/// remainder going to the lower chunks.
pub fn split_three(range: Range<usize>) -> [Range<usize>; 3] {
    let n = range.len();
    let (base, rem) = (n / 3, n % 3);
    let mut start = range.start;
    std::array::from_fn(|k| {
        let len = base + usize::from(k < rem);
        let r = start..start + len;
        start += len;
        r
    })
}

pub fn mask_full_reuse(n_rb: usize) -> RbMask {
    RbMask::full(n_rb)
}

pub fn mask_hard_reuse3(sector_index: usize, n_rb: usize) -> RbMask {
    RbMask::from_range(n_rb, split_three(0..n_rb)[sector_index].clone())
}

/// Centre band and the three edge chunks.
fn ffr_bands(n_rb: usize, center_fraction: f64) -> Result<(Range<usize>, [Range<usize>; 3])> {
    let center = ceil_fraction(center_fraction, n_rb).min(n_rb);
    if n_rb - center < 3 {
        return Err(Error::config(format!(
            "FFR edge band has {} RBs, need at least 3",
            n_rb - center
        )));
    }
    Ok((0..center, split_three(center..n_rb)))
}

/// FFR masks for one sector: the cell mask (centre band plus its edge chunk)
/// and one eligibility mask per UE. UEs whose wideband SINR is below the
/// threshold are restricted to the edge chunk, the rest to the centre band.
/// With an empty centre band every UE is an edge UE.
pub fn assign_ffr(
    wideband_sinr_db: &[f64],
    policy: &ReusePolicy,
    sector_index: usize,
    n_rb: usize,
) -> Result<(RbMask, Vec<RbMask>)> {
    let (center, edges) = ffr_bands(n_rb, policy.ffr_center_fraction)?;
    let center = RbMask::from_range(n_rb, center);
    let edge = RbMask::from_range(n_rb, edges[sector_index].clone());
    let cell = center.union(&edge);
    let per_ue = wideband_sinr_db
        .iter()
        .map(|&s| {
            if s < policy.ffr_edge_sinr_threshold || center.is_empty() {
                edge.clone()
            } else {
                center.clone()
            }
        })
        .collect();
    Ok((cell, per_ue))
}

/// Uniformly random subset of `ceil(faloha_fraction * n_rb)` RBs.
pub fn assign_faloha<R: Rng + ?Sized>(policy: &ReusePolicy, n_rb: usize, rng: &mut R) -> RbMask {
    let k = ceil_fraction(policy.faloha_fraction, n_rb).clamp(1, n_rb);
    RbMask::from_indices(n_rb, rand::seq::index::sample(rng, n_rb, k))
}

/// Cell masks and per-UE eligibility for one drop.
#[derive(Debug, Clone, PartialEq)]
pub struct ReusePlan {
    pub cell_masks: Vec<RbMask>,
    pub ue_eligibility: Vec<RbMask>,
}

/// Builds the reuse plan. `serving` maps UE index to cell id and
/// `reference_sinr_db` is each UE's wideband SINR under full reuse, used
/// for the FFR centre/edge split.
pub fn plan(
    layout: &NetworkLayout,
    serving: &[usize],
    reference_sinr_db: &[f64],
    policy: &ReusePolicy,
    n_rb: usize,
) -> Result<ReusePlan> {
    policy.validate(n_rb)?;
    let n_cells = layout.n_cells();
    let mut cell_masks = Vec::with_capacity(n_cells);
    let mut ue_eligibility: Vec<Option<RbMask>> = vec![None; serving.len()];

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_cells];
    for (u, &c) in serving.iter().enumerate() {
        members[c].push(u);
    }

    for cell in layout.cells() {
        let macro_style = cell.kind == NodeKind::MacroSector || policy.picos_follow_macro;
        let sector = || {
            cell.sector
                .ok_or_else(|| Error::config("hard reuse-3 and FFR need a tri-sector macro layout"))
        };
        let mask = match (policy.scheme, macro_style) {
            (ReuseScheme::FAloha, false) => {
                let mut rng = substream(layout.seed, layout.drop_index, Stream::FAloha, cell.id as u64);
                assign_faloha(policy, n_rb, &mut rng)
            }
            (ReuseScheme::Hard3, true) => mask_hard_reuse3(sector()?, n_rb),
            (ReuseScheme::Ffr, true) => {
                let ues = &members[cell.id];
                let sinr: Vec<f64> = ues.iter().map(|&u| reference_sinr_db[u]).collect();
                let (mask, per_ue) = assign_ffr(&sinr, policy, sector()?, n_rb)?;
                for (&u, m) in ues.iter().zip(per_ue) {
                    ue_eligibility[u] = Some(m);
                }
                mask
            }
            _ => mask_full_reuse(n_rb),
        };
        cell_masks.push(mask);
    }

    let ue_eligibility = ue_eligibility
        .into_iter()
        .zip(serving)
        .map(|(m, &c)| m.unwrap_or_else(|| cell_masks[c].clone()))
        .collect();
    Ok(ReusePlan {
        cell_masks,
        ue_eligibility,
    })
}
