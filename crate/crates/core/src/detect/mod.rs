//! Multiuser detectors for one chip-rate observation.
//!
//! Symbol vectors are carried as indices into the [`Constellation`] so that
//! relays can re-modulate decisions and the harness can count bit errors from
//! the Gray labels. All detectors are pure functions of their inputs.

mod candidates;
mod constellation;
mod glpic;
mod matrix;
mod ml;
mod pic;
mod rake;
mod reliability;
mod sic;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use candidates::enumerate_candidates;
pub use constellation::{Constellation, Modulation};
pub use glpic::{gl_pic_detect, gl_pic_trace, GlPicTrace};
pub use matrix::{inner, EffectiveChannelMatrix};
pub use ml::{ml_select, residual_norm_sq};
pub use pic::{conventional_pic, pic_stage};
pub use rake::{rake_detect, rake_front_end, SoftEstimateVector};
pub use reliability::{classify_reliability, ReliabilityPartition};
pub use sic::conventional_sic;

use crate::{Complex, Error, Result};

/// Default ceiling on `N_c^{n_q}`.
pub const DEFAULT_LIST_CAP: usize = 4096;

/// Shape of the region whose soft estimates are deemed unreliable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreyRegion {
    /// Within `d_th` of any slicer decision boundary. The bands have no
    /// extent limit along the boundary direction.
    #[default]
    BoundaryBand,
    /// Farther than `d_th` from the nearest constellation point.
    NearestPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub d_th: f64,
    pub n_q: usize,
    pub pic_iterations: usize,
    #[serde(rename = "modulation")]
    pub constellation: Constellation,
    #[serde(default)]
    pub grey_region: GreyRegion,
    #[serde(default = "default_list_cap")]
    pub list_cap: usize,
}

fn default_list_cap() -> usize {
    DEFAULT_LIST_CAP
}

impl Default for DetectorConfig {
    /// BPSK, `d_th = 0.25`, `n_q = 2`, three PIC iterations.
    fn default() -> Self {
        Self {
            d_th: 0.25,
            n_q: 2,
            pic_iterations: 3,
            constellation: Constellation::bpsk(),
            grey_region: GreyRegion::BoundaryBand,
            list_cap: DEFAULT_LIST_CAP,
        }
    }
}

impl DetectorConfig {
    /// Checks the configuration against the number of users it will serve.
    pub fn validate(&self, users: usize) -> Result<()> {
        if self.d_th.is_nan() || self.d_th < 0.0 {
            return Err(Error::config("dth", format!("{} must be nonnegative", self.d_th)));
        }
        if self.pic_iterations == 0 {
            return Err(Error::config("iters", "at least one PIC iteration is required"));
        }
        if self.n_q > users {
            return Err(Error::config(
                "nq",
                format!("n_q = {} exceeds the number of users {users}", self.n_q),
            ));
        }
        let list = list_size(self.constellation.len(), self.n_q);
        if list.is_none_or(|n| n > self.list_cap) {
            return Err(Error::config(
                "nq",
                format!(
                    "candidate list {}^{} exceeds the cap of {}",
                    self.constellation.len(),
                    self.n_q,
                    self.list_cap
                ),
            ));
        }
        Ok(())
    }
}

pub(crate) fn list_size(points: usize, n_q: usize) -> Option<usize> {
    points.checked_pow(u32::try_from(n_q).ok()?)
}

/// Detector selectable at a relay or the destination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    Rake,
    Sic,
    Pic,
    #[serde(rename = "glpic")]
    GlPic,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 4] = [
        DetectorKind::Rake,
        DetectorKind::Sic,
        DetectorKind::Pic,
        DetectorKind::GlPic,
    ];

    pub fn detect(
        self,
        y: &[Complex],
        h: &EffectiveChannelMatrix,
        config: &DetectorConfig,
    ) -> Result<Vec<usize>> {
        let c = &config.constellation;
        match self {
            DetectorKind::Rake => rake_detect(y, h, c),
            DetectorKind::Sic => conventional_sic(y, h, c),
            DetectorKind::Pic => conventional_pic(y, h, c, config.pic_iterations),
            DetectorKind::GlPic => gl_pic_detect(y, h, config),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DetectorKind::Rake => "rake",
            DetectorKind::Sic => "sic",
            DetectorKind::Pic => "pic",
            DetectorKind::GlPic => "glpic",
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rake" => Ok(DetectorKind::Rake),
            "sic" => Ok(DetectorKind::Sic),
            "pic" => Ok(DetectorKind::Pic),
            "glpic" | "gl-pic" => Ok(DetectorKind::GlPic),
            other => Err(Error::config(
                "detector",
                format!("unknown detector `{other}` (expected rake, sic, pic or glpic)"),
            )),
        }
    }
}
