use super::{Constellation, EffectiveChannelMatrix};
use crate::{Complex, Result};

/// Matched-filter outputs scaled to the symbol axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftEstimateVector {
    pub values: Vec<Complex>,
    /// Distance from each value to its nearest constellation point.
    pub distances: Vec<f64>,
    /// False for users whose effective signature is identically zero.
    pub active: Vec<bool>,
}

impl SoftEstimateVector {
    pub fn from_values(values: Vec<Complex>, constellation: &Constellation) -> Self {
        let distances = values.iter().map(|&u| constellation.nearest_distance(u)).collect();
        let active = vec![true; values.len()];
        Self {
            values,
            distances,
            active,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// RAKE front-end: `u_k = H_k^H y / ||H_k||^2`.
///
/// The normalization makes a noiseless, interference-free observation return
/// the transmitted symbol exactly.
pub fn rake_front_end(
    y: &[Complex],
    h: &EffectiveChannelMatrix,
    constellation: &Constellation,
) -> Result<SoftEstimateVector> {
    h.check_observation(y)?;
    let mut values = Vec::with_capacity(h.users());
    let mut active = Vec::with_capacity(h.users());
    for k in 0..h.users() {
        let energy = h.norm_sq(k);
        if energy > 0.0 {
            values.push(h.correlate(k, y) / energy);
            active.push(true);
        } else {
            values.push(Complex::new(0.0, 0.0));
            active.push(false);
        }
    }
    let distances = values.iter().map(|&u| constellation.nearest_distance(u)).collect();
    Ok(SoftEstimateVector {
        values,
        distances,
        active,
    })
}

/// Sliced RAKE outputs.
pub fn rake_detect(
    y: &[Complex],
    h: &EffectiveChannelMatrix,
    constellation: &Constellation,
) -> Result<Vec<usize>> {
    let soft = rake_front_end(y, h, constellation)?;
    Ok(soft.values.iter().map(|&u| constellation.slice(u)).collect())
}
