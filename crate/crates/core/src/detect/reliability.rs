use super::{DetectorConfig, GreyRegion, SoftEstimateVector};

/// Split of users into reliable and unreliable estimates.
///
/// `unreliable` is ordered by distance to the nearest constellation point,
/// farthest first; its first `n_q` entries are re-examined over the whole
/// constellation (`t_q`), the rest are sliced directly (`t_p`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReliabilityPartition {
    pub reliable: Vec<usize>,
    pub unreliable: Vec<usize>,
    n_q: usize,
}

impl ReliabilityPartition {
    /// The most unreliable users, enumerated over all constellation points.
    pub fn t_q(&self) -> &[usize] {
        &self.unreliable[..self.n_q]
    }

    /// Unreliable users still decided by the slicer.
    pub fn t_p(&self) -> &[usize] {
        &self.unreliable[self.n_q..]
    }

    pub fn users(&self) -> usize {
        self.reliable.len() + self.unreliable.len()
    }
}

/// Classifies every soft estimate against the grey region of `config`.
pub fn classify_reliability(soft: &SoftEstimateVector, config: &DetectorConfig) -> ReliabilityPartition {
    let c = &config.constellation;
    let mut reliable = Vec::new();
    let mut unreliable = Vec::new();
    for (k, &u) in soft.values.iter().enumerate() {
        let grey = !soft.active[k]
            || match config.grey_region {
                GreyRegion::BoundaryBand => c.boundary_distance(u) < config.d_th,
                GreyRegion::NearestPoint => soft.distances[k] > config.d_th,
            };
        if grey {
            unreliable.push(k);
        } else {
            reliable.push(k);
        }
    }
    // Stable sort: equal distances keep ascending user order.
    unreliable.sort_by(|&a, &b| soft.distances[b].total_cmp(&soft.distances[a]));
    let n_q = config.n_q.min(unreliable.len());
    ReliabilityPartition {
        reliable,
        unreliable,
        n_q,
    }
}
