use super::{Constellation, EffectiveChannelMatrix};
use crate::{Complex, Result};

/// Successive interference cancellation in order of decreasing `||H_k||`.
///
/// Each user is matched-filtered against the running residual, sliced, and
/// its reconstructed contribution removed before the next user.
pub fn conventional_sic(
    y: &[Complex],
    h: &EffectiveChannelMatrix,
    constellation: &Constellation,
) -> Result<Vec<usize>> {
    h.check_observation(y)?;
    let mut order: Vec<usize> = (0..h.users()).collect();
    order.sort_by(|&a, &b| h.norm_sq(b).total_cmp(&h.norm_sq(a)));

    let mut residual = y.to_vec();
    let mut decisions = vec![0; h.users()];
    for k in order {
        let energy = h.norm_sq(k);
        let u = if energy > 0.0 {
            h.correlate(k, &residual) / energy
        } else {
            Complex::new(0.0, 0.0)
        };
        let idx = constellation.slice(u);
        decisions[k] = idx;
        let b = constellation.point(idx);
        for (r, &hk) in residual.iter_mut().zip(h.column(k)) {
            *r -= hk * b;
        }
    }
    Ok(decisions)
}
