use super::{Constellation, EffectiveChannelMatrix};
use crate::Complex;

/// `||y - H b||^2` for a vector of symbol indices.
pub fn residual_norm_sq(
    y: &[Complex],
    h: &EffectiveChannelMatrix,
    b: &[usize],
    constellation: &Constellation,
) -> f64 {
    let points: Vec<Complex> = b.iter().map(|&i| constellation.point(i)).collect();
    h.residual_norm_sq(y, &points)
}

/// Candidate with the smallest residual; the first one wins ties.
///
/// Panics if `candidates` is empty.
pub fn ml_select<'a>(
    candidates: &'a [Vec<usize>],
    y: &[Complex],
    h: &EffectiveChannelMatrix,
    constellation: &Constellation,
) -> &'a [usize] {
    assert!(!candidates.is_empty(), "ML selection needs at least one candidate");
    let mut best = 0;
    let mut best_residual = f64::INFINITY;
    for (j, b) in candidates.iter().enumerate() {
        let r = residual_norm_sq(y, h, b, constellation);
        if r < best_residual {
            best = j;
            best_residual = r;
        }
    }
    &candidates[best]
}
