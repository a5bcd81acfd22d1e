use super::{rake_front_end, Constellation, EffectiveChannelMatrix};
use crate::{Complex, Result};

/// Multi-iteration parallel interference cancellation.
///
/// Each iteration updates every user simultaneously from the previous
/// iteration's decisions:
///
/// ```text
/// b_k <- Q( u_k - sum_{j != k} (H_k^H H_j / ||H_k||^2) b_j )
/// ```
///
/// with `u_k` the normalized RAKE output.
pub fn pic_stage(
    initial: &[usize],
    y: &[Complex],
    h: &EffectiveChannelMatrix,
    constellation: &Constellation,
    iterations: usize,
) -> Result<Vec<usize>> {
    let soft = rake_front_end(y, h, constellation)?;
    let k = h.users();
    let mut current = initial.to_vec();
    let mut next = vec![0; k];
    for _ in 0..iterations {
        for (user, out) in next.iter_mut().enumerate() {
            let energy = h.norm_sq(user);
            let mut z = soft.values[user];
            if energy > 0.0 {
                for (j, &bj) in current.iter().enumerate() {
                    if j != user {
                        z -= h.gram(user, j) / energy * constellation.point(bj);
                    }
                }
            }
            *out = constellation.slice(z);
        }
        std::mem::swap(&mut current, &mut next);
    }
    Ok(current)
}

/// PIC started from the sliced RAKE decisions.
pub fn conventional_pic(
    y: &[Complex],
    h: &EffectiveChannelMatrix,
    constellation: &Constellation,
    iterations: usize,
) -> Result<Vec<usize>> {
    let soft = rake_front_end(y, h, constellation)?;
    let initial: Vec<usize> = soft.values.iter().map(|&u| constellation.slice(u)).collect();
    pic_stage(&initial, y, h, constellation, iterations)
}
