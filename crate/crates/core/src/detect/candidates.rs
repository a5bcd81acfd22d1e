use super::{Constellation, ReliabilityPartition};

/// Tentative decision lists: sliced values everywhere except the `t_q` users,
/// which range over every tuple of constellation points.
///
/// Lists come out in lexicographic order of the canonical point order, the
/// first `t_q` user being the most significant digit. The caller is expected
/// to have validated `N_c^{n_q}` against the list cap.
pub fn enumerate_candidates(
    partition: &ReliabilityPartition,
    sliced: &[usize],
    constellation: &Constellation,
) -> Vec<Vec<usize>> {
    let t_q = partition.t_q();
    let n_c = constellation.len();
    let count = n_c.pow(t_q.len() as u32);
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let mut candidate = sliced.to_vec();
        let mut rem = j;
        for &user in t_q.iter().rev() {
            candidate[user] = rem % n_c;
            rem /= n_c;
        }
        out.push(candidate);
    }
    out
}
