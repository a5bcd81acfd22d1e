//! Relay subset selection under the min-user SINR criterion.
//!
//! A relay subset is scored by the worst RAKE-output SINR over all users at
//! the destination, with the transmit power of each user split equally over
//! its direct link and the links of the active relays. Relays are assumed to
//! forward correct symbols while scoring.
//!
//! Three strategies are provided: [`exhaustive_select`] over all `2^L - 1`
//! nonempty subsets, [`standard_greedy_select`] which prunes the weakest
//! relay-destination link while that improves the score, and
//! [`proposed_greedy_select`] which at each stage tries dropping every relay
//! in turn and keeps the best.
//!
//! Relay indices are 0-based. Ties between subsets with equal SINR go to the
//! smaller subset, then to the lexicographically smaller member list.

use std::cmp::Ordering;

use crate::detect::{inner, EffectiveChannelMatrix};
use crate::signal::PowerAllocation;
use crate::{Complex, Error, Result};

/// Largest relay count accepted by [`exhaustive_select`].
pub const EXHAUSTIVE_MAX_RELAYS: usize = 12;

/// Destination-side signatures needed to score any relay subset.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrContext {
    direct: Vec<Vec<Complex>>,
    relayed: Vec<Vec<Vec<Complex>>>,
    noise_variance: f64,
}

impl SinrContext {
    /// `direct[k]` is `S_k h_{sd,k}`; `relayed[l][k]` is `S_k h_{r_l d,k}`.
    /// Both at unit amplitude.
    pub fn new(
        direct: Vec<Vec<Complex>>,
        relayed: Vec<Vec<Vec<Complex>>>,
        noise_variance: f64,
    ) -> Result<Self> {
        let users = direct.len();
        if users == 0 {
            return Err(Error::config("users", "need at least one user"));
        }
        if relayed.is_empty() {
            return Err(Error::config("relays", "need at least one relay"));
        }
        if noise_variance.is_nan() || noise_variance < 0.0 {
            return Err(Error::config("noise_variance", "must be nonnegative"));
        }
        let len = direct[0].len();
        for relay in &relayed {
            if relay.len() != users {
                return Err(Error::Dimension {
                    context: "relay signatures per user",
                    expected: users,
                    actual: relay.len(),
                });
            }
        }
        for sig in direct.iter().chain(relayed.iter().flatten()) {
            if sig.len() != len {
                return Err(Error::Dimension {
                    context: "signature length",
                    expected: len,
                    actual: sig.len(),
                });
            }
        }
        Ok(Self {
            direct,
            relayed,
            noise_variance,
        })
    }

    pub fn users(&self) -> usize {
        self.direct.len()
    }

    pub fn relays(&self) -> usize {
        self.relayed.len()
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn direct_signature(&self, user: usize) -> &[Complex] {
        &self.direct[user]
    }

    pub fn relay_signature(&self, relay: usize, user: usize) -> &[Complex] {
        &self.relayed[relay][user]
    }

    /// Received energy of each relay-destination link summed over users,
    /// `sum_k ||S_k h_{r_l d,k}||^2`.
    pub fn link_powers(&self) -> Vec<f64> {
        self.relayed
            .iter()
            .map(|users| users.iter().map(|s| inner(s, s).re).sum())
            .collect()
    }

    /// Stacked `2M` effective signature of `user` when `subset` forwards.
    pub fn user_column(&self, user: usize, subset: &[usize]) -> Result<Vec<Complex>> {
        self.check_subset(subset)?;
        Ok(self.column_unchecked(user, subset, PowerAllocation::equal(subset.len())))
    }

    pub fn destination_columns(&self, subset: &[usize]) -> Result<Vec<Vec<Complex>>> {
        self.check_subset(subset)?;
        let power = PowerAllocation::equal(subset.len());
        Ok((0..self.users())
            .map(|k| self.column_unchecked(k, subset, power))
            .collect())
    }

    /// Channel matrix the destination detector uses for `subset`.
    pub fn destination_matrix(&self, subset: &[usize]) -> Result<EffectiveChannelMatrix> {
        EffectiveChannelMatrix::new(self.destination_columns(subset)?)
    }

    fn column_unchecked(&self, user: usize, subset: &[usize], power: PowerAllocation) -> Vec<Complex> {
        let a_sd = power.source_destination.value();
        let a_rd = power.relay_destination.value();
        let m = self.direct[user].len();
        let mut col = Vec::with_capacity(2 * m);
        col.extend(self.direct[user].iter().map(|s| s * a_sd));
        let mut relayed = vec![Complex::new(0.0, 0.0); m];
        for &l in subset {
            for (acc, s) in relayed.iter_mut().zip(&self.relayed[l][user]) {
                *acc += s;
            }
        }
        col.extend(relayed.into_iter().map(|s| s * a_rd));
        col
    }

    fn check_subset(&self, subset: &[usize]) -> Result<()> {
        if subset.is_empty() {
            return Err(Error::config("subset", "relay subset must be nonempty"));
        }
        if subset.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("subset", "relay indices must be strictly increasing"));
        }
        if let Some(&bad) = subset.iter().find(|&&l| l >= self.relays()) {
            return Err(Error::config(
                "subset",
                format!("relay {bad} out of range for {} relays", self.relays()),
            ));
        }
        Ok(())
    }
}

/// Matched-filter SINR of user `q` given all users' columns:
/// `||H_q||^4 / (sum_{k != q} |H_k^H H_q|^2 + sigma^2 ||H_q||^2)`.
fn rake_sinr(columns: &[Vec<Complex>], q: usize, noise_variance: f64) -> f64 {
    let hq = &columns[q];
    let energy = inner(hq, hq).re;
    if energy == 0.0 {
        return 0.0;
    }
    let interference: f64 = columns
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != q)
        .map(|(_, hk)| inner(hk, hq).norm_sqr())
        .sum();
    energy * energy / (interference + noise_variance * energy)
}

/// RAKE-output SINR of `user` at the destination when `subset` forwards.
pub fn sinr_for_user(user: usize, subset: &[usize], ctx: &SinrContext) -> Result<f64> {
    if user >= ctx.users() {
        return Err(Error::config("user", format!("user {user} out of range")));
    }
    let columns = ctx.destination_columns(subset)?;
    Ok(rake_sinr(&columns, user, ctx.noise_variance))
}

/// Minimum SINR over all users.
pub fn sinr_for_set(subset: &[usize], ctx: &SinrContext) -> Result<f64> {
    let columns = ctx.destination_columns(subset)?;
    Ok((0..ctx.users())
        .map(|q| rake_sinr(&columns, q, ctx.noise_variance))
        .fold(f64::INFINITY, f64::min))
}

/// A scored relay subset.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaySet {
    pub members: Vec<usize>,
    /// Min-user SINR, linear.
    pub sinr: f64,
    /// Number of subset scorings spent finding this set.
    pub evaluations: usize,
}

/// Orders scored subsets: higher SINR first, then fewer members, then the
/// lexicographically smaller list.
fn preference(a_sinr: f64, a: &[usize], b_sinr: f64, b: &[usize]) -> Ordering {
    b_sinr
        .total_cmp(&a_sinr)
        .then(a.len().cmp(&b.len()))
        .then_with(|| a.cmp(b))
}

struct Scorer<'a> {
    ctx: &'a SinrContext,
    evaluations: usize,
}

impl Scorer<'_> {
    fn score(&mut self, subset: &[usize]) -> Result<f64> {
        self.evaluations += 1;
        sinr_for_set(subset, self.ctx)
    }
}

/// Scores every nonempty subset and returns the best.
pub fn exhaustive_select(ctx: &SinrContext) -> Result<RelaySet> {
    let relays = ctx.relays();
    if relays > EXHAUSTIVE_MAX_RELAYS {
        return Err(Error::config(
            "relays",
            format!("exhaustive search is capped at {EXHAUSTIVE_MAX_RELAYS} relays, got {relays}"),
        ));
    }
    let mut scorer = Scorer { ctx, evaluations: 0 };
    let mut best: Option<(f64, Vec<usize>)> = None;
    for mask in 1u32..(1 << relays) {
        let members: Vec<usize> = (0..relays).filter(|&l| mask >> l & 1 == 1).collect();
        let sinr = scorer.score(&members)?;
        let better = match &best {
            None => true,
            Some((s, m)) => preference(sinr, &members, *s, m) == Ordering::Less,
        };
        if better {
            best = Some((sinr, members));
        }
    }
    let (sinr, members) = best.expect("at least one relay");
    Ok(RelaySet {
        members,
        sinr,
        evaluations: scorer.evaluations,
    })
}

/// Starts from all relays and removes relays in order of increasing
/// `link_powers` while each removal strictly raises the min-user SINR.
pub fn standard_greedy_select(ctx: &SinrContext, link_powers: &[f64]) -> Result<RelaySet> {
    if link_powers.len() != ctx.relays() {
        return Err(Error::Dimension {
            context: "link powers per relay",
            expected: ctx.relays(),
            actual: link_powers.len(),
        });
    }
    let mut scorer = Scorer { ctx, evaluations: 0 };
    let mut current: Vec<usize> = (0..ctx.relays()).collect();
    let mut previous = scorer.score(&current)?;

    let mut removal_order = current.clone();
    removal_order.sort_by(|&a, &b| link_powers[a].total_cmp(&link_powers[b]));

    for weakest in removal_order {
        if current.len() == 1 {
            break;
        }
        let tentative: Vec<usize> = current.iter().copied().filter(|&l| l != weakest).collect();
        let sinr = scorer.score(&tentative)?;
        if sinr > previous {
            current = tentative;
            previous = sinr;
        } else {
            break;
        }
    }
    Ok(RelaySet {
        members: current,
        sinr: previous,
        evaluations: scorer.evaluations,
    })
}

/// Stage-wise greedy: from the current set, score every single-relay removal,
/// keep the best if it strictly beats the previous stage, stop otherwise or
/// once a single relay is left.
pub fn proposed_greedy_select(ctx: &SinrContext) -> Result<RelaySet> {
    let mut scorer = Scorer { ctx, evaluations: 0 };
    let mut current: Vec<usize> = (0..ctx.relays()).collect();
    let mut previous = scorer.score(&current)?;

    while current.len() > 1 {
        let mut stage_best: Option<(f64, Vec<usize>)> = None;
        for &dropped in &current {
            let candidate: Vec<usize> = current.iter().copied().filter(|&l| l != dropped).collect();
            let sinr = scorer.score(&candidate)?;
            let better = match &stage_best {
                None => true,
                Some((s, m)) => preference(sinr, &candidate, *s, m) == Ordering::Less,
            };
            if better {
                stage_best = Some((sinr, candidate));
            }
        }
        let (sinr, members) = stage_best.expect("current set has at least two relays");
        if sinr > previous {
            current = members;
            previous = sinr;
        } else {
            break;
        }
    }
    Ok(RelaySet {
        members: current,
        sinr: previous,
        evaluations: scorer.evaluations,
    })
}
