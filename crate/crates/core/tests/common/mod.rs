//! Instance generators and independent oracles shared by the integration
//! test targets.
#![allow(dead_code)]

pub mod invariants;

use coop_cdma::detect::Constellation;
use coop_cdma::selection::SinrContext;
use coop_cdma::signal::{
    build_spreading_matrix, draw_distinct_codes, sample_multipath_channel, Link, Node, PowerProfile,
};
use coop_cdma::sim::{BerRecord, PacketRealization, PacketShape};
use coop_cdma::Complex;
use rand::Rng;

pub fn profile(paths: usize) -> PowerProfile {
    PowerProfile((0..paths).map(|i| -3.0 * i as f64).collect())
}

/// Random codes and channels for one receiver, unit amplitude.
pub fn random_columns<R: Rng>(rng: &mut R, users: usize, chips: usize, paths: usize) -> Vec<Vec<Complex>> {
    let codes = draw_distinct_codes(users, chips, rng).unwrap();
    let p = profile(paths);
    codes
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let s = build_spreading_matrix(c, paths).unwrap();
            let h = sample_multipath_channel(&p, Link::new(Node::Source(k), Node::Destination), rng);
            s.apply(h.taps()).unwrap()
        })
        .collect()
}

pub fn gaussian<R: Rng>(rng: &mut R, variance: f64) -> Complex {
    let s = (variance / 2.0).sqrt();
    let n: f64 = rng.sample(rand_distr::StandardNormal);
    let m: f64 = rng.sample(rand_distr::StandardNormal);
    Complex::new(s * n, s * m)
}

/// `sum_k b_k h_k + noise`.
pub fn observe<R: Rng>(rng: &mut R, columns: &[Vec<Complex>], b: &[Complex], variance: f64) -> Vec<Complex> {
    let m = columns[0].len();
    (0..m)
        .map(|i| {
            let mut acc = gaussian(rng, variance);
            for (col, bk) in columns.iter().zip(b) {
                acc += col[i] * bk;
            }
            acc
        })
        .collect()
}

pub fn random_packet<R: Rng>(
    rng: &mut R,
    users: usize,
    relays: usize,
    chips: usize,
    paths: usize,
    noise_variance: f64,
) -> PacketRealization {
    let shape = PacketShape {
        users,
        relays,
        chips,
        paths,
        symbols: 1,
        profile_db: profile(paths),
    };
    PacketRealization::draw(&shape, 2, noise_variance, rng).unwrap()
}

pub fn random_context<R: Rng>(
    rng: &mut R,
    users: usize,
    relays: usize,
    chips: usize,
    paths: usize,
    noise_variance: f64,
) -> SinrContext {
    random_packet(rng, users, relays, chips, paths, noise_variance)
        .sinr_context()
        .unwrap()
}

/// Exhaustive ML over all `N_c^K` tuples, user 0 most significant, first
/// minimum kept.
pub fn brute_force_ml(y: &[Complex], columns: &[Vec<Complex>], c: &Constellation) -> Vec<usize> {
    let k = columns.len();
    let n = c.len();
    let total = n.pow(k as u32);
    let mut best = Vec::new();
    let mut best_cost = f64::INFINITY;
    for idx in 0..total {
        let mut digits = vec![0usize; k];
        let mut rem = idx;
        for d in digits.iter_mut().rev() {
            *d = rem % n;
            rem /= n;
        }
        let cost: f64 = (0..y.len())
            .map(|i| {
                let mut r = y[i];
                for (col, &d) in columns.iter().zip(&digits) {
                    r -= col[i] * c.point(d);
                }
                r.norm_sqr()
            })
            .sum();
        if cost < best_cost {
            best_cost = cost;
            best = digits;
        }
    }
    best
}

fn dot(a: &[Complex], b: &[Complex]) -> Complex {
    let mut acc = Complex::new(0.0, 0.0);
    for i in 0..a.len() {
        acc += a[i].conj() * b[i];
    }
    acc
}

/// Stacked column of `user` with the equal split over `members.len() + 1` links.
pub fn oracle_column(ctx: &SinrContext, user: usize, members: &[usize]) -> Vec<Complex> {
    let a = 1.0 / ((members.len() + 1) as f64).sqrt();
    let top: Vec<Complex> = ctx.direct_signature(user).iter().map(|x| x * a).collect();
    let mut bottom = vec![Complex::new(0.0, 0.0); top.len()];
    for &l in members {
        for (b, x) in bottom.iter_mut().zip(ctx.relay_signature(l, user)) {
            *b += x * a;
        }
    }
    top.into_iter().chain(bottom).collect()
}

/// Matched-filter SINR of the weakest user under `members`.
pub fn oracle_set_sinr(ctx: &SinrContext, members: &[usize]) -> f64 {
    let cols: Vec<Vec<Complex>> = (0..ctx.users()).map(|k| oracle_column(ctx, k, members)).collect();
    (0..cols.len())
        .map(|q| {
            let e = dot(&cols[q], &cols[q]).re;
            let mai: f64 = (0..cols.len())
                .filter(|&k| k != q)
                .map(|k| dot(&cols[k], &cols[q]).norm_sqr())
                .sum();
            e * e / (mai + ctx.noise_variance() * e)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Best subset by bitmask enumeration: highest SINR, then fewer relays, then
/// the lexicographically smaller list.
pub fn oracle_best_subset(ctx: &SinrContext) -> (Vec<usize>, f64) {
    let l = ctx.relays();
    let mut best: Option<(Vec<usize>, f64)> = None;
    for mask in 1u32..(1 << l) {
        let members: Vec<usize> = (0..l).filter(|i| mask & (1 << i) != 0).collect();
        let s = oracle_set_sinr(ctx, &members);
        let better = match &best {
            None => true,
            Some((bm, bs)) => {
                s > *bs || (s == *bs && (members.len(), &members) < (bm.len(), bm))
            }
        };
        if better {
            best = Some((members, s));
        }
    }
    best.unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Binomial standard deviation using the larger of the two BERs.
pub fn pair_sigma(a: &BerRecord, b: &BerRecord) -> f64 {
    let p = a.ber.max(b.ber);
    let n = a.bits.min(b.bits) as f64;
    (p * (1.0 - p) / n).sqrt()
}

/// `lower[i].ber <= upper[i].ber` at every point, except that at most one
/// point may exceed by no more than `slack` binomial sigma.
pub fn ordered_with_slack(lower: &[&BerRecord], upper: &[&BerRecord], slack: f64) -> (bool, String) {
    let mut violations = 0;
    let mut detail = Vec::new();
    let mut ok = true;
    for (lo, up) in lower.iter().zip(upper) {
        if lo.ber > up.ber {
            let sigma = pair_sigma(lo, up);
            violations += 1;
            detail.push(format!(
                "sweep {}: {:.4e} > {:.4e} (sigma {:.2e})",
                lo.sweep, lo.ber, up.ber, sigma
            ));
            if lo.ber - up.ber > slack * sigma {
                ok = false;
            }
        }
    }
    if violations > 1 {
        ok = false;
    }
    (ok, detail.join("; "))
}
