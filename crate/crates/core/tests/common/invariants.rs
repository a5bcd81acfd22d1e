//! Randomized invariant checks. Each runs a deterministic proptest runner for
//! the requested number of cases and reports the first counterexample.

use std::collections::BTreeSet;

use coop_cdma::cli::{csv_string, CSV_HEADER};
use coop_cdma::detect::{
    classify_reliability, enumerate_candidates, gl_pic_trace, ml_select, pic_stage,
    rake_front_end, Constellation, DetectorConfig, DetectorKind, EffectiveChannelMatrix,
    Modulation, SoftEstimateVector,
};
use coop_cdma::selection::{
    exhaustive_select, proposed_greedy_select, sinr_for_set, standard_greedy_select, SinrContext,
};
use coop_cdma::signal::{
    build_spreading_matrix, sample_multipath_channel, superpose, Link, Node, PowerAllocation,
    PowerProfile, SpreadingCode,
};
use coop_cdma::sim::{
    packet_seed, run_experiment, run_packet, BerRecord, ExperimentConfig, Strategy as Selection,
    Sweep,
};
use coop_cdma::Complex;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{brute_force_ml, gaussian, observe, random_columns, random_context};

pub type Check = fn(u32) -> Result<(), String>;

pub const ALL: &[(&str, Check)] = &[
    ("spreading matrix has N+Lp-1 rows", spreading_dimensions),
    ("channels have unit norm", unit_norm_channels),
    ("synthesis is linear in the symbols", synthesis_linearity),
    ("distinct users are never collinear", strict_cross_correlation),
    ("reliability partition is valid", partition_validity),
    ("candidate lists have the expected count", candidate_counts),
    ("ML pick has the least residual", ml_minimal_residual),
    ("all-unreliable list stage equals brute-force ML", list_stage_is_ml),
    ("unreliable set grows with the threshold", threshold_monotonicity),
    ("PIC is exact on orthogonal noiseless input", orthogonal_pic_exact),
    ("detectors are deterministic", detector_determinism),
    ("greedy selections are bracketed", greedy_bounds),
    ("selection evaluation counters", evaluation_counters),
    ("selection is scale equivariant", scale_equivariance),
    ("power budget per user is one", power_budget),
    ("fixed seed reproduces records", experiment_determinism),
    ("CSV rows re-parse to the record BER", csv_reparse),
];

fn check<S>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn modulation() -> impl Strategy<Value = Modulation> {
    prop_oneof![Just(Modulation::Bpsk), Just(Modulation::Qpsk), Just(Modulation::Qam16)]
}

fn soft_values() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..8)
}

fn soft(values: &[(f64, f64)], c: &Constellation) -> SoftEstimateVector {
    SoftEstimateVector::from_values(values.iter().map(|&(a, b)| Complex::new(a, b)).collect(), c)
}

fn config(m: Modulation, d_th: f64, n_q: usize) -> DetectorConfig {
    DetectorConfig {
        d_th,
        n_q,
        constellation: m.into(),
        ..DetectorConfig::default()
    }
}

fn walsh(n: usize, row: usize) -> Vec<f64> {
    (0..n).map(|c| if (row & c).count_ones().is_multiple_of(2) { 1.0 } else { -1.0 }).collect()
}

pub fn spreading_dimensions(cases: u32) -> Result<(), String> {
    let s = (2usize..40).prop_flat_map(|n| (Just(n), 1..n, any::<u64>()));
    check(cases, s, |(n, lp, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let code = SpreadingCode::random(0, n, &mut rng);
        let m = build_spreading_matrix(&code, lp).unwrap();
        prop_assert_eq!(m.rows(), n + lp - 1);
        prop_assert_eq!(m.cols(), lp);
        Ok(())
    })
}

pub fn unit_norm_channels(cases: u32) -> Result<(), String> {
    let s = (prop::collection::vec(-20.0f64..0.0, 1..8), any::<u64>());
    check(cases, s, |(db, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let profile = PowerProfile(db);
        let h = sample_multipath_channel(&profile, Link::new(Node::Source(0), Node::Destination), &mut rng);
        let norm: f64 = h.taps().iter().map(|t| t.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12, "norm {}", norm);
        Ok(())
    })
}

pub fn synthesis_linearity(cases: u32) -> Result<(), String> {
    let s = (1usize..6, 4usize..16, 1usize..4, any::<u64>());
    check(cases, s, |(k, n, lp, seed)| {
        let lp = lp.min(n - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols = random_columns(&mut rng, k.min(1 << (n - 1)), n, lp);
        let b: Vec<Complex> = cols.iter().map(|_| gaussian(&mut rng, 1.0)).collect();
        let all = superpose(&cols, &b).unwrap();
        let mut sum = vec![Complex::new(0.0, 0.0); all.len()];
        for (j, col) in cols.iter().enumerate() {
            let mut single = vec![Complex::new(0.0, 0.0); cols.len()];
            single[j] = b[j];
            for (acc, x) in sum.iter_mut().zip(superpose(&cols, &single).unwrap()) {
                *acc += x;
            }
            prop_assert_eq!(col.len(), all.len());
        }
        for (a, s) in all.iter().zip(&sum) {
            prop_assert!((a - s).norm() < 1e-12);
        }
        Ok(())
    })
}

pub fn strict_cross_correlation(cases: u32) -> Result<(), String> {
    let s = (2usize..6, 4usize..16, 1usize..4, any::<u64>());
    check(cases, s, |(k, n, lp, seed)| {
        let lp = lp.min(n - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols = random_columns(&mut rng, k, n, lp);
        let h = EffectiveChannelMatrix::new(cols).unwrap();
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    let bound = (h.norm_sq(i) * h.norm_sq(j)).sqrt();
                    prop_assert!(h.gram(i, j).norm() < bound * (1.0 - 1e-12));
                }
            }
        }
        Ok(())
    })
}

pub fn partition_validity(cases: u32) -> Result<(), String> {
    let s = (soft_values(), 0.0f64..1.5, 0usize..8, modulation());
    check(cases, s, |(values, d_th, n_q, m)| {
        let cfg = config(m, d_th, n_q);
        let c = &cfg.constellation;
        let soft = soft(&values, c);
        let p = classify_reliability(&soft, &cfg);
        let k = values.len();
        let mut all: Vec<usize> = p.reliable.iter().chain(&p.unreliable).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..k).collect::<Vec<_>>());
        prop_assert!(p.reliable.windows(2).all(|w| w[0] < w[1]));
        for &r in &p.reliable {
            prop_assert!(c.boundary_distance(soft.values[r]) >= d_th);
        }
        for &u in &p.unreliable {
            prop_assert!(c.boundary_distance(soft.values[u]) < d_th);
        }
        for w in p.unreliable.windows(2) {
            let (a, b) = (soft.distances[w[0]], soft.distances[w[1]]);
            prop_assert!(a > b || (a == b && w[0] < w[1]));
        }
        prop_assert_eq!(p.t_q().len(), n_q.min(p.unreliable.len()));
        prop_assert_eq!([p.t_q(), p.t_p()].concat(), p.unreliable.clone());
        Ok(())
    })
}

pub fn candidate_counts(cases: u32) -> Result<(), String> {
    let s = (soft_values(), 0.0f64..1.5, 0usize..4, modulation());
    check(cases, s, |(values, d_th, n_q, m)| {
        let cfg = config(m, d_th, n_q);
        let c = &cfg.constellation;
        let soft = soft(&values, c);
        let p = classify_reliability(&soft, &cfg);
        let sliced: Vec<usize> = soft.values.iter().map(|&u| c.slice(u)).collect();
        let lists = enumerate_candidates(&p, &sliced, c);
        prop_assert_eq!(lists.len(), c.len().pow(p.t_q().len() as u32));
        let distinct: BTreeSet<&Vec<usize>> = lists.iter().collect();
        prop_assert_eq!(distinct.len(), lists.len());
        for list in &lists {
            for k in 0..values.len() {
                if !p.t_q().contains(&k) {
                    prop_assert_eq!(list[k], sliced[k]);
                }
            }
        }
        Ok(())
    })
}

fn detection_instance() -> impl Strategy<Value = (usize, usize, usize, f64, Modulation, u64)> {
    (1usize..5, 4usize..17, 1usize..4, 0.001f64..1.0, modulation(), any::<u64>())
}

fn draw_instance(
    k: usize,
    n: usize,
    lp: usize,
    var: f64,
    c: &Constellation,
    seed: u64,
) -> (EffectiveChannelMatrix, Vec<Complex>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lp = lp.min(n - 1);
    let cols = random_columns(&mut rng, k, n, lp);
    let truth: Vec<usize> = (0..k).map(|_| rng.random_range(0..c.len())).collect();
    let b: Vec<Complex> = truth.iter().map(|&i| c.point(i)).collect();
    let y = observe(&mut rng, &cols, &b, var);
    (EffectiveChannelMatrix::new(cols).unwrap(), y, truth)
}

pub fn ml_minimal_residual(cases: u32) -> Result<(), String> {
    check(cases, detection_instance(), |(k, n, lp, var, m, seed)| {
        let cfg = config(m, 0.3, 2.min(k));
        let c = &cfg.constellation;
        let (h, y, _) = draw_instance(k, n, lp, var, c, seed);
        let soft = rake_front_end(&y, &h, c).unwrap();
        let p = classify_reliability(&soft, &cfg);
        let sliced: Vec<usize> = soft.values.iter().map(|&u| c.slice(u)).collect();
        let lists = enumerate_candidates(&p, &sliced, c);
        let pick = ml_select(&lists, &y, &h, c);
        let residual = |b: &[usize]| -> f64 {
            let hb = h.apply(&b.iter().map(|&i| c.point(i)).collect::<Vec<_>>());
            y.iter().zip(&hb).map(|(a, b)| (a - b).norm_sqr()).sum()
        };
        prop_assert!(lists.iter().any(|l| l.as_slice() == pick));
        let best = residual(pick);
        for l in &lists {
            prop_assert!(best <= residual(l));
        }
        Ok(())
    })
}

pub fn list_stage_is_ml(cases: u32) -> Result<(), String> {
    check(cases, detection_instance(), |(k, n, lp, var, m, seed)| {
        let k = if m == Modulation::Qam16 { k.min(2) } else { k };
        let cfg = config(m, 1e9, k);
        let c = &cfg.constellation;
        let (h, y, _) = draw_instance(k, n, lp, var, c, seed);
        let trace = gl_pic_trace(&y, &h, &cfg).unwrap();
        prop_assert_eq!(trace.partition.unreliable.len(), k);
        prop_assert_eq!(&trace.list_decision, &brute_force_ml(&y, h.columns(), c));
        Ok(())
    })
}

pub fn threshold_monotonicity(cases: u32) -> Result<(), String> {
    let s = (soft_values(), 0.0f64..1.5, 0.0f64..1.5, modulation());
    check(cases, s, |(values, a, b, m)| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let c: Constellation = m.into();
        let soft = soft(&values, &c);
        let small: BTreeSet<usize> = classify_reliability(&soft, &config(m, lo, 1)).unreliable.into_iter().collect();
        let large: BTreeSet<usize> = classify_reliability(&soft, &config(m, hi, 1)).unreliable.into_iter().collect();
        prop_assert!(small.is_subset(&large));
        Ok(())
    })
}

pub fn orthogonal_pic_exact(cases: u32) -> Result<(), String> {
    let s = (1usize..8, modulation(), any::<u64>());
    check(cases, s, |(k, m, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Constellation = m.into();
        let cols: Vec<Vec<Complex>> = (0..k)
            .map(|u| {
                let code = SpreadingCode::from_signs(u, &walsh(8, u)).unwrap();
                let g = gaussian(&mut rng, 1.0);
                code.chips().iter().map(|&x| g * x).collect()
            })
            .collect();
        let truth: Vec<usize> = (0..k).map(|_| rng.random_range(0..c.len())).collect();
        let initial: Vec<usize> = (0..k).map(|_| rng.random_range(0..c.len())).collect();
        let b: Vec<Complex> = truth.iter().map(|&i| c.point(i)).collect();
        let y = superpose(&cols, &b).unwrap();
        let h = EffectiveChannelMatrix::new(cols).unwrap();
        prop_assert_eq!(pic_stage(&initial, &y, &h, &c, 1).unwrap(), truth);
        Ok(())
    })
}

pub fn detector_determinism(cases: u32) -> Result<(), String> {
    check(cases, detection_instance(), |(k, n, lp, var, m, seed)| {
        let cfg = config(m, 0.25, 2.min(k));
        let (h, y, _) = draw_instance(k, n, lp, var, &cfg.constellation, seed);
        let (h2, y2, _) = draw_instance(k, n, lp, var, &cfg.constellation, seed);
        for d in DetectorKind::ALL {
            prop_assert_eq!(d.detect(&y, &h, &cfg).unwrap(), d.detect(&y2, &h2, &cfg).unwrap());
        }
        Ok(())
    })
}

fn selection_instance() -> impl Strategy<Value = (usize, usize, f64, u64)> {
    (1usize..6, 1usize..7, -5.0f64..20.0, any::<u64>())
}

fn context(k: usize, l: usize, snr: f64, seed: u64) -> SinrContext {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_context(&mut rng, k, l, 8, 2, 10f64.powf(-snr / 10.0))
}

pub fn greedy_bounds(cases: u32) -> Result<(), String> {
    check(cases, selection_instance(), |(k, l, snr, seed)| {
        let ctx = context(k, l, snr, seed);
        let full: Vec<usize> = (0..l).collect();
        let full_sinr = sinr_for_set(&full, &ctx).unwrap();
        let best = exhaustive_select(&ctx).unwrap().sinr;
        for set in [proposed_greedy_select(&ctx).unwrap(), standard_greedy_select(&ctx, &ctx.link_powers()).unwrap()] {
            prop_assert!(set.sinr <= best);
            prop_assert!(set.sinr >= full_sinr);
        }
        Ok(())
    })
}

pub fn evaluation_counters(cases: u32) -> Result<(), String> {
    check(cases, selection_instance(), |(k, l, snr, seed)| {
        let ctx = context(k, l, snr, seed);
        prop_assert_eq!(exhaustive_select(&ctx).unwrap().evaluations, (1 << l) - 1);
        prop_assert!(proposed_greedy_select(&ctx).unwrap().evaluations <= l * (l + 1) / 2);
        prop_assert!(standard_greedy_select(&ctx, &ctx.link_powers()).unwrap().evaluations <= l);
        Ok(())
    })
}

pub fn scale_equivariance(cases: u32) -> Result<(), String> {
    check(cases, selection_instance(), |(k, l, snr, seed)| {
        let ctx = context(k, l, snr, seed);
        let scale = |v: &[Complex]| v.iter().map(|x| x * 2.0).collect::<Vec<_>>();
        let direct = (0..k).map(|u| scale(ctx.direct_signature(u))).collect();
        let relayed = (0..l)
            .map(|r| (0..k).map(|u| scale(ctx.relay_signature(r, u))).collect())
            .collect();
        let scaled = SinrContext::new(direct, relayed, ctx.noise_variance() * 4.0).unwrap();
        prop_assert_eq!(exhaustive_select(&ctx).unwrap().members, exhaustive_select(&scaled).unwrap().members);
        prop_assert_eq!(proposed_greedy_select(&ctx).unwrap().members, proposed_greedy_select(&scaled).unwrap().members);
        prop_assert_eq!(
            standard_greedy_select(&ctx, &ctx.link_powers()).unwrap().members,
            standard_greedy_select(&scaled, &scaled.link_powers()).unwrap().members
        );
        Ok(())
    })
}

pub fn power_budget(cases: u32) -> Result<(), String> {
    check(cases, (0usize..64, 0.0f64..=1.0), |(n, share)| {
        prop_assert!((PowerAllocation::equal(n).total_energy() - 1.0).abs() < 1e-12);
        if n > 0 {
            let p = PowerAllocation::with_direct_share(share, n).unwrap();
            prop_assert!((p.total_energy() - 1.0).abs() < 1e-12);
        }
        Ok(())
    })
}

fn tiny_config(seed: u64, k: usize, l: usize) -> ExperimentConfig {
    ExperimentConfig {
        users: k,
        relays: l,
        chips: 8,
        paths: 2,
        profile_db: PowerProfile(vec![0.0, -3.0]),
        symbols: 4,
        trials: 3,
        sweep: Sweep::Snr { snr_db: vec![3.0] },
        detectors: vec![DetectorKind::GlPic, DetectorKind::Pic],
        relay_detector: None,
        strategies: vec![Selection::Proposed, Selection::Exhaustive],
        detector: DetectorConfig { n_q: 1, ..DetectorConfig::default() },
        seed,
    }
}

pub fn experiment_determinism(cases: u32) -> Result<(), String> {
    check(cases, (any::<u64>(), 1usize..4, 1usize..4), |(seed, k, l)| {
        let cfg = tiny_config(seed, k, l);
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        prop_assert_eq!(&a, &b);
        // Sequential per-packet accumulation matches the parallel reduction.
        let point = cfg.points()[0];
        let mut errors = vec![0u64; a.len()];
        for t in 0..cfg.trials {
            let out = run_packet(&cfg, &point, packet_seed(seed, 0, t)).unwrap();
            for (e, tally) in errors.iter_mut().zip(&out.tallies) {
                *e += tally.errors;
            }
            for audit in out.power_audit {
                prop_assert!((audit - 1.0).abs() < 1e-12);
            }
        }
        for (r, e) in a.iter().zip(errors) {
            prop_assert_eq!(r.errors, e);
            prop_assert_eq!(r.ber, r.errors as f64 / r.bits as f64);
            prop_assert!((0.0..=1.0).contains(&r.ber));
        }
        Ok(())
    })
}

pub fn csv_reparse(cases: u32) -> Result<(), String> {
    let record = (1u64..1_000_000_000).prop_flat_map(|bits| (0..=bits, Just(bits), -10.0f64..30.0));
    check(cases, prop::collection::vec(record, 1..6), |rows| {
        let records: Vec<BerRecord> = rows
            .iter()
            .map(|&(errors, bits, sweep)| BerRecord {
                sweep,
                snr_db: sweep,
                users: 1,
                detector: DetectorKind::GlPic,
                strategy: Selection::Proposed,
                errors,
                bits,
                ber: errors as f64 / bits as f64,
                sinr_evals: 0,
                sinr_evals_min: 0,
                sinr_evals_max: 0,
                packets: 1,
            })
            .collect();
        let csv = csv_string(&records);
        let mut lines = csv.lines();
        prop_assert_eq!(lines.next(), Some(CSV_HEADER));
        let rows: Vec<&str> = lines.collect();
        prop_assert_eq!(rows.len(), records.len());
        for (row, r) in rows.iter().zip(&records) {
            let fields: Vec<&str> = row.split(',').collect();
            prop_assert_eq!(fields[0].parse::<f64>().unwrap(), r.sweep);
            let ber: f64 = fields[5].parse().unwrap();
            prop_assert!((ber - r.ber).abs() <= 1e-10 * r.ber.max(f64::MIN_POSITIVE));
        }
        Ok(())
    })
}
