//! Monte-Carlo harness for the two-phase cooperative uplink.
//!
//! Per packet every code, channel, symbol and noise sample is drawn once from
//! a packet-private stream. Every (detector, strategy) pair is then evaluated
//! on that same realization, so comparisons between pairs share their random
//! numbers. Packets are independent work units and are run in parallel; the
//! per-packet counts are summed, so results do not depend on scheduling.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect::{DetectorConfig, DetectorKind, EffectiveChannelMatrix};
use crate::selection::{
    exhaustive_select, proposed_greedy_select, sinr_for_set, standard_greedy_select, RelaySet,
    SinrContext, EXHAUSTIVE_MAX_RELAYS,
};
use crate::signal::{
    build_spreading_matrix, draw_distinct_codes, draw_noise, sample_multipath_channel,
    stack_destination, superpose, Link, MultipathChannel, Node, PowerAllocation, PowerProfile,
    ReceivedVector, SpreadingCode,
};
use crate::{Complex, Error, Result};

/// Relay selection strategy run once at the start of every packet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// No selection: every relay forwards.
    None,
    #[serde(rename = "standard-greedy")]
    Standard,
    #[serde(rename = "proposed-greedy")]
    Proposed,
    Exhaustive,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::None,
        Strategy::Standard,
        Strategy::Proposed,
        Strategy::Exhaustive,
    ];

    pub fn select(self, ctx: &SinrContext) -> Result<RelaySet> {
        match self {
            Strategy::None => {
                let members: Vec<usize> = (0..ctx.relays()).collect();
                let sinr = sinr_for_set(&members, ctx)?;
                Ok(RelaySet {
                    members,
                    sinr,
                    evaluations: 0,
                })
            }
            Strategy::Standard => standard_greedy_select(ctx, &ctx.link_powers()),
            Strategy::Proposed => proposed_greedy_select(ctx),
            Strategy::Exhaustive => exhaustive_select(ctx),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::None => "none",
            Strategy::Standard => "standard-greedy",
            Strategy::Proposed => "proposed-greedy",
            Strategy::Exhaustive => "exhaustive",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Ok(Strategy::None),
            "standard" | "standard-greedy" => Ok(Strategy::Standard),
            "proposed" | "proposed-greedy" => Ok(Strategy::Proposed),
            "exhaustive" => Ok(Strategy::Exhaustive),
            other => Err(Error::config(
                "strategy",
                format!("unknown strategy `{other}` (expected none, standard, proposed or exhaustive)"),
            )),
        }
    }
}

/// What the experiment sweeps over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Sweep {
    /// SNR points in dB at the configured user count.
    Snr { snr_db: Vec<f64> },
    /// User counts at one SNR.
    Users { snr_db: f64, users: Vec<usize> },
}

/// One coordinate of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub users: usize,
    /// Value reported in the `sweep` column.
    pub coordinate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub users: usize,
    pub relays: usize,
    pub chips: usize,
    pub paths: usize,
    pub profile_db: PowerProfile,
    pub symbols: usize,
    pub trials: usize,
    pub sweep: Sweep,
    /// Destination detectors; the relays use the same one unless
    /// `relay_detector` is set.
    pub detectors: Vec<DetectorKind>,
    pub relay_detector: Option<DetectorKind>,
    pub strategies: Vec<Strategy>,
    pub detector: DetectorConfig,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            users: 10,
            relays: 6,
            chips: 16,
            paths: 3,
            profile_db: PowerProfile::three_path(),
            symbols: 200,
            trials: 30,
            sweep: Sweep::Snr {
                snr_db: vec![0.0, 4.0, 8.0, 12.0, 16.0],
            },
            detectors: vec![DetectorKind::GlPic],
            relay_detector: None,
            strategies: vec![Strategy::Proposed],
            detector: DetectorConfig::default(),
            seed: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn points(&self) -> Vec<SweepPoint> {
        match &self.sweep {
            Sweep::Snr { snr_db } => snr_db
                .iter()
                .map(|&snr_db| SweepPoint {
                    snr_db,
                    users: self.users,
                    coordinate: snr_db,
                })
                .collect(),
            Sweep::Users { snr_db, users } => users
                .iter()
                .map(|&k| SweepPoint {
                    snr_db: *snr_db,
                    users: k,
                    coordinate: k as f64,
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.chips == 0 {
            return Err(Error::config("chips", "spreading factor must be positive"));
        }
        if self.paths == 0 || self.paths >= self.chips {
            return Err(Error::config(
                "paths",
                format!(
                    "Lp < N is required, got Lp = {} with N = {}",
                    self.paths, self.chips
                ),
            ));
        }
        if self.profile_db.len() != self.paths {
            return Err(Error::config(
                "profile",
                format!(
                    "power profile has {} taps but Lp = {}",
                    self.profile_db.len(),
                    self.paths
                ),
            ));
        }
        if self.symbols == 0 {
            return Err(Error::config("symbols", "need at least one symbol per packet"));
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "need at least one trial"));
        }
        if self.relays == 0 {
            return Err(Error::config("relays", "need at least one relay"));
        }
        if self.detectors.is_empty() {
            return Err(Error::config("detector", "no detector selected"));
        }
        if self.strategies.is_empty() {
            return Err(Error::config("strategy", "no strategy selected"));
        }
        if self.strategies.contains(&Strategy::Exhaustive) && self.relays > EXHAUSTIVE_MAX_RELAYS {
            return Err(Error::config(
                "relays",
                format!(
                    "exhaustive search is capped at {EXHAUSTIVE_MAX_RELAYS} relays, got {}",
                    self.relays
                ),
            ));
        }
        let points = self.points();
        if points.is_empty() {
            return Err(Error::config("snr", "sweep has no points"));
        }
        let max_codes = if self.chips > 64 { u64::MAX } else { 1u64 << (self.chips - 1) };
        for p in &points {
            if !p.snr_db.is_finite() {
                return Err(Error::config("snr", format!("{} is not a finite SNR", p.snr_db)));
            }
            if p.users == 0 {
                return Err(Error::config("users", "need at least one user"));
            }
            if p.users as u64 > max_codes {
                return Err(Error::config(
                    "users",
                    format!("{} users exceed the distinct codes of length {}", p.users, self.chips),
                ));
            }
            self.detector.validate(p.users)?;
        }
        Ok(())
    }

    fn relay_detector_for(&self, destination: DetectorKind) -> DetectorKind {
        self.relay_detector.unwrap_or(destination)
    }
}

/// Noise variance per complex sample for unit symbol energy.
pub fn noise_variance(snr_db: f64) -> f64 {
    10f64.powf(-snr_db / 10.0)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of the private stream of one packet.
pub fn packet_seed(master: u64, sweep_index: usize, trial: usize) -> u64 {
    let h = splitmix64(master);
    let h = splitmix64(h ^ sweep_index as u64);
    splitmix64(h ^ (trial as u64).rotate_left(32))
}

/// Dimensions of one packet draw.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketShape {
    pub users: usize,
    pub relays: usize,
    pub chips: usize,
    pub paths: usize,
    pub symbols: usize,
    pub profile_db: PowerProfile,
}

/// Everything random about one packet.
///
/// Signatures are stored at unit amplitude; power allocation is applied when
/// observations are formed.
#[derive(Debug, Clone)]
pub struct PacketRealization {
    pub codes: Vec<SpreadingCode>,
    pub channels_sd: Vec<MultipathChannel>,
    /// `[relay][user]`
    pub channels_sr: Vec<Vec<MultipathChannel>>,
    /// `[relay][user]`
    pub channels_rd: Vec<Vec<MultipathChannel>>,
    /// `[symbol][user]` constellation indices.
    pub symbols: Vec<Vec<usize>>,
    noise_variance: f64,
    sig_sd: Vec<Vec<Complex>>,
    sig_sr: Vec<Vec<Vec<Complex>>>,
    sig_rd: Vec<Vec<Vec<Complex>>>,
    noise_sd: Vec<Vec<Complex>>,
    /// `[symbol][relay]`
    noise_sr: Vec<Vec<Vec<Complex>>>,
    noise_rd: Vec<Vec<Complex>>,
}

impl PacketRealization {
    pub fn draw<R: Rng + ?Sized>(
        shape: &PacketShape,
        constellation_size: usize,
        noise_variance: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let codes = draw_distinct_codes(shape.users, shape.chips, rng)?;
        let profile = &shape.profile_db;
        let channels_sd: Vec<MultipathChannel> = (0..shape.users)
            .map(|k| sample_multipath_channel(profile, Link::new(Node::Source(k), Node::Destination), rng))
            .collect();
        let channels_sr: Vec<Vec<MultipathChannel>> = (0..shape.relays)
            .map(|l| {
                (0..shape.users)
                    .map(|k| sample_multipath_channel(profile, Link::new(Node::Source(k), Node::Relay(l)), rng))
                    .collect()
            })
            .collect();
        let channels_rd: Vec<Vec<MultipathChannel>> = (0..shape.relays)
            .map(|l| {
                (0..shape.users)
                    .map(|_| sample_multipath_channel(profile, Link::new(Node::Relay(l), Node::Destination), rng))
                    .collect()
            })
            .collect();
        let symbols: Vec<Vec<usize>> = (0..shape.symbols)
            .map(|_| (0..shape.users).map(|_| rng.random_range(0..constellation_size)).collect())
            .collect();
        Self::from_parts(codes, channels_sd, channels_sr, channels_rd, symbols, noise_variance, rng)
    }

    /// Builds a packet from given codes, channels and symbols, drawing only
    /// the noise. All channels must have the same number of taps.
    pub fn from_parts<R: Rng + ?Sized>(
        codes: Vec<SpreadingCode>,
        channels_sd: Vec<MultipathChannel>,
        channels_sr: Vec<Vec<MultipathChannel>>,
        channels_rd: Vec<Vec<MultipathChannel>>,
        symbols: Vec<Vec<usize>>,
        noise_variance: f64,
        rng: &mut R,
    ) -> Result<Self> {
        if noise_variance.is_nan() || noise_variance < 0.0 {
            return Err(Error::config("snr", format!("noise variance {noise_variance} is negative")));
        }
        let users = codes.len();
        let relays = channels_sr.len();
        let paths = channels_sd.first().map_or(0, |h| h.taps().len());
        if channels_sd.len() != users {
            return Err(Error::Dimension { context: "source-destination channels", expected: users, actual: channels_sd.len() });
        }
        if channels_rd.len() != relays {
            return Err(Error::Dimension { context: "relay-destination channel sets", expected: relays, actual: channels_rd.len() });
        }
        for set in channels_sr.iter().chain(&channels_rd) {
            if set.len() != users {
                return Err(Error::Dimension { context: "channels per relay", expected: users, actual: set.len() });
            }
        }
        for h in channels_sd.iter().chain(channels_sr.iter().flatten()).chain(channels_rd.iter().flatten()) {
            if h.taps().len() != paths {
                return Err(Error::Dimension { context: "channel taps", expected: paths, actual: h.taps().len() });
            }
        }
        for b in &symbols {
            if b.len() != users {
                return Err(Error::Dimension { context: "symbols per time slot", expected: users, actual: b.len() });
            }
        }
        let spreading = codes
            .iter()
            .map(|c| build_spreading_matrix(c, paths))
            .collect::<Result<Vec<_>>>()?;
        let m = spreading[0].rows();
        let p = symbols.len();
        let noise_sd = (0..p).map(|_| draw_noise(m, noise_variance, rng)).collect();
        let noise_sr = (0..p)
            .map(|_| (0..relays).map(|_| draw_noise(m, noise_variance, rng)).collect())
            .collect();
        let noise_rd = (0..p).map(|_| draw_noise(m, noise_variance, rng)).collect();

        let sig = |channels: &[MultipathChannel]| -> Result<Vec<Vec<Complex>>> {
            spreading
                .iter()
                .zip(channels)
                .map(|(s, h)| s.apply(h.taps()))
                .collect()
        };
        let sig_sd = sig(&channels_sd)?;
        let sig_sr = channels_sr.iter().map(|c| sig(c)).collect::<Result<Vec<_>>>()?;
        let sig_rd = channels_rd.iter().map(|c| sig(c)).collect::<Result<Vec<_>>>()?;

        Ok(Self {
            codes,
            channels_sd,
            channels_sr,
            channels_rd,
            symbols,
            noise_variance,
            sig_sd,
            sig_sr,
            sig_rd,
            noise_sd,
            noise_sr,
            noise_rd,
        })
    }

    /// Stacked destination matrix under an explicit power allocation.
    pub fn destination_matrix(&self, subset: &[usize], power: PowerAllocation) -> Result<EffectiveChannelMatrix> {
        let a_sd = power.source_destination.value();
        let a_rd = power.relay_destination.value();
        let columns = (0..self.users())
            .map(|k| {
                let mut col: Vec<Complex> = self.sig_sd[k].iter().map(|x| x * a_sd).collect();
                let mut relayed = vec![Complex::new(0.0, 0.0); self.sig_sd[k].len()];
                for &l in subset {
                    for (r, x) in relayed.iter_mut().zip(&self.sig_rd[l][k]) {
                        *r += x * a_rd;
                    }
                }
                col.extend(relayed);
                col
            })
            .collect();
        EffectiveChannelMatrix::new(columns)
    }

    pub fn users(&self) -> usize {
        self.codes.len()
    }

    pub fn relays(&self) -> usize {
        self.channels_sr.len()
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn sinr_context(&self) -> Result<SinrContext> {
        SinrContext::new(self.sig_sd.clone(), self.sig_rd.clone(), self.noise_variance)
    }

    /// Channel matrix relay `relay` detects with; sources transmit to the
    /// relays at unit amplitude.
    pub fn relay_matrix(&self, relay: usize) -> Result<EffectiveChannelMatrix> {
        EffectiveChannelMatrix::new(self.sig_sr[relay].clone())
    }

    pub fn relay_observation(
        &self,
        relay: usize,
        symbol: usize,
        constellation: &crate::detect::Constellation,
    ) -> Result<ReceivedVector> {
        let b: Vec<Complex> = self.symbols[symbol].iter().map(|&i| constellation.point(i)).collect();
        let mut samples = superpose(&self.sig_sr[relay], &b)?;
        for (s, n) in samples.iter_mut().zip(&self.noise_sr[symbol][relay]) {
            *s += n;
        }
        Ok(ReceivedVector {
            samples,
            noise_variance: self.noise_variance,
        })
    }

    /// Stacked destination observation of one symbol. `forwarded[j]` holds the
    /// decisions relay `subset[j]` re-modulates, including its mistakes.
    pub fn destination_observation(
        &self,
        symbol: usize,
        subset: &[usize],
        forwarded: &[&[usize]],
        power: PowerAllocation,
        constellation: &crate::detect::Constellation,
    ) -> Result<ReceivedVector> {
        if subset.len() != forwarded.len() {
            return Err(Error::Dimension {
                context: "forwarded decisions per selected relay",
                expected: subset.len(),
                actual: forwarded.len(),
            });
        }
        let a_sd = power.source_destination.value();
        let a_rd = power.relay_destination.value();
        let b: Vec<Complex> = self.symbols[symbol]
            .iter()
            .map(|&i| constellation.point(i) * a_sd)
            .collect();
        let mut direct = superpose(&self.sig_sd, &b)?;
        for (s, n) in direct.iter_mut().zip(&self.noise_sd[symbol]) {
            *s += n;
        }
        let mut relayed = self.noise_rd[symbol].clone();
        for (&l, decisions) in subset.iter().zip(forwarded) {
            let b: Vec<Complex> = decisions.iter().map(|&i| constellation.point(i) * a_rd).collect();
            for (s, x) in relayed.iter_mut().zip(superpose(&self.sig_rd[l], &b)?) {
                *s += x;
            }
        }
        stack_destination(
            &ReceivedVector {
                samples: direct,
                noise_variance: self.noise_variance,
            },
            &ReceivedVector {
                samples: relayed,
                noise_variance: self.noise_variance,
            },
        )
    }
}

/// Decode-and-forward at one relay: detect all users from the relay's own
/// observation.
pub fn relay_decode_forward(
    observation: &ReceivedVector,
    relay_matrix: &EffectiveChannelMatrix,
    detector: DetectorKind,
    config: &DetectorConfig,
) -> Result<Vec<usize>> {
    detector.detect(&observation.samples, relay_matrix, config)
}

/// Error counts of one (detector, strategy) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub detector: DetectorKind,
    pub strategy: Strategy,
    pub errors: u64,
    pub bits: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PacketOutcome {
    /// Detector-major, strategy-minor order of the configuration.
    pub tallies: Vec<Tally>,
    /// One per configured strategy.
    pub selections: Vec<(Strategy, RelaySet)>,
    /// Per-user destination-bound energy of each strategy's allocation.
    pub power_audit: Vec<f64>,
}

/// Simulates one packet at `point` from the stream seeded by `seed`.
pub fn run_packet(cfg: &ExperimentConfig, point: &SweepPoint, seed: u64) -> Result<PacketOutcome> {
    let c = &cfg.detector.constellation;
    let shape = PacketShape {
        users: point.users,
        relays: cfg.relays,
        chips: cfg.chips,
        paths: cfg.paths,
        symbols: cfg.symbols,
        profile_db: cfg.profile_db.clone(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let packet = PacketRealization::draw(&shape, c.len(), noise_variance(point.snr_db), &mut rng)?;
    evaluate_packet(cfg, &packet)
}

/// Runs every configured (detector, strategy) pair on one realization.
pub fn evaluate_packet(cfg: &ExperimentConfig, packet: &PacketRealization) -> Result<PacketOutcome> {
    let c = &cfg.detector.constellation;
    let users = packet.users();
    let symbols = packet.symbols.len();
    let ctx = packet.sinr_context()?;

    let selections = cfg
        .strategies
        .iter()
        .map(|&s| Ok((s, s.select(&ctx)?)))
        .collect::<Result<Vec<_>>>()?;
    let power_audit = selections
        .iter()
        .map(|(_, set)| PowerAllocation::equal(set.members.len()).total_energy())
        .collect();
    let destination_matrices = selections
        .iter()
        .map(|(_, set)| ctx.destination_matrix(&set.members))
        .collect::<Result<Vec<_>>>()?;

    let mut needed = vec![false; packet.relays()];
    for (_, set) in &selections {
        for &l in &set.members {
            needed[l] = true;
        }
    }

    let bits_per_symbol = u64::from(c.bits_per_symbol());
    let mut tallies = Vec::with_capacity(cfg.detectors.len() * selections.len());
    for &detector in &cfg.detectors {
        // decisions[relay][symbol][user]; empty for relays no strategy uses.
        let relay_kind = cfg.relay_detector_for(detector);
        let mut decisions: Vec<Vec<Vec<usize>>> = vec![Vec::new(); packet.relays()];
        for (l, slot) in decisions.iter_mut().enumerate() {
            if !needed[l] {
                continue;
            }
            let h = packet.relay_matrix(l)?;
            *slot = (0..symbols)
                .map(|i| {
                    let y = packet.relay_observation(l, i, c)?;
                    relay_decode_forward(&y, &h, relay_kind, &cfg.detector)
                })
                .collect::<Result<_>>()?;
        }

        for ((strategy, set), h) in selections.iter().zip(&destination_matrices) {
            let power = PowerAllocation::equal(set.members.len());
            let mut errors = 0u64;
            for (i, sent) in packet.symbols.iter().enumerate() {
                let forwarded: Vec<&[usize]> =
                    set.members.iter().map(|&l| decisions[l][i].as_slice()).collect();
                let y = packet.destination_observation(i, &set.members, &forwarded, power, c)?;
                let detected = detector.detect(&y.samples, h, &cfg.detector)?;
                errors += sent
                    .iter()
                    .zip(&detected)
                    .map(|(&sent, &got)| u64::from(c.bit_errors(sent, got)))
                    .sum::<u64>();
            }
            tallies.push(Tally {
                detector,
                strategy: *strategy,
                errors,
                bits: symbols as u64 * users as u64 * bits_per_symbol,
            });
        }
    }

    Ok(PacketOutcome {
        tallies,
        selections,
        power_audit,
    })
}

/// Aggregated result of one (sweep point, detector, strategy) series entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerRecord {
    pub sweep: f64,
    pub snr_db: f64,
    pub users: usize,
    pub detector: DetectorKind,
    pub strategy: Strategy,
    pub errors: u64,
    pub bits: u64,
    pub ber: f64,
    /// Subset scorings summed over all packets.
    pub sinr_evals: u64,
    /// Fewest and most scorings spent on a single packet.
    pub sinr_evals_min: u64,
    pub sinr_evals_max: u64,
    pub packets: u64,
}

impl BerRecord {
    /// Binomial standard deviation of the BER estimate.
    pub fn sigma(&self) -> f64 {
        if self.bits == 0 {
            return 0.0;
        }
        (self.ber * (1.0 - self.ber) / self.bits as f64).sqrt()
    }
}

/// Runs every sweep point over `trials` packets.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<BerRecord>> {
    cfg.validate()?;
    let mut records = Vec::new();
    for (sweep_index, point) in cfg.points().iter().enumerate() {
        let outcomes = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| run_packet(cfg, point, packet_seed(cfg.seed, sweep_index, trial)))
            .collect::<Result<Vec<_>>>()?;
        records.extend(aggregate(point, &outcomes, cfg));
    }
    Ok(records)
}

fn aggregate(point: &SweepPoint, outcomes: &[PacketOutcome], cfg: &ExperimentConfig) -> Vec<BerRecord> {
    let pairs = cfg.detectors.len() * cfg.strategies.len();
    (0..pairs)
        .map(|idx| {
            let first = outcomes[0].tallies[idx];
            let strategy_idx = idx % cfg.strategies.len();
            let (errors, bits) = outcomes.iter().fold((0u64, 0u64), |(e, b), o| {
                (e + o.tallies[idx].errors, b + o.tallies[idx].bits)
            });
            let evals: Vec<u64> = outcomes
                .iter()
                .map(|o| o.selections[strategy_idx].1.evaluations as u64)
                .collect();
            BerRecord {
                sweep: point.coordinate,
                snr_db: point.snr_db,
                users: point.users,
                detector: first.detector,
                strategy: first.strategy,
                errors,
                bits,
                ber: errors as f64 / bits as f64,
                sinr_evals: evals.iter().sum(),
                sinr_evals_min: evals.iter().copied().min().unwrap_or(0),
                sinr_evals_max: evals.iter().copied().max().unwrap_or(0),
                packets: outcomes.len() as u64,
            }
        })
        .collect()
}
