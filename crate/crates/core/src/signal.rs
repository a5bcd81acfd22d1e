//! Signal model: spreading codes, convolution matrices, multipath channels and
//! received-vector synthesis.
//!
//! Every receiver sees, per symbol, an `M = N + Lp - 1` chip vector
//!
//! ```text
//! y = sum_k a_k * S_k * h_k * b_k + n
//! ```
//!
//! where `S_k` is the banded Toeplitz matrix of user `k`'s chips, `h_k` the
//! `Lp` multipath taps of the link and `a_k` the link amplitude. The
//! destination stacks its direct-link and relay-link observations into a
//! `2M` vector.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Complex, Error, Result};

const UNIT_NORM_TOL: f64 = 1e-9;

/// Unit-energy binary spreading sequence of one user.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadingCode {
    chips: Vec<f64>,
    user_id: usize,
}

impl SpreadingCode {
    /// Wraps an explicit chip sequence. The sequence must have unit energy.
    pub fn new(user_id: usize, chips: Vec<f64>) -> Result<Self> {
        if chips.is_empty() {
            return Err(Error::config("chips", "spreading code must not be empty"));
        }
        let energy: f64 = chips.iter().map(|c| c * c).sum();
        if (energy - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::config(
                "chips",
                format!("spreading code energy is {energy}, expected 1"),
            ));
        }
        Ok(Self { chips, user_id })
    }

    /// Builds a code from `+1/-1` signs, scaled by `1/sqrt(N)`.
    pub fn from_signs(user_id: usize, signs: &[f64]) -> Result<Self> {
        let scale = 1.0 / (signs.len() as f64).sqrt();
        Self::new(user_id, signs.iter().map(|s| s.signum() * scale).collect())
    }

    /// Draws i.i.d. equiprobable `+-1/sqrt(N)` chips.
    pub fn random<R: Rng + ?Sized>(user_id: usize, n: usize, rng: &mut R) -> Self {
        let scale = 1.0 / (n as f64).sqrt();
        let chips = (0..n)
            .map(|_| if rng.random_bool(0.5) { scale } else { -scale })
            .collect();
        Self { chips, user_id }
    }

    pub fn chips(&self) -> &[f64] {
        &self.chips
    }

    pub fn len(&self) -> usize {
        self.chips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chips.is_empty()
    }

    pub fn user_id(&self) -> usize {
        self.user_id
    }

    fn collinear(&self, other: &SpreadingCode) -> bool {
        let same = self.chips.iter().zip(&other.chips).all(|(a, b)| a == b);
        let negated = self.chips.iter().zip(&other.chips).all(|(a, b)| *a == -*b);
        same || negated
    }
}

/// Draws `users` random codes of length `n`, redrawing any code that equals
/// (or negates) one already assigned.
pub fn draw_distinct_codes<R: Rng + ?Sized>(
    users: usize,
    n: usize,
    rng: &mut R,
) -> Result<Vec<SpreadingCode>> {
    if n == 0 {
        return Err(Error::config("chips", "spreading factor must be positive"));
    }
    // 2^(n-1) sign classes up to global negation.
    let classes = if n > 64 { u64::MAX } else { 1u64 << (n - 1) };
    if users as u64 > classes {
        return Err(Error::config(
            "users",
            format!("cannot draw {users} distinct codes of length {n}"),
        ));
    }
    let mut codes: Vec<SpreadingCode> = Vec::with_capacity(users);
    while codes.len() < users {
        let candidate = SpreadingCode::random(codes.len(), n, rng);
        if codes.iter().all(|c| !c.collinear(&candidate)) {
            codes.push(candidate);
        }
    }
    Ok(codes)
}

/// `M x Lp` convolution matrix: column `j` holds the chips shifted down by `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadingMatrix {
    chips: Vec<f64>,
    paths: usize,
}

impl SpreadingMatrix {
    pub fn rows(&self) -> usize {
        self.chips.len() + self.paths - 1
    }

    pub fn cols(&self) -> usize {
        self.paths
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.rows() && col < self.paths, "index out of range");
        match row.checked_sub(col) {
            Some(offset) if offset < self.chips.len() => self.chips[offset],
            _ => 0.0,
        }
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.rows()).map(|row| self.get(row, col)).collect()
    }

    /// Computes `S * h` for an `Lp`-tap vector.
    pub fn apply(&self, taps: &[Complex]) -> Result<Vec<Complex>> {
        if taps.len() != self.paths {
            return Err(Error::Dimension {
                context: "spreading matrix times channel taps",
                expected: self.paths,
                actual: taps.len(),
            });
        }
        let mut out = vec![Complex::new(0.0, 0.0); self.rows()];
        for (shift, &tap) in taps.iter().enumerate() {
            for (i, &chip) in self.chips.iter().enumerate() {
                out[i + shift] += tap * chip;
            }
        }
        Ok(out)
    }
}

/// Builds the banded Toeplitz convolution matrix of a code for `paths` taps.
pub fn build_spreading_matrix(code: &SpreadingCode, paths: usize) -> Result<SpreadingMatrix> {
    if paths == 0 {
        return Err(Error::config("paths", "need at least one propagation path"));
    }
    if paths >= code.len() {
        return Err(Error::config(
            "paths",
            format!(
                "Lp < N is required, got Lp = {paths} with N = {}",
                code.len()
            ),
        ));
    }
    Ok(SpreadingMatrix {
        chips: code.chips.clone(),
        paths,
    })
}

/// Average per-tap power in dB.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerProfile(pub Vec<f64>);

impl PowerProfile {
    /// Three paths at 0, -3 and -6 dB.
    pub fn three_path() -> Self {
        PowerProfile(vec![0.0, -3.0, -6.0])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Per-tap amplitude scale factors `10^(dB/20)`.
    pub fn amplitudes(&self) -> Vec<f64> {
        self.0.iter().map(|db| 10f64.powf(db / 20.0)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Node {
    Source(usize),
    Relay(usize),
    Destination,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Link {
    pub from: Node,
    pub to: Node,
}

impl Link {
    pub fn new(from: Node, to: Node) -> Self {
        Self { from, to }
    }
}

/// Block-fading multipath taps of one link.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipathChannel {
    taps: Vec<Complex>,
    link: Link,
}

impl MultipathChannel {
    /// Wraps taps as given, without normalization.
    pub fn new(taps: Vec<Complex>, link: Link) -> Self {
        Self { taps, link }
    }

    /// Wraps taps scaled to unit total power.
    pub fn normalized(taps: Vec<Complex>, link: Link) -> Result<Self> {
        let norm = taps.iter().map(|t| t.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::config("taps", "cannot normalize an all-zero channel"));
        }
        let taps = taps.into_iter().map(|t| t / norm).collect();
        Ok(Self { taps, link })
    }

    pub fn taps(&self) -> &[Complex] {
        &self.taps
    }

    pub fn link(&self) -> Link {
        self.link
    }

    /// `h^H h`.
    pub fn path_power(&self) -> f64 {
        self.taps.iter().map(|t| t.norm_sqr()).sum()
    }
}

/// Draws taps with uniform `[0, 1)` magnitude and uniform phase, scaled by the
/// profile amplitudes but not yet normalized.
pub fn sample_profile_taps<R: Rng + ?Sized>(profile: &PowerProfile, rng: &mut R) -> Vec<Complex> {
    profile
        .amplitudes()
        .into_iter()
        .map(|amp| {
            let magnitude: f64 = rng.random();
            let phase = 2.0 * PI * rng.random::<f64>();
            Complex::from_polar(amp * magnitude, phase)
        })
        .collect()
}

/// Draws one unit-power multipath channel for `link`.
pub fn sample_multipath_channel<R: Rng + ?Sized>(
    profile: &PowerProfile,
    link: Link,
    rng: &mut R,
) -> MultipathChannel {
    loop {
        let taps = sample_profile_taps(profile, rng);
        if let Ok(channel) = MultipathChannel::normalized(taps, link) {
            return channel;
        }
    }
}

/// Square root of the transmit power allocated to one link.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LinkAmplitude(f64);

impl LinkAmplitude {
    pub fn new(value: f64) -> Result<Self> {
        if !(value >= 0.0 && value.is_finite()) {
            return Err(Error::config("amplitude", format!("{value} is not a nonnegative real")));
        }
        Ok(Self(value))
    }

    pub fn unit() -> Self {
        Self(1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Per-user amplitudes on the destination-bound links when `active_relays`
/// relays forward.
///
/// The direct link and every active relay link share a unit budget:
/// `sd^2 + active_relays * rd^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAllocation {
    pub source_destination: LinkAmplitude,
    pub relay_destination: LinkAmplitude,
    pub active_relays: usize,
}

impl PowerAllocation {
    /// Equal split over the direct link and each active relay link.
    pub fn equal(active_relays: usize) -> Self {
        let amp = (1.0 / (active_relays as f64 + 1.0)).sqrt();
        Self {
            source_destination: LinkAmplitude(amp),
            relay_destination: LinkAmplitude(amp),
            active_relays,
        }
    }

    /// Gives the direct link `direct_power` of the budget and splits the rest
    /// equally over the active relays.
    pub fn with_direct_share(direct_power: f64, active_relays: usize) -> Result<Self> {
        if !(0.0..=1.0).contains(&direct_power) {
            return Err(Error::config("direct_power", "must lie in [0, 1]"));
        }
        if active_relays == 0 && direct_power != 1.0 {
            return Err(Error::config(
                "direct_power",
                "without relays the direct link carries the whole budget",
            ));
        }
        let relay_power = if active_relays == 0 {
            0.0
        } else {
            (1.0 - direct_power) / active_relays as f64
        };
        Ok(Self {
            source_destination: LinkAmplitude(direct_power.sqrt()),
            relay_destination: LinkAmplitude(relay_power.sqrt()),
            active_relays,
        })
    }

    /// Energy per symbol spent by one user across the destination-bound links.
    pub fn total_energy(&self) -> f64 {
        self.source_destination.0.powi(2)
            + self.active_relays as f64 * self.relay_destination.0.powi(2)
    }
}

/// `a * S * h`: the column a receiver correlates against for one user and link.
pub fn effective_signature(
    spreading: &SpreadingMatrix,
    channel: &MultipathChannel,
    amplitude: LinkAmplitude,
) -> Result<Vec<Complex>> {
    let mut sig = spreading.apply(channel.taps())?;
    for s in &mut sig {
        *s *= amplitude.value();
    }
    Ok(sig)
}

/// Chip-rate observation at one receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedVector {
    pub samples: Vec<Complex>,
    /// Noise variance per complex sample.
    pub noise_variance: f64,
}

impl ReceivedVector {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Noiseless superposition `sum_k signature_k * symbol_k`.
pub fn superpose(signatures: &[Vec<Complex>], symbols: &[Complex]) -> Result<Vec<Complex>> {
    if signatures.len() != symbols.len() {
        return Err(Error::Dimension {
            context: "signatures vs symbols",
            expected: signatures.len(),
            actual: symbols.len(),
        });
    }
    let Some(first) = signatures.first() else {
        return Err(Error::config("users", "need at least one signature"));
    };
    let len = first.len();
    let mut out = vec![Complex::new(0.0, 0.0); len];
    for (sig, &b) in signatures.iter().zip(symbols) {
        if sig.len() != len {
            return Err(Error::Dimension {
                context: "signature length",
                expected: len,
                actual: sig.len(),
            });
        }
        for (o, &s) in out.iter_mut().zip(sig) {
            *o += s * b;
        }
    }
    Ok(out)
}

/// Circularly-symmetric complex Gaussian sample with variance `variance`.
pub fn complex_gaussian<R: Rng + ?Sized>(variance: f64, rng: &mut R) -> Complex {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(re * scale, im * scale)
}

pub fn draw_noise<R: Rng + ?Sized>(len: usize, variance: f64, rng: &mut R) -> Vec<Complex> {
    (0..len).map(|_| complex_gaussian(variance, rng)).collect()
}

/// Superposes all users' signatures and adds one complex AWGN draw.
pub fn synthesize_received<R: Rng + ?Sized>(
    signatures: &[Vec<Complex>],
    symbols: &[Complex],
    noise_variance: f64,
    rng: &mut R,
) -> Result<ReceivedVector> {
    if noise_variance.is_nan() || noise_variance < 0.0 {
        return Err(Error::config(
            "noise_variance",
            format!("{noise_variance} is negative"),
        ));
    }
    let mut samples = superpose(signatures, symbols)?;
    for s in &mut samples {
        *s += complex_gaussian(noise_variance, rng);
    }
    Ok(ReceivedVector {
        samples,
        noise_variance,
    })
}

/// Stacks the direct-link and relay-link observations into one `2M` vector.
pub fn stack_destination(direct: &ReceivedVector, relayed: &ReceivedVector) -> Result<ReceivedVector> {
    if direct.len() != relayed.len() {
        return Err(Error::Dimension {
            context: "stacked destination halves",
            expected: direct.len(),
            actual: relayed.len(),
        });
    }
    let mut samples = Vec::with_capacity(2 * direct.len());
    samples.extend_from_slice(&direct.samples);
    samples.extend_from_slice(&relayed.samples);
    Ok(ReceivedVector {
        samples,
        noise_variance: direct.noise_variance,
    })
}
