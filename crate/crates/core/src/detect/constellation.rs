use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Complex, Error};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Modulation {
    Bpsk,
    Qpsk,
    #[serde(rename = "16qam")]
    Qam16,
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "16qam",
        })
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bpsk" => Ok(Modulation::Bpsk),
            "qpsk" => Ok(Modulation::Qpsk),
            "16qam" | "qam16" => Ok(Modulation::Qam16),
            other => Err(Error::config(
                "modulation",
                format!("unknown modulation `{other}` (expected bpsk, qpsk or 16qam)"),
            )),
        }
    }
}

/// Unit average energy constellation with Gray bit labels.
///
/// Point order is canonical: slicer ties and candidate enumeration both follow
/// it. All supported constellations are rectangular, so slicer decision
/// boundaries are axis-aligned lines halfway between adjacent levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Modulation", into = "Modulation")]
pub struct Constellation {
    kind: Modulation,
    points: Vec<Complex>,
    labels: Vec<u32>,
    bits_per_symbol: u32,
    beta: f64,
    re_boundaries: Vec<f64>,
    im_boundaries: Vec<f64>,
}

impl From<Modulation> for Constellation {
    fn from(kind: Modulation) -> Self {
        Constellation::new(kind)
    }
}

impl From<Constellation> for Modulation {
    fn from(c: Constellation) -> Self {
        c.kind
    }
}

impl Constellation {
    pub fn new(kind: Modulation) -> Self {
        let (points, labels, bits) = match kind {
            Modulation::Bpsk => (
                vec![Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)],
                vec![0, 1],
                1,
            ),
            Modulation::Qpsk => {
                let r = std::f64::consts::FRAC_1_SQRT_2;
                (
                    vec![
                        Complex::new(r, r),
                        Complex::new(-r, r),
                        Complex::new(-r, -r),
                        Complex::new(r, -r),
                    ],
                    vec![0, 1, 3, 2],
                    2,
                )
            }
            Modulation::Qam16 => {
                let norm = 1.0 / 10f64.sqrt();
                let gray = [0u32, 1, 3, 2];
                let mut points = Vec::with_capacity(16);
                let mut labels = Vec::with_capacity(16);
                for (i, gi) in gray.iter().enumerate() {
                    for (j, gj) in gray.iter().enumerate() {
                        points.push(Complex::new(
                            (2.0 * i as f64 - 3.0) * norm,
                            (2.0 * j as f64 - 3.0) * norm,
                        ));
                        labels.push((gi << 2) | gj);
                    }
                }
                (points, labels, 4)
            }
        };

        let mut beta = f64::INFINITY;
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                beta = beta.min((a - b).norm());
            }
        }
        let re_boundaries = midpoints(points.iter().map(|p| p.re));
        let im_boundaries = midpoints(points.iter().map(|p| p.im));

        Self {
            kind,
            points,
            labels,
            bits_per_symbol: bits,
            beta,
            re_boundaries,
            im_boundaries,
        }
    }

    pub fn bpsk() -> Self {
        Self::new(Modulation::Bpsk)
    }

    pub fn qpsk() -> Self {
        Self::new(Modulation::Qpsk)
    }

    pub fn qam16() -> Self {
        Self::new(Modulation::Qam16)
    }

    pub fn kind(&self) -> Modulation {
        self.kind
    }

    pub fn points(&self) -> &[Complex] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Complex {
        self.points[index]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.bits_per_symbol
    }

    /// Minimum distance between two points.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn label(&self, index: usize) -> u32 {
        self.labels[index]
    }

    /// Number of differing bits between the labels of two points.
    pub fn bit_errors(&self, sent: usize, detected: usize) -> u32 {
        (self.labels[sent] ^ self.labels[detected]).count_ones()
    }

    /// Nearest point; ties go to the lower index.
    pub fn slice(&self, u: Complex) -> usize {
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let d = (u - p).norm_sqr();
            if d < best_dist {
                best = i;
                best_dist = d;
            }
        }
        best
    }

    pub fn slice_point(&self, u: Complex) -> Complex {
        self.points[self.slice(u)]
    }

    /// Euclidean distance from `u` to its nearest point.
    pub fn nearest_distance(&self, u: Complex) -> f64 {
        self.points
            .iter()
            .map(|p| (u - p).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from `u` to the closest slicer decision boundary. Boundaries
    /// are unbounded lines, so this only depends on one coordinate per line.
    pub fn boundary_distance(&self, u: Complex) -> f64 {
        let re = self.re_boundaries.iter().map(|b| (u.re - b).abs());
        let im = self.im_boundaries.iter().map(|b| (u.im - b).abs());
        re.chain(im).fold(f64::INFINITY, f64::min)
    }
}

fn midpoints(levels: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut levels: Vec<f64> = levels.collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    levels.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}
