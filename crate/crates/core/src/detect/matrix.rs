use crate::{Complex, Error, Result};

/// Per-receiver matrix of effective signatures, one column per user.
///
/// Column norms and the Gram matrix `H^H H` are computed once on construction
/// since the channel is constant over a packet.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveChannelMatrix {
    columns: Vec<Vec<Complex>>,
    norms_sq: Vec<f64>,
    gram: Vec<Complex>,
}

impl EffectiveChannelMatrix {
    pub fn new(columns: Vec<Vec<Complex>>) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::config("users", "channel matrix needs at least one column"));
        };
        let rows = first.len();
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::Dimension {
                context: "effective channel column",
                expected: rows,
                actual: bad.len(),
            });
        }
        let k = columns.len();
        let mut gram = vec![Complex::new(0.0, 0.0); k * k];
        for i in 0..k {
            for j in i..k {
                let g = inner(&columns[i], &columns[j]);
                gram[i * k + j] = g;
                gram[j * k + i] = g.conj();
            }
        }
        let norms_sq = (0..k).map(|i| gram[i * k + i].re).collect();
        Ok(Self {
            columns,
            norms_sq,
            gram,
        })
    }

    pub fn rows(&self) -> usize {
        self.columns[0].len()
    }

    pub fn users(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, k: usize) -> &[Complex] {
        &self.columns[k]
    }

    pub fn columns(&self) -> &[Vec<Complex>] {
        &self.columns
    }

    pub fn norm_sq(&self, k: usize) -> f64 {
        self.norms_sq[k]
    }

    /// `H_k^H H_j`.
    pub fn gram(&self, k: usize, j: usize) -> Complex {
        self.gram[k * self.users() + j]
    }

    /// `H_k^H y`.
    pub fn correlate(&self, k: usize, y: &[Complex]) -> Complex {
        inner(&self.columns[k], y)
    }

    /// `H b`.
    pub fn apply(&self, b: &[Complex]) -> Vec<Complex> {
        let mut out = vec![Complex::new(0.0, 0.0); self.rows()];
        for (col, &bk) in self.columns.iter().zip(b) {
            for (o, &h) in out.iter_mut().zip(col) {
                *o += h * bk;
            }
        }
        out
    }

    /// `||y - H b||^2`.
    pub fn residual_norm_sq(&self, y: &[Complex], b: &[Complex]) -> f64 {
        let hb = self.apply(b);
        y.iter().zip(&hb).map(|(a, b)| (a - b).norm_sqr()).sum()
    }

    pub(crate) fn check_observation(&self, y: &[Complex]) -> Result<()> {
        if y.len() != self.rows() {
            return Err(Error::Dimension {
                context: "observation length vs channel matrix rows",
                expected: self.rows(),
                actual: y.len(),
            });
        }
        Ok(())
    }
}

/// Conjugate inner product `a^H b`.
pub fn inner(a: &[Complex], b: &[Complex]) -> Complex {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
