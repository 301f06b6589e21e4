//! Bark-scale frequency warping and the inter-band spreading potential.

use crate::error::{Error, Result};
use crate::matrix::RealMatrix;

/// Interior DFT bins 1..N/2-1 of an `n`-point frame sampled at `fs` Hz.
/// DC and Nyquist are excluded.
#[derive(Clone, Debug, PartialEq)]
pub struct BinGrid {
    fs: f64,
    n: usize,
    freqs: Vec<f64>,
}

impl BinGrid {
    pub fn new(fs: f64, n: usize) -> Result<Self> {
        if !(fs.is_finite() && fs > 0.0) {
            return Err(Error::domain(format!(
                "sampling rate must be positive, got {fs}"
            )));
        }
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "frame length must be even and at least 8, got {n}"
            )));
        }
        let order = n / 2 - 1;
        let freqs = (0..order).map(|k| (k + 1) as f64 * fs / n as f64).collect();
        Ok(BinGrid { fs, n, freqs })
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn frame_len(&self) -> usize {
        self.n
    }

    /// N/2 - 1.
    pub fn order(&self) -> usize {
        self.freqs.len()
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }
}

/// Zwicker-style Hz to Bark map: 13·atan(0.00076 f) + 3.5·atan((f/7500)²).
pub fn hz_to_bark(f: f64) -> Result<f64> {
    if !f.is_finite() || f < 0.0 {
        return Err(Error::domain(format!(
            "frequency must be finite and nonnegative, got {f}"
        )));
    }
    Ok(13.0 * (0.00076 * f).atan() + 3.5 * (f / 7500.0).powi(2).atan())
}

/// Spreading level in dB contributed at `b_to` by excitation at `b_from`.
///
/// L(Δb) = 15.81 + 7.5(Δb + 0.474) - 17.5·sqrt(1 + (Δb + 0.474)²), with
/// Δb = b_to - b_from. The slope toward higher frequencies is shallower
/// than toward lower ones.
pub fn spreading_db(b_from: f64, b_to: f64) -> Result<f64> {
    if !b_from.is_finite() || !b_to.is_finite() {
        return Err(Error::domain("bark inputs must be finite"));
    }
    let x = b_to - b_from + 0.474;
    Ok(15.81 + 7.5 * x - 17.5 * (1.0 + x * x).sqrt())
}

/// dB to linear power.
#[inline]
pub fn db_to_power(level_db: f64) -> f64 {
    10f64.powf(level_db / 10.0)
}

/// Symmetric, nonnegative auditory potential over the interior bins.
#[derive(Clone, Debug, PartialEq)]
pub struct SpreadingMatrix {
    entries: RealMatrix,
}

impl SpreadingMatrix {
    pub fn order(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &RealMatrix {
        &self.entries
    }

    pub fn into_inner(self) -> RealMatrix {
        self.entries
    }
}

/// V[m][n] = ½(lin S(b_m, b_n) + lin S(b_n, b_m)) with lin = 10^(L/10).
pub fn build_spreading_matrix(grid: &BinGrid) -> SpreadingMatrix {
    let barks: Vec<f64> = grid
        .freqs()
        .iter()
        .map(|&f| hz_to_bark(f).expect("grid frequencies are finite and positive"))
        .collect();
    let order = barks.len();
    let mut v = RealMatrix::zeros(order, order);
    for m in 0..order {
        for n in m..order {
            let forward = db_to_power(spreading_db(barks[m], barks[n]).expect("finite barks"));
            let backward = db_to_power(spreading_db(barks[n], barks[m]).expect("finite barks"));
            let sym = 0.5 * (forward + backward);
            v[(m, n)] = sym;
            v[(n, m)] = sym;
        }
    }
    SpreadingMatrix { entries: v }
}
