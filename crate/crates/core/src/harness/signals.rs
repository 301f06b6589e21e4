//! Synthetic test signals: two-tone, harmonic (vowel surrogate) and
//! high-passed noise burst (consonant surrogate).

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::transform::Frame;

fn check_below_nyquist(f: f64, fs: f64) -> Result<()> {
    if !(fs > 0.0 && fs.is_finite()) {
        return Err(Error::domain(format!(
            "sampling rate must be positive, got {fs}"
        )));
    }
    if !(f.is_finite() && f >= 0.0) || f >= fs / 2.0 {
        return Err(Error::domain(format!(
            "frequency {f} Hz aliases at fs = {fs} Hz (Nyquist {} Hz)",
            fs / 2.0
        )));
    }
    Ok(())
}

/// a1·sin(2πf1 n/fs) + a2·sin(2πf2 n/fs), n = 0..len.
pub fn gen_two_tone(fs: f64, f1: f64, f2: f64, a1: f64, a2: f64, len: usize) -> Result<Frame> {
    check_below_nyquist(f1, fs)?;
    check_below_nyquist(f2, fs)?;
    Frame::new(
        (0..len)
            .map(|n| {
                let t = n as f64 / fs;
                a1 * (2.0 * PI * f1 * t).sin() + a2 * (2.0 * PI * f2 * t).sin()
            })
            .collect(),
    )
}

/// Partials k·f0 for k = 1..=partials with amplitude decay^(k-1), 0⁰ = 1.
pub fn gen_harmonic(fs: f64, f0: f64, partials: usize, decay: f64, len: usize) -> Result<Frame> {
    if partials == 0 {
        return Err(Error::domain("harmonic signal needs at least one partial"));
    }
    check_below_nyquist(f0 * partials as f64, fs)?;
    if !decay.is_finite() {
        return Err(Error::domain("decay must be finite"));
    }
    let amps: Vec<f64> = (0..partials).map(|k| decay.powi(k as i32)).collect();
    Frame::new(
        (0..len)
            .map(|n| {
                let t = n as f64 / fs;
                amps.iter()
                    .enumerate()
                    .map(|(k, a)| a * (2.0 * PI * f0 * (k + 1) as f64 * t).sin())
                    .sum()
            })
            .collect(),
    )
}

/// Seeded white Gaussian noise through y[n] = p·(y[n-1] + x[n] - x[n-1]),
/// a single-pole high-pass with pole `p`.
pub fn gen_noise_burst(len: usize, pole: f64, seed: u64) -> Result<Frame> {
    if !(0.0..1.0).contains(&pole) {
        return Err(Error::domain(format!(
            "high-pass pole must lie in [0, 1), got {pole}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prev_x = 0.0;
    let mut prev_y = 0.0;
    Frame::new(
        (0..len)
            .map(|_| {
                let x: f64 = StandardNormal.sample(&mut rng);
                let y = pole * (prev_y + x - prev_x);
                prev_x = x;
                prev_y = y;
                y
            })
            .collect(),
    )
}
