//! Flat run configuration. Every key is optional; defaults reproduce the
//! reference operating point (N = 256, σ₁ = 0.6, σ₂ = 0.04, SNR grid
//! -12..=12 dB in 3 dB steps).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::recipe::{SignalKind, SignalRecipe};
use crate::denoise::ThresholdRule;
use crate::error::{Error, Result};
use crate::propagator::{ExponentSign, PropagatorConfig};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Dft,
    Odat,
    #[default]
    Both,
}

impl Branch {
    pub fn includes_dft(self) -> bool {
        matches!(self, Branch::Dft | Branch::Both)
    }

    pub fn includes_odat(self) -> bool {
        matches!(self, Branch::Odat | Branch::Both)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub fs: f64,
    pub n: usize,
    pub sigma1: f64,
    pub sigma2: f64,
    pub sign: ExponentSign,

    /// Signal used by `spectrum` and `gen`.
    pub signal: SignalKind,
    pub tone1_hz: f64,
    pub tone2_hz: f64,
    pub tone1_amp: f64,
    pub tone2_amp: f64,
    pub f0_hz: f64,
    pub partials: usize,
    pub decay: f64,
    pub burst_pole: f64,
    pub burst_seed: u64,
    pub input: Option<PathBuf>,
    pub offset: usize,
    /// Samples written by `gen`; defaults to `n`.
    pub gen_len: Option<usize>,

    /// Samples per denoising segment; split into frames of length `n`.
    pub segment_len: usize,
    pub sweep_signals: Vec<SignalKind>,
    pub snr_min_db: f64,
    pub snr_max_db: f64,
    pub snr_step_db: f64,
    /// First noise seed; a sweep uses `seed..seed + seeds`.
    pub seed: u64,
    pub seeds: usize,
    pub threshold_rule: ThresholdRule,
    pub branch: Branch,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            fs: 16000.0,
            n: 256,
            sigma1: PropagatorConfig::DEFAULT.sigma1,
            sigma2: PropagatorConfig::DEFAULT.sigma2,
            sign: ExponentSign::Positive,
            signal: SignalKind::TwoTone,
            tone1_hz: 3000.0,
            tone2_hz: 4300.0,
            tone1_amp: 1.0,
            tone2_amp: 1.0,
            f0_hz: 125.0,
            partials: 10,
            decay: 0.8,
            burst_pole: 0.9,
            burst_seed: 1,
            input: None,
            offset: 0,
            gen_len: None,
            segment_len: 512,
            sweep_signals: vec![SignalKind::Harmonic, SignalKind::NoiseBurst],
            snr_min_db: -12.0,
            snr_max_db: 12.0,
            snr_step_db: 3.0,
            seed: 0,
            seeds: 20,
            threshold_rule: ThresholdRule::MeanDft,
            branch: Branch::Both,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn propagator(&self) -> Result<PropagatorConfig> {
        PropagatorConfig::new(self.sigma1, self.sigma2)
    }

    pub fn validate(&self) -> Result<()> {
        self.propagator()?;
        if !(self.fs.is_finite() && self.fs > 0.0) {
            return Err(Error::Config(format!(
                "fs must be positive, got {}",
                self.fs
            )));
        }
        if self.n < 8 || !self.n.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "n must be even and at least 8, got {}",
                self.n
            )));
        }
        if self.segment_len == 0 || !self.segment_len.is_multiple_of(self.n) {
            return Err(Error::Config(format!(
                "segment_len {} must be a positive multiple of n = {}",
                self.segment_len, self.n
            )));
        }
        if !(self.snr_step_db.is_finite() && self.snr_step_db > 0.0) {
            return Err(Error::Config("snr_step_db must be positive".into()));
        }
        if !(self.snr_min_db.is_finite() && self.snr_max_db.is_finite())
            || self.snr_min_db > self.snr_max_db
        {
            return Err(Error::Config(
                "snr_min_db must not exceed snr_max_db".into(),
            ));
        }
        if self.seeds == 0 {
            return Err(Error::Config("seeds must be at least 1".into()));
        }
        if self.sweep_signals.is_empty() {
            return Err(Error::Config("sweep_signals must not be empty".into()));
        }
        Ok(())
    }

    pub fn snr_grid(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let v = self.snr_min_db + k as f64 * self.snr_step_db;
            if v > self.snr_max_db + 1e-9 {
                break;
            }
            out.push(v);
            k += 1;
        }
        out
    }

    pub fn seed_list(&self) -> Vec<u64> {
        (0..self.seeds as u64)
            .map(|i| self.seed.wrapping_add(i))
            .collect()
    }

    pub fn recipe(&self, kind: SignalKind, len: usize) -> Result<SignalRecipe> {
        let need_input = || {
            self.input.clone().ok_or_else(|| {
                Error::Config(format!("signal {} needs an input path", kind.label()))
            })
        };
        Ok(match kind {
            SignalKind::TwoTone => SignalRecipe::TwoTone {
                fs: self.fs,
                f1: self.tone1_hz,
                f2: self.tone2_hz,
                a1: self.tone1_amp,
                a2: self.tone2_amp,
                len,
            },
            SignalKind::Harmonic => SignalRecipe::Harmonic {
                fs: self.fs,
                f0: self.f0_hz,
                partials: self.partials,
                decay: self.decay,
                len,
            },
            SignalKind::NoiseBurst => SignalRecipe::NoiseBurst {
                len,
                pole: self.burst_pole,
                seed: self.burst_seed,
            },
            SignalKind::WavSlice => SignalRecipe::WavSlice {
                path: need_input()?,
                fs: self.fs,
                offset: self.offset,
                len,
            },
            SignalKind::CsvSlice => SignalRecipe::CsvSlice {
                path: need_input()?,
                offset: self.offset,
                len,
            },
        })
    }
}
