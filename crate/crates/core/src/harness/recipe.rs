use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::signals::{gen_harmonic, gen_noise_burst, gen_two_tone};
use super::wav::read_wav;
use crate::error::{Error, Result};
use crate::transform::Frame;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalKind {
    TwoTone,
    Harmonic,
    NoiseBurst,
    WavSlice,
    CsvSlice,
}

impl SignalKind {
    pub fn label(self) -> &'static str {
        match self {
            SignalKind::TwoTone => "two_tone",
            SignalKind::Harmonic => "harmonic",
            SignalKind::NoiseBurst => "noise_burst",
            SignalKind::WavSlice => "wav_slice",
            SignalKind::CsvSlice => "csv_slice",
        }
    }

    /// Whether the kind stands in for unavailable recorded speech.
    pub fn is_surrogate(self) -> bool {
        matches!(self, SignalKind::Harmonic | SignalKind::NoiseBurst)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignalRecipe {
    TwoTone {
        fs: f64,
        f1: f64,
        f2: f64,
        a1: f64,
        a2: f64,
        len: usize,
    },
    Harmonic {
        fs: f64,
        f0: f64,
        partials: usize,
        decay: f64,
        len: usize,
    },
    NoiseBurst {
        len: usize,
        pole: f64,
        seed: u64,
    },
    WavSlice {
        path: PathBuf,
        fs: f64,
        offset: usize,
        len: usize,
    },
    CsvSlice {
        path: PathBuf,
        offset: usize,
        len: usize,
    },
}

impl SignalRecipe {
    pub fn len(&self) -> usize {
        match self {
            SignalRecipe::TwoTone { len, .. }
            | SignalRecipe::Harmonic { len, .. }
            | SignalRecipe::NoiseBurst { len, .. }
            | SignalRecipe::WavSlice { len, .. }
            | SignalRecipe::CsvSlice { len, .. } => *len,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Materializes a recipe. File slices never zero-pad: a slice running past
/// the end of the file is an error.
pub fn load_signal(recipe: &SignalRecipe) -> Result<Frame> {
    match recipe {
        &SignalRecipe::TwoTone {
            fs,
            f1,
            f2,
            a1,
            a2,
            len,
        } => gen_two_tone(fs, f1, f2, a1, a2, len),
        &SignalRecipe::Harmonic {
            fs,
            f0,
            partials,
            decay,
            len,
        } => gen_harmonic(fs, f0, partials, decay, len),
        &SignalRecipe::NoiseBurst { len, pole, seed } => gen_noise_burst(len, pole, seed),
        SignalRecipe::WavSlice {
            path,
            fs,
            offset,
            len,
        } => {
            let wav = read_wav(path)?;
            if (wav.sample_rate as f64 - fs).abs() > 1e-9 {
                return Err(Error::Config(format!(
                    "{} is sampled at {} Hz but the run is configured for {fs} Hz",
                    path.display(),
                    wav.sample_rate
                )));
            }
            slice(path, wav.normalized(), *offset, *len)
        }
        SignalRecipe::CsvSlice { path, offset, len } => {
            slice(path, read_csv_column(path)?, *offset, *len)
        }
    }
}

fn slice(path: &Path, samples: Vec<f64>, offset: usize, len: usize) -> Result<Frame> {
    let end = offset.saturating_add(len);
    if end > samples.len() {
        return Err(Error::ShortFile {
            path: path.to_path_buf(),
            offset,
            end,
            available: samples.len(),
        });
    }
    Frame::new(samples[offset..end].to_vec())
}

/// One real value per line; blank lines are skipped.
pub fn read_csv_column(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv_column(&text, path)
}

pub fn parse_csv_column(text: &str, path: &Path) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        match trimmed.parse::<f64>() {
            Ok(v) if v.is_finite() => out.push(v),
            _ => {
                return Err(Error::BadCsvValue {
                    path: path.to_path_buf(),
                    line: i + 1,
                    text: trimmed.to_string(),
                })
            }
        }
    }
    Ok(out)
}
