//! RIFF/WAVE reader and writer restricted to mono 16-bit integer PCM.

use std::path::Path;

use crate::error::{Error, Result};

const FORMAT_PCM: u16 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct WavData {
    pub sample_rate: u32,
    pub samples: Vec<i16>,
}

impl WavData {
    /// Samples scaled into [-1, 1) by 1/32768.
    pub fn normalized(&self) -> Vec<f64> {
        self.samples.iter().map(|&s| pcm_to_unit(s)).collect()
    }
}

#[inline]
pub fn pcm_to_unit(s: i16) -> f64 {
    s as f64 / 32768.0
}

pub fn read_wav(path: &Path) -> Result<WavData> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    parse_wav(&bytes, path)
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

pub fn parse_wav(bytes: &[u8], path: &Path) -> Result<WavData> {
    let malformed = |offset: usize, reason: &str| Error::MalformedWav {
        path: path.to_path_buf(),
        offset: offset as u64,
        reason: reason.to_string(),
    };
    let unsupported = |reason: String| Error::UnsupportedWav {
        path: path.to_path_buf(),
        reason,
    };

    if bytes.len() < 12 {
        return Err(malformed(bytes.len(), "file shorter than the RIFF header"));
    }
    if &bytes[0..4] != b"RIFF" {
        return Err(malformed(0, "missing RIFF tag"));
    }
    if &bytes[8..12] != b"WAVE" {
        return Err(malformed(8, "missing WAVE tag"));
    }

    let mut pos = 12;
    let mut format: Option<(u16, u16, u32, u16)> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let body = pos + 8;
        let end = body
            .checked_add(size)
            .filter(|&e| e <= bytes.len())
            .ok_or_else(|| malformed(pos + 4, "chunk extends past end of file"))?;

        match id {
            b"fmt " => {
                if size < 16 {
                    return Err(malformed(body, "fmt chunk shorter than 16 bytes"));
                }
                let audio_format = u16_at(bytes, body);
                let channels = u16_at(bytes, body + 2);
                let sample_rate = u32_at(bytes, body + 4);
                let bits = u16_at(bytes, body + 14);
                format = Some((audio_format, channels, sample_rate, bits));
            }
            b"data" => {
                let (audio_format, channels, sample_rate, bits) =
                    format.ok_or_else(|| malformed(pos, "data chunk before fmt chunk"))?;
                if audio_format != FORMAT_PCM {
                    return Err(unsupported(format!(
                        "audio format tag {audio_format}, only integer PCM (1) is read"
                    )));
                }
                if channels != 1 {
                    return Err(unsupported(format!(
                        "{channels} channels, only mono is read"
                    )));
                }
                if bits != 16 {
                    return Err(unsupported(format!(
                        "{bits}-bit samples, only 16-bit is read"
                    )));
                }
                if !size.is_multiple_of(2) {
                    return Err(malformed(pos + 4, "odd data size for 16-bit samples"));
                }
                let samples = bytes[body..end]
                    .chunks_exact(2)
                    .map(|c| i16::from_le_bytes([c[0], c[1]]))
                    .collect();
                return Ok(WavData {
                    sample_rate,
                    samples,
                });
            }
            _ => {}
        }
        // chunks are word aligned
        pos = end + (size & 1);
    }
    Err(malformed(bytes.len(), "no data chunk found"))
}

/// Encodes mono PCM16. Samples are scaled by 32768 and clamped to the i16 range.
pub fn encode_wav(samples: &[f64], sample_rate: u32) -> Vec<u8> {
    let data_len = (samples.len() * 2) as u32;
    let mut out = Vec::with_capacity(44 + samples.len() * 2);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for &s in samples {
        let q = (s * 32768.0)
            .round()
            .clamp(i16::MIN as f64, i16::MAX as f64) as i16;
        out.extend_from_slice(&q.to_le_bytes());
    }
    out
}
