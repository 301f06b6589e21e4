//! CSV/JSON artifact encoders and atomic file output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::denoise::DenoiseReport;
use crate::error::{Error, Result};
use crate::matrix::RealMatrix;
use crate::transform::Spectrum;

/// 17 significant digits in scientific notation.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Writes to a sibling temporary file, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", file_name.to_string_lossy()));
    let write = || -> std::io::Result<()> {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

fn csv_bytes(build: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    build(&mut w).expect("writing CSV to memory cannot fail");
    w.into_inner().expect("in-memory CSV flush cannot fail")
}

/// Columns: bin_index, freq_hz, re, im, magnitude, log10_magnitude.
pub fn spectrum_csv(spec: &Spectrum, fs: f64) -> Vec<u8> {
    let n = spec.len();
    csv_bytes(|w| {
        w.write_record([
            "bin_index",
            "freq_hz",
            "re",
            "im",
            "magnitude",
            "log10_magnitude",
        ])?;
        for (k, z) in spec.bins.iter().enumerate() {
            let mag = z.norm();
            w.write_record([
                k.to_string(),
                fmt_f64(k as f64 * fs / n as f64),
                fmt_f64(z.re),
                fmt_f64(z.im),
                fmt_f64(mag),
                fmt_f64(mag.log10()),
            ])?;
        }
        Ok(())
    })
}

/// Row-major, no header.
pub fn matrix_csv(m: &RealMatrix) -> Vec<u8> {
    csv_bytes(|w| {
        for i in 0..m.rows() {
            w.write_record(m.row(i).iter().map(|&x| fmt_f64(x)))?;
        }
        Ok(())
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRecord {
    pub signal: String,
    pub target_snr_db: f64,
    #[serde(flatten)]
    pub report: DenoiseReport,
}

pub const SWEEP_COLUMNS: [&str; 12] = [
    "signal",
    "target_snr_db",
    "input_snr_db",
    "output_snr_db_odat",
    "output_snr_db_dft",
    "threshold_value",
    "bins_kept_odat",
    "bins_kept_dft",
    "seed",
    "frames",
    "generator",
    "snr_gain_odat_minus_dft",
];

pub fn sweep_csv(records: &[SweepRecord]) -> Vec<u8> {
    csv_bytes(|w| {
        w.write_record(SWEEP_COLUMNS)?;
        for r in records {
            let rep = &r.report;
            let gain = rep
                .output_snr_db_odat
                .zip(rep.output_snr_db_dft)
                .map(|(o, d)| o - d);
            w.write_record([
                r.signal.clone(),
                fmt_f64(r.target_snr_db),
                fmt_f64(rep.input_snr_db),
                fmt_opt(rep.output_snr_db_odat),
                fmt_opt(rep.output_snr_db_dft),
                fmt_f64(rep.threshold_value),
                rep.bins_kept_odat
                    .map(|k| k.to_string())
                    .unwrap_or_default(),
                rep.bins_kept_dft.map(|k| k.to_string()).unwrap_or_default(),
                rep.seed.to_string(),
                rep.frames.to_string(),
                rep.generator.clone(),
                fmt_opt(gain),
            ])?;
        }
        Ok(())
    })
}

/// JSON array of records. Floats use the shortest representation that
/// round-trips exactly; non-finite SNRs serialize as null.
pub fn sweep_json(records: &[SweepRecord]) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(records).expect("records are serializable");
    out.push(b'\n');
    out
}
