//! Command orchestration: builds one transform plan, computes every
//! artifact in memory, then writes them atomically with a metadata sidecar.

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::RunConfig;
use super::export::{
    fmt_f64, matrix_csv, spectrum_csv, sweep_csv, sweep_json, write_atomic, SweepRecord,
};
use super::recipe::{load_signal, SignalKind};
use super::wav::encode_wav;
use crate::denoise::{spectrum_of, sweep, SweepOptions, GENERATOR_ID};
use crate::error::{Error, Result};
use crate::transform::{Domain, TransformPlan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum GenFormat {
    Csv,
    Wav,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Spectrum,
    DenoiseSweep,
    DumpMatrices,
    Gen(GenFormat),
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::DenoiseSweep => "denoise-sweep",
            Command::DumpMatrices => "dump-matrices",
            Command::Gen(_) => "gen",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Artifact {
    pub path: PathBuf,
    pub summary: String,
}

struct Pending {
    name: String,
    bytes: Vec<u8>,
    summary: String,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct ArtifactMeta<'a> {
    tool: String,
    command: &'a str,
    artifact: &'a str,
    exponent: &'a str,
    noise_generator: &'a str,
    notes: &'a [String],
    config: &'a RunConfig,
}

fn signal_notes(kinds: &[SignalKind]) -> Vec<String> {
    let mut notes = vec!["fs is a configured value (default 16000 Hz)".to_string()];
    for kind in kinds {
        match kind {
            SignalKind::Harmonic => notes.push(
                "harmonic: synthetic vowel surrogate (sum of partials k*f0, amplitude decay^(k-1))".into(),
            ),
            SignalKind::NoiseBurst => notes.push(
                "noise_burst: synthetic consonant surrogate (seeded white Gaussian noise, single-pole high-pass y[n] = p*(y[n-1] + x[n] - x[n-1]))".into(),
            ),
            _ => {}
        }
    }
    notes
}

fn build_plan(cfg: &RunConfig) -> Result<TransformPlan> {
    TransformPlan::with_sign(cfg.n, cfg.fs, cfg.propagator()?, cfg.sign)
}

fn spectrum_artifacts(cfg: &RunConfig) -> Result<Vec<Pending>> {
    let plan = build_plan(cfg)?;
    let frame = load_signal(&cfg.recipe(cfg.signal, cfg.n)?)?;
    let mut branches = Vec::new();
    if cfg.branch.includes_dft() {
        branches.push(Domain::Dft);
    }
    if cfg.branch.includes_odat() {
        branches.push(Domain::Odat);
    }
    branches
        .into_iter()
        .map(|domain| {
            let spec = spectrum_of(&frame, &plan, domain)?;
            let peak = spec.magnitudes().into_iter().fold(0.0, f64::max);
            Ok(Pending {
                name: format!("spectrum_{}.csv", domain.label()),
                bytes: spectrum_csv(&spec, cfg.fs),
                summary: format!(
                    "{} spectrum of {}, {} bins, peak magnitude {:.6e}",
                    domain.label(),
                    cfg.signal.label(),
                    spec.len(),
                    peak
                ),
                notes: signal_notes(&[cfg.signal]),
            })
        })
        .collect()
}

#[derive(Serialize)]
struct LevelSummary<'a> {
    signal: &'a str,
    target_snr_db: f64,
    mean_odat: Option<f64>,
    mean_dft: Option<f64>,
}

fn sweep_artifacts(cfg: &RunConfig) -> Result<Vec<Pending>> {
    let plan = build_plan(cfg)?;
    let snrs = cfg.snr_grid();
    let seeds = cfg.seed_list();
    let opts = SweepOptions {
        rule: cfg.threshold_rule,
        run_dft: cfg.branch.includes_dft(),
        run_odat: cfg.branch.includes_odat(),
    };
    let mut records = Vec::new();
    for &kind in &cfg.sweep_signals {
        let clean = load_signal(&cfg.recipe(kind, cfg.segment_len)?)?;
        let reports = sweep(&clean, &plan, &snrs, &seeds, &opts)?;
        for (i, report) in reports.into_iter().enumerate() {
            records.push(SweepRecord {
                signal: kind.label().to_string(),
                target_snr_db: snrs[i / seeds.len()],
                report,
            });
        }
    }

    let mean = |vals: Vec<Option<f64>>| -> Option<f64> {
        let v: Option<Vec<f64>> = vals.into_iter().collect();
        v.map(|v| v.iter().sum::<f64>() / v.len() as f64)
    };
    let mut summary_rows = Vec::new();
    for kind in &cfg.sweep_signals {
        for &snr in &snrs {
            let cell: Vec<&SweepRecord> = records
                .iter()
                .filter(|r| r.signal == kind.label() && r.target_snr_db == snr)
                .collect();
            summary_rows.push(LevelSummary {
                signal: kind.label(),
                target_snr_db: snr,
                mean_odat: mean(cell.iter().map(|r| r.report.output_snr_db_odat).collect()),
                mean_dft: mean(cell.iter().map(|r| r.report.output_snr_db_dft).collect()),
            });
        }
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    let io = |e: csv::Error| Error::Numerical(format!("summary encoding failed: {e}"));
    w.write_record([
        "signal",
        "target_snr_db",
        "mean_output_snr_db_odat",
        "mean_output_snr_db_dft",
    ])
    .map_err(io)?;
    for row in &summary_rows {
        w.write_record([
            row.signal.to_string(),
            fmt_f64(row.target_snr_db),
            opt(row.mean_odat),
            opt(row.mean_dft),
        ])
        .map_err(io)?;
    }
    let summary_bytes = w
        .into_inner()
        .map_err(|e| Error::Numerical(e.to_string()))?;

    let notes = signal_notes(&cfg.sweep_signals);
    let count = records.len();
    let shape = format!(
        "{} signals x {} levels x {} seeds",
        cfg.sweep_signals.len(),
        snrs.len(),
        seeds.len()
    );
    Ok(vec![
        Pending {
            name: "denoise_sweep.json".into(),
            bytes: sweep_json(&records),
            summary: format!("{count} denoise reports ({shape})"),
            notes: notes.clone(),
        },
        Pending {
            name: "denoise_sweep.csv".into(),
            bytes: sweep_csv(&records),
            summary: format!("{count} rows ({shape})"),
            notes: notes.clone(),
        },
        Pending {
            name: "denoise_summary.csv".into(),
            bytes: summary_bytes,
            summary: format!("{} per-level mean output SNRs", summary_rows.len()),
            notes,
        },
    ])
}

fn matrix_artifacts(cfg: &RunConfig) -> Result<Vec<Pending>> {
    let plan = build_plan(cfg)?;
    let order = plan.time_one_map().order();
    let notes = signal_notes(&[]);
    let t = plan.time_one_map().entries();
    Ok(vec![
        Pending {
            name: "spreading_matrix.csv".into(),
            bytes: matrix_csv(plan.potential().entries()),
            summary: format!("spreading potential B, {order}x{order}"),
            notes: notes.clone(),
        },
        Pending {
            name: "tw_real.csv".into(),
            bytes: matrix_csv(&t.re()),
            summary: format!("Re T_w, {order}x{order}"),
            notes: notes.clone(),
        },
        Pending {
            name: "tw_imag.csv".into(),
            bytes: matrix_csv(&t.im()),
            summary: format!("Im T_w, {order}x{order}"),
            notes,
        },
    ])
}

fn gen_artifacts(cfg: &RunConfig, format: GenFormat) -> Result<Vec<Pending>> {
    let len = cfg.gen_len.unwrap_or(cfg.n);
    let frame = load_signal(&cfg.recipe(cfg.signal, len)?)?;
    let mut notes = signal_notes(&[cfg.signal]);
    let label = cfg.signal.label();
    Ok(vec![match format {
        GenFormat::Csv => {
            let mut text = String::with_capacity(len * 24);
            for &x in frame.samples() {
                text.push_str(&fmt_f64(x));
                text.push('\n');
            }
            Pending {
                name: format!("signal_{label}.csv"),
                bytes: text.into_bytes(),
                summary: format!("{len} samples of {label}"),
                notes,
            }
        }
        GenFormat::Wav => {
            let rate = cfg.fs.round();
            if (rate - cfg.fs).abs() > 1e-9 || rate > u32::MAX as f64 {
                return Err(Error::Config(format!(
                    "WAV output needs an integer sampling rate, got {}",
                    cfg.fs
                )));
            }
            let peak = frame.samples().iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let scale = if peak >= 1.0 { 0.99 / peak } else { 1.0 };
            if scale != 1.0 {
                notes.push(format!("samples scaled by {} to fit PCM16", fmt_f64(scale)));
            }
            let scaled: Vec<f64> = frame.samples().iter().map(|x| x * scale).collect();
            Pending {
                name: format!("signal_{label}.wav"),
                bytes: encode_wav(&scaled, rate as u32),
                summary: format!("{len} samples of {label}, PCM16 mono at {rate} Hz"),
                notes,
            }
        }
    }])
}

/// Executes `cmd`. Either every artifact is written or the error is
/// returned before any file is touched.
pub fn run(cfg: &RunConfig, cmd: Command) -> Result<Vec<Artifact>> {
    cfg.validate()?;
    let pending = match cmd {
        Command::Spectrum => spectrum_artifacts(cfg)?,
        Command::DenoiseSweep => sweep_artifacts(cfg)?,
        Command::DumpMatrices => matrix_artifacts(cfg)?,
        Command::Gen(format) => gen_artifacts(cfg, format)?,
    };
    std::fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    pending
        .into_iter()
        .map(|p| write_pending(cfg, cmd, p))
        .collect()
}

fn write_pending(cfg: &RunConfig, cmd: Command, p: Pending) -> Result<Artifact> {
    let path = cfg.out.join(&p.name);
    let meta = ArtifactMeta {
        tool: format!("odat {}", env!("CARGO_PKG_VERSION")),
        command: cmd.name(),
        artifact: &p.name,
        exponent: cfg.sign.label(),
        noise_generator: GENERATOR_ID,
        notes: &p.notes,
        config: cfg,
    };
    let mut meta_bytes = serde_json::to_vec_pretty(&meta).expect("metadata is serializable");
    meta_bytes.push(b'\n');
    write_atomic(&path, &p.bytes)?;
    write_atomic(&meta_path(&path), &meta_bytes)?;
    Ok(Artifact {
        path,
        summary: p.summary,
    })
}

/// `<artifact>.meta.json` next to the artifact.
pub fn meta_path(artifact: &Path) -> PathBuf {
    let mut name = artifact.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    artifact.with_file_name(name)
}
