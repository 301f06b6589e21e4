use std::path::Path;
use std::process::{Command, Output};

fn odat(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_odat"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn spectrum_writes_both_branches() {
    let dir = tempfile::tempdir().unwrap();
    let out = odat(&["spectrum"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 2);

    for name in ["spectrum_dft.csv", "spectrum_odat.csv"] {
        let rows = csv_rows(&dir.path().join(name));
        assert_eq!(rows.len(), 257);
        assert_eq!(
            rows[0],
            [
                "bin_index",
                "freq_hz",
                "re",
                "im",
                "magnitude",
                "log10_magnitude"
            ]
        );
        assert_eq!(rows[49][1].parse::<f64>().unwrap(), 3000.0);
        assert!(dir.path().join(format!("{name}.meta.json")).exists());
    }
}

#[test]
fn branch_flag_limits_output() {
    let dir = tempfile::tempdir().unwrap();
    assert!(odat(
        &["spectrum", "--branch", "odat", "--signal", "harmonic"],
        dir.path()
    )
    .status
    .success());
    assert!(dir.path().join("spectrum_odat.csv").exists());
    assert!(!dir.path().join("spectrum_dft.csv").exists());
}

#[test]
fn dump_matrices_at_reference_size() {
    let dir = tempfile::tempdir().unwrap();
    assert!(odat(&["dump-matrices"], dir.path()).status.success());
    for name in ["spreading_matrix.csv", "tw_real.csv", "tw_imag.csv"] {
        let rows = csv_rows(&dir.path().join(name));
        assert_eq!(rows.len(), 127, "{name}");
        assert!(rows.iter().all(|r| r.len() == 127));
    }
    let b = csv_rows(&dir.path().join("spreading_matrix.csv"));
    assert_eq!(b[5][9], b[9][5]);
}

#[test]
fn denoise_sweep_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let out = odat(&["denoise-sweep", "--seeds", "3"], dir.path());
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("denoise_sweep.json")).unwrap())
            .unwrap();
    let records = json.as_array().unwrap();
    // two surrogates x 9 levels x 3 seeds
    assert_eq!(records.len(), 54);
    assert_eq!(records[0]["signal"], "harmonic");
    assert_eq!(records[0]["target_snr_db"], -12.0);
    assert_eq!(records[0]["frames"], 2);
    assert!(records[0]["generator"]
        .as_str()
        .unwrap()
        .contains("ChaCha8Rng"));

    let rows = csv_rows(&dir.path().join("denoise_sweep.csv"));
    assert_eq!(rows.len(), 55);
    let summary = csv_rows(&dir.path().join("denoise_summary.csv"));
    assert_eq!(summary.len(), 19);

    let meta: serde_json::Value = serde_json::from_slice(
        &std::fs::read(dir.path().join("denoise_sweep.csv.meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["config"]["n"], 256);
    assert_eq!(meta["config"]["sigma1"], 0.6);
    assert_eq!(meta["exponent"], "exp(+iH)");
    assert!(meta["notes"]
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n.as_str().unwrap().contains("surrogate")));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n = 64\nsigma1 = 0.3\nsignal = \"harmonic\"\n").unwrap();
    let out = odat(
        &["spectrum", "--config", cfg.to_str().unwrap(), "--n", "32"],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(csv_rows(&dir.path().join("spectrum_odat.csv")).len(), 33);
    let meta: serde_json::Value = serde_json::from_slice(
        &std::fs::read(dir.path().join("spectrum_odat.csv.meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["config"]["sigma1"], 0.3);
    assert_eq!(meta["config"]["n"], 32);
}

#[test]
fn gen_roundtrips_through_wav_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    assert!(odat(
        &["gen", "--format", "wav", "--signal", "harmonic"],
        dir.path()
    )
    .status
    .success());
    assert!(odat(&["gen", "--signal", "noise_burst"], dir.path())
        .status
        .success());
    let wav = dir.path().join("signal_harmonic.wav");

    let again = tempfile::tempdir().unwrap();
    let out = odat(
        &[
            "spectrum",
            "--signal",
            "wav_slice",
            "--input",
            wav.to_str().unwrap(),
            "--offset",
            "0",
        ],
        again.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = dir.path().join("signal_noise_burst.csv");
    let out = odat(
        &[
            "spectrum",
            "--signal",
            "csv_slice",
            "--input",
            csv.to_str().unwrap(),
        ],
        again.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn exit_codes_and_no_partial_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = odat(&["spectrum", "--sigma1", "-1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sigma1"));

    let missing = dir.path().join("missing.wav");
    let target = dir.path().join("run");
    let out = odat(
        &[
            "spectrum",
            "--signal",
            "wav_slice",
            "--input",
            missing.to_str().unwrap(),
        ],
        &target,
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(!target.exists());

    let short = dir.path().join("short.csv");
    std::fs::write(&short, "0.5\n0.25\n").unwrap();
    let out = odat(
        &[
            "spectrum",
            "--signal",
            "csv_slice",
            "--input",
            short.to_str().unwrap(),
        ],
        &target,
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("only 2 are available"));
    assert!(!target.exists());

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "bogus_key = 1\n").unwrap();
    let out = odat(&["spectrum", "--config", bad.to_str().unwrap()], &target);
    assert_eq!(out.status.code(), Some(2));
}
