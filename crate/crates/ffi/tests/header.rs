use std::path::{Path, PathBuf};
use std::process::Command;

fn header() -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/odat.h")).unwrap()
}

#[test]
fn header_declares_the_abi() {
    let h = header();
    for decl in [
        "typedef struct OdatPlan OdatPlan;",
        "ODAT_STATUS_OK = 0",
        "ODAT_STATUS_PANIC = 7",
        "ODAT_BRANCH_ODAT = 1",
        "odat_plan_new(",
        "void odat_plan_free(struct OdatPlan *plan);",
        "size_t odat_plan_len(",
        "odat_forward(",
        "odat_inverse(",
        "odat_dft(",
        "odat_denoise(",
        "const char *odat_last_error_message(void);",
        "const char *odat_version(void);",
    ] {
        assert!(h.contains(decl), "missing {decl}");
    }
}

fn static_lib() -> PathBuf {
    // test binaries live in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent()
        .unwrap()
        .parent()
        .unwrap()
        .join("libodat_ffi.a")
}

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "odat.h"

int main(void) {
    OdatPlan *plan = NULL;
    if (odat_plan_new(64, 16000.0, 0.6, 0.04, 0, &plan) != ODAT_STATUS_OK) return 1;
    double x[64], re[64], im[64], back[64];
    for (int t = 0; t < 64; ++t) x[t] = sin(0.37 * t);
    if (odat_forward(plan, x, 64, re, im) != ODAT_STATUS_OK) return 2;
    if (odat_inverse(plan, re, im, 64, back) != ODAT_STATUS_OK) return 3;
    double err = 0.0;
    for (int t = 0; t < 64; ++t) err = fmax(err, fabs(x[t] - back[t]));
    if (err > 1e-12) return 4;
    if (odat_forward(plan, x, 63, re, im) != ODAT_STATUS_DIMENSION) return 5;
    if (odat_last_error_message()[0] == '\0') return 6;
    odat_plan_free(plan);
    printf("%s\n", odat_version());
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    let lib = static_lib();
    assert!(lib.exists(), "{} not built", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        env!("CARGO_PKG_VERSION")
    );
}
