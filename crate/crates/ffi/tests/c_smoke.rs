use std::path::PathBuf;
use std::process::Command;

const SOURCE: &str = r#"
#include <stdio.h>
#include <math.h>
#include "spheroid.h"

int main(void) {
    SqSurface *s = NULL;
    SqOscillator *o = NULL;
    SqLevelTable *t = NULL;
    double d = 0.0;
    if (sq_surface_new(1.0, 0.1, &s) != SQ_STATUS_OK) return 1;
    if (sq_free_shift1(s, 0, &d) != SQ_STATUS_OK || fabs(d - 0.025) > 1e-12) return 2;
    if (sq_oscillator_new(s, 1.0, SQ_COUPLING_SQUARED, &o) != SQ_STATUS_OK) return 3;
    if (sq_osc_level_table(o, 3, &t) != SQ_STATUS_OK) return 4;
    if (sq_level_table_len(t) != 10) return 5;
    if (sq_surface_new(0.0, 0.1, &s) != SQ_STATUS_DOMAIN) return 6;
    char msg[128];
    if (sq_last_error_message(msg, sizeof msg) == 0) return 7;
    sq_level_table_free(t);
    sq_oscillator_free(o);
    printf("ok\n");
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests/<name>-<hash> lives in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_static_library() {
    let lib = target_dir().join("libspheroid_ffi.a");
    if !cfg!(target_os = "linux") || Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no cc or {} not built", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, SOURCE).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .status()
        .unwrap();
    assert!(status.success(), "C compile/link failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
