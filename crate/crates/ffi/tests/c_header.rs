use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include <string.h>
#include "ikorder.h"

int main(void) {
    double v = 0.0;
    if (ik_cdf(1.0, 1.0, 1.0, &v) != IK_STATUS_OK || v != 0.5) return 1;
    if (ik_cdf(-1.0, 1.0, 1.0, &v) != IK_STATUS_INVALID_PARAMETER) return 2;
    if (strlen(ik_last_error()) == 0) return 3;

    IkMixture *m1 = NULL, *m2 = NULL;
    if (ik_mixture_from_json("{\"weights\":[0.7,0.3],\"alpha\":[1,3],\"beta\":[1,1]}", &m1) != IK_STATUS_OK) return 4;
    if (ik_mixture_from_json("{\"weights\":[0.3,0.7],\"alpha\":[1,3],\"beta\":[1,1]}", &m2) != IK_STATUS_OK) return 5;
    IkVerdict verdict;
    if (ik_check_order(IK_ORDER_KIND_ST, m2, m1, NULL, &verdict) != IK_STATUS_OK) return 6;
    if (verdict.status != IK_ORDER_STATUS_HOLDS_ON_GRID || verdict.points != 2000) return 7;
    IkGrid grid = ik_grid_default();
    if (ik_check_order(IK_ORDER_KIND_ST, m1, m2, &grid, &verdict) != IK_STATUS_OK) return 8;
    if (verdict.status != IK_ORDER_STATUS_VIOLATED || !verdict.has_witness) return 9;
    ik_mixture_free(m1);
    ik_mixture_free(m2);

    char *json = NULL;
    int all_passed = 0;
    if (ik_reproduce("ce3.4", &json, &all_passed) != IK_STATUS_OK || !all_passed) return 10;
    ik_string_free(json);
    printf("ok\n");
    return 0;
}
"#;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// `target/<profile>`, two levels above the test executable.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

fn cc() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| cc)
}

#[test]
fn header_compiles_and_links() {
    let Some(cc) = cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let lib = artifact_dir().join("libikorder_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = TempDir::new().unwrap();
    let src = dir.path().join("main.c");
    let exe = dir.path().join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
}
