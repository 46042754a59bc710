//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "ocea.h"

int main(void) {
    OceaConfig *config = NULL;
    if (ocea_config_new("SCH", "ocea", &config) != OCEA_STATUS_OK) return 1;
    if (ocea_config_set(config, "population", 16) != OCEA_STATUS_OK) return 2;
    if (ocea_config_set(config, "generations", 10) != OCEA_STATUS_OK) return 3;
    if (ocea_config_set(config, "k_max", 3) != OCEA_STATUS_OK) return 4;
    if (ocea_config_set(config, "beta", 7) != OCEA_STATUS_INVALID_ARGUMENT) return 5;
    if (strlen(ocea_last_error_message()) == 0) return 6;
    ocea_config_set_seed(config, 42);

    OceaResult *result = NULL;
    if (ocea_run(config, &result) != OCEA_STATUS_OK) return 7;
    size_t len = ocea_result_len(result), m = ocea_result_objectives(result);
    double front[64];
    if (len * m > 64 || ocea_result_front(result, front, 64) != OCEA_STATUS_OK) return 8;

    double points[4] = {1, 2, 2, 1}, r[2] = {3, 3}, hv = 0;
    if (ocea_hypervolume(points, 2, 2, r, &hv) != OCEA_STATUS_OK || hv != 3.0) return 9;
    printf("ok %zu %zu %s\n", len, m, ocea_version());
    ocea_result_free(result);
    ocea_config_free(config);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

fn compiler() -> Option<&'static str> {
    ["cc", "gcc", "clang"].into_iter().find(|c| {
        Command::new(c)
            .arg("--version")
            .output()
            .is_ok_and(|o| o.status.success())
    })
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let lib = target_dir().join("libocea_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("main.c");
    let binary = dir.path().join("main");
    std::fs::write(&source, PROGRAM).unwrap();
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&source)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&binary)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&binary).output().unwrap();
    assert!(
        out.status.success(),
        "C program exited with {:?}",
        out.status.code()
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("ok 16 2 "), "{stdout}");
}
