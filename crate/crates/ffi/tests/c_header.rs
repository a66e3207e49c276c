//! Compiles and runs a small C program against the generated header and the
//! static library, proving the header matches the ABI.

use std::path::PathBuf;
use std::process::Command;

const C_SOURCE: &str = r#"
#include <stdio.h>
#include <string.h>
#include "homfin.h"

int main(void) {
    HfAlgebra *a = NULL;
    if (hf_algebra_new("C", 2, &a) != HF_STATUS_OK) return 1;
    size_t dim = 0;
    if (hf_algebra_dim(a, &dim) != HF_STATUS_OK || dim != 10) return 2;
    hf_algebra_free(a);

    HfSplit *s = NULL;
    if (hf_split_case("C1", &s) != HF_STATUS_OK) return 3;
    double coeffs[4] = {1.0, 1.0, 1.0, 1.0};
    HfNorm *n = NULL;
    if (hf_norm_diagonal(s, coeffs, 4, &n) != HF_STATUS_OK) return 4;
    double k = 1.0;
    if (hf_flag_curvature(s, n, "u[2e1]", "u[2e2]", 1e-9, &k) != HF_STATUS_OK) return 5;
    if (k > 1e-12 || k < -1e-12) return 6;

    char msg[128];
    if (hf_flag_curvature(s, n, "u[2e1]", "u[e1+e2]", 1e-9, &k)
            != HF_STATUS_PRECONDITION_VIOLATED) return 7;
    hf_last_error(msg, sizeof msg);
    if (strlen(msg) == 0) return 8;

    hf_norm_free(n);
    hf_split_free(s);
    printf("ok\n");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = manifest.join("include");
    // static library built for this test profile
    let lib_dir = {
        let exe = std::env::current_exe().unwrap();
        // target/<profile>/deps/<test> -> target/<profile>
        exe.parent().unwrap().parent().unwrap().to_path_buf()
    };
    let lib = lib_dir.join("libhomfin_ffi.a");
    if !lib.exists() {
        // The staticlib artifact is produced by `cargo build`; running only
        // `cargo test` on a clean tree may skip it.
        let st = Command::new(env!("CARGO"))
            .args(["build", "-p", "homfin-ffi"])
            .status()
            .unwrap();
        assert!(st.success());
    }
    assert!(lib.exists(), "missing {}", lib.display());

    let dir = std::env::temp_dir().join(format!("homfin-cabi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("smoke.c");
    let bin = dir.join("smoke");
    std::fs::write(&src, C_SOURCE).unwrap();

    let st = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&bin)
        .status()
        .unwrap();
    assert!(st.success(), "compilation failed");

    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "C smoke test exited with {:?}",
        out.status.code()
    );
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
    std::fs::remove_dir_all(&dir).ok();
}
