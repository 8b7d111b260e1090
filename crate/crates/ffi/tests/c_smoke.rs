//! Compiles tests/smoke.c against the generated header and the freshly
//! built static library, then runs it. Skips with a note when no C
//! compiler is on PATH.

use std::path::PathBuf;
use std::process::Command;

fn static_lib_path() -> PathBuf {
    // The test binary lives in target/<profile>/deps; the staticlib is one
    // level up.
    let mut dir = std::env::current_exe().expect("test binary path");
    dir.pop();
    if dir.ends_with("deps") {
        dir.pop();
    }
    dir.join("liboverdet_ffi.a")
}

#[test]
fn c_program_links_and_runs() {
    let cc = ["cc", "gcc", "clang"]
        .iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
        .copied();
    let Some(cc) = cc else {
        eprintln!("no C compiler found; skipping the link test");
        return;
    };

    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = static_lib_path();
    assert!(
        lib.exists(),
        "staticlib not found at {}; build the cdylib/staticlib targets first",
        lib.display()
    );

    let out_dir = tempfile::tempdir().expect("temp dir");
    let exe = out_dir.path().join("smoke");
    let compile = Command::new(cc)
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .output()
        .expect("compiler invocation");
    assert!(
        compile.status.success(),
        "compile failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&exe).output().expect("smoke binary runs");
    assert!(
        run.status.success(),
        "smoke binary failed (status {:?}):\n{}\n{}",
        run.status.code(),
        String::from_utf8_lossy(&run.stdout),
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).contains("smoke: ok"));
}
