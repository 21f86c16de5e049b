//! Compiles `tests/smoke.c` against the generated header and, when the
//! static library is next to the test binary, links and runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

fn cc() -> Option<&'static str> {
    ["cc", "gcc", "clang"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok())
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn static_lib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let profile_dir = exe.parent()?.parent()?;
    let lib = profile_dir.join("libisosym_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn header_is_valid_c_and_cxx() {
    let Some(cc) = cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = manifest_dir();
    let include = dir.join("include");
    let smoke = dir.join("tests/smoke.c");
    let st = Command::new(cc).args(["-std=c11", "-Wall", "-Werror", "-fsyntax-only", "-I"]).arg(&include).arg(&smoke).status().unwrap();
    assert!(st.success(), "C syntax check failed");
    let st = Command::new(cc).args(["-x", "c++", "-fsyntax-only", "-I"]).arg(&include).arg(&smoke).status().unwrap();
    assert!(st.success(), "C++ syntax check failed");
}

#[test]
fn smoke_program_runs() {
    let (Some(cc), Some(lib)) = (cc(), static_lib()) else {
        eprintln!("compiler or static library missing; skipping");
        return;
    };
    let out_dir = tempfile::tempdir().unwrap();
    let exe = out_dir.path().join("smoke");
    let dir = manifest_dir();
    let st = Command::new(cc)
        .args(["-std=c11", "-I"])
        .arg(dir.join("include"))
        .arg(dir.join("tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(st.success(), "link failed");
    let out = Command::new(Path::new(&exe)).output().unwrap();
    assert!(out.status.success(), "smoke exited with {:?}", out.status);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("3 bad-length"));
}
