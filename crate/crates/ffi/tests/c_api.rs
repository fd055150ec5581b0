use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use litt_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    litt_string_free(s);
    out
}

fn last_error() -> Option<String> {
    let p = litt_last_error_message();
    (!p.is_null()).then(|| unsafe { take(p) })
}

unsafe fn new_game(a: &str, b: &str) -> *mut LittGame {
    let mut g = ptr::null_mut();
    assert_eq!(litt_game_new(2, c(a).as_ptr(), c(b).as_ptr(), &mut g), LittStatus::Ok);
    g
}

#[test]
fn game_round_trip() {
    unsafe {
        let g = new_game("HH", "HT");
        let mut k = LittGameConstants::default();
        assert_eq!(litt_game_constants(g, &mut k), LittStatus::Ok);
        assert_eq!((k.theta_aa, k.theta_ab, k.sigma2, k.kappa3), (0.5, 0.5, 0.5, 0.75));

        let mut p = LittPrediction::default();
        assert_eq!(litt_game_predict(g, 100, &mut p), LittStatus::Ok);
        assert_eq!(p.effective_n, 99);
        assert!(p.p_bob > p.p_alice);
        assert!((p.p_alice + p.p_bob + p.p_tie - 1.0).abs() < 1e-12);

        let mut e = LittOutcomes::default();
        assert_eq!(litt_game_exact(g, 3, &mut e), LittStatus::Ok);
        assert_eq!((e.p_alice, e.p_bob, e.p_tie), (0.25, 0.375, 0.375));

        let mut s = LittSimulation::default();
        assert_eq!(litt_game_simulate(g, 50, 10_000, 3, &mut s), LittStatus::Ok);
        assert_eq!(s.wins + s.losses + s.ties, 10_000);

        let mut csv = ptr::null_mut();
        assert_eq!(litt_game_distribution_csv(g, 3, &mut csv), LittStatus::Ok);
        assert!(take(csv).starts_with("score,count\n"));

        let mut ex = LittException::GapDegenerate;
        assert_eq!(litt_game_exception(g, &mut ex), LittStatus::Ok);
        assert_eq!(ex, LittException::None);
        litt_game_free(g);
    }
}

#[test]
fn exceptional_pair_reports_and_flags() {
    unsafe {
        let g = new_game("HT", "TH");
        let mut ex = LittException::None;
        assert_eq!(litt_game_exception(g, &mut ex), LittStatus::Ok);
        assert_eq!(ex, LittException::GapDegenerate);

        let mut p = LittPrediction::default();
        assert_eq!(litt_game_predict(g, 10, &mut p), LittStatus::ExceptionalPair);
        assert!(last_error().unwrap().contains("exceptional"));

        let mut out = ptr::null_mut();
        assert_eq!(litt_game_analyze_json(g, 10, false, &mut out), LittStatus::ExceptionalPair);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["exact"]["tie"], "1/2");
        litt_game_free(g);
    }
}

#[test]
fn weighted_game() {
    unsafe {
        let words = [c("HH"), c("HT"), c("TH"), c("TT")];
        let ptrs: Vec<*const c_char> = words.iter().map(|w| w.as_ptr()).collect();
        let weights = [1i64, -1, -1, 1];
        let mut g = ptr::null_mut();
        assert_eq!(litt_game_new_weighted(2, ptrs.as_ptr(), weights.as_ptr(), 4, &mut g), LittStatus::Ok);
        let mut e = LittOutcomes::default();
        assert_eq!(litt_game_exact(g, 2, &mut e), LittStatus::Ok);
        assert_eq!(e.p_alice + e.p_bob, 1.0);
        let mut k = LittGameConstants::default();
        assert_eq!(litt_game_constants(g, &mut k), LittStatus::Usage);
        litt_game_free(g);
    }
}

#[test]
fn chain_round_trip() {
    let text =
        std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/e4.json")).unwrap();
    unsafe {
        let mut ch = ptr::null_mut();
        assert_eq!(litt_chain_from_json(c(&text).as_ptr(), &mut ch), LittStatus::Ok);
        let mut m = 0usize;
        assert_eq!(litt_chain_state_count(ch, &mut m), LittStatus::Ok);
        assert_eq!(m, 4);
        let mut t = LittCumulants::default();
        assert_eq!(litt_chain_cumulants(ch, &mut t), LittStatus::Ok);
        assert_eq!(t.mu, 0.0);
        assert!((t.sigma2 - 5.0 / 6.0).abs() < 1e-15);
        let mut visits = 0.0;
        assert_eq!(litt_chain_expected_visits(ch, c("a").as_ptr(), c("c").as_ptr(), &mut visits), LittStatus::Ok);
        assert!(visits >= 1.0);
        assert_eq!(litt_chain_expected_visits(ch, c("a").as_ptr(), c("zz").as_ptr(), &mut visits), LittStatus::Usage);

        let mut out = ptr::null_mut();
        assert_eq!(litt_chain_report_json(ch, LITT_REPORT_EM4, &mut out), LittStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["em4"]["certificate"]["N"], 2);
        assert!(v["cumulants"].is_null());
        litt_chain_free(ch);
    }
}

#[test]
fn errors_and_null_handling() {
    unsafe {
        let mut ch = ptr::null_mut();
        assert_eq!(litt_chain_from_json(c("{ nope").as_ptr(), &mut ch), LittStatus::Data);
        assert!(ch.is_null());
        assert!(last_error().unwrap().contains("parse error"));

        assert_eq!(litt_chain_from_json(ptr::null(), &mut ch), LittStatus::NullPointer);
        let mut t = LittCumulants::default();
        assert_eq!(litt_chain_cumulants(ptr::null(), &mut t), LittStatus::NullPointer);

        let g = new_game("HH", "HT");
        assert!(last_error().is_none());
        assert_eq!(litt_game_predict(g, 100, ptr::null_mut()), LittStatus::NullPointer);
        assert_eq!(litt_game_predict(g, 1, &mut LittPrediction::default()), LittStatus::Usage);
        litt_game_free(g);

        let bad = [0xffu8, 0];
        let mut g = ptr::null_mut();
        assert_eq!(litt_game_new(2, bad.as_ptr().cast(), c("HT").as_ptr(), &mut g), LittStatus::InvalidUtf8);
        assert_eq!(litt_game_new(2, c("HH").as_ptr(), c("HTT").as_ptr(), &mut g), LittStatus::Usage);
        assert_eq!(litt_game_new(99, c("HH").as_ptr(), c("HT").as_ptr(), &mut g), LittStatus::Usage);

        litt_chain_free(ptr::null_mut());
        litt_game_free(ptr::null_mut());
        litt_string_free(ptr::null_mut());
    }
}

#[test]
fn resource_errors_map_to_resource_status() {
    unsafe {
        let mut g = ptr::null_mut();
        let a = "H".repeat(25);
        let b = "T".repeat(25);
        assert_eq!(litt_game_new(2, c(&a).as_ptr(), c(&b).as_ptr(), &mut g), LittStatus::Ok);
        let mut k = LittGameConstants::default();
        assert_eq!(litt_game_constants(g, &mut k), LittStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(litt_game_distribution_csv(g, 200, &mut out), LittStatus::Resource);
        litt_game_free(g);
    }
}

#[test]
fn static_strings() {
    unsafe {
        assert_eq!(CStr::from_ptr(litt_version()).to_str().unwrap(), env!("CARGO_PKG_VERSION"));
        assert_eq!(
            CStr::from_ptr(litt_status_message(LittStatus::Resource)).to_str().unwrap(),
            "resource limit exceeded"
        );
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/litt.h")
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(header()).unwrap();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> =
        src.split("extern \"C\" fn ").skip(1).map(|rest| rest.split('(').next().unwrap()).collect();
    assert!(exports.len() >= 18);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from litt.h");
    }
    for ty in ["typedef struct LittChain LittChain;", "typedef struct LittGame LittGame;", "LITT_STATUS_RESOURCE = 69"]
    {
        assert!(header.contains(ty), "{ty}");
    }
}

fn cc() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| cc)
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let Some(cc) = cc() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    for lang in ["c", "c++"] {
        let out =
            Command::new(&cc).args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang]).arg(header()).output().unwrap();
        assert!(out.status.success(), "{lang}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn c_program_links_against_static_library() {
    let Some(cc) = cc() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    let exe = std::env::current_exe().unwrap();
    let target_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = target_dir.join("liblitt_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("c-smoke");
    std::fs::create_dir_all(&dir).unwrap();
    let bin = dir.join("smoke");
    let out = Command::new(&cc)
        .arg(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/smoke.c"))
        .arg("-I")
        .arg(Path::new(env!("CARGO_MANIFEST_DIR")).join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .unwrap();
    assert!(out.status.success(), "link: {}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "smoke: {}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "sigma2=0.5 kappa3=0.75 tie=0.375 status=65");
}
