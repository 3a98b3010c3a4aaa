use std::path::Path;
use std::process::{Command, Output};

use framesmith::arith::rat;
use framesmith::construction::examples::example_pwl;
use framesmith::construction::{PartitionRule, SpectralSpec};
use framesmith::family_file::FamilyFile;
use framesmith::report::VerificationReport;
use framesmith::verification::{check_ntf_multiwavelet, check_sufficiency, Mode, VerifyOptions};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_framesmith"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn eta_file(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("eta.json");
    let out = run(&["construct", "--example", "pwl:a=1/2,b=1/2", "--out", p(&path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn check_output_matches_the_library_report() {
    let dir = tempfile::tempdir().unwrap();
    let fam_path = eta_file(dir.path());
    let fam = FamilyFile::load(&fam_path).unwrap();
    let spec = SpectralSpec::new(example_pwl(&rat(1, 2), &rat(1, 2)), 2).unwrap();
    assert_eq!(
        fam,
        FamilyFile::construct(&spec, PartitionRule::Layered, "pwl:a=1/2,b=1/2").unwrap()
    );

    let out = run(&["check", "--family", p(&fam_path), "--suite", "ntf,sufficiency"]);
    assert_eq!(code(&out), 0);
    let opts = VerifyOptions::default();
    let expected = VerificationReport::merge(
        "check",
        [
            check_ntf_multiwavelet(&fam.wavelets(), Mode::Exact, &opts),
            check_sufficiency(&fam.scaling(), &fam.wavelets(), &opts),
        ],
    );
    let mut text = serde_json::to_string_pretty(&expected).unwrap();
    text.push('\n');
    assert_eq!(String::from_utf8(out.stdout).unwrap(), text);
}

#[test]
fn exit_codes_follow_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let fam_path = eta_file(dir.path());

    let mut bad = FamilyFile::load(&fam_path).unwrap();
    bad.psis = bad.wavelets().scaled(&rat(101, 100)).psis;
    let bad_path = dir.path().join("bad.json");
    std::fs::write(&bad_path, bad.to_json()).unwrap();
    let out = run(&["check", "--family", p(&bad_path), "--suite", "ntf"]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "fail");

    // semi-orthogonality fails for this family
    assert_eq!(
        code(&run(&["check", "--family", p(&fam_path), "--suite", "semiorth"])),
        1
    );

    // a tiny translation budget leaves the k-sums unconverged
    let out = run(&[
        "frame-test",
        "--family",
        p(&fam_path),
        "--signal",
        "tent:[-1,1)",
        "--k-budget",
        "8",
    ]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stdout));

    assert_eq!(code(&run(&["check", "--family", "/nonexistent/family.json"])), 3);
    assert_eq!(code(&run(&["check", "--family", p(&fam_path), "--suite", "bogus"])), 3);
    assert_eq!(code(&run(&["construct"])), 3);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn inadmissible_sigma_is_refused_unless_forced() {
    let dir = tempfile::tempdir().unwrap();
    let sigma = dir.path().join("sigma.json");
    // σ = χ_[1,2) has no neighborhood of 0
    std::fs::write(&sigma, r#"[{"piece": ["1", "2"], "alpha": "0", "beta": "1"}]"#).unwrap();
    let out = run(&["construct", "--sigma", p(&sigma)]);
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());
    // forcing cannot help when σ(ξ/a) − σ(ξ) goes negative
    assert_eq!(code(&run(&["construct", "--sigma", p(&sigma), "--force"])), 3);

    // σ = ½χ_[-1/4,1/4) only misses σ(0±) = 1
    std::fs::write(&sigma, r#"[{"piece": ["-1/4", "1/4"], "alpha": "0", "beta": "1/2"}]"#).unwrap();
    assert_eq!(code(&run(&["construct", "--sigma", p(&sigma)])), 1);
    let out = run(&["construct", "--sigma", p(&sigma), "--force"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let spec = dir.path().join("spec.json");
    std::fs::write(
        &spec,
        r#"{"dilation": 3, "sigma": [{"piece": ["-1/2", "1/2"], "alpha": "0", "beta": "1"}]}"#,
    )
    .unwrap();
    let out = run(&["construct", "--sigma", p(&spec)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let fam = FamilyFile::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(fam.dilation, 3);
    assert_eq!(code(&run(&["construct", "--sigma", p(&spec), "--a", "2"])), 3);
}

#[test]
fn wavelet_set_commands() {
    let out = run(&["check-waveletset", "--E-example", "journe"]);
    assert_eq!(code(&out), 0);
    let dir = tempfile::tempdir().unwrap();
    let e = dir.path().join("e.json");
    std::fs::write(&e, r#"[["-2", "-1"], ["1", "21/10"]]"#).unwrap();
    assert_eq!(code(&run(&["check-waveletset", "--E", p(&e)])), 1);

    let out = run(&["waveletset", "--E-example", "shannon", "--classify"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["classification"]["class"], "orthonormal");
    assert_eq!(v["closure"], serde_json::json!([["-1/1", "1/1"]]));
}

#[test]
fn trace_and_sample_tables() {
    let dir = tempfile::tempdir().unwrap();
    let fam = eta_file(dir.path());
    let out = run(&["trace", "--family", p(&fam), "--f", "1@0,1/2@1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("xi,xi_float,spectral,dim,tau_f,tau_f_exact"));
    assert!(lines.all(|l| l.split(',').count() == 6));

    let out = run(&["sample", "--family", p(&fam), "--grid", "16"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 17);
    assert!(text.starts_with("xi,psi_hat_1,sigma\n"));
}
