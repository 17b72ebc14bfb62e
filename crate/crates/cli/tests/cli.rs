//! End-to-end tests of the `kummer` binary: exit codes, JSON schema,
//! determinism and the golden-file fixtures.

use std::path::Path;
use std::process::{Command, Output};

fn kummer(args: &[&str]) -> Output {
    kummer_with_env(args, &[])
}

fn kummer_with_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kummer"));
    cmd.args(args);
    // keep tests hermetic: no shared cache unless a test opts in
    cmd.env_remove("KUMMER_CACHE_DIR");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 output")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn mask_volatile(json: &str) -> String {
    json.lines()
        .map(|l| {
            if l.trim_start().starts_with("\"wall_time_ms\"") {
                "  \"wall_time_ms\": X,".to_string()
            } else if l.trim_start().starts_with("\"cache_hits\"") {
                "  \"cache_hits\": X".to_string()
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn embdim_prints_the_dimension() {
    for (g, expect) in [("2", "3"), ("3", "7"), ("4", "15"), ("5", "31")] {
        let out = kummer(&["embdim", "--g", g]);
        assert_eq!(exit_code(&out), 0);
        assert_eq!(stdout(&out).lines().next(), Some(expect), "g={g}");
    }
}

#[test]
fn formal_groups_dim_four_lists_eight() {
    let out = kummer(&["formal-groups", "--dim", "4", "--format", "json"]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["payload"]["count"], 8);
    assert_eq!(v["payload"]["decompositions"].as_array().unwrap().len(), 8);
}

#[test]
fn verify_kernel_surface_passes() {
    for extra in [
        &["--supersingular", "0", "--j", "1,1"][..],
        &["--supersingular", "1", "--j", "1"][..],
        &["--supersingular", "2"][..],
    ] {
        let mut args = vec!["verify-kernel", "--g", "2", "--no-cache"];
        args.extend_from_slice(extra);
        let out = kummer(&args);
        assert_eq!(exit_code(&out), 0, "{extra:?}: {}", stdout(&out));
        assert!(stdout(&out).contains("equals the relation ideal: true"));
    }
}

#[test]
fn verify_kernel_g3_is_guarded() {
    let out = kummer(&["verify-kernel", "--g", "3"]);
    assert_eq!(exit_code(&out), 3);
}

#[test]
fn resource_limits_exit_two() {
    let out = kummer(&[
        "verify-kernel",
        "--g",
        "2",
        "--degree-cap",
        "1",
        "--no-cache",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn counterexample_fails_with_witness() {
    let out = kummer(&["check-surjectivity", "--counterexample", "--degree", "1"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).contains("witness classes"));
}

#[test]
fn shift_model_is_surjective() {
    let out = kummer(&["check-surjectivity", "--e", "1,1", "--degree", "6"]);
    assert_eq!(exit_code(&out), 0, "{}", stdout(&out));
    let out = kummer(&["check-surjectivity", "--char", "3", "--e", "1", "--degree", "6"]);
    assert_eq!(exit_code(&out), 0, "{}", stdout(&out));
}

#[test]
fn usage_errors_exit_three() {
    for args in [
        &["embdim", "--g", "3", "--badflag"][..],
        &["embdim"][..],
        &["singularity", "--r", "5"][..],
        &["verify-kernel", "--g", "2", "--supersingular", "3"][..],
        &["check-surjectivity"][..],
        &["nonsense"][..],
    ] {
        let out = kummer(args);
        assert_eq!(exit_code(&out), 3, "{args:?}");
    }
}

#[test]
fn verification_suite_passes() {
    for args in [
        &["verify-lemma-phi"][..],
        &["verify-threefold"][..],
        &["verify-shioda"][..],
        &["singularity", "--r", "2"][..],
        &["singularity", "--r", "1", "--truncation", "16"][..],
        &["singularity", "--r", "0"][..],
        &["verify-containment", "--g", "3", "--supersingular", "1"][..],
    ] {
        let out = kummer(args);
        assert_eq!(exit_code(&out), 0, "{args:?}: {}", stdout(&out));
    }
}

#[test]
fn json_is_byte_identical_across_runs() {
    let args = &[
        "verify-containment",
        "--g",
        "2",
        "--supersingular",
        "1",
        "--format",
        "json",
    ];
    let a = mask_volatile(&stdout(&kummer(args)));
    let b = mask_volatile(&stdout(&kummer(args)));
    assert_eq!(a, b);
}

#[test]
fn cached_and_uncached_payloads_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let cached_args = &["verify-kernel", "--g", "2", "--format", "json", "--cache-dir", cache];
    let cold: serde_json::Value = serde_json::from_str(&stdout(&kummer(cached_args))).unwrap();
    let warm: serde_json::Value = serde_json::from_str(&stdout(&kummer(cached_args))).unwrap();
    let nocache_args = &["verify-kernel", "--g", "2", "--format", "json", "--no-cache"];
    let fresh: serde_json::Value = serde_json::from_str(&stdout(&kummer(nocache_args))).unwrap();
    assert_eq!(cold["payload"], warm["payload"]);
    assert_eq!(cold["payload"], fresh["payload"]);
    assert_eq!(cold["certificates"], fresh["certificates"]);
    assert_eq!(warm["cache_hits"], 1);
    // the cache entry is plain text
    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap();
    let body = std::fs::read_to_string(entry.path()).unwrap();
    assert!(body.lines().any(|l| l.starts_with("gen ")));
}

#[test]
fn relations_match_golden_files() {
    for (args, fixture) in [
        (
            &["relations", "--g", "2", "--supersingular", "2"][..],
            "relations_g2_ss2.txt",
        ),
        (
            &["relations", "--g", "2", "--supersingular", "1"][..],
            "relations_g2_ss1.txt",
        ),
        (&["minimal-presentation", "--g", "3"][..], "minimal_g3.txt"),
    ] {
        let out = kummer(args);
        assert_eq!(exit_code(&out), 0);
        let fixture_path = Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/fixtures")
            .join(fixture);
        let expected = std::fs::read_to_string(fixture_path).unwrap();
        assert_eq!(stdout(&out), expected, "{args:?}");
    }
}

#[test]
fn invariants_of_the_ordinary_curve() {
    // classes of degree <= 2 in k[x,y]/(y^2+xy+x^3+x): 1, x, x^2, xy + y^2
    let out = kummer(&[
        "invariants",
        "--g",
        "1",
        "--supersingular",
        "0",
        "--degree",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["payload"]["dimension"], 4);
    let basis: Vec<String> = v["payload"]["basis"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect();
    assert!(basis.contains(&"x1*y1 + y1^2".to_string()), "{basis:?}");
}

#[test]
fn generators_command_lists_traces() {
    let out = kummer(&["generators", "--g", "2", "--supersingular", "0"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("f_12 = x1*x2 + y1*x2 + x1*y2"));
    assert!(text.contains("f_1 = x1"));
    assert!(text.contains("f_0 = 0"));
}

#[test]
fn closed_stdout_does_not_panic() {
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_kummer"))
        .args(["embdim", "--g", "5"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    // drop the read end before the child writes
    drop(child.stdout.take());
    let status = child.wait().unwrap();
    assert_eq!(status.code(), Some(0));
}

#[test]
fn gf4_field_flags_work() {
    let out = kummer(&[
        "verify-containment",
        "--g",
        "2",
        "--supersingular",
        "0",
        "--ext",
        "2",
        "--j",
        "g,1 + g",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stdout(&out));
}

#[test]
fn explicit_modulus_flag() {
    // GF(8) via the alternative irreducible x^3 + x^2 + 1
    let out = kummer(&[
        "verify-containment",
        "--g",
        "1",
        "--ext",
        "3",
        "--modulus",
        "1,0,1,1",
        "--j",
        "g^2",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stdout(&out));
    // a reducible modulus is a usage error
    let out = kummer(&[
        "verify-containment",
        "--g",
        "1",
        "--ext",
        "2",
        "--modulus",
        "1,0,1",
    ]);
    assert_eq!(exit_code(&out), 3);
}
