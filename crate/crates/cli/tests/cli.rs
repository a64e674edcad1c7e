//! Black-box tests of the `monocopy` binary: artifact shapes, exit codes,
//! pattern aliases, and byte-level determinism across reruns and thread
//! counts.

use std::path::Path;
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_monocopy"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

fn run_ok(args: &[&str]) -> String {
    let (code, stdout, stderr) = run(args);
    assert_eq!(code, 0, "command {args:?} failed: {stderr}");
    stdout
}

#[test]
fn moments_on_complete4_prints_pinned_json() {
    let stdout = run_ok(&["moments", "--gen", "complete:4", "--pattern", "triangle", "--colors", "2"]);
    assert_eq!(
        stdout,
        "{\"host\":\"complete:4\",\"pattern\":\"triangle\",\"c\":2,\"copies\":4,\
         \"pair2_tuples\":16,\"mean_T\":\"1/1\",\"variance_T\":\"3/2\",\
         \"fourth_moment_Z\":\"14/3\"}\n"
    );
}

#[test]
fn bound_on_fifty_triangles_prints_exact_ratio() {
    let stdout =
        run_ok(&["bound", "--gen", "union:complete:3x50", "--pattern", "complete:3", "--colors", "2"]);
    assert!(stdout.contains("\"clt_ratio\":2.0000000000000000e-2"), "got {stdout}");
    assert!(stdout.contains("\"fourth_moment_Z\":\"224/75\""), "got {stdout}");
    assert!(stdout.contains("\"ks_distance\":null"), "got {stdout}");
    assert!(stdout.ends_with("\"seed\":null}\n"), "got {stdout}");
}

#[test]
fn joins_reports_census_and_xi() {
    let stdout = run_ok(&["joins", "--gen", "complete:4", "--pattern", "triangle"]);
    assert_eq!(
        stdout,
        "{\"host\":\"complete:4\",\"pattern\":\"triangle\",\"ordering\":\"sorted\",\
         \"pair2_tuples\":16,\"q4_tuples\":88,\"good_tuples\":256,\"upsilon\":152,\
         \"xi\":[9,9,9,9]}\n"
    );
}

#[test]
fn pattern_aliases_change_only_the_label() {
    let a = run_ok(&["moments", "--gen", "complete:5", "--pattern", "cherry"]);
    let b = run_ok(&["moments", "--gen", "complete:5", "--pattern", "star:2"]);
    assert_eq!(
        a.replace("\"pattern\":\"cherry\"", "\"pattern\":\"star:2\""),
        b
    );
}

#[test]
fn oracle_prints_exact_distribution_csv() {
    let stdout = run_ok(&["oracle", "--gen", "complete:4", "--pattern", "triangle", "--colors", "2"]);
    assert_eq!(stdout, "t,probability\n0,3/8\n1,1/2\n4,1/8\n");
}

#[test]
fn copies_counts_cherries_in_complete5() {
    let stdout = run_ok(&["copies", "--gen", "complete:5", "--pattern", "cherry"]);
    assert_eq!(
        stdout,
        "host: complete:5: 5 vertices, 10 edges\n\
         pattern: cherry: 3 vertices, 2 automorphisms\n\
         copies: 30\n\
         embeddings: 60\n"
    );
}

#[test]
fn decompose_verify_passes_on_a_random_host() {
    let stdout = run_ok(&[
        "decompose-verify",
        "--gen",
        "er:8:0.5:3",
        "--pattern",
        "cherry",
        "--colors",
        "3",
        "--samples",
        "6",
        "--seed",
        "11",
    ]);
    assert!(stdout.contains("t identity violations: 0"), "got {stdout}");
    assert!(stdout.contains("z identity violations: 0"), "got {stdout}");
    assert!(stdout.contains("martingale violations: 0"), "got {stdout}");
    assert!(stdout.ends_with("status: ok\n"), "got {stdout}");
}

#[test]
fn classify_names_each_join_class_and_failed_condition() {
    for (lists, expect) in [
        (["1,2,3", "3,4,5", "5,6,7", "7,8,9"], "4-join-only: fails condition (good)"),
        (["1,2,3", "2,3,4", "4,5,6", "5,6,7"], "4-join-only: fails condition (vgood)"),
        (["1,2,3", "2,3,4", "3,4,5", "4,5,6"], "good-join"),
        (["1,2,5", "2,3,6", "3,4,7", "1,4,8"], "good-join"),
        (["1,2,3", "1,2,4", "1,2,5", "1,2,6"], "2-shared-4-join"),
    ] {
        let mut args = vec!["classify"];
        args.extend(lists);
        let stdout = run_ok(&args);
        assert_eq!(stdout, format!("{expect}\n"), "for {lists:?}");
    }
}

#[test]
fn classify_validates_membership_when_a_host_is_given() {
    let stdout = run_ok(&[
        "classify", "1,2,3", "2,3,4", "4,5,6", "5,6,7", "--gen", "path:7", "--pattern", "cherry",
    ]);
    assert_eq!(stdout, "4-join-only: fails condition (vgood)\n");
    let stdout = run_ok(&[
        "classify", "1,2,7", "2,3,4", "4,5,6", "5,6,7", "--gen", "path:7", "--pattern", "cherry",
    ]);
    assert_eq!(stdout, "not-a-join: 1,2,7 is not a copy of the pattern in the host\n");
}

#[test]
fn exit_codes_distinguish_error_classes() {
    let cases: [(&[&str], i32); 6] = [
        (&["moments", "--gen", "complete:4"], 2),
        (&["moments", "--gen", "nosuch:4", "--pattern", "triangle"], 3),
        (&["moments", "--gen", "complete:4", "--pattern", "triangle", "--colors", "1"], 4),
        (&["oracle", "--gen", "complete:30", "--pattern", "triangle"], 5),
        (&["bound", "--gen", "path:3", "--pattern", "triangle"], 6),
        (&["moments", "--graph", "/does/not/exist.edges", "--pattern", "triangle"], 7),
    ];
    for (args, want) in cases {
        let (code, _, stderr) = run(args);
        assert_eq!(code, want, "args {args:?}, stderr: {stderr}");
    }
}

#[test]
fn classify_rejects_malformed_lists_with_parse_and_validation_codes() {
    let (code, _, _) = run(&["classify", "1,2,x", "2,3,4", "4,5,6", "5,6,7"]);
    assert_eq!(code, 3);
    let (code, _, _) = run(&["classify", "1,2", "2,3", "3,4", "4,5"]);
    assert_eq!(code, 4);
}

#[test]
fn help_documents_the_exit_codes() {
    let (code, stdout, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for needle in ["Exit codes:", "usage error", "capacity limit", "I/O error"] {
        assert!(stdout.contains(needle), "missing {needle:?} in help");
    }
}

#[test]
fn graph_file_and_generator_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("host.edges");
    std::fs::write(&path, "n=4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n").unwrap();
    let from_file = run_ok(&[
        "moments", "--graph", path.to_str().unwrap(), "--pattern", "triangle",
    ]);
    let from_gen = run_ok(&["moments", "--gen", "complete:4", "--pattern", "triangle"]);
    let strip = |s: &str| s.split_once(",\"pattern\"").unwrap().1.to_owned();
    assert_eq!(strip(&from_file), strip(&from_gen));
}

#[test]
fn simulate_is_byte_identical_across_threads_and_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..3).map(|i| dir.path().join(format!("sim{i}.txt"))).collect();
    for (path, threads) in paths.iter().zip(["1", "5", "1"]) {
        run_ok(&[
            "simulate",
            "--gen",
            "union:complete:3x8",
            "--pattern",
            "triangle",
            "--samples",
            "12000",
            "--seed",
            "5",
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
        ]);
    }
    let bytes: Vec<_> = paths.iter().map(|p| std::fs::read(p).unwrap()).collect();
    assert_eq!(bytes[0], bytes[1], "thread count changed the artifact");
    assert_eq!(bytes[0], bytes[2], "rerun changed the artifact");
    let text = String::from_utf8(bytes[0].clone()).unwrap();
    assert!(text.contains("\"samples\":12000"), "got {text}");
    assert!(text.contains("\nt,count\n"), "missing histogram in {text}");
}

#[test]
fn out_flag_writes_exactly_what_stdout_shows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let stdout = run_ok(&["bound", "--gen", "complete:4", "--pattern", "triangle"]);
    run_ok(&[
        "bound", "--gen", "complete:4", "--pattern", "triangle", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(stdout, std::fs::read_to_string(&path).unwrap());
    assert!(!Path::new(&stdout).exists(), "stdout looks like a stray path");
}

#[test]
fn sweep_emits_one_csv_row_per_host() {
    let stdout = run_ok(&[
        "sweep",
        "--gen",
        "union:complete:3x4",
        "--gen",
        "union:complete:3x8",
        "--pattern",
        "triangle",
        "--samples",
        "2000",
        "--seed",
        "2",
    ]);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "n,copies,samples,m2,m2_se,m4,m4_se,m6,m6_se,m8,m8_se");
    assert!(lines[1].starts_with("12,4,2000,"), "got {}", lines[1]);
    assert!(lines[2].starts_with("24,8,2000,"), "got {}", lines[2]);
}
