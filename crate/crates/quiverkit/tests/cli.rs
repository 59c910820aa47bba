//! End-to-end tests of the command-line interface: exit codes, output
//! formats and the file-format round trip, driven through the real binary.

use std::io::Write;
use std::process::{Command, Output};

fn quiverkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quiverkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn analyze_succeeds_on_every_corpus_entry() {
    let list = quiverkit(&["corpus"]);
    assert_eq!(exit_code(&list), 0);
    for line in stdout(&list).lines() {
        let name = line.split_whitespace().next().unwrap();
        let out = quiverkit(&["analyze", "--corpus", name]);
        assert_eq!(exit_code(&out), 0, "analyze {name}");
    }
}

#[test]
fn main_theorem_passes_on_spherical_quiver() {
    let out = quiverkit(&["main-theorem", "--corpus", "spherical_quiver"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("verdict: pass"));
    assert!(text.matches("V2").count() >= 4, "{text}");
}

#[test]
fn main_theorem_flags_the_five_vertex_figure() {
    let out = quiverkit(&["main-theorem", "--corpus", "cor43_figure"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).contains("VIOLATION"));
}

#[test]
fn check_flags_the_two_triangle_figure() {
    let out = quiverkit(&["check", "--corpus", "lemma41_figure"]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).contains("forbidden_two_triangles"));
}

#[test]
fn check_passes_on_quaternion() {
    let out = quiverkit(&["check", "--corpus", "quaternion_local"]);
    assert_eq!(exit_code(&out), 0, "{}", stdout(&out));
}

#[test]
fn period_of_quaternion_prints_four() {
    let out = quiverkit(&["period", "--kmax", "6", "--corpus", "quaternion_local"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("v: 4"), "{}", stdout(&out));
}

#[test]
fn diag4_on_quaternion_reports_identities() {
    let out = quiverkit(&["diag4", "--simple", "v", "--corpus", "quaternion_local"]);
    assert_eq!(exit_code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("with arrows"));
}

#[test]
fn parse_errors_exit_2_with_location() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "quiver\nvertex v\narrow x v -> v").unwrap();
    let path = f.path().to_str().unwrap().to_string();
    let out = quiverkit(&["analyze", &path]);
    assert_eq!(exit_code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains(":3:"), "{err}");
}

#[test]
fn missing_input_exits_2() {
    let out = quiverkit(&["analyze"]);
    assert_eq!(exit_code(&out), 2);
    let out = quiverkit(&["no-such-command"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn structured_check_is_schema_stable_and_agrees_with_text() {
    let structured = quiverkit(&["check", "--corpus", "cycle2_len3", "--format", "structured"]);
    let mut counts = (0usize, 0usize, 0usize);
    let mut records = 0;
    for line in stdout(&structured).lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("JSONL record");
        for field in ["check", "verdict", "witnesses", "anchor"] {
            assert!(v.get(field).is_some(), "missing field {field}");
        }
        records += 1;
        match v["verdict"].as_str().unwrap() {
            "pass" => counts.0 += 1,
            "fail" => counts.1 += 1,
            "skipped" => counts.2 += 1,
            other => panic!("unexpected verdict {other}"),
        }
    }
    assert!(records > 5);
    let text = quiverkit(&["check", "--corpus", "cycle2_len3"]);
    let summary = stdout(&text);
    let tail = summary.lines().last().unwrap();
    assert_eq!(
        tail,
        format!("{} pass, {} fail, {} skipped", counts.0, counts.1, counts.2)
    );
    assert_eq!(exit_code(&structured), exit_code(&text));
}

#[test]
fn gen_glues_and_roundtrips_through_analyze() {
    let out = quiverkit(&["gen", "--blocks", "V2(a,b;p,q) V2(c,d;r,s) p=r q=s"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("# biregular"));
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    let path = f.path().to_str().unwrap().to_string();
    let analyzed = quiverkit(&["analyze", &path]);
    assert_eq!(exit_code(&analyzed), 0);
    assert!(stdout(&analyzed).contains("biregular: yes"));
    let theorem = quiverkit(&["main-theorem", &path]);
    assert_eq!(exit_code(&theorem), 0);
}

#[test]
fn gen_reports_glue_errors() {
    let out = quiverkit(&["gen", "--blocks", "V2(a,b;p,q) p=q p=q"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn cartan_over_prime_field() {
    let out = quiverkit(&[
        "cartan",
        "--corpus",
        "quaternion_local",
        "--field",
        "7",
        "--format",
        "structured",
    ]);
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["dimension"], 8);
    assert_eq!(v["symmetric"], true);
    let bad = quiverkit(&["cartan", "--corpus", "quaternion_local", "--field", "6"]);
    assert_eq!(exit_code(&bad), 2);
}

#[test]
fn scan_detects_a_triple_arrow_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        f,
        "quiver\nvertex 1\nvertex 2\narrow a: 1 -> 2\narrow b: 1 -> 2\narrow c: 1 -> 2"
    )
    .unwrap();
    let path = f.path().to_str().unwrap().to_string();
    let out = quiverkit(&["scan", &path]);
    assert_eq!(exit_code(&out), 1);
    assert!(stdout(&out).contains("triple_arrow"));
    let clean = quiverkit(&["scan", "--corpus", "spherical_quiver"]);
    assert_eq!(exit_code(&clean), 0);
}

#[test]
fn scan_accepts_user_pattern_files() {
    let mut pat = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        pat,
        "pattern one_reg_pair\ndescribe two 1-regular vertices joined by an arrow\nquiver\nvertex s\nvertex t\narrow f: s -> t\nconstraint s exact 1 1\nconstraint t exact 1 1"
    )
    .unwrap();
    let ppath = pat.path().to_str().unwrap().to_string();
    // the bare 4-cycle has four such pairs
    let mut q = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        q,
        "quiver\nvertex 1\nvertex 2\nvertex 3\nvertex 4\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 3 -> 4\narrow d: 4 -> 1"
    )
    .unwrap();
    let qpath = q.path().to_str().unwrap().to_string();
    let out = quiverkit(&["scan", &qpath, "--pattern", &ppath]);
    assert_eq!(exit_code(&out), 1);
    assert!(
        stdout(&out).contains("one_reg_pair: 4 hit(s)"),
        "{}",
        stdout(&out)
    );
    // annotated user patterns are gated on relation data
    let mut annotated = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        annotated,
        "pattern gated\nquiver\nvertex s\nvertex t\narrow f: s -> t\narrow g: t -> s\nannotate must_precede f.g"
    )
    .unwrap();
    let apath = annotated.path().to_str().unwrap().to_string();
    let out = quiverkit(&["scan", &qpath, "--pattern", &apath]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("gated: skipped"));
}

#[test]
fn dot_export_fills_one_regular_vertices() {
    let out = quiverkit(&["dot", "--corpus", "spherical_quiver"]);
    assert_eq!(exit_code(&out), 0);
    assert_eq!(stdout(&out).matches("fillcolor=black").count(), 4);
}

#[test]
fn registry_lists_shipped_patterns() {
    let out = quiverkit(&["registry"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    for name in ["K2_plus", "RiIX", "Dtt4"] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn idem_prints_the_cut() {
    let out = quiverkit(&["idem", "--vertices", "1,2", "--corpus", "cycle3_len4"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("dimension 6"));
    assert!(text.contains("1 -> 2: 1"));
}

#[test]
fn syzygy_chain_prints_dimensions() {
    let out = quiverkit(&[
        "syzygy",
        "--simple",
        "1",
        "--kmax",
        "4",
        "--corpus",
        "cycle2_len3",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("omega^0"));
    assert!(text.contains("recurrence at 4"));
}

#[test]
fn corpus_entry_roundtrips_through_a_file() {
    let out = quiverkit(&["corpus", "--name", "quaternion_local"]);
    assert_eq!(exit_code(&out), 0);
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(out.stdout.as_slice()).unwrap();
    let path = f.path().to_str().unwrap().to_string();
    let cartan = quiverkit(&["cartan", &path]);
    assert_eq!(exit_code(&cartan), 0);
    assert!(stdout(&cartan).contains("dimension 8"));
}

#[test]
fn exit_codes_honor_the_contract_on_the_full_corpus() {
    // exit 0: no failing check on the entry; exit 1: some check fails;
    // exit 2 never occurs on shipped entries
    let expected = [
        ("loop_x2", 1),     // isolated loop arrow, margin 0: finite type
        ("cycle2_len3", 1), // margin 0: finite type
        ("cycle3_len4", 1), // margin 0: finite type
        ("quaternion_local", 0),
        ("lemma42_instance", 1), // constant Cartan block
        ("spherical_quiver", 0),
        ("lemma41_figure", 1),
        ("cor43_figure", 1),
        ("lemma44_figure", 1),
        ("prop5_figure", 0),
    ];
    for (name, code) in expected {
        let out = quiverkit(&["check", "--corpus", name]);
        assert_eq!(exit_code(&out), code, "check {name}:\n{}", stdout(&out));
    }
    // analyze always succeeds, scan never errors on corpus entries
    for (name, _) in expected {
        assert_eq!(exit_code(&quiverkit(&["analyze", "--corpus", name])), 0);
        let scan = exit_code(&quiverkit(&["scan", "--corpus", name]));
        assert!(scan == 0 || scan == 1, "scan {name} exited {scan}");
    }
}
