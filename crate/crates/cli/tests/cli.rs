use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use rp2_core::{apply_move, crossings, from_json, random_move, to_json};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn rp2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rp2")).args(args).output().expect("run rp2")
}

fn rp2_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_rp2"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("run rp2");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_reports_violations_and_exit_codes() {
    let ok = rp2(&["validate", path(&data("circle.json"))]);
    assert_eq!(code(&ok), 0);
    assert_eq!(stdout(&ok), "");

    let bad = rp2(&["validate", path(&data("off_circle.json"))]);
    assert_eq!(code(&bad), 1);
    let lines: Vec<String> = stdout(&bad).lines().map(String::from).collect();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with("VIOLATION: SeamPointOffCircle"), "{lines:?}");

    assert_eq!(code(&rp2(&["validate", path(&data("malformed.json"))])), 2);
    assert_eq!(code(&rp2(&["validate", "/nonexistent/diagram.json"])), 2);
}

#[test]
fn invariants_of_the_fixtures() {
    for (file, want) in [
        ("circle.json", "order=e1,e1^-1; h=0; w=0\n"),
        ("seam_chord.json", "order=e1,e1^-1; h=1; w=0\n"),
        ("chord_kink.json", "order=e1,e1^-1; h=1; w=1\n"),
        ("figure_eight.json", "order=e1,e1^-1; h=0; w=1\n"),
        ("two_loops.json", "order=e1,e1^-1,e2,e2^-1; h=00; w=00\n"),
    ] {
        let o = rp2(&["invariants", path(&data(file))]);
        assert_eq!(code(&o), 0, "{file}");
        assert_eq!(stdout(&o), want, "{file}");
    }
    assert_eq!(code(&rp2(&["invariants", path(&data("off_circle.json"))])), 1);
}

#[test]
fn equiv_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let mut d = from_json(std::fs::read_to_string(data("circle.json")).unwrap().trim()).unwrap();
    for seed in 0..6 {
        d = apply_move(&d, &random_move(&d, seed).unwrap()).unwrap();
    }
    let moved = dir.path().join("moved.json");
    std::fs::write(&moved, to_json(&d)).unwrap();

    let o = rp2(&["equiv", path(&data("circle.json")), path(&moved)]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "EQUIVALENT\n"));

    let o = rp2(&["equiv", path(&data("circle.json")), path(&data("figure_eight.json"))]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "DISTINCT (w)\n"));

    let o = rp2(&["equiv", path(&data("figure_eight.json")), path(&data("seam_chord.json"))]);
    assert_eq!(stdout(&o), "DISTINCT (h, w)\n");

    let o = rp2(&["equiv", path(&data("circle.json")), path(&data("two_loops.json"))]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("loop"));
}

#[test]
fn enumerate_counts_and_golden() {
    let o = rp2(&["enumerate", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 4);

    let o = rp2(&["enumerate", "2"]);
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/enumerate_2.txt");
    assert_eq!(stdout(&o), std::fs::read_to_string(golden).unwrap());

    assert_eq!(code(&rp2(&["enumerate", "7"])), 1);
    assert_eq!(code(&rp2(&["enumerate", "two"])), 2);
}

#[test]
fn realize_round_trips_every_two_loop_class() {
    let tuples = stdout(&rp2(&["enumerate", "2"]));
    let mut ok = 0;
    for line in tuples.lines() {
        let json = rp2(&["realize", line]);
        assert_eq!(code(&json), 0, "{line}");
        let back = rp2_stdin(&["invariants", "-"], &stdout(&json));
        assert_eq!(stdout(&back).trim_end(), line);
        ok += 1;
    }
    assert_eq!(ok, 48);
    assert_eq!(code(&rp2(&["realize", "order=e1,e1; h=0; w=0"])), 2);
}

#[test]
fn realize_writes_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let o = rp2(&["realize", "order=e1,e2,e1^-1,e2^-1; h=10; w=01", "--out", path(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "");
    let inv = rp2(&["invariants", path(&out)]);
    assert_eq!(stdout(&inv), "order=e1,e2,e1^-1,e2^-1; h=10; w=01\n");
}

#[test]
fn fuzz_campaign_passes_and_is_deterministic() {
    let args = ["fuzz", "--seed", "42", "--steps", "20", "--trials", "100"];
    let a = rp2(&args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(stdout(&a), "fuzz seed=42 steps=20 trials=100\ntrials=100 moves=2000 failures=0\nPASS\n");
    let b = rp2(&["fuzz", "--seed", "42", "--steps", "20", "--trials", "100", "--threads", "3"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn replay_scripts() {
    let dir = tempfile::tempdir().unwrap();
    let outcome = rp2_core::fuzz::run_trial(42, 3, 6, 3);
    let script = dir.path().join("trial.txt");
    std::fs::write(&script, rp2_core::format_script(&outcome.script)).unwrap();
    let o = rp2(&["fuzz", "--replay", path(&script)]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "replayed 6 steps; invariants preserved\n");

    let broken = dir.path().join("broken.txt");
    std::fs::write(&broken, "KinkPair 0 0 0 1/4\n").unwrap();
    assert_eq!(code(&rp2(&["fuzz", "--replay", path(&broken)])), 2);
}

#[test]
fn render_svg_marks_everything() {
    let fig = data("figure_eight.json");
    let o = rp2(&["render-svg", path(&fig)]);
    assert_eq!(code(&o), 0);
    let svg = stdout(&o);
    assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert!(svg.contains("<g id=\"loop-0\""));
    assert!(svg.contains("0.250000000,-0.125000000") || svg.contains("cx=\"0.250000000\" cy=\"-0.125000000\""));
    let d = from_json(std::fs::read_to_string(&fig).unwrap().trim()).unwrap();
    let marks = svg.split("<g id=\"crossings\"").nth(1).unwrap().split("</g>").next().unwrap();
    assert_eq!(marks.matches("<circle").count(), crossings(&d).unwrap().len());
    assert_eq!(svg, stdout(&rp2(&["render-svg", path(&fig)])));

    let chord = stdout(&rp2(&["render-svg", path(&data("seam_chord.json"))]));
    let seam = chord.split("<g id=\"seam-points\"").nth(1).unwrap().split("</g>").next().unwrap();
    assert_eq!(seam.matches("<circle").count(), 2);
    assert!(chord.contains("cx=\"0.000000000\" cy=\"-1.000000000\""));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.svg");
    assert_eq!(code(&rp2(&["render-svg", path(&fig), "--out", path(&out)])), 0);
    assert_eq!(std::fs::read_to_string(out).unwrap(), svg);
    assert_eq!(code(&rp2(&["render-svg", path(&data("off_circle.json"))])), 1);
}
