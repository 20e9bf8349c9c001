//! End-to-end tests of the command-line interface: exit codes, pipeline
//! examples, every validator's failure path, determinism of emitted
//! files, and structural checks of the renderers.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gbs_core::flow::{flow_patch_from_word, FlowWord};
use gbs_core::fold::parse_z2_patch;
use gbs_core::group::{Group, Letter};
use gbs_core::wang::parse_bs_patch;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gbs-tiler"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn gbs-tiler")
}

fn stdout_of(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

fn stderr_of(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf8 stderr")
}

fn code_of(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_str()
        .expect("fixture path")
        .to_string()
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn build_bs_then_validate_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let patch = tmp(&dir, "p.patch");
    let patch_s = patch.to_str().unwrap();
    let o = run(&[
        "build-bs", "--word", "tat", "--x", "1/2", "--radius", "3", "--out", patch_s,
    ]);
    assert_eq!(code_of(&o), 0, "{}", stderr_of(&o));
    let text = fs::read_to_string(&patch).unwrap();
    assert!(text.starts_with("bspatch BS(2,3) radius 3\n"));

    let o = run(&["validate", patch_s]);
    assert_eq!(code_of(&o), 0, "{}", stdout_of(&o));
    let out = stdout_of(&o);
    assert!(out.contains("bspatch valid"), "{out}");
    assert!(out.contains("match-a2="), "{out}");

    // Identical invocations write byte-identical files.
    let again = tmp(&dir, "q.patch");
    let o = run(&[
        "build-bs",
        "--word",
        "tat",
        "--x",
        "1/2",
        "--radius",
        "3",
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&o), 0);
    assert_eq!(text, fs::read_to_string(&again).unwrap());
}

#[test]
fn fold_defaults_to_the_zero_window() {
    let o = run(&[
        "fold",
        "--tileset",
        &fixture("trivial.tiles"),
        "--word",
        "ab",
        "--radius",
        "4",
    ]);
    assert_eq!(code_of(&o), 0, "{}", stderr_of(&o));
    let out = stdout_of(&o);
    assert!(out.starts_with("foldedpatch F2xZ radius 4\n"), "{out}");
    assert!(out.lines().count() > 1);
}

#[test]
fn scan_periods_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let patch = tmp(&dir, "p.patch");
    let patch_s = patch.to_str().unwrap();
    let o = run(&[
        "build-bs", "--word", "tat", "--x", "1/2", "--radius", "3", "--out", patch_s,
    ]);
    assert_eq!(code_of(&o), 0);
    let o = run(&["scan-periods", patch_s, "--max-len", "2"]);
    assert_eq!(code_of(&o), 0);
    let out = stdout_of(&o);
    let summary = out.lines().last().unwrap();
    assert!(summary.contains("conclusive="), "{summary}");
    assert!(summary.contains("inconclusive="), "{summary}");
    assert!(summary.contains("survivors=0"), "{summary}");
}

#[test]
fn usage_errors_exit_2() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["normalize", "--group", "XYZ", "--word", "a"],
        vec!["normalize", "--group", "F2", "--word", "t"],
        vec!["tile", "--tag", "nope", "--x", "1/2", "--lambda", "0"],
        vec!["verify-paper", "--only", "99"],
        vec!["ball", "--group", "F2"],
        vec!["no-such-command"],
    ];
    for args in &cases {
        let o = run(args);
        assert_eq!(code_of(&o), 2, "{args:?}: {}", stderr_of(&o));
        assert!(!stderr_of(&o).is_empty(), "{args:?}");
    }
}

#[test]
fn validate_requires_context_flags() {
    let dir = tempfile::tempdir().unwrap();
    let folded = tmp(&dir, "f.patch");
    let o = run(&[
        "fold",
        "--tileset",
        &fixture("trivial.tiles"),
        "--word",
        "ab",
        "--radius",
        "2",
        "--out",
        folded.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&o), 0);
    let o = run(&["validate", folded.to_str().unwrap()]);
    assert_eq!(code_of(&o), 2);
    assert!(stderr_of(&o).contains("--tileset"), "{}", stderr_of(&o));

    let locked = tmp(&dir, "l.patch");
    let o = run(&[
        "locked-build",
        "--quotient",
        &fixture("f2z_mod2.quotient"),
        "--radius",
        "2",
        "--out",
        locked.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&o), 0);
    let o = run(&["validate", locked.to_str().unwrap()]);
    assert_eq!(code_of(&o), 2);
    assert!(stderr_of(&o).contains("--quotient"), "{}", stderr_of(&o));
}

#[test]
fn unreadable_and_garbled_files_exit_1() {
    let o = run(&["validate", "/nonexistent.patch"]);
    assert_eq!(code_of(&o), 1);
    let dir = tempfile::tempdir().unwrap();
    let bad = tmp(&dir, "bad.patch");
    fs::write(&bad, "gibberish header\n").unwrap();
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code_of(&o), 1);
    assert!(
        stderr_of(&o).contains("unrecognized patch header"),
        "{}",
        stderr_of(&o)
    );
}

#[test]
fn flow_validator_failure_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = tmp(&dir, "backflow.flow");
    fs::write(&bad, "flowpatch F2 radius 1\n1 a\na A\n").unwrap();
    let o = run(&["flow-validate", bad.to_str().unwrap()]);
    assert_eq!(code_of(&o), 1);
    let out = stdout_of(&o);
    assert!(out.contains("violation"), "{out}");
    assert!(out.contains("flowpatch invalid"), "{out}");

    // flow-validate refuses files of another kind outright.
    let z2 = tmp(&dir, "w.z2");
    fs::write(&z2, "window 0 0 0 0\n0\n").unwrap();
    let o = run(&["flow-validate", z2.to_str().unwrap()]);
    assert_eq!(code_of(&o), 1);
    assert!(
        stderr_of(&o).contains("expected a flowpatch"),
        "{}",
        stderr_of(&o)
    );
}

#[test]
fn bs_validator_failure_path() {
    let dir = tempfile::tempdir().unwrap();
    let patch = tmp(&dir, "p.patch");
    let o = run(&[
        "build-bs",
        "--word",
        "tat",
        "--x",
        "1/2",
        "--radius",
        "2",
        "--out",
        patch.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&o), 0);
    let text = fs::read_to_string(&patch).unwrap();
    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    // Shift the first bottom color of the first cell's tile; the tile no
    // longer computes its branch, so validation must flag it.
    let parts: Vec<&str> = lines[1].split(" | ").collect();
    let mut bottom: Vec<String> = parts[2].split_whitespace().map(str::to_string).collect();
    bottom[0] = (bottom[0].parse::<i64>().unwrap() + 7).to_string();
    lines[1] = [parts[0], parts[1], &bottom.join(" "), parts[3], parts[4]].join(" | ");
    let bad = tmp(&dir, "bad.patch");
    fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code_of(&o), 1, "{}", stdout_of(&o));
    let out = stdout_of(&o);
    assert!(out.contains("violation"), "{out}");
    assert!(out.contains("bspatch invalid"), "{out}");
}

#[test]
fn folded_validator_failure_path() {
    let dir = tempfile::tempdir().unwrap();
    let folded = tmp(&dir, "f.patch");
    let o = run(&[
        "fold",
        "--tileset",
        &fixture("trivial.tiles"),
        "--word",
        "ab",
        "--radius",
        "2",
        "--out",
        folded.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&o), 0);
    let text = fs::read_to_string(&folded).unwrap();
    // The trivial tileset has a single tile, so id 1 is out of range.
    let bad_text = text.replacen(" 0 ", " 1 ", 1);
    assert_ne!(text, bad_text);
    let bad = tmp(&dir, "bad.patch");
    fs::write(&bad, bad_text).unwrap();
    let o = run(&[
        "validate",
        bad.to_str().unwrap(),
        "--tileset",
        &fixture("trivial.tiles"),
    ]);
    assert_eq!(code_of(&o), 1, "{}", stdout_of(&o));
    assert!(
        stdout_of(&o).contains("foldedpatch invalid"),
        "{}",
        stdout_of(&o)
    );
}

#[test]
fn z2_validator_failure_path() {
    let dir = tempfile::tempdir().unwrap();
    let window = tmp(&dir, "w.z2");
    // Stripe tiles force columns constant; stacking 1 over 0 breaks the
    // vertical match.
    fs::write(&window, "window 0 0 0 1\n0\n1\n").unwrap();
    let o = run(&[
        "validate",
        window.to_str().unwrap(),
        "--tileset",
        &fixture("stripes.tiles"),
    ]);
    assert_eq!(code_of(&o), 1, "{}", stdout_of(&o));
    let out = stdout_of(&o);
    assert!(out.contains("violation"), "{out}");
    assert!(out.contains("z2patch invalid"), "{out}");

    let good = tmp(&dir, "good.z2");
    fs::write(&good, "window 0 0 0 1\n1\n1\n").unwrap();
    let o = run(&[
        "validate",
        good.to_str().unwrap(),
        "--tileset",
        &fixture("stripes.tiles"),
    ]);
    assert_eq!(code_of(&o), 0, "{}", stdout_of(&o));
}

#[test]
fn locked_validator_failure_paths() {
    let dir = tempfile::tempdir().unwrap();
    let locked = tmp(&dir, "l.patch");
    let quotient = fixture("f2z_mod2.quotient");
    let o = run(&[
        "locked-build",
        "--quotient",
        &quotient,
        "--radius",
        "2",
        "--out",
        locked.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&o), 0);
    let o = run(&[
        "locked-validate",
        locked.to_str().unwrap(),
        "--quotient",
        &quotient,
        "--kernel",
        "b,t,aa,abA",
    ]);
    assert_eq!(code_of(&o), 0, "{}", stdout_of(&o));

    // Flipping one cell's coset representative breaks a fix rule.
    let text = fs::read_to_string(&locked).unwrap();
    let bad_text = text.replacen("TT 1\n", "TT a\n", 1);
    assert_ne!(text, bad_text);
    let bad = tmp(&dir, "bad.patch");
    fs::write(&bad, bad_text).unwrap();
    let o = run(&[
        "locked-validate",
        bad.to_str().unwrap(),
        "--quotient",
        &quotient,
        "--kernel",
        "b,t,aa,abA",
    ]);
    assert_eq!(code_of(&o), 1, "{}", stdout_of(&o));
    assert!(
        stdout_of(&o).contains("lockedpatch invalid"),
        "{}",
        stdout_of(&o)
    );

    // A generator outside the kernel is rejected before any scanning.
    let o = run(&[
        "locked-validate",
        locked.to_str().unwrap(),
        "--quotient",
        &quotient,
        "--kernel",
        "a",
    ]);
    assert_eq!(code_of(&o), 1);
    assert!(!stderr_of(&o).is_empty());
}

#[test]
fn flow_svg_matches_patch_structure() {
    let dir = tempfile::tempdir().unwrap();
    let flow = tmp(&dir, "w.flow");
    let o = run(&[
        "flow-build",
        "--group",
        "F2",
        "--word",
        "bab",
        "--radius",
        "2",
        "--out",
        flow.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&o), 0);
    let o = run(&["render", flow.to_str().unwrap(), "--format", "svg"]);
    assert_eq!(code_of(&o), 0, "{}", stderr_of(&o));
    let svg = stdout_of(&o);

    let group = Group::Free { rank: 2 };
    let word = FlowWord::parse(group, "bab").unwrap();
    let patch = flow_patch_from_word(&word, 2, 1_000_000).unwrap();
    assert_eq!(svg.matches("data-cell=").count(), patch.len());
    for (g, letter) in patch.cells() {
        let needle = format!(
            "data-cell=\"{}\" data-letter=\"{}\"",
            group.key(g),
            letter.render()
        );
        assert!(svg.contains(&needle), "missing {needle}");
    }

    // Identical invocations render identically.
    let again = run(&["render", flow.to_str().unwrap(), "--format", "svg"]);
    assert_eq!(svg, stdout_of(&again));
}

#[test]
fn bs_dot_lists_exactly_the_cayley_edges() {
    let dir = tempfile::tempdir().unwrap();
    let patch = tmp(&dir, "p.patch");
    let o = run(&[
        "build-bs",
        "--word",
        "tat",
        "--x",
        "1/2",
        "--radius",
        "3",
        "--out",
        patch.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&o), 0);
    let o = run(&["render", patch.to_str().unwrap(), "--format", "dot"]);
    assert_eq!(code_of(&o), 0, "{}", stderr_of(&o));
    let dot = stdout_of(&o);

    let group = Group::Bs { m: 2, n: 3 };
    let text = fs::read_to_string(&patch).unwrap();
    let body = text.split_once('\n').unwrap().1;
    let p = parse_bs_patch(&group, 3, body).unwrap();
    let mut expected = Vec::new();
    for (g, _) in p.cells() {
        for (gen, label) in [(Letter::s(0), 'a'), (Letter::t(), 't')] {
            let h = group.mul_letter(g, gen).unwrap();
            if p.contains(&h) {
                expected.push(format!(
                    "  \"{}\" -> \"{}\" [label=\"{label}\"];",
                    group.key(g),
                    group.key(&h)
                ));
            }
        }
    }
    let got: Vec<&str> = dot.lines().filter(|l| l.contains(" -> ")).collect();
    assert_eq!(got.len(), expected.len(), "{dot}");
    for e in &expected {
        assert!(dot.contains(e), "missing edge {e}");
    }
    // The ball shows horizontal coset chains and vertical moves.
    assert!(expected.iter().any(|e| e.contains("label=\"a\"")));
    assert!(expected.iter().any(|e| e.contains("label=\"t\"")));
}

#[test]
fn empty_patches_render_as_valid_documents() {
    let dir = tempfile::tempdir().unwrap();
    let empty = tmp(&dir, "empty.flow");
    fs::write(&empty, "flowpatch F2 radius 0\n").unwrap();
    let o = run(&["render", empty.to_str().unwrap(), "--format", "svg"]);
    assert_eq!(code_of(&o), 0);
    let svg = stdout_of(&o);
    assert!(svg.starts_with("<svg "), "{svg}");
    assert!(svg.trim_end().ends_with("</svg>"), "{svg}");
    assert_eq!(svg.matches("data-cell=").count(), 0);

    let o = run(&["render", empty.to_str().unwrap(), "--format", "dot"]);
    assert_eq!(code_of(&o), 0);
    let dot = stdout_of(&o);
    assert!(dot.starts_with("digraph patch {"), "{dot}");
    assert!(!dot.contains(" -> "));

    let z2 = tmp(&dir, "empty.z2");
    fs::write(&z2, "window 0 0 0 0\n.\n").unwrap();
    let o = run(&["render", z2.to_str().unwrap(), "--format", "svg"]);
    assert_eq!(code_of(&o), 0);
    let svg = stdout_of(&o);
    assert!(svg.contains("</svg>"), "{svg}");
    assert!(!svg.contains("<rect"), "{svg}");
}

#[test]
fn unsupported_render_combinations_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = tmp(&dir, "w.z2");
    fs::write(&z2, "window 0 0 0 0\n0\n").unwrap();
    let o = run(&["render", z2.to_str().unwrap(), "--format", "dot"]);
    assert_eq!(code_of(&o), 2);
    let folded = tmp(&dir, "f.patch");
    let o = run(&[
        "fold",
        "--tileset",
        &fixture("trivial.tiles"),
        "--word",
        "ab",
        "--radius",
        "2",
        "--out",
        folded.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&o), 0);
    let o = run(&["render", folded.to_str().unwrap(), "--format", "svg"]);
    assert_eq!(code_of(&o), 2);
}

#[test]
fn unfold_recovers_window_values() {
    let dir = tempfile::tempdir().unwrap();
    let window = tmp(&dir, "w.z2");
    let mut text = String::from("window -4 4 -4 4\n");
    for j in (-4i64..=4).rev() {
        let row: Vec<String> = (-4i64..=4).map(|i| (i.rem_euclid(3)).to_string()).collect();
        let _ = j;
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    fs::write(&window, &text).unwrap();
    let folded = tmp(&dir, "f.patch");
    let o = run(&[
        "fold",
        "--tileset",
        &fixture("cycle3.tiles"),
        "--word",
        "ab",
        "--radius",
        "3",
        "--patch",
        window.to_str().unwrap(),
        "--out",
        folded.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&o), 0, "{}", stderr_of(&o));
    let o = run(&[
        "validate",
        folded.to_str().unwrap(),
        "--tileset",
        &fixture("cycle3.tiles"),
    ]);
    assert_eq!(code_of(&o), 0, "{}", stdout_of(&o));
    let o = run(&[
        "unfold",
        folded.to_str().unwrap(),
        "--tileset",
        &fixture("cycle3.tiles"),
    ]);
    assert_eq!(code_of(&o), 0, "{}", stderr_of(&o));
    let recovered = parse_z2_patch(&stdout_of(&o)).unwrap();
    let mut cells = 0;
    for (&(i, _), &id) in recovered.cells() {
        assert_eq!(id as i64, i.rem_euclid(3));
        cells += 1;
    }
    assert!(cells > 0);
}

#[test]
fn rotating_four_times_is_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    let mut current = fixture("cycle3.tiles");
    let mut last = String::new();
    for step in 0..4 {
        let out = tmp(&dir, &format!("r{step}.tiles"));
        let o = run(&["rotate-tileset", &current, "--out", out.to_str().unwrap()]);
        assert_eq!(code_of(&o), 0);
        current = out.to_str().unwrap().to_string();
        last = fs::read_to_string(&out).unwrap();
    }
    // Compare against the canonical rendering of the original.
    let o = run(&[
        "higher-block",
        &fixture("cycle3.tiles"),
        "--width",
        "1",
        "--height",
        "1",
    ]);
    assert_eq!(code_of(&o), 0);
    let rerendered = stdout_of(&o);
    let tiles = |s: &str| -> Vec<String> {
        s.lines()
            .filter(|l| l.starts_with("tile:"))
            .map(str::to_string)
            .collect()
    };
    assert_eq!(tiles(&last), tiles(&rerendered));
}

#[test]
fn higher_block_recodes_windows() {
    let o = run(&[
        "higher-block",
        &fixture("cycle3.tiles"),
        "--width",
        "2",
        "--height",
        "1",
    ]);
    assert_eq!(code_of(&o), 0);
    let out = stdout_of(&o);
    assert!(out.contains("cycle3-block2x1"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("tile:")).count(), 3);
}

#[test]
fn verify_paper_subset_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let report = tmp(&dir, "report.json");
    let o = run(&[
        "verify-paper",
        "--only",
        "5",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&o), 0, "{}", stderr_of(&o));
    let text = fs::read_to_string(&report).unwrap();
    assert!(text.contains("\"id\": 5"), "{text}");
    assert!(
        text.contains("\"name\": \"circle-map-aperiodicity\""),
        "{text}"
    );
    assert!(text.contains("\"passed\": true"), "{text}");
    assert!(text.trim_end().ends_with('}'), "{text}");

    let again = tmp(&dir, "again.json");
    let o = run(&[
        "verify-paper",
        "--only",
        "5",
        "--out",
        again.to_str().unwrap(),
    ]);
    assert_eq!(code_of(&o), 0);
    assert_eq!(text, fs::read_to_string(&again).unwrap());
}

#[test]
fn normalize_ball_and_approach_print_pinned_lines() {
    let o = run(&["normalize", "--group", "BS(2,3)", "--word", "aatAA"]);
    assert_eq!(code_of(&o), 0);
    assert_eq!(stdout_of(&o), "ta\n");

    let o = run(&["ball", "--group", "F2", "--radius", "1"]);
    assert_eq!(code_of(&o), 0);
    assert_eq!(stdout_of(&o), "1\nA\nB\na\nb\n");

    let o = run(&[
        "approach", "--start", "ba", "--target", "BA", "--steps", "2",
    ]);
    assert_eq!(code_of(&o), 0);
    assert_eq!(
        stdout_of(&o),
        "n=0 e=A g=BA\nn=1 e=A g=BAA\nn=2 e=A g=BABA\n"
    );

    let o = run(&[
        "lambda", "--group", "BS(2,3)", "--word", "tat", "--flow", "tat",
    ]);
    assert_eq!(code_of(&o), 0);
    assert_eq!(
        stdout_of(&o),
        "beta = 2\nalpha = 2/3\nlambda = 3/4\nbeta_y = 2\n"
    );
}

#[test]
fn ball_cap_env_var_limits_enumeration() {
    let mut cmd = bin();
    cmd.args(["ball", "--group", "F2", "--radius", "8"]);
    cmd.env("GBS_BALL_CAP", "10");
    let o = cmd.output().unwrap();
    assert_eq!(code_of(&o), 1);
    assert!(!stderr_of(&o).is_empty());
}

#[test]
fn graph_commands_read_fixture_graphs() {
    let o = run(&["presentation", "--graph", &fixture("torus23.graph")]);
    assert_eq!(code_of(&o), 0);
    assert_eq!(stdout_of(&o), "<a, b | a^2 = b^3>\n");

    let o = run(&["witness", "--graph", &fixture("bs23.graph")]);
    assert_eq!(code_of(&o), 0);
    let out = stdout_of(&o);
    assert!(out.contains("kind: BS(2,3)"), "{out}");
    assert!(out.contains("verified: true"), "{out}");

    let o = run(&["classify", "--graph", &fixture("z2.graph")]);
    assert_eq!(code_of(&o), 0);
    assert_eq!(stdout_of(&o), "unimodular\n");
}
