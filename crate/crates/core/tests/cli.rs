use std::path::Path;
use std::process::{Command, Output};

use normlines::cli::Report;
use normlines::linalg::verify_norm_preserving;
use normlines::render::parse_metadata;

fn normlines(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normlines"))
        .args(args)
        .output()
        .expect("run normlines")
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("analyze2_lopez.json", &["analyze2", "4", "3", "-2", "-3"]),
    (
        "analyze2_eigen_rotation.json",
        &["analyze2", "1", "-8", "0", "3"],
    ),
    ("analyze2_identity.json", &["analyze2", "1", "0", "0", "1"]),
    ("analyze2_scaling.json", &["analyze2", "2", "0", "0", "2"]),
    (
        "analyze3_example1.json",
        &[
            "analyze3", "1/2", "1", "1", "1", "1/2", "1", "1", "1", "1/2", "--bound", "100",
        ],
    ),
    (
        "analyze3_example2.json",
        &["analyze3", "1", "2", "2", "2", "1", "2", "2", "2", "1"],
    ),
    (
        "analyze3_example3.json",
        &[
            "analyze3", "1", "2", "3", "2", "1", "1", "1", "1", "1", "--bound", "20",
        ],
    ),
    ("family_lopez_4_-2.json", &["family", "lopez", "4", "-2"]),
    ("torus_2_10.json", &["torus", "2", "10"]),
    (
        "piezas_36_52_39.json",
        &[
            "piezas", "36", "52", "39", "--seed", "1", "0", "6", "--st", "1", "1", "--st", "1",
            "2", "--matrix", "1", "2", "3", "3", "4", "5", "2", "3", "4",
        ],
    ),
    (
        "dioph_39_48_39.json",
        &["dioph", "39", "48", "39", "--bound", "50"],
    ),
];

#[test]
fn json_matches_golden_files() {
    for (file, args) in GOLDEN {
        let mut full = vec!["--json"];
        full.extend_from_slice(args);
        let out = normlines(&full);
        assert!(
            out.status.success(),
            "{file}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let got = String::from_utf8(out.stdout).unwrap();
        assert_eq!(got, golden(file), "{file} differs");
    }
}

#[test]
fn golden_reports_round_trip_and_verify() {
    for (file, _) in GOLDEN {
        let text = golden(file);
        let report = Report::from_json(&text).unwrap();
        assert_eq!(report.to_json(), text, "{file}");
        assert!(report.all_verified(), "{file}");
    }
}

#[test]
fn known_lines_present_in_example3() {
    let r = Report::from_json(&golden("analyze3_example3.json")).unwrap();
    let lines: Vec<Vec<String>> = r
        .lines
        .unwrap()
        .into_iter()
        .map(|l| l.direction.unwrap())
        .collect();
    for want in [
        ["11", "-15", "10"],
        ["1", "3", "-2"],
        ["1", "3", "-4"],
        ["13", "15", "-20"],
        ["1", "-1", "0"],
    ] {
        assert!(lines.iter().any(|l| l == &want), "{want:?} missing");
    }
}

#[test]
fn text_output_is_default() {
    let out = normlines(&["analyze2", "4", "3", "-2", "-3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("<17, -19>"));
    assert!(!text.trim_start().starts_with('{'));
}

#[test]
fn bad_token_exits_nonzero_and_names_it() {
    let out = normlines(&["analyze2", "4", "3.5", "-2", "-3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("`3.5`"));

    let out = normlines(&["torus", "1/2", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`1/2`"));

    let out = normlines(&["family", "zz", "1", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_seed_is_an_error() {
    let out = normlines(&["piezas", "36", "52", "39", "--seed", "1", "1", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
}

#[test]
fn all_pivots_degenerate_is_reported() {
    // B - I has a zero diagonal: [[0,1,0],[1,0,0],[0,0,0]].
    let out = normlines(&[
        "--json", "analyze3", "0", "1", "0", "1", "0", "0", "0", "0", "1", "--bound", "3",
    ]);
    assert!(out.status.success());
    let r = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(r.reduction.is_none());
    assert!(r.reduction_error.unwrap().contains("every pivot"));
}

#[test]
fn rendered_scene_round_trips_through_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("scene.svg");
    let out = normlines(&[
        "render",
        "scene2",
        "4",
        "3",
        "-2",
        "-3",
        "-o",
        svg.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let meta = parse_metadata(&std::fs::read_to_string(&svg).unwrap()).unwrap();
    let a = meta.matrix2().unwrap();
    let dirs = meta.directions().unwrap();
    assert_eq!(dirs.len(), 2);
    assert!(dirs.iter().all(|d| verify_norm_preserving(&a, d)));
}

#[test]
fn render_figures_twice_is_byte_identical() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&d1, &d2] {
        let out = normlines(&["render", "figures", d.path().to_str().unwrap()]);
        assert!(out.status.success());
    }
    let mut names: Vec<_> = std::fs::read_dir(d1.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert_eq!(names.len(), 8);
    for n in names {
        assert_eq!(
            std::fs::read(d1.path().join(&n)).unwrap(),
            std::fs::read(d2.path().join(&n)).unwrap(),
            "{n:?}"
        );
    }
}

#[test]
fn scene3_writes_obj_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("ex1");
    let out = normlines(&[
        "render",
        "scene3",
        "1/2",
        "1",
        "1",
        "1",
        "1/2",
        "1",
        "1",
        "1",
        "1/2",
        "-o",
        prefix.to_str().unwrap(),
        "--cone",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let obj = std::fs::read_to_string(prefix.with_extension("obj")).unwrap();
    assert!(obj.starts_with("# normlines scene"));
    assert!(obj.lines().any(|l| l.starts_with("f ")));
    assert!(prefix.with_extension("svg").exists());
}
