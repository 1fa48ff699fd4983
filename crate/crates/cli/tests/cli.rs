use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use quadcolor::format::{parse_emb, write_emb};

const FAMILIES: &[&str] = &[
    "grid_disk 3 3",
    "grid_cylinder 4 3",
    "grid_torus 4 4",
    "grid_klein 4 3",
    "k4_projective",
    "k5_torus",
];

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadcolor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_matches_goldens_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for fam in FAMILIES {
        let stem = fam.replace(' ', "_");
        let want = fs::read_to_string(golden(&format!("{stem}.emb"))).unwrap();
        for round in 0..2 {
            let out = dir.path().join(format!("{stem}.{round}.emb"));
            let mut args: Vec<&str> = vec!["gen"];
            args.extend(fam.split(' '));
            args.extend(["-o", path_str(&out)]);
            assert_eq!(run(&args).status.code(), Some(0), "{fam}");
            let text = fs::read_to_string(&out).unwrap();
            assert_eq!(text, want, "{fam} run {round}");
            assert_eq!(write_emb(&parse_emb(&text).unwrap()), text);
        }
        let faces = run(&["faces", path_str(&golden(&format!("{stem}.emb")))]);
        assert_eq!(faces.status.code(), Some(0));
        let want = fs::read_to_string(golden(&format!("{stem}.faces"))).unwrap();
        assert_eq!(stdout(&faces), want, "{fam}");
    }
}

#[test]
fn solve_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let g = golden("grid_disk_3_3.emb");
    let b = golden("disk_alt.col");
    let out = dir.path().join("s.col");
    let r = run(&["solve", path_str(&g), path_str(&b), "-o", path_str(&out)]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(stdout(&r), "verdict: Yes\n");
    let v = run(&["verify", path_str(&g), path_str(&out), "--pre", path_str(&b)]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(stdout(&v), "valid\n");
    let v = run(&["verify", path_str(&g), path_str(&b)]);
    assert_eq!(v.status.code(), Some(1));
}

#[test]
fn report_goldens() {
    let cases: &[(&[&str], &str, i32)] = &[
        (&["solve", "grid_disk_3_3.emb", "disk_alt.col"], "solve_disk_alt.out", 0),
        (&["solve", "grid_disk_3_3.emb", "disk_spoke.col"], "solve_disk_spoke.out", 1),
        (&["winding", "grid_disk_3_3.emb", "disk_winding.col"], "winding_disk.out", 0),
        (&["solve", "k5_torus.emb", "empty.col"], "solve_k5.out", 1),
        (&["solve", "k4_projective.emb", "empty.col"], "solve_k4.out", 1),
    ];
    for (args, want, code) in cases {
        let args: Vec<String> = args
            .iter()
            .enumerate()
            .map(|(i, a)| if i == 0 { a.to_string() } else { path_str(&golden(a)).to_string() })
            .collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.status.code(), Some(*code), "{want}");
        assert_eq!(stdout(&first), stdout(&second), "{want}");
        assert_eq!(stdout(&first), fs::read_to_string(golden(want)).unwrap(), "{want}");
    }
}

#[test]
fn oracle_and_essential() {
    let k5 = golden("k5_torus.emb");
    let e = golden("empty.col");
    assert_eq!(run(&["oracle", path_str(&k5), path_str(&e)]).status.code(), Some(1));
    let t = golden("grid_torus_4_4.emb");
    let r = run(&["oracle", path_str(&t), path_str(&e)]);
    assert_eq!(r.status.code(), Some(0));
    let r = run(&["essential", path_str(&t), "--budget", "4"]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(stdout(&r).split_whitespace().count(), 5);
    let r = run(&["essential", path_str(&t), "--budget", "3"]);
    assert_eq!(stdout(&r), "essential: none\n");
}

#[test]
fn heuristic_exit_code() {
    let t = golden("grid_torus_4_4.emb");
    let e = golden("empty.col");
    let r = run(&["solve", path_str(&t), path_str(&e), "--budget", "3", "--heuristic-nu", "3"]);
    assert_eq!(r.status.code(), Some(2));
    assert!(stdout(&r).starts_with("verdict: HeuristicYes\n"));
    let r = run(&["solve", path_str(&t), path_str(&e), "--budget", "3"]);
    assert_eq!(r.status.code(), Some(0));
}

#[test]
fn errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.emb");
    fs::write(&bad, "vertices 2\nedge 0 0 1 +\nrot 0 0a\nrot 1 0q\n").unwrap();
    let e = golden("empty.col");
    let r = run(&["solve", path_str(&bad), path_str(&e)]);
    assert_eq!(r.status.code(), Some(3));
    assert_eq!(
        String::from_utf8_lossy(&r.stderr).lines().next().unwrap(),
        "error: parse: parse error at line 4: dart `0q` must end in a or b"
    );
    let g = golden("grid_disk_3_3.emb");
    let r = run(&["solve", path_str(&g), path_str(&e)]);
    assert_eq!(r.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&r.stderr).starts_with("error: coloring: "));
    let dup = dir.path().join("dup.col");
    fs::write(&dup, "0 1\n0 2\n").unwrap();
    assert_eq!(run(&["winding", path_str(&g), path_str(&dup)]).status.code(), Some(3));
    assert_eq!(run(&["gen", "grid_disk", "1"]).status.code(), Some(3));
    assert_eq!(run(&["solve"]).status.code(), Some(3));
}
