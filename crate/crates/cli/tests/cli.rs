use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fluxgeom")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["markov", "tree", "--max-c", "5"]).status.code(), Some(0));
    assert_eq!(run(&["atf", "--triple", "1,1,3"]).status.code(), Some(1));
    assert_eq!(run(&["classify", "--fibre", "toric:0,1/2"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["psi", "--point", "1/0,1"]).status.code(), Some(2));
    assert_eq!(run(&["shape", "--space", "cn", "--f", "1,1"]).status.code(), Some(2));
}

#[test]
fn tree_json_matches_enumeration() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["markov", "tree", "--max-c", "433", "--json"])).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 11);
    assert_eq!(v["edges"].as_array().unwrap().len(), 10);
}

#[test]
fn classify_example() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["equivalent", "--f1", "toric:1/2,1/5", "--f2", "toric:1/5,3/10", "--json"])).unwrap();
    assert_eq!(v["equivalent"], true);
}

#[test]
fn output_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("fluxgeom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases: [&[&str]; 4] = [
        &["orbit", "--max-word", "2", "--step", "1/4", "--json"],
        &["moduli", "--global", "--max-c", "29", "--json"],
        &["potential", "--triple", "2,5,29", "--show-newton"],
        &["atf", "--triple", "1,5,13", "--json"],
    ];
    for args in cases {
        assert_eq!(stdout(args), stdout(args));
    }
    let svg = dir.join("m.svg");
    let svg_arg = svg.to_str().unwrap();
    stdout(&["moduli", "--triple", "1,2,5", "--svg", svg_arg]);
    let first = std::fs::read(&svg).unwrap();
    stdout(&["moduli", "--triple", "1,2,5", "--svg", svg_arg]);
    assert_eq!(first, std::fs::read(&svg).unwrap());
    assert!(String::from_utf8(first).unwrap().contains("<svg"));

    let png = dir.join("o.png");
    let csv = dir.join("o.csv");
    stdout(&["orbit", "--max-word", "1", "--step", "1/2", "--png", png.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    let img = image::open(&png).unwrap();
    assert_eq!((img.width(), img.height()), (13, 13));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 1 + 13 * 13);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn shape_svg_needs_plane() {
    let out = run(&["shape", "--space", "cn", "--r", "1,1,1", "--svg", "/dev/null"]);
    assert_eq!(out.status.code(), Some(2));
}
