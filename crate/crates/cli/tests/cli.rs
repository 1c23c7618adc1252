use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn polyforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyforge")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn build(dir: &TempDir, family: &str, d: &str) -> PathBuf {
    let out = path(dir, &format!("{family}{d}.vpoly"));
    let o = polyforge(&["build", "--family", family, "--dim", d, "-o", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

const PRISM: &str = "vpoly 3 6\na0 0 0 0\na1 1 0 0\na2 0 1 0\nb0 0 0 1\nb1 1 0 1\nb2 0 1 1\n";
const CUBE: &str = "vpoly 3 8\nv0 0 0 0\nv1 1 0 0\nv2 0 1 0\nv3 1 1 0\nv4 0 0 1\nv5 1 0 1\nv6 0 1 1\nv7 1 1 1\n";

#[test]
fn build_is_deterministic_and_labelled() {
    let a = polyforge(&["build", "--family", "P", "--dim", "4"]);
    let b = polyforge(&["build", "--family", "p", "--dim", "4"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().any(|l| l == "C 0 0 2 1"));
    let primed = polyforge(&["build", "--family", "Pprime", "--dim", "4", "--eps", "1/5"]);
    assert!(stdout(&primed).lines().any(|l| l == "C' 0 -1/5 9/5 1"));
}

#[test]
fn hull_and_lattice() {
    let dir = TempDir::new().unwrap();
    let p = build(&dir, "P", "4");
    let o = polyforge(&["hull", s(&p)]);
    assert!(stdout(&o).starts_with("hpoly 4 9\n"));
    let o = polyforge(&["lattice", s(&p)]);
    assert_eq!(stdout(&o).lines().next(), Some("f-vector 12 28 25 9"));
}

#[test]
fn equivalence_reports_moved_labels() {
    let dir = TempDir::new().unwrap();
    let (p, pp) = (build(&dir, "P", "4"), build(&dir, "Pprime", "4"));
    let map = path(&dir, "map.json");
    let o = polyforge(&["equiv", s(&p), s(&pp), "--map", s(&map)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "equivalent\nC -> C'\nC1 -> C1'\nC2 -> C2'\n");
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&map).unwrap()).unwrap();
    assert_eq!(json["vertices"].as_array().unwrap().len(), 12);

    let cube = write(&dir, "cube.vpoly", CUBE);
    let o = polyforge(&["equiv", s(&p), s(&cube)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "not equivalent\n");
}

#[test]
fn decide_and_certify_round_trip() {
    let dir = TempDir::new().unwrap();
    let (p, pp) = (build(&dir, "P", "4"), build(&dir, "Pprime", "4"));
    assert!(stdout(&polyforge(&["decide", s(&p)])).starts_with("decomposable"));
    assert!(stdout(&polyforge(&["decide", s(&pp)])).starts_with("indecomposable"));

    for (poly, kind) in [(&pp, "SkewGluing"), (&p, "SummandPair")] {
        let cert = path(&dir, &format!("{kind}.json"));
        let o = polyforge(&["certify", s(poly), "-o", s(&cert)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let text = std::fs::read_to_string(&cert).unwrap();
        assert!(text.contains(&format!("\"kind\": \"{kind}\"")));
        let o = polyforge(&["verify", s(poly), s(&cert)]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).starts_with("valid"));
    }

    // a certificate for one polytope does not verify for the other
    let o = polyforge(&["verify", s(&p), s(&path(&dir, "SkewGluing.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("invalid"));
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = TempDir::new().unwrap();
    let simplex = write(&dir, "s.vpoly", "vpoly 3 4\no 0 0 0\na 1 0 0\nb 0 1 0\nc 0 0 1\n");
    let cert = path(&dir, "c.json");
    assert!(polyforge(&["certify", s(&simplex), "-o", s(&cert)]).status.success());
    let text = std::fs::read_to_string(&cert).unwrap();
    assert!(text.contains("ChainCoversVertices"));
    let forged = write(&dir, "f.json", r#"{"kind":"ChainCoversVertices","triangles":[["o","a","b"]]}"#);
    let o = polyforge(&["verify", s(&simplex), s(&forged)]);
    assert_eq!(o.status.code(), Some(1));
    let junk = write(&dir, "j.json", "{not json");
    assert_eq!(polyforge(&["verify", s(&simplex), s(&junk)]).status.code(), Some(2));
}

#[test]
fn slice_sum_and_lemma1() {
    let dir = TempDir::new().unwrap();
    let p = build(&dir, "P", "4");
    let o = polyforge(&["slice", s(&p), "--hyperplane", "0,0,1,0=3/2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("vpoly 4 6\n"));
    let o = polyforge(&["slice", s(&p), "--hyperplane", "0,0,1,0=3"]);
    assert_eq!(o.status.code(), Some(2));

    let seg = write(&dir, "seg.vpoly", "vpoly 2 2\nx 0 0\ny 1 1\n");
    let sq = write(&dir, "sq.vpoly", "vpoly 2 4\na 0 0\nb 1 0\nc 0 1\nd 1 1\n");
    let o = polyforge(&["sum", s(&sq), s(&seg)]);
    assert_eq!(stdout(&o), "vpoly 2 6\na+x 0 0\nb+x 1 0\nb+y 2 1\nc+x 0 1\nc+y 1 2\nd+y 2 2\n");

    let prism = write(&dir, "prism.vpoly", PRISM);
    let o = polyforge(&["lemma1", s(&prism), "--direction", "1,2,-1", "--k", "1/3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).ends_with("correspondence verified\n"));
    let a = polyforge(&["lemma1", s(&prism), "--seed", "7"]);
    let b = polyforge(&["lemma1", s(&prism), "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn main_theorem_boundary() {
    let dir = TempDir::new().unwrap();
    let prism = write(
        &dir,
        "prism4.vpoly",
        "vpoly 4 8\na0 0 0 0 0\na1 1 0 0 0\na2 0 1 0 0\na3 0 0 1 0\nb0 0 0 0 1\nb1 1 0 0 1\nb2 0 1 0 1\nb3 0 0 1 1\n",
    );
    let o = polyforge(&["maintheorem", s(&prism)]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("all steps passed\n"), "{}", stdout(&o));
    let p = build(&dir, "P", "4");
    let o = polyforge(&["maintheorem", s(&p)]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("precondition failed\n"));
}

#[test]
fn figures() {
    let dir = TempDir::new().unwrap();
    let cube = write(&dir, "cube.vpoly", CUBE);
    let o = polyforge(&["figure", s(&cube), "--projection", "coords(1,2,3)"]);
    let svg = stdout(&o);
    assert_eq!(svg.matches("<circle ").count(), 8);
    assert_eq!(svg.matches("<line ").count(), 12);
    let p = build(&dir, "BarP", "4");
    let out = path(&dir, "barp.svg");
    assert!(polyforge(&["figure", s(&p), "--projection", "schlegel(0)", "-o", s(&out)]).status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap().matches("<circle ").count(), 12);
}

#[test]
fn errors_leave_no_output_files() {
    let dir = TempDir::new().unwrap();
    let cube = write(&dir, "cube.vpoly", CUBE);
    let out = path(&dir, "bad.svg");
    let o = polyforge(&["figure", s(&cube), "--projection", "coords(1,1,2)", "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());

    let broken = write(&dir, "broken.vpoly", "vpoly 2 2\na 0 0\nb 1 x\n");
    let out = path(&dir, "h.hpoly");
    let o = polyforge(&["hull", s(&broken), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert!(!out.exists());

    let o = polyforge(&["build", "--family", "Pprime", "--dim", "4", "--eps", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert_eq!(polyforge(&["decide"]).status.code(), Some(2));
}
