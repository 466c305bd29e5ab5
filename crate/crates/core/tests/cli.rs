use std::path::PathBuf;
use std::process::Command;

use uf1eq::cli::run;
use uf1eq::structures::parse_structure;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("uf1eq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("uf1eq").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn key<'a>(out: &'a str, k: &str) -> Option<&'a str> {
    out.lines().find_map(|l| l.strip_prefix(k)?.strip_prefix('='))
}

#[test]
fn check_reports_membership() {
    let (code, out, _) = call(&["check", "--formula", &data("uniform.uf")]);
    assert_eq!(code, 0);
    assert_eq!(key(&out, "verdict"), Some("member"));
    let (code, out, _) = call(&["check", "--formula", &data("nonmember.uf")]);
    assert_eq!(code, 1);
    assert_eq!(key(&out, "verdict"), Some("nonmember"));
    assert!(key(&out, "violation").unwrap().contains("rule=uniformity"));
}

#[test]
fn sat_exit_codes() {
    let (code, out, _) = call(&["sat", "--formula", &data("false.uf"), "--cap", "4"]);
    assert_eq!((code, key(&out, "verdict")), (1, Some("unsat")));

    let m = tmp("succ.str");
    let (code, out, _) = call(&[
        "sat",
        "--formula",
        &data("successor.uf"),
        "--cap",
        "4",
        "--emit-model",
        &m,
    ]);
    assert_eq!((code, key(&out, "verdict")), (0, Some("sat")));
    let (code, out, _) = call(&["model-check", "--formula", &data("successor.uf"), "--model", &m]);
    assert_eq!((code, key(&out, "result")), (0, Some("true")));
}

#[test]
fn brute_sat_agrees_with_sat() {
    for f in ["successor.uf", "false.uf", "uniform.uf"] {
        let a = call(&["sat", "--formula", &data(f), "--cap", "3"]);
        let b = call(&["brute-sat", "--formula", &data(f), "--cap", "3"]);
        assert_eq!(a.0, b.0, "{f}");
    }
}

#[test]
fn model_check_with_assignment() {
    let f = data("precisely_two.uf");
    let (code, out, _) = call(&["model-check", "--formula", &f, "--model", &data("cycle4.str")]);
    assert_eq!((code, key(&out, "result")), (0, Some("true")));
    let f = data("off_centre.uf");
    let (code, _, _) = call(&[
        "model-check",
        "--formula",
        &f,
        "--model",
        &data("cycle4.str"),
        "--assign",
        "x=1",
    ]);
    assert_eq!(code, 0);
    let (code, _, _) = call(&[
        "model-check",
        "--formula",
        &f,
        "--model",
        &data("cycle4.str"),
        "--assign",
        "x=0",
    ]);
    assert_eq!(code, 1);
    let (code, _, _) = call(&[
        "model-check",
        "--formula",
        &f,
        "--model",
        &data("cycle4.str"),
        "--assign",
        "x",
    ]);
    assert_eq!(code, 64);
}

#[test]
fn normalize_and_compress() {
    let nf = tmp("uniform.nf");
    let (code, out, _) = call(&["normalize", "--formula", &data("uniform.uf"), "--emit-nf", &nf]);
    assert_eq!(code, 0);
    assert_eq!(key(&out, "exist_conjuncts"), Some("1"));
    assert!(std::fs::read_to_string(&nf).unwrap().contains("A x. E y."));

    let small = tmp("compressed.str");
    let (code, out, _) = call(&[
        "compress",
        "--formula",
        &data("successor.uf"),
        "--model",
        &data("cycle4.str"),
        "--out",
        &small,
        "--trace",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().any(|l| l.starts_with("trace=")));
    let (code, _, _) = call(&["model-check", "--formula", &data("successor.uf"), "--model", &small]);
    assert_eq!(code, 0);
}

#[test]
fn compress_rejects_non_models() {
    let m = tmp("empty.str");
    std::fs::write(&m, "domain = 2\nrel R/2 = { }\n").unwrap();
    let (code, _, err) = call(&[
        "compress",
        "--formula",
        &data("successor.uf"),
        "--model",
        &m,
        "--out",
        &tmp("never.str"),
    ]);
    assert_eq!(code, 65, "{err}");
}

#[test]
fn translate_verifies() {
    let (code, out, _) = call(&[
        "translate",
        "--to",
        "foc2",
        "--formula",
        &data("precisely_two.uf"),
        "--verify",
        "4",
    ]);
    assert_eq!(code, 0);
    assert_eq!(key(&out, "verify"), Some("equivalent"));

    let (code, out, err) = call(&[
        "translate",
        "--formula",
        &data("off_centre.uf"),
        "--verify",
        "4",
        "--off-centre",
        "verbatim",
    ]);
    assert_eq!(code, 70);
    assert_eq!(key(&out, "verify"), Some("counterexample"));
    assert!(err.contains("domain = "));

    let (code, _, _) = call(&["translate", "--formula", &data("uniform.uf"), "--verify", "5"]);
    assert_eq!(code, 64);
    let (code, _, _) = call(&["translate", "--formula", &data("uniform.uf"), "--max-nodes", "3"]);
    assert_eq!(code, 65);
    let (code, _, _) = call(&["translate", "--formula", &data("nonmember.uf")]);
    assert_eq!(code, 65);
}

#[test]
fn tiling_pipeline() {
    let f = tmp("stripes.uf");
    let g = tmp("stripes.str");
    let (code, out, _) = call(&["gen-tiling", "--tiles", &data("stripes.tls"), "--out", &f]);
    assert_eq!((code, key(&out, "ufc1eq_member")), (0, Some("true")));
    let (code, _, _) = call(&["gen-grid", "--n", "1", "--tiles", &data("stripes.tls"), "--out", &g]);
    assert_eq!(code, 0);
    let (code, out, _) = call(&["model-check", "--formula", &f, "--model", &g]);
    assert_eq!((code, key(&out, "result")), (0, Some("true")));
    let (code, out, _) = call(&["project", "--model", &g]);
    assert_eq!((code, key(&out, "square_torus")), (0, Some("2")));
    let (code, out, _) = call(&["extract-hom", "--model", &g, "--formula", &f]);
    assert_eq!(code, 0);
    assert_eq!(key(&out, "homomorphism"), Some("verified"));

    // one self-compatible tile covers every torus
    let (code, out, _) = call(&["gen-grid", "--n", "1", "--tiles", &data("single.tls"), "--out", &g]);
    assert_eq!((code, key(&out, "tiled")), (0, Some("true")));
}

#[test]
fn corpus_is_deterministic() {
    for kind in ["sentences", "formulas", "normal-forms", "structures"] {
        let a = call(&["corpus", "--kind", kind, "--count", "5", "--seed", "11"]);
        let b = call(&["corpus", "--kind", kind, "--count", "5", "--seed", "11", "--jobs", "2"]);
        assert_eq!(a.0, 0);
        assert_eq!(a, b);
    }
    let (_, out, _) = call(&[
        "corpus",
        "--kind",
        "structures",
        "--count",
        "1",
        "--vocab",
        "P/1,R/2",
        "--size",
        "3",
    ]);
    let text: String = out
        .lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n");
    assert_eq!(parse_structure(&text).unwrap().size(), 3);
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(call(&["frobnicate"]).0, 64);
    assert_eq!(call(&["sat", "--formula", &data("false.uf"), "--cap", "0"]).0, 64);
    assert_eq!(call(&["check", "--formula", "/does/not/exist.uf"]).0, 65);
    assert_eq!(call(&["--jobs", "0", "check", "--formula", &data("false.uf")]).0, 64);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("extract-hom"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_uf1eq");
    let s = Command::new(bin)
        .args(["sat", "--formula", &data("false.uf"), "--cap", "4"])
        .output()
        .unwrap();
    assert_eq!(s.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&s.stdout).contains("verdict=unsat"));
    let s = Command::new(bin).args(["check"]).output().unwrap();
    assert_eq!(s.status.code(), Some(64));
}
