use std::io::Write;
use std::process::{Command, Stdio};

use intdec::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("intdec").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn decide_and_sat() {
    let (code, out, _) = call(&["decide", "forall x:real. exists z:int. z <= x and x < z+1"]);
    assert_eq!((code, out.trim()), (0, "TRUE"));
    let (code, out, _) = call(&["decide", "exists x:int. x + x = 1"]);
    assert_eq!((code, out.trim()), (1, "FALSE"));
    let (code, out, _) = call(&["sat", "x < x"]);
    assert_eq!((code, out.trim()), (1, "UNSAT"));
    let (code, _, err) = call(&["decide", "x <= 1"]);
    assert_eq!(code, 2);
    assert!(err.contains("not closed"));
}

#[test]
fn sat_witnesses_revalidate() {
    for f in [
        "x + y = 1 and x >= 0 and y >= 0",
        "exists n:int. x = 2*n + 1/3",
        "x < y and y < x + 1/100 and 3 < y",
        "(x > 7 or x < -7) and not (exists k:int. x = k)",
    ] {
        let (code, out, _) = call(&["sat", f]);
        assert_eq!(code, 0, "{f}");
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("SAT"));
        let point = lines.next().unwrap().replace(' ', "");
        let (code, out, _) = call(&["member", f, "--point", &point]);
        assert_eq!((code, out.trim()), (0, "TRUE"), "{f} at {point}");
    }
}

#[test]
fn comparisons() {
    assert_eq!(call(&["equiv", "x <= y", "not (y < x)"]).0, 0);
    assert_eq!(call(&["equiv", "x <= y", "x < y"]).0, 1);
    assert_eq!(call(&["subset", "x = y", "x <= y"]).0, 0);
    let (code, out, _) = call(&["subset", "x <= y", "x = y"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("NOT INCLUDED"));
    let (code, _, err) = call(&["equiv", "x <= y", "x <= 1"]);
    assert_eq!(code, 2);
    assert!(err.contains("free variables differ"));
}

#[test]
fn membership() {
    assert_eq!(call(&["member", "x <= y", "--point", "x=3/2,y=7"]).0, 0);
    assert_eq!(call(&["member", "x <= y", "--point", "x=8,y=7"]).0, 1);
    assert_eq!(call(&["member", "x <= y", "--point", "x=1"]).0, 2);
    assert_eq!(call(&["member", "x <= y", "--point", "x=1,y=2,z=3"]).0, 2);
    assert_eq!(call(&["member", "x <= y", "--point", "x=1/0,y=2"]).0, 2);
}

#[test]
fn stats_and_export() {
    let (code, out, _) = call(&["stats", "x1 + x2 = x3"]);
    assert_eq!(code, 0);
    assert!(out.contains("cells: 3"), "{out}");
    let (_, out, _) = call(&["stats", "--format", "json", "x <= y"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cells"], 2);

    let (code, out, _) = call(&["export", "x <= y"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 2);
    let back = intdec::json::idf_from_json(&v).unwrap();
    let f = intdec::frontend::parse("x <= y").unwrap();
    let g = intdec::frontend::compile(&f, &intdec::frontend::free_vars(&f)).unwrap();
    assert!(back.equals(&g).unwrap());
}

#[test]
fn cpdbm_decompose_reads_json() {
    let dir = std::env::temp_dir().join(format!("intdec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("dbm.json");
    std::fs::write(
        &path,
        r#"{"n": 1, "bounds": [[{"value": 0, "strict": false}, {"value": "inf", "strict": false}],
                              [{"value": 3, "strict": false}, {"value": 0, "strict": false}]]}"#,
    )
    .unwrap();
    let (code, out, _) = call(&["cpdbm-decompose", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let f = intdec::json::idf_from_json(&serde_json::from_str(&out).unwrap()).unwrap();
    let q = |n: i64, d: i64| num_rational::BigRational::new(n.into(), d.into());
    assert!(f.contains(&[q(5, 2)]).unwrap());
    assert!(!f.contains(&[q(13, 4)]).unwrap());

    std::fs::write(&path, "{\"n\": 1, \"bounds\": 7}").unwrap();
    assert_eq!(call(&["cpdbm-decompose", path.to_str().unwrap()]).0, 2);
    std::fs::write(&path, "not json").unwrap();
    assert_eq!(call(&["cpdbm-decompose", path.to_str().unwrap()]).0, 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn demo_cell_counts_do_not_grow() {
    let count = |m: &str| {
        let (code, out, _) = call(&["demo", "--max-const", m]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("decomposed == direct: true"));
        assert!(out.contains("compiled == direct: true"));
        let direct = out.lines().find(|l| l.starts_with("direct shapes")).unwrap().to_string();
        let decomposed = out.lines().find(|l| l.starts_with("decomposed CP-DBM+")).unwrap();
        let n = direct.split_whitespace().nth(2).unwrap().to_string();
        assert_eq!(decomposed.split_whitespace().nth(2).unwrap(), n);
        n
    };
    assert_eq!(count("5"), count("1000000"));
    assert_eq!(call(&["demo", "--max-const", "0"]).0, 2);
}

#[test]
fn usage_errors() {
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&[]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
    let (code, _, err) = call(&["sat", "x <= (y"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"));
    assert_eq!(call(&["sat", "exists n:int. exists n:real. n = 0"]).0, 2);
}

#[test]
fn capacity_exit_code() {
    let vars: Vec<String> = (0..13).map(|i| format!("v{i}")).collect();
    let f = vars.join(" + ") + " = 1";
    assert_eq!(call(&["sat", &f]).0, 3);
}

#[test]
fn binary_reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_intdec"))
        .args(["decide", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"# parity\nforall x:int. forall y:int. 2*x + 1 != 2*y\n")
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "TRUE");
}
