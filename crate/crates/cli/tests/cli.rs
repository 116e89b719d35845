use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};
use tempfile::TempDir;

const CBC8: &str = "n=8\n0 0\n0 1\n1 2\n3 3\n4 0\n4 1\n5 2\n7 7\n";

fn e_pair() -> Value {
    json!([
        {"n": 4, "pairs": [[0, 0], [1, 0], [2, 1], [3, 0]]},
        {"n": 4, "pairs": [[0, 0], [1, 0], [2, 0], [3, 0]]}
    ])
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture { dir: tempfile::tempdir().expect("temp dir") }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, body).expect("write fixture");
        path
    }

    fn json_file(&self, name: &str, v: &Value) -> PathBuf {
        self.file(name, &v.to_string())
    }
}

fn bayonet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bayonet")).args(args).output().expect("run the binary")
}

fn with_input(path: &Path, args: &[&str]) -> Output {
    let mut all = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["--input", p]);
    bayonet(&all)
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn doc(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr)))
}

/// Runs `verify` on the JSON result and returns its exit code.
fn verify(fx: &Fixture, result: &Value) -> i32 {
    let path = fx.json_file("result.json", result);
    code(&with_input(&path, &["verify"]))
}

#[test]
fn check_code_exit_codes_and_certificate() {
    let fx = Fixture::new();
    let out = bayonet(&["check-code", "--json", "aabb", "abaaa", "b", "ba"]);
    assert_eq!(code(&out), 1);
    let d = doc(&out);
    assert_eq!(d["command"], "check-code");
    assert_eq!(d["verdict"], "not_code");
    assert!(d.get("timing_ms").is_none());
    assert_eq!(verify(&fx, &d), 0);

    let mut tampered = d.clone();
    tampered["certificate"]["left"] = json!(["b", "b"]);
    assert_eq!(verify(&fx, &tampered), 1);

    let out = bayonet(&["check-code", "b", "ab", "aab"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("check-code: code"));
}

#[test]
fn words_from_file_and_stdin() {
    let fx = Fixture::new();
    let path = fx.file("words.txt", "aabb\nabaaa\nb\nba\n");
    assert_eq!(code(&with_input(&path, &["check-code"])), 1);

    let mut child = Command::new(env!("CARGO_BIN_EXE_bayonet"))
        .args(["check-code", "--input", "-", "--json"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"[\"b\", \"ab\"]").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(doc(&out)["verdict"], "code");
}

#[test]
fn json_output_is_stable_without_timing() {
    let a = bayonet(&["hajos", "number", "36", "--json"]);
    let b = bayonet(&["hajos", "number", "36", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let timed = doc(&bayonet(&["hajos", "number", "36", "--json", "--timing"]));
    assert!(timed["timing_ms"].is_u64());
}

#[test]
fn usage_and_input_errors_exit_3() {
    assert_eq!(code(&bayonet(&["no-such-command"])), 3);
    assert_eq!(code(&bayonet(&["check-code", "a1b"])), 3);
    assert_eq!(code(&bayonet(&["check-cbc"])), 3);
    let fx = Fixture::new();
    let bad = fx.file("bad.txt", "n=3\n0 0 0\n");
    assert_eq!(code(&with_input(&bad, &["check-cbc"])), 3);
    let missing = fx.dir.path().join("missing.txt");
    assert_eq!(code(&with_input(&missing, &["triangle"])), 3);
    assert_eq!(code(&bayonet(&["--help"])), 0);
}

#[test]
fn check_cbc_and_triangle() {
    let fx = Fixture::new();
    let y = fx.file("cbc8.txt", CBC8);
    let out = with_input(&y, &["check-cbc", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(doc(&out)["verdict"], "cbc");

    let not = fx.json_file("not.json", &json!({"n": 3, "pairs": [[0, 0], [1, 0], [0, 1]]}));
    let out = with_input(&not, &["check-cbc", "--json"]);
    assert_eq!(code(&out), 1);
    let d = doc(&out);
    assert_eq!(d["verdict"], "not_cbc");
    assert_eq!(verify(&fx, &d), 0);

    let out = with_input(&y, &["triangle", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(verify(&fx, &doc(&out)), 0);
}

#[test]
fn compose_compatible_stable() {
    let fx = Fixture::new();
    let fam = fx.json_file("fam.json", &e_pair());
    let out = with_input(&fam, &["compose", "--r", "2", "--json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(verify(&fx, &doc(&out)), 0);

    let out = with_input(&fam, &["compatible", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(doc(&out)["verdict"], "compatible");

    let out = with_input(&fam, &["stable", "--json"]);
    assert_eq!(code(&out), 0);
    let d = doc(&out);
    assert_eq!(d["verdict"], "stable");
    assert_eq!(d["certificate"].as_array().unwrap().len(), 4);
    assert_eq!(verify(&fx, &d), 0);
    let mut tampered = d.clone();
    tampered["certificate"].as_array_mut().unwrap().pop();
    assert_eq!(verify(&fx, &tampered), 1);

    let bad = fx.json_file(
        "bad.json",
        &json!([{"n": 3, "pairs": [[0, 0], [0, 1], [0, 2]]}, {"n": 3, "pairs": [[0, 0], [1, 0], [2, 0]]}]),
    );
    let out = with_input(&bad, &["compatible", "--json"]);
    assert_eq!(code(&out), 1);
    let d = doc(&out);
    assert_eq!(d["verdict"], "incompatible");
    assert_eq!(verify(&fx, &d), 0);
}

#[test]
fn border_find_and_check() {
    let fx = Fixture::new();
    let y = fx.file("cbc8.txt", CBC8);
    let out = with_input(&y, &["border", "find", "--json"]);
    assert_eq!(code(&out), 0);
    let d = doc(&out);
    assert_eq!(d["verdict"], "bordered");
    assert_eq!(verify(&fx, &d), 0);

    let out = with_input(&y, &["border", "check", "--p", "4,5,6,7", "--q", "1,5", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(doc(&out)["verdict"], "borders");

    let bd = fx.file("bd.txt", "n=8\nP=0,2,4,6\nQ=0,1\n");
    let out = with_input(&y, &["border", "check", "--border", bd.to_str().unwrap(), "--json"]);
    assert_eq!(code(&out), 1);
    let d = doc(&out);
    assert_eq!(d["verdict"], "not_bordered");
    assert_eq!(verify(&fx, &d), 0);

    let out = with_input(&y, &["border", "check", "--p", "0,1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn hajos_commands() {
    let fx = Fixture::new();
    let y = fx.file("cbc8.txt", CBC8);
    let out = with_input(&y, &["hajos", "cbc", "--json"]);
    assert_eq!(code(&out), 0);
    let d = doc(&out);
    assert_eq!(d["verdict"], "hajos");
    assert_eq!(d["certificate"][0]["t"], 4);
    assert_eq!(verify(&fx, &d), 0);
    let mut tampered = d.clone();
    tampered["certificate"][0]["shifts"] = json!([[0, 0, 1, 2]]);
    assert_eq!(verify(&fx, &tampered), 1);

    let fam = fx.json_file("fam.json", &e_pair());
    let out = with_input(&fam, &["hajos", "family", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(verify(&fx, &doc(&out)), 0);

    let out = bayonet(&["hajos", "number", "36"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("cbc_hajos:false"));
    assert_eq!(code(&bayonet(&["hajos", "number", "32"])), 0);
}

#[test]
fn krasner_commands() {
    let fx = Fixture::new();
    let out = bayonet(&["krasner", "enum", "12", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(verify(&fx, &doc(&out)), 0);

    let k = fx.file("k.txt", "n=4\nP=0,2\nQ=0,1\n");
    assert_eq!(code(&with_input(&k, &["krasner", "check"])), 0);
    let not = fx.file("not.txt", "n=6\nP=0,2,4\nQ=0,3\n");
    assert_eq!(code(&with_input(&not, &["krasner", "check"])), 1);

    let y = fx.file("cbc8.txt", CBC8);
    let out = with_input(&y, &["krasner", "equiv", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(verify(&fx, &doc(&out)), 0);

    let out = bayonet(&["krasner", "sweep", "4", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(doc(&out)["verdict"], "agree");
    assert_eq!(code(&bayonet(&["krasner", "sweep", "9"])), 2);
}

#[test]
fn phi_and_mu() {
    let fx = Fixture::new();
    let y = fx.file("cbc8.txt", CBC8);
    let out = with_input(&y, &["phi", "--d1", "3", "--d2", "3", "--p", "4,5,6,7", "--q", "1,5", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(doc(&out)["verdict"], "holds");
    let out = with_input(&y, &["phi", "--d1", "2", "--d2", "1", "--p", "4,5,6,7", "--q", "1,5"]);
    assert_eq!(code(&out), 3);

    let t = fx.file(
        "t.txt",
        "b\nbaa\nbaaaaaaaa\nbaaaaaaaaaa\nabaaaaaaaa\nabaaaaaaaaaa\naaaab\naaaabaa\naaaaab\naaaaabaaa\naaaaabaaaaaa\naaaaaaaaab\naaaaaaaaabaa\n",
    );
    let out = with_input(&t, &["mu-analyze", "--prime-bound", "5", "--json"]);
    assert_eq!(code(&out), 0);
    let d = doc(&out);
    assert_eq!(d["verdict"], "n_divisor=36");
    assert_eq!(verify(&fx, &d), 0);
}

#[test]
fn counterexample_bundle() {
    let fx = Fixture::new();
    let out = bayonet(&["counterexample", "--p1", "2", "--p2", "2", "--q1", "3", "--q2", "3", "--json"]);
    assert_eq!(code(&out), 0);
    let d = doc(&out);
    assert_eq!(d["verdict"], "non_hajos");
    assert_eq!(d["certificate"]["l"], json!([0, 4, 8, 9, 13, 17]));
    assert_eq!(verify(&fx, &d), 0);
    let out = bayonet(&["counterexample", "--p1", "2", "--p2", "4", "--q1", "3", "--q2", "3"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn completion_commands() {
    let fx = Fixture::new();
    let input = json!({
        "family": [{"n": 4, "pairs": [[0, 0], [0, 1], [1, 2], [3, 3]]}],
        "omegas": ["b"],
        "xs": [[[0, 0], [0, 1], [1, 2], [3, 3]]]
    });
    let path = fx.json_file("complete.json", &input);
    let out = with_input(&path, &["complete", "--json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let d = doc(&out);
    assert_eq!(d["verdict"], "prefix_suffix");
    assert_eq!(verify(&fx, &d), 0);

    let expansion = json!({
        "code": ["a", "b"], "n": 1, "t": 4,
        "rows": [{"omega": "b", "i": [0, 0, 1, 3], "j": [0, 0, 0, 0]}]
    });
    let path = fx.json_file("expansion.json", &expansion);
    let out = with_input(&path, &["complete", "--json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let d = doc(&out);
    assert_eq!(verify(&fx, &d), 0);
    let mut tampered = d.clone();
    tampered["input"]["rows"][0]["i"] = json!([0, 0, 1]);
    assert_eq!(verify(&fx, &tampered), 1);

    let out = bayonet(&["prefix-suffix", "aa", "ab", "abbab", "bbaa", "--json"]);
    assert_eq!(code(&out), 0);
    let d = doc(&out);
    assert_eq!(verify(&fx, &d), 0);
    let out = bayonet(&["prefix-suffix", "aaab", "aaba", "b", "ba"]);
    assert_eq!(code(&out), 1);

    let out = bayonet(&["inclusion", "--omega", "b", "--n", "4", "b", "ab", "aaba", "aaab", "--json"]);
    assert_eq!(code(&out), 0);
    let d = doc(&out);
    assert_eq!(d["verdict"], "included");
    assert_eq!(verify(&fx, &d), 0);
    let out = bayonet(&["inclusion", "--omega", "b", "--n", "5", "ab", "b", "baa"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn embed_exhaustion() {
    let fx = Fixture::new();
    let path = fx.json_file("embed.json", &json!({"n": 5, "required": [[[1, 0], [1, 2]], [[2, 0], [1, 0]]]}));
    let out = with_input(&path, &["embed", "--json"]);
    assert_eq!(code(&out), 1);
    let d = doc(&out);
    assert_eq!(d["verdict"], "not_embeddable");
    assert_eq!(verify(&fx, &d), 0);

    let path = fx.json_file("embed2.json", &json!({"n": 3, "required": [[[0, 0]], [[1, 0]]]}));
    let out = with_input(&path, &["embed", "--json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(verify(&fx, &doc(&out)), 0);

    let path = fx.json_file("embed3.json", &json!({"n": 7, "required": [[[0, 0]]]}));
    assert_eq!(code(&with_input(&path, &["embed"])), 2);
}

#[test]
fn verify_rejects_malformed_documents() {
    let fx = Fixture::new();
    let path = fx.file("junk.json", "{\"command\": 1}");
    assert_eq!(code(&with_input(&path, &["verify"])), 3);
}
