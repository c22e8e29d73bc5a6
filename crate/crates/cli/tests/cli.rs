use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn motive(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_motive")).args(args).output().expect("binary runs")
}

fn write_input(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{}: {}", e, String::from_utf8_lossy(&out.stdout)))
}

const KUMMER_11: &str = "p = 11\nkind = \"kummer\"\nu = [[2]]\n\n[bundle]\nl = [[3]]\nc = [5]\n";

#[test]
fn pic_of_rank_one_motive_is_z() {
    let path = write_input("pic_z.toml", KUMMER_11);
    let out = motive(&["pic", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["results"]["group"]["display"], "Z");
    assert_eq!(v["results"]["group"]["free_rank"], 1);
    assert_eq!(v["results"]["group"]["torsion"], Value::Array(vec![]));
}

#[test]
fn report_digest_is_sha256_of_input() {
    let path = write_input("digest.toml", KUMMER_11);
    let v = json_of(&motive(&["dual", path.to_str().unwrap(), "--json"]));
    let expected = hex::encode(Sha256::digest(KUMMER_11.as_bytes()));
    assert_eq!(v["input_sha256"], expected.as_str());
    assert_eq!(v["schema"], "motive-report/1");
}

#[test]
fn json_is_byte_identical_for_fixed_seed() {
    let path = write_input("repeat.toml", KUMMER_11);
    for args in [
        vec!["phi-prime", path.to_str().unwrap(), "--json", "--seed", "7"],
        vec!["check", "compare", "--instances", "6", "--json", "--seed", "3"],
        vec!["check", "tga", "--instances", "4", "--json", "--seed", "3"],
    ] {
        let a = motive(&args);
        let b = motive(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{:?}", args);
    }
}

#[test]
fn phi_and_phi_prime_agree_on_rank_one_bundle() {
    let path = write_input("phi.toml", KUMMER_11);
    let direct = json_of(&motive(&["phi", path.to_str().unwrap(), "--json"]));
    assert_eq!(direct["results"]["phi"]["lattice"], serde_json::json!([[3]]));
    assert_eq!(direct["results"]["phi"]["torus"], serde_json::json!([[3]]));
    let cubical = json_of(&motive(&["phi-prime", path.to_str().unwrap(), "--json"]));
    assert_eq!(cubical["results"]["agree"], true);
    assert_eq!(cubical["results"]["phi_prime"], direct["results"]["phi"]);
}

#[test]
fn phi_not_surjective_demo_table() {
    let out = motive(&["demo", "phi-not-surjective", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["verified"], true);
    let cases = v["results"]["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 2);
    for (case, p) in cases.iter().zip([11u64, 101]) {
        assert_eq!(case["p"], p);
        assert_eq!(case["hom"]["display"], "Z^2");
        assert_eq!(case["pic"]["display"], format!("Z/{} x Z", p - 1));
        for row in case["table"].as_array().unwrap() {
            assert_eq!(row["phi"], serde_json::json!([row["n"], row["n"]]));
        }
    }
}

#[test]
fn not_exact_demo_reports_witness() {
    let out = motive(&["demo", "not-exact", "--json", "--prime", "101", "--k", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_of(&out)["results"];
    assert_eq!(r["theta"], serde_json::json!([[3]]));
    assert_eq!(r["restriction_trivial"], true);
    assert_eq!(r["in_image_of_beta"], false);
}

#[test]
fn not_exact_demo_with_trivial_character_fails_verification() {
    let out = motive(&["demo", "not-exact", "--k", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn suites_pass_on_small_runs() {
    for suite in ["exact-kernel", "tga", "cube", "compare"] {
        let out = motive(&["check", suite, "--instances", "4", "--samples", "10", "--json"]);
        assert_eq!(out.status.code(), Some(0), "{}", suite);
        let v = json_of(&out);
        assert_eq!(v["results"]["failed"], 0);
        let digests: Vec<&str> = v["results"]["instances"].as_array().unwrap().iter().map(|i| i["digest"].as_str().unwrap()).collect();
        assert!(digests.windows(2).all(|w| w[0] < w[1]), "instances sorted by digest");
    }
}

#[test]
fn abelian_motive_commands() {
    let body = "p = 101\nkind = \"abelian\"\ncurve = [2, 3]\npoints = [[3, 6]]\n\n[bundle]\ndivisor = [{ point = \"O\", n = 12 }]\nc = [7]\n";
    let path = write_input("abelian.toml", body);
    let pic = json_of(&motive(&["pic", path.to_str().unwrap(), "--json"]));
    assert_eq!(pic["results"]["pic_curve"]["display"], "Z/96 x Z");
    assert_eq!(pic["results"]["degree_generator"], 12);
    let out = motive(&["phi", path.to_str().unwrap(), "--json", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["results"]["is_morphism"], true);
    assert_eq!(motive(&["hom", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(motive(&["phi-prime", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_with_two() {
    let cases = [
        ("composite.toml", "p = 12\nkind = \"kummer\"\nu = [[2]]\n"),
        ("zero_unit.toml", "p = 11\nkind = \"kummer\"\nu = [[0]]\n"),
        ("kind.toml", "p = 11\nkind = \"semiabelian\"\nu = [[2]]\n"),
        ("ragged.toml", "p = 11\nkind = \"kummer\"\nu = [[2, 3], [4]]\n"),
        ("asym.toml", "p = 101\nkind = \"kummer\"\nu = [[2, 3], [5, 7]]\n\n[bundle]\nl = [[1, 0], [0, 0]]\nc = [1, 1]\n"),
        ("off_curve.toml", "p = 101\nkind = \"abelian\"\ncurve = [2, 3]\npoints = [[0, 0]]\n"),
        ("bad_degree.toml", "p = 101\nkind = \"abelian\"\ncurve = [2, 3]\npoints = [[3, 6]]\n\n[bundle]\ndivisor = [{ point = \"O\", n = 5 }]\nc = [1]\n"),
        ("syntax.toml", "p = = 11\n"),
    ];
    for (name, body) in cases {
        let path = write_input(name, body);
        let out = motive(&["pic", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{}: {}", name, String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(motive(&["pic", "/nonexistent/motive.toml"]).status.code(), Some(2));
    assert_eq!(motive(&["phi", write_input("nobundle.toml", "p = 11\nkind = \"kummer\"\nu = [[2]]\n").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(motive(&["check", "nonsense"]).status.code(), Some(2));
}

#[test]
fn large_integers_accepted_as_strings() {
    let body = "p = 11\nkind = \"kummer\"\nu = [[2]]\n\n[bundle]\nl = [[\"100000000000000000000000000003\"]]\nc = [5]\n";
    let path = write_input("big.toml", body);
    let v = json_of(&motive(&["phi", path.to_str().unwrap(), "--json"]));
    assert_eq!(v["results"]["phi"]["lattice"], serde_json::json!([["100000000000000000000000000003"]]));
}
