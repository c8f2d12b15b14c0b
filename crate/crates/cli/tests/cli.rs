use std::path::PathBuf;
use std::process::Command;

use morigal_cli::{run, Body, CertificateDocument, Outcome};

fn cli(args: &[&str]) -> Outcome {
    cli_stdin(args, "")
}

fn cli_stdin(args: &[&str], stdin: &str) -> Outcome {
    let argv = std::iter::once("morigal").chain(args.iter().copied());
    run(argv, &mut stdin.as_bytes(), 0)
}

fn json(args: &[&str]) -> (i32, CertificateDocument, String) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = cli(&full);
    let doc = serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}{}", out.stdout, out.stderr));
    (out.code, doc, out.stdout)
}

#[test]
fn certify_worked_example_exits_zero_with_ell_269() {
    let (code, doc, raw) = json(&["certify", "1", "3", "2", "1"]);
    assert_eq!(code, 0);
    let Body::Certificate(c) = &doc.body else { panic!("wrong body") };
    assert_eq!(format!("{:?}", c.conclusion), "FullSymmetric");
    assert_eq!(c.transposition_witness.as_ref().unwrap().ell.to_string(), "269");
    assert!(raw.contains("\"ell\": \"269\""));
    assert!(raw.contains("\"conclusion\": \"FullSymmetric\""));
}

#[test]
fn oracle_text_reports_156_subgroups() {
    let out = cli(&["oracle", "--n", "5"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("property holds; 156 subgroups enumerated"), "{}", out.stdout);
}

#[test]
fn invalid_quadruple_names_genus_divisibility() {
    let out = cli(&["certify", "2", "7", "3", "1"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("genus_divisibility"), "{}", out.stderr);
    let out = cli(&["validate", "2", "7", "3", "1"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("genus_divisibility"));
}

#[test]
fn malformed_input_exits_one() {
    assert_eq!(cli(&["certify", "1", "3", "2"]).code, 1);
    assert_eq!(cli(&["certify", "1", "x", "2", "1"]).code, 1);
    assert_eq!(cli(&["certify", "1", "4", "2", "1"]).code, 1);
    assert_eq!(cli(&["no-such-command"]).code, 1);
    assert_eq!(cli(&["--format", "yaml", "oracle", "--n", "5"]).code, 1);
    assert_eq!(cli(&["oracle", "--n", "4"]).code, 1);
    assert_eq!(cli(&["verify", "/nonexistent/cert.json"]).code, 1);
    assert_eq!(cli(&["quadfield", "split", "--d", "-5", "--p", "3"]).code, 1);
}

#[test]
fn help_exits_zero() {
    let out = cli(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("certify"));
}

#[test]
fn stdin_batch_reports_each_line() {
    let out = cli_stdin(&["validate"], "1 3 2 1\n\n# comment\n2 5 2 1\n");
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert_eq!(out.stdout.lines().count(), 2);
    let out = cli_stdin(&["--format", "json", "certify"], "1 3 2 1\n2 7 3 1\nnot numbers\n");
    assert_eq!(out.code, 1);
    let doc: CertificateDocument = serde_json::from_str(&out.stdout).unwrap();
    let Body::Batch(entries) = doc.body else { panic!("wrong body") };
    assert_eq!(entries.iter().map(|e| e.exit_code).collect::<Vec<_>>(), [0, 1, 1]);
    assert_eq!(entries.iter().map(|e| e.line).collect::<Vec<_>>(), [1, 2, 3]);
    assert!(entries[0].certificate.is_some());
    assert!(entries[1].error.as_deref().unwrap().contains("genus_divisibility"));
}

#[test]
fn general_trinomial_certifies() {
    let out = cli(&["certify", "--trinomial", "5", "-1", "-1"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("double root 13 modulo 19"), "{}", out.stdout);
}

#[test]
fn quadfield_example_and_helpers() {
    let (code, doc, _) = json(&["quadfield", "certify", "--d", "-1", "--g", "1", "--p-gen", "2+i", "--b", "2", "--c", "5"]);
    assert_eq!(code, 0);
    let Body::FieldCertificate(c) = &doc.body else { panic!("wrong body") };
    assert_eq!(c.discriminant.d0.to_string(), "-163");
    let w = c.transposition_witness.as_ref().unwrap();
    assert_eq!(w.gamma, "100");
    assert_eq!(w.ideal.generator.to_string(), "163");

    let out = cli(&["quadfield", "split", "--d", "-1", "--p", "5"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("(2+w)") && out.stdout.contains("(2-w)"), "{}", out.stdout);

    let out = cli(&["quadfield", "generate", "--d", "-7", "--g", "1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("g = 1"));
}

#[test]
fn search_and_reduce() {
    let (code, doc, _) = json(&["search", "--g", "1", "--p", "3..7", "--b", "1..4", "--c", "1..3"]);
    assert_eq!(code, 0);
    let Body::Search(s) = &doc.body else { panic!("wrong body") };
    assert!(s.quadruples.iter().any(|q| q == &["1", "3", "2", "1"]));

    let (code, doc, _) = json(&["reduce", "1", "3", "2", "1", "--modulus", "3"]);
    assert_eq!(code, 0);
    let Body::Reduction(r) = &doc.body else { panic!("wrong body") };
    assert_eq!(r.polynomials[1].degrees, vec![1, 2]);
    let (_, doc, _) = json(&["reduce", "1", "3", "2", "1", "--modulus", "269"]);
    let Body::Reduction(r) = &doc.body else { panic!("wrong body") };
    assert!(!r.polynomials[1].squarefree);
    let (_, doc, _) = json(&["reduce", "--trinomial", "3", "-8", "-6", "--modulus", "3", "--degree", "2"]);
    let Body::Reduction(r) = &doc.body else { panic!("wrong body") };
    assert_eq!(r.polynomials[0].degrees, vec![1, 1, 1]);
}

#[test]
fn frobenius_statistics_match_sn() {
    let out = cli(&["--prime-bound", "100000", "frobenius", "1", "3", "2", "1"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("consistent"));
}

#[test]
fn every_certificate_round_trips_and_reverifies() {
    let cases: &[&[&str]] = &[
        &["certify", "1", "3", "2", "1"],
        &["certify", "2", "5", "2", "1"],
        &["certify", "1", "3", "5", "3"],
        &["certify", "2", "5", "3", "5"],
        &["certify", "3", "7", "3", "1"],
        &["certify", "--trinomial", "5", "-1", "-1"],
        &["certify", "--trinomial", "7", "3", "5"],
        &["quadfield", "certify", "--d", "-1", "--g", "1", "--p-gen", "2+i", "--b", "2", "--c", "5"],
    ];
    for args in cases {
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(args);
        let out = cli(&full);
        assert_ne!(out.code, 1, "{args:?}: {}", out.stderr);
        let (code, raw) = (out.code, out.stdout);
        let doc: CertificateDocument = serde_json::from_str(&raw).unwrap();
        let again = serde_json::to_string_pretty(&doc).unwrap() + "\n";
        assert_eq!(raw, again, "{args:?} does not round-trip");
        let out = cli_stdin(&["--format", "json", "verify", "-"], &raw);
        let v: CertificateDocument = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v.conclusion, doc.conclusion, "{args:?}");
        assert_eq!(out.code, code, "{args:?}");
    }
}

#[test]
fn jobs_flag_gives_same_document() {
    let a = cli(&["--format", "json", "certify", "2", "5", "2", "1"]);
    let b = cli(&["--jobs", "1", "--format", "json", "certify", "2", "5", "2", "1"]);
    let strip = |s: &str| {
        let mut d: CertificateDocument = serde_json::from_str(s).unwrap();
        d.command.clear();
        d
    };
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_morigal");
    let status = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .env("SOURCE_DATE_EPOCH", "0")
            .output()
            .unwrap()
    };
    let ok = status(&["--format", "json", "certify", "1", "3", "2", "1"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("\"timestamp\": 0"));
    assert_eq!(status(&["certify", "2", "7", "3", "1"]).status.code(), Some(1));
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check_golden(name: &str, args: &[&str]) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = cli(&full);
    let path = golden_dir().join(format!("{name}.json"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(out.stdout, expected, "golden {name} changed");
    let doc: CertificateDocument = serde_json::from_str(&expected).unwrap();
    assert_eq!(serde_json::to_string_pretty(&doc).unwrap() + "\n", expected);
}

#[test]
fn golden_documents_are_stable() {
    check_golden("certify_1_3_2_1", &["certify", "1", "3", "2", "1"]);
    check_golden("certify_2_5_2_1", &["certify", "2", "5", "2", "1"]);
    check_golden("certify_trinomial_5_-1_-1", &["certify", "--trinomial", "5", "-1", "-1"]);
    check_golden(
        "quadfield_gaussian",
        &["quadfield", "certify", "--d", "-1", "--g", "1", "--p-gen", "2+i", "--b", "2", "--c", "5"],
    );
    check_golden("oracle_5", &["oracle", "--n", "5"]);
}
