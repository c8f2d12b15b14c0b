//! Acceptance suite: one PASS/FAIL line per criterion, each checked against
//! its time budget. Exits nonzero when any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use morigal::arith::{is_prime_u64, primes_up_to, FactorBudget};
use morigal::finfield::{expected_double_root, multiplicity_profile, FiniteField, FqContext};
use morigal::galois::chebotarev::{compare_distribution, frobenius_sample, partitions, sn_class_distribution};
use morigal::galois::oracle::subgroup_oracle;
use morigal::galois::{certify, certify_general_trinomial, CertifyOptions, Conclusion, GaloisCertificate, IrreducibilityWitness};
use morigal::intpoly::{trinomial_discriminant, IntPolynomial};
use morigal::mori::{d0_closed_form, search_quadruples, validate_quadruple, MoriQuadruple, Span};
use morigal::numfield::{certify_k, validate_generalized_quadruple, ImagQuadField};
use morigal::with_field;
use morigal_cli::{run, Body, CertificateDocument};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn quad(g: u32, p: i64, b: i64, c: i64) -> Result<MoriQuadruple, String> {
    validate_quadruple(g, &p.into(), &b.into(), &c.into(), &FactorBudget::default()).map_err(|e| e.to_string())
}

fn polygon_vertices(c: &GaloisCertificate) -> Option<Vec<(usize, i64)>> {
    match &c.irreducibility_witness {
        Some(IrreducibilityWitness::NewtonPolygon { polygon, .. }) => Some(polygon.vertices.clone()),
        _ => None,
    }
}

/// The multiple factors of `x^n + Bx + C` mod `ell`: `(root, multiplicity)`
/// for linear ones, `None` for a nonlinear repeated factor.
fn double_roots(n: u32, b: &BigInt, c: &BigInt, ell: u64) -> Vec<Option<(String, u32)>> {
    let ctx = FqContext::prime(&BigUint::from(ell)).unwrap();
    with_field!(&ctx, f => {
        let red = IntPolynomial::trinomial(n, b, c).reduce_mod(f);
        multiplicity_profile(f, &red, 1)
            .unwrap()
            .into_iter()
            .map(|m| m.root.map(|r| (f.format_elem(&r), m.multiplicity)))
            .collect()
    })
}

fn criterion_1() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..500 {
        let n = rng.gen_range(2u32..=12);
        let mut coeff = || loop {
            let v = rng.gen_range(-1_000_000_000i64..=1_000_000_000);
            if v != 0 {
                return BigInt::from(v);
            }
        };
        let (b, c) = (coeff(), coeff());
        let closed = trinomial_discriminant(n, &b, &c).map_err(|e| e.to_string())?;
        let sub = IntPolynomial::trinomial(n, &b, &c).integer_discriminant().map_err(|e| e.to_string())?;
        ensure!(closed == sub, "case {i}: x^{n} + ({b})x + ({c}): {closed} vs {sub}");
    }
    Ok("500 trinomials, closed form = subresultant".into())
}

fn criterion_2() -> Check {
    let q = quad(1, 3, 2, 1)?;
    let c = certify(&q, &CertifyOptions::default());
    let u = &c.integral_model;
    ensure!(u.to_string() == "x^3 - 8x - 6", "u~ = {u}");
    let d = &c.discriminant;
    ensure!(d.delta == BigInt::from(1076) && d.m == 1 && d.d0 == BigInt::from(269), "Delta {} M {} D0 {}", d.delta, d.m, d.d0);
    let w = c.transposition_witness.as_ref().ok_or("no transposition witness")?;
    ensure!(w.ell == BigUint::from(269u32), "ell = {}", w.ell);
    let roots = double_roots(3, &u.linear, &u.constant, 269);
    ensure!(roots.len() == 1, "{} multiple factors mod 269", roots.len());
    let (root, mult) = roots[0].clone().ok_or("repeated factor not linear")?;
    ensure!(mult == 2 && root == w.gamma.to_string(), "root {root}^{mult}, witness {}", w.gamma);
    let cw = c.cycle_witness.as_ref().ok_or("no cycle witness")?;
    ensure!(cw.prime == BigUint::from(3u32) && cw.pattern.degrees() == [1, 2], "mod {} pattern {:?}", cw.prime, cw.pattern.degrees());
    ensure!(polygon_vertices(&c) == Some(vec![(0, -2), (3, 0)]), "polygon {:?}", polygon_vertices(&c));
    ensure!(c.conclusion == Conclusion::FullSymmetric && c.group.as_deref() == Some("S_3"), "{:?}", c.conclusion);
    ensure!(!d.is_square() && !c.ramification_report.discriminant_is_square, "Delta reported square");
    Ok(format!("ell = 269, gamma = {}, S_3", w.gamma))
}

fn criterion_3() -> Check {
    let q = quad(2, 5, 2, 1)?;
    let c = certify(&q, &CertifyOptions::default());
    ensure!(c.integral_model.to_string() == "x^5 - 32x - 40", "u~ = {}", c.integral_model);
    let d = &c.discriminant;
    ensure!(d.delta == BigInt::from(-589934592i64) && d.m == 6 && d.d0 == BigInt::from(-144027), "Delta {} D0 {}", d.delta, d.d0);
    let factors: Vec<(String, u32)> = d.known_prime_factors.iter().map(|p| (p.prime.to_string(), p.exponent)).collect();
    ensure!(
        factors == [("3".to_string(), 2), ("13".to_string(), 1), ("1231".to_string(), 1)],
        "|D0| factors {factors:?}"
    );
    let w = c.transposition_witness.as_ref().ok_or("no transposition witness")?;
    ensure!(w.ell == BigUint::from(13u32) && w.gamma == BigUint::from(9u32), "witness ({}, {})", w.ell, w.gamma);
    let c1231 = c.transposition_checks.iter().find(|k| k.ell == BigUint::from(1231u32)).ok_or("1231 not checked")?;
    ensure!(c1231.passed, "1231 failed: {:?}", c1231.failure);
    let cw = c.cycle_witness.as_ref().ok_or("no cycle witness")?;
    ensure!(cw.prime == BigUint::from(5u32) && cw.pattern.degrees() == [1, 4], "mod {} pattern {:?}", cw.prime, cw.pattern.degrees());
    ensure!(c.conclusion == Conclusion::FullSymmetric && c.group.as_deref() == Some("S_5"), "{:?}", c.conclusion);
    Ok("ell = 13, gamma = 9; 1231 passes; S_5".into())
}

fn criterion_4() -> Check {
    let c = certify_general_trinomial(5, &(-1).into(), &(-1).into(), &CertifyOptions::default()).map_err(|e| e.to_string())?;
    let d = &c.discriminant;
    ensure!(d.delta == BigInt::from(2869), "Delta = {}", d.delta);
    let primes: Vec<String> = d.known_prime_factors.iter().map(|p| p.prime.to_string()).collect();
    ensure!(primes == ["19", "151"], "factors {primes:?}");
    let w = c.transposition_witness.as_ref().ok_or("no transposition witness")?;
    ensure!(w.ell == BigUint::from(19u32) && w.gamma == BigUint::from(13u32), "witness ({}, {})", w.ell, w.gamma);
    ensure!(c.conclusion == Conclusion::FullSymmetric && c.group.as_deref() == Some("S_5"), "{:?}", c.conclusion);
    Ok("2869 = 19 * 151, double root 13 mod 19, S_5".into())
}

fn lemma_quadruples() -> Vec<MoriQuadruple> {
    let mut out = Vec::new();
    for g in 1..=5u32 {
        out.extend(search_quadruples(g, Span::new(3, 60), Span::new(1, 9), Span::new(1, 9), FactorBudget::default()).take(5));
    }
    out
}

fn criterion_5() -> Check {
    let qs = lemma_quadruples();
    ensure!(qs.len() >= 20, "only {} quadruples", qs.len());
    let gs: BTreeSet<u32> = qs.iter().map(|q| q.g).collect();
    ensure!(gs.len() == 5, "genera {gs:?}");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut primes, mut doubles) = (0, 0);
    for q in &qs {
        let u = q.integral_trinomial();
        // 200 random odd primes, then every odd prime dividing D0, where the
        // double roots occur.
        let mut ells = Vec::new();
        while ells.len() < 200 {
            let ell = rng.gen_range(3u64..1 << 32);
            if is_prime_u64(ell) {
                ells.push(ell);
            }
        }
        let dec = d0_closed_form(q, &FactorBudget::default()).map_err(|e| e.to_string())?;
        ells.extend(dec.known_prime_factors.iter().filter_map(|pp| u64::try_from(&pp.prime).ok()));
        for &ell in &ells {
            let ctx = FqContext::prime(&BigUint::from(ell)).unwrap();
            let res: Result<bool, String> = with_field!(&ctx, f => {
                let red = u.to_poly().reduce_mod(f);
                let profile = multiplicity_profile(f, &red, 1).map_err(|e| e.to_string())?;
                match profile.as_slice() {
                    [] => Ok(false),
                    [m] => {
                        ensure!(m.multiplicity == 2, "{q} mod {ell}: multiplicity {}", m.multiplicity);
                        let root = m.root.clone().ok_or(format!("{q} mod {ell}: nonlinear repeated factor"))?;
                        ensure!(!f.is_zero(&root), "{q} mod {ell}: zero double root");
                        let expected = expected_double_root(f, u.n as u64, &f.from_int(&u.linear), &f.from_int(&u.constant))
                            .map_err(|e| e.to_string())?;
                        ensure!(root == expected, "{q} mod {ell}: root differs from -nC/((n-1)B)");
                        Ok(true)
                    }
                    _ => Err(format!("{q} mod {ell}: {} multiple factors", profile.len())),
                }
            });
            doubles += res? as usize;
        }
        primes += ells.len();
    }
    ensure!(doubles >= qs.len(), "only {doubles} double roots seen");
    Ok(format!("{} quadruples, {primes} primes, {doubles} double roots", qs.len()))
}

/// Subgroup count of `S_n` by closing every pair of permutations.
fn pair_closure_count(n: usize) -> usize {
    let mut perms: Vec<Vec<u8>> = vec![vec![0]];
    for k in 1..n {
        perms = perms
            .into_iter()
            .flat_map(|p| (0..=k).map(move |i| {
                let mut q = p.clone();
                q.insert(i, k as u8);
                q
            }))
            .collect();
    }
    let compose = |a: &[u8], b: &[u8]| -> Vec<u8> { b.iter().map(|&i| a[i as usize]).collect() };
    let mut seen: HashSet<BTreeSet<Vec<u8>>> = HashSet::new();
    for a in &perms {
        for b in &perms {
            let id: Vec<u8> = (0..n as u8).collect();
            let mut group = BTreeSet::from([id.clone()]);
            let mut stack = vec![id];
            while let Some(x) = stack.pop() {
                for g in [a, b] {
                    let y = compose(&x, g);
                    if group.insert(y.clone()) {
                        stack.push(y);
                    }
                }
            }
            seen.insert(group);
        }
    }
    seen.len()
}

fn criterion_6() -> Check {
    let mut parts = Vec::new();
    for n in [3usize, 5, 7] {
        let r = subgroup_oracle(n).map_err(|e| e.to_string())?;
        ensure!(r.property_holds, "property fails for n = {n}");
        parts.push(format!("S_{n}: {}", r.enumeration.subgroup_count));
        if n == 5 {
            ensure!(r.enumeration.subgroup_count == 156, "S_5 has {} subgroups", r.enumeration.subgroup_count);
            let independent = pair_closure_count(5);
            ensure!(independent == 156, "pair closure found {independent}");
        }
    }
    Ok(format!("property holds; {}", parts.join(", ")))
}

fn criterion_7() -> Check {
    let q = quad(2, 5, 2, 1)?;
    let bound = 100_000;
    let total = primes_up_to(bound).len();
    ensure!(total == 9592, "{total} primes below {bound}");
    let hist = frobenius_sample(&q.integral_trinomial(), bound);
    let cmp = compare_distribution(&hist, &sn_class_distribution(5), 0.02);
    ensure!(cmp.within_tolerance && cmp.max_deviation < 0.02, "max deviation {}", cmp.max_deviation);
    for part in partitions(5) {
        ensure!(hist.count(&part) > 0, "cycle type {part:?} never observed");
    }
    Ok(format!("{} of {total} primes sampled, L-inf deviation {:.4}", hist.sample_size, cmp.max_deviation))
}

fn criterion_8() -> Check {
    let mut qs = lemma_quadruples();
    for g in 1..=4u32 {
        qs.extend(search_quadruples(g, Span::new(3, 50), Span::new(-10, 10), Span::new(-7, 7), FactorBudget::default()));
    }
    for q in &qs {
        let delta = q.integral_trinomial().to_poly().integer_discriminant().map_err(|e| e.to_string())?;
        let m = q.g * (2 * q.g - 1);
        let (d0, r) = delta.div_rem(&(BigInt::from(1) << (2 * m)));
        ensure!(r.is_zero(), "{q}: 4^M does not divide Delta");
        ensure!(d0.mod_floor(&BigInt::from(4)) == BigInt::from(1), "{q}: D0 = {d0}");
        ensure!(!(&d0 % q.p_int()).is_zero(), "{q}: p divides D0 = {d0}");
    }
    Ok(format!("{} quadruples", qs.len()))
}

fn criterion_9() -> Check {
    let k = ImagQuadField::new(-1).map_err(|e| e.to_string())?;
    let el = |s: &str| k.parse(s).map_err(|e| e.to_string());
    let q = validate_generalized_quadruple(&k, 1, &el("2+i")?, &el("2")?, &el("5")?, &FactorBudget::default())
        .map_err(|e| e.to_string())?;
    let c = certify_k(&q, &CertifyOptions::default());
    ensure!(c.discriminant.d0.to_string() == "-163", "D0 = {}", c.discriminant.d0);
    let w = c.transposition_witness.as_ref().ok_or("no transposition witness")?;
    ensure!(w.ideal.generator.to_string() == "163", "ideal ({})", w.ideal.generator);
    ensure!(w.gamma == "100", "gamma = {}", w.gamma);
    ensure!(c.conclusion == Conclusion::FullSymmetric && c.group.as_deref() == Some("S_3"), "{:?}", c.conclusion);
    Ok("D0 = -163, ideal (163), double root 100, S_3".into())
}

fn cli(args: &[&str], stdin: &str) -> morigal_cli::Outcome {
    run(std::iter::once("morigal").chain(args.iter().copied()), &mut stdin.as_bytes(), 0)
}

fn criterion_10() -> Check {
    let mut cases: Vec<Vec<String>> = lemma_quadruples()
        .iter()
        .map(|q| ["certify".to_string(), q.g.to_string(), q.p.to_string(), q.b.to_string(), q.c.to_string()].to_vec())
        .collect();
    for extra in [
        "certify --trinomial 5 -1 -1",
        "certify --trinomial 7 3 5",
        "quadfield certify --d -1 --g 1 --p-gen 2+i --b 2 --c 5",
        "quadfield certify --d -1 --g 2 --p-gen 2+i --b 2 --c 5",
    ] {
        cases.push(extra.split(' ').map(String::from).collect());
    }
    for case in &cases {
        let mut args = vec!["--format", "json"];
        args.extend(case.iter().map(String::as_str));
        let out = cli(&args, "");
        ensure!(out.code != 1, "{case:?}: {}", out.stderr);
        let doc: CertificateDocument = serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
        ensure!(matches!(doc.body, Body::Certificate(_) | Body::FieldCertificate(_)), "{case:?}: no certificate");
        let again = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())? + "\n";
        ensure!(again == out.stdout, "{case:?}: JSON does not round-trip");
        let v = cli(&["--format", "json", "verify", "-"], &out.stdout);
        let vdoc: CertificateDocument = serde_json::from_str(&v.stdout).map_err(|e| format!("{e}: {}", v.stderr))?;
        let Body::Verification(report) = &vdoc.body else { return Err("verify gave no report".into()) };
        ensure!(
            report.matches_stored && vdoc.conclusion == doc.conclusion && v.code == out.code,
            "{case:?}: verify disagrees: {:?}",
            report.problems
        );
    }
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let goldens: [(&str, &[&str]); 5] = [
        ("certify_1_3_2_1", &["certify", "1", "3", "2", "1"]),
        ("certify_2_5_2_1", &["certify", "2", "5", "2", "1"]),
        ("certify_trinomial_5_-1_-1", &["certify", "--trinomial", "5", "-1", "-1"]),
        ("quadfield_gaussian", &["quadfield", "certify", "--d", "-1", "--g", "1", "--p-gen", "2+i", "--b", "2", "--c", "5"]),
        ("oracle_5", &["oracle", "--n", "5"]),
    ];
    for (name, args) in goldens {
        let expected = std::fs::read_to_string(golden.join(format!("{name}.json"))).map_err(|e| format!("{name}: {e}"))?;
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(args);
        ensure!(cli(&full, "").stdout == expected, "golden {name} differs");
    }
    Ok(format!("{} certificates re-verified, 5 goldens stable", cases.len()))
}

fn main() {
    let criteria: [(u32, &str, fn() -> Check, Duration); 10] = [
        (1, "discriminant agreement", criterion_1, Duration::from_secs(10)),
        (2, "worked example (1,3,2,1)", criterion_2, Duration::from_secs(1)),
        (3, "worked example (2,5,2,1)", criterion_3, Duration::from_secs(1)),
        (4, "x^5 - x - 1", criterion_4, Duration::from_secs(1)),
        (5, "double-root lemma suite", criterion_5, Duration::from_secs(60)),
        (6, "subgroup oracle n = 3, 5, 7", criterion_6, Duration::from_secs(300)),
        (7, "Chebotarev statistics", criterion_7, Duration::from_secs(30)),
        (8, "D0 = 1 mod 4, p does not divide D0", criterion_8, Duration::from_secs(60)),
        (9, "Gaussian example", criterion_9, Duration::from_secs(2)),
        (10, "certificate round trip and goldens", criterion_10, Duration::from_secs(120)),
    ];
    // Under `cargo test <filter>` only run when the filter names this suite.
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if args.iter().any(|a| !"acceptance".contains(a.as_str())) {
        return;
    }
    let mut failed = 0;
    for (id, name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over budget {budget:?}")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} [{id:>2}] {name} ({:.3}s): {detail}", elapsed.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
