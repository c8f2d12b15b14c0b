//! Plain-text rendering of documents.

use std::fmt::Write;

use morigal::finfield::FactorPattern;
use morigal::galois::{Conclusion, GaloisCertificate, IrreducibilityWitness};
use morigal::numfield::{KCertificate, MaximalIdeal};

use crate::document::{Body, CertificateDocument};

pub(crate) fn render(doc: &CertificateDocument) -> String {
    let mut out = String::new();
    match &doc.body {
        Body::Certificate(c) => certificate(&mut out, c),
        Body::FieldCertificate(c) => field_certificate(&mut out, c),
        Body::Validation(r) => {
            let _ = writeln!(out, "quadruple ({})", r.input.join(", "));
            if let Some(e) = &r.error {
                let _ = writeln!(out, "invalid: {e}");
            } else if r.valid {
                let _ = writeln!(out, "valid");
            } else {
                let _ = writeln!(out, "invalid: {}", r.failures.join(", "));
            }
            if let Some(c) = &r.conditions {
                if !c.c_congruent_minus_p_mod_4 {
                    let _ = writeln!(out, "note: c is not -p mod 4");
                }
            }
        }
        Body::Batch(entries) => {
            for e in entries {
                let status = if let Some(err) = &e.error {
                    format!("error: {err}")
                } else if let Some(c) = &e.certificate {
                    conclusion_line(c.conclusion, c.group.as_deref())
                } else if let Some(v) = &e.validation {
                    if v.valid {
                        "valid".into()
                    } else if let Some(err) = &v.error {
                        format!("invalid: {err}")
                    } else {
                        format!("invalid: {}", v.failures.join(", "))
                    }
                } else {
                    String::new()
                };
                let _ = writeln!(out, "line {}: {} -> {} (exit {})", e.line, e.input, status, e.exit_code);
            }
        }
        Body::Search(r) => {
            let _ = writeln!(out, "{} valid quadruples with g = {}", r.count, r.g);
            for q in &r.quadruples {
                let _ = writeln!(out, "({})", q.join(", "));
            }
            if r.truncated {
                let _ = writeln!(out, "(truncated)");
            }
        }
        Body::Reduction(r) => {
            let d = &r.field;
            let name = if d.k == 1 {
                format!("F_{}", d.p)
            } else {
                format!("F_{}^{}", d.p, d.k)
            };
            for p in &r.polynomials {
                let _ = writeln!(out, "{} = {}", p.name, p.polynomial);
                let _ = writeln!(out, "  over {name}: {}", pattern(&p.pattern));
                let _ = writeln!(
                    out,
                    "  degrees {:?}{}",
                    p.degrees,
                    if p.squarefree { "" } else { ", not squarefree" }
                );
            }
        }
        Body::Frobenius(r) => {
            let h = &r.histogram;
            let _ = writeln!(
                out,
                "{}: {} unramified primes up to {}",
                r.polynomial, h.sample_size, h.prime_bound
            );
            for (part, count) in &h.counts {
                let freq = *count as f64 / h.sample_size.max(1) as f64;
                let _ = writeln!(out, "  {part:?}: {count} ({freq:.4})");
            }
            match &r.comparison {
                Some(c) => {
                    let _ = writeln!(
                        out,
                        "max deviation from S_{} {:.4} (tolerance {}); {}",
                        h.n,
                        c.max_deviation,
                        c.tolerance,
                        if c.within_tolerance { "consistent" } else { "not consistent" }
                    );
                    if !c.missing.is_empty() {
                        let _ = writeln!(out, "  missing classes: {:?}", c.missing);
                    }
                }
                None => {
                    let _ = writeln!(out, "no comparison for degree {}", h.n);
                }
            }
        }
        Body::Oracle(r) => {
            let _ = writeln!(
                out,
                "S_{} (order {}): {}; {} subgroups enumerated",
                r.n,
                r.group_order,
                if r.property_holds { "property holds" } else { "property fails" },
                r.enumeration.subgroup_count
            );
            let e = &r.enumeration;
            let _ = writeln!(
                out,
                "{} conjugacy classes, {} transitive subgroups, {} with an (n-1)-cycle and a transposition",
                e.conjugacy_classes, e.transitive_subgroups, e.hypothesis_subgroups
            );
        }
        Body::Splitting(r) => {
            let _ = writeln!(out, "Q(sqrt({})), {}: primes above {}", r.d, r.omega, r.p);
            for i in &r.ideals {
                let _ = writeln!(out, "  {}", ideal(i));
            }
        }
        Body::Generation(q) => {
            let _ = writeln!(
                out,
                "Q(sqrt({})), g = {}, P = {}, b = {}, c = {}",
                q.field.d(),
                q.g,
                ideal(&q.prime),
                q.b,
                q.c
            );
            let _ = writeln!(out, "{}", q.omega);
            let _ = writeln!(out, "F = {}", q.polynomial_string());
        }
        Body::Verification(r) => {
            let _ = writeln!(
                out,
                "{}: stored {:?}, recomputed {:?}, {}",
                r.certificate_kind,
                r.stored_conclusion,
                r.recomputed_conclusion,
                if r.matches_stored { "verified" } else { "MISMATCH" }
            );
            for p in &r.problems {
                let _ = writeln!(out, "  problem: {p}");
            }
        }
    }
    out
}

fn conclusion_line(c: Conclusion, group: Option<&str>) -> String {
    match (c, group) {
        (Conclusion::FullSymmetric, Some(g)) => format!("Galois group {g}"),
        (Conclusion::ConditionalFullSymmetric, Some(g)) => format!("Galois group {g} (conditional)"),
        _ => "inconclusive".into(),
    }
}

fn pattern(p: &FactorPattern) -> String {
    p.entries
        .iter()
        .map(|e| {
            let coeffs = e.coeffs.iter().rev().cloned().collect::<Vec<_>>().join(", ");
            if e.multiplicity > 1 {
                format!("[{coeffs}]^{}", e.multiplicity)
            } else {
                format!("[{coeffs}]")
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn vertices(v: &[(usize, i64)]) -> String {
    v.iter().map(|(x, y)| format!("({x},{y})")).collect::<Vec<_>>().join("-")
}

fn ideal(i: &MaximalIdeal) -> String {
    format!(
        "({}) over {}, f = {}, e = {}",
        i.generator, i.p, i.residue_degree, i.ramification_index
    )
}

fn certificate(out: &mut String, c: &GaloisCertificate) {
    let _ = writeln!(out, "f = {}", c.polynomial);
    let _ = writeln!(out, "u = {}", c.integral_model);
    match &c.irreducibility_witness {
        Some(IrreducibilityWitness::NewtonPolygon { polygon, .. }) => {
            let _ = writeln!(out, "irreducible: 2-adic Newton polygon {}", vertices(&polygon.vertices));
        }
        Some(IrreducibilityWitness::FullCycle { prime, .. }) => {
            let _ = writeln!(out, "irreducible: modulo {prime}");
        }
        None => {
            let _ = writeln!(out, "irreducibility: no witness");
        }
    }
    match &c.cycle_witness {
        Some(w) => {
            let _ = writeln!(out, "(n-1)-cycle: pattern {:?} modulo {}", w.pattern.degrees(), w.prime);
        }
        None => {
            let _ = writeln!(out, "(n-1)-cycle: no witness");
        }
    }
    let d = &c.discriminant;
    let _ = writeln!(out, "discriminant {} = 2^{} * {}", d.delta, 2 * d.m, d.d0);
    let factors: Vec<String> = d
        .known_prime_factors
        .iter()
        .map(|p| {
            if p.exponent > 1 {
                format!("{}^{}", p.prime, p.exponent)
            } else {
                p.prime.to_string()
            }
        })
        .collect();
    if !factors.is_empty() {
        let _ = writeln!(out, "  |D0| factors: {}", factors.join(" * "));
    }
    match &c.transposition_witness {
        Some(w) => {
            let _ = writeln!(out, "transposition: double root {} modulo {}", w.gamma, w.ell);
        }
        None => {
            let _ = writeln!(out, "transposition: no witness");
        }
    }
    for chk in &c.transposition_checks {
        let _ = writeln!(
            out,
            "  ell = {}: {}",
            chk.ell,
            match (&chk.gamma, &chk.failure) {
                (Some(g), _) if chk.passed => format!("passed, gamma = {g}"),
                (_, Some(f)) => format!("failed: {f}"),
                _ => "failed".into(),
            }
        );
    }
    for n in &c.notes {
        let _ = writeln!(out, "note: {n}");
    }
    let _ = writeln!(out, "conclusion: {:?} ({})", c.conclusion, conclusion_line(c.conclusion, c.group.as_deref()));
}

fn field_certificate(out: &mut String, c: &KCertificate) {
    let _ = writeln!(out, "K = Q(sqrt({})), {}", c.field.d(), c.omega);
    let _ = writeln!(out, "F = {}", c.polynomial);
    let _ = writeln!(out, "U = x^{} + ({})*x + ({})", c.degree, c.linear, c.constant);
    let w = &c.irreducibility_witness;
    let _ = writeln!(
        out,
        "irreducible: Newton polygon {} at {}",
        vertices(&w.polygon.vertices),
        ideal(&w.ideal)
    );
    match &c.cycle_witness {
        Some(w) => {
            let _ = writeln!(out, "(n-1)-cycle: pattern {:?} at {}", w.pattern.degrees(), ideal(&w.ideal));
        }
        None => {
            let _ = writeln!(out, "(n-1)-cycle: no witness");
        }
    }
    let d = &c.discriminant;
    let _ = writeln!(out, "discriminant {} = 2^{} * {}, N(D0) = {}", d.delta, 2 * d.m, d.d0, d.norm_d0);
    match &c.transposition_witness {
        Some(w) => {
            let _ = writeln!(out, "transposition: double root {} at {}", w.gamma, ideal(&w.ideal));
        }
        None => {
            let _ = writeln!(out, "transposition: no witness");
        }
    }
    for n in &c.notes {
        let _ = writeln!(out, "note: {n}");
    }
    let _ = writeln!(out, "conclusion: {:?} ({})", c.conclusion, conclusion_line(c.conclusion, c.group.as_deref()));
}
