//! Command-line front end: argument parsing, dispatch, and report output.
//!
//! Exit codes: 0 success, 1 malformed or invalid input, 2 conditional
//! conclusion, 3 inconclusive.

pub mod document;
mod text;

use std::io::BufRead;

use clap::{Args, Parser, Subcommand, ValueEnum};
use morigal::arith::FactorBudget;
use morigal::finfield::{factor, FactorPattern, FqContext};
use morigal::galois::chebotarev::{
    compare_distribution, frobenius_sample_poly, sn_class_distribution, DEFAULT_TOLERANCE,
    MAX_CLASS_DEGREE,
};
use morigal::galois::oracle::subgroup_oracle;
use morigal::galois::{
    certify, certify_general_trinomial, verify, CertifyOptions, Conclusion, GaloisCertificate,
    DEFAULT_PRIME_BOUND,
};
use morigal::intpoly::{IntPolynomial, Trinomial};
use morigal::mori::{check_conditions, search_quadruples_par, validate_quadruple, MoriError, Span};
use morigal::numfield::{
    certify_k, generate_quadruple, splitting, validate_generalized_quadruple, verify_k,
    GenerationBounds, ImagQuadField,
};
use morigal::{with_field, DEFAULT_SEED};
use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use thiserror::Error;

pub use document::{Body, CertificateDocument, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_CONDITIONAL: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Default prime bound for `frobenius`.
pub const DEFAULT_FROBENIUS_BOUND: u64 = 100_000;

#[derive(Parser, Debug)]
#[command(
    name = "morigal",
    version,
    about = "Certify that Mori trinomials x^(2g+1) - bx - pc/4 have Galois group S_(2g+1)"
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for the randomized factorization steps.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Pollard-Brent iterations per composite cofactor.
    #[arg(long = "factor-budget", global = true)]
    pub factor_budget: Option<u64>,
    /// Prime bound for witness scans and Frobenius sampling.
    #[arg(long = "prime-bound", global = true)]
    pub prime_bound: Option<u64>,
    /// Worker threads for the parallel steps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the quadruple conditions; reads `g p b c` lines from stdin when
    /// no quadruple is given.
    Validate(QuadrupleArgs),
    /// Certify a quadruple, or a trinomial with --trinomial N B C.
    Certify(CertifyArgs),
    /// List the valid quadruples in a box.
    Search(SearchArgs),
    /// Factor the polynomials of a quadruple or trinomial over F_q.
    Reduce(ReduceArgs),
    /// Frobenius cycle-type statistics against the S_n class distribution.
    Frobenius(FrobeniusArgs),
    /// Enumerate the subgroups of S_n (odd n <= 7) and check the group fact.
    Oracle {
        #[arg(long)]
        n: usize,
    },
    /// Mori quadruples over imaginary quadratic fields of class number 1.
    Quadfield {
        #[command(subcommand)]
        action: QuadfieldAction,
    },
    /// Re-check a stored certificate document from its witnesses.
    Verify {
        /// Path to the JSON document, or `-` for stdin.
        path: String,
    },
}

#[derive(Args, Debug)]
pub struct QuadrupleArgs {
    /// g p b c
    #[arg(allow_negative_numbers = true, num_args = 0..=4)]
    pub values: Vec<String>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// g p b c
    #[arg(allow_negative_numbers = true, num_args = 0..=4)]
    pub values: Vec<String>,
    /// The trinomial x^N + Bx + C instead of a quadruple.
    #[arg(long, num_args = 3, value_names = ["N", "B", "C"], allow_negative_numbers = true)]
    pub trinomial: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct FrobeniusArgs {
    #[command(flatten)]
    pub input: CertifyArgs,
    /// Sample primes up to this bound (default --prime-bound, else 100000).
    #[arg(long)]
    pub bound: Option<u64>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Genus; also accepted as `--g`.
    #[arg(required_unless_present = "g_flag")]
    pub g: Option<u32>,
    #[arg(long = "g", conflicts_with = "g", hide = true)]
    pub g_flag: Option<u32>,
    /// Range `lo..hi` or a single value.
    #[arg(long = "p-range", visible_alias = "p", allow_hyphen_values = true)]
    pub p: String,
    #[arg(long = "b-range", visible_alias = "b", allow_hyphen_values = true)]
    pub b: String,
    #[arg(long = "c-range", visible_alias = "c", allow_hyphen_values = true)]
    pub c: String,
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub input: CertifyArgs,
    /// Characteristic of the field.
    #[arg(long, visible_alias = "ell")]
    pub modulus: String,
    /// Extension degree, 1 or 2.
    #[arg(long, default_value_t = 1)]
    pub degree: u32,
}

#[derive(Subcommand, Debug)]
pub enum QuadfieldAction {
    /// Certify a generalized quadruple.
    Certify {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        g: u32,
        /// Generator of the maximal ideal, e.g. `2+i` or `1+2*w`.
        #[arg(long = "p-gen", allow_hyphen_values = true)]
        p_gen: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
    /// Find the first generalized quadruple in scan order.
    Generate {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        g: u32,
        #[arg(long = "max-prime", default_value_t = 100)]
        max_prime: u64,
        #[arg(long = "max-height", default_value_t = 5)]
        max_height: u32,
    },
    /// List the maximal ideals above a rational prime.
    Split {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        p: String,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

type CliResult<T> = Result<T, CliError>;

fn input_err(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Captured result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Exit code for a conclusion.
pub fn conclusion_code(c: Conclusion) -> i32 {
    match c {
        Conclusion::FullSymmetric => EXIT_OK,
        Conclusion::ConditionalFullSymmetric => EXIT_CONDITIONAL,
        Conclusion::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

struct Context {
    opts: CertifyOptions,
    prime_bound: Option<u64>,
    argv: Vec<String>,
    timestamp: u64,
}

impl Context {
    fn document(&self, conclusion: Option<Conclusion>, body: Body) -> CertificateDocument {
        CertificateDocument {
            schema_version: SCHEMA_VERSION,
            command: self.argv.clone(),
            timestamp: self.timestamp,
            verification_seed: self.opts.seed,
            conclusion,
            body,
        }
    }
}

/// Runs the CLI on `args` (program name first), reading batch input from
/// `stdin`, and stamps documents with `timestamp`.
pub fn run<I, S>(args: I, stdin: &mut dyn BufRead, timestamp: u64) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let shown = e.to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome {
                    code: EXIT_OK,
                    stdout: shown,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: EXIT_INPUT,
                    stdout: String::new(),
                    stderr: shown,
                },
            };
        }
    };
    let mut budget = FactorBudget::default();
    if let Some(it) = cli.factor_budget {
        budget.rho_iterations = it;
    }
    let ctx = Context {
        opts: CertifyOptions {
            budget,
            seed: cli.seed,
            prime_bound: cli.prime_bound.unwrap_or(DEFAULT_PRIME_BOUND),
        },
        prime_bound: cli.prime_bound,
        argv: args.iter().skip(1).cloned().collect(),
        timestamp,
    };
    let format = cli.format;
    let input = if reads_stdin(&cli.command) {
        let mut s = String::new();
        if let Err(e) = stdin.read_to_string(&mut s) {
            return Outcome {
                code: EXIT_INPUT,
                stdout: String::new(),
                stderr: format!("error: reading standard input: {e}\n"),
            };
        }
        s
    } else {
        String::new()
    };
    let execute = || dispatch(&cli.command, &ctx, &input);
    let result = match cli.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => pool.install(execute),
            Err(e) => Err(input_err(format!("cannot start {j} workers: {e}"))),
        },
        None => execute(),
    };
    match result {
        Ok((code, doc)) => {
            let stdout = match format {
                Format::Json => serde_json::to_string_pretty(&doc).expect("serializable") + "\n",
                Format::Text => text::render(&doc),
            };
            Outcome {
                code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn reads_stdin(cmd: &Command) -> bool {
    match cmd {
        Command::Validate(a) => a.values.is_empty(),
        Command::Certify(a) => a.values.is_empty() && a.trinomial.is_none(),
        Command::Verify { path } => path == "-",
        _ => false,
    }
}

fn dispatch(cmd: &Command, ctx: &Context, stdin: &str) -> CliResult<(i32, CertificateDocument)> {
    match cmd {
        Command::Validate(a) => {
            if a.values.is_empty() {
                return batch(ctx, stdin, false);
            }
            let report = validation_report(&a.values, &ctx.opts.budget)?;
            let code = if report.valid { EXIT_OK } else { EXIT_INPUT };
            Ok((code, ctx.document(None, Body::Validation(report))))
        }
        Command::Certify(a) => {
            if let Some(t) = &a.trinomial {
                let (n, b, c) = parse_trinomial(t)?;
                let cert = certify_general_trinomial(n, &b, &c, &ctx.opts).map_err(|e| input_err(e.to_string()))?;
                return Ok(certificate_document(ctx, cert));
            }
            if a.values.is_empty() {
                return batch(ctx, stdin, true);
            }
            let (g, p, b, c) = parse_quadruple(&a.values)?;
            let q = validate_quadruple(g, &p, &b, &c, &ctx.opts.budget).map_err(|e| input_err(e.to_string()))?;
            Ok(certificate_document(ctx, certify(&q, &ctx.opts)))
        }
        Command::Search(a) => search(ctx, a),
        Command::Reduce(a) => reduce(ctx, a),
        Command::Frobenius(a) => frobenius(ctx, a),
        Command::Oracle { n } => {
            let report = subgroup_oracle(*n).map_err(|e| input_err(e.to_string()))?;
            let code = if report.property_holds { EXIT_OK } else { EXIT_INCONCLUSIVE };
            Ok((code, ctx.document(None, Body::Oracle(report))))
        }
        Command::Quadfield { action } => quadfield(ctx, action),
        Command::Verify { path } => verify_document(ctx, path, stdin),
    }
}

fn certificate_document(ctx: &Context, cert: GaloisCertificate) -> (i32, CertificateDocument) {
    let c = cert.conclusion;
    (conclusion_code(c), ctx.document(Some(c), Body::Certificate(Box::new(cert))))
}

fn parse_int(s: &str, what: &str) -> CliResult<BigInt> {
    s.trim().parse().map_err(|_| input_err(format!("{what}: {s:?} is not an integer")))
}

fn parse_quadruple(values: &[String]) -> CliResult<(u32, BigInt, BigInt, BigInt)> {
    let [g, p, b, c] = values else {
        return Err(input_err(format!("expected 4 integers g p b c, got {}", values.len())));
    };
    let g: u32 = g.trim().parse().map_err(|_| input_err(format!("g: {g:?} is not a nonnegative integer")))?;
    Ok((g, parse_int(p, "p")?, parse_int(b, "b")?, parse_int(c, "c")?))
}

fn parse_trinomial(values: &[String]) -> CliResult<(u32, BigInt, BigInt)> {
    let [n, b, c] = values else {
        return Err(input_err("expected N B C"));
    };
    let n: u32 = n.trim().parse().map_err(|_| input_err(format!("N: {n:?} is not a degree")))?;
    Ok((n, parse_int(b, "B")?, parse_int(c, "C")?))
}

fn validation_report(values: &[String], budget: &FactorBudget) -> CliResult<document::ValidationReport> {
    let (g, p, b, c) = parse_quadruple(values)?;
    let input = [g.to_string(), p.to_string(), b.to_string(), c.to_string()];
    Ok(match check_conditions(g, &p, &b, &c, budget) {
        Ok(cond) => document::ValidationReport {
            input,
            valid: cond.is_valid(),
            failures: cond.failures().iter().map(|s| s.to_string()).collect(),
            conditions: Some(cond),
            error: None,
        },
        Err(e) => document::ValidationReport {
            input,
            valid: false,
            conditions: None,
            failures: Vec::new(),
            error: Some(e.to_string()),
        },
    })
}

/// One quadruple per line; blank lines and lines starting with `#` skipped.
fn batch(ctx: &Context, stdin: &str, certify_each: bool) -> CliResult<(i32, CertificateDocument)> {
    let mut entries = Vec::new();
    for (i, line) in stdin.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let values: Vec<String> = trimmed.split_whitespace().map(String::from).collect();
        let mut entry = document::BatchEntry {
            line: i + 1,
            input: trimmed.to_string(),
            exit_code: EXIT_INPUT,
            validation: None,
            certificate: None,
            error: None,
        };
        if certify_each {
            match parse_quadruple(&values).and_then(|(g, p, b, c)| {
                validate_quadruple(g, &p, &b, &c, &ctx.opts.budget).map_err(|e: MoriError| input_err(e.to_string()))
            }) {
                Ok(q) => {
                    let cert = certify(&q, &ctx.opts);
                    entry.exit_code = conclusion_code(cert.conclusion);
                    entry.certificate = Some(Box::new(cert));
                }
                Err(e) => entry.error = Some(e.to_string()),
            }
        } else {
            match validation_report(&values, &ctx.opts.budget) {
                Ok(r) => {
                    entry.exit_code = if r.valid { EXIT_OK } else { EXIT_INPUT };
                    entry.validation = Some(r);
                }
                Err(e) => entry.error = Some(e.to_string()),
            }
        }
        entries.push(entry);
    }
    // Worst outcome wins: invalid input, then inconclusive, then conditional.
    let rank = |c: i32| match c {
        EXIT_INPUT => 3,
        EXIT_INCONCLUSIVE => 2,
        EXIT_CONDITIONAL => 1,
        _ => 0,
    };
    let code = entries.iter().map(|e| e.exit_code).max_by_key(|&c| rank(c)).unwrap_or(EXIT_OK);
    Ok((code, ctx.document(None, Body::Batch(entries))))
}

/// Parses `lo..hi` or a single integer.
pub fn parse_span(s: &str) -> CliResult<Span> {
    let bad = || input_err(format!("range {s:?} is not `lo..hi` or an integer"));
    match s.split_once("..") {
        Some((lo, hi)) => {
            let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: i64 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            Ok(Span::new(lo, hi))
        }
        None => {
            let v: i64 = s.trim().parse().map_err(|_| bad())?;
            Ok(Span::new(v, v))
        }
    }
}

fn search(ctx: &Context, a: &SearchArgs) -> CliResult<(i32, CertificateDocument)> {
    let g = a.g.or(a.g_flag).expect("clap requires g");
    if g == 0 {
        return Err(input_err("g must be positive"));
    }
    let (p, b, c) = (parse_span(&a.p)?, parse_span(&a.b)?, parse_span(&a.c)?);
    let found = search_quadruples_par(g, p, b, c, ctx.opts.budget);
    let count = found.len();
    let limit = a.limit.unwrap_or(usize::MAX);
    let quadruples = found
        .iter()
        .take(limit)
        .map(|q| [q.g.to_string(), q.p.to_string(), q.b.to_string(), q.c.to_string()])
        .collect();
    let report = document::SearchReport {
        g,
        p_range: [p.lo, p.hi],
        b_range: [b.lo, b.hi],
        c_range: [c.lo, c.hi],
        count,
        truncated: count > limit,
        quadruples,
    };
    Ok((EXIT_OK, ctx.document(None, Body::Search(report))))
}

/// The named polynomials of a quadruple (`f` and `u~`) or a trinomial (`u`).
fn input_polynomials(ctx: &Context, a: &CertifyArgs) -> CliResult<Vec<(String, IntPolynomial)>> {
    if let Some(t) = &a.trinomial {
        let (n, b, c) = parse_trinomial(t)?;
        let u = Trinomial::new(n, b, c).map_err(|e| input_err(e.to_string()))?;
        return Ok(vec![("u".into(), u.to_poly())]);
    }
    let (g, p, b, c) = parse_quadruple(&a.values)?;
    let q = validate_quadruple(g, &p, &b, &c, &ctx.opts.budget).map_err(|e| input_err(e.to_string()))?;
    Ok(vec![
        ("f".into(), q.mori_polynomial()),
        ("u~".into(), q.integral_trinomial().to_poly()),
    ])
}

fn reduce(ctx: &Context, a: &ReduceArgs) -> CliResult<(i32, CertificateDocument)> {
    let modulus: BigUint = a
        .modulus
        .trim()
        .parse()
        .map_err(|_| input_err(format!("modulus {:?} is not a natural number", a.modulus)))?;
    let field = FqContext::new(&modulus, a.degree).map_err(|e| input_err(e.to_string()))?;
    let polys = input_polynomials(ctx, &a.input)?;
    let mut out = Vec::new();
    for (name, poly) in polys {
        let reduced = with_field!(&field, f => {
            let red = poly.reduce_mod(f);
            if red.is_zero() {
                return Err(input_err(format!("{name} vanishes mod {modulus}")));
            }
            let factors = factor(f, &red, ctx.opts.seed).map_err(|e| input_err(e.to_string()))?;
            FactorPattern::from_factors(f, &factors)
        });
        out.push(document::ReducedPolynomial {
            polynomial: poly.to_string(),
            name,
            squarefree: reduced.is_squarefree(),
            degrees: reduced.degrees(),
            pattern: reduced,
        });
    }
    let report = document::ReductionReport {
        field: field.descriptor(),
        polynomials: out,
    };
    Ok((EXIT_OK, ctx.document(None, Body::Reduction(report))))
}

fn frobenius(ctx: &Context, a: &FrobeniusArgs) -> CliResult<(i32, CertificateDocument)> {
    let polys = input_polynomials(ctx, &a.input)?;
    let (_, poly) = polys.last().expect("at least one polynomial");
    let bound = a.bound.or(ctx.prime_bound).unwrap_or(DEFAULT_FROBENIUS_BOUND);
    if poly.discriminant().map_or(true, |d| d.is_zero()) {
        return Err(input_err("polynomial has a repeated factor"));
    }
    let histogram = frobenius_sample_poly(poly, bound);
    let comparison = (histogram.n <= MAX_CLASS_DEGREE && histogram.sample_size > 0)
        .then(|| compare_distribution(&histogram, &sn_class_distribution(histogram.n), DEFAULT_TOLERANCE));
    let code = match &comparison {
        Some(c) if c.within_tolerance => EXIT_OK,
        _ => EXIT_INCONCLUSIVE,
    };
    let report = document::FrobeniusReport {
        polynomial: poly.to_string(),
        histogram,
        comparison,
    };
    Ok((code, ctx.document(None, Body::Frobenius(report))))
}

fn quadfield(ctx: &Context, action: &QuadfieldAction) -> CliResult<(i32, CertificateDocument)> {
    let field = |d: i64| ImagQuadField::new(d).map_err(|e| input_err(e.to_string()));
    match action {
        QuadfieldAction::Certify { d, g, p_gen, b, c } => {
            let k = field(*d)?;
            let parse = |s: &str| k.parse(s).map_err(|e| input_err(e.to_string()));
            let q = validate_generalized_quadruple(&k, *g, &parse(p_gen)?, &parse(b)?, &parse(c)?, &ctx.opts.budget)
                .map_err(|e| input_err(e.to_string()))?;
            let cert = certify_k(&q, &ctx.opts);
            let concl = cert.conclusion;
            Ok((
                conclusion_code(concl),
                ctx.document(Some(concl), Body::FieldCertificate(Box::new(cert))),
            ))
        }
        QuadfieldAction::Generate {
            d,
            g,
            max_prime,
            max_height,
        } => {
            let k = field(*d)?;
            let bounds = GenerationBounds {
                max_prime: *max_prime,
                max_height: *max_height,
            };
            let q = generate_quadruple(&k, *g, &bounds, &ctx.opts.budget).map_err(|e| input_err(e.to_string()))?;
            Ok((EXIT_OK, ctx.document(None, Body::Generation(Box::new(q)))))
        }
        QuadfieldAction::Split { d, p } => {
            let k = field(*d)?;
            let p: BigUint = p.trim().parse().map_err(|_| input_err(format!("p: {p:?} is not a natural number")))?;
            if !morigal::arith::is_prime(&p).is_prime() {
                return Err(input_err(format!("{p} is not prime")));
            }
            let report = document::SplittingReport {
                d: *d,
                omega: k.omega_convention(),
                p: p.to_string(),
                ideals: splitting(&k, &p),
            };
            Ok((EXIT_OK, ctx.document(None, Body::Splitting(report))))
        }
    }
}

fn verify_document(ctx: &Context, path: &str, stdin: &str) -> CliResult<(i32, CertificateDocument)> {
    let raw = if path == "-" {
        stdin.to_string()
    } else {
        std::fs::read_to_string(path)?
    };
    let doc: CertificateDocument =
        serde_json::from_str(&raw).map_err(|e| input_err(format!("not a certificate document: {e}")))?;
    let (kind, stored, v) = match &doc.body {
        Body::Certificate(c) => ("certificate", c.conclusion, verify(c)),
        Body::FieldCertificate(c) => ("field_certificate", c.conclusion, verify_k(c)),
        _ => return Err(input_err("document does not contain a certificate")),
    };
    let mut problems = v.problems.clone();
    if doc.conclusion != Some(stored) {
        problems.push("envelope conclusion differs from the certificate".into());
    }
    let sound = v.matches_stored && problems.is_empty();
    let code = if sound { conclusion_code(v.conclusion) } else { EXIT_INCONCLUSIVE };
    let report = document::VerificationReport {
        certificate_kind: kind.into(),
        stored_conclusion: stored,
        recomputed_conclusion: v.conclusion,
        matches_stored: sound,
        problems,
    };
    Ok((code, ctx.document(Some(v.conclusion), Body::Verification(report))))
}
