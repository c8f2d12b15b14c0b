//! The JSON envelope written by every subcommand, and the report bodies.

use morigal::finfield::{FactorPattern, FieldDescriptor};
use morigal::galois::chebotarev::{CycleTypeHistogram, DistributionComparison};
use morigal::galois::oracle::OracleReport;
use morigal::galois::{Conclusion, GaloisCertificate};
use morigal::mori::QuadrupleConditions;
use morigal::numfield::{GeneralizedQuadruple, KCertificate, MaximalIdeal};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema_version: u32,
    /// The arguments the document was produced with, program name omitted.
    pub command: Vec<String>,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` when set.
    pub timestamp: u64,
    /// Seed for every randomized step; rerunning with it reproduces the body.
    pub verification_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<Conclusion>,
    pub body: Body,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "report", rename_all = "snake_case")]
pub enum Body {
    Certificate(Box<GaloisCertificate>),
    FieldCertificate(Box<KCertificate>),
    Validation(ValidationReport),
    Batch(Vec<BatchEntry>),
    Search(SearchReport),
    Reduction(ReductionReport),
    Frobenius(FrobeniusReport),
    Oracle(OracleReport),
    Splitting(SplittingReport),
    Generation(Box<GeneralizedQuadruple>),
    Verification(VerificationReport),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub input: [String; 4],
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conditions: Option<QuadrupleConditions>,
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// One line of a batch read from standard input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchEntry {
    pub line: usize,
    pub input: String,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Box<GaloisCertificate>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub g: u32,
    pub p_range: [i64; 2],
    pub b_range: [i64; 2],
    pub c_range: [i64; 2],
    pub count: usize,
    pub truncated: bool,
    /// `[g, p, b, c]` as decimal strings.
    pub quadruples: Vec<[String; 4]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedPolynomial {
    pub name: String,
    pub polynomial: String,
    pub squarefree: bool,
    pub pattern: FactorPattern,
    /// Degrees of the irreducible factors, with multiplicity, ascending.
    pub degrees: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub field: FieldDescriptor,
    pub polynomials: Vec<ReducedPolynomial>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusReport {
    pub polynomial: String,
    pub histogram: CycleTypeHistogram,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparison: Option<DistributionComparison>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingReport {
    pub d: i64,
    pub omega: String,
    pub p: String,
    pub ideals: Vec<MaximalIdeal>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub certificate_kind: String,
    pub stored_conclusion: Conclusion,
    pub recomputed_conclusion: Conclusion,
    pub matches_stored: bool,
    pub problems: Vec<String>,
}
