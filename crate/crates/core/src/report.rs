//! The JSON report written by the command-line tool.

use serde::{Deserialize, Serialize};

use crate::braid::{is_knot_closure, require_knot, BraidWord};
use crate::error::{Error, Result};
use crate::fixpoint::{casson_lin, FixedPointRecord, Index, LambdaResult, NielsenBracket, SolverConfig, INDEX_CALIBRATION};
use crate::laurent::LaurentPoly;
use crate::markov::MarkovAudit;
use crate::oracle::{alexander, determinant, signature};
use crate::pillowcase::{
    exact_classes, gamma_curves, irreducible_count, signed_count, torus_lift, GammaCurves,
    PillowClass, TorusLift,
};
use crate::rep::Fingerprint;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
const UNDEFINED_LAMBDA: &str = "undefined(degenerate)";

/// `λ` as an integer, or the marker string when some class is degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaValue {
    Defined(i64),
    Undefined,
}

impl LambdaValue {
    pub fn value(self) -> Option<i64> {
        match self {
            LambdaValue::Defined(v) => Some(v),
            LambdaValue::Undefined => None,
        }
    }
}

impl From<Option<i64>> for LambdaValue {
    fn from(v: Option<i64>) -> Self {
        v.map_or(LambdaValue::Undefined, LambdaValue::Defined)
    }
}

impl Serialize for LambdaValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            LambdaValue::Defined(v) => s.serialize_i64(*v),
            LambdaValue::Undefined => s.serialize_str(UNDEFINED_LAMBDA),
        }
    }
}

impl<'de> Deserialize<'de> for LambdaValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(LambdaValue::Defined(v)),
            Raw::Text(t) if t == UNDEFINED_LAMBDA => Ok(LambdaValue::Undefined),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("invalid lambda {t:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub fingerprint: Fingerprint,
    pub index: Index,
    pub residual: f64,
}

impl From<&FixedPointRecord> for ClassEntry {
    fn from(r: &FixedPointRecord) -> Self {
        Self {
            fingerprint: r.fingerprint.clone(),
            index: r.index,
            residual: r.residual,
        }
    }
}

/// Coefficients of `Σ c_k t^{offset + k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlexanderBlock {
    pub offset: i64,
    pub coefficients: Vec<i64>,
}

impl AlexanderBlock {
    pub fn from_poly(p: &LaurentPoly) -> Result<Self> {
        let (offset, coefficients) = p
            .integer_coefficients()
            .ok_or_else(|| Error::Internal(format!("non-integral Alexander polynomial {p}")))?;
        Ok(Self {
            offset,
            coefficients,
        })
    }

    pub fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::from_ints(self.offset, &self.coefficients)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PillowcaseBlock {
    pub curves: GammaCurves,
    pub classes: Vec<PillowClass>,
    pub irreducible_classes: usize,
    pub signed_count: i64,
    pub lift: TorusLift,
}

impl PillowcaseBlock {
    pub fn compute(b: &BraidWord) -> Result<Self> {
        let classes = exact_classes(b)?;
        Ok(Self {
            curves: gamma_curves(b)?,
            irreducible_classes: irreducible_count(&classes),
            signed_count: signed_count(b)?,
            lift: torus_lift(b)?,
            classes,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub braid: String,
    pub strands: usize,
    pub is_knot: bool,
    pub classes: Vec<ClassEntry>,
    pub lambda: LambdaValue,
    /// Sign applied to raw orientation determinants; with it `λ = σ/2`.
    pub orientation_calibration: i32,
    pub signature: i64,
    pub determinant: u64,
    pub alexander: AlexanderBlock,
    pub nielsen_bracket: NielsenBracket,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub markov_audits: Option<Vec<MarkovAudit>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pillowcase: Option<PillowcaseBlock>,
    pub solver_config: SolverConfig,
    pub rng_seed: u64,
}

impl Report {
    /// Assembles a report from already computed pieces.
    pub fn new(
        command: &str,
        b: &BraidWord,
        result: &LambdaResult,
        signature: i64,
        determinant: u64,
        alexander: AlexanderBlock,
        cfg: &SolverConfig,
    ) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            braid: b.to_string(),
            strands: b.strands(),
            is_knot: is_knot_closure(b),
            classes: result.records.iter().map(ClassEntry::from).collect(),
            lambda: result.lambda.into(),
            orientation_calibration: INDEX_CALIBRATION,
            signature,
            determinant,
            alexander,
            nielsen_bracket: result.nielsen_bracket,
            markov_audits: None,
            pillowcase: None,
            solver_config: cfg.clone(),
            rng_seed: cfg.rng_seed,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Report(e.to_string()))
    }

    /// Parses a report, rejecting unknown fields and other schema versions.
    pub fn from_json(text: &str) -> Result<Self> {
        let r: Report = serde_json::from_str(text).map_err(|e| Error::Report(e.to_string()))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::Report(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                r.schema_version
            )));
        }
        Ok(r)
    }

    /// True when `λ` is undefined or equals half the signature.
    pub fn lambda_matches_signature(&self) -> bool {
        match self.lambda {
            LambdaValue::Defined(l) => 2 * l == self.signature,
            LambdaValue::Undefined => true,
        }
    }
}

/// Full pipeline for a knot braid: solver, signed count, classical
/// invariants, and the pillowcase block on two strands.
pub fn build_report(command: &str, b: &BraidWord, cfg: &SolverConfig) -> Result<Report> {
    require_knot(b)?;
    cfg.validate()?;
    let result = casson_lin(b, cfg)?;
    let alex = AlexanderBlock::from_poly(&alexander(b)?)?;
    let mut report = Report::new(command, b, &result, signature(b)?, determinant(b)?, alex, cfg);
    if b.strands() == 2 {
        report.pillowcase = Some(PillowcaseBlock::compute(b)?);
    }
    Ok(report)
}
