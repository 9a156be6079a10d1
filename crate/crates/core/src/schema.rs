//! JSON documents for theorems, terms, certificate files and proof
//! transcripts.
//!
//! Every mathematical value is a string in the expression syntax of
//! [`parse_rational`]; `z` may also be a JSON integer.
//!
//! ```json
//! {
//!   "name": "kummer",
//!   "upper": ["a", "b"],
//!   "lower": ["1+a-b"],
//!   "z": -1,
//!   "rhs_gammas": [{"sign": 1, "arg": "1+a/2"}, {"sign": -1, "arg": "1+a"}],
//!   "conditions": ["Re(b) < 1"]
//! }
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{parse_polynomial, parse_rational, ParseError, Polynomial, RationalFunction, Symbol};
use crate::asympt::{ConditionError, Conditions, ConvergenceCondition, LimitKind};
use crate::hyperterm::{AffineArg, ConstantPower, GammaFactor, HyperTerm, TermError, TheoremSpec};
use crate::prover::{ClosureKind, ProofTranscript, Step, Verdict};
use crate::telescope::Recurrence;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("in {field}: {source}")]
    Parse { field: String, source: ParseError },
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error("{0}")]
    Invalid(String),
}

/// `z` as written: a JSON integer or an expression string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    fn to_rational(&self, field: &str) -> Result<RationalFunction, SchemaError> {
        match self {
            Scalar::Int(i) => Ok(RationalFunction::int(*i)),
            Scalar::Text(s) => rational(s, field),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaDoc {
    pub sign: i32,
    pub arg: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    pub name: String,
    pub upper: Vec<String>,
    pub lower: Vec<String>,
    pub z: Scalar,
    pub rhs_gammas: Vec<GammaDoc>,
    #[serde(default)]
    pub conditions: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerDoc {
    pub base: String,
    pub exponent: String,
}

/// A hypergeometric term `base^k * prod Γ(arg)^sign * prefactor * prod base^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    #[serde(default = "one_string")]
    pub base: String,
    #[serde(default)]
    pub gammas: Vec<GammaDoc>,
    #[serde(default = "one_string")]
    pub prefactor: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constant_bases: Vec<PowerDoc>,
}

fn one_string() -> String {
    "1".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftDoc {
    pub param: String,
    pub step: u32,
}

/// Input of `verify`: a term `F(n,k)`, given directly or as a theorem plus
/// a shift, and a candidate certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theorem: Option<SpecDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<ShiftDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub term: Option<TermDoc>,
    pub certificate: String,
}

fn rational(s: &str, field: &str) -> Result<RationalFunction, SchemaError> {
    parse_rational(s).map_err(|source| SchemaError::Parse { field: field.into(), source })
}

fn polynomial(s: &str, field: &str) -> Result<Polynomial, SchemaError> {
    parse_polynomial(s).map_err(|source| SchemaError::Parse { field: field.into(), source })
}

fn gamma(g: &GammaDoc, field: &str) -> Result<GammaFactor, SchemaError> {
    if g.sign == 0 || g.sign.abs() > 64 {
        return Err(SchemaError::Invalid(format!("{field}: sign must be a nonzero integer of magnitude <= 64")));
    }
    let arg = AffineArg::from_poly(&polynomial(&g.arg, field)?)?;
    Ok(GammaFactor::new(arg, g.sign))
}

fn gamma_doc(g: &GammaFactor) -> GammaDoc {
    GammaDoc { sign: g.exponent, arg: g.arg.to_poly().to_string() }
}

impl SpecDoc {
    pub fn to_spec(&self) -> Result<TheoremSpec, SchemaError> {
        let upper = self.upper.iter().map(|s| polynomial(s, "upper")).collect::<Result<Vec<_>, _>>()?;
        let lower = self.lower.iter().map(|s| polynomial(s, "lower")).collect::<Result<Vec<_>, _>>()?;
        let z = self.z.to_rational("z")?;
        let rhs_gammas = self.rhs_gammas.iter().map(|g| gamma(g, "rhs_gammas")).collect::<Result<Vec<_>, _>>()?;
        let conditions = self.conditions.iter().map(|c| ConvergenceCondition::parse(c)).collect::<Result<Vec<_>, _>>()?;
        let spec = TheoremSpec { name: self.name.clone(), upper, lower, z, rhs_gammas, conditions };
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_spec(spec: &TheoremSpec) -> SpecDoc {
        let z = match spec.z.as_constant().filter(|q| q.is_integer()).and_then(|q| num_traits::ToPrimitive::to_i64(&q.to_integer())) {
            Some(i) => Scalar::Int(i),
            None => Scalar::Text(spec.z.to_string()),
        };
        SpecDoc {
            name: spec.name.clone(),
            upper: spec.upper.iter().map(ToString::to_string).collect(),
            lower: spec.lower.iter().map(ToString::to_string).collect(),
            z,
            rhs_gammas: spec.rhs_gammas.iter().map(gamma_doc).collect(),
            conditions: spec.conditions.iter().map(ToString::to_string).collect(),
        }
    }
}

impl TermDoc {
    pub fn to_term(&self) -> Result<HyperTerm, SchemaError> {
        let base = rational(&self.base, "base")?;
        if base.is_zero() {
            return Err(SchemaError::Invalid("base must be nonzero".into()));
        }
        let gammas = self.gammas.iter().map(|g| gamma(g, "gammas")).collect::<Result<Vec<_>, _>>()?;
        let prefactor = rational(&self.prefactor, "prefactor")?;
        let mut cs = Vec::new();
        for c in &self.constant_bases {
            let base = rational(&c.base, "constant_bases")?;
            let exponent = polynomial(&c.exponent, "constant_bases")?;
            if base.is_zero() || base.contains(&Symbol::k()) || exponent.contains(&Symbol::k()) {
                return Err(SchemaError::Invalid("constant bases must be nonzero and free of k".into()));
            }
            cs.push(ConstantPower { base, exponent });
        }
        if base.contains(&Symbol::k()) {
            return Err(SchemaError::Invalid("base must be free of k".into()));
        }
        Ok(HyperTerm::new(base, gammas, prefactor, cs))
    }

    pub fn from_term(t: &HyperTerm) -> TermDoc {
        TermDoc {
            base: t.base().to_string(),
            gammas: t.gammas().iter().map(gamma_doc).collect(),
            prefactor: t.prefactor().to_string(),
            constant_bases: t
                .constant_bases()
                .iter()
                .map(|c| PowerDoc { base: c.base.to_string(), exponent: c.exponent.to_string() })
                .collect(),
        }
    }
}

impl VerifyDoc {
    /// The term `F(n,k)` and the certificate.
    pub fn resolve(&self) -> Result<(HyperTerm, RationalFunction), SchemaError> {
        let f = match (&self.theorem, &self.term) {
            (Some(spec), None) => {
                let spec = spec.to_spec()?;
                let shift = self.shift.as_ref().ok_or_else(|| SchemaError::Invalid("theorem requires a shift".into()))?;
                let param = Symbol::new(&shift.param);
                if !param.is_parameter() || shift.step == 0 {
                    return Err(SchemaError::Invalid("shift must name a parameter with a positive step".into()));
                }
                spec.wz_term(&param, shift.step)?
            }
            (None, Some(t)) => {
                if self.shift.is_some() {
                    return Err(SchemaError::Invalid("shift only applies to a theorem".into()));
                }
                t.to_term()?
            }
            _ => return Err(SchemaError::Invalid("give exactly one of `theorem` and `term`".into())),
        };
        let c = rational(&self.certificate, "certificate")?;
        Ok((f, c))
    }
}

/// One proof step; `step` names the variant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case", deny_unknown_fields)]
pub enum StepDoc {
    Shift {
        param: String,
        by: u32,
        term: TermDoc,
        specializes: bool,
    },
    Wz {
        certificate: String,
        verified: bool,
    },
    Boundary {
        g_at_zero: bool,
        series_exponent: String,
        g_exponent: String,
        conditions: Vec<String>,
    },
    Independence,
    Limit {
        kind: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        limit_term: Option<TermDoc>,
        conditions: Vec<String>,
    },
    Domination {
        report: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        paired_exponent: Option<String>,
        conditions: Vec<String>,
    },
    Closure {
        kind: String,
        value: TermDoc,
    },
    Extension {
        param: String,
        sigmas: Vec<String>,
        certificate: String,
        rhs_quotient: String,
        before: Vec<String>,
        after: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case", deny_unknown_fields)]
pub enum VerdictDoc {
    Proved { conditions: Vec<String> },
    Failed { at: String, reason: String },
}

/// A proof transcript in the same document style as [`SpecDoc`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranscriptDoc {
    pub theorem: SpecDoc,
    pub steps: Vec<StepDoc>,
    pub verdict: VerdictDoc,
}

fn strings(cs: &Conditions) -> Vec<String> {
    cs.iter().map(ToString::to_string).collect()
}

fn conditions(xs: &[String]) -> Result<Conditions, SchemaError> {
    Ok(Conditions::from_vec(xs.iter().map(|c| ConvergenceCondition::parse(c)).collect::<Result<_, _>>()?))
}

fn limit_kind(s: &str) -> Result<LimitKind, SchemaError> {
    [LimitKind::Finite, LimitKind::DeltaK0, LimitKind::Zero, LimitKind::Divergent]
        .into_iter()
        .find(|k| k.to_string() == s)
        .ok_or_else(|| SchemaError::Invalid(format!("unknown limit kind {s:?}")))
}

fn closure_kind(s: &str) -> Result<ClosureKind, SchemaError> {
    [ClosureKind::KroneckerDelta, ClosureKind::Binomial]
        .into_iter()
        .find(|k| k.to_string() == s)
        .ok_or_else(|| SchemaError::Invalid(format!("unknown closure kind {s:?}")))
}

fn parameter(s: &str) -> Result<Symbol, SchemaError> {
    let p = Symbol::new(s);
    if p.is_parameter() {
        Ok(p)
    } else {
        Err(SchemaError::Invalid(format!("{s:?} is not a parameter")))
    }
}

impl StepDoc {
    pub fn from_step(s: &Step) -> StepDoc {
        match s {
            Step::Shift { param, step, term, specializes } => StepDoc::Shift {
                param: param.to_string(),
                by: *step,
                term: TermDoc::from_term(term),
                specializes: *specializes,
            },
            Step::Wz { certificate, verified } => StepDoc::Wz { certificate: certificate.to_string(), verified: *verified },
            Step::Boundary { g_at_zero, series_exponent, g_exponent, conditions } => StepDoc::Boundary {
                g_at_zero: *g_at_zero,
                series_exponent: series_exponent.to_string(),
                g_exponent: g_exponent.to_string(),
                conditions: strings(conditions),
            },
            Step::Independence => StepDoc::Independence,
            Step::TermLimit { kind, limit_term, conditions } => StepDoc::Limit {
                kind: kind.to_string(),
                limit_term: limit_term.as_ref().map(TermDoc::from_term),
                conditions: strings(conditions),
            },
            Step::Domination { report, paired_exponent, conditions } => StepDoc::Domination {
                report: report.clone(),
                paired_exponent: paired_exponent.as_ref().map(ToString::to_string),
                conditions: strings(conditions),
            },
            Step::Closure { kind, value } => StepDoc::Closure { kind: kind.to_string(), value: TermDoc::from_term(value) },
            Step::Extension { recurrence, rhs_quotient, before, after } => StepDoc::Extension {
                param: recurrence.param.to_string(),
                sigmas: recurrence.sigmas.iter().map(ToString::to_string).collect(),
                certificate: recurrence.certificate.to_string(),
                rhs_quotient: rhs_quotient.to_string(),
                before: strings(before),
                after: strings(after),
            },
        }
    }

    pub fn to_step(&self) -> Result<Step, SchemaError> {
        Ok(match self {
            StepDoc::Shift { param, by, term, specializes } => {
                Step::Shift { param: parameter(param)?, step: *by, term: term.to_term()?, specializes: *specializes }
            }
            StepDoc::Wz { certificate, verified } => {
                Step::Wz { certificate: rational(certificate, "certificate")?, verified: *verified }
            }
            StepDoc::Boundary { g_at_zero, series_exponent, g_exponent, conditions: cs } => Step::Boundary {
                g_at_zero: *g_at_zero,
                series_exponent: polynomial(series_exponent, "series_exponent")?,
                g_exponent: polynomial(g_exponent, "g_exponent")?,
                conditions: conditions(cs)?,
            },
            StepDoc::Independence => Step::Independence,
            StepDoc::Limit { kind, limit_term, conditions: cs } => Step::TermLimit {
                kind: limit_kind(kind)?,
                limit_term: limit_term.as_ref().map(TermDoc::to_term).transpose()?,
                conditions: conditions(cs)?,
            },
            StepDoc::Domination { report, paired_exponent, conditions: cs } => Step::Domination {
                report: report.clone(),
                paired_exponent: paired_exponent.as_deref().map(|e| polynomial(e, "paired_exponent")).transpose()?,
                conditions: conditions(cs)?,
            },
            StepDoc::Closure { kind, value } => Step::Closure { kind: closure_kind(kind)?, value: value.to_term()? },
            StepDoc::Extension { param, sigmas, certificate, rhs_quotient, before, after } => {
                if sigmas.len() < 2 {
                    return Err(SchemaError::Invalid("a recurrence needs at least two coefficients".into()));
                }
                let sigmas = sigmas.iter().map(|x| rational(x, "sigmas")).collect::<Result<Vec<_>, _>>()?;
                Step::Extension {
                    recurrence: Recurrence {
                        param: parameter(param)?,
                        order: sigmas.len() - 1,
                        sigmas,
                        certificate: rational(certificate, "certificate")?,
                    },
                    rhs_quotient: rational(rhs_quotient, "rhs_quotient")?,
                    before: conditions(before)?,
                    after: conditions(after)?,
                }
            }
        })
    }
}

impl TranscriptDoc {
    pub fn from_transcript(tr: &ProofTranscript) -> TranscriptDoc {
        TranscriptDoc {
            theorem: SpecDoc::from_spec(&tr.spec),
            steps: tr.steps.iter().map(StepDoc::from_step).collect(),
            verdict: match &tr.verdict {
                Verdict::Proved(c) => VerdictDoc::Proved { conditions: strings(c) },
                Verdict::Failed { step, reason } => VerdictDoc::Failed { at: step.clone(), reason: reason.clone() },
            },
        }
    }

    pub fn to_transcript(&self) -> Result<ProofTranscript, SchemaError> {
        Ok(ProofTranscript {
            spec: self.theorem.to_spec()?,
            steps: self.steps.iter().map(StepDoc::to_step).collect::<Result<_, _>>()?,
            verdict: match &self.verdict {
                VerdictDoc::Proved { conditions: cs } => Verdict::Proved(conditions(cs)?),
                VerdictDoc::Failed { at, reason } => Verdict::Failed { step: at.clone(), reason: reason.clone() },
            },
        })
    }
}

pub fn parse_spec(json: &str) -> Result<TheoremSpec, SchemaError> {
    serde_json::from_str::<SpecDoc>(json)?.to_spec()
}

pub fn parse_term(json: &str) -> Result<HyperTerm, SchemaError> {
    serde_json::from_str::<TermDoc>(json)?.to_term()
}

pub fn parse_verify(json: &str) -> Result<(HyperTerm, RationalFunction), SchemaError> {
    serde_json::from_str::<VerifyDoc>(json)?.resolve()
}

pub fn parse_transcript(json: &str) -> Result<ProofTranscript, SchemaError> {
    serde_json::from_str::<TranscriptDoc>(json)?.to_transcript()
}

pub fn transcript_json(tr: &ProofTranscript) -> String {
    serde_json::to_string_pretty(&TranscriptDoc::from_transcript(tr)).expect("documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    const KUMMER: &str = r#"{
        "name": "kummer", "upper": ["a", "b"], "lower": ["1+a-b"], "z": -1,
        "rhs_gammas": [{"sign": 1, "arg": "1+a/2"}, {"sign": 1, "arg": "1+a-b"},
                       {"sign": -1, "arg": "1+a"}, {"sign": -1, "arg": "1+a/2-b"}],
        "conditions": ["Re(b) < 1"]
    }"#;

    #[test]
    fn spec_round_trip() {
        let spec = parse_spec(KUMMER).unwrap();
        assert_eq!(spec.shape(), "2F1");
        let doc = SpecDoc::from_spec(&spec);
        let again = serde_json::to_string(&doc).unwrap();
        assert_eq!(parse_spec(&again).unwrap(), spec);
        assert_eq!(SpecDoc::from_spec(&parse_spec(&again).unwrap()), doc);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(parse_spec("{"), Err(SchemaError::Json(_))));
        let bad_upper = KUMMER.replace("\"a\", \"b\"", "\"a+n\", \"b\"");
        assert!(matches!(parse_spec(&bad_upper), Err(SchemaError::Term(_))));
        let bad_cond = KUMMER.replace("Re(b) < 1", "b < 1");
        assert!(matches!(parse_spec(&bad_cond), Err(SchemaError::Condition(_))));
        let extra = KUMMER.replace("\"name\"", "\"extra\": 1, \"name\"");
        assert!(parse_spec(&extra).is_err());
    }

    #[test]
    fn verify_document_forms() {
        let by_theorem = format!(
            r#"{{"theorem": {KUMMER}, "shift": {{"param": "a", "step": 2}},
                "certificate": "-(b-1)*k/((1+a+2*n-b+k)*(a+2*n))"}}"#
        );
        let (f, c) = parse_verify(&by_theorem).unwrap();
        assert!(crate::telescope::verify_certificate(&f, &c).unwrap());
        let term = serde_json::to_string(&TermDoc::from_term(&f)).unwrap();
        let by_term = format!(r#"{{"term": {term}, "certificate": "{c}"}}"#);
        let (f2, c2) = parse_verify(&by_term).unwrap();
        assert_eq!((f2, c2), (f, c));
        assert!(parse_verify(r#"{"certificate": "1"}"#).is_err());
    }

    #[test]
    fn transcript_round_trip_and_replay() {
        let e = crate::database::lookup("kummer").unwrap();
        let tr = crate::prover::prove_and_extend(&e.spec, e.shift, e.extensions);
        assert!(tr.is_proved());
        let json = transcript_json(&tr);
        let back = parse_transcript(&json).unwrap();
        assert_eq!(back, tr);
        crate::prover::replay(&back).unwrap();
        let tampered = json.replacen("\"verified\": true", "\"verified\": false", 1);
        assert!(crate::prover::replay(&parse_transcript(&tampered).unwrap()).is_err());
        assert!(parse_transcript(&json.replacen("\"wz\"", "\"telepathy\"", 1)).is_err());
    }
}
