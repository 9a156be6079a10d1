//! The proof pipeline: shift a parameter by a multiple of `n`, find a WZ
//! certificate, check the boundary terms, take the termwise limit
//! `n -> ∞` under a dominating series, sum the limit series, and optionally
//! widen the validity domain through a contiguous relation.

use std::fmt;

use thiserror::Error;

use crate::algebra::{Polynomial, RationalFunction, Symbol};
use crate::asympt::{
    domination_check, k_growth_exponent, k_limit_zero, n_limit, series_convergence, AsymptError, ConditionError,
    Conditions, LimitKind,
};
use crate::hyperterm::{ConstantPower, HyperTerm, TermError, TheoremSpec};
use crate::telescope::{verify_certificate, verify_recurrence, wz_pair, zeilberger, Recurrence, TelescopeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProveError {
    #[error("no parameter shift makes the right-hand side hypergeometric in n")]
    NoShift,
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Telescope(#[from] TelescopeError),
    #[error(transparent)]
    Asympt(#[from] AsymptError),
    #[error(transparent)]
    Condition(#[from] ConditionError),
    #[error("closure not found: {0}")]
    Closure(String),
    #[error("extension refused: {0}")]
    Extension(String),
    #[error("the right-hand side does not satisfy the recurrence: {0}")]
    RhsRecurrence(String),
}

/// Largest shift step tried by [`choose_shift`].
const MAX_STEP: u32 = 12;

/// Picks the parameter and the least step such that `param -> param + step*n`
/// gives integer, nonnegative `n`-coefficients on both sides and makes the
/// right-hand side depend on `n`.
pub fn choose_shift(spec: &TheoremSpec) -> Result<(Symbol, u32), ProveError> {
    let params = spec.params();
    let lhs = spec.lhs()?;
    let rhs = spec.rhs();
    for step in 1..=MAX_STEP {
        for p in params.params() {
            let (Ok(l), Ok(r)) = (lhs.substitute_shift(p, step), rhs.substitute_shift(p, step)) else {
                continue;
            };
            let nonneg = |t: &HyperTerm| t.gammas().iter().all(|g| g.arg.coeff_n >= 0);
            if nonneg(&l) && nonneg(&r) && r.depends_on(&Symbol::n()) {
                return Ok((p.clone(), step));
            }
        }
    }
    Err(ProveError::NoShift)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureKind {
    KroneckerDelta,
    Binomial,
}

impl fmt::Display for ClosureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosureKind::KroneckerDelta => "kronecker_delta",
            ClosureKind::Binomial => "binomial",
        })
    }
}

/// The value of the limit series as a `k`-free term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureForm {
    pub kind: ClosureKind,
    /// `(β, z)` for the binomial series.
    pub binomial: Option<(Polynomial, RationalFunction)>,
    pub value: HyperTerm,
}

/// Sums the termwise limit: `δ_{k,0}` gives its `k = 0` value, and
/// `c (β)_k z^k / k!` gives `c (1-z)^(-β)`.
pub fn close_limit_series(kind: LimitKind, limit_term: &HyperTerm) -> Result<ClosureForm, ProveError> {
    match kind {
        LimitKind::DeltaK0 => Ok(ClosureForm {
            kind: ClosureKind::KroneckerDelta,
            binomial: None,
            value: limit_term.substitute_k0(),
        }),
        LimitKind::Finite => {
            let form = limit_term
                .pochhammer_form()
                .ok_or_else(|| ProveError::Closure("limit term is not a Pochhammer product".into()))?;
            if form.prefactor.contains(&Symbol::k()) {
                return Err(ProveError::Closure("rational prefactor depends on k".into()));
            }
            if form.z.is_zero() {
                return Ok(ClosureForm { kind: ClosureKind::KroneckerDelta, binomial: None, value: limit_term.substitute_k0() });
            }
            if form.upper.len() != 1 || form.lower.len() != 1 || !form.lower[0].is_one() {
                return Err(ProveError::Closure(format!("series of shape {} is not recognized", limit_term)));
            }
            let beta = form.upper[0].clone();
            let one_minus_z = &RationalFunction::one() - &form.z;
            if one_minus_z.is_zero() {
                return Err(ProveError::Closure("binomial series at z = 1".into()));
            }
            let mut powers = form.constant_bases.clone();
            powers.push(ConstantPower { base: one_minus_z, exponent: -&beta });
            let value = HyperTerm::new(RationalFunction::one(), form.coefficient.clone(), form.prefactor.clone(), powers);
            Ok(ClosureForm { kind: ClosureKind::Binomial, binomial: Some((beta, form.z)), value })
        }
        other => Err(ProveError::Closure(format!("termwise limit is {other}"))),
    }
}

/// `H(n,k) = F(n,2k) + F(n,2k+1)`, kept as the pair of terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairedSequence {
    pub term: HyperTerm,
    pub exponent: Polynomial,
    /// `k`-exponent of `H`; lower than `exponent` when the pair cancels.
    pub paired_exponent: Polynomial,
}

/// Describes the pairing `H(n,k) = F(n,2k) + F(n,2k+1) = F(n,2k) (1 + q_k(2k))`.
pub fn accelerate_pairing(f: &HyperTerm) -> Result<PairedSequence, ProveError> {
    let est = k_growth_exponent(f)?;
    let q = f.shift_quotient(&Symbol::k())?;
    let one_plus = &RationalFunction::one() + &q;
    let drop = if one_plus.is_zero() { 0 } else { one_plus.degree_in(&Symbol::k()) };
    Ok(PairedSequence {
        term: f.clone(),
        paired_exponent: &est.exponent + &Polynomial::int(drop.min(0)),
        exponent: est.exponent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Shift {
        param: Symbol,
        step: u32,
        term: HyperTerm,
        /// `F(0,k)` is the input summand divided by the right-hand side.
        specializes: bool,
    },
    Wz {
        certificate: RationalFunction,
        verified: bool,
    },
    Boundary {
        /// `C(n,0) = 0`, hence `G(n,0) = 0`.
        g_at_zero: bool,
        series_exponent: Polynomial,
        g_exponent: Polynomial,
        conditions: Conditions,
    },
    Independence,
    TermLimit {
        kind: LimitKind,
        limit_term: Option<HyperTerm>,
        conditions: Conditions,
    },
    Domination {
        report: String,
        paired_exponent: Option<Polynomial>,
        conditions: Conditions,
    },
    Closure {
        kind: ClosureKind,
        value: HyperTerm,
    },
    Extension {
        recurrence: Recurrence,
        rhs_quotient: RationalFunction,
        before: Conditions,
        after: Conditions,
    },
}

impl Step {
    pub fn name(&self) -> &'static str {
        match self {
            Step::Shift { .. } => "shift",
            Step::Wz { .. } => "wz",
            Step::Boundary { .. } => "boundary",
            Step::Independence => "independence",
            Step::TermLimit { .. } => "limit",
            Step::Domination { .. } => "domination",
            Step::Closure { .. } => "closure",
            Step::Extension { .. } => "extension",
        }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.name())?;
        match self {
            Step::Shift { param, step, term, specializes } => {
                write!(f, "{param} -> {param}+{step}n; F(n,k) = {term}")?;
                if *specializes {
                    write!(f, "; n = 0 gives back the theorem")?;
                }
                Ok(())
            }
            Step::Wz { certificate, verified } => {
                write!(f, "G(n,k) = F(n,k)*C(n,k), C(n,k) = {certificate}")?;
                if *verified {
                    write!(f, "; F(n,k) - F(n+1,k) = G(n,k+1) - G(n,k) checked exactly")?;
                }
                Ok(())
            }
            Step::Boundary { g_at_zero, series_exponent, g_exponent, conditions } => write!(
                f,
                "G(n,0) {} 0; |F(n,k)| ~ k^({series_exponent}); |G(n,k)| ~ k^({g_exponent}) -> 0; under {conditions}",
                if *g_at_zero { "=" } else { "!=" }
            ),
            Step::Independence => write!(f, "sum_k F(n,k) telescopes, so it is independent of n"),
            Step::TermLimit { kind, limit_term, conditions } => {
                match (kind, limit_term) {
                    (LimitKind::Finite, Some(t)) => write!(
                        f,
                        "lim_n F(n,k) = {}",
                        t.pochhammer_form().map(|p| p.to_string()).unwrap_or_else(|| t.to_string())
                    )?,
                    (LimitKind::DeltaK0, Some(t)) => write!(f, "lim_n F(n,k) = δ_(k,0) * {t}")?,
                    _ => write!(f, "lim_n F(n,k) is {kind}")?,
                }
                if !conditions.is_empty() {
                    write!(f, "; under {conditions}")?;
                }
                Ok(())
            }
            Step::Domination { report, paired_exponent, conditions } => {
                write!(f, "{report}; dominated convergence under {conditions}")?;
                if let Some(e) = paired_exponent {
                    write!(f, "; paired terms F(n,2k)+F(n,2k+1) ~ k^({e})")?;
                }
                Ok(())
            }
            Step::Closure { kind, value } => write!(f, "limit series summed by {kind}: {value}"),
            Step::Extension { recurrence, rhs_quotient, before, after } => write!(
                f,
                "{recurrence}; right-hand side quotient {rhs_quotient}; {before} -> {after}"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved(Conditions),
    Failed { step: String, reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTranscript {
    pub spec: TheoremSpec,
    pub steps: Vec<Step>,
    pub verdict: Verdict,
}

impl ProofTranscript {
    pub fn is_proved(&self) -> bool {
        matches!(self.verdict, Verdict::Proved(_))
    }

    pub fn conditions(&self) -> Option<&Conditions> {
        match &self.verdict {
            Verdict::Proved(c) => Some(c),
            Verdict::Failed { .. } => None,
        }
    }

    /// Conditions of the proof before any extension.
    pub fn proved_conditions(&self) -> Option<Conditions> {
        self.is_proved().then(|| collect_conditions(&self.steps))
    }

    fn fail(mut self, step: &str, reason: impl ToString) -> Self {
        self.verdict = Verdict::Failed { step: step.to_string(), reason: reason.to_string() };
        self
    }
}

fn collect_conditions(steps: &[Step]) -> Conditions {
    let mut cs = Conditions::new();
    for s in steps {
        match s {
            Step::Boundary { conditions, .. } | Step::TermLimit { conditions, .. } | Step::Domination { conditions, .. } => {
                cs.extend(conditions)
            }
            Step::Extension { after, .. } => cs = after.clone(),
            _ => {}
        }
    }
    cs
}

fn statement(spec: &TheoremSpec) -> String {
    let list = |xs: &[Polynomial]| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
    format!("{}[{}; {}; {}] = {}", spec.shape(), list(&spec.upper), list(&spec.lower), spec.z, spec.rhs())
}

impl fmt::Display for ProofTranscript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "theorem {}: {}", self.spec.name, statement(&self.spec))?;
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        match &self.verdict {
            Verdict::Proved(c) if c.is_empty() => writeln!(f, "proved"),
            Verdict::Proved(c) => writeln!(f, "proved under {c}"),
            Verdict::Failed { step, reason } => writeln!(f, "failed at {step}: {reason}"),
        }
    }
}

/// The parameter-shift proof with an automatically chosen shift.
pub fn prove(spec: &TheoremSpec) -> ProofTranscript {
    match choose_shift(spec) {
        Ok((p, s)) => prove_with_shift(spec, &p, s),
        Err(e) => ProofTranscript { spec: spec.clone(), steps: Vec::new(), verdict: Verdict::Proved(Conditions::new()) }
            .fail("shift", e),
    }
}

/// The proof with a given shift `param -> param + step*n`.
pub fn prove_with_shift(spec: &TheoremSpec, param: &Symbol, step: u32) -> ProofTranscript {
    let mut tr = ProofTranscript { spec: spec.clone(), steps: Vec::new(), verdict: Verdict::Proved(Conditions::new()) };
    if let Err(e) = spec.validate() {
        return tr.fail("shift", e);
    }
    macro_rules! attempt {
        ($step:expr, $e:expr) => {
            match $e {
                Ok(v) => v,
                Err(err) => return tr.fail($step, err),
            }
        };
    }

    let f = attempt!("shift", spec.wz_term(param, step));
    let specializes = attempt!("shift", specializes(spec, &f));
    tr.steps.push(Step::Shift { param: param.clone(), step, term: f.clone(), specializes });

    let cert = match attempt!("wz", wz_pair(&f)) {
        Some(c) => c,
        None => return tr.fail("wz", "no WZ certificate: the summand is not Gosper-summable in k"),
    };
    let verified = attempt!("wz", verify_certificate(&f, &cert.c));
    tr.steps.push(Step::Wz { certificate: cert.c.clone(), verified });
    if !verified {
        return tr.fail("wz", "certificate does not satisfy the WZ relation");
    }

    let boundary = attempt!("boundary", boundary_step(&f, &cert.c));
    let ok = matches!(boundary, Step::Boundary { g_at_zero: true, .. });
    tr.steps.push(boundary);
    if !ok {
        return tr.fail("boundary", "G(n,0) is not zero");
    }
    tr.steps.push(Step::Independence);

    let limit = attempt!("limit", n_limit(&f));
    tr.steps.push(Step::TermLimit { kind: limit.kind, limit_term: limit.limit_term.clone(), conditions: limit.conditions.clone() });
    let (report, dom_conditions) = attempt!("domination", domination_check(&f, &limit));
    let paired = accelerate_pairing(&f).ok().map(|p| p.paired_exponent).filter(|e| {
        k_growth_exponent(&f).map(|est| &est.exponent != e).unwrap_or(false)
    });
    tr.steps.push(Step::Domination { report: report.to_string(), paired_exponent: paired, conditions: dom_conditions });

    let term = match &limit.limit_term {
        Some(t) => t.clone(),
        None => return tr.fail("closure", "no limit term"),
    };
    let closure = attempt!("closure", close_limit_series(limit.kind, &term));
    let one = closure.value.is_exactly_one();
    tr.steps.push(Step::Closure { kind: closure.kind, value: closure.value.clone() });
    if !one {
        return tr.fail("closure", format!("limit series sums to {} rather than 1", closure.value));
    }
    let cs = collect_conditions(&tr.steps);
    if cs.is_contradictory() {
        return tr.fail("closure", "the collected conditions are contradictory");
    }
    tr.verdict = Verdict::Proved(cs);
    tr
}

fn specializes(spec: &TheoremSpec, f: &HyperTerm) -> Result<bool, TermError> {
    let at0 = f.substitute(&Symbol::n(), &Polynomial::zero())?;
    Ok(at0 == spec.lhs()?.div(&spec.rhs()))
}

fn boundary_step(f: &HyperTerm, c: &RationalFunction) -> Result<Step, ProveError> {
    let k = Symbol::k();
    let zero = Polynomial::zero();
    let g_at_zero = c.is_zero()
        || (c.numer().substitute(&k, &zero).is_zero() && !c.denom().substitute(&k, &zero).is_zero());
    let mut conditions = series_convergence(f)?;
    let g = f.times(c);
    let g_exponent = k_growth_exponent(&g)?.exponent;
    let (vanishes, gc) = k_limit_zero(&g)?;
    if !vanishes && !c.is_zero() {
        return Err(ProveError::Asympt(AsymptError::Unsupported(format!("G(n,k) ~ k^({g_exponent}) does not tend to 0"))));
    }
    conditions.extend(&gc);
    Ok(Step::Boundary { g_at_zero, series_exponent: k_growth_exponent(f)?.exponent, g_exponent, conditions })
}

/// Widens the domain of a proved theorem by `times` unit steps in `param`
/// through the order-1 recurrence of the summand in `param`.
pub fn extend_domain(spec: &TheoremSpec, transcript: ProofTranscript, param: &Symbol, times: u32) -> ProofTranscript {
    extend_domain_with(spec, transcript, param, times, DEFAULT_MAX_ORDER)
}

/// Default cap on the recurrence order searched during extension.
pub const DEFAULT_MAX_ORDER: usize = 2;

/// [`extend_domain`] with the recurrence search capped at `max_order`.
/// Only a first-order recurrence can widen the domain; a higher minimal
/// order is reported as the reason the extension is refused.
pub fn extend_domain_with(spec: &TheoremSpec, transcript: ProofTranscript, param: &Symbol, times: u32, max_order: usize) -> ProofTranscript {
    let mut tr = transcript;
    for _ in 0..times {
        let before = match &tr.verdict {
            Verdict::Proved(c) => c.clone(),
            Verdict::Failed { .. } => return tr,
        };
        match extension_step(spec, param, &before, max_order) {
            Ok(step) => {
                let after = match &step {
                    Step::Extension { after, .. } => after.clone(),
                    _ => unreachable!("extension_step returns an extension"),
                };
                tr.steps.push(step);
                tr.verdict = Verdict::Proved(after);
            }
            Err(e) => return tr.fail("extension", e),
        }
    }
    tr
}

fn extension_step(spec: &TheoremSpec, param: &Symbol, before: &Conditions, max_order: usize) -> Result<Step, ProveError> {
    let k = Symbol::k();
    let m = spec.lhs()?;
    let rec = zeilberger(&m, param, max_order.max(1))?
        .ok_or_else(|| ProveError::Extension(format!("no recurrence in {param} of order <= {}", max_order.max(1))))?;
    if rec.order != 1 {
        return Err(ProveError::Extension(format!("minimal recurrence in {param} has order {}", rec.order)));
    }
    if rec.sigmas[1].is_zero() {
        return Err(ProveError::Extension("leading recurrence coefficient vanishes".into()));
    }
    if !verify_recurrence(&m, &rec)? {
        return Err(ProveError::Extension("recurrence does not verify".into()));
    }
    let c = &rec.certificate;
    let zero = Polynomial::zero();
    if !c.is_zero() && (!c.numer().substitute(&k, &zero).is_zero() || c.denom().substitute(&k, &zero).is_zero()) {
        return Err(ProveError::Extension("G'(0) does not vanish".into()));
    }
    let mut needed = Conditions::new();
    for i in 0..=1i64 {
        let shifted = m.substitute(param, &(&Polynomial::var(param.clone()) + &Polynomial::int(i)))?;
        needed.extend(&series_convergence(&shifted)?);
    }
    if !c.is_zero() {
        let (vanishes, gc) = k_limit_zero(&m.times(c))?;
        if !vanishes {
            return Err(ProveError::Extension("G'(k) does not tend to 0".into()));
        }
        needed.extend(&gc);
    }
    if !before.implies_all(&needed) {
        let blocking: Vec<String> = needed.iter().filter(|n| !before.iter().any(|b| b.implies(n))).map(ToString::to_string).collect();
        return Err(ProveError::Extension(format!("boundary terms need {}", blocking.join(", "))));
    }
    let rhs_quotient = spec.rhs().shift_quotient(param)?;
    let expected = -&(&rec.sigmas[0] / &rec.sigmas[1]);
    if rhs_quotient != expected {
        return Err(ProveError::RhsRecurrence(format!("{rhs_quotient} != {expected}")));
    }
    let back = &Polynomial::var(param.clone()) - &Polynomial::one();
    let mut after = before.substitute(param, &back)?;
    if !before.implies_all(&after) {
        return Err(ProveError::Extension("shifted region does not contain the proved one".into()));
    }
    after.extend(&series_convergence(&m)?);
    Ok(Step::Extension { recurrence: rec, rhs_quotient, before: before.clone(), after })
}

/// Proof followed by the configured extensions.
pub fn prove_and_extend(spec: &TheoremSpec, shift: Option<(Symbol, u32)>, extension: Option<(Symbol, u32)>) -> ProofTranscript {
    prove_and_extend_with(spec, shift, extension, DEFAULT_MAX_ORDER)
}

pub fn prove_and_extend_with(
    spec: &TheoremSpec,
    shift: Option<(Symbol, u32)>,
    extension: Option<(Symbol, u32)>,
    max_order: usize,
) -> ProofTranscript {
    let tr = match shift {
        Some((p, s)) => prove_with_shift(spec, &p, s),
        None => prove(spec),
    };
    match extension {
        Some((p, times)) => extend_domain_with(spec, tr, &p, times, max_order),
        None => tr,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("transcript does not start with a shift")]
    NoShift,
    #[error("step {step} does not replay: {reason}")]
    Mismatch { step: &'static str, reason: String },
    #[error("verdict does not match the steps")]
    Verdict,
}

/// Re-checks a proved transcript from its recorded data: certificates and
/// recurrences are verified, never searched for.
pub fn replay(tr: &ProofTranscript) -> Result<(), ReplayError> {
    let mismatch = |step: &'static str, reason: String| ReplayError::Mismatch { step, reason };
    let Some(Step::Shift { param, step, term, specializes: spec_ok }) = tr.steps.first() else {
        return Err(ReplayError::NoShift);
    };
    let f = tr.spec.wz_term(param, *step).map_err(|e| mismatch("shift", e.to_string()))?;
    if &f != term {
        return Err(mismatch("shift", "F(n,k) differs from the recomputed term".into()));
    }
    if specializes(&tr.spec, &f).map_err(|e| mismatch("shift", e.to_string()))? != *spec_ok {
        return Err(mismatch("shift", "n = 0 specialization".into()));
    }
    let mut cert = None;
    let mut limit_kind = None;
    for s in &tr.steps[1..] {
        match s {
            Step::Wz { certificate, verified } => {
                let ok = verify_certificate(&f, certificate).map_err(|e| mismatch("wz", e.to_string()))?;
                if ok != *verified {
                    return Err(mismatch("wz", "certificate check disagrees".into()));
                }
                cert = Some(certificate.clone());
            }
            Step::Boundary { .. } => {
                let c = cert.as_ref().ok_or_else(|| mismatch("boundary", "no certificate".into()))?;
                let again = boundary_step(&f, c).map_err(|e| mismatch("boundary", e.to_string()))?;
                if &again != s {
                    return Err(mismatch("boundary", format!("recomputed {again}")));
                }
            }
            Step::Independence => {
                if cert.is_none() {
                    return Err(mismatch("independence", "no certificate".into()));
                }
            }
            Step::TermLimit { kind, limit_term, conditions } => {
                let l = n_limit(&f).map_err(|e| mismatch("limit", e.to_string()))?;
                if (&l.kind, &l.limit_term, &l.conditions) != (kind, limit_term, conditions) {
                    return Err(mismatch("limit", "termwise limit differs".into()));
                }
                limit_kind = Some(l);
            }
            Step::Domination { conditions, .. } => {
                let l = limit_kind.as_ref().ok_or_else(|| mismatch("domination", "no limit".into()))?;
                let (_, cs) = domination_check(&f, l).map_err(|e| mismatch("domination", e.to_string()))?;
                if &cs != conditions {
                    return Err(mismatch("domination", format!("recomputed {cs}")));
                }
            }
            Step::Closure { kind, value } => {
                let l = limit_kind.as_ref().ok_or_else(|| mismatch("closure", "no limit".into()))?;
                let t = l.limit_term.as_ref().ok_or_else(|| mismatch("closure", "no limit term".into()))?;
                let c = close_limit_series(l.kind, t).map_err(|e| mismatch("closure", e.to_string()))?;
                if (&c.kind, &c.value) != (kind, value) {
                    return Err(mismatch("closure", "limit series value differs".into()));
                }
                if tr.is_proved() && !value.is_exactly_one() {
                    return Err(mismatch("closure", "value is not 1".into()));
                }
            }
            Step::Extension { recurrence, rhs_quotient, before, after } => {
                let m = tr.spec.lhs().map_err(|e| mismatch("extension", e.to_string()))?;
                if !verify_recurrence(&m, recurrence).map_err(|e| mismatch("extension", e.to_string()))? {
                    return Err(mismatch("extension", "recurrence does not verify".into()));
                }
                let q = tr.spec.rhs().shift_quotient(&recurrence.param).map_err(|e| mismatch("extension", e.to_string()))?;
                let expected = -&(&recurrence.sigmas[0] / &recurrence.sigmas[1]);
                if &q != rhs_quotient || q != expected {
                    return Err(mismatch("extension", "right-hand side quotient".into()));
                }
                let again = extension_step(&tr.spec, &recurrence.param, before, 1).map_err(|e| mismatch("extension", e.to_string()))?;
                match again {
                    Step::Extension { after: a, .. } if &a == after => {}
                    _ => return Err(mismatch("extension", "widened conditions differ".into())),
                }
            }
            Step::Shift { .. } => return Err(mismatch("shift", "repeated shift".into())),
        }
    }
    match &tr.verdict {
        Verdict::Proved(c) if *c == collect_conditions(&tr.steps) => Ok(()),
        Verdict::Proved(_) => Err(ReplayError::Verdict),
        Verdict::Failed { .. } => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::database::lookup;

    fn spec(name: &str) -> TheoremSpec {
        lookup(name).unwrap().spec
    }

    #[test]
    fn shift_choices() {
        for (name, p, s) in [("kummer", "a", 2), ("gauss", "c", 1), ("bailey", "b", 2), ("dixon", "a", 2)] {
            assert_eq!(choose_shift(&spec(name)).unwrap(), (Symbol::new(p), s), "{name}");
        }
    }

    #[test]
    fn kummer_end_to_end() {
        let s = spec("kummer");
        let tr = prove(&s);
        assert!(tr.is_proved(), "{tr}");
        assert_eq!(tr.conditions().unwrap().to_string(), "Re(b) < 0");
        replay(&tr).unwrap();
        let ext = extend_domain(&s, tr.clone(), &Symbol::new("b"), 1);
        assert_eq!(ext.conditions().unwrap().to_string(), "Re(b) < 1", "{ext}");
        replay(&ext).unwrap();
        assert_eq!(extend_domain(&s, tr.clone(), &Symbol::new("b"), 0), tr);
    }

    #[test]
    fn binomial_closure() {
        let t = HyperTerm::from_pfq(&[crate::algebra::parse_polynomial("b").unwrap()], &[], RationalFunction::int(-1))
            .unwrap()
            .with_constant_power(RationalFunction::int(2), crate::algebra::parse_polynomial("b").unwrap());
        let c = close_limit_series(LimitKind::Finite, &t).unwrap();
        assert_eq!(c.kind, ClosureKind::Binomial);
        assert!(c.value.is_exactly_one());
    }

    #[test]
    fn misstated_rhs_fails() {
        let mut s = spec("kummer");
        s.rhs_gammas[2] = crate::hyperterm::GammaFactor::new(
            crate::hyperterm::AffineArg::from_poly(&crate::algebra::parse_polynomial("2+a").unwrap()).unwrap(),
            -1,
        );
        assert!(!prove(&s).is_proved());
    }
}
