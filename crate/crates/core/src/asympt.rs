//! Asymptotics built on the single estimate `Γ(x+k)/Γ(y+k) ~ k^(x-y)`:
//! growth exponents in `k`, termwise limits as `n -> ∞`, majorants for
//! dominated convergence, and the real-part conditions they impose.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{parse_rational, ParseError, Polynomial, RationalFunction, Symbol, Q};
use crate::hyperterm::{AffineArg, ConstantPower, GammaFactor, HyperTerm, PochhammerForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsymptError {
    #[error("non-unit k-coefficient in Γ({0})")]
    NonUnitK(String),
    #[error("exponential Gamma growth: k-dependent Gamma factors are unbalanced")]
    Unbalanced,
    #[error("base {0} is not a rational number")]
    SymbolicBase(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("no majorant found: {0}")]
    NoMajorant(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionError {
    #[error("expected `Re(<expr>) <op> <expr>`, got {0:?}")]
    Syntax(String),
    #[error("condition is not affine in the parameters: {0}")]
    NotAffine(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// `Re(form) < 0`, or `Re(form) <= 0` when not strict. The form is affine in
/// the parameters and normalized so its linear part has coprime integer
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConvergenceCondition {
    form: Polynomial,
    strict: bool,
}

impl ConvergenceCondition {
    pub fn new(form: Polynomial, strict: bool) -> Result<Self, ConditionError> {
        if form.total_degree() > 1 || form.contains(&Symbol::k()) {
            return Err(ConditionError::NotAffine(form.to_string()));
        }
        let linear = &form - &Polynomial::constant(form.constant_term());
        let scale = if linear.is_zero() {
            let c = form.constant_term().abs();
            if c.is_zero() {
                Q::one()
            } else {
                c
            }
        } else {
            linear.rational_content()
        };
        Ok(ConvergenceCondition { form: form.scale(&scale.recip()), strict })
    }

    /// `Re(form) < 0`.
    pub fn lt0(form: Polynomial) -> Result<Self, ConditionError> {
        Self::new(form, true)
    }

    /// `Re(form) <= 0`.
    pub fn le0(form: Polynomial) -> Result<Self, ConditionError> {
        Self::new(form, false)
    }

    pub fn form(&self) -> &Polynomial {
        &self.form
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    fn linear(&self) -> Polynomial {
        &self.form - &Polynomial::constant(self.form.constant_term())
    }

    /// `Some(truth)` when the form is a constant.
    pub fn constant_truth(&self) -> Option<bool> {
        let c = self.form.as_constant().or_else(|| self.form.is_zero().then(Q::zero))?;
        Some(if self.strict { c.is_negative() } else { !c.is_positive() })
    }

    /// Whether `self` implies `other` by comparing constants on an equal
    /// linear part.
    pub fn implies(&self, other: &ConvergenceCondition) -> bool {
        if other.constant_truth() == Some(true) {
            return true;
        }
        if self.linear() != other.linear() {
            return false;
        }
        // self: L + c1 < 0 (or <=); other: L + c2 < 0 (or <=).
        let c1 = self.form.constant_term();
        let c2 = other.form.constant_term();
        if other.strict && !self.strict {
            c2 < c1
        } else {
            c2 <= c1
        }
    }

    pub fn substitute(&self, var: &Symbol, value: &Polynomial) -> Result<Self, ConditionError> {
        Self::new(self.form.substitute(var, value), self.strict)
    }

    /// Parses `Re(x) < y`, `Re(x) <= y`, `Re(x) > y`, `Re(x) >= y` (also `≤`, `≥`).
    pub fn parse(src: &str) -> Result<Self, ConditionError> {
        let s = src.trim();
        let err = || ConditionError::Syntax(src.to_string());
        let inner_start = s.strip_prefix("Re(").ok_or_else(err)?;
        let mut depth = 1usize;
        let mut close = None;
        for (i, c) in inner_start.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        close = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        let close = close.ok_or_else(err)?;
        let lhs = &inner_start[..close];
        let rest = inner_start[close + 1..].trim_start();
        let ops = [("<=", false, false), ("≤", false, false), (">=", false, true), ("≥", false, true), ("<", true, false), (">", true, true)];
        let (op_len, strict, flip) = ops
            .iter()
            .find(|(op, _, _)| rest.starts_with(op))
            .map(|(op, st, fl)| (op.len(), *st, *fl))
            .ok_or_else(err)?;
        let rhs = rest[op_len..].trim();
        let l = parse_rational(lhs)?;
        let r = parse_rational(rhs)?;
        let diff = if flip { &r - &l } else { &l - &r };
        if !diff.is_polynomial() {
            return Err(ConditionError::NotAffine(diff.to_string()));
        }
        let form = diff.into_parts().0;
        if form.contains(&Symbol::n()) {
            return Err(ConditionError::NotAffine(form.to_string()));
        }
        Self::new(form, strict)
    }
}

/// Prints a polynomial with the constant first, then positive terms, then
/// negative ones, without `*` after numeric coefficients (`2+a-2b-2c`).
fn human_affine(p: &Polynomial) -> String {
    let mut pos: Vec<(String, Q)> = Vec::new();
    let mut neg: Vec<(String, Q)> = Vec::new();
    let c = p.constant_term();
    let mut linear: Vec<(String, Q)> = p
        .terms()
        .filter(|(m, _)| !m.is_one())
        .map(|(m, q)| (format!("{m:?}"), q.clone()))
        .collect();
    linear.sort_by(|a, b| a.0.cmp(&b.0));
    for (name, q) in linear {
        if q.is_positive() {
            pos.push((name, q));
        } else {
            neg.push((name, q));
        }
    }
    let mut out = String::new();
    let coef = |q: &Q| -> String {
        let a = q.abs();
        if a.is_one() {
            String::new()
        } else if a.is_integer() {
            a.to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    };
    if !c.is_zero() {
        out.push_str(&c.to_string());
    }
    for (name, q) in pos {
        if !out.is_empty() {
            out.push('+');
        }
        let cf = coef(&q);
        if cf.contains('/') {
            out.push_str(&format!("{}{name}/{}", q.numer(), q.denom()));
        } else {
            out.push_str(&format!("{cf}{name}"));
        }
    }
    for (name, q) in neg {
        out.push('-');
        let cf = coef(&q);
        if cf.contains('/') {
            out.push_str(&format!("{}{name}/{}", q.numer().abs(), q.denom()));
        } else {
            out.push_str(&format!("{cf}{name}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for ConvergenceCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let linear = self.linear();
        let c = self.form.constant_term();
        let lt = if self.strict { "<" } else { "<=" };
        let gt = if self.strict { ">" } else { ">=" };
        if linear.num_terms() == 1 {
            let (m, q) = linear.terms().next().expect("one term");
            if q.abs().is_one() && m.total_degree() == 1 {
                // ±s + c < 0.
                return if q.is_positive() {
                    write!(f, "Re({m:?}) {lt} {}", -c)
                } else {
                    write!(f, "Re({m:?}) {gt} {c}")
                };
            }
        }
        write!(f, "Re({}) {gt} 0", human_affine(&-&self.form))
    }
}

impl fmt::Debug for ConvergenceCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A simplified conjunction of conditions in a deterministic order.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Conditions(Vec<ConvergenceCondition>);

impl Conditions {
    pub fn new() -> Self {
        Conditions(Vec::new())
    }

    pub fn from_vec(cs: Vec<ConvergenceCondition>) -> Self {
        let mut out = Conditions::new();
        for c in cs {
            out.add(c);
        }
        out
    }

    /// Adds a condition, dropping whichever of the old and new ones is
    /// implied by the other.
    pub fn add(&mut self, c: ConvergenceCondition) {
        if c.constant_truth() == Some(true) {
            return;
        }
        if self.0.iter().any(|o| o.implies(&c)) {
            return;
        }
        self.0.retain(|o| !c.implies(o));
        self.0.push(c);
        self.0.sort_by(|a, b| (a.linear().to_string(), a.form.to_string()).cmp(&(b.linear().to_string(), b.form.to_string())));
    }

    pub fn extend(&mut self, other: &Conditions) {
        for c in &other.0 {
            self.add(c.clone());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &ConvergenceCondition> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True if some member is a false constant.
    pub fn is_contradictory(&self) -> bool {
        self.0.iter().any(|c| c.constant_truth() == Some(false))
    }

    /// Every condition of `other` is implied by some member of `self`.
    pub fn implies_all(&self, other: &Conditions) -> bool {
        other.0.iter().all(|c| c.constant_truth() == Some(true) || self.0.iter().any(|s| s.implies(c)))
    }

    pub fn to_vec(&self) -> Vec<ConvergenceCondition> {
        self.0.clone()
    }

    pub fn substitute(&self, var: &Symbol, value: &Polynomial) -> Result<Conditions, ConditionError> {
        let cs = self.0.iter().map(|c| c.substitute(var, value)).collect::<Result<Vec<_>, _>>()?;
        Ok(Conditions::from_vec(cs))
    }
}

impl fmt::Display for Conditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("none");
        }
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(", "))
    }
}

impl fmt::Debug for Conditions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// How `|z|` compares with 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometric {
    Decay,
    Unit,
    Growth,
}

/// `|T(n,k)| ~ k^exponent * T(n)` for `|z| = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthEstimate {
    /// Affine in the parameters and `n`.
    pub exponent: Polynomial,
    /// An `n`-dependent positive factor was split off.
    pub has_positive_factor: bool,
    pub geometric: Geometric,
}

fn base_kind(z: &RationalFunction) -> Result<Geometric, AsymptError> {
    let q = z.as_constant().ok_or_else(|| AsymptError::SymbolicBase(z.to_string()))?;
    Ok(match q.abs().cmp(&Q::one()) {
        std::cmp::Ordering::Less => Geometric::Decay,
        std::cmp::Ordering::Equal => Geometric::Unit,
        std::cmp::Ordering::Greater => Geometric::Growth,
    })
}

/// Growth exponent in `k` by pairing `Γ(x+k)/Γ(y+k) ~ k^(x-y)`, plus the
/// degree in `k` of the prefactor.
pub fn k_growth_exponent(t: &HyperTerm) -> Result<GrowthEstimate, AsymptError> {
    let geometric = base_kind(t.base())?;
    let mut exponent = Polynomial::zero();
    let mut balance = 0i64;
    for g in t.gammas() {
        match g.arg.coeff_k {
            0 => {}
            1 => {
                balance += i64::from(g.exponent);
                let x = &g.arg.to_poly() - &Polynomial::var(Symbol::k());
                exponent += &x.scale(&Q::from_integer(g.exponent.into()));
            }
            _ => return Err(AsymptError::NonUnitK(g.arg.to_string())),
        }
    }
    if balance != 0 {
        return Err(AsymptError::Unbalanced);
    }
    exponent += &Polynomial::int(t.prefactor().degree_in(&Symbol::k()));
    Ok(GrowthEstimate { exponent, has_positive_factor: t.depends_on(&Symbol::n()), geometric })
}

/// `Re(e) < 0` required for every `n >= 0`: the `n`-coefficient must be
/// nonpositive and the worst case `n = 0` is emitted.
fn negative_for_all_n(e: &Polynomial, strict: bool) -> Option<ConvergenceCondition> {
    let n = Symbol::n();
    let cs = e.coefficients(&n);
    if cs.len() > 2 {
        return None;
    }
    if cs.len() == 2 {
        let c = cs[1].as_constant()?;
        if c.is_positive() {
            return None;
        }
    }
    let at0 = cs.into_iter().next().unwrap_or_default();
    ConvergenceCondition::new(at0, strict).ok()
}

/// Whether `T(n,k) -> 0` as `k -> ∞`, for every `n >= 0`, and under which
/// conditions.
pub fn k_limit_zero(t: &HyperTerm) -> Result<(bool, Conditions), AsymptError> {
    let est = k_growth_exponent(t)?;
    match est.geometric {
        Geometric::Decay => return Ok((true, Conditions::new())),
        Geometric::Growth => return Ok((false, Conditions::new())),
        Geometric::Unit => {}
    }
    match negative_for_all_n(&est.exponent, true) {
        Some(c) => match c.constant_truth() {
            Some(v) => Ok((v, Conditions::new())),
            None => Ok((true, Conditions::from_vec(vec![c]))),
        },
        None => Ok((false, Conditions::new())),
    }
}

/// Conditions under which `sum_k t(n,k)` converges for every `n >= 0`:
/// `Re(e) < -1` for `z = 1`, `Re(e) < 0` for other `|z| = 1`.
pub fn series_convergence(t: &HyperTerm) -> Result<Conditions, AsymptError> {
    let est = k_growth_exponent(t)?;
    let e = match est.geometric {
        Geometric::Decay => return Ok(Conditions::new()),
        Geometric::Growth => return Err(AsymptError::NoMajorant("|z| > 1: the series diverges".into())),
        Geometric::Unit if t.base().is_one() => &est.exponent + &Polynomial::one(),
        Geometric::Unit => est.exponent.clone(),
    };
    let c = negative_for_all_n(&e, true)
        .ok_or_else(|| AsymptError::Unsupported(format!("k^({e}) is not summable for all n")))?;
    if c.constant_truth() == Some(false) {
        return Err(AsymptError::NoMajorant(format!("terms ~ k^({}) are not summable", est.exponent)));
    }
    Ok(Conditions::from_vec(vec![c]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    Finite,
    DeltaK0,
    Zero,
    Divergent,
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitKind::Finite => "finite",
            LimitKind::DeltaK0 => "delta_k0",
            LimitKind::Zero => "zero",
            LimitKind::Divergent => "divergent",
        })
    }
}

/// Termwise limit of a term as `n -> ∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitResult {
    pub kind: LimitKind,
    /// The limit as a term in `k` (Finite), or the value at `k = 0` (DeltaK0).
    pub limit_term: Option<HyperTerm>,
    /// Total exponent of `n`; zero for Finite, `c*k` for DeltaK0.
    pub n_exponent: Polynomial,
    pub conditions: Conditions,
}

/// Groups the `n`-dependent Gamma factors by their `n`-coefficient `m`; each
/// balanced group contributes `m^e_m * n^e_m`, `e_m` the signed sum of the
/// remaining argument parts.
pub fn n_limit(t: &HyperTerm) -> Result<LimitResult, AsymptError> {
    let n = Symbol::n();
    let k = Symbol::k();
    if t.constant_bases().iter().any(|c| c.exponent.contains(&n)) {
        return Err(AsymptError::Unsupported("n-dependent constant power".into()));
    }
    let mut groups: BTreeMap<i64, (i64, Polynomial)> = BTreeMap::new();
    let mut rest = Vec::new();
    for g in t.gammas() {
        match g.arg.coeff_n {
            0 => rest.push(g.clone()),
            m if m > 0 => {
                let entry = groups.entry(m).or_insert((0, Polynomial::zero()));
                entry.0 += i64::from(g.exponent);
                let x = AffineArg { coeff_n: 0, ..g.arg.clone() }.to_poly();
                entry.1 += &x.scale(&Q::from_integer(g.exponent.into()));
            }
            _ => return Err(AsymptError::Unsupported(format!("negative n-coefficient in Γ({})", g.arg))),
        }
    }
    // Prefactor: leading behaviour in n.
    let (pn, pd) = (t.prefactor().numer(), t.prefactor().denom());
    let deg_n = pn.degree(&n) as i64 - pd.degree(&n) as i64;
    let lead = RationalFunction::new(pn.leading_coeff_in(&n), pd.leading_coeff_in(&n)).expect("nonzero leading coefficient");
    let mut e_total = Polynomial::int(deg_n);
    let mut base = t.base().clone();
    let mut powers: Vec<ConstantPower> = t.constant_bases().to_vec();
    for (m, (balance, e)) in &groups {
        if *balance != 0 {
            return Err(AsymptError::Unsupported(format!("unbalanced Gamma factors with n-coefficient {m}")));
        }
        e_total += e;
        if *m != 1 {
            let mq = RationalFunction::int(*m);
            let cs = e.coefficients(&k);
            if cs.len() > 2 {
                return Err(AsymptError::Unsupported("nonlinear k-dependence in n-exponent".into()));
            }
            let e0 = cs.first().cloned().unwrap_or_default();
            if let Some(ek) = cs.get(1) {
                let ek = ek
                    .as_constant()
                    .filter(|q| q.is_integer())
                    .ok_or_else(|| AsymptError::Unsupported("non-integer k-coefficient in n-exponent".into()))?;
                let ek: i32 = num_traits::ToPrimitive::to_i32(&ek.to_integer())
                    .ok_or_else(|| AsymptError::Unsupported("exponent too large".into()))?;
                base = &base * &mq.pow(ek).expect("nonzero");
            }
            powers.push(ConstantPower { base: mq, exponent: e0 });
        }
    }
    let limit = HyperTerm::new(base, rest, lead, powers);
    let ks = e_total.coefficients(&k);
    if ks.len() > 2 {
        return Err(AsymptError::Unsupported("nonlinear k-dependence in n-exponent".into()));
    }
    let e0 = ks.first().cloned().unwrap_or_default();
    let ek = ks.get(1).cloned().unwrap_or_default();
    let cond = |p: Polynomial, strict: bool| {
        ConvergenceCondition::new(p, strict).map_err(|e| AsymptError::Unsupported(e.to_string()))
    };
    if e_total.is_zero() {
        return Ok(LimitResult {
            kind: LimitKind::Finite,
            limit_term: Some(limit),
            n_exponent: e_total,
            conditions: Conditions::new(),
        });
    }
    if e0.is_zero() {
        let c = cond(ek.clone(), true)?;
        if c.constant_truth() == Some(false) {
            return Ok(LimitResult { kind: LimitKind::Divergent, limit_term: None, n_exponent: e_total, conditions: Conditions::new() });
        }
        let at0 = limit.substitute_k0();
        return Ok(LimitResult {
            kind: LimitKind::DeltaK0,
            limit_term: Some(at0),
            n_exponent: e_total,
            conditions: Conditions::from_vec(vec![c]),
        });
    }
    let mut cs = Conditions::new();
    cs.add(cond(e0, true)?);
    if !ek.is_zero() {
        cs.add(cond(ek, false)?);
    }
    let kind = if cs.is_contradictory() { LimitKind::Divergent } else { LimitKind::Zero };
    Ok(LimitResult { kind, limit_term: None, n_exponent: e_total, conditions: if kind == LimitKind::Zero { cs } else { Conditions::new() } })
}

impl HyperTerm {
    /// The term at `k = 0` (a term free of `k`).
    pub fn substitute_k0(&self) -> HyperTerm {
        let k = Symbol::k();
        let gs = self
            .gammas()
            .iter()
            .map(|g| GammaFactor::new(AffineArg { coeff_k: 0, ..g.arg.clone() }, g.exponent))
            .collect();
        let pre = self.prefactor().substitute(&k, &Polynomial::zero()).unwrap_or_else(RationalFunction::zero);
        HyperTerm::new(RationalFunction::one(), gs, pre, self.constant_bases().to_vec())
    }

    /// True if the term is the exact constant 1.
    pub fn is_exactly_one(&self) -> bool {
        self.gammas().is_empty()
            && self.prefactor().is_one()
            && self.constant_bases().is_empty()
            && self.base().is_one()
    }
}

/// The majorant used to justify exchanging `lim_n` and `sum_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominationReport {
    /// Numerator/denominator Pochhammer arguments bounded pairwise.
    pub pairs: Vec<(Polynomial, Polynomial)>,
    /// `n`-dependent denominator Pochhammers left unpaired; each decays
    /// factorially in `k` once `n` is large.
    pub leftover_lower: Vec<Polynomial>,
    /// The `n`-free part of the term, which dominates after the bounds.
    pub majorant: PochhammerForm,
    /// Growth exponent of the majorant when summability depends on it.
    pub majorant_exponent: Option<Polynomial>,
    /// Limit class of the `k`-free, `n`-dependent coefficient (e.g. `1/S(n)`),
    /// which makes it bounded for large `n` by an unspecified constant.
    pub coefficient_limit: LimitKind,
    pub notes: Vec<String>,
}

impl fmt::Display for DominationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|F(n,k)| <= A * |{}|", self.majorant)?;
        if !self.pairs.is_empty() {
            let ps: Vec<String> = self.pairs.iter().map(|(u, l)| format!("({u})_k/({l})_k")).collect();
            write!(f, "; bounded ratios {}", ps.join(", "))?;
        }
        if !self.leftover_lower.is_empty() {
            let ls: Vec<String> = self.leftover_lower.iter().map(|l| format!("1/({l})_k")).collect();
            write!(f, "; factorial decay from {}", ls.join(", "))?;
        }
        if let Some(e) = &self.majorant_exponent {
            write!(f, "; majorant ~ k^({e})")?;
        }
        Ok(())
    }
}

/// Looks for an `n`-independent summable majorant of `t(n,k)` valid for all
/// large `n`.
///
/// Each `n`-dependent numerator Pochhammer is paired with a denominator of
/// the same `n`-coefficient; the ratio is at most 1 in modulus when
/// `Re(u - l) <= 0`. Unpaired `n`-dependent denominators decay factorially,
/// which makes the pair conditions unnecessary. The `k`-free coefficient must
/// have a finite or zero limit.
pub fn domination_check(t: &HyperTerm, limit: &LimitResult) -> Result<(DominationReport, Conditions), AsymptError> {
    if !matches!(limit.kind, LimitKind::Finite | LimitKind::DeltaK0) {
        return Err(AsymptError::Unsupported(format!("termwise limit is {}", limit.kind)));
    }
    let n = Symbol::n();
    let form = t
        .pochhammer_form()
        .ok_or_else(|| AsymptError::NoMajorant("Gamma factor with non-unit k-coefficient".into()))?;
    if form.prefactor.contains(&n) {
        return Err(AsymptError::NoMajorant("n-dependent rational prefactor".into()));
    }
    let geometric = base_kind(&form.z)?;
    if geometric == Geometric::Growth {
        return Err(AsymptError::NoMajorant("|z| > 1".into()));
    }
    let n_coeff = |p: &Polynomial| -> i64 {
        AffineArg::from_poly(p).map(|a| a.coeff_n).unwrap_or(0)
    };
    let (upper_n, upper_free): (Vec<_>, Vec<_>) = form.upper.iter().cloned().partition(|u| u.contains(&n));
    let (mut lower_n, lower_free): (Vec<_>, Vec<_>) = form.lower.iter().cloned().partition(|l| l.contains(&n));
    let mut pairs = Vec::new();
    for u in upper_n {
        let m = n_coeff(&u);
        let Some(pos) = lower_n.iter().position(|l| n_coeff(l) == m) else {
            return Err(AsymptError::NoMajorant(format!("numerator ({u})_k has no matching denominator")));
        };
        let l = lower_n.remove(pos);
        pairs.push((u, l));
    }
    let mut conditions = Conditions::new();
    let mut notes = vec!["the constant A exists for n >= n0; finitely many n < n0 do not affect the limit".to_string()];

    // The k-free coefficient: bounded when its limit is finite or zero.
    let coeff = HyperTerm::new(RationalFunction::one(), form.coefficient.clone(), RationalFunction::one(), Vec::new());
    let coeff_limit = n_limit(&coeff)?;
    match coeff_limit.kind {
        LimitKind::Finite => {}
        LimitKind::Zero => conditions.extend(&coeff_limit.conditions),
        other => return Err(AsymptError::NoMajorant(format!("k-free coefficient has {other} limit"))),
    }

    let majorant = PochhammerForm {
        upper: upper_free.clone(),
        lower: lower_free.clone(),
        z: form.z.clone(),
        coefficient: Vec::new(),
        prefactor: form.prefactor.clone(),
        constant_bases: Vec::new(),
    };
    let mut majorant_exponent = None;
    if !lower_n.is_empty() {
        notes.push("unpaired n-dependent denominators make the bound decay faster than any fixed power of k once n is large".into());
    } else if geometric == Geometric::Decay {
        notes.push("|z| < 1 gives geometric decay in k".into());
    } else {
        for (u, l) in &pairs {
            let c = ConvergenceCondition::le0(u - l).map_err(|e| AsymptError::Unsupported(e.to_string()))?;
            if c.constant_truth() == Some(false) {
                return Err(AsymptError::NoMajorant(format!("({u})_k/({l})_k is unbounded")));
            }
            conditions.add(c);
        }
        match upper_free.len().cmp(&lower_free.len()) {
            std::cmp::Ordering::Less => notes.push("majorant decays factorially".into()),
            std::cmp::Ordering::Greater => return Err(AsymptError::NoMajorant("majorant grows factorially".into())),
            std::cmp::Ordering::Equal => {
                let mut e = Polynomial::int(form.prefactor.degree_in(&Symbol::k()));
                for u in &upper_free {
                    e += u;
                }
                for l in &lower_free {
                    e -= l;
                }
                let c = ConvergenceCondition::lt0(&e + &Polynomial::one()).map_err(|x| AsymptError::Unsupported(x.to_string()))?;
                if c.constant_truth() == Some(false) {
                    return Err(AsymptError::NoMajorant(format!("majorant ~ k^({e}) is not summable")));
                }
                conditions.add(c);
                majorant_exponent = Some(e);
            }
        }
    }
    let report = DominationReport {
        pairs,
        leftover_lower: lower_n,
        majorant,
        majorant_exponent,
        coefficient_limit: coeff_limit.kind,
        notes,
    };
    Ok((report, conditions))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    fn cond(s: &str) -> ConvergenceCondition {
        ConvergenceCondition::parse(s).unwrap()
    }

    #[test]
    fn canonical_condition_display() {
        assert_eq!(ConvergenceCondition::lt0(p("2*b-2")).unwrap().to_string(), "Re(b) < 1");
        assert_eq!(ConvergenceCondition::lt0(p("b")).unwrap().to_string(), "Re(b) < 0");
        assert_eq!(ConvergenceCondition::le0(p("b-1")).unwrap().to_string(), "Re(b) <= 1");
        assert_eq!(ConvergenceCondition::lt0(p("-2-a+2*b+2*c")).unwrap().to_string(), "Re(2+a-2b-2c) > 0");
        assert_eq!(ConvergenceCondition::lt0(p("a+b-c")).unwrap().to_string(), "Re(c-a-b) > 0");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["Re(b) < 1", "Re(2+a-2b-2c) > 0", "Re(c-a-b) > 0", "Re(b) <= 1"] {
            assert_eq!(cond(s).to_string(), s);
        }
        assert_eq!(cond("Re(2*b-2) < 0"), cond("Re(b) < 1"));
        assert!(ConvergenceCondition::parse("b < 1").is_err());
        assert!(ConvergenceCondition::parse("Re(b*b) < 1").is_err());
    }

    #[test]
    fn implication_and_simplification() {
        assert!(cond("Re(b) < 0").implies(&cond("Re(b) < 1")));
        assert!(cond("Re(b) < 0").implies(&cond("Re(b) <= 1")));
        assert!(!cond("Re(b) < 1").implies(&cond("Re(b) < 0")));
        assert!(cond("Re(b) <= 0").implies(&cond("Re(b) < 1")));
        assert!(!cond("Re(b) <= 1").implies(&cond("Re(b) < 1")));
        let cs = Conditions::from_vec(vec![cond("Re(b) <= 1"), cond("Re(b) < 0")]);
        assert_eq!(cs.to_string(), "Re(b) < 0");
    }

    #[test]
    fn gamma_ratio_exponent() {
        let t = HyperTerm::from_gammas(vec![
            GammaFactor::new(AffineArg::new(0, 1, p("a")).unwrap(), 1),
            GammaFactor::new(AffineArg::new(0, 1, p("b")).unwrap(), -1),
        ]);
        assert_eq!(k_growth_exponent(&t).unwrap().exponent, p("a-b"));
    }

    #[test]
    fn constant_term_does_not_vanish() {
        let t = HyperTerm::one();
        assert_eq!(k_limit_zero(&t).unwrap(), (false, Conditions::new()));
    }

    #[test]
    fn errors_on_unsupported_shapes() {
        let t = HyperTerm::from_gammas(vec![GammaFactor::new(AffineArg::new(0, 2, p("a")).unwrap(), 1)]);
        assert!(matches!(k_growth_exponent(&t), Err(AsymptError::NonUnitK(_))));
        let u = HyperTerm::from_gammas(vec![GammaFactor::new(AffineArg::new(0, 1, p("a")).unwrap(), 1)]);
        assert_eq!(k_growth_exponent(&u), Err(AsymptError::Unbalanced));
    }

    #[test]
    fn n_free_term_has_itself_as_limit() {
        let t = HyperTerm::from_pfq(&[p("b")], &[], RationalFunction::int(-1)).unwrap();
        let l = n_limit(&t).unwrap();
        assert_eq!(l.kind, LimitKind::Finite);
        assert_eq!(l.limit_term.unwrap(), t);
    }
}
