//! Proper hypergeometric terms: `z^k * prod Γ(arg)^e * prefactor * prod c^x`
//! with Gamma arguments affine in `n` and `k`.
//!
//! Pochhammer symbols are rewritten eagerly as `(x)_k = Γ(x+k)/Γ(x)` and
//! `k!` is `Γ(1+k)`, so every term has one normal form.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::algebra::{ParamField, Polynomial, RationalFunction, Symbol, Q};
use crate::asympt::ConvergenceCondition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("improper term: {0}")]
    Improper(String),
    #[error("{0} is not affine in n and k with integer coefficients")]
    NotAffine(String),
    #[error("invalid theorem: {0}")]
    InvalidSpec(String),
}

/// `coeff_n*n + coeff_k*k + constant`, the constant free of `n` and `k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineArg {
    pub coeff_n: i64,
    pub coeff_k: i64,
    pub constant: Polynomial,
}

impl AffineArg {
    pub fn new(coeff_n: i64, coeff_k: i64, constant: Polynomial) -> Result<Self, TermError> {
        if constant.contains(&Symbol::n()) || constant.contains(&Symbol::k()) {
            return Err(TermError::NotAffine(constant.to_string()));
        }
        Ok(AffineArg { coeff_n, coeff_k, constant })
    }

    /// Splits a polynomial into its `n`, `k` and constant parts.
    pub fn from_poly(p: &Polynomial) -> Result<Self, TermError> {
        let n = Symbol::n();
        let k = Symbol::k();
        let int_coeff = |v: &Symbol| -> Result<(i64, Polynomial), TermError> {
            let cs = p.coefficients(v);
            match cs.len() {
                0 | 1 => Ok((0, p.clone())),
                2 => {
                    let c = cs[1]
                        .as_constant()
                        .filter(|c| c.is_integer())
                        .and_then(|c| c.to_integer().to_i64())
                        .ok_or_else(|| TermError::NotAffine(p.to_string()))?;
                    Ok((c, cs[0].clone()))
                }
                _ => Err(TermError::NotAffine(p.to_string())),
            }
        };
        let (coeff_k, rest) = int_coeff(&k)?;
        let (coeff_n, _) = int_coeff(&n)?;
        let constant = rest.coefficients(&n).into_iter().next().unwrap_or_default();
        AffineArg::new(coeff_n, coeff_k, constant)
    }

    pub fn to_poly(&self) -> Polynomial {
        let mut p = self.constant.clone();
        p += &Polynomial::var(Symbol::n()).scale(&Q::from_integer(self.coeff_n.into()));
        p += &Polynomial::var(Symbol::k()).scale(&Q::from_integer(self.coeff_k.into()));
        p
    }

    /// Integer coefficient of `var` (`n`, `k` or a parameter).
    pub fn coeff_of(&self, var: &Symbol) -> Result<i64, TermError> {
        if var.is_n() {
            return Ok(self.coeff_n);
        }
        if var.is_k() {
            return Ok(self.coeff_k);
        }
        let cs = self.constant.coefficients(var);
        match cs.len() {
            0 | 1 => Ok(0),
            2 => cs[1]
                .as_constant()
                .filter(|c| c.is_integer())
                .and_then(|c| c.to_integer().to_i64())
                .ok_or_else(|| TermError::Improper(format!("coefficient of {var} in {self} is not an integer"))),
            _ => Err(TermError::Improper(format!("{self} is not linear in {var}"))),
        }
    }

    fn is_one_or_two(&self) -> bool {
        self.coeff_n == 0 && self.coeff_k == 0 && (self.constant.is_one() || self.constant == Polynomial::int(2))
    }

    pub fn depends_on_n(&self) -> bool {
        self.coeff_n != 0
    }

    pub fn depends_on_k(&self) -> bool {
        self.coeff_k != 0
    }
}

impl fmt::Display for AffineArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl fmt::Debug for AffineArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `Γ(arg)^exponent`, exponent nonzero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GammaFactor {
    pub arg: AffineArg,
    pub exponent: i32,
}

impl GammaFactor {
    pub fn new(arg: AffineArg, exponent: i32) -> Self {
        GammaFactor { arg, exponent }
    }
}

/// `base^exponent` for a symbolic constant such as `2^b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ConstantPower {
    pub base: RationalFunction,
    pub exponent: Polynomial,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HyperTerm {
    base: RationalFunction,
    gammas: Vec<GammaFactor>,
    prefactor: RationalFunction,
    constant_bases: Vec<ConstantPower>,
}

fn merge_gammas(gs: impl IntoIterator<Item = GammaFactor>) -> Vec<GammaFactor> {
    let mut m: BTreeMap<AffineArg, i32> = BTreeMap::new();
    for g in gs {
        *m.entry(g.arg).or_default() += g.exponent;
    }
    // Γ(1) = Γ(2) = 1.
    m.into_iter()
        .filter(|(arg, e)| *e != 0 && !arg.is_one_or_two())
        .map(|(arg, exponent)| GammaFactor { arg, exponent })
        .collect()
}

fn merge_powers(cs: impl IntoIterator<Item = ConstantPower>) -> Vec<ConstantPower> {
    let mut m: BTreeMap<RationalFunction, Polynomial> = BTreeMap::new();
    for c in cs {
        if c.base.is_one() {
            continue;
        }
        let e = m.entry(c.base).or_default();
        *e += &c.exponent;
    }
    m.into_iter()
        .filter(|(_, e)| !e.is_zero())
        .map(|(base, exponent)| ConstantPower { base, exponent })
        .collect()
}

fn rising(x: &Polynomial, count: i64) -> (Vec<Polynomial>, Vec<Polynomial>) {
    // Γ(x+count)/Γ(x) as numerator/denominator factors.
    if count >= 0 {
        ((0..count).map(|i| x + &Polynomial::int(i)).collect(), Vec::new())
    } else {
        (Vec::new(), (1..=-count).map(|i| x - &Polynomial::int(i)).collect())
    }
}

impl HyperTerm {
    pub fn new(
        base: RationalFunction,
        gammas: Vec<GammaFactor>,
        prefactor: RationalFunction,
        constant_bases: Vec<ConstantPower>,
    ) -> Self {
        HyperTerm { base, gammas: merge_gammas(gammas), prefactor, constant_bases: merge_powers(constant_bases) }
    }

    pub fn one() -> Self {
        HyperTerm::new(RationalFunction::one(), Vec::new(), RationalFunction::one(), Vec::new())
    }

    pub fn from_gammas(gammas: Vec<GammaFactor>) -> Self {
        HyperTerm::new(RationalFunction::one(), gammas, RationalFunction::one(), Vec::new())
    }

    /// `prod (u_i)_k / prod (l_j)_k * z^k / k!`.
    pub fn from_pfq(upper: &[Polynomial], lower: &[Polynomial], z: RationalFunction) -> Result<Self, TermError> {
        let k = Polynomial::var(Symbol::k());
        let mut gs = Vec::new();
        for (list, sign) in [(upper, 1), (lower, -1)] {
            for x in list {
                if x.contains(&Symbol::k()) {
                    return Err(TermError::Improper(format!("Pochhammer argument {x} depends on k")));
                }
                gs.push(GammaFactor::new(AffineArg::from_poly(&(x + &k))?, sign));
                gs.push(GammaFactor::new(AffineArg::from_poly(x)?, -sign));
            }
        }
        gs.push(GammaFactor::new(AffineArg::new(0, 1, Polynomial::one())?, -1));
        Ok(HyperTerm::new(z, gs, RationalFunction::one(), Vec::new()))
    }

    pub fn base(&self) -> &RationalFunction {
        &self.base
    }

    pub fn gammas(&self) -> &[GammaFactor] {
        &self.gammas
    }

    pub fn prefactor(&self) -> &RationalFunction {
        &self.prefactor
    }

    pub fn constant_bases(&self) -> &[ConstantPower] {
        &self.constant_bases
    }

    pub fn is_zero(&self) -> bool {
        self.prefactor.is_zero()
    }

    pub fn mul(&self, other: &HyperTerm) -> HyperTerm {
        HyperTerm::new(
            &self.base * &other.base,
            self.gammas.iter().chain(&other.gammas).cloned().collect(),
            &self.prefactor * &other.prefactor,
            self.constant_bases.iter().chain(&other.constant_bases).cloned().collect(),
        )
    }

    /// `1/T`. Panics on the zero term.
    pub fn recip(&self) -> HyperTerm {
        HyperTerm::new(
            self.base.recip().expect("nonzero base"),
            self.gammas.iter().map(|g| GammaFactor::new(g.arg.clone(), -g.exponent)).collect(),
            self.prefactor.recip().expect("nonzero term"),
            self.constant_bases
                .iter()
                .map(|c| ConstantPower { base: c.base.clone(), exponent: -&c.exponent })
                .collect(),
        )
    }

    pub fn div(&self, other: &HyperTerm) -> HyperTerm {
        self.mul(&other.recip())
    }

    pub fn times(&self, r: &RationalFunction) -> HyperTerm {
        let mut t = self.clone();
        t.prefactor = &t.prefactor * r;
        t
    }

    pub fn with_constant_power(&self, base: RationalFunction, exponent: Polynomial) -> HyperTerm {
        let mut cs = self.constant_bases.clone();
        cs.push(ConstantPower { base, exponent });
        HyperTerm { constant_bases: merge_powers(cs), ..self.clone() }
    }

    pub fn depends_on(&self, v: &Symbol) -> bool {
        let in_gammas = self.gammas.iter().any(|g| {
            if v.is_n() {
                g.arg.coeff_n != 0
            } else if v.is_k() {
                g.arg.coeff_k != 0
            } else {
                g.arg.constant.contains(v)
            }
        });
        in_gammas
            || (v.is_k() && !self.base.is_one())
            || (!v.is_k() && self.base.contains(v))
            || self.prefactor.contains(v)
            || self.constant_bases.iter().any(|c| c.exponent.contains(v) || c.base.contains(v))
    }

    /// Parameters occurring anywhere in the term.
    pub fn params(&self) -> ParamField {
        let mut rfs: Vec<RationalFunction> = vec![self.base.clone(), self.prefactor.clone()];
        for g in &self.gammas {
            rfs.push(g.arg.constant.clone().into());
        }
        for c in &self.constant_bases {
            rfs.push(c.base.clone());
            rfs.push(c.exponent.clone().into());
        }
        ParamField::spanned_by(&rfs)
    }

    /// `T(var+1)/T(var)` as a rational function.
    /// The shift quotient in `var` as lists of linear numerator and
    /// denominator factors, when it has that shape: the prefactor and the
    /// constant powers must be free of `var` and, for `k`, the base must be
    /// a ratio of linear polynomials.
    pub fn shift_quotient_factors(&self, var: &Symbol) -> Result<Option<(Vec<Polynomial>, Vec<Polynomial>)>, TermError> {
        if self.prefactor.contains(var) || self.constant_bases.iter().any(|c| c.base.contains(var) || c.exponent.contains(var)) {
            return Ok(None);
        }
        let (mut num, mut den) = self.gamma_factors(var)?;
        if var.is_k() {
            if self.base.numer().total_degree() > 1 || self.base.denom().total_degree() > 1 {
                return Ok(None);
            }
            num.push(self.base.numer().clone());
            den.push(self.base.denom().clone());
        } else if self.base.contains(var) {
            return Err(TermError::Improper(format!("base {} depends on {var}", self.base)));
        }
        Ok(Some((num, den)))
    }

    fn gamma_factors(&self, var: &Symbol) -> Result<(Vec<Polynomial>, Vec<Polynomial>), TermError> {
        let mut num = Vec::new();
        let mut den = Vec::new();
        for g in &self.gammas {
            let c = g.arg.coeff_of(var)?;
            if c == 0 {
                continue;
            }
            let (p, q) = rising(&g.arg.to_poly(), c);
            let (up, down) = if g.exponent > 0 { (p, q) } else { (q, p) };
            for _ in 0..g.exponent.unsigned_abs() {
                num.extend(up.iter().cloned());
                den.extend(down.iter().cloned());
            }
        }
        Ok((num, den))
    }

    pub fn shift_quotient(&self, var: &Symbol) -> Result<RationalFunction, TermError> {
        let (num, den) = self.gamma_factors(var)?;
        let mut r = RationalFunction::from_linear_factors(&num, &den).expect("Gamma arguments are affine");
        if var.is_k() {
            r = &r * &self.base;
        } else if self.base.contains(var) {
            return Err(TermError::Improper(format!("base {} depends on {var}", self.base)));
        }
        if self.prefactor.contains(var) {
            let shifted = self.prefactor.shift(var, 1);
            r = &r * &(&shifted / &self.prefactor);
        }
        for cp in &self.constant_bases {
            if cp.base.contains(var) {
                return Err(TermError::Improper(format!("constant base {} depends on {var}", cp.base)));
            }
            if !cp.exponent.contains(var) {
                continue;
            }
            let d = &cp.exponent.shift(var, 1) - &cp.exponent;
            let m = d
                .as_constant()
                .filter(|q| q.is_integer())
                .and_then(|q| q.to_integer().to_i32())
                .ok_or_else(|| TermError::Improper(format!("exponent {} is not integral in {var}", cp.exponent)))?;
            r = &r * &cp.base.pow(m).expect("nonzero base");
        }
        Ok(r)
    }

    /// Replaces `var` by `value` in every argument and exponent.
    ///
    /// `var` may be `n` or a parameter; the base must not depend on it.
    pub fn substitute(&self, var: &Symbol, value: &Polynomial) -> Result<HyperTerm, TermError> {
        if var.is_k() || value.contains(&Symbol::k()) {
            return Err(TermError::Improper("substitution involving k".into()));
        }
        if self.base.contains(var) {
            return Err(TermError::Improper(format!("base {} depends on {var}", self.base)));
        }
        let mut gs = Vec::with_capacity(self.gammas.len());
        for g in &self.gammas {
            let p = g.arg.to_poly().substitute(var, value);
            gs.push(GammaFactor::new(AffineArg::from_poly(&p)?, g.exponent));
        }
        let prefactor = self
            .prefactor
            .substitute(var, value)
            .ok_or_else(|| TermError::Improper("prefactor denominator vanishes".into()))?;
        let mut cs = Vec::new();
        for c in &self.constant_bases {
            cs.push(ConstantPower {
                base: c.base.substitute(var, value).ok_or_else(|| TermError::Improper("constant base vanishes".into()))?,
                exponent: c.exponent.substitute(var, value),
            });
        }
        Ok(HyperTerm::new(self.base.clone(), gs, prefactor, cs))
    }

    /// `param -> param + step*n`. A term without `param` comes back unchanged.
    pub fn substitute_shift(&self, param: &Symbol, step: u32) -> Result<HyperTerm, TermError> {
        if !param.is_parameter() {
            return Err(TermError::Improper(format!("{param} is not a parameter")));
        }
        let value = &Polynomial::var(param.clone()) + &Polynomial::var(Symbol::n()).scale(&Q::from_integer(step.into()));
        self.substitute(param, &value)
    }

    /// `T(k + by)`.
    pub fn shift_k(&self, by: i64) -> HyperTerm {
        let k = Symbol::k();
        let value = &Polynomial::var(k.clone()) + &Polynomial::int(by);
        let gs = self
            .gammas
            .iter()
            .map(|g| {
                let p = g.arg.to_poly().substitute(&k, &value);
                GammaFactor::new(AffineArg::from_poly(&p).expect("shift keeps arguments affine"), g.exponent)
            })
            .collect();
        let by32 = i32::try_from(by).expect("shift fits in i32");
        let prefactor = &self.prefactor.shift(&k, by) * &self.base.pow(by32).expect("nonzero base");
        HyperTerm::new(self.base.clone(), gs, prefactor, self.constant_bases.clone())
    }

    /// The factors free of `n`: k-only Gamma factors, base, n-free prefactor
    /// (the whole prefactor if it is free of `n`, else 1) and constant powers.
    pub fn without_n_gammas(&self) -> HyperTerm {
        HyperTerm::new(
            self.base.clone(),
            self.gammas.iter().filter(|g| !g.arg.depends_on_n()).cloned().collect(),
            self.prefactor.clone(),
            self.constant_bases.clone(),
        )
    }

    /// Reads the term back as `coefficient * prod (u)_k / prod (l)_k * z^k`,
    /// with `k!` appearing as the lower argument `1`. Returns `None` when some
    /// Gamma factor has a `k` coefficient other than 0 or 1.
    pub fn pochhammer_form(&self) -> Option<PochhammerForm> {
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        let mut rest = Vec::new();
        for g in &self.gammas {
            match g.arg.coeff_k {
                0 => rest.push(g.clone()),
                1 => {
                    let x = &g.arg.to_poly() - &Polynomial::var(Symbol::k());
                    let list = if g.exponent > 0 { &mut upper } else { &mut lower };
                    for _ in 0..g.exponent.unsigned_abs() {
                        list.push(x.clone());
                    }
                    rest.push(GammaFactor::new(AffineArg::from_poly(&x).ok()?, g.exponent));
                }
                _ => return None,
            }
        }
        let coefficient = merge_gammas(rest);
        // Stable reading order: by printed form, `k!` last.
        upper.sort_by_key(|p: &Polynomial| p.to_string());
        lower.sort_by_key(|p: &Polynomial| (p.is_one(), p.to_string()));
        Some(PochhammerForm {
            upper,
            lower,
            z: self.base.clone(),
            coefficient,
            prefactor: self.prefactor.clone(),
            constant_bases: self.constant_bases.clone(),
        })
    }
}

/// A term read as Pochhammer symbols. See [`HyperTerm::pochhammer_form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PochhammerForm {
    pub upper: Vec<Polynomial>,
    pub lower: Vec<Polynomial>,
    pub z: RationalFunction,
    /// Gamma factors free of `k`.
    pub coefficient: Vec<GammaFactor>,
    pub prefactor: RationalFunction,
    pub constant_bases: Vec<ConstantPower>,
}

fn paren_if_compound(s: String) -> String {
    if s.chars().skip(1).any(|c| matches!(c, '+' | '-' | '*' | '/')) {
        format!("({s})")
    } else {
        s
    }
}

fn paren_sum(s: String) -> String {
    if s.chars().skip(1).any(|c| matches!(c, '+' | '-' | '/')) || s.starts_with('-') {
        format!("({s})")
    } else {
        s
    }
}

fn power_string(c: &ConstantPower) -> String {
    format!("{}^{}", paren_sum(c.base.to_string()), paren_if_compound(c.exponent.to_string()))
}

impl fmt::Display for PochhammerForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        num.extend(self.constant_bases.iter().map(power_string));
        for g in &self.coefficient {
            let s = format!("Γ({})", g.arg);
            let e = g.exponent.unsigned_abs();
            let s = if e == 1 { s } else { format!("{s}^{e}") };
            if g.exponent > 0 {
                num.push(s);
            } else {
                den.push(s);
            }
        }
        num.extend(self.upper.iter().map(|u| format!("({u})_k")));
        if !self.z.is_one() {
            num.push(format!("{}^k", paren_sum(self.z.to_string())));
        }
        if !self.prefactor.is_one() {
            num.push(paren_sum(self.prefactor.to_string()));
        }
        for l in &self.lower {
            if l.is_one() {
                den.push("k!".into());
            } else {
                den.push(format!("({l})_k"));
            }
        }
        let top = if num.is_empty() { "1".to_string() } else { num.join("*") };
        write!(f, "{top}")?;
        match den.len() {
            0 => Ok(()),
            1 => write!(f, "/{}", den[0]),
            _ => write!(f, "/({})", den.join("*")),
        }
    }
}

impl fmt::Display for HyperTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut num: Vec<String> = Vec::new();
        let mut den: Vec<String> = Vec::new();
        num.extend(self.constant_bases.iter().map(power_string));
        if !self.base.is_one() {
            num.push(format!("{}^k", paren_sum(self.base.to_string())));
        }
        for g in &self.gammas {
            let s = format!("Γ({})", g.arg);
            let e = g.exponent.unsigned_abs();
            let s = if e == 1 { s } else { format!("{s}^{e}") };
            if g.exponent > 0 {
                num.push(s);
            } else {
                den.push(s);
            }
        }
        if !self.prefactor.is_one() {
            num.push(paren_sum(self.prefactor.to_string()));
        }
        let top = if num.is_empty() { "1".to_string() } else { num.join("*") };
        write!(f, "{top}")?;
        match den.len() {
            0 => Ok(()),
            1 => write!(f, "/{}", den[0]),
            _ => write!(f, "/({})", den.join("*")),
        }
    }
}

impl fmt::Debug for HyperTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A summation theorem `sum_k pFq[upper; lower; z] = prod Γ(...)^±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremSpec {
    pub name: String,
    pub upper: Vec<Polynomial>,
    pub lower: Vec<Polynomial>,
    pub z: RationalFunction,
    pub rhs_gammas: Vec<GammaFactor>,
    pub conditions: Vec<ConvergenceCondition>,
}

impl TheoremSpec {
    pub fn validate(&self) -> Result<(), TermError> {
        let bad = |p: &Polynomial| p.contains(&Symbol::n()) || p.contains(&Symbol::k());
        if self.name.trim().is_empty() {
            return Err(TermError::InvalidSpec("empty name".into()));
        }
        if self.upper.iter().chain(&self.lower).any(bad) {
            return Err(TermError::InvalidSpec("series parameters must not contain n or k".into()));
        }
        if self.z.contains(&Symbol::n()) || self.z.contains(&Symbol::k()) {
            return Err(TermError::InvalidSpec("z must not contain n or k".into()));
        }
        if self.z.is_zero() {
            return Err(TermError::InvalidSpec("z must be nonzero".into()));
        }
        if self.rhs_gammas.iter().any(|g| g.arg.coeff_k != 0 || g.arg.coeff_n != 0) {
            return Err(TermError::InvalidSpec("right-hand side must be free of n and k".into()));
        }
        if self.rhs_gammas.iter().any(|g| g.exponent == 0) {
            return Err(TermError::InvalidSpec("zero Gamma exponent".into()));
        }
        Ok(())
    }

    pub fn lhs(&self) -> Result<HyperTerm, TermError> {
        HyperTerm::from_pfq(&self.upper, &self.lower, self.z.clone())
    }

    pub fn rhs(&self) -> HyperTerm {
        HyperTerm::from_gammas(self.rhs_gammas.clone())
    }

    /// `F(n,k) = f(n,k)/S(n)` after `param -> param + step*n` on both sides.
    pub fn wz_term(&self, param: &Symbol, step: u32) -> Result<HyperTerm, TermError> {
        let f = self.lhs()?.substitute_shift(param, step)?;
        let s = self.rhs().substitute_shift(param, step)?;
        Ok(f.div(&s))
    }

    pub fn params(&self) -> ParamField {
        let mut rfs: Vec<RationalFunction> = self.upper.iter().chain(&self.lower).cloned().map(Into::into).collect();
        rfs.push(self.z.clone());
        rfs.extend(self.rhs_gammas.iter().map(|g| g.arg.constant.clone().into()));
        ParamField::spanned_by(&rfs)
    }

    /// `pFq` shape label such as `2F1`.
    pub fn shape(&self) -> String {
        format!("{}F{}", self.upper.len(), self.lower.len())
    }
}

/// Rational `z` as a number, if it is one.
pub fn rational_base(z: &RationalFunction) -> Option<Q> {
    z.as_constant()
}

/// Sign-aware absolute comparison of a rational base against 1.
pub fn base_magnitude(z: &Q) -> std::cmp::Ordering {
    z.abs().cmp(&Q::one())
}
