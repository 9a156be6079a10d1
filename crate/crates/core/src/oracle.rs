//! High-precision numeric checks, independent of the symbolic machinery:
//! Spouge's Gamma function, term evaluation with exact Pochhammer
//! reduction, accelerated series sums and randomized identity checks.

use std::collections::BTreeMap;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Polynomial, RationalFunction, Symbol, Q};
use crate::asympt::k_growth_exponent;
use crate::hyperterm::{HyperTerm, TheoremSpec};

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("pole: {0}")]
    Pole(String),
    #[error("{0}")]
    Domain(String),
    #[error("series does not converge: {0}")]
    Divergent(String),
    #[error("no admissible sample found in the condition region")]
    EmptyRegion,
    #[error("mantissa must be at least 64 bits, got {0}")]
    Precision(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionConfig {
    pub bits: usize,
    /// Term budget for a single series.
    pub k_max: usize,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig { bits: 128, k_max: 200_000 }
    }
}

impl PrecisionConfig {
    pub fn new(bits: usize) -> Result<Self, OracleError> {
        if bits < 64 {
            return Err(OracleError::Precision(bits));
        }
        Ok(PrecisionConfig { bits, ..Default::default() })
    }

    /// Relative tolerance `2^(-bits/2)`.
    pub fn tolerance(&self) -> BigFloat {
        pow2(-((self.bits / 2) as i64), 64)
    }

    /// Working precision, with guard bits for cancellation.
    fn work(&self) -> usize {
        self.bits * 2 + 64
    }
}

fn pow2(e: i64, p: usize) -> BigFloat {
    let mut x = BigFloat::from_i64(1, p);
    x.set_exponent(x.exponent().unwrap_or(1) + e as i32);
    x
}

pub fn bigint_to_float(i: &BigInt, p: usize, cc: &mut Consts) -> BigFloat {
    match i.to_i128() {
        Some(v) => BigFloat::from_i128(v, p),
        None => BigFloat::parse(&i.to_string(), Radix::Dec, p, RM, cc),
    }
}

pub fn q_to_float(q: &Q, p: usize, cc: &mut Consts) -> BigFloat {
    bigint_to_float(q.numer(), p, cc).div(&bigint_to_float(q.denom(), p, cc), p, RM)
}

/// Decimal rendering with `digits` significant digits.
pub fn format_float(x: &BigFloat, digits: usize) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let s = x.to_string();
    // astro-float prints `1.2345...e-3`; trim the mantissa.
    match s.split_once('e') {
        Some((m, e)) => {
            let keep = m.chars().take(digits + 2 + usize::from(m.starts_with('-'))).collect::<String>();
            format!("{keep}e{e}")
        }
        None => s,
    }
}

/// `log2 |x|`, or `-inf` for zero.
pub fn log2_abs(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let e = x.exponent().unwrap_or(0) as f64;
    let m = x.mantissa_digits().and_then(|d| d.last().copied()).unwrap_or(1);
    e + ((m as f64) / 2f64.powi(64)).log2()
}

/// Evaluator with a cached Spouge coefficient table.
pub struct Oracle {
    cfg: PrecisionConfig,
    cc: Consts,
    spouge_a: usize,
    coeffs: Vec<BigFloat>,
}

impl Oracle {
    pub fn new(cfg: PrecisionConfig) -> Self {
        let mut cc = Consts::new().expect("constant cache");
        let p = cfg.work();
        // Relative error below a^(-1/2) (2π)^(-(a+1/2)).
        let spouge_a = (p as f64 * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI).ln()).ceil() as usize + 2;
        let wp = p + spouge_a * 2 + 64;
        let two_pi = cc.pi(wp, RM).mul(&BigFloat::from_i64(2, wp), wp, RM);
        let mut coeffs = vec![two_pi.sqrt(wp, RM)];
        let mut fact = BigFloat::from_i64(1, wp);
        let a = BigFloat::from_i64(spouge_a as i64, wp);
        for k in 1..spouge_a {
            if k > 1 {
                fact = fact.mul(&BigFloat::from_i64(k as i64 - 1, wp), wp, RM);
            }
            let ak = a.sub(&BigFloat::from_i64(k as i64, wp), wp, RM);
            let half = BigFloat::from_f64(0.5, wp);
            let pow = ak.ln(wp, RM, &mut cc).mul(&BigFloat::from_i64(k as i64, wp).sub(&half, wp, RM), wp, RM);
            let mut c = pow.add(&ak, wp, RM).exp(wp, RM, &mut cc).div(&fact, wp, RM);
            if k % 2 == 0 {
                c = c.neg();
            }
            coeffs.push(c);
        }
        Oracle { cfg, cc, spouge_a, coeffs }
    }

    pub fn config(&self) -> &PrecisionConfig {
        &self.cfg
    }

    fn p(&self) -> usize {
        self.cfg.work()
    }

    pub fn float(&mut self, q: &Q) -> BigFloat {
        let p = self.p();
        q_to_float(q, p, &mut self.cc)
    }

    pub fn pi(&mut self) -> BigFloat {
        let p = self.p();
        self.cc.pi(p, RM)
    }

    /// `Γ(x)` for real `x`, by Spouge's formula with reflection below 1/2.
    pub fn gamma(&mut self, x: &BigFloat) -> Result<BigFloat, OracleError> {
        let p = self.p();
        if x.is_int() && !x.is_positive() {
            return Err(OracleError::Pole(format!("Γ({})", format_float(x, 20))));
        }
        let half = BigFloat::from_f64(0.5, p);
        if x.cmp(&half) == Some(-1) {
            let pi = self.pi();
            let one = BigFloat::from_i64(1, p);
            let s = pi.mul(x, p, RM).sin(p, RM, &mut self.cc);
            let g = self.gamma(&one.sub(x, p, RM))?;
            return Ok(pi.div(&s.mul(&g, p, RM), p, RM));
        }
        let z = x.sub(&BigFloat::from_i64(1, p), p, RM);
        let mut sum = self.coeffs[0].clone();
        for k in 1..self.spouge_a {
            let d = z.add(&BigFloat::from_i64(k as i64, p), p, RM);
            sum = sum.add(&self.coeffs[k].div(&d, p, RM), p, RM);
        }
        let za = z.add(&BigFloat::from_i64(self.spouge_a as i64, p), p, RM);
        let e = z.add(&half, p, RM).mul(&za.ln(p, RM, &mut self.cc), p, RM).sub(&za, p, RM);
        Ok(e.exp(p, RM, &mut self.cc).mul(&sum, p, RM))
    }

    pub fn gamma_q(&mut self, x: &Q) -> Result<BigFloat, OracleError> {
        let f = self.float(x);
        self.gamma(&f)
    }

    /// `x^e` for rational `x`, `e`; real only.
    fn power(&mut self, x: &Q, e: &Q) -> Result<BigFloat, OracleError> {
        if e.is_integer() {
            let i = e.to_integer().to_i32().ok_or_else(|| OracleError::Domain("exponent too large".into()))?;
            if x.is_zero() {
                return if i > 0 {
                    Ok(BigFloat::from_i64(0, self.p()))
                } else if i == 0 {
                    Ok(BigFloat::from_i64(1, self.p()))
                } else {
                    Err(OracleError::Pole("0^negative".into()))
                };
            }
            let v = num_traits::pow::Pow::pow(x, i);
            return Ok(self.float(&v));
        }
        if !x.is_positive() {
            return Err(OracleError::Domain(format!("({x})^({e}) is not real")));
        }
        let p = self.p();
        let l = self.float(x).ln(p, RM, &mut self.cc);
        let ef = self.float(e);
        Ok(l.mul(&ef, p, RM).exp(p, RM, &mut self.cc))
    }

    /// `T` at the given parameter values and integer `n`, `k`.
    pub fn evaluate(&mut self, t: &HyperTerm, assign: &BTreeMap<Symbol, Q>, n: i64, k: i64) -> Result<BigFloat, OracleError> {
        let vals = with_nk(assign, n, k);
        let mut args = Vec::new();
        for g in t.gammas() {
            let x = g.arg.to_poly().eval(&vals).ok_or_else(|| OracleError::Domain(format!("unassigned symbol in Γ({})", g.arg)))?;
            args.push((x, g.exponent));
        }
        let (rational, rest) = gamma_product(&args)?;
        let pre = t
            .prefactor()
            .eval(&vals)
            .ok_or_else(|| OracleError::Pole(format!("prefactor {} at n={n}, k={k}", t.prefactor())))?;
        let z = t.base().eval(&vals).ok_or_else(|| OracleError::Domain("base".into()))?;
        let mut exact = &rational * &pre;
        if k != 0 {
            exact *= num_traits::pow::Pow::pow(&z, k as i32);
        }
        let mut out = self.float(&exact);
        if exact.is_zero() {
            return Ok(out);
        }
        let p = self.p();
        for (x, e) in rest {
            let g = self.gamma_q(&x)?;
            let g = if e > 0 { g.powi(e as usize, p, RM) } else { g.powi((-e) as usize, p, RM).reciprocal(p, RM) };
            out = out.mul(&g, p, RM);
        }
        for c in t.constant_bases() {
            let b = c.base.eval(&vals).ok_or_else(|| OracleError::Domain("constant base".into()))?;
            let e = c.exponent.eval(&vals).ok_or_else(|| OracleError::Domain("constant exponent".into()))?;
            let v = self.power(&b, &e)?;
            out = out.mul(&v, p, RM);
        }
        Ok(out)
    }

    /// Exact value when every Gamma factor reduces to rationals.
    pub fn evaluate_exact(t: &HyperTerm, assign: &BTreeMap<Symbol, Q>, n: i64, k: i64) -> Result<Option<Q>, OracleError> {
        let vals = with_nk(assign, n, k);
        let mut args = Vec::new();
        for g in t.gammas() {
            let x = g.arg.to_poly().eval(&vals).ok_or_else(|| OracleError::Domain(format!("unassigned symbol in Γ({})", g.arg)))?;
            args.push((x, g.exponent));
        }
        let (rational, rest) = gamma_product(&args)?;
        if !rest.is_empty() || !t.constant_bases().is_empty() {
            return Ok(None);
        }
        let pre = t.prefactor().eval(&vals).ok_or_else(|| OracleError::Pole("prefactor".into()))?;
        let z = t.base().eval(&vals).ok_or_else(|| OracleError::Domain("base".into()))?;
        Ok(Some(rational * pre * num_traits::pow::Pow::pow(&z, k as i32)))
    }

    /// `sum_{k=0}^{K} T(n,k)`, terms generated by the exact shift quotient.
    pub fn partial_sum(&mut self, t: &HyperTerm, assign: &BTreeMap<Symbol, Q>, n: i64, big_k: usize) -> Result<BigFloat, OracleError> {
        let mut terms = TermStream::new(self, t, assign, n)?;
        let mut acc = Neumaier::new(self.p());
        for _ in 0..=big_k {
            let x = terms.next_term(self)?;
            acc.add(&x);
        }
        Ok(acc.value())
    }

    /// Exact partial sum for terms that stay rational.
    pub fn partial_sum_exact(t: &HyperTerm, assign: &BTreeMap<Symbol, Q>, n: i64, big_k: usize) -> Result<Option<Q>, OracleError> {
        let Some(mut term) = Self::evaluate_exact(t, assign, n, 0)? else {
            return Ok(None);
        };
        let q = quotient_in_k(t, assign, n)?;
        let mut sum = Q::zero();
        for k in 0..=big_k {
            sum += &term;
            if k < big_k {
                term *= eval_k(&q, k as i64).map_err(|_| OracleError::Pole(format!("term at k={}", k + 1)))?;
            }
        }
        Ok(Some(sum))
    }

    /// Exact sum of a series that terminates within the term budget.
    /// `None` if it does not terminate or a term is not rational.
    pub fn series_sum_exact(&self, t: &HyperTerm, assign: &BTreeMap<Symbol, Q>, n: i64) -> Result<Option<Q>, OracleError> {
        let Some(mut term) = Self::evaluate_exact(t, assign, n, 0)? else {
            return Ok(None);
        };
        let q = quotient_in_k(t, assign, n)?;
        let mut sum = Q::zero();
        for k in 0..self.cfg.k_max {
            if term.is_zero() {
                return Ok(Some(sum));
            }
            sum += &term;
            term *= eval_k(&q, k as i64).map_err(|_| OracleError::Pole(format!("term at k={}", k + 1)))?;
        }
        Ok(None)
    }

    /// `sum_{k>=0} T(n,k)` to the configured precision.
    ///
    /// `|z| < 1`: direct summation. `|z| = 1`: alternating series are first
    /// paired, `H_j = T(2j) + T(2j+1)`, then the tail `K^γ (c_0 + c_1/K + ...)`
    /// of the partial sums is eliminated by Richardson extrapolation with the
    /// known exponent `γ`.
    pub fn series_sum(&mut self, t: &HyperTerm, assign: &BTreeMap<Symbol, Q>, n: i64) -> Result<BigFloat, OracleError> {
        let p = self.p();
        let vals = with_nk(assign, n, 0);
        let z = t.base().eval(&vals).ok_or_else(|| OracleError::Domain("base".into()))?;
        let mut terms = TermStream::new(self, t, assign, n)?;
        let tol = pow2(-(self.cfg.work() as i64) + 32, 64);
        if z.abs() < Q::one() {
            let mut acc = Neumaier::new(p);
            let mut small = 0;
            for _ in 0..self.cfg.k_max {
                let x = terms.next_term(self)?;
                acc.add(&x);
                if terms.terminated {
                    return Ok(acc.value());
                }
                let s = acc.value();
                let bound = s.abs().mul(&tol, p, RM);
                if x.abs().cmp(&bound).is_some_and(|c| c <= 0) {
                    small += 1;
                    if small > 8 {
                        return Ok(acc.value());
                    }
                } else {
                    small = 0;
                }
            }
            return Err(OracleError::Divergent(format!("no convergence within {} terms", self.cfg.k_max)));
        }
        if z.abs() > Q::one() {
            return Err(OracleError::Divergent(format!("|z| = |{z}| > 1")));
        }
        let est = k_growth_exponent(t).map_err(|e| OracleError::Domain(e.to_string()))?;
        let s = est.exponent.eval(&vals).ok_or_else(|| OracleError::Domain("exponent".into()))?;
        let alternating = z.is_negative();
        // H_j ~ j^(γ-1) with γ the tail exponent.
        let gamma = if alternating { s.clone() } else { &s + Q::one() };
        if !gamma.is_negative() {
            return Err(OracleError::Divergent(format!("terms ~ k^({s}) with z = {z}")));
        }
        let m = (self.cfg.bits / 6).max(12);
        let k0 = 30 * m;
        let h = 4 * m;
        let nodes: Vec<usize> = (0..=m).map(|i| k0 + i * h).collect();
        let last = *nodes.last().expect("nodes");
        let mut acc = Neumaier::new(p);
        let mut partial = Vec::with_capacity(nodes.len());
        let mut next_node = 0;
        for j in 0..last {
            let mut h_j = terms.next_term(self)?;
            if alternating {
                h_j = h_j.add(&terms.next_term(self)?, p, RM);
            }
            acc.add(&h_j);
            if terms.terminated {
                return Ok(acc.value());
            }
            if j + 1 == nodes[next_node] {
                partial.push(acc.value());
                next_node += 1;
            }
        }
        let g = self.float(&gamma);
        richardson(&partial, &nodes, &g, p, &mut self.cc)
    }

    /// Relative error `|a-b|/max(|a|,|b|)`, or the absolute error when both
    /// vanish to working precision.
    pub fn relative_error(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        let p = self.p();
        let d = a.sub(b, p, RM).abs();
        let m = if a.abs().cmp(&b.abs()).is_some_and(|c| c >= 0) { a.abs() } else { b.abs() };
        if m.is_zero() {
            d
        } else {
            d.div(&m, p, RM)
        }
    }
}

fn with_nk(assign: &BTreeMap<Symbol, Q>, n: i64, k: i64) -> BTreeMap<Symbol, Q> {
    let mut v = assign.clone();
    v.insert(Symbol::n(), Q::from_integer(n.into()));
    v.insert(Symbol::k(), Q::from_integer(k.into()));
    v
}

/// The shift quotient in `k` with everything else substituted.
fn quotient_in_k(t: &HyperTerm, assign: &BTreeMap<Symbol, Q>, n: i64) -> Result<RationalFunction, OracleError> {
    let q = t.shift_quotient(&Symbol::k()).map_err(|e| OracleError::Domain(e.to_string()))?;
    let mut vals = assign.clone();
    vals.insert(Symbol::n(), Q::from_integer(n.into()));
    q.eval_partial(&vals).ok_or_else(|| OracleError::Pole("shift quotient vanishes identically".into()))
}

fn eval_k(q: &RationalFunction, k: i64) -> Result<Q, OracleError> {
    let mut v = BTreeMap::new();
    v.insert(Symbol::k(), Q::from_integer(k.into()));
    q.eval(&v).ok_or_else(|| OracleError::Pole(format!("term ratio at k={k}")))
}

/// Successive terms `T(n,0), T(n,1), ...` by the exact ratio.
struct TermStream {
    q: RationalFunction,
    current: BigFloat,
    k: i64,
    terminated: bool,
}

impl TermStream {
    fn new(o: &mut Oracle, t: &HyperTerm, assign: &BTreeMap<Symbol, Q>, n: i64) -> Result<Self, OracleError> {
        let current = o.evaluate(t, assign, n, 0)?;
        let q = quotient_in_k(t, assign, n)?;
        Ok(TermStream { q, terminated: current.is_zero(), current, k: 0 })
    }

    fn next_term(&mut self, o: &mut Oracle) -> Result<BigFloat, OracleError> {
        let p = o.p();
        let out = self.current.clone();
        if self.terminated {
            return Ok(out);
        }
        // The ratio is reduced, so a vanishing denominator is a pole of T(k+1).
        let r = eval_k(&self.q, self.k).map_err(|_| OracleError::Pole(format!("term at k={}", self.k + 1)))?;
        if r.is_zero() {
            self.terminated = true;
        }
        let rf = o.float(&r);
        self.current = self.current.mul(&rf, p, RM);
        self.k += 1;
        Ok(out)
    }
}

/// Neumaier-compensated sum.
struct Neumaier {
    p: usize,
    sum: BigFloat,
    comp: BigFloat,
}

impl Neumaier {
    fn new(p: usize) -> Self {
        Neumaier { p, sum: BigFloat::from_i64(0, p), comp: BigFloat::from_i64(0, p) }
    }

    fn add(&mut self, x: &BigFloat) {
        let p = self.p;
        let t = self.sum.add(x, p, RM);
        let c = if self.sum.abs().cmp(&x.abs()).is_some_and(|c| c >= 0) {
            self.sum.sub(&t, p, RM).add(x, p, RM)
        } else {
            x.sub(&t, p, RM).add(&self.sum, p, RM)
        };
        self.comp = self.comp.add(&c, p, RM);
        self.sum = t;
    }

    fn value(&self) -> BigFloat {
        self.sum.add(&self.comp, self.p, RM)
    }
}

/// Solves `S(K_i) = S + K_i^γ sum_{l<m} c_l K_i^(-l)` for `S`.
fn richardson(partial: &[BigFloat], nodes: &[usize], gamma: &BigFloat, p: usize, cc: &mut Consts) -> Result<BigFloat, OracleError> {
    let m = nodes.len();
    let mut a: Vec<Vec<BigFloat>> = Vec::with_capacity(m);
    for (i, &kk) in nodes.iter().enumerate() {
        let kf = BigFloat::from_i64(kk as i64, p);
        let inv = kf.reciprocal(p, RM);
        let mut row = vec![BigFloat::from_i64(1, p)];
        let mut x = gamma.mul(&kf.ln(p, RM, cc), p, RM).exp(p, RM, cc);
        for _ in 1..m {
            row.push(x.clone());
            x = x.mul(&inv, p, RM);
        }
        row.push(partial[i].clone());
        a.push(row);
    }
    // Gaussian elimination with partial pivoting.
    for col in 0..m {
        let piv = (col..m)
            .max_by(|&i, &j| a[i][col].abs().cmp(&a[j][col].abs()).unwrap_or(0).cmp(&0))
            .expect("rows");
        if a[piv][col].is_zero() {
            return Err(OracleError::Domain("singular extrapolation system".into()));
        }
        a.swap(col, piv);
        for r in 0..m {
            if r == col {
                continue;
            }
            let f = a[r][col].div(&a[col][col], p, RM);
            if f.is_zero() {
                continue;
            }
            for c in col..=m {
                let v = a[col][c].mul(&f, p, RM);
                a[r][c] = a[r][c].sub(&v, p, RM);
            }
        }
    }
    Ok(a[0][m].div(&a[0][0], p, RM))
}

/// Splits `prod Γ(x_i)^e_i` into an exact rational and Gamma powers at
/// representatives. Arguments differing by integers are reduced to a
/// common base by Pochhammer products; integer arguments are evaluated
/// exactly, with poles cancelling in pairs.
pub fn gamma_product(args: &[(Q, i32)]) -> Result<(Q, Vec<(Q, i32)>), OracleError> {
    let mut classes: BTreeMap<Q, Vec<(Q, i32)>> = BTreeMap::new();
    for (x, e) in args {
        if *e == 0 {
            continue;
        }
        let frac = x - Q::from_integer(x.floor().to_integer());
        classes.entry(frac).or_default().push((x.clone(), *e));
    }
    let mut rational = Q::one();
    let mut rest = Vec::new();
    for (frac, items) in classes {
        if frac.is_zero() {
            rational *= integer_gamma_product(&items)?;
            continue;
        }
        let base = items.iter().map(|(x, _)| x.clone()).min().expect("nonempty class");
        let mut total = 0i32;
        for (x, e) in &items {
            let m = (x - &base).to_integer().to_u64().ok_or_else(|| OracleError::Domain("Gamma argument spread".into()))?;
            let poch = pochhammer(&base, m);
            rational *= if *e > 0 { num_traits::pow::Pow::pow(&poch, *e) } else { num_traits::pow::Pow::pow(&poch.recip(), -*e) };
            total += e;
        }
        if total != 0 {
            rest.push((base, total));
        }
    }
    Ok((rational, rest))
}

fn pochhammer(x: &Q, m: u64) -> Q {
    let mut out = Q::one();
    let mut y = x.clone();
    for _ in 0..m {
        out *= &y;
        y += Q::one();
    }
    out
}

fn integer_gamma_product(items: &[(Q, i32)]) -> Result<Q, OracleError> {
    let order: i64 = items.iter().filter(|(x, _)| !x.is_positive()).map(|(_, e)| i64::from(*e)).sum();
    if order > 0 {
        let poles: Vec<String> = items.iter().filter(|(x, _)| !x.is_positive()).map(|(x, _)| format!("Γ({x})")).collect();
        return Err(OracleError::Pole(poles.join(", ")));
    }
    if order < 0 {
        return Ok(Q::zero());
    }
    // Positive arguments through a common base; poles through residues
    // (-1)^m/m! of Γ at -m.
    let positive: Vec<&(Q, i32)> = items.iter().filter(|(x, _)| x.is_positive()).collect();
    let mut out = Q::one();
    if let Some(base) = positive.iter().map(|(x, _)| x.clone()).min() {
        let mut total = 0i32;
        for (x, e) in &positive {
            let m = (x - &base).to_integer().to_u64().expect("integer spread");
            let poch = pochhammer(&base, m);
            out *= if *e > 0 { num_traits::pow::Pow::pow(&poch, *e) } else { num_traits::pow::Pow::pow(&poch.recip(), -*e) };
            total += e;
        }
        let b = base.to_integer().to_u64().expect("positive integer");
        let fact = Q::from_integer((1..b).fold(BigInt::one(), |acc, i| acc * BigInt::from(i)));
        out *= if total >= 0 { num_traits::pow::Pow::pow(&fact, total) } else { num_traits::pow::Pow::pow(&fact.recip(), -total) };
    }
    for (x, e) in items.iter().filter(|(x, _)| !x.is_positive()) {
        let m = (-x).to_integer().to_u64().expect("nonpositive integer");
        let fact = (1..=m).fold(BigInt::one(), |acc, i| acc * BigInt::from(i));
        let res = if m.is_even() { Q::from_integer(fact).recip() } else { -Q::from_integer(fact).recip() };
        out *= if *e > 0 { num_traits::pow::Pow::pow(&res, *e) } else { num_traits::pow::Pow::pow(&res.recip(), -*e) };
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
    pub abs_error: String,
    pub rel_error: String,
    pub rel_error_log2: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericReport {
    pub theorem: String,
    pub bits: usize,
    pub tolerance_log2: i64,
    pub records: Vec<CheckRecord>,
}

impl NumericReport {
    pub fn passed(&self) -> bool {
        !self.records.is_empty() && self.records.iter().all(|r| r.pass)
    }
}

impl std::fmt::Display for NumericReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "numeric check of {} at {} bits, tolerance 2^{}", self.theorem, self.bits, self.tolerance_log2)?;
        for r in &self.records {
            writeln!(
                f,
                "{} {} [{}]: lhs {} rhs {} rel.err {}",
                if r.pass { "pass" } else { "FAIL" },
                r.check,
                r.inputs,
                r.lhs,
                r.rhs,
                r.rel_error
            )?;
        }
        Ok(())
    }
}

fn describe(assign: &BTreeMap<Symbol, Q>) -> String {
    assign.iter().map(|(s, q)| format!("{s}={q}")).collect::<Vec<_>>().join(", ")
}

impl Oracle {
    /// Exact comparison when the series terminates and the right-hand side
    /// reduces to a rational number.
    pub fn check_exact_at(&self, spec: &TheoremSpec, assign: &BTreeMap<Symbol, Q>) -> Result<Option<CheckRecord>, OracleError> {
        let lhs_t = spec.lhs().map_err(|e| OracleError::Domain(e.to_string()))?;
        let Some(lhs) = self.series_sum_exact(&lhs_t, assign, 0)? else {
            return Ok(None);
        };
        let Some(rhs) = Self::evaluate_exact(&spec.rhs(), assign, 0, 0)? else {
            return Ok(None);
        };
        let pass = lhs == rhs;
        let diff = (&lhs - &rhs).abs();
        let rel = if rhs.is_zero() { diff.clone() } else { &diff / rhs.abs() };
        Ok(Some(CheckRecord {
            check: "identity (exact)".into(),
            inputs: describe(assign),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            abs_error: diff.to_string(),
            rel_error: rel.to_string(),
            rel_error_log2: if rel.is_zero() { f64::NEG_INFINITY } else { rel.to_f64().unwrap_or(f64::NAN).log2() },
            pass,
        }))
    }

    /// Compares two values at the configured tolerance.
    pub fn compare(&self, check: &str, inputs: String, lhs: &BigFloat, rhs: &BigFloat) -> CheckRecord {
        self.record(check, inputs, lhs, rhs)
    }

    fn record(&self, check: &str, inputs: String, lhs: &BigFloat, rhs: &BigFloat) -> CheckRecord {
        let p = self.p();
        let abs = lhs.sub(rhs, p, RM).abs();
        let rel = self.relative_error(lhs, rhs);
        let tol = self.cfg.tolerance();
        CheckRecord {
            check: check.into(),
            inputs,
            lhs: format_float(lhs, 30),
            rhs: format_float(rhs, 30),
            abs_error: format_float(&abs, 3),
            rel_error: format_float(&rel, 3),
            rel_error_log2: log2_abs(&rel),
            pass: rel.cmp(&tol).is_some_and(|c| c <= 0),
        }
    }

    /// Compares the series with the Gamma product at one parameter point.
    pub fn check_identity_at(&mut self, spec: &TheoremSpec, assign: &BTreeMap<Symbol, Q>) -> Result<CheckRecord, OracleError> {
        let lhs_t = spec.lhs().map_err(|e| OracleError::Domain(e.to_string()))?;
        let lhs = self.series_sum(&lhs_t, assign, 0)?;
        let rhs = self.evaluate(&spec.rhs(), assign, 0, 0)?;
        Ok(self.record("identity", describe(assign), &lhs, &rhs))
    }

    /// `F(n,k) - F(n+1,k) = G(n,k+1) - G(n,k)` at one point, `G = C F`.
    pub fn check_wz_at(&mut self, f: &HyperTerm, c: &RationalFunction, assign: &BTreeMap<Symbol, Q>, n: i64, k: i64) -> Result<CheckRecord, OracleError> {
        let p = self.p();
        let g = f.times(c);
        let lhs = self.evaluate(f, assign, n, k)?.sub(&self.evaluate(f, assign, n + 1, k)?, p, RM);
        let rhs = self.evaluate(&g, assign, n, k + 1)?.sub(&self.evaluate(&g, assign, n, k)?, p, RM);
        Ok(self.record("wz", format!("{}, n={n}, k={k}", describe(assign)), &lhs, &rhs))
    }
}

/// Draws a rational point strictly inside the stated conditions (margin
/// 1/4) that keeps every lower parameter and right-hand Gamma argument away
/// from the poles.
pub fn sample_point(spec: &TheoremSpec, rng: &mut ChaCha8Rng) -> Result<BTreeMap<Symbol, Q>, OracleError> {
    let params = spec.params();
    let margin = Q::new(1.into(), 4.into());
    let dens = [3i64, 5, 7, 11, 13];
    let lhs = spec.lhs().map_err(|e| OracleError::Domain(e.to_string()))?;
    for _ in 0..10_000 {
        let mut assign = BTreeMap::new();
        for s in params.params() {
            let d = dens[rng.gen_range(0..dens.len())];
            let num = rng.gen_range(-2 * d..=2 * d);
            assign.insert(s.clone(), Q::new(num.into(), d.into()));
        }
        let inside = spec.conditions.iter().all(|c| {
            c.form().eval(&assign).is_some_and(|v| if c.is_strict() { v < -margin.clone() } else { v <= -margin.clone() })
        });
        if !inside {
            continue;
        }
        let vals = with_nk(&assign, 0, 0);
        let away = |x: &Polynomial| x.eval(&vals).is_some_and(|v| !(v <= Q::zero() && (&v - Q::from_integer(v.round().to_integer())).abs() < margin));
        let lowers_ok = spec.lower.iter().all(away);
        let gammas_ok = spec.rhs().gammas().iter().chain(lhs.gammas()).all(|g| g.arg.coeff_k != 0 || away(&g.arg.to_poly()));
        if lowers_ok && gammas_ok {
            return Ok(assign);
        }
    }
    Err(OracleError::EmptyRegion)
}

/// Random-sample comparison of both sides, plus optional numeric replay of
/// a WZ certificate for the shifted term.
pub fn check_theorem_numeric(
    spec: &TheoremSpec,
    samples: usize,
    cfg: PrecisionConfig,
    seed: u64,
    wz: Option<(&HyperTerm, &RationalFunction)>,
) -> Result<NumericReport, OracleError> {
    let mut o = Oracle::new(cfg.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    for _ in 0..samples {
        let assign = sample_point(spec, &mut rng)?;
        records.push(o.check_identity_at(spec, &assign)?);
        if let Some((f, c)) = wz {
            let n = rng.gen_range(0..6);
            let k = rng.gen_range(0..6);
            records.push(o.check_wz_at(f, c, &assign, n, k)?);
        }
    }
    Ok(NumericReport { theorem: spec.name.clone(), bits: cfg.bits, tolerance_log2: -((cfg.bits / 2) as i64), records })
}

/// Checks the identity at one given point: exactly when the series
/// terminates, numerically always.
pub fn check_theorem_at(spec: &TheoremSpec, assign: &BTreeMap<Symbol, Q>, cfg: PrecisionConfig) -> Result<NumericReport, OracleError> {
    let missing: Vec<String> = spec.params().params().iter().filter(|s| !assign.contains_key(s)).map(ToString::to_string).collect();
    if !missing.is_empty() {
        return Err(OracleError::Domain(format!("no value for {}", missing.join(", "))));
    }
    let mut o = Oracle::new(cfg.clone());
    let mut records = Vec::new();
    if let Some(r) = o.check_exact_at(spec, assign)? {
        records.push(r);
    }
    records.push(o.check_identity_at(spec, assign)?);
    Ok(NumericReport { theorem: spec.name.clone(), bits: cfg.bits, tolerance_log2: -((cfg.bits / 2) as i64), records })
}


#[cfg(test)]
mod series_tests {
    use super::*;
    use crate::database::lookup;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn point(pairs: &[(&str, Q)]) -> BTreeMap<Symbol, Q> {
        pairs.iter().map(|(s, v)| (Symbol::new(s), v.clone())).collect()
    }

    fn quarter_pi(o: &mut Oracle) -> BigFloat {
        o.pi().div(&BigFloat::from_i64(4, 64), o.p(), RM)
    }

    #[test]
    fn kummer_arctan_value() {
        let spec = lookup("kummer").unwrap().spec;
        let mut o = Oracle::new(PrecisionConfig::default());
        let at = point(&[("a", q(1, 1)), ("b", q(1, 2))]);
        let s = o.series_sum(&spec.lhs().unwrap(), &at, 0).unwrap();
        let expect = quarter_pi(&mut o);
        // 1e-20 < 2^-66.4
        assert!(log2_abs(&o.relative_error(&s, &expect)) < -66.5);
        let rhs = o.evaluate(&spec.rhs(), &at, 0, 0).unwrap();
        assert!(log2_abs(&o.relative_error(&rhs, &expect)) < -100.0);
    }

    #[test]
    fn kummer_plain_partial_sum() {
        let spec = lookup("kummer").unwrap().spec;
        let mut o = Oracle::new(PrecisionConfig::new(64).unwrap());
        let at = point(&[("a", q(1, 1)), ("b", q(1, 2))]);
        let t = spec.lhs().unwrap();
        let s = o.partial_sum(&t, &at, 0, 10_000).unwrap();
        let expect = quarter_pi(&mut o);
        let err = s.sub(&expect, o.p(), RM).abs();
        assert!(err.cmp(&BigFloat::from_f64(1e-3, 64)) == Some(-1));
        assert_eq!(Oracle::partial_sum_exact(&t, &at, 0, 0).unwrap(), Some(Q::one()));
    }

    #[test]
    fn kummer_term_values() {
        let spec = lookup("kummer").unwrap().spec;
        let t = spec.lhs().unwrap();
        let at = point(&[("a", q(1, 1)), ("b", q(1, 2))]);
        assert_eq!(Oracle::evaluate_exact(&t, &at, 0, 0).unwrap(), Some(Q::one()));
        assert_eq!(Oracle::evaluate_exact(&t, &at, 0, 1).unwrap(), Some(q(-1, 3)));
    }

    #[test]
    fn pochhammer_two_paths() {
        let b = crate::algebra::parse_polynomial("b").unwrap();
        let t = HyperTerm::from_pfq(&[b], &[], RationalFunction::one()).unwrap();
        let at = point(&[("b", q(1, 2))]);
        let mut o = Oracle::new(PrecisionConfig::default());
        let via_gamma = o.evaluate(&t, &at, 0, 2).unwrap();
        let direct = q(1, 2) * q(3, 2) / q(2, 1);
        assert_eq!(direct, q(3, 8));
        let d = o.float(&direct);
        assert!(log2_abs(&o.relative_error(&via_gamma, &d)) < -120.0);
    }

    #[test]
    fn gauss_terminating_instance_is_exact() {
        let spec = lookup("gauss").unwrap().spec;
        let o = Oracle::new(PrecisionConfig::default());
        let at = point(&[("a", q(-3, 1)), ("b", q(1, 1)), ("c", q(5, 1))]);
        let r = o.check_exact_at(&spec, &at).unwrap().unwrap();
        assert!(r.pass);
        assert_eq!(r.lhs, "4/7");
        assert_eq!(r.rhs, "4/7");
    }

    #[test]
    fn perturbed_rhs_is_detected() {
        let spec = lookup("kummer").unwrap().spec;
        let mut o = Oracle::new(PrecisionConfig::default());
        let at = point(&[("a", q(1, 1)), ("b", q(1, 2))]);
        let lhs = o.series_sum(&spec.lhs().unwrap(), &at, 0).unwrap();
        let rhs = o.evaluate(&spec.rhs(), &at, 0, 0).unwrap();
        assert!(o.compare("identity", String::new(), &lhs, &rhs).pass);
        let off = rhs.mul(&BigFloat::from_f64(1.001, 64), o.p(), RM);
        assert!(!o.compare("identity", String::new(), &lhs, &off).pass);
    }

    #[test]
    fn gamma_recurrence_on_random_points() {
        let mut o = Oracle::new(PrecisionConfig::default());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let tol = o.config().tolerance();
        for _ in 0..1000 {
            let x = Q::new(rng.gen_range(1..50_000i64).into(), 1000.into());
            let g1 = o.gamma_q(&(&x + Q::one())).unwrap();
            let g = o.gamma_q(&x).unwrap();
            let xg = o.float(&x).mul(&g, o.p(), RM);
            assert!(o.relative_error(&g1, &xg).cmp(&tol) == Some(-1), "x = {x}");
        }
    }

    #[test]
    fn doubling_precision_shrinks_error() {
        // Γ(1/3)Γ(2/3) = 2π/√3
        let err = |bits: usize| {
            let mut o = Oracle::new(PrecisionConfig::new(bits).unwrap());
            let p = o.p();
            let lhs = o.gamma_q(&q(1, 3)).unwrap().mul(&o.gamma_q(&q(2, 3)).unwrap(), p, RM);
            let rhs = o.pi().mul(&BigFloat::from_i64(2, p), p, RM).div(&BigFloat::from_i64(3, p).sqrt(p, RM), p, RM);
            log2_abs(&o.relative_error(&lhs, &rhs))
        };
        let (e64, e128) = (err(64), err(128));
        assert!(e128 <= e64 - 16.0, "{e64} vs {e128}");
    }

    #[test]
    fn every_builtin_passes_samples() {
        for e in crate::database::builtin() {
            let r = check_theorem_numeric(&e.spec, 2, PrecisionConfig::default(), 7, None).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn pole_reports_its_index() {
        // 1/(k-3) has a pole at k = 3
        let t = HyperTerm::new(
            RationalFunction::one(),
            Vec::new(),
            crate::algebra::parse_rational("1/(k-3)").unwrap(),
            Vec::new(),
        );
        let mut o = Oracle::new(PrecisionConfig::default());
        let err = o.partial_sum(&t, &BTreeMap::new(), 0, 10).unwrap_err();
        assert_eq!(err, OracleError::Pole("term at k=3".into()));
    }
}
