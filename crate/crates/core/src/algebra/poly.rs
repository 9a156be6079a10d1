//! Sparse distributed multivariate polynomials over the rationals.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is the
//! lexicographic order induced by the [`Symbol`] order (`k > n > a > b > ...`
//! in significance). The last entry of the map is therefore the leading term.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::symbol::Symbol;

pub type Q = BigRational;

pub fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// A power product, stored as `(symbol, exponent)` pairs sorted by symbol with
/// no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(s, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Symbol, u32)>) -> Self {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Symbol, u32)> = Vec::with_capacity(pairs.len());
        for (s, e) in pairs {
            match out.last_mut() {
                Some((ls, le)) if *ls == s => *le += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn degree(&self, v: &Symbol) -> u32 {
        self.0.iter().find(|(s, _)| s == v).map_or(0, |(_, e)| *e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Drops `v` from the monomial.
    pub fn without(&self, v: &Symbol) -> Monomial {
        Monomial(self.0.iter().filter(|(s, _)| s != v).cloned().collect())
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        let b = &other.0;
        for (s, e) in &self.0 {
            if j < b.len() && b[j].0 < *s {
                return None;
            }
            if j < b.len() && b[j].0 == *s {
                if b[j].1 > *e {
                    return None;
                }
                if *e > b[j].1 {
                    out.push((s.clone(), e - b[j].1));
                }
                j += 1;
            } else {
                out.push((s.clone(), *e));
            }
        }
        if j < b.len() {
            return None;
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((sa, ea)), Some((sb, eb))) => match sa.cmp(sb) {
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        o => return o,
                    },
                    // `sa` is more significant and absent from `b`.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, (s, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Exact multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    pub fn int(c: i64) -> Self {
        Polynomial::constant(q_int(c))
    }

    pub fn var(s: Symbol) -> Self {
        Polynomial::term(Monomial::var(s, 1), Q::one())
    }

    pub fn sym(name: &str) -> Self {
        Polynomial::var(Symbol::new(name))
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(it: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Monomial::one()))
    }

    /// The value of a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<Q> {
        if self.terms.is_empty() {
            Some(Q::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> Q {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeff_of(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// Leading term under the lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> Q {
        self.leading_term().map_or_else(Q::zero, |(_, c)| c.clone())
    }

    pub fn vars(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (s, _) in m.pairs() {
                out.insert(s.clone());
            }
        }
        out
    }

    pub fn contains(&self, v: &Symbol) -> bool {
        self.terms.keys().any(|m| m.degree(v) > 0)
    }

    pub fn degree(&self, v: &Symbol) -> u32 {
        self.terms.keys().map(|m| m.degree(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(t, v)| (t.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Coefficients with respect to `v`, indexed by power.
    pub fn coefficients(&self, v: &Symbol) -> Vec<Polynomial> {
        let d = self.degree(v) as usize;
        let mut out = vec![Polynomial::zero(); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in &self.terms {
            let e = m.degree(v) as usize;
            out[e].add_term(m.without(v), c.clone());
        }
        out
    }

    pub fn from_coefficients(v: &Symbol, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let xm = Monomial::var(v.clone(), i as u32);
            for (m, q) in &c.terms {
                out.add_term(m.mul(&xm), q.clone());
            }
        }
        out
    }

    /// Leading coefficient with respect to `v` (a polynomial free of `v`).
    pub fn leading_coeff_in(&self, v: &Symbol) -> Polynomial {
        let d = self.degree(v);
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if m.degree(v) == d {
                out.add_term(m.without(v), c.clone());
            }
        }
        out
    }

    /// Replaces `v` by `value`.
    pub fn substitute(&self, v: &Symbol, value: &Polynomial) -> Polynomial {
        if !self.contains(v) {
            return self.clone();
        }
        let coeffs = self.coefficients(v);
        let mut acc = Polynomial::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// `p(v + by)`.
    pub fn shift(&self, v: &Symbol, by: i64) -> Polynomial {
        if by == 0 {
            return self.clone();
        }
        let value = &Polynomial::var(v.clone()) + &Polynomial::int(by);
        self.substitute(v, &value)
    }

    /// Substitutes rational values for the assigned symbols; the rest stay
    /// symbolic.
    pub fn eval_partial(&self, values: &BTreeMap<Symbol, Q>) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for (s, e) in m.pairs() {
                match values.get(s) {
                    Some(val) => coef *= pow_q(val, *e),
                    None => rest.push((s.clone(), *e)),
                }
            }
            out.add_term(Monomial::from_pairs(rest), coef);
        }
        out
    }

    /// Full evaluation; `None` if some variable is unassigned.
    pub fn eval(&self, values: &BTreeMap<Symbol, Q>) -> Option<Q> {
        self.eval_partial(values).as_constant()
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.leading_term().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quo = Polynomial::zero();
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(&dm)?;
            let qc = c / &dc;
            rem.sub_assign_scaled(d, &qm, &qc);
            quo.add_term(qm, qc);
        }
        Some(quo)
    }

    /// `self -= c * m * p`, in place.
    fn sub_assign_scaled(&mut self, p: &Polynomial, m: &Monomial, c: &Q) {
        for (t, v) in &p.terms {
            self.add_term(t.mul(m), -(v * c));
        }
    }

    /// Divides by the lexicographic leading coefficient; zero stays zero.
    pub fn monic(&self) -> Polynomial {
        let lc = self.leading_coefficient();
        if lc.is_zero() || lc.is_one() {
            return self.clone();
        }
        self.scale(&lc.recip())
    }

    /// Positive rational `c` such that `self / c` has coprime integer
    /// coefficients.
    pub fn rational_content(&self) -> Q {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Q::one();
        }
        Q::new(num, den)
    }

    /// Integer coefficients of a univariate polynomial in `v`, primitive and
    /// indexed by power. `None` if other variables occur.
    pub fn integer_coefficients(&self, v: &Symbol) -> Option<Vec<BigInt>> {
        if self.vars().iter().any(|s| s != v) {
            return None;
        }
        let c = self.rational_content();
        let p = self.scale(&c.recip());
        let d = p.degree(v) as usize;
        let mut out = vec![BigInt::zero(); d + 1];
        for (m, q) in &p.terms {
            out[m.degree(v) as usize] = q.to_integer();
        }
        Some(out)
    }

    fn display_order(&self) -> Vec<(&Monomial, &Q)> {
        let mut order: Vec<Symbol> = self.vars().into_iter().collect();
        // Parameters first, then n, then k.
        order.sort_by_key(|s| (!s.is_parameter(), s.is_k(), s.clone()));
        let key = |m: &Monomial| -> Vec<u32> { order.iter().map(|s| m.degree(s)).collect() };
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|(a, _), (b, _)| {
            a.total_degree()
                .cmp(&b.total_degree())
                .then_with(|| key(b).cmp(&key(a)))
        });
        ts
    }
}

pub(crate) fn pow_q(v: &Q, e: u32) -> Q {
    num_traits::pow::pow(v.clone(), e as usize)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.display_order().into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            let num = c.numer().abs();
            let den = c.denom();
            let unit = num.is_one();
            if m.is_one() {
                write!(f, "{num}")?;
            } else {
                if !unit {
                    write!(f, "{num}*")?;
                }
                write!(f, "{m:?}")?;
            }
            if !den.is_one() {
                write!(f, "/{den}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'a Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(mut self, rhs: Polynomial) -> Polynomial {
        self -= &rhs;
        self
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'a Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}
