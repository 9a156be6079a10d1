use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::poly_gcd;
use super::poly::{Polynomial, Q};
use super::symbol::Symbol;

/// A reduced quotient of polynomials.
///
/// Invariants: the denominator is nonzero, numerator and denominator are
/// coprime, and the denominator's lexicographic leading coefficient is 1.
/// Zero is `0/1`. Under these invariants structural equality is equality of
/// rational functions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction { num: Polynomial::zero(), den: Polynomial::one() }
    }

    pub fn one() -> Self {
        RationalFunction::from_poly(Polynomial::one())
    }

    pub fn from_poly(p: Polynomial) -> Self {
        RationalFunction { num: p, den: Polynomial::one() }
    }

    pub fn constant(c: Q) -> Self {
        RationalFunction::from_poly(Polynomial::constant(c))
    }

    pub fn int(c: i64) -> Self {
        RationalFunction::from_poly(Polynomial::int(c))
    }

    pub fn sym(name: &str) -> Self {
        RationalFunction::from_poly(Polynomial::sym(name))
    }

    /// Builds `num/den` in canonical form. Returns `None` for a zero
    /// denominator.
    pub fn new(num: Polynomial, den: Polynomial) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RationalFunction::zero());
        }
        let g = poly_gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Some(Self::from_coprime(num, den))
    }

    /// `prod num / prod den` for factors of total degree at most one.
    ///
    /// Distinct monic linear polynomials are coprime, so cancelling equal
    /// factors before expanding gives the reduced form without a gcd.
    pub fn from_linear_factors(num: &[Polynomial], den: &[Polynomial]) -> Option<Self> {
        let (scale, n, d) = cancel_linear_factors(num, den)?;
        let prod = |fs: &[Polynomial]| fs.iter().fold(Polynomial::one(), |acc, f| &acc * f);
        Some(Self::from_coprime(prod(&n).scale(&scale), prod(&d)))
    }

    /// `num/den` for polynomials known to be coprime.
    pub(crate) fn from_coprime_parts(num: Polynomial, den: Polynomial) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RationalFunction::zero());
        }
        Some(Self::from_coprime(num, den))
    }

    fn from_coprime(num: Polynomial, den: Polynomial) -> Self {
        let lc = den.leading_coefficient();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn into_parts(self) -> (Polynomial, Polynomial) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn contains(&self, v: &Symbol) -> bool {
        self.num.contains(v) || self.den.contains(v)
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Symbol> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    pub fn recip(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(Self::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i32) -> Option<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let m = e.unsigned_abs();
        Some(RationalFunction::from_coprime(base.num.pow(m), base.den.pow(m)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Substitutes a polynomial for `v` and renormalizes. `None` if the
    /// denominator vanishes.
    pub fn substitute(&self, v: &Symbol, value: &Polynomial) -> Option<Self> {
        if !self.contains(v) {
            return Some(self.clone());
        }
        RationalFunction::new(self.num.substitute(v, value), self.den.substitute(v, value))
    }

    pub fn substitute_rf(&self, v: &Symbol, value: &RationalFunction) -> Option<Self> {
        if !self.contains(v) {
            return Some(self.clone());
        }
        // Homogenize: p(v = u/w) = P(u, w) / w^deg.
        let (u, w) = (&value.num, &value.den);
        let hom = |p: &Polynomial, d: u32| -> Polynomial {
            let cs = p.coefficients(v);
            let mut acc = Polynomial::zero();
            for (i, c) in cs.iter().enumerate() {
                acc += &(&(c * &u.pow(i as u32)) * &w.pow(d - i as u32));
            }
            acc
        };
        let dn = self.num.degree(v);
        let dd = self.den.degree(v);
        let mut n = hom(&self.num, dn);
        let mut d = hom(&self.den, dd);
        if dn > dd {
            d = &d * &w.pow(dn - dd);
        } else if dd > dn {
            n = &n * &w.pow(dd - dn);
        }
        RationalFunction::new(n, d)
    }

    /// `f(v + by)`.
    pub fn shift(&self, v: &Symbol, by: i64) -> Self {
        if by == 0 || !self.contains(v) {
            return self.clone();
        }
        // A shift is an automorphism, so coprimality is preserved.
        Self::from_coprime(self.num.shift(v, by), self.den.shift(v, by))
    }

    pub fn eval(&self, values: &BTreeMap<Symbol, Q>) -> Option<Q> {
        let n = self.num.eval(values)?;
        let d = self.den.eval(values)?;
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }

    pub fn eval_partial(&self, values: &BTreeMap<Symbol, Q>) -> Option<Self> {
        RationalFunction::new(self.num.eval_partial(values), self.den.eval_partial(values))
    }

    /// Degree in `v` of numerator minus denominator.
    pub fn degree_in(&self, v: &Symbol) -> i64 {
        self.num.degree(v) as i64 - self.den.degree(v) as i64
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        RationalFunction::from_poly(p)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Polynomial| {
            let s = p.to_string();
            if p.num_terms() > 1 || s.contains('/') || s.contains('*') {
                format!("({s})")
            } else {
                s
            }
        };
        // Print with an integer, primitive denominator.
        let s = self.den.rational_content().recip();
        write!(f, "{}/{}", wrap(&self.num.scale(&s)), wrap(&self.den.scale(&s)))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).expect("nonzero denominator");
        }
        if self.den.is_one() {
            return RationalFunction::from_coprime(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        if rhs.den.is_one() {
            return RationalFunction::from_coprime(&self.num + &(&rhs.num * &self.den), self.den.clone());
        }
        // Henrici: only the gcd of the denominators can reappear.
        let g = poly_gcd(&self.den, &rhs.den);
        let bd = self.den.div_exact(&g).expect("gcd divides");
        let dd = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &dd) + &(&rhs.num * &bd);
        if num.is_zero() {
            return RationalFunction::zero();
        }
        let den = &(&bd * &dd) * &g;
        if g.is_one() {
            return RationalFunction::from_coprime(num, den);
        }
        let h = poly_gcd(&num, &g);
        if h.is_one() {
            RationalFunction::from_coprime(num, den)
        } else {
            RationalFunction::from_coprime(num.div_exact(&h).expect("gcd divides"), den.div_exact(&h).expect("gcd divides"))
        }
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &'a RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        let g1 = poly_gcd(&self.num, &rhs.den);
        let g2 = poly_gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = rhs.den.div_exact(&g1).expect("gcd divides");
        let n2 = rhs.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        RationalFunction::from_coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl<'a> Div<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero.
    fn div(self, rhs: &'a RationalFunction) -> RationalFunction {
        self * &rhs.recip().expect("division by zero rational function")
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        RationalFunction::one()
    }
}

/// Splits `prod num / prod den` into a constant and the remaining monic
/// linear factors after cancellation. `None` if a factor is zero or not
/// of total degree at most one.
pub fn cancel_linear_factors(num: &[Polynomial], den: &[Polynomial]) -> Option<(Q, Vec<Polynomial>, Vec<Polynomial>)> {
    let mut scale = Q::one();
    let mut monic = |fs: &[Polynomial], invert: bool| -> Option<Vec<Polynomial>> {
        let mut out = Vec::new();
        for f in fs {
            if f.total_degree() > 1 || f.is_zero() {
                return None;
            }
            let lc = f.leading_coefficient();
            scale = if invert { &scale / &lc } else { &scale * &lc };
            if !f.is_constant() {
                out.push(f.scale(&lc.recip()));
            }
        }
        Some(out)
    };
    let mut n = monic(num, false)?;
    let d = monic(den, true)?;
    let mut kept = Vec::new();
    for f in d {
        match n.iter().position(|g| *g == f) {
            Some(i) => {
                n.swap_remove(i);
            }
            None => kept.push(f),
        }
    }
    Some((scale, n, kept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_rational;

    fn r(s: &str) -> RationalFunction {
        parse_rational(s).unwrap()
    }

    #[test]
    fn canonical_form_is_representational() {
        assert_eq!(r("(2*k+2)/(4*k^2-4)"), r("1/(2*k-2)"));
        assert_eq!(r("1/(2*k-2)").denom().leading_coefficient(), Q::one());
    }

    #[test]
    fn field_inverse() {
        let x = r("(a+k)/(b-n)");
        assert!((&x * &x.recip().unwrap()).is_one());
        assert!((&x - &x).is_zero());
    }

    #[test]
    fn linear_factor_cancellation() {
        let f = |s: &str| crate::algebra::parse::parse_polynomial(s).unwrap();
        let num = [f("2*k+2*a"), f("k+b"), f("3")];
        let den = [f("k+a"), f("n-k"), f("k+1")];
        let got = RationalFunction::from_linear_factors(&num, &den).unwrap();
        assert_eq!(got, r("6*(k+b)/((n-k)*(k+1))"));
        assert!(RationalFunction::from_linear_factors(&[f("k^2")], &[]).is_none());
    }

    #[test]
    fn henrici_addition_cancels() {
        let s = &r("1/(k*(k+1))") + &r("-1/k");
        assert_eq!(s, r("-1/(k+1)"));
    }

    #[test]
    fn substitute_rational_value() {
        let f = r("k/(k+1)");
        let g = f.substitute_rf(&Symbol::k(), &r("1/a")).unwrap();
        assert_eq!(g, r("1/(1+a)"));
    }
}
