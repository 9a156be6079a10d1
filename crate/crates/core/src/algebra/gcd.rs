//! Multivariate GCD by recursive primitive pseudo-remainder sequences.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::poly::{Monomial, Polynomial, Q};
use super::symbol::Symbol;

/// Greatest common divisor, normalized so the lexicographic leading
/// coefficient is 1. `gcd(0, 0) = 0`.
pub fn poly_gcd(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    gcd_rec(p, q).monic()
}

/// GCD of the coefficients of `p` with respect to `x`, monic.
pub fn content(p: &Polynomial, x: &Symbol) -> Polynomial {
    let mut coeffs: Vec<Polynomial> = p.coefficients(x).into_iter().filter(|c| !c.is_zero()).collect();
    if coeffs.is_empty() {
        return Polynomial::zero();
    }
    coeffs.sort_by_key(|c| (c.num_terms(), c.total_degree()));
    let mut g = coeffs[0].monic();
    for c in &coeffs[1..] {
        if g.is_constant() {
            return Polynomial::one();
        }
        g = gcd_rec(&g, c).monic();
    }
    if g.is_constant() {
        Polynomial::one()
    } else {
        g
    }
}

/// `p / content(p, x)`.
pub fn primitive_part(p: &Polynomial, x: &Symbol) -> Polynomial {
    if p.is_zero() {
        return Polynomial::zero();
    }
    let c = content(p, x);
    p.div_exact(&c).expect("content divides its polynomial")
}

/// Pseudo-remainder of `a` by `b` in `x`, up to a nonzero factor free of `x`.
pub fn pseudo_remainder(a: &Polynomial, b: &Polynomial, x: &Symbol) -> Polynomial {
    let db = b.degree(x);
    if db == 0 && !b.is_zero() {
        return Polynomial::zero();
    }
    let lb = b.leading_coeff_in(x);
    let mut r = a.clone();
    while !r.is_zero() && r.degree(x) >= db {
        let dr = r.degree(x);
        let lr = r.leading_coeff_in(x);
        let shifted = (&lr * b).mul_monomial(&Monomial::var(x.clone(), dr - db), &Q::one());
        r = &(&lb * &r) - &shifted;
        let c = r.rational_content();
        if !c.is_one() {
            r = r.scale(&c.recip());
        }
    }
    r
}

fn gcd_rec(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    if p.is_constant() || q.is_constant() {
        return Polynomial::one();
    }
    let vp = p.vars();
    let vq = q.vars();
    if let Some(x) = vp.difference(&vq).next() {
        return gcd_rec(&content(p, x), q);
    }
    if let Some(x) = vq.difference(&vp).next() {
        return gcd_rec(p, &content(q, x));
    }
    // A gcd free of x divides both contents in x.
    if let Some(x) = vp.iter().find(|x| gcd_free_of(p, q, x)) {
        return gcd_rec(&content(p, x), &content(q, x));
    }
    // Cheap exits before running a remainder sequence.
    if p.num_terms() <= q.num_terms() {
        if q.div_exact(p).is_some() {
            return p.clone();
        }
    } else if p.div_exact(q).is_some() {
        return q.clone();
    }
    let x = main_variable(p, q, &vp);
    let cp = content(p, &x);
    let cq = content(q, &x);
    let gc = gcd_rec(&cp, &cq);
    let pp = p.div_exact(&cp).expect("content divides");
    let qq = q.div_exact(&cq).expect("content divides");
    let gp = prs_gcd(pp, qq, &x);
    &gc * &gp
}

fn main_variable(p: &Polynomial, q: &Polynomial, vars: &BTreeSet<Symbol>) -> Symbol {
    vars.iter()
        .min_by_key(|v| (p.degree(v).max(q.degree(v)), p.degree(v).min(q.degree(v))))
        .cloned()
        .expect("nonconstant polynomials have variables")
}

/// GCD of two polynomials that are primitive with respect to `x`.
fn prs_gcd(a: Polynomial, b: Polynomial, x: &Symbol) -> Polynomial {
    let (mut a, mut b) = if a.degree(x) >= b.degree(x) { (a, b) } else { (b, a) };
    if b.degree(x) == 0 {
        return Polynomial::one();
    }
    loop {
        let r = pseudo_remainder(&a, &b, x);
        if r.is_zero() {
            return b;
        }
        if r.degree(x) == 0 {
            return Polynomial::one();
        }
        a = b;
        b = primitive_part(&r, x);
    }
}


pub(super) const PRIME: u64 = (1 << 61) - 1;

pub(super) fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, PRIME - 2)
}

pub(super) fn q_mod(c: &Q) -> Option<u64> {
    let p = BigInt::from(PRIME);
    let reduce = |x: &BigInt| (((x % &p) + &p) % &p).to_u64().expect("reduced below the prime");
    let d = reduce(c.denom());
    if d == 0 {
        return None;
    }
    Some(mulmod(reduce(c.numer()), invmod(d)))
}

/// Coefficients in `x` of `p` with every other variable set to `point`,
/// modulo the prime. `None` if a denominator vanishes.
fn specialize(p: &Polynomial, x: &Symbol, point: &dyn Fn(&Symbol) -> u64) -> Option<Vec<u64>> {
    let mut out = vec![0u64; p.degree(x) as usize + 1];
    for (m, c) in p.terms() {
        let mut v = q_mod(c)?;
        let mut e = 0;
        for (s, d) in m.pairs() {
            if s == x {
                e = *d as usize;
            } else {
                v = mulmod(v, powmod(point(s), u64::from(*d)));
            }
        }
        out[e] = (out[e] + v) % PRIME;
    }
    Some(out)
}

fn poly_rem_mod(a: &mut Vec<u64>, b: &[u64]) {
    let lb = invmod(*b.last().expect("nonzero divisor"));
    while a.len() >= b.len() {
        let f = mulmod(*a.last().expect("nonempty"), lb);
        let off = a.len() - b.len();
        for (i, bi) in b.iter().enumerate() {
            a[off + i] = (a[off + i] + PRIME - mulmod(f, *bi)) % PRIME;
        }
        while a.last() == Some(&0) {
            a.pop();
        }
    }
}

pub(super) fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    while b.last() == Some(&0) {
        b.pop();
    }
    while !b.is_empty() {
        poly_rem_mod(&mut a, &b);
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// True when `gcd(p, q)` provably has degree zero in `x`: a common factor
/// of positive degree survives any specialization of the other variables
/// that keeps both leading coefficients in `x` nonzero.
fn gcd_free_of(p: &Polynomial, q: &Polynomial, x: &Symbol) -> bool {
    if p.degree(x) == 0 || q.degree(x) == 0 {
        return true;
    }
    for attempt in 0..2u64 {
        let point = |s: &Symbol| {
            let h = s.name().bytes().fold(1469598103934665603u64, |h, b| (h ^ u64::from(b)).wrapping_mul(1099511628211));
            (h ^ attempt.wrapping_mul(0x9e3779b97f4a7c15)) % PRIME
        };
        let (Some(a), Some(b)) = (specialize(p, x, &point), specialize(q, x, &point)) else {
            continue;
        };
        if a.last().is_some_and(Zero::is_zero) || b.last().is_some_and(Zero::is_zero) {
            continue;
        }
        return gcd_degree_mod(a, b) == 0;
    }
    false
}
