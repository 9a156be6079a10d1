//! Resultants and the dispersion set of two polynomials.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gcd::{gcd_degree_mod, poly_gcd, q_mod, PRIME};
use super::poly::{Monomial, Polynomial, Q};
use super::symbol::Symbol;

/// Largest shift the integer-root scan will test.
const MAX_DISPERSION: u64 = 1_000_000;

/// Resultant of `p` and `q` with respect to `var`.
///
/// Convention: `Res(p, q) = lc(p)^deg(q) * prod q(r)` over the roots `r` of
/// `p`, so `Res_k(k-a, k-b) = a-b`. If both inputs are free of `var` the
/// result is 1; if exactly one is, it is that polynomial raised to the other's
/// degree. A zero input gives 0.
pub fn resultant_k(p: &Polynomial, q: &Polynomial, var: &Symbol) -> Polynomial {
    if p.is_zero() || q.is_zero() {
        return Polynomial::zero();
    }
    let m = p.degree(var) as usize;
    let n = q.degree(var) as usize;
    if m == 0 && n == 0 {
        return Polynomial::one();
    }
    if m == 0 {
        return p.pow(n as u32);
    }
    if n == 0 {
        return q.pow(m as u32);
    }
    let pc = p.coefficients(var);
    let qc = q.coefficients(var);
    let size = m + n;
    let mut mat = vec![vec![Polynomial::zero(); size]; size];
    // Rows 0..n hold shifted copies of p, rows n..n+m shifted copies of q,
    // coefficients from the highest power down.
    for (i, row) in mat.iter_mut().enumerate().take(n) {
        for (j, c) in pc.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in qc.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Fraction-free determinant.
fn bareiss_det(mut a: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = a.len();
    let mut sign = false;
    let mut prev = Polynomial::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Polynomial::zero();
            };
            a.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = v.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = Polynomial::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// All integers `j >= 0` with `gcd(q(k), s(k+j))` nonconstant in `k`.
///
/// Candidates come from a scan modulo a prime at a rational point of the
/// parameters, falling back to the nonnegative integer roots of
/// `Res_k(q(k), s(k+j))` in `j`; each candidate is then confirmed by an
/// exact gcd.
pub fn dispersion_set(q: &Polynomial, s: &Polynomial) -> BTreeSet<u64> {
    let k = Symbol::k();
    let mut out = BTreeSet::new();
    if q.degree(&k) == 0 || s.degree(&k) == 0 {
        return out;
    }
    let candidates = modular_candidates(q, s).unwrap_or_else(|| {
        let j = Symbol::new("__j");
        let kj = &Polynomial::var(k.clone()) + &Polynomial::var(j.clone());
        let res = resultant_k(q, &s.substitute(&k, &kj), &k);
        nonnegative_integer_roots(&res, &j)
    });
    for root in candidates {
        let g = poly_gcd(q, &s.shift(&k, root as i64));
        if g.degree(&k) > 0 {
            out.insert(root);
        }
    }
    out
}

/// Fujiwara's bound on the absolute value of the complex roots.
fn root_bound(coeffs: &[Q]) -> Option<f64> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d].to_f64()?.abs();
    let mut m = 0f64;
    for i in 1..=d {
        let c = coeffs[d - i].to_f64()?.abs() / lead;
        let r = if i == d { (c / 2.0).powf(1.0 / i as f64) } else { c.powf(1.0 / i as f64) };
        m = m.max(r);
    }
    let b = 2.0 * m;
    b.is_finite().then_some(b)
}

/// Candidate dispersions at a rational point of the parameters. A common
/// factor `h(k)` of `q(k)` and `s(k+j)` has a root `x` with `q(x) = 0` and
/// `s(x+j) = 0`, so `j` is at most the sum of the root bounds; and it
/// survives both the specialization (leading coefficients kept nonzero) and
/// reduction modulo the prime. The result is a superset of the dispersions.
fn modular_candidates(q: &Polynomial, s: &Polynomial) -> Option<Vec<u64>> {
    let k = Symbol::k();
    let params: BTreeSet<Symbol> = q.vars().union(&s.vars()).filter(|v| **v != k).cloned().collect();
    for attempt in 0..4i64 {
        let point: BTreeMap<Symbol, Q> = params
            .iter()
            .zip(1i64..)
            .map(|(v, i)| (v.clone(), Q::new((2 * i + 1 + attempt).into(), (7 + 4 * attempt).into())))
            .collect();
        let (qs, ss) = (q.eval_partial(&point), s.eval_partial(&point));
        if qs.degree(&k) != q.degree(&k) || ss.degree(&k) != s.degree(&k) {
            continue;
        }
        let constant = |p: &Polynomial| p.coefficients(&k).iter().map(|c| c.as_constant()).collect::<Option<Vec<Q>>>();
        let (qc, sc) = (constant(&qs)?, constant(&ss)?);
        let bound = root_bound(&qc)? + root_bound(&sc)?;
        if bound > MAX_DISPERSION as f64 {
            return None;
        }
        let modp = |c: &[Q]| c.iter().map(q_mod).collect::<Option<Vec<u64>>>();
        let (Some(qm), Some(mut sm)) = (modp(&qc), modp(&sc)) else { continue };
        if qm.last() == Some(&0) || sm.last() == Some(&0) {
            continue;
        }
        let mut out = Vec::new();
        for j in 0..=bound.floor() as u64 {
            if j > 0 {
                shift_by_one(&mut sm);
            }
            if gcd_degree_mod(qm.clone(), sm.clone()) > 0 {
                out.push(j);
            }
        }
        return Some(out);
    }
    None
}

/// `p(k) -> p(k+1)` on coefficients modulo the prime (index = power).
fn shift_by_one(p: &mut [u64]) {
    let n = p.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            p[j] = (p[j] + p[j + 1]) % PRIME;
        }
    }
}

/// Nonnegative integer roots of `p` viewed as a polynomial in `j` whose
/// coefficients may involve other symbols: a root must annihilate every
/// coefficient of every monomial in the other symbols.
fn nonnegative_integer_roots(p: &Polynomial, j: &Symbol) -> Vec<u64> {
    if p.is_zero() {
        // A factor of positive degree in k cannot divide s(k+j) for symbolic j.
        return Vec::new();
    }
    // Split p = sum over monomials m in the other symbols of c_m(j) * m.
    let mut parts: BTreeMap<Monomial, Polynomial> = Default::default();
    for (m, c) in p.terms() {
        let e = m.degree(j);
        let rest = m.without(j);
        parts
            .entry(rest)
            .or_default()
            .add_term(Monomial::var(j.clone(), e), c.clone());
    }
    let mut g = Polynomial::zero();
    for c in parts.values() {
        g = poly_gcd(&g, c);
        if g.is_constant() {
            return Vec::new();
        }
    }
    let Some(coeffs) = g.integer_coefficients(j) else {
        return Vec::new();
    };
    integer_roots(&coeffs)
}

/// Nonnegative integer roots of an integer polynomial given by its
/// coefficients (index = power).
pub fn integer_roots(coeffs: &[BigInt]) -> Vec<u64> {
    let mut out = Vec::new();
    let Some(first) = coeffs.iter().position(|c| !c.is_zero()) else {
        return out;
    };
    if first > 0 {
        out.push(0);
    }
    let c = &coeffs[first..];
    if c.len() < 2 {
        return out;
    }
    let lead = c.last().expect("nonempty").abs();
    let trailing = c[0].abs();
    // Cauchy bound on root magnitude, also bounded by |trailing| since a
    // nonzero integer root divides the trailing coefficient.
    let max_ratio = c[..c.len() - 1].iter().map(|x| x.abs()).max().unwrap_or_default();
    let cauchy = BigInt::one() + max_ratio.div_ceil(&lead);
    let bound = cauchy.min(trailing.clone()).to_u64().unwrap_or(MAX_DISPERSION).min(MAX_DISPERSION);
    for r in 1..=bound {
        let rb = BigInt::from(r);
        if !(&trailing % &rb).is_zero() {
            continue;
        }
        let mut acc = BigInt::zero();
        for x in c.iter().rev() {
            acc = acc * &rb + x;
        }
        if acc.is_zero() {
            out.push(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_polynomial;

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn linear_resultant_sign_convention() {
        assert_eq!(resultant_k(&p("k-a"), &p("k-b"), &Symbol::k()), p("a-b"));
    }

    #[test]
    fn shared_factor_gives_zero() {
        let f = p("k^2+a*k+1");
        assert!(resultant_k(&f, &f, &Symbol::k()).is_zero());
    }

    #[test]
    fn degenerate_constant_inputs() {
        assert!(resultant_k(&p("a"), &p("b+1"), &Symbol::k()).is_one());
    }

    #[test]
    fn resultant_matches_root_evaluation() {
        // Roots of (k+1)(k+2) are -1, -2; q = k+3 gives 2*1 = 2.
        assert_eq!(resultant_k(&p("(k+1)*(k+2)"), &p("k+3"), &Symbol::k()), p("2"));
        // Reversed order: lc(q)^2 * p(-3) = 2.
        assert_eq!(resultant_k(&p("k+3"), &p("(k+1)*(k+2)"), &Symbol::k()), p("2"));
    }

    #[test]
    fn dispersion_examples() {
        assert_eq!(dispersion_set(&p("k"), &p("k-3")), BTreeSet::from([3]));
        assert!(dispersion_set(&p("k+a"), &p("k+b")).is_empty());
        assert_eq!(dispersion_set(&p("k*(k+a)"), &p("(k-2)*(k+a-5)")), BTreeSet::from([2, 5]));
        assert_eq!(dispersion_set(&p("(2*k+a)*(k^2+1)"), &p("(2*k+a-8)*(k^2-8*k+17)")), BTreeSet::from([4]));
    }

    #[test]
    fn modular_scan_covers_resultant_roots() {
        let k = Symbol::k();
        let j = Symbol::new("__j");
        let kj = &Polynomial::var(k.clone()) + &Polynomial::var(j.clone());
        let cases = [
            ("k*(k+3)*(k-7)", "(k-2)*(k+1)"),
            ("(k+a)*(k+2*a+1)", "(k+a-4)*(k+2*a-9)*(k+b)"),
            ("(2*k+a)*(k^2+1)", "(2*k+a-8)*(k^2-8*k+17)"),
            ("3*k^3-a*k+5", "k^2+a*k-11"),
        ];
        for (q, s) in cases {
            let (q, s) = (p(q), p(s));
            let from_resultant = nonnegative_integer_roots(&resultant_k(&q, &s.substitute(&k, &kj), &k), &j);
            let scan = modular_candidates(&q, &s).unwrap();
            for r in from_resultant {
                let g = poly_gcd(&q, &s.shift(&k, r as i64));
                if g.degree(&k) > 0 {
                    assert!(scan.contains(&r), "{q} / {s}: scan missed {r}");
                }
            }
        }
    }

    #[test]
    fn integer_root_scan() {
        // (j-3)(j+2)(j-7) = j^3 - 8j^2 + j + 42
        let c: Vec<BigInt> = [42, 1, -8, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(integer_roots(&c), vec![3, 7]);
    }
}
