//! Gosper's algorithm, WZ certificates and parameter recurrences by creative
//! telescoping, and exact certificate checks.
//!
//! Everything works on shift quotients, so no term `G` is ever built: a
//! certificate `C` is checked through `1 - q_n = C(k+1) q_k - C(k)`, the WZ
//! relation divided by `F`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::algebra::gcd::primitive_part;
use crate::algebra::ratfun::cancel_linear_factors;
use crate::algebra::{dispersion_set, linear_solve, nullspace, poly_gcd, Polynomial, RationalFunction, Symbol, Q};
use crate::hyperterm::{HyperTerm, TermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TelescopeError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("improper quotient: {0}")]
    Improper(String),
}

/// Gosper–Petkovšek form `r(k) = Z * p(k+1)/p(k) * q(k)/s(k+1)` with
/// `gcd(q(k), s(k+j)) = 1` for every `j >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GpForm {
    pub z: RationalFunction,
    pub p: Polynomial,
    pub q: Polynomial,
    pub s: Polynomial,
}

impl GpForm {
    /// Rebuilds `r(k)`.
    pub fn quotient(&self) -> RationalFunction {
        let k = Symbol::k();
        let num = &self.p.shift(&k, 1) * &self.q;
        let den = &self.p * &self.s.shift(&k, 1);
        &self.z * &RationalFunction::new(num, den).expect("nonzero denominator")
    }
}

/// Computes the Gosper–Petkovšek form of a shift quotient.
pub fn gp_form(r: &RationalFunction) -> Result<GpForm, TelescopeError> {
    let k = Symbol::k();
    if r.is_zero() {
        return Err(TelescopeError::Improper("zero quotient".into()));
    }
    // Split off the k-free content so that a and b are primitive in k.
    let (num, den) = (r.numer().clone(), r.denom().clone());
    let mut a = primitive_part(&num, &k);
    let mut b = primitive_part(&den, &k);
    let z = &RationalFunction::new(num.div_exact(&a).expect("content"), den.div_exact(&b).expect("content"))
        .expect("nonzero");
    let z = z.clone();
    let mut c = Polynomial::one();
    for h in dispersion_set(&a, &b) {
        if h == 0 {
            continue;
        }
        let h = h as i64;
        let g = poly_gcd(&a, &b.shift(&k, h));
        if g.degree(&k) == 0 {
            continue;
        }
        let g = primitive_part(&g, &k);
        a = a.div_exact(&g).expect("gcd divides a");
        b = b.div_exact(&g.shift(&k, -h)).expect("shifted gcd divides b");
        for i in 1..=h {
            c = &c * &g.shift(&k, -i);
        }
    }
    // r = z * a/b * c(k+1)/c(k); in the (p, q, s) naming s(k+1) = b(k).
    Ok(GpForm { z, p: c, q: a, s: b.shift(&k, -1) })
}

/// Unknown-coefficient setup shared by Gosper, WZ and Zeilberger.
struct GosperSystem {
    /// `a(k)` with the constant `z` folded in.
    a: Polynomial,
    /// `b(k-1)`, times the denominator of `z`.
    b1: Polynomial,
    c: Polynomial,
}

fn gosper_system(r: &RationalFunction) -> Result<GosperSystem, TelescopeError> {
    let form = gp_form(r)?;
    // Fold Z = zn/zd into a and b: r = (zn*q)/(zd*s(k+1)) * p(k+1)/p(k).
    let zn = form.z.numer().clone();
    let zd = form.z.denom().clone();
    Ok(GosperSystem { a: &zn * &form.q, b1: &zd * &form.s, c: form.p })
}

fn coeff_at(p: &Polynomial, i: usize) -> Polynomial {
    p.coefficients(&Symbol::k()).get(i).cloned().unwrap_or_default()
}

/// Degree bound for polynomial solutions `x` of `A x(k+1) - B x(k) = rhs`
/// with `deg rhs <= deg_rhs`. `None` when no solution can exist.
fn degree_bound(a: &Polynomial, b: &Polynomial, deg_rhs: u32) -> Option<u32> {
    let k = Symbol::k();
    let da = a.degree(&k);
    let db = b.degree(&k);
    let la = a.leading_coeff_in(&k);
    let lb = b.leading_coeff_in(&k);
    if da != db || la != lb {
        let m = da.max(db);
        return deg_rhs.checked_sub(m);
    }
    // Equal degree and leading coefficient: the k^(d+deg-1) coefficient of
    // the left side is (lambda*d + alpha - beta) for x = k^d.
    let d = da;
    let mut best: Option<u32> = (deg_rhs + 1).checked_sub(d);
    if d >= 1 {
        let alpha = coeff_at(a, d as usize - 1);
        let beta = coeff_at(b, d as usize - 1);
        let ratio = RationalFunction::new(&beta - &alpha, la).expect("nonzero lc");
        if let Some(q) = ratio.as_constant() {
            if q.is_integer() && !q.is_negative() {
                let v = num_traits::ToPrimitive::to_u32(&q.to_integer()).unwrap_or(u32::MAX);
                best = Some(best.map_or(v, |x| x.max(v)));
            }
        } else if ratio.is_zero() {
            best = Some(best.unwrap_or(0));
        }
    } else {
        best = Some(best.unwrap_or(0));
    }
    best
}

/// Builds the coefficient equations of `A x(k+1) - B x(k) - sum_i s_i R_i(k) = 0`
/// for `x = sum_j x_j k^j`, unknowns ordered `[s_0.., x_0..x_d]`.
fn build_equations(a: &Polynomial, b: &Polynomial, rhs: &[Polynomial], nx: usize) -> Vec<Vec<RationalFunction>> {
    let k = Symbol::k();
    let ns = rhs.len();
    // Column polynomials in k.
    let mut columns: Vec<Polynomial> = rhs.iter().map(|r| -r).collect();
    for j in 0..nx {
        let kj = Polynomial::var(k.clone()).pow(j as u32);
        let col = &(a * &kj.shift(&k, 1)) - &(b * &kj);
        columns.push(col);
    }
    let rows = columns.iter().map(|c| c.degree(&k) as usize + 1).max().unwrap_or(0);
    let coeffs: Vec<Vec<Polynomial>> = columns.iter().map(|c| c.coefficients(&k)).collect();
    let mut mat = vec![vec![RationalFunction::zero(); ns + nx]; rows];
    for (col, cs) in coeffs.iter().enumerate() {
        for (row, c) in cs.iter().enumerate() {
            if !c.is_zero() {
                mat[row][col] = RationalFunction::from_poly(c.clone());
            }
        }
    }
    mat.retain(|row| row.iter().any(|x| !x.is_zero()));
    mat
}

fn assemble_x(sol: &[RationalFunction]) -> RationalFunction {
    let k = Polynomial::var(Symbol::k());
    let mut x = RationalFunction::zero();
    for (j, c) in sol.iter().enumerate() {
        if !c.is_zero() {
            x = &x + &(c * &RationalFunction::from_poly(k.pow(j as u32)));
        }
    }
    x
}

/// Solves `A x(k+1) - B x(k) = c(k) p(k)` and returns `R p = B x / c`,
/// leaving the factor `p` for the caller to cancel.
fn gosper_with_factor(r_u: &RationalFunction, p: &Polynomial) -> Result<Option<RationalFunction>, TelescopeError> {
    let k = Symbol::k();
    let sys = gosper_system(r_u)?;
    let rhs = &sys.c * p;
    let Some(d) = degree_bound(&sys.a, &sys.b1, rhs.degree(&k)) else {
        return Ok(None);
    };
    let mut mat = build_equations(&sys.a, &sys.b1, &[rhs.clone()], d as usize + 1);
    // Fix the coefficient of the rhs column to 1 by moving it to the right.
    // Highest power first makes the system triangular in the generic case.
    let b: Vec<RationalFunction> = mat.iter().map(|row| -&row[0]).collect();
    for row in &mut mat {
        row.remove(0);
        row.reverse();
    }
    if mat.is_empty() {
        return Ok(None);
    }
    let Some(mut sol) = linear_solve(&mat, &b) else {
        return Ok(None);
    };
    sol.reverse();
    let x = assemble_x(&sol);
    if x.is_zero() {
        return Ok(None);
    }
    let num = &RationalFunction::from_poly(sys.b1) * &x;
    Ok(Some(&num / &RationalFunction::from_poly(sys.c)))
}

/// Gosper's algorithm. Given `r = t(k+1)/t(k)`, returns `R` with
/// `G = R t` satisfying `G(k+1) - G(k) = t(k)`, or `None` if `t` has no
/// hypergeometric antidifference.
pub fn gosper(r: &RationalFunction) -> Result<Option<RationalFunction>, TelescopeError> {
    gosper_with_factor(r, &Polynomial::one())
}

/// `C(n,k)` with `G = F C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub c: RationalFunction,
    /// `F` did not depend on `n`, so the certificate is zero trivially.
    pub trivial: bool,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.c)
    }
}

/// Finds the WZ mate of `F`: `F(n,k) - F(n+1,k) = G(n,k+1) - G(n,k)` with
/// `G = C F`.
pub fn wz_pair(f: &HyperTerm) -> Result<Option<Certificate>, TelescopeError> {
    if let Some(found) = wz_pair_factored(f)? {
        return Ok(found);
    }
    let n = Symbol::n();
    let k = Symbol::k();
    let q_n = f.shift_quotient(&n)?;
    let q_k = f.shift_quotient(&k)?;
    let diff = &RationalFunction::one() - &q_n;
    if diff.is_zero() {
        return Ok(Some(Certificate { c: RationalFunction::zero(), trivial: true }));
    }
    // F - F(n+1) = F * N/D; sum the term u = F/D against the factor N.
    let (num, den) = diff.into_parts();
    let r_u = &q_k * &RationalFunction::new(den.clone(), den.shift(&k, 1)).expect("nonzero");
    let Some(rn) = gosper_with_factor(&r_u, &num)? else {
        return Ok(None);
    };
    // G = R * t = R * F * N/D, and gosper_with_factor already multiplied by N.
    let c = &rn / &RationalFunction::from_poly(den);
    Ok(Some(Certificate { c, trivial: false }))
}

/// `wz_pair` for terms whose shift quotients are products of linear
/// factors, keeping every intermediate in factored form so that no large
/// gcd is needed. The outer `None` means the shape does not apply.
fn wz_pair_factored(f: &HyperTerm) -> Result<Option<Option<Certificate>>, TelescopeError> {
    let n = Symbol::n();
    let k = Symbol::k();
    let (Some((nn, nd)), Some((kn, kd))) = (f.shift_quotient_factors(&n)?, f.shift_quotient_factors(&k)?) else {
        return Ok(None);
    };
    let Some((scale, nn, nd)) = cancel_linear_factors(&nn, &nd) else {
        return Ok(None);
    };
    let prod = |fs: &[Polynomial]| fs.iter().fold(Polynomial::one(), |acc, f| &acc * f);
    // 1 - N/D = (D - N)/D is already reduced since N and D are coprime.
    let num = &prod(&nd) - &prod(&nn).scale(&scale);
    if num.is_zero() {
        return Ok(Some(Some(Certificate { c: RationalFunction::zero(), trivial: true })));
    }
    let mut up = kn;
    up.extend(nd.iter().cloned());
    let mut down = kd;
    down.extend(nd.iter().map(|g| g.shift(&k, 1)));
    let Some(r_u) = RationalFunction::from_linear_factors(&up, &down) else {
        return Ok(None);
    };
    let Some(rn) = gosper_with_factor(&r_u, &num)? else {
        return Ok(Some(None));
    };
    // C = rn / D, trying each linear factor of D against the numerator.
    let mut top = rn.numer().clone();
    let mut bottom = rn.denom().clone();
    for g in &nd {
        match top.div_exact(g) {
            Some(q) => top = q,
            None => bottom = &bottom * g,
        }
    }
    let c = RationalFunction::from_coprime_parts(top, bottom).expect("nonzero denominator");
    Ok(Some(Some(Certificate { c, trivial: false })))
}

/// Exact check of `1 - q_n = C(k+1) q_k - C(k)` in canonical rational
/// function arithmetic.
pub fn verify_certificate(f: &HyperTerm, c: &RationalFunction) -> Result<bool, TelescopeError> {
    let n = Symbol::n();
    let k = Symbol::k();
    let q_n = f.shift_quotient(&n)?;
    let q_k = f.shift_quotient(&k)?;
    let lhs = &RationalFunction::one() - &q_n;
    let rhs = &(&c.shift(&k, 1) * &q_k) - c;
    Ok(lhs == rhs)
}

/// `sum_i sigma_i M(param+i, k) = G'(k+1) - G'(k)` with `G' = C' M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    pub param: Symbol,
    pub order: usize,
    pub sigmas: Vec<RationalFunction>,
    pub certificate: RationalFunction,
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .sigmas
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let arg = if i == 0 { self.param.to_string() } else { format!("{}+{i}", self.param) };
                format!("({s})*M({arg},k)")
            })
            .collect();
        write!(f, "{} = G'(k+1) - G'(k), G' = M*({})", parts.join(" + "), self.certificate)
    }
}

/// `M(param+i)/M(param)` for `i = 0..=order`.
fn param_ratios(m: &HyperTerm, param: &Symbol, order: usize) -> Result<Vec<RationalFunction>, TelescopeError> {
    let q = m.shift_quotient(param)?;
    let mut out = vec![RationalFunction::one()];
    let mut acc = RationalFunction::one();
    for i in 0..order {
        let qi = q.substitute(param, &(&Polynomial::var(param.clone()) + &Polynomial::int(i as i64)))
            .ok_or_else(|| TelescopeError::Improper("parameter quotient has a pole".into()))?;
        acc = &acc * &qi;
        out.push(acc.clone());
    }
    Ok(out)
}

/// Creative telescoping in a parameter: tries orders `1..=max_order`.
pub fn zeilberger(m: &HyperTerm, param: &Symbol, max_order: usize) -> Result<Option<Recurrence>, TelescopeError> {
    let k = Symbol::k();
    let q_k = m.shift_quotient(&k)?;
    for order in 1..=max_order {
        let ratios = param_ratios(m, param, order)?;
        // Common denominator D(k): rho_i = P_i / D.
        let mut den = Polynomial::one();
        for r in &ratios {
            let g = poly_gcd(&den, r.denom());
            den = &den * &r.denom().div_exact(&g).expect("gcd divides");
        }
        let ps: Vec<Polynomial> = ratios
            .iter()
            .map(|r| r.numer() * &den.div_exact(r.denom()).expect("common denominator"))
            .collect();
        let r_u = &q_k * &RationalFunction::new(den.clone(), den.shift(&k, 1)).expect("nonzero");
        let sys = gosper_system(&r_u)?;
        let rhs: Vec<Polynomial> = ps.iter().map(|p| &sys.c * p).collect();
        let deg_rhs = rhs.iter().map(|p| p.degree(&k)).max().unwrap_or(0);
        // Without a degree bound only x = 0 remains possible.
        let nx = degree_bound(&sys.a, &sys.b1, deg_rhs).map_or(0, |d| d as usize + 1);
        let ns = rhs.len();
        let mat = build_equations(&sys.a, &sys.b1, &rhs, nx);
        let basis = nullspace(&mat, ns + nx);
        let Some(v) = basis.into_iter().find(|v| v[..ns].iter().any(|s| !s.is_zero())) else {
            continue;
        };
        let v = normalize_vector(v, ns);
        let sigmas = v[..ns].to_vec();
        let x = assemble_x(&v[ns..]);
        // G' = B x / (c * sum s_i P_i) * t, t = M/D * sum s_i P_i, so C' = B x / (c D).
        let certificate = if x.is_zero() {
            RationalFunction::zero()
        } else {
            &(&RationalFunction::from_poly(sys.b1.clone()) * &x) / &RationalFunction::from_poly(&sys.c * &den)
        };
        return Ok(Some(Recurrence { param: param.clone(), order, sigmas, certificate }));
    }
    Ok(None)
}

/// Scales a solution so the sigmas are polynomials with trivial content and
/// the first nonzero sigma has a positive leading coefficient.
fn normalize_vector(v: Vec<RationalFunction>, ns: usize) -> Vec<RationalFunction> {
    let mut lcm = Polynomial::one();
    for s in &v[..ns] {
        let g = poly_gcd(&lcm, s.denom());
        lcm = &lcm * &s.denom().div_exact(&g).expect("gcd divides");
    }
    let lcm = RationalFunction::from_poly(lcm);
    let scaled: Vec<RationalFunction> = v.iter().map(|x| x * &lcm).collect();
    let mut g = Polynomial::zero();
    for s in &scaled[..ns] {
        g = poly_gcd(&g, s.numer());
    }
    let first = scaled[..ns].iter().find(|s| !s.is_zero()).expect("nonzero sigma");
    let gq = first.numer().div_exact(&g).expect("gcd divides").leading_coefficient();
    let content: Q = scaled[..ns]
        .iter()
        .filter(|s| !s.is_zero())
        .fold(Q::zero(), |acc, s| rational_gcd(&acc, &s.numer().div_exact(&g).expect("gcd divides").rational_content()));
    let mut factor = RationalFunction::from_poly(g).recip().expect("nonzero gcd");
    if !content.is_zero() {
        factor = factor.scale(&content.recip());
    }
    if gq.is_negative() {
        factor = -factor;
    }
    scaled.iter().map(|x| x * &factor).collect()
}

fn rational_gcd(x: &Q, y: &Q) -> Q {
    use num_integer::Integer;
    if x.is_zero() {
        return y.abs();
    }
    if y.is_zero() {
        return x.abs();
    }
    Q::new(x.numer().gcd(y.numer()), x.denom().lcm(y.denom()))
}

/// Exact check of a parameter recurrence:
/// `sum_i sigma_i rho_i = C'(k+1) q_k - C'(k)`, `rho_i = M(param+i)/M(param)`.
pub fn verify_recurrence(m: &HyperTerm, rec: &Recurrence) -> Result<bool, TelescopeError> {
    let k = Symbol::k();
    let q_k = m.shift_quotient(&k)?;
    let ratios = param_ratios(m, &rec.param, rec.order)?;
    if ratios.len() != rec.sigmas.len() {
        return Ok(false);
    }
    let mut lhs = RationalFunction::zero();
    for (s, r) in rec.sigmas.iter().zip(&ratios) {
        lhs = &lhs + &(s * r);
    }
    let c = &rec.certificate;
    let rhs = &(&c.shift(&k, 1) * &q_k) - c;
    Ok(lhs == rhs)
}

/// Checks `gcd(q(k), s(k+j)) = 1` for every `j >= 1` in the dispersion set of
/// `q` against `s` and for `1..=extra`.
pub fn gp_invariant_holds(form: &GpForm, extra: u64) -> bool {
    let k = Symbol::k();
    let shifted = form.s.shift(&k, 1);
    let mut js: BTreeSet<u64> = dispersion_set(&form.q, &shifted).into_iter().map(|d| d + 1).collect();
    js.extend(1..=extra);
    js.into_iter().all(|j| poly_gcd(&form.q, &form.s.shift(&k, j as i64)).degree(&k) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_polynomial, parse_rational};
    use crate::hyperterm::HyperTerm;

    fn r(s: &str) -> RationalFunction {
        parse_rational(s).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    fn antidifference_holds(q: &RationalFunction, big_r: &RationalFunction) -> bool {
        let k = Symbol::k();
        (&(&big_r.shift(&k, 1) * q) - big_r).is_one()
    }

    #[test]
    fn k_times_factorial() {
        let q = r("(k+1)^2/k");
        let big_r = gosper(&q).unwrap().unwrap();
        assert_eq!(big_r, r("1/k"));
        assert!(antidifference_holds(&q, &big_r));
    }

    #[test]
    fn reciprocal_products() {
        let q = r("k/(k+2)");
        let big_r = gosper(&q).unwrap().unwrap();
        assert!(antidifference_holds(&q, &big_r));
        // G = R * 1/(k(k+1)) = -1/k.
        assert_eq!(&big_r * &r("1/(k*(k+1))"), r("-1/k"));
    }

    #[test]
    fn exponential_series_is_not_summable() {
        assert_eq!(gosper(&r("1/(k+1)")).unwrap(), None);
    }

    #[test]
    fn gp_form_rebuilds_quotient() {
        let q = r("(k+1)*(k+a)/((k+3)*(k-2+a))");
        let f = gp_form(&q).unwrap();
        assert_eq!(f.quotient(), q);
        assert!(gp_invariant_holds(&f, 5));
    }

    fn kummer_f() -> HyperTerm {
        let f = HyperTerm::from_pfq(&[p("a+2*n"), p("b")], &[p("1+a+2*n-b")], RationalFunction::int(-1)).unwrap();
        let s = HyperTerm::from_gammas(
            [("1+a/2+n", 1), ("1+a+2*n-b", 1), ("1+a+2*n", -1), ("1+a/2+n-b", -1)]
                .iter()
                .map(|(a, e)| crate::hyperterm::GammaFactor::new(crate::hyperterm::AffineArg::from_poly(&p(a)).unwrap(), *e))
                .collect(),
        );
        f.div(&s)
    }

    #[test]
    fn kummer_certificate() {
        let f = kummer_f();
        let c = wz_pair(&f).unwrap().unwrap();
        assert_eq!(c.c, r("-(b-1)*k/((1+a+2*n-b+k)*(a+2*n))"));
        assert!(verify_certificate(&f, &c.c).unwrap());
        assert!(!verify_certificate(&f, &r("(-(b-1)*k+1)/((1+a+2*n-b+k)*(a+2*n))")).unwrap());
    }

    #[test]
    fn kummer_b_recurrence() {
        let m = HyperTerm::from_pfq(&[p("a"), p("b")], &[p("1+a-b")], RationalFunction::int(-1)).unwrap();
        let rec = zeilberger(&m, &Symbol::new("b"), 1).unwrap().unwrap();
        assert_eq!(rec.sigmas, vec![r("a-2*b"), r("-2*a+2*b")]);
        assert_eq!(rec.certificate, r("(a-b+k)*k/b"));
        assert!(verify_recurrence(&m, &rec).unwrap());
    }

    #[test]
    fn parameter_free_recurrence() {
        let m = HyperTerm::from_pfq(&[p("a")], &[p("c")], RationalFunction::int(-1)).unwrap();
        let rec = zeilberger(&m, &Symbol::new("b"), 1).unwrap().unwrap();
        assert_eq!(rec.sigmas, vec![r("1"), r("-1")]);
        assert!(rec.certificate.is_zero());
    }
}
