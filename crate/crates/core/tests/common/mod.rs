//! Randomized hyperterm corpus shared by the property tests and the CLI
//! acceptance run.
#![allow(dead_code)]

use std::collections::BTreeMap;

use astro_float::BigFloat;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperwz::algebra::{Polynomial, RationalFunction, Symbol, Q};
use hyperwz::database::lookup;
use hyperwz::hyperterm::{AffineArg, GammaFactor, HyperTerm};
use hyperwz::oracle::{format_float, log2_abs, CheckRecord, Oracle, OracleError};
use hyperwz::telescope::{gosper, verify_certificate, verify_recurrence, wz_pair, zeilberger};

/// `Γ(step*k + offset [+ a])^exponent`.
#[derive(Clone, Debug)]
pub struct GammaShape {
    pub step: i64,
    pub offset: i64,
    pub with_a: bool,
    pub exponent: i32,
}

/// `P(k) * z^k * prod Γ(...)`, with `P` given by its coefficients in `k`.
#[derive(Clone, Debug)]
pub struct TermShape {
    pub z: (i64, i64),
    pub gammas: Vec<GammaShape>,
    pub prefactor: Vec<i64>,
    pub a_in_prefactor: bool,
}

pub const BASES: [(i64, i64); 6] = [(1, 1), (-1, 1), (2, 1), (1, 2), (-1, 2), (3, 1)];

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

impl TermShape {
    pub fn random(rng: &mut impl Rng) -> TermShape {
        let gammas = (0..rng.gen_range(1..=3))
            .map(|_| GammaShape {
                step: if rng.gen_bool(0.85) { 1 } else { 2 },
                offset: rng.gen_range(-2..=3),
                with_a: rng.gen_bool(0.5),
                exponent: if rng.gen_bool(0.5) { 1 } else { -1 },
            })
            .collect();
        let mut prefactor: Vec<i64> = (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(-3..=3)).collect();
        if prefactor.iter().all(|&c| c == 0) {
            prefactor[0] = 1;
        }
        TermShape { z: *BASES.choose(rng).unwrap(), gammas, prefactor, a_in_prefactor: rng.gen_bool(0.3) }
    }

    pub fn build(&self) -> HyperTerm {
        let a = Polynomial::sym("a");
        let k = Polynomial::var(Symbol::k());
        let gs = self
            .gammas
            .iter()
            .map(|g| {
                let mut c = Polynomial::int(g.offset);
                if g.with_a {
                    c += &a;
                }
                GammaFactor::new(AffineArg::new(0, g.step, c).unwrap(), g.exponent)
            })
            .collect();
        let mut p = Polynomial::zero();
        for (i, c) in self.prefactor.iter().enumerate() {
            p += &k.pow(i as u32).scale(&Q::from_integer((*c).into()));
        }
        if self.a_in_prefactor {
            p += &a;
        }
        if p.is_zero() {
            p = Polynomial::one();
        }
        HyperTerm::new(
            RationalFunction::constant(q(self.z.0, self.z.1)),
            gs,
            RationalFunction::from_poly(p),
            Vec::new(),
        )
    }
}

/// `t(k) = h(k+1) - h(k)` for a random `h`, so Gosper must succeed.
pub fn summable(shape: &TermShape) -> Option<HyperTerm> {
    let h = shape.build();
    let r = h.shift_quotient(&Symbol::k()).ok()?;
    let d = &r - &RationalFunction::one();
    if d.is_zero() {
        return None;
    }
    Some(h.times(&d))
}

#[derive(Clone, Debug)]
pub enum Case {
    /// A term built as a forward difference.
    Summable(HyperTerm),
    /// A random term; Gosper may or may not succeed.
    Raw(HyperTerm),
    /// A pFq summand and the parameter of the recurrence.
    Recurrence(HyperTerm, Symbol),
    /// A WZ candidate from a built-in theorem with one parameter fixed.
    Wz(HyperTerm),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Verified,
    NotApplicable,
}

/// An exactly verified antidifference `G = R t` or WZ mate `G = C F`.
#[derive(Clone, Debug)]
pub enum Pair {
    Gosper { t: HyperTerm, r: RationalFunction },
    Wz { f: HyperTerm, c: RationalFunction },
}

fn small_rational(rng: &mut impl Rng) -> Q {
    let d = *[3i64, 5, 7, 11, 13].choose(rng).unwrap();
    loop {
        let n = rng.gen_range(-2 * d..=2 * d);
        if n % d != 0 {
            return q(n, d);
        }
    }
}

fn wz_candidate(rng: &mut impl Rng) -> HyperTerm {
    let (name, param, fixed): (&str, &str, &[&str]) = *[
        ("kummer", "a", &["b"][..]),
        ("bailey", "b", &["a"][..]),
        ("gauss", "a", &["b", "c"][..]),
        ("dixon", "a", &["c"][..]),
    ]
    .choose(rng)
    .unwrap();
    let mut f = lookup(name).unwrap().spec.wz_term(&Symbol::new(param), 2).unwrap();
    let fix = Symbol::new(fixed.choose(rng).unwrap());
    f = f.substitute(&fix, &Polynomial::constant(small_rational(rng))).unwrap();
    f.shift_k(rng.gen_range(0..=2))
}

fn recurrence_candidate(rng: &mut impl Rng) -> (HyperTerm, Symbol) {
    let p = |s: &str, o: i64| &Polynomial::sym(s) + &Polynomial::int(o);
    let i = rng.gen_range(-1..=1);
    let j = rng.gen_range(-1..=1);
    let m = if rng.gen_bool(0.5) {
        let lower = &(&Polynomial::sym("a") - &Polynomial::sym("b")) + &Polynomial::int(1 + rng.gen_range(0..=1));
        HyperTerm::from_pfq(&[p("a", i), p("b", j)], &[lower], RationalFunction::int(-1)).unwrap()
    } else {
        HyperTerm::from_pfq(&[p("a", i), p("b", j)], &[p("c", rng.gen_range(0..=1))], RationalFunction::int(1)).unwrap()
    };
    let param = Symbol::new(["a", "b"].choose(rng).unwrap());
    (m, param)
}

/// `n` cases, deterministic in `seed`: 60% summable, 20% raw, 10%
/// recurrences and 10% WZ candidates.
pub fn corpus(seed: u64, n: usize) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let i = out.len() % 10;
        let case = match i {
            0..=5 => match summable(&TermShape::random(&mut rng)) {
                Some(t) => Case::Summable(t),
                None => continue,
            },
            6 | 7 => Case::Raw(TermShape::random(&mut rng).build()),
            8 => {
                let (m, p) = recurrence_candidate(&mut rng);
                Case::Recurrence(m, p)
            }
            _ => Case::Wz(wz_candidate(&mut rng)),
        };
        out.push(case);
    }
    out
}

/// `R(k+1) r(k) - R(k) = 1`.
pub fn gosper_identity(t: &HyperTerm, r: &RationalFunction) -> bool {
    let k = Symbol::k();
    let q = t.shift_quotient(&k).unwrap();
    &(&r.shift(&k, 1) * &q) - r == RationalFunction::one()
}

/// Runs the case and re-verifies any output exactly.
pub fn run(case: &Case) -> Result<(Outcome, Option<Pair>), String> {
    match case {
        Case::Summable(t) | Case::Raw(t) => {
            let q = t.shift_quotient(&Symbol::k()).map_err(|e| e.to_string())?;
            match gosper(&q).map_err(|e| e.to_string())? {
                Some(r) if gosper_identity(t, &r) => Ok((Outcome::Verified, Some(Pair::Gosper { t: t.clone(), r }))),
                Some(r) => Err(format!("antidifference {r} of {t:?} does not verify")),
                None if matches!(case, Case::Summable(_)) => Err(format!("no antidifference found for {t:?}")),
                None => Ok((Outcome::NotApplicable, None)),
            }
        }
        Case::Recurrence(m, p) => match zeilberger(m, p, 2).map_err(|e| e.to_string())? {
            Some(rec) if verify_recurrence(m, &rec).map_err(|e| e.to_string())? => Ok((Outcome::Verified, None)),
            Some(rec) => Err(format!("recurrence {rec} does not verify")),
            None => Ok((Outcome::NotApplicable, None)),
        },
        Case::Wz(f) => match wz_pair(f).map_err(|e| e.to_string())? {
            Some(c) if verify_certificate(f, &c.c).map_err(|e| e.to_string())? => {
                Ok((Outcome::Verified, Some(Pair::Wz { f: f.clone(), c: c.c })))
            }
            Some(c) => Err(format!("certificate {c} does not verify")),
            None => Err(format!("no WZ mate for {f:?}")),
        },
    }
}

/// A random non-integer point for every parameter in `t`, denominators
/// coprime to the small integers that appear in Gamma arguments.
pub fn random_point(t: &HyperTerm, rng: &mut impl Rng) -> BTreeMap<Symbol, Q> {
    t.params().params().iter().map(|s| (s.clone(), small_rational(rng))).collect()
}

const WP: usize = 320;
const RM: astro_float::RoundingMode = astro_float::RoundingMode::ToEven;

/// First index of the telescoping window; every integer Gamma argument of
/// the corpus terms is positive from here on.
pub const K0: i64 = 3;

/// `sum_{K0<=k<=K0+K} (G(k+1) - G(k))` against `G(K0+K+1) - G(K0)`, with the
/// left side summed from the input term (`t`, or `F(n,k) - F(n+1,k)`). The error is
/// measured against the sum of the absolute values involved, since both
/// sides may cancel far below the size of the terms.
pub fn telescoping_check(
    oracle: &mut Oracle,
    pair: &Pair,
    assign: &BTreeMap<Symbol, Q>,
    n: i64,
    big_k: i64,
) -> Result<CheckRecord, OracleError> {
    let mut lhs = BigFloat::from_i64(0, WP);
    let mut scale = BigFloat::from_i64(0, WP);
    let mut add = |x: BigFloat, lhs: &mut BigFloat| {
        scale = scale.add(&x.abs(), WP, RM);
        *lhs = lhs.add(&x, WP, RM);
    };
    let (g, n) = match pair {
        Pair::Gosper { t, r } => {
            for k in K0..=K0 + big_k {
                add(oracle.evaluate(t, assign, 0, k)?, &mut lhs);
            }
            (t.times(r), 0)
        }
        Pair::Wz { f, c } => {
            for k in K0..=K0 + big_k {
                add(oracle.evaluate(f, assign, n, k)?, &mut lhs);
                add(oracle.evaluate(f, assign, n + 1, k)?.neg(), &mut lhs);
            }
            (f.times(c), n)
        }
    };
    let hi = oracle.evaluate(&g, assign, n, K0 + big_k + 1)?;
    let lo = oracle.evaluate(&g, assign, n, K0)?;
    let scale = scale.add(&hi.abs(), WP, RM).add(&lo.abs(), WP, RM);
    let rhs = hi.sub(&lo, WP, RM);
    let diff = lhs.sub(&rhs, WP, RM).abs();
    let rel = if scale.is_zero() { diff.clone() } else { diff.div(&scale, WP, RM) };
    let tol = oracle.config().tolerance();
    Ok(CheckRecord {
        check: "telescoping".into(),
        inputs: format!("{}, n={n}, K={big_k}", describe(assign)),
        lhs: format_float(&lhs, 30),
        rhs: format_float(&rhs, 30),
        abs_error: format_float(&diff, 3),
        rel_error: format_float(&rel, 3),
        rel_error_log2: log2_abs(&rel),
        pass: rel.cmp(&tol).is_some_and(|c| c <= 0),
    })
}

/// `T(n,k+1)/T(n,k)` and `T(n+1,k)/T(n,k)` from term values against the
/// shift quotients evaluated at the same point. Points where a value is
/// zero or a pole are skipped.
pub fn quotient_checks(
    oracle: &mut Oracle,
    t: &HyperTerm,
    assign: &BTreeMap<Symbol, Q>,
    n: i64,
    k: i64,
) -> Result<Vec<CheckRecord>, OracleError> {
    let mut out = Vec::new();
    for (var, (n1, k1)) in [(Symbol::k(), (n, k + 1)), (Symbol::n(), (n + 1, k))] {
        let Ok(q) = t.shift_quotient(&var) else { continue };
        let mut at = assign.clone();
        at.insert(Symbol::n(), Q::from_integer(n.into()));
        at.insert(Symbol::k(), Q::from_integer(k.into()));
        let Some(qv) = q.eval(&at) else { continue };
        let t0 = oracle.evaluate(t, assign, n, k)?;
        if t0.is_zero() {
            continue;
        }
        let t1 = oracle.evaluate(t, assign, n1, k1)?;
        let lhs = t1.div(&t0, WP, RM);
        let rhs = oracle.float(&qv);
        out.push(oracle.compare(&format!("quotient in {var}"), describe(assign), &lhs, &rhs));
    }
    Ok(out)
}

pub fn describe(assign: &BTreeMap<Symbol, Q>) -> String {
    assign.iter().map(|(s, q)| format!("{s}={q}")).collect::<Vec<_>>().join(", ")
}

/// The Kummer summand paired as `H(n,k) = F(n,2k)(1 + q_k(n,2k))`, summed
/// to `K`, against the plain sum of `F` to `2K+1`.
pub fn pairing_check(oracle: &mut Oracle, f: &HyperTerm, assign: &BTreeMap<Symbol, Q>, n: i64, big_k: i64) -> Result<CheckRecord, OracleError> {
    let q = f.shift_quotient(&Symbol::k()).expect("hypergeometric in k");
    let one_plus = &RationalFunction::one() + &q;
    let mut plain = BigFloat::from_i64(0, WP);
    for k in 0..=2 * big_k + 1 {
        plain = plain.add(&oracle.evaluate(f, assign, n, k)?, WP, RM);
    }
    let mut paired = BigFloat::from_i64(0, WP);
    for k in 0..=big_k {
        let mut at = assign.clone();
        at.insert(Symbol::n(), Q::from_integer(n.into()));
        at.insert(Symbol::k(), Q::from_integer((2 * k).into()));
        let factor = one_plus.eval(&at).ok_or_else(|| OracleError::Pole(format!("pair factor at k={k}")))?;
        let h = oracle.evaluate(f, assign, n, 2 * k)?.mul(&oracle.float(&factor), WP, RM);
        paired = paired.add(&h, WP, RM);
    }
    Ok(oracle.compare("pairing", format!("{}, n={n}, K={big_k}", describe(assign)), &plain, &paired))
}
