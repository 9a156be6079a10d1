//! Acceptance run: every criterion at its stated tolerance, one pass/fail
//! line each.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hyperwz::algebra::{parse_polynomial, parse_rational, RationalFunction, Symbol, Q};
use hyperwz::asympt::{k_growth_exponent, n_limit, LimitKind};
use hyperwz::database::{builtin, lookup};
use hyperwz::hyperterm::{AffineArg, GammaFactor, HyperTerm, TheoremSpec};
use hyperwz::oracle::{check_theorem_at, check_theorem_numeric, log2_abs, Oracle, PrecisionConfig};
use hyperwz::prover::{extend_domain, prove_with_shift, Verdict};
use hyperwz::telescope::{verify_certificate, wz_pair, zeilberger};

use common::{corpus, q, run, Case, Outcome};

type Verdicts = Result<String, String>;

const DIXON_C: &str = "-(-2-8*a*n*c-a+4*b+4*c-2*n-2*n*b*c-2*a*b*k-2*a*k*c-a*b*c-8*a*n*b\
-4*n*k*c-4*n*b*k+a*b+2*n*b-2*a^2*c-8*n^2*c+a*c+2*n*c-2*b^2+3*a^2\
+12*a*n+12*n^2+12*a^2*n-2*a^2*b+24*a*n^2+a*k^2-8*n^2*b+2*n*k^2\
+2*a^3+16*n^3-6*c*b+3*k*a^2+3*k*a+6*k*n+12*k*n^2+12*k*a*n+2*b^2*c\
+2*b*c^2-2*c^2)*k/(2+a+2*n-2*b-2*c)/(1+a+2*n-c+k)/(1+a+2*n-b+k)\
/(a+2*n)";

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn r(s: &str) -> RationalFunction {
    parse_rational(s).unwrap()
}

fn f_of(name: &str, param: &str) -> HyperTerm {
    lookup(name).unwrap().spec.wz_term(&Symbol::new(param), 2).unwrap()
}

fn point(pairs: &[(&str, Q)]) -> BTreeMap<Symbol, Q> {
    pairs.iter().map(|(s, v)| (Symbol::new(s), v.clone())).collect()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn certificates() -> Verdicts {
    let limit = Duration::from_secs(5);
    let (kummer, tk) = timed(|| wz_pair(&f_of("kummer", "a")).unwrap().unwrap());
    ensure(kummer.c == r("-(b-1)*k/((1+a+2*n-b+k)*(a+2*n))"), || format!("Kummer certificate {kummer}"))?;
    let (bailey, tb) = timed(|| wz_pair(&f_of("bailey", "b")).unwrap().unwrap());
    ensure(bailey.c == r("-2*k/(b+2*n+k)"), || format!("Bailey certificate {bailey}"))?;
    let dixon = f_of("dixon", "a");
    let verbatim = r(DIXON_C);
    let (ok, td) = timed(|| verify_certificate(&dixon, &verbatim).unwrap());
    ensure(ok, || "Dixon certificate rejected".into())?;
    for (name, t) in [("Kummer", tk), ("Bailey", tb), ("Dixon", td)] {
        ensure(t < limit, || format!("{name} took {t:?}"))?;
    }
    Ok(format!("Kummer {tk:.2?}, Bailey {tb:.2?}, Dixon verify {td:.2?}"))
}

fn exponents() -> Verdicts {
    let kummer = f_of("kummer", "a");
    let g = k_growth_exponent(&kummer).map_err(|e| e.to_string())?;
    ensure(g.exponent == parse_polynomial("2*b-2").unwrap(), || format!("Kummer k-exponent {}", g.exponent))?;
    let lim = n_limit(&kummer).map_err(|e| e.to_string())?;
    ensure(lim.kind == LimitKind::Finite, || format!("Kummer limit {}", lim.kind))?;
    let expected = HyperTerm::from_pfq(&[parse_polynomial("b").unwrap()], &[], RationalFunction::int(-1))
        .unwrap()
        .with_constant_power(RationalFunction::int(2), parse_polynomial("b").unwrap());
    let term = lim.limit_term.ok_or("Kummer limit has no term")?;
    ensure(term == expected, || format!("Kummer limit term {term}"))?;
    let shown = term.pochhammer_form().map(|p| p.to_string()).unwrap_or_default();
    ensure(shown == "2^b*(b)_k*(-1)^k/k!", || format!("Kummer limit prints as {shown}"))?;
    for (name, p) in [("bailey", "b"), ("dixon", "a")] {
        let lim = n_limit(&f_of(name, p)).map_err(|e| e.to_string())?;
        ensure(lim.kind == LimitKind::DeltaK0, || format!("{name} limit {}", lim.kind))?;
    }
    Ok("k^(2b-2); 2^b*(b)_k*(-1)^k/k!; Bailey and Dixon DeltaK0".into())
}

fn end_to_end() -> Verdicts {
    let mut total = Duration::ZERO;
    let mut texts = BTreeMap::new();
    for name in ["kummer", "bailey", "dixon", "gauss"] {
        let (o, t) = timed(|| Command::new(env!("CARGO_BIN_EXE_hyperwz")).args(["prove", name]).output().unwrap());
        total += t;
        let text = String::from_utf8_lossy(&o.stdout).into_owned();
        ensure(o.status.success(), || format!("{name} not proved:\n{text}"))?;
        texts.insert(name, text);
    }
    let kummer = &texts["kummer"];
    ensure(kummer.contains("dominated convergence under Re(b) < 0"), || format!("Kummer pre-extension:\n{kummer}"))?;
    ensure(kummer.contains("Re(b) < 0 -> Re(b) < 1"), || format!("Kummer extension:\n{kummer}"))?;
    ensure(kummer.trim_end().ends_with("proved under Re(b) < 1"), || format!("Kummer verdict:\n{kummer}"))?;
    ensure(texts["dixon"].contains("Re(2+a-2b-2c) > 0"), || format!("Dixon:\n{}", texts["dixon"]))?;
    ensure(total < Duration::from_secs(60), || format!("proofs took {total:?}"))?;
    Ok(format!("4 proofs in {total:.2?}"))
}

fn recurrence() -> Verdicts {
    let m = HyperTerm::from_pfq(
        &[parse_polynomial("a").unwrap(), parse_polynomial("b").unwrap()],
        &[parse_polynomial("1+a-b").unwrap()],
        RationalFunction::int(-1),
    )
    .unwrap();
    let rec = zeilberger(&m, &Symbol::new("b"), 2).map_err(|e| e.to_string())?.ok_or("no recurrence")?;
    ensure(rec.order == 1, || format!("order {}", rec.order))?;
    let scale = &rec.sigmas[0] / &r("a-2*b");
    ensure(rec.sigmas[1] == &scale * &r("-2*a+2*b"), || format!("coefficients {:?}", rec.sigmas))?;
    ensure(rec.certificate == &scale * &r("(a-b+k)*k/b"), || format!("certificate {}", rec.certificate))?;
    Ok(format!("(a-2b), (-2a+2b), (a-b+k)k/b up to {scale}"))
}

fn numeric() -> Verdicts {
    let cfg = PrecisionConfig::new(128).map_err(|e| e.to_string())?;
    let kummer = lookup("kummer").unwrap().spec;
    let mut o = Oracle::new(cfg.clone());
    let at = point(&[("a", q(1, 1)), ("b", q(1, 2))]);
    let s = o.series_sum(&kummer.lhs().unwrap(), &at, 0).map_err(|e| e.to_string())?;
    let quarter_pi = o.pi().div(&o.float(&q(4, 1)), 320, astro_float::RoundingMode::ToEven);
    let err = log2_abs(&o.relative_error(&s, &quarter_pi));
    // 1e-20 = 2^-66.44
    ensure(err < -66.44, || format!("Kummer at (1, 1/2): relative error 2^{err:.1}"))?;

    let gauss = lookup("gauss").unwrap().spec;
    let rep = check_theorem_at(&gauss, &point(&[("a", q(-3, 1)), ("b", q(1, 1)), ("c", q(5, 1))]), cfg.clone())
        .map_err(|e| e.to_string())?;
    let exact = rep.records.iter().find(|r| r.check == "identity (exact)").ok_or("no exact record")?;
    ensure(exact.pass && exact.lhs == "4/7" && exact.rhs == "4/7", || format!("{exact:?}"))?;

    for e in builtin() {
        let rep = check_theorem_numeric(&e.spec, 5, cfg.clone(), 0, None).map_err(|x| x.to_string())?;
        let identities = rep.records.iter().filter(|r| r.check == "identity").count();
        ensure(rep.passed() && identities == 5, || format!("{rep}"))?;
    }
    Ok(format!("pi/4 to 2^{err:.1}; 4/7 exact; 6 x 5 samples at 2^-64"))
}

fn properties() -> Verdicts {
    let cases = corpus(20_240_601, 1000);
    let mut verified = 0;
    let mut pairs = Vec::new();
    for (i, case) in cases.iter().enumerate() {
        match run(case).map_err(|e| format!("corpus case {i}: {e}"))? {
            (Outcome::Verified, p) => {
                verified += 1;
                if pairs.len() < 150 && (i % 5 == 0 || matches!(case, Case::Wz(_))) {
                    pairs.extend(p);
                }
            }
            (Outcome::NotApplicable, _) => {}
        }
    }
    ensure(verified >= 700, || format!("{verified} of 1000 cases verified"))?;

    let mut oracle = Oracle::new(PrecisionConfig::default());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut sums = 0;
    for pair in &pairs {
        let t = match pair {
            common::Pair::Gosper { t, .. } => t,
            common::Pair::Wz { f, .. } => f,
        };
        let assign = common::random_point(t, &mut rng);
        for big_k in [0, 10, 30] {
            let Ok(rec) = common::telescoping_check(&mut oracle, pair, &assign, 1, big_k) else { break };
            ensure(rec.pass, || format!("{rec:?}"))?;
            sums += 1;
        }
    }
    ensure(sums >= 200, || format!("only {sums} telescoping sums"))?;

    let kummer = f_of("kummer", "a");
    let rec = common::pairing_check(&mut oracle, &kummer, &point(&[("a", q(1, 1)), ("b", q(1, 4))]), 3, 50)
        .map_err(|e| e.to_string())?;
    ensure(rec.pass, || format!("{rec:?}"))?;

    let mut quotients = 0;
    for _ in 0..200 {
        let t = common::TermShape::random(&mut rng).build();
        let assign = common::random_point(&t, &mut rng);
        let Ok(recs) = common::quotient_checks(&mut oracle, &t, &assign, 1, 4) else { continue };
        for rec in recs {
            ensure(rec.pass, || format!("{rec:?}"))?;
            quotients += 1;
        }
    }
    ensure(quotients >= 200, || format!("only {quotients} quotient checks"))?;
    Ok(format!("{verified}/1000 exact, {sums} telescoping sums, pairing K=50, {quotients} quotients"))
}

fn misstated_kummer() -> TheoremSpec {
    let mut s = lookup("kummer").unwrap().spec;
    let arg = |src: &str| AffineArg::from_poly(&parse_polynomial(src).unwrap()).unwrap();
    let i = s.rhs_gammas.iter().position(|g| g.arg == arg("1+a/2-b")).unwrap();
    s.rhs_gammas[i] = GammaFactor::new(arg("2+a/2-b"), s.rhs_gammas[i].exponent);
    s
}

fn negative_controls() -> Verdicts {
    let cases = [
        ("kummer", "a", "-(b-1)*k/((1+a+2*n-b+k)*(a+2*n))"),
        ("bailey", "b", "-2*k/(b+2*n+k)"),
        ("dixon", "a", DIXON_C),
    ];
    for (name, p, c) in cases {
        let f = f_of(name, p);
        let good = r(c);
        for bump in ["1/1000", "k/(1+a+n)", "1/(b+k)"] {
            let bad = &good + &r(bump);
            ensure(!verify_certificate(&f, &bad).unwrap(), || format!("{name}: accepted {bad}"))?;
        }
    }

    let bad = misstated_kummer();
    let base = prove_with_shift(&lookup("kummer").unwrap().spec, &Symbol::new("a"), 2);
    let extended = extend_domain(&bad, base, &Symbol::new("b"), 1);
    ensure(
        matches!(&extended.verdict, Verdict::Failed { step, .. } if step == "extension"),
        || format!("misstated rhs extended: {:?}", extended.verdict),
    )?;
    let rep = check_theorem_numeric(&bad, 5, PrecisionConfig::default(), 0, None).map_err(|e| e.to_string())?;
    ensure(!rep.passed(), || "misstated rhs passed the numeric check".into())?;
    Ok("9 perturbed certificates rejected; misstated rhs fails extension and numeric checks".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdicts); 7] = [
        ("certificate reproduction", certificates),
        ("exponent reproduction", exponents),
        ("end-to-end proofs", end_to_end),
        ("recurrence reproduction", recurrence),
        ("numeric oracle", numeric),
        ("property suites", properties),
        ("negative controls", negative_controls),
    ];
    let start = Instant::now();
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (result, t) = timed(check);
        match result {
            Ok(detail) => println!("[PASS] {}. {name} ({t:.2?}): {detail}", i + 1),
            Err(why) => {
                println!("[FAIL] {}. {name} ({t:.2?}): {why}", i + 1);
                failed.push(*name);
            }
        }
    }
    println!("acceptance total {:.2?}", start.elapsed());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed: {failed:?}");
        ExitCode::FAILURE
    }
}
