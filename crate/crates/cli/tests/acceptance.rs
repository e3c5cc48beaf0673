//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use cepalg::classifier::{measured_derivative, taylor_derivative_bound, Classifier, Hypothesis, Overall};
use cepalg::expr::{Expr, GaugeExpr, NetExpr};
use cepalg::scale::{
    dominates, in_ideal, in_ring, invert, Evidence, Monomial, Posynomial, SampledNet, ScaleElement,
    ScaleFamily, Schedule, Verdict,
};
use cepalg::seminorm::{cover_subadditivity_check, restriction_check, seminorm_order, CompactBox, Grid};
use cepalg::{Family, Rational, Region};
use cepalg_cli::{load_scenario, run_scenario};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn region(intervals: &[(f64, f64)]) -> Region {
    CompactBox::new(intervals.to_vec()).unwrap()
}

fn net(text: &str, dim: usize) -> NetExpr {
    NetExpr::parse(text, dim).unwrap()
}

fn seven_eighths() -> Family {
    ScaleFamily::declare(
        vec![GaugeExpr::parse("lambda").unwrap()],
        Schedule::geometric(1.0, 0.875, 40).unwrap(),
        10,
    )
    .unwrap()
}

fn zero_order_catalog() -> Outcome {
    let fam = Family::colombeau();
    let c = Classifier::new(&fam, 10);
    let catalog = [
        ("exp(-1/lambda)*sin(x1/lambda)", 1),
        ("exp(-1/lambda^2)*cos(x1/lambda)", 1),
        ("exp(-1/lambda)*(x1^2 + 1)", 1),
        ("exp(-1/lambda)*sin(x1/lambda^3)", 1),
        ("exp(-2/lambda)*sin(x1*x2/lambda)", 2),
    ];
    let start = Instant::now();
    for (text, dim) in catalog {
        let k = region(&vec![(0.0, 1.0); dim]);
        let t = c.zero_order_reduction(&net(text, dim), &[k], 3).map_err(|e| format!("{text}: {e}"))?;
        ensure(t.abort.is_none(), || format!("{text}: aborted {:?}", t.abort))?;
        ensure(t.moderate.is_moderate(), || format!("{text}: not moderate"))?;
        ensure(t.zero_order.is_negligible(), || format!("{text}: not C0-negligible"))?;
        ensure(t.checks.len() == 3, || format!("{text}: {} order checks", t.checks.len()))?;
        for check in &t.checks {
            ensure(check.direct_holds(), || format!("{text}: order {} direct verdict", check.order()))?;
            for step in &check.replay {
                let tail = fam.tail_indices();
                let dominated = tail.clone().all(|j| step.measured[j] <= step.bound[j]);
                ensure(dominated && step.held(), || {
                    format!("{text}: order {} replay step {:?}/{}", check.order(), step.alpha, step.axis)
                })?;
            }
        }
        ensure(t.agreement, || format!("{text}: no agreement"))?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 120.0, || format!("took {secs:.1} s"))?;
    Ok(format!("5 nets agree at orders 1..3, D = 10, in {secs:.1} s"))
}

fn necessity() -> Outcome {
    let fam = seven_eighths();
    let u = net("exp(-1/lambda)*sin(x1*exp(1/lambda))", 1);
    let k = [region(&[(0.0, 1.0)])];
    let c10 = Classifier::new(&fam, 10);
    let c6 = Classifier::new(&fam, 6);

    let zero = c10.negligible(&u, &k, 0).map_err(|e| e.to_string())?;
    ensure(zero.is_negligible(), || format!("C0: {}", zero.overall))?;
    let degree = zero.entries[0].ideal.as_ref().and_then(|v| v.certificate()).and_then(|c| c.degree);
    ensure(degree == Some(10), || format!("C0 degree {degree:?}"))?;

    let m = c6.moderate(&u, &k, 2).map_err(|e| e.to_string())?;
    ensure(m.overall == Overall::NotCertified { degree: 6 }, || format!("order 2: {}", m.overall))?;
    let first = m.first_failure().map(|e| e.order());
    ensure(first == Some(2), || format!("first uncertified order {first:?}"))?;

    let one = c10.negligible(&u, &k, 1).map_err(|e| e.to_string())?;
    let p1 = one.entries.iter().find(|e| e.order() == 1).unwrap();
    let power = match p1.ideal.as_ref() {
        Some(Verdict::Fails(r)) => r.power,
        _ => None,
    };
    ensure(power == Some(1), || format!("P1 ideal power {power:?}"))?;

    for c in [&c6, &c10] {
        let t = c.zero_order_reduction(&u, &k, 1).map_err(|e| e.to_string())?;
        ensure(!t.agreement, || "theorem reported agreement".into())?;
        let h = t.abort.as_ref().map(|a| a.hypothesis);
        ensure(h == Some(Hypothesis::Moderateness), || format!("abort {h:?}"))?;
    }
    Ok("C0-negligible to degree 10, order 2 not certified at D = 6, P1 fails at n = 1, theorem aborts on moderateness".into())
}

// Exact oracle for dominance on the tail. With λ = 2^-k and L = ln 2 the
// gauges are λ = 2^-k and 1/log(1/λ) = 1/(k L); every value is a Laurent
// polynomial in L with rational coefficients.

type Q = BigRational;
type Laurent = BTreeMap<i64, Q>;

#[derive(Clone, Debug)]
struct RawMonomial {
    coefficient: (i64, i64),
    exponents: Vec<i64>,
}

#[derive(Clone, Debug)]
struct RawElement {
    numerator: Vec<RawMonomial>,
    denominator: Vec<RawMonomial>,
}

fn pow2(e: i64) -> Q {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        Q::from_integer(p)
    } else {
        Q::new(BigInt::one(), p)
    }
}

fn q_pow(x: &Q, e: i64) -> Q {
    let mut r = Q::one();
    for _ in 0..e.unsigned_abs() {
        r *= x;
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

fn monomial_value(m: &RawMonomial, k: i64) -> Laurent {
    let (n, d) = m.coefficient;
    let mut c = Q::new(n.into(), d.into()) * pow2(-k * m.exponents[0]);
    let mut l_exp = 0;
    if let Some(&q) = m.exponents.get(1) {
        c *= q_pow(&Q::from_integer(k.into()), -q);
        l_exp = -q;
    }
    BTreeMap::from([(l_exp, c)])
}

fn add(a: &mut Laurent, b: &Laurent, sign: i64) {
    for (e, c) in b {
        let entry = a.entry(*e).or_insert_with(Q::zero);
        *entry += c * Q::from_integer(sign.into());
    }
}

fn mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            add(&mut out, &BTreeMap::from([(ea + eb, ca * cb)]), 1);
        }
    }
    out
}

fn posynomial_value(terms: &[RawMonomial], k: i64) -> Laurent {
    let mut out = Laurent::new();
    for m in terms {
        add(&mut out, &monomial_value(m, k), 1);
    }
    out
}

/// Rigorous bounds on ln 2 from `Σ 1/(n 2^n)`.
fn ln2_bounds(terms: u32) -> (Q, Q) {
    let mut s = Q::zero();
    for n in 1..=terms {
        s += Q::new(BigInt::one(), BigInt::from(n) << n);
    }
    let tail = Q::new(BigInt::one(), BigInt::from(terms + 1) << terms);
    (s.clone(), s + tail)
}

/// Sign of `p(ln 2)`; zero only for the zero polynomial.
fn sign_at_ln2(p: &Laurent, bounds: &mut Vec<(Q, Q)>) -> i32 {
    if p.values().all(Zero::is_zero) {
        return 0;
    }
    for level in 0.. {
        if level == bounds.len() {
            bounds.push(ln2_bounds(64 << level));
        }
        let (lo, hi) = &bounds[level];
        let (mut sum_lo, mut sum_hi) = (Q::zero(), Q::zero());
        for (e, c) in p {
            let (a, b) = (q_pow(lo, *e), q_pow(hi, *e));
            let (small, large) = if a <= b { (a, b) } else { (b, a) };
            if c.is_positive() {
                sum_lo += c * &small;
                sum_hi += c * &large;
            } else {
                sum_lo += c * &large;
                sum_hi += c * &small;
            }
        }
        if sum_lo.is_positive() {
            return 1;
        }
        if sum_hi.is_negative() {
            return -1;
        }
        assert!(level < 6, "ln 2 precision exhausted");
    }
    unreachable!()
}

/// `|a| <= b` at `λ = 2^-k`, exactly.
fn oracle_le(a: &RawElement, b: &RawElement, k: i64, bounds: &mut Vec<(Q, Q)>) -> bool {
    let lhs = mul(&posynomial_value(&a.numerator, k), &posynomial_value(&b.denominator, k));
    let mut diff = mul(&posynomial_value(&b.numerator, k), &posynomial_value(&a.denominator, k));
    add(&mut diff, &lhs, -1);
    sign_at_ln2(&diff, bounds) >= 0
}

fn random_monomial(rng: &mut ChaCha8Rng, arity: usize) -> RawMonomial {
    let mut exponents = vec![rng.gen_range(-2..=2)];
    if arity == 2 {
        exponents.push(rng.gen_range(-1..=1));
    }
    RawMonomial {
        coefficient: (rng.gen_range(1..=3), rng.gen_range(1..=2)),
        exponents,
    }
}

fn random_element(rng: &mut ChaCha8Rng, arity: usize) -> RawElement {
    let terms = |rng: &mut ChaCha8Rng| (0..rng.gen_range(1..=2)).map(|_| random_monomial(rng, arity)).collect();
    RawElement {
        numerator: terms(rng),
        denominator: terms(rng),
    }
}

fn to_element(e: &RawElement) -> ScaleElement {
    let posy = |terms: &[RawMonomial]| {
        let ms = terms
            .iter()
            .map(|m| {
                let exps = m.exponents.iter().map(|&x| Rational::from_integer(x)).collect();
                Monomial::new(Rational::new(m.coefficient.0, m.coefficient.1), exps).unwrap()
            })
            .collect();
        Posynomial::new(ms).unwrap()
    };
    ScaleElement::new(posy(&e.numerator), posy(&e.denominator))
}

fn comparator_coherence() -> Outcome {
    let bases = [
        Family::colombeau(),
        ScaleFamily::declare(
            vec![GaugeExpr::parse("lambda").unwrap(), GaugeExpr::parse("1/log(1/lambda)").unwrap()],
            Schedule::standard(),
            10,
        )
        .unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut bounds = Vec::new();
    let mono = |c: i64, e: &[i64]| RawElement {
        numerator: vec![RawMonomial { coefficient: (c, 1), exponents: e.to_vec() }],
        denominator: vec![RawMonomial { coefficient: (1, 1), exponents: vec![0; e.len()] }],
    };
    // the oracle itself: λ² <= λ, λ > λ/(k ln 2), 3/(k ln 2) <= 1 at k = 31
    ensure(oracle_le(&mono(1, &[2, 0]), &mono(1, &[1, 0]), 31, &mut bounds), || "oracle: lambda^2".into())?;
    ensure(!oracle_le(&mono(1, &[1, 0]), &mono(1, &[1, 1]), 31, &mut bounds), || "oracle: log factor".into())?;
    ensure(oracle_le(&mono(3, &[0, 1]), &mono(1, &[0, 0]), 31, &mut bounds), || "oracle: 3 g2".into())?;
    ensure(!oracle_le(&mono(22, &[0, 1]), &mono(1, &[0, 0]), 31, &mut bounds), || "oracle: 22 g2".into())?;
    let (mut pairs, mut holds, mut fails) = (0, 0, 0);
    for fam in &bases {
        let ks: Vec<i64> = fam
            .tail_indices()
            .map(|j| {
                let k = -fam.schedule()[j].log2().round() as i64;
                assert_eq!(fam.schedule()[j], 2f64.powi(-k as i32));
                k
            })
            .collect();
        for i in 0..600 {
            let a = random_element(&mut rng, fam.arity());
            let b = if i % 8 == 0 { a.clone() } else { random_element(&mut rng, fam.arity()) };
            let v = dominates(&to_element(&a), &to_element(&b), fam).map_err(|e| e.to_string())?;
            ensure(v.evidence() == Some(Evidence::Symbolic), || format!("{a:?} vs {b:?}: {}", v.tag()))?;
            let exact = ks.iter().all(|&k| oracle_le(&a, &b, k, &mut bounds));
            ensure(v.holds() == exact, || {
                format!("{} vs {}: symbolic {} but exact tail says {exact}", to_element(&a), to_element(&b), v.tag())
            })?;
            pairs += 1;
            if v.holds() {
                holds += 1;
            } else {
                fails += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs agree ({holds} holds, {fails} fails)"))
}

/// `|s| <= |r|` pointwise.
fn squeezed(r: &SampledNet<f64>, rng: &mut ChaCha8Rng) -> SampledNet<f64> {
    let values = r.values().iter().map(|v| v * rng.gen_range(-1.0..=1.0)).collect();
    SampledNet::new(r.schedule().to_vec(), values, "s").unwrap()
}

fn exponent(w: &ScaleElement) -> i64 {
    w.as_monomial().unwrap().exponents()[0].to_integer()
}

fn ring_axioms() -> Outcome {
    let fam = Family::colombeau();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let power = |c: f64, e: i32| SampledNet::from_fn(&fam, "r", move |l| c * l.powi(e));
    let err = |e: cepalg::scale::ScaleError| e.to_string();

    for _ in 0..200 {
        let r = power(rng.gen_range(0.5..4.0), rng.gen_range(-5..=5));
        let w = in_ring(&r, &fam, 8).map_err(err)?.witness().cloned().ok_or("r not in ring")?;
        let s = squeezed(&r, &mut rng);
        let vs = in_ring(&s, &fam, 8).map_err(err)?;
        ensure(vs.holds(), || "solidity: s not in ring".into())?;
        ensure(dominates(&s, &w, &fam).map_err(err)?.holds(), || "solidity: w does not dominate s".into())?;
        ensure(exponent(vs.witness().unwrap()) >= exponent(&w), || "solidity: witness larger than w".into())?;
    }

    for _ in 0..200 {
        let a = squeezed(&power(rng.gen_range(0.5..3.0), rng.gen_range(-3..=3)), &mut rng);
        let b = squeezed(&power(rng.gen_range(0.5..3.0), rng.gen_range(-3..=3)), &mut rng);
        let wa = in_ring(&a, &fam, 4).map_err(err)?.witness().cloned().ok_or("a not in ring")?;
        let wb = in_ring(&b, &fam, 4).map_err(err)?.witness().cloned().ok_or("b not in ring")?;
        let (sum, prod) = (a.add(&b).map_err(err)?, a.mul(&b).map_err(err)?);
        ensure(in_ring(&sum, &fam, 10).map_err(err)?.holds(), || "closure: a + b".into())?;
        ensure(in_ring(&prod, &fam, 10).map_err(err)?.holds(), || "closure: a b".into())?;
        ensure(dominates(&sum, &wa.add(&wb), &fam).map_err(err)?.holds(), || "closure: wa + wb".into())?;
        ensure(dominates(&prod, &wa.mul(&wb), &fam).map_err(err)?.holds(), || "closure: wa wb".into())?;
    }

    for _ in 0..200 {
        let degree = rng.gen_range(4..=10u32);
        let a = squeezed(&power(1.0, degree as i32 + rng.gen_range(0..=3)), &mut rng);
        ensure(in_ideal(&a, &fam, degree).map_err(err)?.holds(), || format!("absorption: a not in ideal to {degree}"))?;
        let r = power(rng.gen_range(0.5..2.0), rng.gen_range(-3..=3));
        let w = in_ring(&r, &fam, 4).map_err(err)?.witness().cloned().ok_or("r not in ring")?;
        let bounded = (-exponent(&w)).max(0) as u32;
        let ar = a.mul(&r).map_err(err)?;
        ensure(in_ideal(&ar, &fam, degree - bounded).map_err(err)?.holds(), || {
            format!("absorption: a r not in ideal to {}", degree - bounded)
        })?;
    }

    let power_log = ScaleFamily::<f64>::declare(
        vec![GaugeExpr::parse("lambda").unwrap(), GaugeExpr::parse("1/log(1/lambda)").unwrap()],
        Schedule::standard(),
        10,
    )
    .unwrap();
    for _ in 0..200 {
        let e = to_element(&random_element(&mut rng, 2));
        ensure(invert(&invert(&e)) == e, || format!("invert twice: {e}"))?;
        let one = SampledNet::from_element(&power_log, &e.mul(&invert(&e)));
        ensure(one.values().iter().all(|v| (v - 1.0).abs() < 1e-12), || format!("e / e != 1 for {e}"))?;
    }
    Ok("200 instances each of solidity, closure, absorption and inversion".into())
}

fn taylor_bound_validity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut checked = 0;
    for i in 0..100 {
        let (a, f, s, c) = (
            rng.gen_range(1..=3),
            rng.gen_range(1..=6),
            rng.gen_range(-2..=2),
            rng.gen_range(1..=2),
        );
        let (text, dim) = match i % 4 {
            0 => (format!("{a}*exp(-{c}/lambda)*sin({f}*x1/lambda + {s})"), 1),
            1 => (format!("{a}*x1^{} + {s}*lambda*x1", c + 1), 1),
            2 => (format!("{a}*cos({f}*x1*x2/lambda + {s})"), 2),
            _ => (format!("{a}*exp(-{c}/lambda)*sin(x1/lambda)*cos({f}*x2)"), 2),
        };
        let u = net(&text, dim);
        let k = region(&vec![(0.0, 1.0); dim]);
        let grid = Grid::new(if dim == 1 { 401 } else { 101 }).unwrap();
        let lambda: f64 = rng.gen_range(0.05..=1.0);
        let p2 = seminorm_order(&u, &k.fattened(0.5), 2, lambda, grid).map_err(|e| e.to_string())?;
        let beta = rng.gen_range(1.0..=4.0) * p2.max(f64::MIN_POSITIVE);
        let b = rng.gen_range(0.01..=0.5) * beta;
        for axis in 1..=dim {
            let bound = taylor_derivative_bound(&u, &k, axis, b, beta, lambda, grid).map_err(|e| e.to_string())?;
            let measured = measured_derivative(&u, &k, axis, lambda, grid).map_err(|e| e.to_string())?;
            ensure(measured <= bound, || format!("{text} axis {axis} at lambda {lambda}: {measured} > {bound}"))?;
            checked += 1;
        }
    }
    Ok(format!("100 instances, {checked} axis checks"))
}

fn embedding() -> Outcome {
    let fam = Family::colombeau();
    let c = Classifier::new(&fam, 10);
    let k = [region(&[(0.0, 1.0)])];
    for f in ["1", "sin(x1)", "x1^2"] {
        let r = c.embedding(&net(f, 1), &k).map_err(|e| e.to_string())?;
        ensure(
            matches!(r.report.overall, Overall::Refuted { power: 1 | 2 }),
            || format!("{f}: {}", r.report.overall),
        )?;
        ensure(r.injective && !r.vanishes, || format!("{f}: injectivity"))?;
    }
    let r = c.embedding(&net("0", 1), &k).map_err(|e| e.to_string())?;
    ensure(r.report.is_negligible() && r.vanishes && r.injective, || format!("0: {}", r.report.overall))?;
    Ok("1, sin(x1), x1^2 refuted at n <= 2; 0 negligible".into())
}

const SEMINORM_CATALOG: &[(&str, usize)] = &[
    ("0", 1),
    ("1", 1),
    ("x1", 1),
    ("x1^2 + lambda", 1),
    ("sin(x1/lambda)", 1),
    ("exp(-1/lambda)*sin(x1/lambda)", 1),
    ("lambda*cos(3*x1)", 1),
    ("exp(x1)*lambda^2", 1),
    ("1/(1 + x1^2/lambda)", 1),
    ("log(2 + sin(x1/lambda))", 1),
    ("abs(x1 - 1/3)^(5/2)", 1),
    ("exp(-1/lambda^2)*cos(x1/lambda)", 1),
    ("exp(-1/lambda)*(x1^2 + 1)", 1),
    ("exp(-1/lambda)*sin(x1/lambda^3)", 1),
    ("x1^3 - 2*x1", 1),
    ("cos(x1)/(2 + sin(x1))", 1),
    ("exp(-2/lambda)*sin(x1*x2/lambda)", 2),
    ("x1*x2", 2),
    ("sin(x1 + lambda*x2)", 2),
    ("(x1^2 + x2^2)/(1 + lambda)", 2),
];

/// `a <= b` up to rounding in sums of separately computed sups.
fn le_slack(a: f64, b: f64) -> bool {
    a <= b + 1e-12 * b.abs()
}

fn seminorm_laws() -> Outcome {
    let lambdas = [1.0, 0.5, 0.1, 0.01];
    let mut checks = 0usize;
    let mut violations = Vec::new();
    let mut check = |ok: bool, what: String| {
        checks += 1;
        if !ok {
            violations.push(what);
        }
    };
    for (i, &(text, dim)) in SEMINORM_CATALOG.iter().enumerate() {
        let u = net(text, dim);
        let (k, inner, covers, grid) = if dim == 1 {
            (
                region(&[(0.0, 1.0)]),
                region(&[(0.2, 0.7)]),
                vec![
                    vec![region(&[(-0.1, 0.55)]), region(&[(0.45, 1.1)])],
                    vec![region(&[(0.0, 0.3)]), region(&[(0.25, 1.0)])],
                ],
                Grid::new(101).unwrap(),
            )
        } else {
            (
                region(&[(0.0, 1.0), (0.0, 1.0)]),
                region(&[(0.2, 0.7), (0.1, 0.9)]),
                vec![vec![region(&[(0.0, 0.6), (0.0, 1.0)]), region(&[(0.5, 1.0), (0.0, 1.0)])]],
                Grid::new(21).unwrap(),
            )
        };
        let (j, _) = SEMINORM_CATALOG
            .iter()
            .enumerate()
            .cycle()
            .skip(i + 1)
            .find(|(_, (_, d))| *d == dim)
            .unwrap();
        let v = net(SEMINORM_CATALOG[j].0, dim);
        let sum = NetExpr::new(Expr::Add(Box::new(u.expr().clone()), Box::new(v.expr().clone())), dim).unwrap();
        let three = Rational::new(-3, 2);
        let scaled = NetExpr::new(Expr::Mul(Box::new(Expr::Const(three)), Box::new(u.expr().clone())), dim).unwrap();
        let prod = u.product(&v).unwrap();
        for &lambda in &lambdas {
            let p = |w: &NetExpr, l: usize, g: Grid| seminorm_order(w, &k, l, lambda, g).unwrap();
            let at = |what: &str| format!("{text} at lambda {lambda}: {what}");
            let orders: Vec<f64> = (0..=2).map(|l| p(&u, l, grid)).collect();
            check(orders.iter().all(|x| *x >= 0.0), at("nonnegative"));
            check(orders.windows(2).all(|w| w[0] <= w[1]), at("monotone in order"));
            check(restriction_check(&u, &inner, &k, 2, lambda, grid).unwrap(), at("monotone in box"));
            for l in 0..=2 {
                let s = p(&scaled, l, grid);
                check((s - 1.5 * orders[l]).abs() <= 1e-12 * s.abs(), at("homogeneity"));
                check(le_slack(p(&sum, l, grid), orders[l] + p(&v, l, grid)), at("triangle inequality"));
                check(p(&u, l, grid) <= p(&u, l, grid.refined()), at("refinement"));
            }
            check(le_slack(p(&prod, 0, grid), orders[0] * p(&v, 0, grid)), at("submultiplicative"));
            if text == "0" {
                check(orders.iter().all(|x| *x == 0.0), at("zero net"));
            }
            for cover in &covers {
                check(cover_subadditivity_check(&u, &k, cover, 2, lambda, grid).unwrap(), at("cover"));
            }
        }
    }
    ensure(violations.is_empty(), || format!("{} violations, first: {}", violations.len(), violations[0]))?;
    Ok(format!("{} nets, {checks} checks, zero violations", SEMINORM_CATALOG.len()))
}

fn scenarios_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn run_once(path: &Path, csv_dir: &Path) -> Result<(String, i32, BTreeMap<String, Vec<u8>>), String> {
    let mut s = load_scenario(path).map_err(|e| e.to_string())?;
    s.csv_dir = csv_dir.to_path_buf();
    let r = run_scenario(&s);
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(csv_dir).map_err(|e| e.to_string())? {
        let p = entry.map_err(|e| e.to_string())?.path();
        files.insert(
            p.file_name().unwrap().to_string_lossy().into_owned(),
            std::fs::read(&p).map_err(|e| e.to_string())?,
        );
    }
    Ok((r.body(), r.exit_code(), files))
}

fn determinism() -> Outcome {
    let mut csvs = 0;
    for name in ["catalog.toml", "necessity.toml"] {
        let path = scenarios_dir().join(name);
        let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let (body1, code1, files1) = run_once(&path, d1.path())?;
        let (body2, code2, files2) = run_once(&path, d2.path())?;
        ensure(code1 == 0 && code2 == 0, || format!("{name}: exit codes {code1}, {code2}"))?;
        ensure(body1 == body2, || format!("{name}: report bodies differ"))?;
        ensure(!files1.is_empty() && files1 == files2, || format!("{name}: CSVs differ"))?;
        csvs += files1.len();
    }
    Ok(format!("2 scenarios run twice, identical reports and {csvs} identical CSVs, exit 0"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("zero-order theorem catalog", zero_order_catalog),
        ("hypothesis necessity", necessity),
        ("comparator coherence", comparator_coherence),
        ("ring axiom suite", ring_axioms),
        ("Taylor bound validity", taylor_bound_validity),
        ("embedding injectivity", embedding),
        ("seminorm engine laws", seminorm_laws),
        ("determinism", determinism),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("acceptance {} PASS {name}: {detail} ({secs:.1} s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("acceptance {} FAIL {name}: {detail} ({secs:.1} s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
