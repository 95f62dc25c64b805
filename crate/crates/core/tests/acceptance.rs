//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use dalg::diff::{diff_reduce, total_derivative, RationalExpr};
use dalg::groebner::{
    buchberger, elimination_ideal, normal_form, satisfies_criterion, saturate, Budget, TruncatedIdeal,
};
use dalg::method1::{self, Levels, Op};
use dalg::method2::{self, DynModel};
use dalg::oracle::{verify, Combination, OracleConfig, Outcome, TruncSeries};
use dalg::syntax::{parse_poly, parse_rational, Names};
use dalg::{rat, AdeResult, Method, MonomialOrder, Poly, Rational, Var};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome2 = Result<String, String>;

fn p(src: &str) -> Poly {
    pp(src, &[])
}

fn pp(src: &str, params: &[&str]) -> Poly {
    parse_poly(src, &Names::new("x", params)).unwrap()
}

fn r(src: &str) -> RationalExpr {
    parse_rational(src, &Names::new("x", &[])).unwrap()
}

fn x() -> Var {
    Var::indep("x")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn prop(got: &Poly, want: &Poly) -> Result<(), String> {
    ensure(got.is_proportional(want), || format!("got {got}, want {want}"))
}

fn e2s(e: dalg::Error) -> String {
    e.to_string()
}

struct Produced {
    label: String,
    res: AdeResult,
    comb: Combination,
    indep: Var,
}

struct Suite {
    produced: Vec<Produced>,
    failures: usize,
}

impl Suite {
    fn keep(&mut self, label: &str, res: &AdeResult, comb: Combination) {
        let indep = match &comb {
            Combination::Inverse { indep, .. } => indep.clone(),
            _ => x(),
        };
        self.produced.push(Produced { label: label.to_string(), res: res.clone(), comb, indep });
    }

    fn run(&mut self, n: usize, name: &str, limit: u64, f: impl FnOnce(&mut Suite, &mut Budget) -> Outcome2) {
        let start = Instant::now();
        let mut budget = Budget::new(Duration::from_secs(limit), u64::MAX);
        let out = f(self, &mut budget);
        let t = start.elapsed();
        let out = match out {
            Ok(d) if t > Duration::from_secs(limit) => Err(format!("{d}; took {t:.2?}, limit {limit} s")),
            o => o,
        };
        match out {
            Ok(d) => println!("criterion {n:2} PASS  {name} [{t:.2?}] {d}"),
            Err(e) => {
                self.failures += 1;
                println!("criterion {n:2} FAIL  {name} [{t:.2?}] {e}");
            }
        }
    }
}

fn relation(inputs: &[Poly], rel: &str) -> Combination {
    Combination::Relation { inputs: inputs.to_vec(), rel: r(rel) }
}

fn painleve_square(s: &mut Suite, b: &mut Budget) -> Outcome2 {
    let want = p("-16*x^2*z^3 - 192*x*z^4 - 576*z^5 + 4*z^2*z''^2 - 4*z*z'^2*z'' + z'^4");
    let (y0, y1) = (Var::aux("y0"), Var::aux("y1"));
    let rhs = vec![
        RationalExpr::var(y1.clone()),
        RationalExpr::poly(&(&Poly::var(y0.clone()).pow(2) * &Poly::from_int(6)) + &Poly::var(x())),
    ];
    let m = DynModel::new(x(), vec![y0.clone(), y1], rhs, RationalExpr::poly(Poly::var(y0).pow(2))).map_err(e2s)?;
    let a = method2::sys_to_min(&m, "z", b).map_err(e2s)?;
    prop(&a.ade, &want)?;
    ensure(a.order == 2, || format!("order {}", a.order))?;
    s.keep("painleve square model", &a, Combination::Model(m));
    let pi = p("y''-6*y^2-x");
    let u = method2::unary(&pi, "z", &r("y^2"), &x(), b).map_err(e2s)?;
    prop(&u.ade, &want)?;
    s.keep("painleve square unary", &u, relation(&[pi], "y^2"));
    Ok(format!("order {}, degree {}", a.order, a.degree))
}

fn sum_cubic(s: &mut Suite, b: &mut Budget) -> Outcome2 {
    let ins = [p("y'^3+y+1"), p("z'^2-z-1")];
    let res = method2::arith(&ins, "w", &r("y+z"), &x(), b).map_err(e2s)?;
    prop(&res.ade, &p("24*w''^3 - 36*w''^2 + 18*w'' - 8*w^(3) - 3"))?;
    ensure(res.order == 3, || format!("order {}", res.order))?;
    s.keep("cubic plus quadratic", &res, relation(&ins, "y+z"));
    Ok(format!("{}", res.ade))
}

fn method_one_h1(s: &mut Suite, b: &mut Budget) -> Outcome2 {
    let (f, g) = (p("y'-y"), p("z^2+2*z'"));
    let res = method1::compose(&f, &g, "w", &x(), &Levels::default(), b).map_err(e2s)?;
    prop(&res.ade, &p("w'^4 - 2*w*w'^2*w'' + w^2*w''^2 + 2*w*w'^3"))?;
    ensure(res.level == Some(1), || format!("level {:?}", res.level))?;
    s.keep("exp of Riccati solution", &res, Combination::Compose { outer: f, inner: g });
    Ok(format!("level j = 1: {}", res.ade))
}

fn method_one_non_autonomous(s: &mut Suite, b: &mut Budget) -> Outcome2 {
    let (f, g) = (p("y''+y"), p("z'-x*z"));
    let res = method1::compose(&f, &g, "w", &x(), &Levels::default(), b).map_err(e2s)?;
    prop(&res.ade, &p("(2*x^4+3*x^2+3)*w*w' + (x^3+x)*w'^2 - 3*(x^3+x)*w*w'' - x^2*w'*w'' + x^2*w*w^(3)"))?;
    s.keep("sine of Gaussian", &res, Combination::Compose { outer: f, inner: g });
    Ok(format!("level j = {}", res.level.unwrap_or_default()))
}

fn reciprocal_cos(s: &mut Suite, b: &mut Budget) -> Outcome2 {
    let want = p("g*g'' - 2*g'^2 - g^2");
    let circle = p("c'^2+c^2-1");
    let first = method2::unary(&circle, "g", &r("1/c"), &x(), b).map_err(e2s)?;
    prop(&first.ade, &p("g^4 - g^2 - g'^2"))?;
    s.keep("sec from circle", &first, relation(&[circle], "1/c"));
    let f1 = p("g^4 - g^2 - g'^2");
    let g = Poly::var(Var::diff("g", 0));
    let dg = Poly::var(Var::diff("g", 1));
    let lhs = &(&g * &total_derivative(&f1, &x())) + &(&dg * &want).scale(&rat(2, 1));
    let rhs = (&dg * &f1).scale(&rat(4, 1));
    ensure((&lhs - &rhs).is_zero(), || "second-order equation is not implied by the first-order one".into())?;
    let cos = p("c''+c");
    let div = method1::arith(std::slice::from_ref(&cos), "g", &r("1/c"), &x(), &Levels::default(), b).map_err(e2s)?;
    prop(&div.ade, &want)?;
    s.keep("sec by division", &div, relation(&[cos], "1/c"));
    Ok(format!("{}", div.ade))
}

fn trig_suite(s: &mut Suite, b: &mut Budget) -> Outcome2 {
    let tan = p("t'-t^2-1");
    let lin = p("y'-3");
    let a = method2::compose(&tan, &lin, "z", &x(), b).map_err(e2s)?;
    prop(&a.ade, &p("z' - 3*z^2 - 3"))?;
    s.keep("tan(3x)", &a, Combination::Compose { outer: tan.clone(), inner: lin.clone() });
    let tri = "(3*t-t^3)/(1-3*t^2)";
    let c = method2::unary(&tan, "z", &r(tri), &x(), b).map_err(e2s)?;
    prop(&c.ade, &a.ade)?;
    s.keep("tan triplication", &c, relation(&[tan], tri));
    let circle = p("c'^2+c^2-1");
    let sec = method2::unary(&circle, "s", &r("1/c"), &x(), b).map_err(e2s)?;
    prop(&sec.ade, &p("s^4 - s^2 - s'^2"))?;
    s.keep("sec", &sec, relation(&[circle], "1/c"));
    let sq = p("s^4-s^2-s'^2");
    let sec3 = method2::compose(&sq, &lin, "z", &x(), b).map_err(e2s)?;
    prop(&sec3.ade, &p("-18*z^3 + 9*z + z''"))?;
    s.keep("sec(3x)", &sec3, Combination::Compose { outer: sq.clone(), inner: lin });
    let cub = "s^3/(4-3*s^2)";
    let e = method2::unary(&sq, "z", &r(cub), &x(), b).map_err(e2s)?;
    prop(&e.ade, &p("9*z^4 - 9*z^2 - z'^2"))?;
    s.keep("sec triplication", &e, relation(&[sq], cub));
    let d = total_derivative(&p("9*z^4-9*z^2-z'^2"), &x());
    let red = diff_reduce(&d, &p("-18*z^3+9*z+z''"), "z", &x()).map_err(e2s)?;
    ensure(red.is_zero(), || format!("remainder {red}"))?;
    Ok("five steps and the reduction".into())
}

fn weierstrass(s: &mut Suite, b: &mut Budget) -> Outcome2 {
    let ps = &["g2", "g3"];
    let wp = pp("y'^2 - 4*y^3 + g2*y + g3", ps);
    let two = p("z'-2");
    let doubled = method2::compose(&wp, &two, "y", &x(), b).map_err(e2s)?;
    let q = pp("y'' - 24*y^2 + 2*g2", ps);
    prop(&doubled.ade, &q)?;
    s.keep("wp(2x)", &doubled, Combination::Compose { outer: wp.clone(), inner: two });
    let dwp = total_derivative(&wp, &x());
    let rhs = parse_rational("(1/4)*(y''/y')^2 - 2*y", &Names::new("x", ps)).unwrap();
    let dup = method2::unary(&dwp, "y", &rhs, &x(), b).map_err(e2s)?;
    ensure(dup.order == 2, || format!("order {}", dup.order))?;
    let red = diff_reduce(&dup.ade, &q, "y", &x()).map_err(e2s)?;
    ensure(red.is_zero(), || format!("remainder {red}"))?;
    s.keep("duplication formula", &dup, Combination::Relation { inputs: vec![wp], rel: rhs });
    Ok(format!("duplication result has degree {}", dup.degree))
}

fn inverse(s: &mut Suite, _: &mut Budget) -> Outcome2 {
    let e = p("w'-w");
    let res = method2::inverse(&e, &x(), "y", "g").map_err(e2s)?;
    prop(&res.ade, &parse_poly("1 - y*g'", &Names::new("y", &[])).unwrap())?;
    s.keep("log", &res, Combination::Inverse { p: e, indep: Var::indep("y") });
    Ok(format!("{}", res.ade))
}

fn algebraic_outer(s: &mut Suite, b: &mut Budget) -> Outcome2 {
    let (f, g) = (p("y^2-x"), p("z''-6*z^2-x"));
    let res = method2::compose(&f, &g, "h", &x(), b).map_err(e2s)?;
    prop(&res.ade, &p("-x - 6*h^4 + 2*h'^2 + 2*h''*h"))?;
    s.keep("sqrt of PI", &res, Combination::Compose { outer: f, inner: g });
    Ok(format!("{}", res.ade))
}

fn painleve_compositions(s: &mut Suite, b: &mut Budget) -> Outcome2 {
    let pi = p("z''-6*z^2-x");
    let exp = p("y'-y");
    let e = method2::compose(&exp, &pi, "w", &x(), b).map_err(e2s)?;
    let corrected = p("24*x*w'^2*w^4 + w^6 - 2*w^5*w^(3) + 6*w''*w'*w^4 + w^(3)^2*w^4 - 4*w'^3*w^3 \
        - 24*w''*w'^2*w^3 - 6*w^(3)*w''*w'*w^3 + 24*w'^4*w^2 + 4*w^(3)*w'^3*w^2 \
        + 9*w''^2*w'^2*w^2 - 12*w''*w'^4*w + 4*w'^6");
    prop(&e.ade, &corrected)?;
    let comb = Combination::Compose { outer: exp.clone(), inner: pi.clone() };
    let variant = &(&corrected + &p("4*w'^3*w^3")) - &p("4*w'^3");
    let rejected = verify(&comb, &variant, "w", &x(), &OracleConfig::default()).outcome == Outcome::Fail;
    ensure(rejected, || "the inhomogeneous variant was not rejected".into())?;
    s.keep("exp of PI", &e, comb);
    let sqrt = p("2*x*y'-y");
    let q = method2::compose(&sqrt, &pi, "w", &x(), b).map_err(e2s)?;
    prop(
        &q.ade,
        &p("-48*x^2*w'^2*w^3 + 24*x*w^4*w' - 2*x*w^(3)^2*w^3 - 4*x*w''*w^(3)*w'*w^2 \
            + 8*x*w'^3*w^(3)*w + 6*x*w'^2*w''^2*w + 24*x*w'^4*w'' + 2*w''*w^(3)*w^3 - 3*w^5 \
            + 2*w'^2*w^(3)*w^2 - 2*w''^2*w'*w^2 - 10*w'^3*w''*w - 8*w'^5"),
    )?;
    s.keep("sqrt(x) of PI", &q, Combination::Compose { outer: sqrt, inner: pi });
    Ok("exp term -4w'^3 carries w^3 (the variant without it fails the oracle)".into())
}

fn sir(s: &mut Suite, b: &mut Budget) -> Outcome2 {
    let ps = ["beta", "delta", "mu", "gamma", "nu"];
    let sub = |e: &str| {
        parse_rational(e, &Names::new("x", &ps))
            .unwrap()
            .map_vars(|v| if v.is_differential() { Var::aux(v.name()) } else { v.clone() })
    };
    let rhs = vec![sub("-beta*S*T - delta*S + mu"), sub("beta*S*T - gamma*T + nu"), sub("delta*S + gamma*T")];
    let m = DynModel::new(x(), vec![Var::aux("S"), Var::aux("T"), Var::aux("R")], rhs, sub("R")).map_err(e2s)?;
    let res = method2::sys_to_min(&m, "f", b).map_err(e2s)?;
    ensure(res.order == 3, || format!("order {}", res.order))?;
    let total = res.ade.total_degree();
    s.keep("SIR", &res, Combination::Model(m));
    Ok(format!("order 3, degree {} in f and its derivatives, {} counting parameters", res.degree, total))
}

fn table_one(s: &mut Suite, b: &mut Budget) -> Outcome2 {
    let lv = Levels::default();
    let (c11, c21) = (p("y'-x*y^2"), p("-z'^2+z+x+1"));
    let (c12, c22) = (p("x*y'-x^2+y-1"), p("z*z'+3*z'+2*x^2+2"));
    let (c13, c23) = (p("y'*y+y''"), p("z'+x*z''"));
    let mut rows = Vec::new();
    let mut check = |s: &mut Suite, label: &str, res: AdeResult, want: i64, comb: Combination, published: f64| -> Result<(), String> {
        ensure(res.order == want, || format!("{label}: order {}", res.order))?;
        let limit_ms = (published * 10.0).min(600.0) * 1000.0;
        ensure((res.elapsed_ms as f64) <= limit_ms, || format!("{label}: {} ms over budget", res.elapsed_ms))?;
        rows.push(format!("{label} ({}, {})", res.order, res.degree));
        s.keep(label, &res, comb);
        Ok(())
    };
    let sum = || relation(&[c11.clone(), c21.clone()], "y+z");
    let r = method1::arith_op(&c11, &c21, Op::Add, "w", &x(), &lv, b).map_err(e2s)?;
    check(s, "11+21 I", r, 2, sum(), 364.185)?;
    let r = method2::arith(&[c12.clone(), c22.clone()], "w", &self::r("y+z"), &x(), b).map_err(e2s)?;
    check(s, "12+22 II", r, 2, relation(&[c12.clone(), c22.clone()], "y+z"), 0.218)?;
    let comp = |f: &Poly, g: &Poly| Combination::Compose { outer: f.clone(), inner: g.clone() };
    let r = method1::compose(&c11, &c21, "w", &x(), &lv, b).map_err(e2s)?;
    check(s, "11o21 I", r, 2, comp(&c11, &c21), 0.127)?;
    let r = method1::compose(&c12, &c22, "w", &x(), &lv, b).map_err(e2s)?;
    check(s, "12o22 I", r, 2, comp(&c12, &c22), 0.314)?;
    let r = method2::compose(&c12, &c22, "w", &x(), b).map_err(e2s)?;
    check(s, "12o22 II", r, 2, comp(&c12, &c22), 37.984)?;
    let r = method1::compose(&c13, &c23, "w", &x(), &lv, b).map_err(e2s)?;
    check(s, "13o23 I", r, 3, comp(&c13, &c23), 0.117)?;
    let r = method2::compose(&c13, &c23, "w", &x(), b).map_err(e2s)?;
    check(s, "13o23 II", r, 3, comp(&c13, &c23), 1.797)?;
    Ok(rows.join(", "))
}

fn circle_sum(s: &mut Suite, b: &mut Budget) -> Outcome2 {
    let ins = [p("y*y''-y'^2"), p("z'^2+z^2+1")];
    let res = method2::arith(&ins, "w", &r("y+z"), &x(), b).map_err(e2s)?;
    prop(&res.ade, &p("-w*w'' - w*w^(4) + w'^2 + 2*w'*w^(3) - w''^2 - w''*w^(4) + w^(3)^2"))?;
    s.keep("exp plus imaginary circle", &res, relation(&ins, "y+z"));
    Ok(format!("order {}, degree {}", res.order, res.degree))
}

fn order_bounds(s: &mut Suite, _: &mut Budget) -> Outcome2 {
    let mut checked = 0;
    for pr in &s.produced {
        if pr.res.method != Method::II {
            continue;
        }
        if let Some(bound) = pr.res.bound {
            ensure(pr.res.order <= bound, || format!("{}: order {} > bound {bound}", pr.label, pr.res.order))?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "no bounded results".into())?;
    Ok(format!("{checked} Method II results within their bounds"))
}

fn series_runner() -> TestRunner {
    TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() })
}

fn series_self_tests() -> Result<(), String> {
    let q = |n: i64, d: i64| -> Rational { rat(n, d) };
    let zero = q(0, 1);
    let mut runner = series_runner();
    let z = zero.clone();
    runner
        .run(&(prop::collection::vec(-9i64..10, 8), 1i64..5), |(a, a0)| {
            let mut c: Vec<Rational> = a.iter().map(|&k| q(k, 3)).collect();
            c[0] = q(a0, 1);
            let f = TruncSeries::new(z.clone(), c);
            let one = f.mul(&f.recip().unwrap());
            prop_assert_eq!(one, TruncSeries::constant(z.clone(), q(1, 1), 8));
            Ok(())
        })
        .map_err(|e| format!("reciprocal: {e}"))?;
    let mut runner = series_runner();
    let z = zero.clone();
    runner
        .run(&(prop::collection::vec(-5i64..6, 6), prop::collection::vec(-5i64..6, 6)), |(a, b)| {
            let mk = |v: &Vec<i64>| {
                let mut cs: Vec<Rational> = v.iter().map(|&k| q(k, 1)).collect();
                cs[0] = z.clone();
                TruncSeries::new(z.clone(), cs)
            };
            let (f, g) = (mk(&a), mk(&b));
            let id = TruncSeries::identity(z.clone(), 6);
            prop_assert_eq!(f.compose(&id).unwrap(), f.clone());
            prop_assert_eq!(id.compose(&g).unwrap(), g.clone());
            let h = f.compose(&g).unwrap();
            prop_assert_eq!(h.derivative(), f.derivative().compose(&g).unwrap().mul(&g.derivative()).truncate(5));
            Ok(())
        })
        .map_err(|e| format!("composition: {e}"))?;
    let mut runner = series_runner();
    runner
        .run(&(prop::collection::vec(-9i64..10, 8), 1i64..6, -4i64..5), |(a, a1, a0)| {
            let mut c: Vec<Rational> = a.iter().map(|&k| q(k, 2)).collect();
            c[0] = q(a0, 1);
            c[1] = q(a1, 1);
            let f = TruncSeries::new(q(1, 3), c);
            let g = f.reversion().unwrap();
            prop_assert_eq!(g.compose(&f).unwrap(), TruncSeries::identity(q(1, 3), 8));
            Ok(())
        })
        .map_err(|e| format!("reversion: {e}"))?;
    Ok(())
}

fn oracle_suite(s: &mut Suite, _: &mut Budget) -> Outcome2 {
    let cfg = OracleConfig::default();
    let mut passed = 0;
    let mut skipped = Vec::new();
    for pr in &s.produced {
        let rep = verify(&pr.comb, &pr.res.ade, &pr.res.func, &pr.indep, &cfg);
        match rep.outcome {
            Outcome::Pass => {
                ensure(rep.jets.len() >= 2, || format!("{}: fewer than two jets", pr.label))?;
                passed += 1;
            }
            Outcome::Fail => return Err(format!("{}: {rep}", pr.label)),
            Outcome::Skipped => skipped.push(pr.label.clone()),
        }
    }
    series_self_tests()?;
    let mut d = format!("{passed} ADEs pass the series check; series self-tests pass on 100 instances each");
    if !skipped.is_empty() {
        d.push_str(&format!("; no rational jet for: {}", skipped.join(", ")));
    }
    Ok(d)
}

fn groebner_kernel(_: &mut Suite, b: &mut Budget) -> Outcome2 {
    let names = Names::new("x", &[]).with_functions(&["y", "z", "w"]);
    let q = |s: &str| parse_poly(s, &names).unwrap();
    let (xv, yv, zv) = (Var::indep("x"), Var::diff("y", 0), Var::diff("z", 0));
    let systems: [&[&str]; 3] =
        [&["x*y - 1", "y^2 - x"], &["x*y - z", "x*z - y^2", "x^2 - y"], &["x^2 + y*z - 1", "y^2 - z + x", "z^2 - x*y"]];
    let orders = [
        MonomialOrder::lex(vec![xv.clone(), yv.clone(), zv.clone()]),
        MonomialOrder::degrevlex(vec![xv.clone(), yv.clone(), zv.clone()]),
        MonomialOrder::block_elimination(vec![xv.clone()], vec![yv.clone(), zv.clone()]),
    ];
    let mut bases = 0;
    for sys in systems {
        let gens: Vec<Poly> = sys.iter().map(|s| q(s)).collect();
        for ord in &orders {
            let ideal = TruncatedIdeal::new(gens.clone(), ord.clone()).map_err(e2s)?;
            let g = buchberger(&ideal, b).map_err(e2s)?;
            ensure(satisfies_criterion(&g.elements, &g.order).map_err(e2s)?, || format!("criterion fails for {sys:?}"))?;
            for f in &gens {
                ensure(normal_form(f, &g.elements, &g.order).map_err(e2s)?.is_zero(), || format!("{f} not reduced to 0"))?;
            }
            if ord != &orders[1] {
                for e in elimination_ideal(&g, &[yv.clone(), zv.clone()]).map_err(e2s)? {
                    ensure(!e.contains_var(&xv), || format!("{e} still has x"))?;
                    ensure(normal_form(&e, &g.elements, &g.order).map_err(e2s)?.is_zero(), || format!("{e} not in ideal"))?;
                }
            }
            bases += 1;
        }
    }
    let ord = MonomialOrder::degrevlex(vec![xv.clone(), yv.clone()]);
    let i = TruncatedIdeal::new(vec![q("x*y")], ord.clone()).map_err(e2s)?;
    let sat = saturate(&i, &q("x"), b).map_err(e2s)?;
    ensure(sat.generators == vec![q("y")], || format!("<xy>:x^inf = {:?}", sat.generators))?;
    let i = TruncatedIdeal::new(vec![q("x^2")], ord).map_err(e2s)?;
    let sat = saturate(&i, &q("x"), b).map_err(e2s)?;
    ensure(sat.generators == vec![q("1")], || format!("<x^2>:x^inf = {:?}", sat.generators))?;
    let model = Names::new("x", &[]).with_functions(&["u", "z"]);
    let gens: Vec<Poly> = ["u' - u^2 - x", "u'' - 2*u*u' - 1", "z - u", "z' - u'", "z'' - u''"]
        .iter()
        .map(|s| parse_poly(s, &model).unwrap())
        .collect();
    let u = |k| Var::diff("u", k);
    let zz = |k| Var::diff("z", k);
    let ord = MonomialOrder::lex(vec![zz(2), zz(1), zz(0), u(2), u(1), u(0), xv]);
    ensure(satisfies_criterion(&gens, &ord).map_err(e2s)?, || "one-state model generators are not a basis".into())?;
    Ok(format!("{bases} bases satisfy the criterion; saturations and the one-state model check hold"))
}

fn main() {
    let mut s = Suite { produced: Vec::new(), failures: 0 };
    s.run(1, "Painleve square", 60, painleve_square);
    s.run(2, "sum of cubic and quadratic inputs", 60, sum_cubic);
    s.run(3, "Method I composition at j = 1", 60, method_one_h1);
    s.run(4, "Method I non-autonomous composition", 120, method_one_non_autonomous);
    s.run(5, "reciprocal of cosine", 30, reciprocal_cos);
    s.run(6, "trigonometric identities", 300, trig_suite);
    s.run(7, "Weierstrass duplication", 180, weierstrass);
    s.run(8, "inverse of exp", 10, inverse);
    s.run(9, "algebraic outer composition", 60, algebraic_outer);
    s.run(10, "compositions with Painleve I", 600, painleve_compositions);
    s.run(11, "SIR model", 120, sir);
    s.run(12, "comparison table subset", 600, table_one);
    s.run(13, "sum with the circle equation", 120, circle_sum);
    s.run(14, "order bounds", 10, order_bounds);
    s.run(15, "series oracle", 600, oracle_suite);
    s.run(16, "Groebner kernel", 60, groebner_kernel);
    println!("acceptance: {} of 16 criteria passed", 16 - s.failures);
    if s.failures > 0 {
        std::process::exit(1);
    }
}
