use dalg::oracle::{
    check_vanishing, generic_jet, model_series, rational_roots, series_from_ade, verify, Combination, OracleConfig,
    Outcome, TruncSeries, Valuation,
};
use dalg::syntax::{parse_poly, parse_rational, Names};
use dalg::{rat, Poly, Rational, Var};
use proptest::prelude::*;

fn p(src: &str) -> Poly {
    parse_poly(src, &Names::new("x", &[])).unwrap()
}

fn x() -> Var {
    Var::indep("x")
}

fn q(n: i64, d: i64) -> Rational {
    rat(n, d)
}

fn zero() -> Rational {
    q(0, 1)
}

fn solve(src: &str, jet: &[Rational], len: usize) -> TruncSeries {
    let e = p(src);
    let f = dalg::diff::functions_in(&e).remove(0);
    series_from_ade(&e, &f, &x(), &Valuation::new(), &zero(), jet, len).unwrap()
}

#[test]
fn exponential_series() {
    let s = solve("z'-z", &[q(1, 1)], 6);
    assert_eq!(s.coeffs, vec![q(1, 1), q(1, 1), q(1, 2), q(1, 6), q(1, 24), q(1, 120)]);
}

#[test]
fn tangent_series() {
    let s = solve("t'-t^2-1", &[zero()], 6);
    assert_eq!(s.coeffs, vec![zero(), q(1, 1), zero(), q(1, 3), zero(), q(2, 15)]);
}

#[test]
fn painleve_series() {
    let s = solve("y''-6*y^2-x", &[zero(), zero()], 5);
    assert_eq!(s.coeffs, vec![zero(), zero(), zero(), q(1, 6), zero()]);
}

#[test]
fn non_lho_input_uses_an_extra_jet_value() {
    // (z')^2 = z + 1 at z(0) = 0, z'(0) = 1 gives z = x + x^2/4
    let s = solve("z'^2-z-1", &[zero(), q(1, 1)], 6);
    assert_eq!(s.coeffs, vec![zero(), q(1, 1), q(1, 4), zero(), zero(), zero()]);
}

#[test]
fn inconsistent_jet_is_rejected() {
    let e = p("z'^2-z-1");
    assert!(series_from_ade(&e, "z", &x(), &Valuation::new(), &zero(), &[zero(), q(2, 1)], 5).is_err());
}

#[test]
fn secant_is_reciprocal_of_cosine() {
    let cos = solve("c''+c", &[q(1, 1), zero()], 7);
    let sec = cos.recip().unwrap();
    assert_eq!(sec.coeffs[..5], [q(1, 1), zero(), q(1, 2), zero(), q(5, 24)]);
}

#[test]
fn tangent_of_triple_argument() {
    let tan = solve("t'-t^2-1", &[zero()], 8);
    let inner = TruncSeries::new(zero(), vec![zero(), q(3, 1), zero(), zero(), zero(), zero(), zero(), zero()]);
    let t3 = tan.compose(&inner).unwrap();
    assert_eq!(t3.coeffs[..6], [zero(), q(3, 1), zero(), q(9, 1), zero(), q(162, 5)]);
    assert_eq!(check_vanishing(&p("z'-3*z^2-3"), "z", &x(), &Valuation::new(), &t3).unwrap(), None);
}

#[test]
fn cosine_is_not_exponential() {
    let cos = solve("c''+c", &[q(1, 1), zero()], 8);
    assert!(check_vanishing(&p("z'-z"), "z", &x(), &Valuation::new(), &cos).unwrap().is_some());
}

#[test]
fn jets_from_spec_examples() {
    let mut v = Valuation::new();
    let j = generic_jet(&p("z'-z"), "z", &x(), &zero(), &mut v, &[], 0).unwrap();
    assert_eq!(j.len(), 1);
    let e = p("z'^2-z-1");
    let j = generic_jet(&e, "z", &x(), &zero(), &mut v, &[], 0).unwrap();
    let at = e.evaluate_partial(|w| if w.name() == "z" { Some(j[w.order() as usize].clone()) } else { None });
    assert!(at.is_zero());
    let names = Names::new("x", &["g2", "g3"]);
    let wp = parse_poly("y'^2 - 4*y^3 + g2*y + g3", &names).unwrap();
    let mut v = Valuation::new();
    v.insert(Var::param("g2"), q(4, 1));
    v.insert(Var::param("g3"), zero());
    let at = wp.evaluate_partial(|w| match w.name() {
        "g2" => Some(q(4, 1)),
        "g3" => Some(zero()),
        _ => Some([q(1, 1), zero()][w.order() as usize].clone()),
    });
    assert!(at.is_zero());
    // the separant 2y' vanishes there, so the series is not determined
    assert!(series_from_ade(&wp, "y", &x(), &v, &zero(), &[q(1, 1), zero()], 6).is_err());
    let mut free = Valuation::new();
    let j = generic_jet(&wp, "y", &x(), &zero(), &mut free, &[], 0).unwrap();
    assert_eq!(j.len(), 2);
    assert_eq!(free.len(), 2);
}

#[test]
fn square_root_jets_are_found() {
    let mut v = Valuation::new();
    let j = generic_jet(&p("s^4-s^2-s'^2"), "s", &x(), &zero(), &mut v, &[], 0).unwrap();
    assert_eq!(j.len(), 2);
    assert!(generic_jet(&p("c'^2+c^2-1"), "c", &x(), &zero(), &mut v, &[], 1).is_ok());
}

#[test]
fn roots_of_small_polynomials() {
    let y = Var::diff("y", 0);
    assert_eq!(rational_roots(&p("4*y^2-9"), &y), vec![q(-3, 2), q(3, 2)]);
    assert!(rational_roots(&p("y^2+1"), &y).is_empty());
    assert_eq!(rational_roots(&p("y^3-y"), &y), vec![q(-1, 1), zero(), q(1, 1)]);
}

#[test]
fn verify_sum_of_inputs() {
    let comb = Combination::Relation {
        inputs: vec![p("y'^3+y+1"), p("z'^2-z-1")],
        rel: parse_rational("y+z", &Names::new("x", &[])).unwrap(),
    };
    let ade = p("24*w''^3 - 36*w''^2 + 18*w'' - 8*w^(3) - 3");
    let r = verify(&comb, &ade, "w", &x(), &OracleConfig::default());
    assert_eq!(r.outcome, Outcome::Pass, "{r}");
    let wrong = p("24*w''^3 - 36*w''^2 + 18*w'' - 8*w^(3) - 4");
    assert_eq!(verify(&comb, &wrong, "w", &x(), &OracleConfig::default()).outcome, Outcome::Fail);
}

#[test]
fn verify_inverse_and_derivatives() {
    let ln = parse_poly("1 - y*g'", &Names::new("y", &[])).unwrap();
    let comb = Combination::Inverse { p: p("w'-w"), indep: Var::indep("y") };
    let r = verify(&comb, &ln, "g", &x(), &OracleConfig::default());
    assert!(r.passed(), "{r}");
    let d = Combination::Derivative { p: p("y''+y") };
    assert!(verify(&d, &p("w''+w"), "w", &x(), &OracleConfig::default()).passed());
    let a = Combination::Antiderivative { p: p("y'-y") };
    assert!(verify(&a, &p("w''-w'"), "w", &x(), &OracleConfig::default()).passed());
}

#[test]
fn imaginary_shift_is_skipped() {
    let names = Names::new("x", &["i"]);
    let comb = Combination::Relation {
        inputs: vec![p("y*y''-y'^2"), parse_poly("i^2+1", &names).unwrap()],
        rel: parse_rational("y+i", &names).unwrap(),
    };
    let ade = parse_poly("i*w'' + w*w'' - w'^2", &names).unwrap();
    assert_eq!(verify(&comb, &ade, "w", &x(), &OracleConfig::default()).outcome, Outcome::Skipped);
}

#[test]
fn exp_of_painleve_printed_term() {
    let comb = Combination::Compose { outer: p("y'-y"), inner: p("z''-6*z^2-x") };
    let body = "24*x*w'^2*w^4 + w^6 - 2*w^5*w^(3) + 6*w''*w'*w^4 + w^(3)^2*w^4 \
        - 24*w''*w'^2*w^3 - 6*w^(3)*w''*w'*w^3 + 24*w'^4*w^2 + 4*w^(3)*w'^3*w^2 \
        + 9*w''^2*w'^2*w^2 - 12*w''*w'^4*w + 4*w'^6";
    let printed = p(&format!("{body} - 4*w'^3"));
    let homogeneous = p(&format!("{body} - 4*w'^3*w^3"));
    let cfg = OracleConfig::default();
    assert_eq!(verify(&comb, &printed, "w", &x(), &cfg).outcome, Outcome::Fail);
    assert_eq!(verify(&comb, &homogeneous, "w", &x(), &cfg).outcome, Outcome::Pass);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn product_then_quotient(a in prop::collection::vec(-9i64..10, 8), b in prop::collection::vec(-9i64..10, 8), b0 in 1i64..5) {
        let f = TruncSeries::new(zero(), a.iter().map(|&c| q(c, 1)).collect());
        let mut bc: Vec<Rational> = b.iter().map(|&c| q(c, 3)).collect();
        bc[0] = q(b0, 1);
        let g = TruncSeries::new(zero(), bc);
        prop_assert_eq!(f.mul(&g).div(&g).unwrap(), f);
    }

    #[test]
    fn reversion_round_trip(a in prop::collection::vec(-9i64..10, 8), a1 in 1i64..6, a0 in -4i64..5) {
        let mut c: Vec<Rational> = a.iter().map(|&c| q(c, 2)).collect();
        c[0] = q(a0, 1);
        c[1] = q(a1, 1);
        let f = TruncSeries::new(q(1, 3), c);
        let g = f.reversion().unwrap();
        let id = g.compose(&f).unwrap();
        prop_assert_eq!(id, TruncSeries::identity(q(1, 3), 8));
        let id2 = f.compose(&g).unwrap();
        prop_assert_eq!(id2, TruncSeries::identity(f.value(), 8));
    }

    #[test]
    fn composition_is_associative(a in prop::collection::vec(-5i64..6, 6), b in prop::collection::vec(-5i64..6, 6), c in prop::collection::vec(-5i64..6, 6)) {
        let mk = |v: &Vec<i64>| {
            let mut cs: Vec<Rational> = v.iter().map(|&k| q(k, 1)).collect();
            cs[0] = zero();
            TruncSeries::new(zero(), cs)
        };
        let (f, g, h) = (mk(&a), mk(&b), mk(&c));
        prop_assert_eq!(f.compose(&g.compose(&h).unwrap()).unwrap(), f.compose(&g).unwrap().compose(&h).unwrap());
    }

    #[test]
    fn solved_series_satisfies_its_equation(y0 in -5i64..6, y1 in -5i64..6) {
        let e = p("y''-6*y^2-x");
        let s = series_from_ade(&e, "y", &x(), &Valuation::new(), &q(1, 2), &[q(y0, 2), q(y1, 3)], 12).unwrap();
        prop_assert_eq!(check_vanishing(&e, "y", &x(), &Valuation::new(), &s).unwrap(), None);
    }
}

#[test]
fn model_series_matches_ade_series() {
    let u = Var::aux("u");
    let m = dalg::method2::DynModel::new(
        x(),
        vec![u.clone()],
        vec![dalg::diff::RationalExpr::var(u.clone())],
        dalg::diff::RationalExpr::var(u),
    )
    .unwrap();
    let s = model_series(&m, &Valuation::new(), &zero(), &[q(1, 1)], 6).unwrap();
    assert_eq!(s, solve("z'-z", &[q(1, 1)], 6));
}
