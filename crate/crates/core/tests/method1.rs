use std::time::Instant;

use dalg::groebner::Budget;
use dalg::method1::{arith, arith_op, build_relation, compose, composition_chain, composition_ideal, truncated_ideal_arith, Levels, Op};
use dalg::oracle::{verify, Combination, OracleConfig};
use dalg::syntax::{parse_poly, parse_rational, Names};
use dalg::{Poly, Var};

fn p(src: &str) -> Poly {
    parse_poly(src, &Names::new("x", &[])).unwrap()
}

fn x() -> Var {
    Var::indep("x")
}

fn assert_prop(got: &Poly, want: &Poly) {
    assert!(got.is_proportional(want), "got {got}\nwant {want}");
}

#[test]
fn relations() {
    assert_eq!(build_relation(Op::Div, "y", "z", "w"), p("w*z - y"));
    assert_eq!(build_relation(Op::Add, "y", "z", "w"), p("w - y - z"));
    assert_eq!(build_relation(Op::Sub, "y", "z", "w"), p("w - y + z"));
    assert_eq!(build_relation(Op::Mul, "y", "z", "w"), p("w - y*z"));
}

#[test]
fn generator_counts() {
    let g0 = truncated_ideal_arith(&p("y'-y"), &p("z'-z"), Op::Add, "w", &x(), 0).unwrap();
    assert_eq!(g0, vec![p("y'-y"), p("z'-z"), p("w-y-z")]);
    for j in 0..4 {
        let g = truncated_ideal_arith(&p("y'-y"), &p("z'-z"), Op::Add, "w", &x(), j).unwrap();
        assert_eq!(g.len(), 3 * (j + 1));
    }
}

#[test]
fn chain_rule_rows() {
    let s = composition_chain(3, "y", "z");
    assert_eq!(s[1], p("z'*y'"));
    assert_eq!(s[2], p("z''*y' + z'^2*y''"));
    assert_eq!(s[3], p("z^(3)*y' + 3*z''*z'*y'' + z'^3*y^(3)"));
}

#[test]
fn product_of_exponentials() {
    let b = &mut Budget::default();
    let r = arith_op(&p("y'-y"), &p("z'-z"), Op::Mul, "w", &x(), &Levels::default(), b).unwrap();
    let comb = Combination::Relation {
        inputs: vec![p("y'-y"), p("z'-z")],
        rel: parse_rational("y*z", &Names::new("x", &[])).unwrap(),
    };
    assert!(verify(&comb, &r.ade, "w", &x(), &OracleConfig::default()).passed(), "{}", r.ade);
    assert_prop(&r.ade, &p("w' - 2*w"));
}

#[test]
fn adding_zero() {
    let r = arith_op(&p("y'-y"), &p("z"), Op::Add, "w", &x(), &Levels::default(), &mut Budget::default()).unwrap();
    assert_prop(&r.ade, &p("w'-w"));
}

#[test]
fn reciprocal_of_cosine() {
    let rel = parse_rational("1/c", &Names::new("x", &[])).unwrap();
    let r = arith(&[p("c''+c")], "g", &rel, &x(), &Levels::default(), &mut Budget::default()).unwrap();
    assert_prop(&r.ade, &p("g*g'' - 2*g'^2 - g^2"));
}

#[test]
fn sum_stays_trivial_at_low_levels() {
    let b = &mut Budget::default();
    let lv = Levels { max_j: 1, continue_past_first: false };
    let r = arith_op(&p("y''*y-y'^2"), &p("z^2+z'^4"), Op::Add, "w", &x(), &lv, b);
    assert!(matches!(r, Err(dalg::Error::MaxLevel { last_j: 1 })), "{r:?}");
}

#[test]
fn composition_h1() {
    let g = composition_ideal(&p("y'-y"), &p("z^2+2*z'"), "w", &x(), 1).unwrap();
    assert_eq!(g.len(), 2 + 2 + 3);
    let r = compose(&p("y'-y"), &p("z^2+2*z'"), "w", &x(), &Levels::default(), &mut Budget::default()).unwrap();
    assert_prop(&r.ade, &p("w'^4 - 2*w*w'^2*w'' + w^2*w''^2 + 2*w*w'^3"));
    assert_eq!(r.level, Some(1));
}

#[test]
fn composition_non_autonomous() {
    let t = Instant::now();
    let r = compose(&p("y''+y"), &p("z'-x*z"), "w", &x(), &Levels::default(), &mut Budget::default()).unwrap();
    eprintln!("example 4.7 {:?} level {:?}", t.elapsed(), r.level);
    assert_prop(&r.ade, &p("(2*x^4+3*x^2+3)*w*w' + (x^3+x)*w'^2 - 3*(x^3+x)*w*w'' - x^2*w'*w'' + x^2*w*w^(3)"));
}

#[test]
fn composition_with_identity() {
    let r = compose(&p("y''+y"), &p("z'-1"), "w", &x(), &Levels::default(), &mut Budget::default()).unwrap();
    assert_prop(&r.ade, &p("w''+w"));
}

#[test]
fn table_one_method_one() {
    let b = &mut Budget::default();
    let lv = Levels::default();
    let t = Instant::now();
    let s = arith_op(&p("y'-x*y^2"), &p("-z'^2+z+x+1"), Op::Add, "w", &x(), &lv, b).unwrap();
    eprintln!("11+21 order {} degree {} {:?}", s.order, s.degree, t.elapsed());
    assert_eq!(s.order, 2);
    let t = Instant::now();
    let c = compose(&p("y'-x*y^2"), &p("-z'^2+z+x+1"), "w", &x(), &lv, b).unwrap();
    eprintln!("11o21 order {} degree {} {:?}", c.order, c.degree, t.elapsed());
    assert_eq!(c.order, 2);
    let t = Instant::now();
    let c = compose(&p("x*y'-x^2+y-1"), &p("z*z'+3*z'+2*x^2+2"), "w", &x(), &lv, b).unwrap();
    eprintln!("12o22 order {} degree {} {:?}", c.order, c.degree, t.elapsed());
    assert_eq!(c.order, 2);
    let t = Instant::now();
    let c = compose(&p("y'*y+y''"), &p("z'+x*z''"), "w", &x(), &lv, b).unwrap();
    eprintln!("13o23 order {} degree {} {:?}", c.order, c.degree, t.elapsed());
    assert_eq!(c.order, 3);
}
