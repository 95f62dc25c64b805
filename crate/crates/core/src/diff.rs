//! Differential polynomials and the total derivative.
//!
//! Most routines work on a bare [`Poly`] plus the independent variable;
//! [`DiffPoly`] adds the function/parameter context and checks that
//! operands agree on it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{int, Monomial, Poly, Rational, Var, VarKind};

/// Names a differential polynomial is allowed to mention.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Context {
    pub indep: String,
    pub functions: Vec<String>,
    pub params: Vec<String>,
}

impl Context {
    pub fn new(indep: &str, functions: &[&str], params: &[&str]) -> Context {
        Context {
            indep: indep.to_string(),
            functions: functions.iter().map(|s| s.to_string()).collect(),
            params: params.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn x(&self) -> Var {
        Var::indep(&self.indep)
    }

    /// Union of two contexts over the same independent variable.
    pub fn merge(&self, other: &Context) -> Result<Context> {
        if self.indep != other.indep {
            return Err(Error::ContextMismatch(format!(
                "independent variables `{}` and `{}` differ",
                self.indep, other.indep
            )));
        }
        let mut out = self.clone();
        for f in &other.functions {
            if !out.functions.contains(f) {
                out.functions.push(f.clone());
            }
        }
        for p in &other.params {
            if !out.params.contains(p) {
                out.params.push(p.clone());
            }
        }
        Ok(out)
    }

    pub fn with_function(&self, name: &str) -> Context {
        let mut out = self.clone();
        if !out.functions.iter().any(|f| f == name) {
            out.functions.push(name.to_string());
        }
        out
    }

    fn admits(&self, v: &Var) -> bool {
        match v.kind() {
            VarKind::Independent => v.name() == self.indep,
            VarKind::Differential => self.functions.iter().any(|f| f == v.name()),
            VarKind::Parameter => self.params.iter().any(|p| p == v.name()),
            VarKind::Auxiliary => true,
        }
    }
}

/// A differential polynomial together with its context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    body: Poly,
    ctx: Context,
}

impl DiffPoly {
    pub fn new(body: Poly, ctx: Context) -> Result<DiffPoly> {
        if let Some(v) = body.variables().into_iter().find(|v| !ctx.admits(v)) {
            return Err(Error::UnknownVariable(v.to_string()));
        }
        Ok(DiffPoly { body, ctx })
    }

    pub fn body(&self) -> &Poly {
        &self.body
    }

    pub fn into_body(self) -> Poly {
        self.body
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    fn combine(&self, other: &DiffPoly, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<DiffPoly> {
        let ctx = self.ctx.merge(&other.ctx)?;
        Ok(DiffPoly { body: f(&self.body, &other.body), ctx })
    }

    pub fn try_add(&self, other: &DiffPoly) -> Result<DiffPoly> {
        self.combine(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &DiffPoly) -> Result<DiffPoly> {
        self.combine(other, |a, b| a - b)
    }

    pub fn try_mul(&self, other: &DiffPoly) -> Result<DiffPoly> {
        self.combine(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Rational) -> DiffPoly {
        DiffPoly { body: self.body.scale(c), ctx: self.ctx.clone() }
    }

    pub fn total_derivative(&self) -> DiffPoly {
        DiffPoly { body: total_derivative(&self.body, &self.ctx.x()), ctx: self.ctx.clone() }
    }

    pub fn order(&self, func: &str) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::Domain("order of the zero polynomial".into()));
        }
        Ok(order_in(&self.body, func))
    }

    pub fn degree(&self) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::Domain("degree of the zero polynomial".into()));
        }
        Ok(diff_degree(&self.body))
    }

    pub fn primitive_part(&self) -> Result<DiffPoly> {
        Ok(DiffPoly { body: self.body.primitive_part()?, ctx: self.ctx.clone() })
    }

    /// The function this polynomial is an ADE for, when there is exactly one.
    pub fn function(&self) -> Option<&str> {
        match self.ctx.functions.as_slice() {
            [f] => Some(f),
            _ => None,
        }
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.body.fmt(f)
    }
}

/// δ with δ(x) = 1, δ(y^(j)) = y^(j+1), parameters and auxiliaries constant.
pub fn total_derivative(p: &Poly, x: &Var) -> Poly {
    let mut out = p.partial_derivative(x);
    for v in p.variables() {
        if v.is_differential() {
            let dv = Poly::var(v.shifted(1));
            out = &out + &(&dv * &p.partial_derivative(&v));
        }
    }
    out
}

pub fn nth_derivative(p: &Poly, x: &Var, k: usize) -> Poly {
    let mut q = p.clone();
    for _ in 0..k {
        q = total_derivative(&q, x);
    }
    q
}

/// Largest j with `func^(j)` present, or −1.
pub fn order_in(p: &Poly, func: &str) -> i64 {
    p.variables()
        .iter()
        .filter(|v| v.is_differential() && v.name() == func)
        .map(|v| v.order() as i64)
        .max()
        .unwrap_or(-1)
}

/// Largest derivative order of any differential variable, or −1.
pub fn max_order(p: &Poly) -> i64 {
    p.variables()
        .iter()
        .filter(|v| v.is_differential())
        .map(|v| v.order() as i64)
        .max()
        .unwrap_or(-1)
}

/// Total degree counting differential variables only.
pub fn diff_degree(p: &Poly) -> u32 {
    p.degree_where(|v: &Var| v.is_differential())
}

/// The differential function names occurring in `p`.
pub fn functions_in(p: &Poly) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for v in p.variables() {
        if v.is_differential() && !out.iter().any(|f| f == v.name()) {
            out.push(v.name().to_string());
        }
    }
    out
}

pub fn leader(p: &Poly, func: &str) -> Option<Var> {
    let n = order_in(p, func);
    (n >= 0).then(|| Var::diff(func, n as u32))
}

pub fn is_lho(p: &Poly, func: &str) -> bool {
    match leader(p, func) {
        Some(v) if v.order() > 0 => p.degree_in(&v) == 1,
        _ => false,
    }
}

/// `p` if it is l.h.o., else δ(p); the flag reports the differentiation.
/// Order-0 inputs are returned unchanged with the flag unset.
pub fn make_lho(p: &Poly, func: &str, x: &Var) -> (Poly, bool) {
    if order_in(p, func) <= 0 || is_lho(p, func) {
        (p.clone(), false)
    } else {
        (total_derivative(p, x), true)
    }
}

/// The separant ∂p/∂(leader).
pub fn separant(p: &Poly, func: &str) -> Poly {
    match leader(p, func) {
        Some(v) => p.partial_derivative(&v),
        None => Poly::zero(),
    }
}

/// A quotient of polynomials. Not reduced; callers saturate instead.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalExpr {
    pub num: Poly,
    pub den: Poly,
}

impl RationalExpr {
    pub fn new(num: Poly, den: Poly) -> Result<RationalExpr> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(RationalExpr { num, den })
    }

    pub fn poly(p: Poly) -> RationalExpr {
        RationalExpr { num: p, den: Poly::one() }
    }

    pub fn var(v: Var) -> RationalExpr {
        RationalExpr::poly(Poly::var(v))
    }

    pub fn constant(c: Rational) -> RationalExpr {
        RationalExpr::poly(Poly::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Shared-denominator shortcut keeps sums of same-denominator terms small.
    pub fn add(&self, other: &RationalExpr) -> RationalExpr {
        if self.den == other.den {
            return RationalExpr { num: &self.num + &other.num, den: self.den.clone() };
        }
        RationalExpr {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
        .simplified()
    }

    pub fn sub(&self, other: &RationalExpr) -> RationalExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalExpr {
        RationalExpr { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, other: &RationalExpr) -> RationalExpr {
        RationalExpr { num: &self.num * &other.num, den: &self.den * &other.den }.simplified()
    }

    pub fn div(&self, other: &RationalExpr) -> Result<RationalExpr> {
        if other.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        Ok(RationalExpr { num: &self.num * &other.den, den: &self.den * &other.num }.simplified())
    }

    pub fn recip(&self) -> Result<RationalExpr> {
        RationalExpr::poly(Poly::one()).div(self)
    }

    pub fn pow(&self, e: u32) -> RationalExpr {
        RationalExpr { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Cancels a constant factor and any exact polynomial factor the
    /// denominator shares with the numerator when the denominator is small.
    pub fn simplified(self) -> RationalExpr {
        if self.num.is_zero() {
            return RationalExpr::poly(Poly::zero());
        }
        let mut num = self.num;
        let mut den = self.den;
        if let Some(q) = num.div_exact(&den) {
            return RationalExpr::poly(q);
        }
        let g = monomial_gcd(&[&num, &den]);
        if !g.is_one() {
            num = divide_monomial(&num, &g);
            den = divide_monomial(&den, &g);
        }
        let c = den.content().unwrap_or_else(|_| Rational::one());
        RationalExpr { num: num.scale(&c.recip()), den: den.scale(&c.recip()) }
    }

    /// δ by the quotient rule.
    pub fn derivative(&self, x: &Var) -> RationalExpr {
        let dn = total_derivative(&self.num, x);
        if self.den.is_constant() {
            return RationalExpr { num: dn, den: self.den.clone() };
        }
        let dd = total_derivative(&self.den, x);
        RationalExpr {
            num: &(&dn * &self.den) - &(&self.num * &dd),
            den: &self.den * &self.den,
        }
        .simplified()
    }

    pub fn map_vars<F: Fn(&Var) -> Var>(&self, f: F) -> RationalExpr {
        RationalExpr { num: self.num.map_vars(&f), den: self.den.map_vars(&f) }
    }

    pub fn substitute(&self, bindings: &BTreeMap<Var, RationalExpr>) -> Result<RationalExpr> {
        substitute(&self.num, bindings)?.div(&substitute(&self.den, bindings)?)
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.constant_value().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add for &RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: &RationalExpr) -> RationalExpr {
        RationalExpr::add(self, rhs)
    }
}

impl Sub for &RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: &RationalExpr) -> RationalExpr {
        RationalExpr::sub(self, rhs)
    }
}

impl Mul for &RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: &RationalExpr) -> RationalExpr {
        RationalExpr::mul(self, rhs)
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr::neg(self)
    }
}

/// Largest monomial dividing every term of every input.
pub fn monomial_gcd(ps: &[&Poly]) -> Monomial {
    let mut g: Option<Monomial> = None;
    for p in ps {
        for (m, _) in p.terms() {
            g = Some(match g {
                None => m.clone(),
                Some(h) => h.gcd(m),
            });
            if g.as_ref().is_some_and(Monomial::is_one) {
                return Monomial::one();
            }
        }
    }
    g.unwrap_or_default()
}

pub fn divide_monomial(p: &Poly, m: &Monomial) -> Poly {
    Poly::from_terms(
        p.terms().map(|(t, c)| (m.quotient_of(t).expect("monomial divides every term"), c.clone())),
    )
}

/// `r_p = B/A` where `p = A·y^(n) − B`, after cancelling the common
/// monomial factor of `A` and `B` and making `A` primitive.
pub fn solve_highest(p: &Poly, func: &str) -> Result<RationalExpr> {
    if !is_lho(p, func) {
        return Err(Error::Precondition(format!("{p} is not linear in its highest derivative of {func}")));
    }
    let v = leader(p, func).expect("positive order");
    let a = p.coefficient_in(&v, 1);
    let b = -&p.coefficient_in(&v, 0);
    let g = monomial_gcd(&[&a, &b]);
    let (a, b) = (divide_monomial(&a, &g), divide_monomial(&b, &g));
    let c = a.content()?;
    Ok(RationalExpr { num: b.scale(&c.recip()), den: a.scale(&c.recip()) })
}

/// Simultaneous substitution of rational expressions. The denominator is
/// the product of binding denominators raised to their degree in `p`.
pub fn substitute(p: &Poly, bindings: &BTreeMap<Var, RationalExpr>) -> Result<RationalExpr> {
    for (v, r) in bindings {
        if r.den.is_zero() {
            return Err(Error::Domain(format!("zero denominator bound to {v}")));
        }
    }
    let degs: BTreeMap<&Var, u32> = bindings
        .keys()
        .map(|v| (v, p.degree_in(v)))
        .filter(|(_, d)| *d > 0)
        .collect();
    let mut den = Poly::one();
    for (v, d) in &degs {
        den = &den * &bindings[*v].den.pow(*d);
    }
    let mut pow_cache: BTreeMap<(Var, u32, bool), Poly> = BTreeMap::new();
    let mut get = |v: &Var, e: u32, numer: bool| -> Poly {
        pow_cache
            .entry((v.clone(), e, numer))
            .or_insert_with(|| {
                let r = &bindings[v];
                if numer { r.num.pow(e) } else { r.den.pow(e) }
            })
            .clone()
    };
    let mut num = Poly::zero();
    for (m, c) in p.terms() {
        let mut term = Poly::constant(c.clone());
        let mut kept = Vec::new();
        for (v, e) in m.iter() {
            if bindings.contains_key(v) {
                term = &term * &get(v, *e, true);
            } else {
                kept.push((v.clone(), *e));
            }
        }
        for (v, d) in &degs {
            let e = m.exponent(v);
            if e < *d {
                term = &term * &get(v, d - e, false);
            }
        }
        num = &num + &term.mul_monomial(&Monomial::from_pairs(kept), &Rational::one());
    }
    let g = monomial_gcd(&[&num, &den]);
    if !g.is_one() && !num.is_zero() {
        num = divide_monomial(&num, &g);
        den = divide_monomial(&den, &g);
    }
    Ok(RationalExpr { num, den })
}

/// Primitive numerator.
pub fn clear_denominators(r: &RationalExpr) -> Poly {
    r.num.normalized()
}

/// `S^d · r(v ↦ −R/S)` for `q = S·v + R`, where `d = deg_v r`.
fn pseudo_substitute(r: &Poly, v: &Var, s: &Poly, minus_r: &Poly) -> Poly {
    let coeffs = r.coefficients_in(v);
    let d = coeffs.len() - 1;
    let mut acc = coeffs[d].clone();
    let mut s_pow = Poly::one();
    for i in (0..d).rev() {
        s_pow = &s_pow * s;
        acc = &(&acc * minus_r) + &(&coeffs[i] * &s_pow);
    }
    acc
}

/// Reduces `r` by the l.h.o. polynomial `q` and its derivatives, removing
/// every derivative of `func` of order at least `ord(q)`.
pub fn diff_reduce(r: &Poly, q: &Poly, func: &str, x: &Var) -> Result<Poly> {
    if !is_lho(q, func) {
        return Err(Error::Precondition(format!("{q} is not l.h.o. in {func}")));
    }
    let n = order_in(q, func);
    let s = separant(q, func);
    let mut derivs = vec![q.clone()];
    let mut rem = r.normalized();
    let mut top = order_in(&rem, func);
    while top >= n && !rem.is_zero() {
        let k = (top - n) as usize;
        while derivs.len() <= k {
            let next = total_derivative(derivs.last().unwrap(), x);
            derivs.push(next);
        }
        let v = Var::diff(func, top as u32);
        let minus_rest = -&(&derivs[k] - &(&s * &Poly::var(v.clone())));
        rem = pseudo_substitute(&rem, &v, &s, &minus_rest).normalized();
        top = order_in(&rem, func).min(top - 1);
    }
    Ok(rem)
}

/// Determinant of a square matrix of polynomials by fraction-free
/// (Bareiss) elimination.
pub fn bareiss_det(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss step divides exactly");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign { -d } else { d }
}

/// Resultant of `a` and `b` with respect to `v` via the Sylvester matrix.
pub fn resultant(a: &Poly, b: &Poly, v: &Var) -> Poly {
    let ca = a.coefficients_in(v);
    let cb = b.coefficients_in(v);
    let (m, n) = (ca.len() - 1, cb.len() - 1);
    if m == 0 && n == 0 {
        return Poly::one();
    }
    let size = m + n;
    let mut mat = vec![vec![Poly::zero(); size]; size];
    for i in 0..n {
        for (j, c) in ca.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in cb.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Shifts every derivative of `func` by `k`.
pub fn shift_orders(p: &Poly, func: &str, k: i64) -> Poly {
    p.map_vars(|v| if v.is_differential() && v.name() == func { v.shifted(k) } else { v.clone() })
}

/// An ADE for f′ from an ADE `p` for f: `res_y(p, δp)` with indices
/// shifted down.
pub fn derivative_ade(p: &Poly, func: &str, x: &Var) -> Result<Poly> {
    let y = Var::diff(func, 0);
    if !p.contains_var(&y) {
        return Err(Error::Precondition(format!("{p} does not involve {func} itself")));
    }
    let dp = total_derivative(p, x);
    let r = resultant(p, &dp, &y);
    if r.is_zero() {
        return Err(Error::NotCoprime);
    }
    Ok(shift_orders(&r, func, -1).normalized())
}

/// An ADE for any antiderivative of f.
pub fn antiderivative_ade(p: &Poly, func: &str) -> Poly {
    shift_orders(p, func, 1).normalized()
}

/// Replaces every `func` name by `to`, keeping orders.
pub fn rename_function(p: &Poly, func: &str, to: &str) -> Poly {
    p.map_vars(|v| if v.is_differential() && v.name() == func { v.renamed(to) } else { v.clone() })
}

pub fn const_poly(n: i64) -> Poly {
    Poly::constant(int(n))
}

/// True when `a` and `b` agree up to a nonzero scalar (sign included).
pub fn proportional(a: &Poly, b: &Poly) -> bool {
    a.is_proportional(b)
}
