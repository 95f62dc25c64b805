//! Power-series verification of computed ADEs.
//!
//! Input ADEs are solved as truncated series from rational initial jets,
//! the combined function is built by exact series arithmetic, and the
//! output ADE is evaluated on it.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::diff::{diff_degree, functions_in, is_lho, order_in, separant, total_derivative, RationalExpr};
use crate::error::{Error, Result};
use crate::method2::DynModel;
use crate::poly::{fmt_rational, Poly, Rational, Var, VarKind};

/// `f(point + s) = Σ coeffs[k]·s^k + O(s^len)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSeries {
    pub point: Rational,
    pub coeffs: Vec<Rational>,
}

fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n).fold(BigInt::one(), |acc, k| acc * k))
}

impl TruncSeries {
    pub fn new(point: Rational, coeffs: Vec<Rational>) -> TruncSeries {
        TruncSeries { point, coeffs }
    }

    pub fn constant(point: Rational, c: Rational, len: usize) -> TruncSeries {
        let mut coeffs = vec![Rational::zero(); len];
        if len > 0 {
            coeffs[0] = c;
        }
        TruncSeries { point, coeffs }
    }

    /// The independent variable itself, `point + s`.
    pub fn identity(point: Rational, len: usize) -> TruncSeries {
        let mut s = TruncSeries::constant(point.clone(), point, len);
        if len > 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest power carried.
    pub fn truncation(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn value(&self) -> Rational {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn truncate(&self, len: usize) -> TruncSeries {
        TruncSeries { point: self.point.clone(), coeffs: self.coeffs[..len.min(self.len())].to_vec() }
    }

    pub fn add(&self, o: &TruncSeries) -> TruncSeries {
        let n = self.len().min(o.len());
        TruncSeries { point: self.point.clone(), coeffs: (0..n).map(|k| &self.coeffs[k] + &o.coeffs[k]).collect() }
    }

    pub fn sub(&self, o: &TruncSeries) -> TruncSeries {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> TruncSeries {
        TruncSeries { point: self.point.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Cauchy product.
    pub fn mul(&self, o: &TruncSeries) -> TruncSeries {
        let n = self.len().min(o.len());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().take(n - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        TruncSeries { point: self.point.clone(), coeffs: out }
    }

    pub fn pow(&self, e: u32) -> TruncSeries {
        let mut acc = TruncSeries::constant(self.point.clone(), Rational::one(), self.len());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn recip(&self) -> Result<TruncSeries> {
        let c0 = self.value();
        if c0.is_zero() {
            return Err(Error::Domain(format!("reciprocal of a series vanishing at {}", fmt_rational(&self.point))));
        }
        let inv0 = c0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(self.len());
        for k in 0..self.len() {
            if k == 0 {
                out.push(inv0.clone());
                continue;
            }
            let mut acc = Rational::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &out[k - i];
            }
            out.push(-acc * &inv0);
        }
        Ok(TruncSeries { point: self.point.clone(), coeffs: out })
    }

    pub fn div(&self, o: &TruncSeries) -> Result<TruncSeries> {
        Ok(self.mul(&o.recip()?))
    }

    /// Formal derivative; one coefficient shorter.
    pub fn derivative(&self) -> TruncSeries {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * Rational::from_integer(k.into())).collect();
        TruncSeries { point: self.point.clone(), coeffs }
    }

    pub fn nth_derivative(&self, j: usize) -> TruncSeries {
        (0..j).fold(self.clone(), |s, _| s.derivative())
    }

    /// Antiderivative with value `c` at the point; one coefficient longer.
    pub fn integral(&self, c: Rational) -> TruncSeries {
        let mut coeffs = vec![c];
        coeffs.extend(self.coeffs.iter().enumerate().map(|(k, a)| a / Rational::from_integer((k + 1).into())));
        TruncSeries { point: self.point.clone(), coeffs }
    }

    /// `self ∘ inner`; `self` must be expanded at `inner`'s value.
    pub fn compose(&self, inner: &TruncSeries) -> Result<TruncSeries> {
        if inner.value() != self.point {
            return Err(Error::Domain(format!(
                "outer series expanded at {} but inner value is {}",
                fmt_rational(&self.point),
                fmt_rational(&inner.value())
            )));
        }
        let n = self.len().min(inner.len());
        let mut d = inner.truncate(n);
        d.coeffs[0] = Rational::zero();
        let mut acc = TruncSeries::constant(inner.point.clone(), Rational::zero(), n);
        for c in self.coeffs[..n].iter().rev() {
            acc = acc.mul(&d);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Series of the inverse function, expanded at `self`'s value.
    pub fn reversion(&self) -> Result<TruncSeries> {
        let n = self.len();
        if n < 2 || self.coeffs[1].is_zero() {
            return Err(Error::Domain(format!("derivative vanishes at {}; no local inverse", fmt_rational(&self.point))));
        }
        let f1 = self.coeffs[1].clone();
        let mut fz = self.clone();
        fz.point = Rational::zero();
        fz.coeffs[0] = Rational::zero();
        let mut h = vec![Rational::zero(); n];
        h[1] = f1.recip();
        for k in 2..n {
            let hs = TruncSeries { point: Rational::zero(), coeffs: h[..=k].to_vec() };
            let comp = fz.truncate(k + 1).compose(&hs)?;
            h[k] = -&comp.coeffs[k] / &f1;
        }
        h[0] = self.point.clone();
        Ok(TruncSeries { point: self.value(), coeffs: h })
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(fmt_rational).collect();
        write!(f, "[{}] at {}", cs.join(", "), fmt_rational(&self.point))
    }
}

/// Evaluates `p` with each variable bound to a series of at least `len` terms.
pub fn eval_poly<F>(p: &Poly, point: &Rational, len: usize, bind: F) -> Result<TruncSeries>
where
    F: Fn(&Var) -> Result<TruncSeries>,
{
    let mut cache: BTreeMap<Var, Vec<TruncSeries>> = BTreeMap::new();
    let mut acc = TruncSeries::constant(point.clone(), Rational::zero(), len);
    for (m, c) in p.terms() {
        let mut term = TruncSeries::constant(point.clone(), c.clone(), len);
        for (v, e) in m.iter() {
            if !cache.contains_key(v) {
                let s = bind(v)?.truncate(len);
                if s.len() < len {
                    return Err(Error::Internal(format!("series for {v} too short")));
                }
                cache.insert(v.clone(), vec![s]);
            }
            let pows = cache.get_mut(v).expect("inserted");
            while pows.len() < *e as usize {
                let next = pows.last().expect("nonempty").mul(&pows[0]);
                pows.push(next);
            }
            term = term.mul(&pows[*e as usize - 1]);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Parameter values shared by every series of one check.
pub type Valuation = BTreeMap<Var, Rational>;

fn apply_params(p: &Poly, vals: &Valuation) -> Poly {
    p.evaluate_partial(|v| vals.get(v).cloned())
}

fn eval_point(p: &Poly, x: &Var, point: &Rational, func: &str, jet: &[Rational]) -> Option<Rational> {
    let q = p.evaluate_partial(|v| {
        if v == x {
            Some(point.clone())
        } else if v.is_differential() && v.name() == func {
            jet.get(v.order() as usize).cloned()
        } else {
            None
        }
    });
    q.constant_value()
}

/// Solves `p` as a series around `point`. `jet` holds `f(point), …,
/// f^(n−1)(point)` for l.h.o. `p` of order `n`, and one more value
/// otherwise (then `p` itself must vanish on the jet).
pub fn series_from_ade(
    p: &Poly,
    func: &str,
    x: &Var,
    vals: &Valuation,
    point: &Rational,
    jet: &[Rational],
    len: usize,
) -> Result<TruncSeries> {
    let p = apply_params(p, vals);
    if let Some(v) = p.variables().iter().find(|v| v.kind() == VarKind::Parameter) {
        return Err(Error::Precondition(format!("parameter {v} has no value")));
    }
    let p1 = if is_lho(&p, func) {
        p.clone()
    } else {
        let r = eval_point(&p, x, point, func, jet).ok_or_else(|| Error::Precondition("jet too short".into()))?;
        if !r.is_zero() {
            return Err(Error::Precondition(format!("jet is inconsistent: the equation evaluates to {}", fmt_rational(&r))));
        }
        total_derivative(&p, x)
    };
    let n = order_in(&p1, func) as usize;
    if jet.len() != n {
        return Err(Error::Precondition(format!("expected {n} initial values, got {}", jet.len())));
    }
    let a = p1.coefficient_in(&Var::diff(func, n as u32), 1);
    let a0 = eval_point(&a, x, point, func, jet).expect("full jet");
    if a0.is_zero() {
        return Err(Error::Domain(format!("singular initial point {}, choose another", fmt_rational(point))));
    }
    let mut coeffs: Vec<Rational> = jet.iter().enumerate().map(|(j, v)| v / factorial(j)).collect();
    coeffs.resize(len.max(n), Rational::zero());
    for k in n..len {
        let want = k - n + 1;
        let cur = TruncSeries::new(point.clone(), coeffs[..=k].to_vec());
        let e = eval_poly(&p1, point, want, |v| {
            if v == x {
                Ok(TruncSeries::identity(point.clone(), want))
            } else if v.is_differential() && v.name() == func {
                Ok(cur.nth_derivative(v.order() as usize))
            } else {
                Err(Error::UnknownVariable(v.to_string()))
            }
        })?;
        let scale = factorial(k) / factorial(k - n);
        coeffs[k] = -&e.coeffs[k - n] / (&a0 * scale);
    }
    coeffs.truncate(len);
    Ok(TruncSeries::new(point.clone(), coeffs))
}

/// Series of the output of `model` from initial state values.
pub fn model_series(
    model: &DynModel,
    vals: &Valuation,
    point: &Rational,
    init: &[Rational],
    len: usize,
) -> Result<TruncSeries> {
    if init.len() != model.dimension() {
        return Err(Error::Precondition(format!("expected {} initial values", model.dimension())));
    }
    let mut states: Vec<Vec<Rational>> = init.iter().map(|c| vec![c.clone()]).collect();
    let x = &model.indep;
    let bind_for = |states: &Vec<Vec<Rational>>, k: usize| {
        let sers: BTreeMap<Var, TruncSeries> = model
            .states
            .iter()
            .zip(states)
            .map(|(u, c)| (u.clone(), TruncSeries::new(point.clone(), c[..k].to_vec())))
            .collect();
        move |v: &Var| -> Result<TruncSeries> {
            if v == x {
                Ok(TruncSeries::identity(point.clone(), k))
            } else if let Some(s) = sers.get(v) {
                Ok(s.clone())
            } else {
                Err(Error::UnknownVariable(v.to_string()))
            }
        }
    };
    let eval = |e: &RationalExpr, states: &Vec<Vec<Rational>>, k: usize| -> Result<TruncSeries> {
        let num = eval_poly(&apply_params(&e.num, vals), point, k, bind_for(states, k))?;
        let den = eval_poly(&apply_params(&e.den, vals), point, k, bind_for(states, k))?;
        num.div(&den)
    };
    for k in 1..len {
        let mut next = Vec::with_capacity(states.len());
        for r in &model.rhs {
            let s = eval(r, &states, k)?;
            next.push(&s.coeffs[k - 1] / Rational::from_integer(k.into()));
        }
        for (st, c) in states.iter_mut().zip(next) {
            st.push(c);
        }
    }
    eval(&model.output, &states, len)
}

/// Rational roots of a univariate polynomial in `v`.
pub fn rational_roots(p: &Poly, v: &Var) -> Vec<Rational> {
    let coeffs = p.coefficients_in(v);
    let Some(cs) = coeffs.iter().map(Poly::constant_value).collect::<Option<Vec<_>>>() else {
        return Vec::new();
    };
    if cs.iter().all(Zero::is_zero) {
        return Vec::new();
    }
    let den = cs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = cs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    while ints.first().is_some_and(Zero::is_zero) {
        ints.remove(0);
        if !roots.contains(&Rational::zero()) {
            roots.push(Rational::zero());
        }
    }
    if ints.len() < 2 {
        return roots;
    }
    let divisors = |n: &BigInt| -> Option<Vec<BigInt>> {
        let n = n.abs().to_u64().filter(|n| *n <= 10_000_000)?;
        let mut out = Vec::new();
        let mut d = 1u64;
        while d * d <= n {
            if n % d == 0 {
                out.push(BigInt::from(d));
                out.push(BigInt::from(n / d));
            }
            d += 1;
        }
        Some(out)
    };
    let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().expect("nonempty"))) else {
        return roots;
    };
    for pn in &ps {
        for qd in &qs {
            for sign in [1, -1] {
                let r = Rational::new(pn * sign, qd.clone());
                let val = ints.iter().rev().fold(Rational::zero(), |acc, c| acc * &r + Rational::from_integer(c.clone()));
                if val.is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Small nonzero rationals in a fixed order of increasing height.
fn candidates() -> Vec<Rational> {
    let mut out = Vec::new();
    for h in 2i64..=16 {
        for q in 1..h {
            let p = h - q;
            if p.gcd(&q) == 1 {
                out.push(Rational::new(p.into(), q.into()));
                out.push(Rational::new((-p).into(), q.into()));
            }
        }
    }
    out
}

fn pick(c: &[Rational], attempt: usize, slot: usize) -> Rational {
    c[(attempt * (2 * slot + 3) + slot * 7 + attempt / c.len()) % c.len()].clone()
}

/// The `skip`-th admissible jet for `p` at `point`, in a fixed enumeration
/// order. Parameters without a value in `vals` are assigned (and possibly
/// solved for) and recorded there. Every polynomial of `avoid` must be
/// nonzero at the jet.
pub fn generic_jet(
    p: &Poly,
    func: &str,
    x: &Var,
    point: &Rational,
    vals: &mut Valuation,
    avoid: &[Poly],
    skip: usize,
) -> Result<Vec<Rational>> {
    let cands = candidates();
    let n = order_in(p, func);
    let free_params: Vec<Var> =
        p.variables().into_iter().filter(|v| v.kind() == VarKind::Parameter && !vals.contains_key(v)).collect();
    let lho = is_lho(p, func);
    let slots = if n < 0 { 0 } else if lho { n as usize } else { n as usize + 1 };
    let jet_vars: Vec<Var> = (0..slots as u32).map(|j| Var::diff(func, j)).collect();
    let mut found = 0;
    for attempt in 0..6000 {
        let mut assign: BTreeMap<Var, Rational> = BTreeMap::new();
        assign.insert(x.clone(), point.clone());
        for (i, v) in jet_vars.iter().chain(&free_params).enumerate() {
            assign.insert(v.clone(), pick(&cands, attempt, i));
        }
        let fixed = |a: &BTreeMap<Var, Rational>, q: &Poly| {
            q.evaluate_partial(|v| a.get(v).cloned().or_else(|| vals.get(v).cloned()))
        };
        let mut options = Vec::new();
        if lho {
            options.push(assign.clone());
        } else {
            let solve_order: Vec<&Var> = free_params.iter().rev().chain(jet_vars.iter().rev()).collect();
            for v in solve_order {
                let mut a = assign.clone();
                a.remove(v);
                let uni = fixed(&a, p);
                if uni.degree_in(v) == 0 {
                    continue;
                }
                for r in rational_roots(&uni, v) {
                    let mut b = a.clone();
                    b.insert(v.clone(), r);
                    options.push(b);
                }
                if !options.is_empty() {
                    break;
                }
            }
        }
        for a in options {
            if !lho && !fixed(&a, p).is_zero() {
                continue;
            }
            let lead = if lho {
                p.coefficient_in(&Var::diff(func, n as u32), 1)
            } else {
                separant(p, func)
            };
            let nonzero = |q: &Poly| fixed(&a, q).constant_value().is_some_and(|c| !c.is_zero());
            if n >= 0 && !nonzero(&lead) {
                continue;
            }
            if !avoid.iter().all(nonzero) {
                continue;
            }
            if found < skip {
                found += 1;
                continue;
            }
            for v in &free_params {
                vals.insert(v.clone(), a[v].clone());
            }
            return Ok(jet_vars.iter().map(|v| a[v].clone()).collect());
        }
    }
    Err(Error::NoJet(format!("no rational consistent jet found for {p}; supply one explicitly")))
}

/// How the function whose ADE is checked arises from its inputs.
#[derive(Clone, Debug)]
pub enum Combination {
    /// `rel(f₁, …, f_N)` for solutions of `inputs`.
    Relation { inputs: Vec<Poly>, rel: RationalExpr },
    /// `f(g(x))` with `p(f) = 0`, `q(g) = 0`.
    Compose { outer: Poly, inner: Poly },
    /// The inverse of a solution of `p`; the output ADE uses `indep`.
    Inverse { p: Poly, indep: Var },
    Derivative { p: Poly },
    Antiderivative { p: Poly },
    Model(DynModel),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub outcome: Outcome,
    /// Highest power of `s` checked.
    pub truncation: i64,
    /// First nonzero coefficient index in the first failing run.
    pub first_nonzero: Option<usize>,
    pub jets: Vec<String>,
    pub message: Option<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain data serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.outcome {
            Outcome::Pass => write!(f, "oracle: pass (to s^{}, {} jets)", self.truncation, self.jets.len())?,
            Outcome::Fail => write!(
                f,
                "oracle: FAIL, coefficient of s^{} is nonzero",
                self.first_nonzero.unwrap_or_default()
            )?,
            Outcome::Skipped => write!(f, "oracle: skipped")?,
        }
        if let Some(m) = &self.message {
            write!(f, " ({m})")?;
        }
        for j in &self.jets {
            write!(f, "\n  jet {j}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub jets: usize,
    pub margin: usize,
    /// Explicit initial values for the first input, used for the first run.
    pub explicit: Option<Vec<Rational>>,
}

impl Default for OracleConfig {
    fn default() -> OracleConfig {
        OracleConfig { jets: 2, margin: 10, explicit: None }
    }
}

/// Checks that `ade` vanishes on `h` up to `s^(len − 1 − order)`. Returns
/// the index of the first nonzero coefficient.
pub fn check_vanishing(ade: &Poly, target: &str, indep: &Var, vals: &Valuation, h: &TruncSeries) -> Result<Option<usize>> {
    let p = apply_params(ade, vals);
    let n = order_in(&p, target).max(0) as usize;
    if h.len() <= n {
        return Err(Error::Precondition("series shorter than the order".into()));
    }
    let len = h.len() - n;
    let r = eval_poly(&p, &h.point, len, |v| {
        if v == indep {
            Ok(TruncSeries::identity(h.point.clone(), len))
        } else if v.is_differential() && v.name() == target {
            Ok(h.nth_derivative(v.order() as usize))
        } else {
            Err(Error::UnknownVariable(format!("{v} has no value")))
        }
    })?;
    Ok(r.coeffs.iter().position(|c| !c.is_zero()))
}

fn points() -> Vec<Rational> {
    [(1, 3), (2, 5), (-1, 2), (3, 4), (5, 7), (-2, 3)].iter().map(|&(p, q)| Rational::new(p.into(), q.into())).collect()
}

fn fmt_jet(label: &str, point: &Rational, jet: &[Rational]) -> String {
    let vs: Vec<String> = jet.iter().map(fmt_rational).collect();
    format!("{label}@{}: [{}]", fmt_rational(point), vs.join(", "))
}

fn single_function(p: &Poly) -> Result<Option<String>> {
    let fs = functions_in(p);
    match fs.len() {
        0 => Ok(None),
        1 => Ok(fs.into_iter().next()),
        _ => Err(Error::ContextMismatch(format!("{p} involves several functions"))),
    }
}

/// Series of the combined function plus a description of the jets used.
fn build(
    comb: &Combination,
    x: &Var,
    len: usize,
    trial: usize,
    explicit: Option<&[Rational]>,
    vals: &mut Valuation,
) -> Result<(TruncSeries, Vec<String>)> {
    let pts = points();
    let a = pts[trial % pts.len()].clone();
    let mut jets = Vec::new();
    let mut solve = |p: &Poly, point: &Rational, n: usize, first: bool, vals: &mut Valuation, avoid: &[Poly]| -> Result<Option<TruncSeries>> {
        let Some(f) = single_function(p)? else {
            let pv = apply_params(p, vals);
            for v in pv.variables() {
                if v.kind() == VarKind::Parameter {
                    let roots = rational_roots(&pv, &v);
                    let r = roots.first().ok_or_else(|| {
                        Error::NoJet(format!("{p} needs a value of {v} outside the rationals"))
                    })?;
                    vals.insert(v.clone(), r.clone());
                    return Ok(None);
                }
            }
            return Ok(None);
        };
        let jet = match explicit.filter(|_| first) {
            Some(j) => {
                for v in p.variables() {
                    if v.kind() == VarKind::Parameter && !vals.contains_key(&v) {
                        let c = candidates();
                        vals.insert(v.clone(), c[vals.len() % c.len()].clone());
                    }
                }
                j.to_vec()
            }
            None => generic_jet(p, &f, x, point, vals, avoid, trial)?,
        };
        jets.push(fmt_jet(&f, point, &jet));
        series_from_ade(p, &f, x, vals, point, &jet, n).map(Some)
    };
    let h = match comb {
        Combination::Relation { inputs, rel } => {
            let extra = rel.num.variables().iter().chain(rel.den.variables().iter()).map(|v| v.order() as usize).max().unwrap_or(0);
            let mut sers: BTreeMap<String, TruncSeries> = BTreeMap::new();
            for (i, p) in inputs.iter().enumerate() {
                if let Some(s) = solve(p, &a, len + extra, i == 0, vals, &[])? {
                    sers.insert(single_function(p)?.expect("has a function"), s);
                }
            }
            let bind = |v: &Var| -> Result<TruncSeries> {
                if v == x {
                    Ok(TruncSeries::identity(a.clone(), len))
                } else if let Some(c) = vals.get(v) {
                    Ok(TruncSeries::constant(a.clone(), c.clone(), len))
                } else if let Some(s) = sers.get(v.name()).filter(|_| v.is_differential()) {
                    Ok(s.nth_derivative(v.order() as usize))
                } else {
                    Err(Error::UnknownVariable(format!("{v} has no value")))
                }
            };
            eval_poly(&rel.num, &a, len, bind)?.div(&eval_poly(&rel.den, &a, len, bind)?)?
        }
        Combination::Compose { outer, inner } => {
            let gs = solve(inner, &a, len, true, vals, &[])?.expect("has a function");
            if gs.len() > 1 && gs.coeffs[1].is_zero() {
                return Err(Error::Domain("inner derivative vanishes".into()));
            }
            let b = gs.value();
            let fs = solve(outer, &b, len, false, vals, &[])?.ok_or_else(|| Error::Domain("outer input has no function".into()))?;
            fs.compose(&gs)?
        }
        Combination::Inverse { p, .. } => {
            let fs = solve(p, &a, len, true, vals, &[])?.expect("has a function");
            fs.reversion()?
        }
        Combination::Derivative { p } => solve(p, &a, len + 1, true, vals, &[])?.expect("has a function").derivative(),
        Combination::Antiderivative { p } => {
            let c = pick(&candidates(), trial, 9);
            let s = solve(p, &a, len, true, vals, &[])?.expect("has a function");
            jets.push(format!("constant of integration {}", fmt_rational(&c)));
            s.integral(c).truncate(len)
        }
        Combination::Model(m) => {
            let cands = candidates();
            for v in &m.params {
                let k = vals.len();
                vals.entry(v.clone()).or_insert_with(|| pick(&cands, trial + 1, k + 11));
            }
            let init: Vec<Rational> = match explicit {
                Some(j) => j.to_vec(),
                None => (0..m.dimension()).map(|i| pick(&cands, trial, i)).collect(),
            };
            jets.push(fmt_jet("states", &a, &init));
            model_series(m, vals, &a, &init, len)?
        }
    };
    Ok((h, jets))
}

/// Runs the series oracle on `ade` for the combination `comb`.
pub fn verify(comb: &Combination, ade: &Poly, target: &str, x: &Var, cfg: &OracleConfig) -> Report {
    let order = order_in(ade, target).max(0) as usize;
    let len = order + diff_degree(ade) as usize + cfg.margin + 1;
    let indep = match comb {
        Combination::Inverse { indep, .. } => indep.clone(),
        _ => x.clone(),
    };
    let mut jets = Vec::new();
    let mut passes = 0;
    let mut last_err = None;
    let mut trial = 0;
    while passes < cfg.jets && trial < cfg.jets + 12 {
        let mut vals = Valuation::new();
        let explicit = if trial == 0 { cfg.explicit.as_deref() } else { None };
        let run = build(comb, x, len, trial, explicit, &mut vals)
            .and_then(|(h, js)| check_vanishing(ade, target, &indep, &vals, &h).map(|r| (r, js)));
        trial += 1;
        match run {
            Ok((None, js)) => {
                passes += 1;
                jets.extend(js);
            }
            Ok((Some(k), js)) => {
                return Report {
                    outcome: Outcome::Fail,
                    truncation: (len - order) as i64 - 1,
                    first_nonzero: Some(k),
                    jets: js,
                    message: None,
                };
            }
            Err(e @ Error::NoJet(_)) => {
                last_err = Some(e.to_string());
                break;
            }
            Err(e) => last_err = Some(e.to_string()),
        }
    }
    let outcome = if passes >= cfg.jets { Outcome::Pass } else { Outcome::Skipped };
    Report {
        outcome,
        truncation: (len - order) as i64 - 1,
        first_nonzero: None,
        jets,
        message: if outcome == Outcome::Pass { None } else { last_err },
    }
}
