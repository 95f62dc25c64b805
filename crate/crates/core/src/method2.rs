//! Dynamical models and their reduction to a minimal output ADE.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use crate::diff::{make_lho, order_in, solve_highest, RationalExpr};
use crate::error::{Error, Result};
use crate::groebner::{eliminate, eliminate_linear, select_minimal, Budget};
use crate::poly::{Poly, Rational, Var, VarKind};
use crate::result::{AdeResult, Method};

/// `u' = rhs(u)`, `w = output(u)` over the independent variable `indep`.
/// Constraints are polynomial relations among states that every solution
/// of interest satisfies.
#[derive(Clone, Debug)]
pub struct DynModel {
    pub indep: Var,
    pub params: Vec<Var>,
    pub states: Vec<Var>,
    pub rhs: Vec<RationalExpr>,
    pub output: RationalExpr,
    pub constraints: Vec<Poly>,
}

impl DynModel {
    pub fn new(indep: Var, states: Vec<Var>, rhs: Vec<RationalExpr>, output: RationalExpr) -> Result<DynModel> {
        let mut m = DynModel { indep, params: Vec::new(), states, rhs, output, constraints: Vec::new() };
        m.check()?;
        Ok(m)
    }

    pub fn with_constraints(mut self, cs: Vec<Poly>) -> Result<DynModel> {
        self.constraints.extend(cs);
        self.check()?;
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.states.len()
    }

    fn check(&mut self) -> Result<()> {
        if self.states.len() != self.rhs.len() {
            return Err(Error::Precondition(format!(
                "{} states but {} right-hand sides",
                self.states.len(),
                self.rhs.len()
            )));
        }
        let uniq: BTreeSet<&Var> = self.states.iter().collect();
        if uniq.len() != self.states.len() {
            return Err(Error::Precondition("repeated state".into()));
        }
        let mut params = BTreeSet::new();
        let exprs = self.rhs.iter().chain(std::iter::once(&self.output));
        let polys = exprs.flat_map(|e| [&e.num, &e.den]).chain(self.constraints.iter());
        for p in polys {
            for v in p.variables() {
                if v == self.indep || self.states.contains(&v) {
                    continue;
                }
                if v.kind() == VarKind::Parameter {
                    params.insert(v);
                } else {
                    return Err(Error::UnknownVariable(format!("{v} is neither a state, a parameter nor {}", self.indep)));
                }
            }
        }
        for e in &self.rhs {
            if e.den.is_zero() {
                return Err(Error::Domain("zero denominator in a right-hand side".into()));
            }
        }
        self.params = params.into_iter().collect();
        Ok(())
    }

    /// The Lie derivative `∂ₓe + Σ rhsᵢ ∂ᵤᵢe` of a rational expression.
    pub fn lie(&self, e: &RationalExpr) -> RationalExpr {
        let dp = |p: &Poly| -> RationalExpr {
            let mut acc = RationalExpr::poly(p.partial_derivative(&self.indep));
            for (u, r) in self.states.iter().zip(&self.rhs) {
                let d = p.partial_derivative(u);
                if !d.is_zero() {
                    acc = acc.add(&r.mul(&RationalExpr::poly(d))).simplified();
                }
            }
            acc
        };
        if e.den.is_constant() {
            let c = e.den.constant_value().expect("constant");
            let d = dp(&e.num);
            return RationalExpr { num: d.num.scale(&c.recip()), den: d.den }.simplified();
        }
        let dn = dp(&e.num);
        let dd = dp(&e.den);
        let top = dn.mul(&RationalExpr::poly(e.den.clone())).sub(&dd.mul(&RationalExpr::poly(e.num.clone())));
        RationalExpr { num: top.num, den: &top.den * &e.den.pow(2) }.simplified()
    }
}

/// `num / Π factorsⱼ^expsⱼ`.
#[derive(Clone)]
struct Frac {
    num: Poly,
    exps: Vec<u32>,
}

/// Iterated Lie derivatives with denominators kept as products of known
/// factors, so each derivative costs one multiplication per factor.
struct Deriver<'a> {
    model: &'a DynModel,
    factors: Vec<Poly>,
    rhs_exps: Vec<u32>,
    /// Numerators of `rhs` over the common denominator `qrhs`.
    scaled: Vec<Poly>,
    qrhs: Poly,
}

fn split_constant(p: &Poly) -> (Rational, Poly) {
    let c = p.content().expect("nonzero");
    (c.clone(), p.scale(&c.recip()))
}

fn find_or_push(factors: &mut Vec<Poly>, f: Poly) -> usize {
    match factors.iter().position(|g| *g == f) {
        Some(i) => i,
        None => {
            factors.push(f);
            factors.len() - 1
        }
    }
}

impl<'a> Deriver<'a> {
    fn new(model: &'a DynModel) -> (Deriver<'a>, Frac) {
        let mut factors = Vec::new();
        let mut which = Vec::new();
        let mut nums = Vec::new();
        for r in &model.rhs {
            let (c, d) = split_constant(&r.den);
            nums.push(r.num.scale(&c.recip()));
            which.push(if d.is_constant() { None } else { Some(find_or_push(&mut factors, d)) });
        }
        let nf = factors.len();
        let mut rhs_exps = vec![0u32; nf];
        for j in which.iter().flatten() {
            rhs_exps[*j] = 1;
        }
        let prod = |skip: Option<usize>| -> Poly {
            let mut q = Poly::one();
            for (j, f) in factors.iter().enumerate() {
                if rhs_exps[j] > 0 && Some(j) != skip {
                    q = &q * f;
                }
            }
            q
        };
        let qrhs = prod(None);
        let scaled = nums.iter().zip(&which).map(|(n, w)| match w {
            Some(j) => n * &prod(Some(*j)),
            None => n * &qrhs,
        });
        let scaled: Vec<Poly> = scaled.collect();

        // output denominator: divide out known factors, keep the rest as a new one
        let (c, mut d) = split_constant(&model.output.den);
        let mut exps = vec![0u32; nf];
        for (j, f) in factors.iter().enumerate() {
            while !d.is_constant() {
                match d.div_exact(f) {
                    Some(q) => {
                        d = q;
                        exps[j] += 1;
                    }
                    None => break,
                }
            }
        }
        let mut num = model.output.num.scale(&c.recip());
        if d.is_constant() {
            num = num.scale(&d.constant_value().expect("constant").recip());
        } else {
            let (c2, d2) = split_constant(&d);
            num = num.scale(&c2.recip());
            let j = find_or_push(&mut factors, d2);
            if j >= exps.len() {
                exps.push(0);
                rhs_exps.push(0);
            }
            exps[j] += 1;
        }
        (Deriver { model, factors, rhs_exps, scaled, qrhs }, Frac { num, exps })
    }

    /// `qrhs · D(p)`.
    fn lie_poly(&self, p: &Poly) -> Poly {
        let mut out = &self.qrhs * &p.partial_derivative(&self.model.indep);
        for (u, a) in self.model.states.iter().zip(&self.scaled) {
            let d = p.partial_derivative(u);
            if !d.is_zero() {
                out = &out + &(a * &d);
            }
        }
        out
    }

    fn derive(&self, f: &Frac) -> Frac {
        let active: Vec<usize> = (0..self.factors.len()).filter(|&j| f.exps[j] > 0).collect();
        let others = |skip: usize| -> Poly {
            let mut q = Poly::one();
            for &j in &active {
                if j != skip {
                    q = &q * &self.factors[j];
                }
            }
            q
        };
        let full = others(usize::MAX);
        let mut num = &self.lie_poly(&f.num) * &full;
        for &j in &active {
            let lf = self.lie_poly(&self.factors[j]);
            if lf.is_zero() {
                continue;
            }
            let coeff = Rational::from_integer(f.exps[j].into());
            num = &num - &(&(&f.num * &lf) * &others(j)).scale(&coeff);
        }
        let mut exps: Vec<u32> = (0..self.factors.len())
            .map(|j| f.exps[j] + u32::from(f.exps[j] > 0) + self.rhs_exps[j])
            .collect();
        if num.is_zero() {
            return Frac { num, exps: vec![0; exps.len()] };
        }
        for (j, fac) in self.factors.iter().enumerate() {
            while exps[j] > 0 {
                match num.div_exact(fac) {
                    Some(q) => {
                        num = q;
                        exps[j] -= 1;
                    }
                    None => break,
                }
            }
        }
        Frac { num, exps }
    }

    fn denominator(&self, f: &Frac) -> Poly {
        let mut d = Poly::one();
        for (fac, e) in self.factors.iter().zip(&f.exps) {
            if *e > 0 {
                d = &d * &fac.pow(*e);
            }
        }
        d
    }
}

/// Minimal-order ADE of the output of `model`, named `target`.
pub fn sys_to_min(model: &DynModel, target: &str, budget: &mut Budget) -> Result<AdeResult> {
    let start = Instant::now();
    let n = model.dimension();
    let (der, out) = Deriver::new(model);
    let mut fracs = vec![out];
    let t = Var::aux("sat_t");
    for k in 0..=n {
        while fracs.len() <= k {
            let next = der.derive(fracs.last().expect("nonempty"));
            fracs.push(next);
        }
        let mut gens = Vec::new();
        let mut used = vec![false; der.factors.len()];
        for (j, f) in fracs.iter().enumerate() {
            let w = Poly::var(Var::diff(target, j as u32));
            gens.push(&(&der.denominator(f) * &w) - &f.num);
            for (i, e) in f.exps.iter().enumerate() {
                used[i] |= *e > 0;
            }
        }
        let mut sat = Poly::one();
        for (i, f) in der.factors.iter().enumerate() {
            if used[i] {
                sat = &sat * f;
            }
        }
        let mut elim = model.states.clone();
        if !sat.is_constant() {
            gens.push(&(&Poly::var(t.clone()) * &sat) - &Poly::one());
            elim.insert(0, t.clone());
        }
        gens.extend(model.constraints.iter().cloned());
        let (gens, elim) = eliminate_linear(gens, elim);
        let mut keep: Vec<Var> = (0..=k as u32).rev().map(|j| Var::diff(target, j)).collect();
        keep.push(model.indep.clone());
        keep.extend(model.params.iter().cloned());
        let blocks = if elim.is_empty() { Vec::new() } else { vec![elim] };
        let ideal = eliminate(gens, blocks, keep, budget)?;
        if ideal.iter().any(|p| order_in(p, target) >= 0) {
            let ade = select_minimal(&ideal, target)?;
            let mut r = AdeResult::new(ade, target, Method::II, start.elapsed().as_millis());
            r.bound = Some(n as i64);
            r.saturation = (!sat.is_constant()).then(|| sat.normalized());
            return Ok(r);
        }
    }
    Err(Error::Internal(format!(
        "elimination ideal of a dimension-{n} model stayed trivial up to level {n}"
    )))
}

/// The states of one input function and how they evolve.
struct Chain {
    states: Vec<Var>,
    rhs: Vec<RationalExpr>,
    constraints: Vec<Poly>,
    /// Order of the input plus the differentiations applied to it.
    bound: i64,
}

fn chain(p: &Poly, func: &str, x: &Var, prefix: &str, keep_constraint: bool) -> Result<Chain> {
    let n = order_in(p, func);
    if n < 0 {
        return Err(Error::Domain(format!("{p} does not involve {func}")));
    }
    let to_state = |v: &Var| {
        if v.is_differential() && v.name() == func {
            Var::aux(&format!("{prefix}_{}", v.order()))
        } else {
            v.clone()
        }
    };
    if let Some(v) = p.variables().iter().find(|v| v.is_differential() && v.name() != func) {
        return Err(Error::ContextMismatch(format!("{p} mentions {v} besides {func}")));
    }
    if n == 0 {
        let u = Var::aux(&format!("{prefix}_0"));
        let f = p.map_vars(to_state);
        let fu = f.partial_derivative(&u);
        let rhs = RationalExpr::new(-&f.partial_derivative(x), fu)?.simplified();
        return Ok(Chain { states: vec![u], rhs: vec![rhs], constraints: vec![f], bound: 0 });
    }
    let (p1, flag) = make_lho(p, func, x);
    let n1 = order_in(&p1, func) as u32;
    let r = solve_highest(&p1, func)?;
    let states: Vec<Var> = (0..n1).map(|j| Var::aux(&format!("{prefix}_{j}"))).collect();
    let mut rhs: Vec<RationalExpr> = states[1..].iter().cloned().map(RationalExpr::var).collect();
    rhs.push(r.map_vars(to_state));
    let constraints = if flag && keep_constraint { vec![p.map_vars(to_state)] } else { Vec::new() };
    Ok(Chain { states, rhs, constraints, bound: n + i64::from(flag) })
}

/// The one function an input ADE is about, if any.
fn function_of(p: &Poly) -> Result<Option<String>> {
    let fs = crate::diff::functions_in(p);
    match fs.len() {
        0 => Ok(None),
        1 => Ok(fs.into_iter().next()),
        _ => Err(Error::ContextMismatch(format!("{p} involves several functions: {}", fs.join(", ")))),
    }
}

/// Expressions for `func^(j)` in terms of the states of `model`.
fn bind_derivatives(
    model: &DynModel,
    rel: &RationalExpr,
    funcs: &BTreeMap<String, Vec<Var>>,
) -> Result<BTreeMap<Var, RationalExpr>> {
    let mut out = BTreeMap::new();
    let vars: BTreeSet<Var> = rel.num.variables().into_iter().chain(rel.den.variables()).collect();
    for v in vars.iter().filter(|v| v.is_differential()) {
        let states = funcs
            .get(v.name())
            .ok_or_else(|| Error::UnknownVariable(format!("{v} is not an input function")))?;
        let j = v.order() as usize;
        let e = if j < states.len() {
            RationalExpr::var(states[j].clone())
        } else {
            let mut e = RationalExpr::var(states[states.len() - 1].clone());
            for _ in states.len()..=j {
                e = model.lie(&e);
            }
            e
        };
        out.insert(v.clone(), e);
    }
    Ok(out)
}

/// Model for `target = rel(f₁, …, f_N)` where `fᵢ` solves `inputs[i]`.
/// Unary operations keep the undifferentiated input as a constraint.
pub fn relation_model(inputs: &[Poly], rel: &RationalExpr, x: &Var, keep_constraints: bool) -> Result<(DynModel, i64)> {
    let mut states = Vec::new();
    let mut rhs = Vec::new();
    let mut constraints = Vec::new();
    let mut funcs = BTreeMap::new();
    let mut bound = 0;
    for p in inputs {
        match function_of(p)? {
            None => constraints.push(p.clone()),
            Some(f) => {
                if funcs.contains_key(&f) {
                    return Err(Error::ContextMismatch(format!("{f} is described by two inputs")));
                }
                let c = chain(p, &f, x, &f, keep_constraints)?;
                bound += c.bound;
                funcs.insert(f, c.states.clone());
                states.extend(c.states);
                rhs.extend(c.rhs);
                constraints.extend(c.constraints);
            }
        }
    }
    let model = DynModel::new(x.clone(), states, rhs, RationalExpr::poly(Poly::zero()))?;
    let bindings = bind_derivatives(&model, rel, &funcs)?;
    let output = rel.substitute(&bindings)?.simplified();
    let model = DynModel { output, ..model }.with_constraints(constraints)?;
    Ok((model, bound))
}

fn finish(model: &DynModel, bound: i64, target: &str, budget: &mut Budget) -> Result<AdeResult> {
    let start = Instant::now();
    let mut r = sys_to_min(model, target, budget)?;
    r.bound = Some(bound);
    r.elapsed_ms = start.elapsed().as_millis();
    Ok(r)
}

/// ADE of `target = rel(f₁, …)` for solutions `fᵢ` of `inputs`.
pub fn arith(inputs: &[Poly], target: &str, rel: &RationalExpr, x: &Var, budget: &mut Budget) -> Result<AdeResult> {
    let (model, bound) = relation_model(inputs, rel, x, false)?;
    finish(&model, bound, target, budget)
}

/// ADE of `target = expr(f)` for a solution `f` of `p`; `expr` may involve
/// derivatives of `f`.
pub fn unary(p: &Poly, target: &str, expr: &RationalExpr, x: &Var, budget: &mut Budget) -> Result<AdeResult> {
    let (model, bound) = relation_model(std::slice::from_ref(p), expr, x, true)?;
    finish(&model, bound, target, budget)
}

/// Model for `f ∘ g` with `p(f) = 0`, `q(g) = 0`. Outer states stand for
/// `f^(j)(g(x))` and evolve by `f^(j+1)(g)·g'`.
pub fn composition_model(p: &Poly, q: &Poly, x: &Var) -> Result<(DynModel, i64)> {
    let f = function_of(p)?.ok_or_else(|| Error::Domain(format!("{p} involves no function")))?;
    let g = function_of(q)?.ok_or_else(|| Error::Domain(format!("{q} involves no function")))?;
    let inner_tag = if f == g { format!("{g}_in") } else { g.clone() };
    let inner = chain(q, &g, x, &inner_tag, false)?;
    let outer = chain(p, &f, x, &f, false)?;
    let z0 = inner.states[0].clone();
    let dz = inner.rhs[0].clone();
    if dz.is_zero() {
        return Err(Error::Domain(format!("{q} only has constant solutions")));
    }
    let at_g = |v: &Var| if v == x { z0.clone() } else { v.clone() };
    let mut states = inner.states;
    let mut rhs = inner.rhs;
    let output = RationalExpr::var(outer.states[0].clone());
    states.extend(outer.states);
    rhs.extend(outer.rhs.iter().map(|r| r.map_vars(at_g).mul(&dz).simplified()));
    let mut constraints = inner.constraints;
    constraints.extend(outer.constraints.iter().map(|c| c.map_vars(at_g)));
    let model = DynModel::new(x.clone(), states, rhs, output)?.with_constraints(constraints)?;
    Ok((model, inner.bound + outer.bound))
}

/// ADE of `target = f(g(x))`.
pub fn compose(p: &Poly, q: &Poly, target: &str, x: &Var, budget: &mut Budget) -> Result<AdeResult> {
    let (model, bound) = composition_model(p, q, x)?;
    finish(&model, bound, target, budget)
}

/// ADE of the inverse `g` of a solution of `p`, with `y` its independent
/// variable: `x ↦ g(y)`, `f ↦ y`, `f^(k) ↦ F_k` where `F₁ = 1/g'` and
/// `F_{k+1} = δ(F_k)/g'`.
pub fn inverse(p: &Poly, x: &Var, y: &str, g: &str) -> Result<AdeResult> {
    let start = Instant::now();
    let f = function_of(p)?.ok_or_else(|| Error::Domain(format!("{p} involves no function")))?;
    let yv = Var::indep(y);
    let g1 = RationalExpr::var(Var::diff(g, 1));
    let n = order_in(p, &f).max(0) as u32;
    let mut bindings = BTreeMap::new();
    bindings.insert(x.clone(), RationalExpr::var(Var::diff(g, 0)));
    bindings.insert(Var::diff(&f, 0), RationalExpr::var(yv.clone()));
    let mut fk = RationalExpr::constant(Rational::from_integer(1.into())).div(&g1)?;
    for k in 1..=n {
        bindings.insert(Var::diff(&f, k), fk.clone());
        fk = fk.derivative(&yv).div(&g1)?.simplified();
    }
    let r = crate::diff::substitute(p, &bindings)?;
    if r.num.is_zero() {
        return Err(Error::Domain(format!("{p} has no invertible solutions")));
    }
    let mut out = AdeResult::new(r.num, g, Method::II, start.elapsed().as_millis());
    out.bound = Some(n as i64);
    Ok(out)
}
