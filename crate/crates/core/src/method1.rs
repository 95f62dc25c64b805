//! Truncated differential ideals with iterative elimination.

use std::time::Instant;

use crate::diff::{divide_monomial, functions_in, monomial_gcd, order_in, resultant, total_derivative, RationalExpr};
use crate::error::{Error, Result};
use crate::groebner::{drop_isolated, eliminate, eliminate_linear, select_minimal, Budget};
use crate::poly::{Poly, Var, VarKind};
use crate::result::{AdeResult, Method};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl Op {
    pub fn symbol(self) -> char {
        match self {
            Op::Add => '+',
            Op::Sub => '-',
            Op::Mul => '*',
            Op::Div => '/',
        }
    }
}

/// The numerator of `w − α(y, z)`.
pub fn build_relation(op: Op, y: &str, z: &str, w: &str) -> Poly {
    let (y, z, w) = (Poly::var(Var::diff(y, 0)), Poly::var(Var::diff(z, 0)), Poly::var(Var::diff(w, 0)));
    match op {
        Op::Add => &(&w - &y) - &z,
        Op::Sub => &(&w - &y) + &z,
        Op::Mul => &w - &(&y * &z),
        Op::Div => &(&w * &z) - &y,
    }
}

/// The numerator of `w − rel`.
pub fn relation_numerator(rel: &RationalExpr, w: &str) -> Poly {
    &(&rel.den * &Poly::var(Var::diff(w, 0))) - &rel.num
}

/// Options for the level loop.
#[derive(Clone, Debug)]
pub struct Levels {
    pub max_j: usize,
    /// Keep searching up to `max_j` for a lower (order, degree).
    pub continue_past_first: bool,
}

impl Default for Levels {
    fn default() -> Levels {
        Levels { max_j: 6, continue_past_first: false }
    }
}

fn nth(p: &Poly, x: &Var, k: usize) -> Vec<Poly> {
    let mut out = vec![p.clone()];
    for _ in 0..k {
        let next = total_derivative(out.last().expect("nonempty"), x);
        out.push(next);
    }
    out
}

fn single_function(p: &Poly) -> Result<String> {
    let fs = functions_in(p);
    match fs.len() {
        1 => Ok(fs.into_iter().next().expect("one")),
        0 => Err(Error::Domain(format!("{p} involves no function"))),
        _ => Err(Error::ContextMismatch(format!("{p} involves several functions"))),
    }
}

/// Generators `pᵢ, …, pᵢ^(j)` for every input and `R, …, R^(j)`.
pub fn truncated_ideal_relation(inputs: &[Poly], relation: &Poly, x: &Var, j: usize) -> Vec<Poly> {
    let mut gens = Vec::new();
    for p in inputs {
        gens.extend(nth(p, x, j));
    }
    gens.extend(nth(relation, x, j));
    gens
}

pub fn truncated_ideal_arith(p: &Poly, q: &Poly, op: Op, target: &str, x: &Var, j: usize) -> Result<Vec<Poly>> {
    let r = build_relation(op, &single_function(p)?, &single_function(q)?, target);
    Ok(truncated_ideal_relation(&[p.clone(), q.clone()], &r, x, j))
}

/// Eliminates every differential variable not belonging to `target`. A
/// single variable shared by two generators is removed by a resultant.
fn eliminate_to(gens: Vec<Poly>, target: &str, budget: &mut Budget) -> Result<Vec<Poly>> {
    let mut vars = std::collections::BTreeSet::new();
    for g in &gens {
        vars.extend(g.variables());
    }
    let elim: Vec<Var> =
        vars.iter().filter(|v| v.is_differential() && v.name() != target).rev().cloned().collect();
    let (gens, elim) = eliminate_linear(gens, elim);
    let (gens, elim) = drop_isolated(gens, elim);
    if let ([f, g], [v]) = (gens.as_slice(), elim.as_slice()) {
        let r = resultant(f, g, v);
        if !r.is_zero() {
            let r = divide_monomial(&r, &monomial_gcd(&[&r]));
            return Ok(if order_in(&r, target) >= 0 { vec![r.normalized()] } else { Vec::new() });
        }
    }
    let mut keep: Vec<Var> =
        vars.iter().filter(|v| v.is_differential() && v.name() == target).rev().cloned().collect();
    keep.extend(vars.iter().filter(|v| matches!(v.kind(), VarKind::Independent | VarKind::Parameter)).cloned());
    let blocks = if elim.is_empty() { Vec::new() } else { vec![elim] };
    let ideal = eliminate(gens, blocks, keep, budget)?;
    Ok(ideal.into_iter().filter(|p| order_in(p, target) >= 0).collect())
}

fn better(a: &AdeResult, b: &AdeResult) -> bool {
    (a.order, a.degree) < (b.order, b.degree)
}

fn run_levels<F>(target: &str, levels: &Levels, budget: &mut Budget, mut gens_at: F) -> Result<AdeResult>
where
    F: FnMut(usize) -> Result<Vec<Poly>>,
{
    let start = Instant::now();
    let mut best: Option<AdeResult> = None;
    for j in 0..=levels.max_j {
        let found = match eliminate_to(gens_at(j)?, target, budget) {
            Ok(f) => f,
            Err(Error::Timeout(_)) if best.is_some() => break,
            Err(e) => return Err(e),
        };
        if found.is_empty() {
            continue;
        }
        let mut r = AdeResult::new(select_minimal(&found, target)?, target, Method::I, 0);
        r.level = Some(j);
        if best.as_ref().is_none_or(|b| better(&r, b)) {
            best = Some(r);
        }
        if !levels.continue_past_first {
            break;
        }
    }
    let mut r = best.ok_or(Error::MaxLevel { last_j: levels.max_j })?;
    r.elapsed_ms = start.elapsed().as_millis();
    Ok(r)
}

/// ADE of `target = rel(f₁, …)` by truncated ideals of increasing level.
pub fn arith(
    inputs: &[Poly],
    target: &str,
    rel: &RationalExpr,
    x: &Var,
    levels: &Levels,
    budget: &mut Budget,
) -> Result<AdeResult> {
    let r = relation_numerator(rel, target);
    run_levels(target, levels, budget, |j| Ok(truncated_ideal_relation(inputs, &r, x, j)))
}

pub fn arith_op(p: &Poly, q: &Poly, op: Op, target: &str, x: &Var, levels: &Levels, budget: &mut Budget) -> Result<AdeResult> {
    run_levels(target, levels, budget, |j| truncated_ideal_arith(p, q, op, target, x, j))
}

/// `S₀, …, S_k`: `S_j` is `(f∘g)^(j)` with `y^(i)` standing for `f^(i)(g)`.
pub fn composition_chain(k: usize, y: &str, z: &str) -> Vec<Poly> {
    let dz = Poly::var(Var::diff(z, 1));
    let step = |s: &Poly| -> Poly {
        let mut out = Poly::zero();
        for v in s.variables() {
            let d = s.partial_derivative(&v);
            let dv = if v.name() == y {
                &dz * &Poly::var(v.shifted(1))
            } else {
                Poly::var(v.shifted(1))
            };
            out = &out + &(&d * &dv);
        }
        out
    };
    let mut out = vec![Poly::var(Var::diff(y, 0))];
    for _ in 0..k {
        let next = step(out.last().expect("nonempty"));
        out.push(next);
    }
    out
}

/// Generators of `H_j`: with `L = j + min(m, n)`, the derivatives of `p`
/// (independent variable replaced by `z` after differentiating) and of `q`
/// of order at most `L`, plus `w^(i) − S_i` for `i ≤ L`.
pub fn composition_ideal(p: &Poly, q: &Poly, target: &str, x: &Var, j: usize) -> Result<Vec<Poly>> {
    let f = single_function(p)?;
    let g = single_function(q)?;
    if f == g {
        return Err(Error::ContextMismatch(format!("outer and inner inputs both use {f}")));
    }
    let n = order_in(p, &f) as usize;
    let m = order_in(q, &g) as usize;
    let l = j + n.min(m);
    let z0 = Poly::var(Var::diff(&g, 0));
    let mut gens: Vec<Poly> = nth(p, x, l.saturating_sub(n)).iter().map(|d| d.substitute(x, &z0)).collect();
    gens.extend(nth(q, x, l.saturating_sub(m)));
    for (i, s) in composition_chain(l, &f, &g).into_iter().enumerate() {
        gens.push(&Poly::var(Var::diff(target, i as u32)) - &s);
    }
    Ok(gens)
}

/// ADE of `target = f(g(x))` by the ideals `H_j`.
pub fn compose(p: &Poly, q: &Poly, target: &str, x: &Var, levels: &Levels, budget: &mut Budget) -> Result<AdeResult> {
    run_levels(target, levels, budget, |j| composition_ideal(p, q, target, x, j))
}
