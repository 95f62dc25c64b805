//! Gröbner bases, normal forms, elimination and saturation.

mod kernel;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::diff::{diff_degree, order_in};
use crate::error::{Error, Result};
use crate::poly::{Monomial, MonomialOrder, Poly, Rational, Var};

pub use kernel::Ring;

/// Resource limits for basis computations. The wall-clock deadline is
/// shared by everything run under one budget; the step cap applies to
/// each basis separately.
#[derive(Clone, Debug)]
pub struct Budget {
    deadline: Option<Instant>,
    pub max_steps: u64,
}

impl Budget {
    pub fn new(wall: Duration, max_steps: u64) -> Budget {
        Budget { deadline: Some(Instant::now() + wall), max_steps }
    }

    pub fn seconds(secs: u64) -> Budget {
        Budget::new(Duration::from_secs(secs), 1_000_000)
    }

    pub fn unlimited() -> Budget {
        Budget { deadline: None, max_steps: u64::MAX }
    }

    pub fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    pub fn remaining(&self) -> Option<Duration> {
        self.deadline.map(|d| d.saturating_duration_since(Instant::now()))
    }
}

impl Default for Budget {
    fn default() -> Budget {
        Budget::new(Duration::from_secs(120), 1_000_000)
    }
}

/// Generators in a finite ring with a designated order.
#[derive(Clone, Debug)]
pub struct TruncatedIdeal {
    pub generators: Vec<Poly>,
    pub order: MonomialOrder,
}

impl TruncatedIdeal {
    pub fn new(generators: Vec<Poly>, order: MonomialOrder) -> Result<TruncatedIdeal> {
        for g in &generators {
            if let Some(v) = g.variables().into_iter().find(|v| !order.knows(v)) {
                return Err(Error::UnknownVariable(v.to_string()));
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(TruncatedIdeal { generators, order })
    }

    pub fn ring(&self) -> Vec<Var> {
        self.order.ranking()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub elements: Vec<Poly>,
    pub order: MonomialOrder,
}

struct Compiled {
    ring: Ring,
    index: BTreeMap<Var, usize>,
    vars: Vec<Var>,
}

fn compile(order: &MonomialOrder) -> Compiled {
    let sizes: Vec<usize> = order.blocks().iter().map(Vec::len).collect();
    let vars = order.ranking();
    let index = vars.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    Compiled { ring: Ring::new(&sizes), index, vars }
}

impl Compiled {
    fn to_kernel(&self, p: &Poly) -> Result<Vec<kernel::Term>> {
        Ok(self.to_kernel_scaled(p)?.0)
    }

    /// Integer image of `p` and the factor it was multiplied by.
    fn to_kernel_scaled(&self, p: &Poly) -> Result<(Vec<kernel::Term>, BigInt)> {
        let den = p.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut out = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let mut e = vec![0u16; self.ring.nv];
            for (v, k) in m.iter() {
                let i = *self.index.get(v).ok_or_else(|| Error::UnknownVariable(v.to_string()))?;
                e[i] = u16::try_from(*k).map_err(|_| Error::Domain("exponent overflow".into()))?;
            }
            let c = (c * Rational::from_integer(den.clone())).to_integer();
            out.push((self.ring.mono(&e), c));
        }
        out.sort_by(|a, b| self.ring.cmp(&b.0, &a.0));
        Ok((out, den))
    }

    fn decode(&self, ts: &[kernel::Term]) -> Poly {
        Poly::from_terms(ts.iter().map(|(m, c)| {
            let pairs = self
                .ring
                .exps(m)
                .iter()
                .enumerate()
                .filter(|(_, e)| **e > 0)
                .map(|(i, e)| (self.vars[i].clone(), *e as u32));
            (Monomial::from_pairs(pairs), Rational::from_integer(c.clone()))
        }))
    }
}

/// Reduced Gröbner basis; elements are primitive with positive leading
/// coefficient and sorted by ascending leading monomial.
pub fn buchberger(ideal: &TruncatedIdeal, budget: &mut Budget) -> Result<GroebnerBasis> {
    let c = compile(&ideal.order);
    let gens = ideal.generators.iter().map(|g| c.to_kernel(g)).collect::<Result<Vec<_>>>()?;
    let engine = kernel::Engine::new(c.ring.clone(), budget);
    let basis = engine.run(gens)?;
    Ok(GroebnerBasis {
        elements: basis.iter().map(|b| c.decode(b)).collect(),
        order: ideal.order.clone(),
    })
}

/// Remainder of multivariate division of `p` by `g` under `ord`.
pub fn normal_form(p: &Poly, g: &[Poly], ord: &MonomialOrder) -> Result<Poly> {
    let c = compile(ord);
    let (f, lift) = c.to_kernel_scaled(p)?;
    if f.is_empty() {
        return Ok(Poly::zero());
    }
    let basis = g.iter().map(|q| c.to_kernel(q)).collect::<Result<Vec<_>>>()?;
    let (r, s) = kernel::normal_form(&c.ring, f, &basis, &mut Budget::unlimited())?;
    let total: BigRational = s * BigRational::from_integer(lift);
    Ok(c.decode(&r).scale(&total.recip()))
}

/// Elements of `g` free of every variable outside `keep`. The order of `g`
/// must rank all eliminated variables in leading blocks.
pub fn elimination_ideal(g: &GroebnerBasis, keep: &[Var]) -> Result<Vec<Poly>> {
    let is_kept = |v: &Var| keep.contains(v);
    let mut seen_kept = false;
    for block in g.order.blocks() {
        let kept = block.iter().filter(|v| is_kept(v)).count();
        if kept > 0 && kept < block.len() {
            return Err(Error::Precondition("a block mixes kept and eliminated variables".into()));
        }
        if kept == 0 && seen_kept {
            return Err(Error::Precondition("eliminated variables must rank above kept ones".into()));
        }
        seen_kept |= kept > 0;
    }
    Ok(g.elements
        .iter()
        .filter(|p| p.variables().iter().all(is_kept))
        .cloned()
        .collect())
}

/// Eliminates the variables of `elim` (ranked in the given blocks, first
/// block highest) from `gens`, keeping `keep` under degrevlex.
pub fn eliminate(
    gens: Vec<Poly>,
    elim: Vec<Vec<Var>>,
    keep: Vec<Var>,
    budget: &mut Budget,
) -> Result<Vec<Poly>> {
    let mut blocks = elim;
    blocks.push(keep.clone());
    let ideal = TruncatedIdeal::new(gens, MonomialOrder::nested(blocks))?;
    let gb = buchberger(&ideal, budget)?;
    elimination_ideal(&gb, &keep)
}

/// `I : Q^∞` via a fresh variable `t` and the generator `t·Q − 1`.
pub fn saturate(ideal: &TruncatedIdeal, q: &Poly, budget: &mut Budget) -> Result<TruncatedIdeal> {
    if q.is_zero() {
        return Err(Error::Domain("saturation by zero".into()));
    }
    let ranking = ideal.ring();
    let mut name = String::from("sat_t");
    while ranking.iter().any(|v| v.name() == name) {
        name.push('_');
    }
    let t = Var::aux(&name);
    let mut gens = ideal.generators.clone();
    gens.push(&(&Poly::var(t.clone()) * q) - &Poly::one());
    let mut blocks = vec![vec![t]];
    blocks.extend(ideal.order.blocks().iter().cloned());
    let full = TruncatedIdeal::new(gens, MonomialOrder::nested(blocks))?;
    let gb = buchberger(&full, budget)?;
    let kept: Vec<Poly> = gb.elements.into_iter().filter(|p| p.variables().iter().all(|v| ranking.contains(v))).collect();
    TruncatedIdeal::new(kept, ideal.order.clone())
}

/// S-polynomial of `f` and `g` under `ord`.
pub fn s_polynomial(f: &Poly, g: &Poly, ord: &MonomialOrder) -> Result<Poly> {
    let lf = f.leading_monomial_in(ord)?.ok_or_else(|| Error::Domain("zero polynomial".into()))?;
    let lg = g.leading_monomial_in(ord)?.ok_or_else(|| Error::Domain("zero polynomial".into()))?;
    let l = lf.lcm(&lg);
    let a = f.mul_monomial(&lf.quotient_of(&l).unwrap(), &f.coefficient(&lf).recip());
    let b = g.mul_monomial(&lg.quotient_of(&l).unwrap(), &g.coefficient(&lg).recip());
    Ok(&a - &b)
}

/// Buchberger's criterion: every S-polynomial reduces to zero.
pub fn satisfies_criterion(g: &[Poly], ord: &MonomialOrder) -> Result<bool> {
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if !normal_form(&s_polynomial(&g[i], &g[j], ord)?, g, ord)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The element of least (order in `func`, degree), ties broken by the
/// default term order; polynomials not involving `func` are skipped.
pub fn select_minimal(polys: &[Poly], func: &str) -> Result<Poly> {
    let mut best: Option<(i64, u32, Poly)> = None;
    for p in polys {
        let n = order_in(p, func);
        if p.is_zero() || n < 0 {
            continue;
        }
        let cand = (n, diff_degree(p), p.normalized());
        best = Some(match best {
            None => cand,
            Some(b) => {
                let ord = (cand.0, cand.1).cmp(&(b.0, b.1)).then_with(|| cmp_polys(&cand.2, &b.2));
                if ord == Ordering::Less { cand } else { b }
            }
        });
    }
    best.map(|b| b.2).ok_or_else(|| Error::Domain(format!("no polynomial involves {func}")))
}

/// Compares term maps from the highest term down.
fn cmp_polys(a: &Poly, b: &Poly) -> Ordering {
    let mut ia = a.terms().rev();
    let mut ib = b.terms().rev();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ma, ca)), Some((mb, cb))) => {
                let o = ma.cmp(mb).then_with(|| ca.cmp(cb));
                if o != Ordering::Equal {
                    return o;
                }
            }
        }
    }
}

/// Solves generators that are linear with constant coefficient in one of
/// the variables to eliminate, substituting them into the rest. Returns
/// the remaining generators and the variables still to be eliminated.
pub fn eliminate_linear(mut gens: Vec<Poly>, mut elim: Vec<Var>) -> (Vec<Poly>, Vec<Var>) {
    loop {
        let hit = gens.iter().enumerate().find_map(|(i, g)| {
            elim.iter()
                .find(|v| g.degree_in(v) == 1 && g.coefficient_in(v, 1).is_constant())
                .map(|v| (i, v.clone()))
        });
        let Some((i, v)) = hit else {
            return (gens, elim);
        };
        let g = gens.swap_remove(i);
        let c = g.coefficient_in(&v, 1).constant_value().expect("constant coefficient");
        let value = g.coefficient_in(&v, 0).scale(&(-c.recip()));
        gens = gens
            .into_iter()
            .map(|h| h.substitute(&v, &value))
            .filter(|h| !h.is_zero())
            .map(|h| h.normalized())
            .collect();
        elim.retain(|w| *w != v);
    }
}

/// Drops generators holding the only occurrence of an eliminated variable.
/// What remains generates a subideal of the elimination ideal, equal to it
/// away from the leading coefficients of the dropped generators.
pub fn drop_isolated(mut gens: Vec<Poly>, mut elim: Vec<Var>) -> (Vec<Poly>, Vec<Var>) {
    loop {
        let hit = elim.iter().find_map(|v| {
            let holders: Vec<usize> = (0..gens.len()).filter(|&i| gens[i].contains_var(v)).collect();
            (holders.len() <= 1).then(|| (holders.first().copied(), v.clone()))
        });
        let Some((i, v)) = hit else {
            return (gens, elim);
        };
        if let Some(i) = i {
            gens.swap_remove(i);
        }
        elim.retain(|w| *w != v);
    }
}
