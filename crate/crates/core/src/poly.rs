//! Sparse multivariate polynomials over the rationals.
//!
//! Variables are self-describing ([`Var`]), so a [`Poly`] can be moved
//! between rings without re-embedding. The term map is keyed by
//! [`Monomial`], whose `Ord` is degrevlex under the default variable
//! ranking; the last entry of the map is therefore the leading term.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Kind of a ring variable. Declaration order is the default ranking:
/// parameters rank lowest, auxiliary variables highest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    Parameter,
    Independent,
    Differential,
    Auxiliary,
}

/// A ring variable. `order` is the derivative order for differential
/// variables and 0 otherwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    kind: VarKind,
    order: u32,
    name: Arc<str>,
}

impl Var {
    pub fn new(kind: VarKind, name: &str, order: u32) -> Var {
        let order = if kind == VarKind::Differential { order } else { 0 };
        Var { kind, order, name: Arc::from(name) }
    }

    pub fn indep(name: &str) -> Var {
        Var::new(VarKind::Independent, name, 0)
    }

    pub fn diff(name: &str, order: u32) -> Var {
        Var::new(VarKind::Differential, name, order)
    }

    pub fn param(name: &str) -> Var {
        Var::new(VarKind::Parameter, name, 0)
    }

    pub fn aux(name: &str) -> Var {
        Var::new(VarKind::Auxiliary, name, 0)
    }

    pub fn kind(&self) -> VarKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_differential(&self) -> bool {
        self.kind == VarKind::Differential
    }

    /// Same function, derivative order shifted by `k` (negative shifts
    /// saturate at order 0).
    pub fn shifted(&self, k: i64) -> Var {
        debug_assert!(self.is_differential());
        let order = (self.order as i64 + k).max(0) as u32;
        Var { kind: self.kind, order, name: self.name.clone() }
    }

    pub fn with_order(&self, order: u32) -> Var {
        Var { kind: self.kind, order, name: self.name.clone() }
    }

    pub fn renamed(&self, name: &str) -> Var {
        Var { kind: self.kind, order: self.order, name: Arc::from(name) }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.order) {
            (VarKind::Differential, 0) => write!(f, "{}", self.name),
            (VarKind::Differential, 1) => write!(f, "{}'", self.name),
            (VarKind::Differential, 2) => write!(f, "{}''", self.name),
            (VarKind::Differential, k) => write!(f, "{}^({})", self.name, k),
            _ => write!(f, "{}", self.name),
        }
    }
}

/// A power product. Stored sparse and sorted ascending by [`Var`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Monomial {
        Monomial(vec![(v, 1)])
    }

    pub fn var_pow(v: Var, e: u32) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping
    /// zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Monomial {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Var, u32)> {
        self.0.iter()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        match self.0.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_where<F: Fn(&Var) -> bool>(&self, pred: F) -> u32 {
        self.0.iter().filter(|(v, _)| pred(v)).map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(v, e)| other.exponent(v) >= *e)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        let out = other
            .0
            .iter()
            .filter_map(|(v, e)| {
                let d = e - self.exponent(v);
                (d > 0).then(|| (v.clone(), d))
            })
            .collect();
        Some(Monomial(out))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<Var, u32> = self.0.iter().cloned().collect();
        for (v, e) in &other.0 {
            let slot = map.entry(v.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        Monomial(map.into_iter().collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|(v, e)| {
                    let m = (*e).min(other.exponent(v));
                    (m > 0).then(|| (v.clone(), m))
                })
                .collect(),
        )
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.exponent(v) > 0
    }

    /// Removes `v` entirely, returning its exponent and the rest.
    pub fn split_off(&self, v: &Var) -> (u32, Monomial) {
        let e = self.exponent(v);
        let rest = self.0.iter().filter(|(w, _)| w != v).cloned().collect();
        (e, Monomial(rest))
    }

    pub fn map_vars<F: Fn(&Var) -> Var>(&self, f: F) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|(v, e)| (f(v), *e)))
    }
}

/// Degrevlex under the default ranking of [`Var`].
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (da, db) = (self.total_degree(), other.total_degree());
        if da != db {
            return da.cmp(&db);
        }
        revlex_sorted(&self.0, &other.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reverse lexicographic tie-break on two monomials sorted ascending by
/// variable: the first (lowest) variable where exponents differ decides,
/// and the smaller exponent wins.
fn revlex_sorted(a: &[(Var, u32)], b: &[(Var, u32)]) -> Ordering {
    let (mut i, mut j) = (0, 0);
    loop {
        match (a.get(i), b.get(j)) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Less,
            (None, Some(_)) => return Ordering::Greater,
            (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                Ordering::Less => return Ordering::Less,
                Ordering::Greater => return Ordering::Greater,
                Ordering::Equal => {
                    if ea != eb {
                        return eb.cmp(ea);
                    }
                    i += 1;
                    j += 1;
                }
            },
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        // highest-ranked variable first
        for (k, (v, e)) in self.0.iter().rev().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Family of a [`MonomialOrder`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    Lex,
    Degrevlex,
    BlockElimination,
    /// Several degrevlex blocks compared in sequence.
    Nested,
}

/// A monomial order over an explicit finite variable set.
///
/// Every order here is a sequence of blocks, each compared by degrevlex,
/// with earlier blocks dominating. Within a block, earlier variables rank
/// higher. Lex is the special case of singleton blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    blocks: Vec<Vec<Var>>,
}

impl MonomialOrder {
    pub fn lex(ranking: Vec<Var>) -> MonomialOrder {
        MonomialOrder {
            kind: OrderKind::Lex,
            blocks: ranking.into_iter().map(|v| vec![v]).collect(),
        }
    }

    pub fn degrevlex(ranking: Vec<Var>) -> MonomialOrder {
        MonomialOrder { kind: OrderKind::Degrevlex, blocks: vec![ranking] }
    }

    /// `block` variables dominate `rest`; degrevlex inside each.
    pub fn block_elimination(block: Vec<Var>, rest: Vec<Var>) -> MonomialOrder {
        MonomialOrder { kind: OrderKind::BlockElimination, blocks: vec![block, rest] }
    }

    pub fn nested(blocks: Vec<Vec<Var>>) -> MonomialOrder {
        MonomialOrder { kind: OrderKind::Nested, blocks }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn blocks(&self) -> &[Vec<Var>] {
        &self.blocks
    }

    /// Variables from highest to lowest rank.
    pub fn ranking(&self) -> Vec<Var> {
        self.blocks.iter().flatten().cloned().collect()
    }

    pub fn knows(&self, v: &Var) -> bool {
        self.blocks.iter().any(|b| b.contains(v))
    }

    /// The variables of the first block of a block-elimination order.
    pub fn elimination_block(&self) -> Option<&[Vec<Var>]> {
        match self.kind {
            OrderKind::BlockElimination | OrderKind::Nested => Some(&self.blocks[..1]),
            _ => None,
        }
    }

    fn dense(&self, m: &Monomial) -> Result<Vec<Vec<u32>>> {
        for (v, _) in m.iter() {
            if !self.knows(v) {
                return Err(Error::UnknownVariable(v.to_string()));
            }
        }
        Ok(self
            .blocks
            .iter()
            .map(|b| b.iter().map(|v| m.exponent(v)).collect())
            .collect())
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        let (da, db) = (self.dense(a)?, self.dense(b)?);
        for (ea, eb) in da.iter().zip(&db) {
            let (sa, sb): (u32, u32) = (ea.iter().sum(), eb.iter().sum());
            if sa != sb {
                return Ok(sa.cmp(&sb));
            }
            for (x, y) in ea.iter().zip(eb).rev() {
                if x != y {
                    return Ok(y.cmp(x));
                }
            }
        }
        Ok(Ordering::Equal)
    }
}

/// Compares two monomials under `ord`.
pub fn compare_monomials(m1: &Monomial, m2: &Monomial, ord: &MonomialOrder) -> Result<Ordering> {
    ord.compare(m1, m2)
}

/// A polynomial with rational coefficients in canonical form: no zero
/// coefficients, terms keyed by the default degrevlex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn from_int(n: i64) -> Poly {
        Poly::constant(int(n))
    }

    pub fn var(v: Var) -> Poly {
        Poly::monomial(Monomial::var(v), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending default order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Leading term under the default degrevlex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.last_key_value()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    /// Leading monomial under an explicit order.
    pub fn leading_monomial_in(&self, ord: &MonomialOrder) -> Result<Option<Monomial>> {
        let mut best: Option<&Monomial> = None;
        for m in self.terms.keys() {
            best = match best {
                None => Some(m),
                Some(b) => {
                    if ord.compare(m, b)? == Ordering::Greater {
                        Some(m)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        Ok(best.cloned())
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v.clone())).collect()
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.terms.keys().any(|m| m.contains(v))
    }

    pub fn contains_var_where<F: Fn(&Var) -> bool>(&self, pred: F) -> bool {
        self.terms.keys().any(|m| m.iter().any(|(v, _)| pred(v)))
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn degree_where<F: Fn(&Var) -> bool + Copy>(&self, pred: F) -> u32 {
        self.terms.keys().map(|m| m.degree_where(pred)).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn partial_derivative(&self, v: &Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e == 0 {
                continue;
            }
            let (_, rest) = m.split_off(v);
            let mono = rest.mul(&Monomial::var_pow(v.clone(), e - 1));
            out.add_term(mono, c * Rational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `v`;
    /// index `k` holds the coefficient of `v^k`.
    pub fn coefficients_in(&self, v: &Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn coefficient_in(&self, v: &Var, k: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            if e == k {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Replaces `v` by `value`.
    pub fn substitute(&self, v: &Var, value: &Poly) -> Poly {
        if !self.contains_var(v) {
            return self.clone();
        }
        let coeffs = self.coefficients_in(v);
        // Horner
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    /// Simultaneous substitution of several variables.
    pub fn substitute_many(&self, map: &BTreeMap<Var, Poly>) -> Poly {
        let mut powers: BTreeMap<(Var, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            let mut kept = Vec::new();
            for (v, e) in m.iter() {
                match map.get(v) {
                    Some(val) => {
                        let pw = powers
                            .entry((v.clone(), *e))
                            .or_insert_with(|| val.pow(*e))
                            .clone();
                        term = &term * &pw;
                    }
                    None => kept.push((v.clone(), *e)),
                }
            }
            let keep = Monomial::from_pairs(kept);
            out = &out + &term.mul_monomial(&keep, &Rational::one());
        }
        out
    }

    pub fn map_vars<F: Fn(&Var) -> Var>(&self, f: F) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())))
    }

    /// Evaluates every variable for which `value` returns `Some`.
    pub fn evaluate_partial<F: Fn(&Var) -> Option<Rational>>(&self, value: F) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut kept = Vec::new();
            for (v, e) in m.iter() {
                match value(v) {
                    Some(x) => coeff *= pow_rat(&x, *e),
                    None => kept.push((v.clone(), *e)),
                }
            }
            out.add_term(Monomial::from_pairs(kept), coeff);
        }
        out
    }

    /// Integer content with the sign of the leading coefficient: the
    /// rational `c` such that `self / c` has coprime integer coefficients
    /// and a positive leading coefficient.
    pub fn content(&self) -> Result<Rational> {
        if self.is_zero() {
            return Err(Error::Domain("content of the zero polynomial".into()));
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Rational::new(num_gcd, den_lcm);
        if self.leading_coefficient().is_negative() {
            content = -content;
        }
        Ok(content)
    }

    pub fn primitive_part(&self) -> Result<Poly> {
        let c = self.content()?;
        Ok(self.scale(&c.recip()))
    }

    /// Primitive part, or zero for the zero polynomial.
    pub fn normalized(&self) -> Poly {
        self.primitive_part().unwrap_or_default()
    }

    /// `Some(q)` with `self = q * d` when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm_d, lc_d) = d.leading_term()?;
        let (lm_d, lc_d) = (lm_d.clone(), lc_d.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((lm, lc)) = rem.leading_term() {
            let m = lm_d.quotient_of(lm)?;
            let c = lc / &lc_d;
            rem = &rem - &d.mul_monomial(&m, &c);
            quot.add_term(m, c);
        }
        Some(quot)
    }

    /// True when `self = c * other` for a nonzero rational `c`.
    pub fn is_proportional(&self, other: &Poly) -> bool {
        match (self.primitive_part(), other.primitive_part()) {
            (Ok(a), Ok(b)) => a == b,
            _ => self.is_zero() && other.is_zero(),
        }
    }
}

pub fn pow_rat(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(slot) => *slot += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly { terms: acc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $f(self, rhs: Poly) -> Poly {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $f(self, rhs: &Poly) -> Poly {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Poly {
        Poly::var(v)
    }
}

impl fmt::Display for Poly {
    /// Renders in the ADE input grammar, highest term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&a))?;
            }
        }
        Ok(())
    }
}

pub fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}
