//! Dense-exponent Buchberger kernel.
//!
//! A monomial is a `Box<[u16]>` laid out as `[key | exponents]`. The key
//! is chosen so that comparing keys as slices is the block-degrevlex
//! order: per block, the block degree followed by the complemented
//! exponents from the lowest variable upwards (the block's first variable
//! is implied by the degree). Coefficients are integers; polynomials are
//! kept primitive.

use std::cmp::Ordering;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Budget;
use crate::error::{Error, Result, Stats};

pub type Mono = Box<[u16]>;
pub type Term = (Mono, BigInt);

#[derive(Clone, Debug)]
pub struct Ring {
    pub nv: usize,
    /// Half-open variable ranges, highest block first.
    pub blocks: Vec<(usize, usize)>,
}

impl Ring {
    pub fn new(block_sizes: &[usize]) -> Ring {
        let mut blocks = Vec::new();
        let mut s = 0;
        for &n in block_sizes {
            if n > 0 {
                blocks.push((s, s + n));
            }
            s += n;
        }
        Ring { nv: s, blocks }
    }

    pub fn mono(&self, exps: &[u16]) -> Mono {
        let mut out = vec![0u16; 2 * self.nv].into_boxed_slice();
        self.fill_key(exps, &mut out);
        out[self.nv..].copy_from_slice(exps);
        out
    }

    fn fill_key(&self, exps: &[u16], out: &mut [u16]) {
        for &(s, e) in &self.blocks {
            out[s] = exps[s..e].iter().sum();
            for (k, i) in (s + 1..e).rev().enumerate() {
                out[s + 1 + k] = u16::MAX - exps[i];
            }
        }
    }

    #[inline]
    pub fn exps<'a>(&self, m: &'a [u16]) -> &'a [u16] {
        &m[self.nv..]
    }

    #[inline]
    pub fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        a[..self.nv].cmp(&b[..self.nv])
    }

    pub fn mul(&self, a: &[u16], b: &[u16]) -> Mono {
        let e: Vec<u16> = self.exps(a).iter().zip(self.exps(b)).map(|(x, y)| x + y).collect();
        self.mono(&e)
    }

    #[inline]
    pub fn divides(&self, a: &[u16], b: &[u16]) -> bool {
        self.exps(a).iter().zip(self.exps(b)).all(|(x, y)| x <= y)
    }

    /// `b / a`, assuming `a | b`.
    pub fn quo(&self, b: &[u16], a: &[u16]) -> Mono {
        let e: Vec<u16> = self.exps(b).iter().zip(self.exps(a)).map(|(x, y)| x - y).collect();
        self.mono(&e)
    }

    pub fn lcm(&self, a: &[u16], b: &[u16]) -> Mono {
        let e: Vec<u16> = self.exps(a).iter().zip(self.exps(b)).map(|(x, y)| *x.max(y)).collect();
        self.mono(&e)
    }

    pub fn disjoint(&self, a: &[u16], b: &[u16]) -> bool {
        self.exps(a).iter().zip(self.exps(b)).all(|(x, y)| *x == 0 || *y == 0)
    }

    pub fn mask(&self, m: &[u16]) -> u64 {
        let mut mask = 0u64;
        for (i, e) in self.exps(m).iter().enumerate() {
            if *e > 0 {
                mask |= 1 << (i % 64);
            }
        }
        mask
    }

    pub fn deg(&self, m: &[u16]) -> u32 {
        self.exps(m).iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self, m: &[u16]) -> bool {
        self.exps(m).iter().all(|&e| e == 0)
    }

    /// `a·f − b·m·g`, both operands sorted descending.
    pub fn sub_mul(&self, a: &BigInt, f: &[Term], b: &BigInt, m: &[u16], g: &[Term]) -> Vec<Term> {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let mut gi = g.iter().map(|(gm, gc)| (self.mul(gm, m), gc));
        let mut next_g = gi.next();
        let mut fi = f.iter();
        let mut next_f = fi.next();
        loop {
            match (next_f, &next_g) {
                (None, None) => break,
                (Some((fm, fc)), None) => {
                    out.push((fm.clone(), a * fc));
                    next_f = fi.next();
                }
                (None, Some((gm, gc))) => {
                    out.push((gm.clone(), -(b * *gc)));
                    next_g = gi.next();
                }
                (Some((fm, fc)), Some((gm, gc))) => match self.cmp(fm, gm) {
                    Ordering::Greater => {
                        out.push((fm.clone(), a * fc));
                        next_f = fi.next();
                    }
                    Ordering::Less => {
                        out.push((gm.clone(), -(b * *gc)));
                        next_g = gi.next();
                    }
                    Ordering::Equal => {
                        let c = a * fc - b * *gc;
                        if !c.is_zero() {
                            out.push((fm.clone(), c));
                        }
                        next_f = fi.next();
                        next_g = gi.next();
                    }
                },
            }
        }
        out
    }
}

pub fn content(ts: &[Term]) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in ts {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divides out the content and makes the leading coefficient positive.
pub fn make_primitive(ts: &mut [Term]) {
    if ts.is_empty() {
        return;
    }
    let mut g = content(ts);
    if ts[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, c) in ts.iter_mut() {
            *c = &*c / &g;
        }
    }
}

struct Elem {
    poly: Vec<Term>,
    mask: u64,
    sugar: u32,
    active: bool,
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u32,
}

pub struct Engine<'a> {
    pub ring: Ring,
    elems: Vec<Elem>,
    pairs: Vec<Pair>,
    budget: &'a mut Budget,
    started: Instant,
    steps: u64,
}

impl<'a> Engine<'a> {
    pub fn new(ring: Ring, budget: &'a mut Budget) -> Engine<'a> {
        Engine { ring, elems: Vec::new(), pairs: Vec::new(), budget, started: Instant::now(), steps: 0 }
    }

    fn stats(&self) -> Stats {
        Stats {
            elapsed_ms: self.started.elapsed().as_millis(),
            reductions: self.steps,
            pairs_left: self.pairs.len(),
            basis_len: self.elems.iter().filter(|e| e.active).count(),
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget.max_steps || (self.steps.is_multiple_of(64) && self.budget.expired())
        {
            return Err(Error::Timeout(self.stats()));
        }
        Ok(())
    }

    fn find_reducer(&self, m: &[u16], mask: u64) -> Option<usize> {
        self.elems.iter().position(|e| {
            e.active && e.mask & !mask == 0 && self.ring.divides(&e.poly[0].0, m)
        })
    }

    /// Full reduction of `f` by the active elements; result primitive.
    fn reduce(&mut self, f: Vec<Term>) -> Result<Vec<Term>> {
        self.reduce_tracked(f, &mut None)
    }

    /// As [`Engine::reduce`]; when `scale` is set it accumulates the
    /// factor `s` with `s·f ≡ result`.
    fn reduce_tracked(&mut self, f: Vec<Term>, scale: &mut Option<BigRational>) -> Result<Vec<Term>> {
        let mut rest = f;
        let mut start = 0;
        let mut done: Vec<Term> = Vec::new();
        let mut since_content = 0;
        while start < rest.len() {
            let mask = self.ring.mask(&rest[start].0);
            match self.find_reducer(&rest[start].0, mask) {
                None => {
                    done.push(std::mem::replace(&mut rest[start], (Box::new([]), BigInt::zero())));
                    start += 1;
                }
                Some(k) => {
                    self.tick()?;
                    let g = &self.elems[k].poly;
                    let (lm, c) = (&rest[start].0, &rest[start].1);
                    let lc = &g[0].1;
                    let d = c.gcd(lc);
                    let a = lc / &d;
                    let b = c / &d;
                    let m = self.ring.quo(lm, &g[0].0);
                    rest = self.ring.sub_mul(&a, &rest[start..], &b, &m, g);
                    start = 0;
                    if !a.is_one() {
                        for (_, dc) in done.iter_mut() {
                            *dc *= &a;
                        }
                        if let Some(s) = scale.as_mut() {
                            *s *= BigRational::from_integer(a.clone());
                        }
                    }
                    since_content += 1;
                    if since_content >= 8 {
                        since_content = 0;
                        let g = content(&rest).gcd(&content(&done));
                        if !g.is_one() && !g.is_zero() {
                            for (_, c) in rest.iter_mut().chain(done.iter_mut()) {
                                *c = &*c / &g;
                            }
                            if let Some(s) = scale.as_mut() {
                                *s /= BigRational::from_integer(g);
                            }
                        }
                    }
                }
            }
        }
        if !done.is_empty() {
            let mut g = content(&done);
            if done[0].1.is_negative() {
                g = -g;
            }
            for (_, c) in done.iter_mut() {
                *c = &*c / &g;
            }
            if let Some(s) = scale.as_mut() {
                *s /= BigRational::from_integer(g);
            }
        }
        Ok(done)
    }

    fn spoly(&self, p: &Pair) -> Vec<Term> {
        let f = &self.elems[p.i].poly;
        let g = &self.elems[p.j].poly;
        let d = f[0].1.gcd(&g[0].1);
        let a = &g[0].1 / &d;
        let b = &f[0].1 / &d;
        let mf = self.ring.quo(&p.lcm, &f[0].0);
        let mg = self.ring.quo(&p.lcm, &g[0].0);
        let lhs: Vec<Term> = f[1..].iter().map(|(m, c)| (self.ring.mul(m, &mf), c.clone())).collect();
        self.ring.sub_mul(&a, &lhs, &b, &mg, &g[1..])
    }

    /// Gebauer–Möller update with the new element `h`.
    fn update(&mut self, h: usize) {
        let lh = self.elems[h].poly[0].0.clone();
        let sh = self.elems[h].sugar;
        let dh = self.ring.deg(&lh);
        let mut cand: Vec<Pair> = Vec::new();
        for (g, e) in self.elems.iter().enumerate() {
            if !e.active || g == h {
                continue;
            }
            let lg = &e.poly[0].0;
            let lcm = self.ring.lcm(&lh, lg);
            let dl = self.ring.deg(&lcm);
            let sugar = (sh + dl - dh).max(e.sugar + dl - self.ring.deg(lg));
            cand.push(Pair { i: g, j: h, lcm, sugar });
        }
        let disjoint: Vec<bool> =
            cand.iter().map(|p| self.ring.disjoint(&lh, &self.elems[p.i].poly[0].0)).collect();
        // chain criterion among the new pairs
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            if disjoint[a] {
                continue;
            }
            for b in 0..cand.len() {
                if a == b || !keep[b] {
                    continue;
                }
                if self.ring.divides(&cand[b].lcm, &cand[a].lcm) {
                    let equal = self.ring.cmp(&cand[b].lcm, &cand[a].lcm) == Ordering::Equal;
                    if !equal || b < a {
                        keep[a] = false;
                        break;
                    }
                }
            }
        }
        // product criterion: drop coprime pairs (and any pair sharing
        // their lcm, already handled above)
        let mut fresh: Vec<Pair> = Vec::new();
        for (k, p) in cand.into_iter().enumerate() {
            if keep[k] && !disjoint[k] {
                fresh.push(p);
            }
        }
        // old pairs made redundant by h
        let ring = &self.ring;
        let elems = &self.elems;
        self.pairs.retain(|p| {
            if !ring.divides(&lh, &p.lcm) {
                return true;
            }
            let li = ring.lcm(&elems[p.i].poly[0].0, &lh);
            let lj = ring.lcm(&elems[p.j].poly[0].0, &lh);
            ring.cmp(&li, &p.lcm) == Ordering::Equal || ring.cmp(&lj, &p.lcm) == Ordering::Equal
        });
        self.pairs.extend(fresh);
        for (g, e) in self.elems.iter_mut().enumerate() {
            if g != h && e.active && self.ring.divides(&lh, &e.poly[0].0) {
                e.active = false;
            }
        }
    }

    fn push(&mut self, poly: Vec<Term>, sugar: u32) {
        let mask = self.ring.mask(&poly[0].0);
        self.elems.push(Elem { poly, mask, sugar, active: true });
        let h = self.elems.len() - 1;
        self.update(h);
    }

    fn next_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (p, q) = (&self.pairs[k], &self.pairs[best]);
            let better = match p.sugar.cmp(&q.sugar) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => self.ring.cmp(&p.lcm, &q.lcm) == Ordering::Less,
            };
            if better {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    /// Reduced Gröbner basis of `gens`, sorted by ascending leading monomial.
    pub fn run(mut self, mut gens: Vec<Vec<Term>>) -> Result<Vec<Vec<Term>>> {
        gens.retain(|g| !g.is_empty());
        gens.sort_by(|a, b| self.ring.cmp(&a[0].0, &b[0].0).then(a.len().cmp(&b.len())));
        for g in gens {
            let sugar = g.iter().map(|(m, _)| self.ring.deg(m)).max().unwrap_or(0);
            let h = self.reduce(g)?;
            if h.is_empty() {
                continue;
            }
            if self.ring.is_one(&h[0].0) {
                return Ok(vec![h]);
            }
            self.push(h, sugar);
        }
        while let Some(p) = self.next_pair() {
            let s = self.spoly(&p);
            let h = self.reduce(s)?;
            if h.is_empty() {
                continue;
            }
            if self.ring.is_one(&h[0].0) {
                return Ok(vec![h]);
            }
            self.push(h, p.sugar);
        }
        self.interreduce()
    }

    fn interreduce(mut self) -> Result<Vec<Vec<Term>>> {
        let mut idx: Vec<usize> = (0..self.elems.len()).filter(|&k| self.elems[k].active).collect();
        idx.sort_by(|&a, &b| self.ring.cmp(&self.elems[a].poly[0].0, &self.elems[b].poly[0].0));
        // minimal basis: leading monomials pairwise non-dividing
        let mut minimal: Vec<usize> = Vec::new();
        for &k in &idx {
            let lk = &self.elems[k].poly[0].0;
            if !minimal.iter().any(|&m| self.ring.divides(&self.elems[m].poly[0].0, lk)) {
                minimal.push(k);
            }
        }
        for e in self.elems.iter_mut() {
            e.active = false;
        }
        let mut out = Vec::with_capacity(minimal.len());
        for &k in &minimal {
            // reduce the tail of k by all other minimal elements
            for &m in &minimal {
                self.elems[m].active = m != k;
            }
            let poly = std::mem::take(&mut self.elems[k].poly);
            let full = self.reduce_tail(poly)?;
            self.elems[k].poly = full.clone();
            out.push(full);
        }
        Ok(out)
    }

    /// Reduces every non-leading term of `orig` by the other active elements,
    /// keeping the leading term; result primitive.
    fn reduce_tail(&mut self, orig: Vec<Term>) -> Result<Vec<Term>> {
        let mut rest = orig;
        let mut done: Vec<Term> = vec![rest[0].clone()];
        let mut start = 1;
        while start < rest.len() {
            let mask = self.ring.mask(&rest[start].0);
            match self.find_reducer(&rest[start].0, mask) {
                None => {
                    done.push(rest[start].clone());
                    start += 1;
                }
                Some(r) => {
                    self.tick()?;
                    let g = &self.elems[r].poly;
                    let c = &rest[start].1;
                    let lc = &g[0].1;
                    let d = c.gcd(lc);
                    let a = lc / &d;
                    let b = c / &d;
                    let m = self.ring.quo(&rest[start].0, &g[0].0);
                    rest = self.ring.sub_mul(&a, &rest[start..], &b, &m, g);
                    start = 0;
                    if !a.is_one() {
                        for (_, dc) in done.iter_mut() {
                            *dc *= &a;
                        }
                    }
                }
            }
        }
        make_primitive(&mut done);
        Ok(done)
    }
}

/// Normal form of `f` modulo `basis`: returns `(r, s)` with `s·f ≡ r`.
pub fn normal_form(
    ring: &Ring,
    f: Vec<Term>,
    basis: &[Vec<Term>],
    budget: &mut Budget,
) -> Result<(Vec<Term>, BigRational)> {
    let mut eng = Engine::new(ring.clone(), budget);
    for b in basis {
        if !b.is_empty() {
            let mask = eng.ring.mask(&b[0].0);
            eng.elems.push(Elem { poly: b.clone(), mask, sugar: 0, active: true });
        }
    }
    let mut scale = Some(BigRational::one());
    let r = eng.reduce_tracked(f, &mut scale)?;
    Ok((r, scale.unwrap()))
}
