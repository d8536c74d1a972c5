//! Buchberger's algorithm with Gebauer–Möller pair pruning and the sugar
//! selection strategy. Leading terms are taken in grevlex, with variable 0
//! the greatest.

use std::collections::BinaryHeap;

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::field::FiniteField;
use crate::poly::{MPoly, Monomial};

/// Counters describing one Gröbner basis computation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GbStats {
    pub pairs_reduced: u64,
    pub zero_reductions: u64,
    pub pairs_pruned: u64,
    pub max_basis: usize,
    pub unit_found: bool,
}

pub(super) struct Pair {
    pub(super) i: usize,
    pub(super) j: usize,
    pub(super) lcm: Monomial,
    pub(super) sugar: u32,
}

/// Working state shared by the reduction routines.
pub(super) struct Basis<F> {
    pub(super) polys: Vec<MPoly<F>>,
    pub(super) lms: Vec<Monomial>,
    pub(super) sugar: Vec<u32>,
    pub(super) active: Vec<bool>,
}

/// Heap-plus-map accumulator for a polynomial under repeated
/// `f -= c * t * g` updates, yielding terms in decreasing order.
struct Accum<F> {
    map: FxHashMap<Monomial, F>,
    heap: BinaryHeap<Monomial>,
}

impl<F: FiniteField> Accum<F> {
    fn new(f: &MPoly<F>) -> Self {
        let mut map = FxHashMap::default();
        map.reserve(f.len() * 2);
        let mut heap = BinaryHeap::with_capacity(f.len() * 2);
        for (m, c) in f.terms() {
            map.insert(*m, *c);
            heap.push(*m);
        }
        Accum { map, heap }
    }

    /// Adds `c * t * g` over the tail of `g` (its leading term cancels).
    fn add_tail(&mut self, g: &MPoly<F>, t: Monomial, c: F) {
        for (m, d) in &g.terms()[1..] {
            let mm = m.mul(t);
            match self.map.get_mut(&mm) {
                Some(e) => {
                    *e += c * *d;
                }
                None => {
                    self.map.insert(mm, c * *d);
                    self.heap.push(mm);
                }
            }
        }
    }

    fn pop_max(&mut self) -> Option<(Monomial, F)> {
        while let Some(m) = self.heap.pop() {
            if let Some(c) = self.map.remove(&m) {
                if !c.is_zero() {
                    return Some((m, c));
                }
            }
        }
        None
    }
}

impl<F: FiniteField> Basis<F> {
    pub(super) fn new() -> Self {
        Basis {
            polys: Vec::new(),
            lms: Vec::new(),
            sugar: Vec::new(),
            active: Vec::new(),
        }
    }

    pub(super) fn find_reducer(&self, m: Monomial, skip: Option<usize>) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (k, lm) in self.lms.iter().enumerate() {
            if !self.active[k] || Some(k) == skip || !lm.divides(m) {
                continue;
            }
            if best.is_none_or(|b| self.polys[k].len() < self.polys[b].len()) {
                best = Some(k);
            }
        }
        best
    }

    /// Full reduction of `f` (monic output) with sugar tracking.
    pub(super) fn reduce(
        &self,
        f: &MPoly<F>,
        mut sugar: u32,
        skip: Option<usize>,
    ) -> (MPoly<F>, u32) {
        let mut acc = Accum::new(f);
        let mut out: Vec<(Monomial, F)> = Vec::new();
        while let Some((m, c)) = acc.pop_max() {
            match self.find_reducer(m, skip) {
                Some(k) => {
                    let g = &self.polys[k];
                    let t = m.div_exact(self.lms[k]);
                    sugar = sugar.max(t.degree() + self.sugar[k]);
                    acc.add_tail(g, t, -c);
                }
                None => out.push((m, c)),
            }
        }
        let p = MPoly::from_sorted_unchecked(out);
        (p.monic(), sugar)
    }
}

fn spoly<F: FiniteField>(b: &Basis<F>, pair: &Pair) -> MPoly<F> {
    let (f, g) = (&b.polys[pair.i], &b.polys[pair.j]);
    let tf = pair.lcm.div_exact(b.lms[pair.i]);
    let tg = pair.lcm.div_exact(b.lms[pair.j]);
    // both monic: S = tf*f - tg*g, leading terms cancel
    let a = MPoly::from_sorted_unchecked(
        f.terms()[1..]
            .iter()
            .map(|(m, c)| (m.mul(tf), *c))
            .collect(),
    );
    let bb = MPoly::from_sorted_unchecked(
        g.terms()[1..]
            .iter()
            .map(|(m, c)| (m.mul(tg), *c))
            .collect(),
    );
    &a - &bb
}

/// Gebauer–Möller update after appending basis element `h`.
fn update<F: FiniteField>(b: &mut Basis<F>, pairs: &mut Vec<Pair>, h: usize, stats: &mut GbStats) {
    let lh = b.lms[h];
    let cand: Vec<(usize, Monomial)> = (0..h)
        .filter(|&g| b.active[g])
        .map(|g| (g, lh.lcm(b.lms[g])))
        .collect();
    let mut kept: Vec<(usize, Monomial)> = Vec::new();
    for (idx, &(g1, l1)) in cand.iter().enumerate() {
        let coprime = lh.coprime(b.lms[g1]);
        let dominated = cand[idx + 1..].iter().any(|(_, l2)| l2.divides(l1))
            || kept.iter().any(|(_, l2)| l2.divides(l1));
        if coprime || !dominated {
            kept.push((g1, l1));
        } else {
            stats.pairs_pruned += 1;
        }
    }
    let before = pairs.len();
    pairs.retain(|p| {
        !(lh.divides(p.lcm) && lh.lcm(b.lms[p.i]) != p.lcm && lh.lcm(b.lms[p.j]) != p.lcm)
    });
    stats.pairs_pruned += (before - pairs.len()) as u64;
    for (g, l) in kept {
        if lh.coprime(b.lms[g]) {
            stats.pairs_pruned += 1;
            continue;
        }
        let sugar = (b.sugar[g] + l.degree() - b.lms[g].degree())
            .max(b.sugar[h] + l.degree() - lh.degree());
        pairs.push(Pair {
            i: g,
            j: h,
            lcm: l,
            sugar,
        });
    }
    for g in 0..h {
        if b.active[g] && lh.divides(b.lms[g]) {
            b.active[g] = false;
        }
    }
}

pub(super) fn push_poly<F: FiniteField>(
    b: &mut Basis<F>,
    pairs: &mut Vec<Pair>,
    h: MPoly<F>,
    sugar: u32,
    stats: &mut GbStats,
) {
    b.lms.push(h.leading_monomial().unwrap());
    b.polys.push(h);
    b.sugar.push(sugar);
    b.active.push(true);
    let idx = b.polys.len() - 1;
    update(b, pairs, idx, stats);
    stats.max_basis = stats.max_basis.max(b.active.iter().filter(|a| **a).count());
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by
/// increasing leading monomial, all elements monic.
pub fn buchberger<F: FiniteField>(gens: &[MPoly<F>]) -> (Vec<MPoly<F>>, GbStats) {
    let mut stats = GbStats::default();
    let unit = || vec![MPoly::one()];
    let mut input: Vec<MPoly<F>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect();
    if input.iter().any(|g| g.is_constant()) {
        stats.unit_found = true;
        return (unit(), stats);
    }
    input.sort_by(|a, b| {
        a.leading_monomial()
            .cmp(&b.leading_monomial())
            .then(a.len().cmp(&b.len()))
    });
    let mut b = Basis::new();
    let mut pairs: Vec<Pair> = Vec::new();
    for g in input {
        let deg = g.total_degree().unwrap();
        let (h, s) = b.reduce(&g, deg, None);
        if h.is_zero() {
            continue;
        }
        if h.is_constant() {
            stats.unit_found = true;
            return (unit(), stats);
        }
        push_poly(&mut b, &mut pairs, h, s, &mut stats);
    }
    while !pairs.is_empty() {
        let k = (0..pairs.len())
            .min_by(|&x, &y| {
                pairs[x]
                    .sugar
                    .cmp(&pairs[y].sugar)
                    .then(pairs[x].lcm.cmp(&pairs[y].lcm))
            })
            .unwrap();
        let pair = pairs.swap_remove(k);
        stats.pairs_reduced += 1;
        let s = spoly(&b, &pair);
        let (h, sugar) = b.reduce(&s, pair.sugar, None);
        if h.is_zero() {
            stats.zero_reductions += 1;
            continue;
        }
        if h.is_constant() {
            // the ideal is the whole ring; nothing else to compute
            stats.unit_found = true;
            return (unit(), stats);
        }
        push_poly(&mut b, &mut pairs, h, sugar, &mut stats);
    }
    (interreduce(b), stats)
}

/// Inter-reduces the active (minimal) part of a finished basis, smallest
/// leading monomial first, and returns it sorted by leading monomial.
pub(super) fn interreduce<F: FiniteField>(mut b: Basis<F>) -> Vec<MPoly<F>> {
    let mut idx: Vec<usize> = (0..b.polys.len()).filter(|&k| b.active[k]).collect();
    idx.sort_by_key(|&k| b.lms[k]);
    for &k in &idx {
        let (r, _) = b.reduce(&b.polys[k], 0, Some(k));
        debug_assert_eq!(r.leading_monomial(), Some(b.lms[k]));
        b.polys[k] = r;
    }
    idx.into_iter().map(|k| b.polys[k].clone()).collect()
}

/// Remainder of `f` on division by a Gröbner basis (not necessarily monic).
pub fn reduce_by<F: FiniteField>(f: &MPoly<F>, basis: &[MPoly<F>]) -> MPoly<F> {
    if f.is_zero() {
        return MPoly::zero();
    }
    let mut b = Basis::new();
    for g in basis.iter().filter(|g| !g.is_zero()) {
        let g = g.monic();
        b.lms.push(g.leading_monomial().unwrap());
        b.polys.push(g);
        b.sugar.push(0);
        b.active.push(true);
    }
    let mut acc = Accum::new(f);
    let mut out = Vec::new();
    while let Some((m, c)) = acc.pop_max() {
        match b.find_reducer(m, None) {
            Some(k) => {
                let t = m.div_exact(b.lms[k]);
                acc.add_tail(&b.polys[k], t, -c);
            }
            None => out.push((m, c)),
        }
    }
    MPoly::from_sorted_unchecked(out)
}
