//! F4-style basis computation: all critical pairs of the lowest sugar are
//! reduced together as rows of one sparse matrix.

use num_traits::{One, Zero};
use rustc_hash::{FxHashMap, FxHashSet};

use super::groebner::{interreduce, push_poly, Basis, GbStats, Pair};
use crate::field::FiniteField;
use crate::poly::{MPoly, Monomial};

type Row<F> = Vec<(u32, F)>;

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by
/// increasing leading monomial, all elements monic. Same output as
/// [`super::buchberger`].
pub fn f4<F: FiniteField>(gens: &[MPoly<F>]) -> (Vec<MPoly<F>>, GbStats) {
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
    input.dedup();
    let mut b = Basis::new();
    let mut pairs: Vec<Pair> = Vec::new();

    // the generators enter through the same linear algebra, lowest degree first
    let mut pending: Vec<(MPoly<F>, u32)> = input
        .into_iter()
        .map(|g| {
            let d = g.total_degree().unwrap();
            (g, d)
        })
        .collect();
    pending.sort_by_key(|(_, d)| std::cmp::Reverse(*d));

    loop {
        let d_pairs = pairs.iter().map(|p| p.sugar).min();
        let d_gens = pending.last().map(|(_, d)| *d);
        let d = match (d_pairs, d_gens) {
            (None, None) => break,
            (Some(a), None) => a,
            (None, Some(c)) => c,
            (Some(a), Some(c)) => a.min(c),
        };
        let mut rows: Vec<(Monomial, usize)> = Vec::new();
        let mut extra: Vec<MPoly<F>> = Vec::new();
        while pending.last().is_some_and(|(_, dd)| *dd == d) {
            extra.push(pending.pop().unwrap().0);
        }
        let mut k = 0;
        while k < pairs.len() {
            if pairs[k].sugar == d {
                let p = pairs.swap_remove(k);
                stats.pairs_reduced += 1;
                rows.push((p.lcm.div_exact(b.lms[p.i]), p.i));
                rows.push((p.lcm.div_exact(b.lms[p.j]), p.j));
            } else {
                k += 1;
            }
        }
        rows.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
        rows.dedup();
        let new = reduce_step(&b, &rows, &extra);
        let produced = new.len() as u64;
        let selected = (rows.len() / 2 + extra.len()) as u64;
        stats.zero_reductions += selected.saturating_sub(produced);
        let mut new = new;
        new.sort_by_key(|p| std::cmp::Reverse(p.leading_monomial()));
        for h in new {
            if h.is_constant() {
                stats.unit_found = true;
                return (unit(), stats);
            }
            push_poly(&mut b, &mut pairs, h, d, &mut stats);
        }
    }
    (interreduce(b), stats)
}

/// Symbolic preprocessing, elimination, and extraction of the rows whose
/// leading monomials are new.
fn reduce_step<F: FiniteField>(
    b: &Basis<F>,
    selected: &[(Monomial, usize)],
    extra: &[MPoly<F>],
) -> Vec<MPoly<F>> {
    // the rows to be reduced, as (multiplier, basis index) or free polys
    let mut todo_polys: Vec<MPoly<F>> = selected
        .iter()
        .map(|(t, i)| b.polys[*i].mul_term(*t, &F::one()))
        .collect();
    todo_polys.extend(extra.iter().cloned());
    let mut monos: FxHashSet<Monomial> = FxHashSet::default();
    let mut queue: Vec<Monomial> = Vec::new();
    let mut done: FxHashSet<Monomial> = FxHashSet::default();
    for p in &todo_polys {
        for (m, _) in p.terms() {
            if monos.insert(*m) {
                queue.push(*m);
            }
        }
    }
    // leading monomials of selected rows still get a reducer, so that
    // distinct pairs with equal lcm cancel against a basis row
    let mut reducers: Vec<MPoly<F>> = Vec::new();
    while let Some(m) = queue.pop() {
        if !done.insert(m) {
            continue;
        }
        if let Some(k) = b.find_reducer(m, None) {
            let t = m.div_exact(b.lms[k]);
            let r = b.polys[k].mul_term(t, &F::one());
            for (mm, _) in &r.terms()[1..] {
                if monos.insert(*mm) {
                    queue.push(*mm);
                }
            }
            reducers.push(r);
        }
    }
    let mut cols: Vec<Monomial> = monos.into_iter().collect();
    cols.sort_unstable_by(|a, b| b.cmp(a));
    let index: FxHashMap<Monomial, u32> = cols
        .iter()
        .enumerate()
        .map(|(i, m)| (*m, i as u32))
        .collect();
    let to_row =
        |p: &MPoly<F>| -> Row<F> { p.terms().iter().map(|(m, c)| (index[m], *c)).collect() };

    let ncols = cols.len();
    let mut pivot: Vec<Option<u32>> = vec![None; ncols];
    let mut pivots: Vec<Row<F>> = Vec::with_capacity(reducers.len() + todo_polys.len());
    for r in &reducers {
        let row = to_row(r);
        let lead = row[0].0 as usize;
        if pivot[lead].is_none() {
            pivot[lead] = Some(pivots.len() as u32);
            pivots.push(row);
        }
    }
    let mut todo: Vec<Row<F>> = todo_polys.iter().map(to_row).collect();
    // sparser rows first keeps fill-in down
    todo.sort_by_key(|r| (r[0].0, r.len()));
    let mut acc = vec![F::zero(); ncols];
    let mut out = Vec::new();
    for row in todo {
        let start = row[0].0 as usize;
        for (c, v) in &row {
            acc[*c as usize] = *v;
        }
        let mut first: Option<usize> = None;
        for c in start..ncols {
            let v = acc[c];
            if v.is_zero() {
                continue;
            }
            match pivot[c] {
                Some(pi) => {
                    for (cc, vv) in &pivots[pi as usize] {
                        acc[*cc as usize] -= v * *vv;
                    }
                }
                None => {
                    if first.is_none() {
                        first = Some(c);
                    }
                }
            }
        }
        let Some(lead) = first else { continue };
        let inv = acc[lead].inv().expect("nonzero pivot");
        let mut r: Row<F> = Vec::new();
        for (c, slot) in acc.iter_mut().enumerate().skip(lead) {
            if !slot.is_zero() {
                r.push((c as u32, *slot * inv));
                *slot = F::zero();
            }
        }
        pivot[lead] = Some(pivots.len() as u32);
        pivots.push(r.clone());
        out.push(MPoly::from_sorted_unchecked(
            r.into_iter().map(|(c, v)| (cols[c as usize], v)).collect(),
        ));
    }
    out
}
