//! Polynomial systems over finite fields: Gröbner bases, ideal triviality,
//! rational points, and an exhaustive-search backend.

mod f4;
mod groebner;

pub use f4::f4;
pub use groebner::{buchberger, reduce_by, GbStats};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::FiniteField;
use crate::poly::{MPoly, Monomial, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("search space of {size} points exceeds the budget of {budget}")]
    Budget { size: u128, budget: u128 },
    #[error("mask has {zeros} pinned positions but {given} values were supplied")]
    MaskMismatch { zeros: usize, given: usize },
    #[error("generator uses variable index {0} outside the ring")]
    VariableOutOfRange(usize),
}

/// Generators in a named ring; the ring's variable order is the grevlex
/// precedence used for every basis computation on the system.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem<F> {
    pub ring: PolyRing,
    pub gens: Vec<MPoly<F>>,
}

impl<F: FiniteField> PolySystem<F> {
    pub fn new(ring: PolyRing, gens: Vec<MPoly<F>>) -> Result<Self, SolverError> {
        for g in &gens {
            let used = g.num_vars_used();
            if used > ring.nvars() {
                return Err(SolverError::VariableOutOfRange(used - 1));
            }
        }
        Ok(PolySystem { ring, gens })
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }
}

/// A Gröbner basis together with the ring it lives in.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis<F> {
    pub ring: PolyRing,
    pub basis: Vec<MPoly<F>>,
    pub reduced: bool,
}

impl<F: FiniteField> GroebnerBasis<F> {
    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant() && !self.basis[0].is_zero()
    }
}

pub fn groebner<F: FiniteField>(sys: &PolySystem<F>) -> GroebnerBasis<F> {
    groebner_with_stats(sys).0
}

pub fn groebner_with_stats<F: FiniteField>(sys: &PolySystem<F>) -> (GroebnerBasis<F>, GbStats) {
    let (basis, stats) = f4(&sys.gens);
    (
        GroebnerBasis {
            ring: sys.ring.clone(),
            basis,
            reduced: true,
        },
        stats,
    )
}

pub fn normal_form<F: FiniteField>(f: &MPoly<F>, gb: &GroebnerBasis<F>) -> MPoly<F> {
    reduce_by(f, &gb.basis)
}

/// Whether the system has no zero over the algebraic closure, i.e. its
/// reduced Gröbner basis is `{1}`.
pub fn is_inconsistent<F: FiniteField>(sys: &PolySystem<F>) -> bool {
    groebner(sys).is_unit()
}

/// `X^q - X` for each listed variable and `X^(q-1) - 1` for each unit
/// variable.
pub fn field_equations<F: FiniteField>(free: &[usize], units: &[usize]) -> Vec<MPoly<F>> {
    let q = F::ORDER;
    let mut out = Vec::new();
    for &v in free {
        let x = Monomial::from_exps(&exps_single(v, q));
        out.push(&MPoly::term(x, F::one()) - &MPoly::var(v));
    }
    for &v in units {
        let x = Monomial::from_exps(&exps_single(v, q - 1));
        out.push(&MPoly::term(x, F::one()) - &MPoly::one());
    }
    out
}

fn exps_single(v: usize, e: u32) -> Vec<u32> {
    let mut x = vec![0; v + 1];
    x[v] = e;
    x
}

/// All `F_q`-rational solutions, sorted lexicographically by element index.
pub fn variety_over_fq<F: FiniteField>(sys: &PolySystem<F>) -> Vec<Vec<F>> {
    let n = sys.nvars();
    let mut gens = sys.gens.clone();
    gens.extend(field_equations::<F>(&(0..n).collect::<Vec<_>>(), &[]));
    let (gb, _) = f4(&gens);
    let mut out = Vec::new();
    let mut point = vec![F::zero(); n];
    let mut fixed = vec![false; n];
    extract(&gb, &mut point, &mut fixed, &mut out, usize::MAX);
    out.sort_by(|a, b| cmp_points(a, b));
    out
}

/// Some `F_q`-rational zero of an ideal, given a Gröbner basis that
/// already contains the field equations of all `n` variables.
pub fn first_point<F: FiniteField>(gb: &[MPoly<F>], n: usize) -> Option<Vec<F>> {
    let mut out = Vec::new();
    let mut point = vec![F::zero(); n];
    let mut fixed = vec![false; n];
    extract(gb, &mut point, &mut fixed, &mut out, 1);
    out.pop()
}

fn cmp_points<F: FiniteField>(a: &[F], b: &[F]) -> std::cmp::Ordering {
    a.iter().map(|x| x.index()).cmp(b.iter().map(|x| x.index()))
}

/// Recursive elimination on a Gröbner basis that contains the field
/// equations: pick a variable, try only values allowed by univariate basis
/// elements, substitute and recompute.
fn extract<F: FiniteField>(
    gb: &[MPoly<F>],
    point: &mut Vec<F>,
    fixed: &mut Vec<bool>,
    out: &mut Vec<Vec<F>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if gb.len() == 1 && gb[0].is_constant() && !gb[0].is_zero() {
        return;
    }
    let Some(v) = (0..point.len()).rev().find(|&i| !fixed[i]) else {
        if gb.iter().all(|g| g.is_zero()) {
            out.push(point.clone());
        }
        return;
    };
    // linear basis elements x_v - c pin the value directly
    let univariate: Vec<&MPoly<F>> = gb
        .iter()
        .filter(|g| g.terms().iter().all(|(m, _)| m.without_var(v).is_one()))
        .collect();
    let candidates: Vec<F> = F::elements()
        .into_iter()
        .filter(|c| {
            univariate
                .iter()
                .all(|g| g.specialize(&[(v, *c)]).is_zero())
        })
        .collect();
    for c in candidates {
        let sub: Vec<MPoly<F>> = gb.iter().map(|g| g.specialize(&[(v, c)])).collect();
        let (next, _) = f4(&sub);
        if next.len() == 1 && next[0].is_constant() {
            continue;
        }
        point[v] = c;
        fixed[v] = true;
        extract(&next, point, fixed, out, limit);
        if out.len() >= limit {
            return;
        }
        fixed[v] = false;
    }
}

/// Solutions with the variables at mask-0 positions pinned to `tuple` (in
/// order), reassembled into full tuples.
pub fn restricted_variety<F: FiniteField>(
    sys: &PolySystem<F>,
    mask: &[bool],
    tuple: &[F],
) -> Result<Vec<Vec<F>>, SolverError> {
    let n = sys.nvars();
    assert_eq!(
        mask.len(),
        n,
        "mask length must match the number of variables"
    );
    let zeros = mask.iter().filter(|m| !**m).count();
    if zeros != tuple.len() {
        return Err(SolverError::MaskMismatch {
            zeros,
            given: tuple.len(),
        });
    }
    let pinned: Vec<usize> = (0..n).filter(|&i| !mask[i]).collect();
    let free: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
    let asg: Vec<(usize, F)> = pinned.iter().copied().zip(tuple.iter().copied()).collect();
    // renumber the free variables to 0..k, keeping their relative order
    let mut perm = vec![0; n];
    for (k, &i) in free.iter().enumerate() {
        perm[i] = k;
    }
    for (k, &i) in pinned.iter().enumerate() {
        perm[i] = free.len() + k;
    }
    let gens: Vec<MPoly<F>> = sys
        .gens
        .iter()
        .map(|g| g.specialize(&asg).permute_vars(&perm))
        .collect();
    let names: Vec<&str> = free.iter().map(|&i| sys.ring.names()[i].as_str()).collect();
    let sub = PolySystem {
        ring: PolyRing::new(&names),
        gens,
    };
    let sols = variety_over_fq(&sub);
    Ok(sols
        .into_iter()
        .map(|s| {
            let mut full = vec![F::zero(); n];
            for (k, &i) in free.iter().enumerate() {
                full[i] = s[k];
            }
            for (k, &i) in pinned.iter().enumerate() {
                full[i] = tuple[k];
            }
            full
        })
        .collect())
}

/// Exhaustive search over `F_q^n`, substituting one variable per level and
/// abandoning a branch as soon as some generator becomes a nonzero constant.
pub fn brute_force_variety<F: FiniteField>(
    sys: &PolySystem<F>,
    budget: u128,
) -> Result<Vec<Vec<F>>, SolverError> {
    let n = sys.nvars();
    let size = (F::ORDER as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if size > budget {
        return Err(SolverError::Budget { size, budget });
    }
    let max_exp = sys
        .gens
        .iter()
        .flat_map(|g| {
            g.terms()
                .iter()
                .map(|(m, _)| (0..n).map(|i| m.exp(i)).max().unwrap_or(0))
        })
        .max()
        .unwrap_or(0) as usize;
    let elems = F::elements();
    let powers: Vec<Vec<F>> = elems
        .iter()
        .map(|c| {
            let mut v = vec![F::one(); max_exp + 1];
            for e in 1..=max_exp {
                v[e] = v[e - 1] * *c;
            }
            v
        })
        .collect();
    let mut start = Vec::new();
    for g in &sys.gens {
        if g.is_zero() {
            continue;
        }
        if g.is_constant() {
            return Ok(Vec::new());
        }
        let mut t: Vec<(Monomial, F)> = g.terms().to_vec();
        t.sort_by_key(|(m, _)| m.exp_bits());
        start.push(t);
    }
    let mut out = Vec::new();
    let mut point = Vec::with_capacity(n);
    brute_rec(0, n, &start, &elems, &powers, &mut point, &mut out);
    Ok(out)
}

fn brute_rec<F: FiniteField>(
    depth: usize,
    n: usize,
    polys: &[Vec<(Monomial, F)>],
    elems: &[F],
    powers: &[Vec<F>],
    point: &mut Vec<F>,
    out: &mut Vec<Vec<F>>,
) {
    if depth == n {
        out.push(point.clone());
        return;
    }
    'values: for (ci, c) in elems.iter().enumerate() {
        let pw = &powers[ci];
        let mut next = Vec::with_capacity(polys.len());
        for p in polys {
            let s = substitute_sorted(p, depth, pw);
            if s.is_empty() {
                continue;
            }
            if s.len() == 1 && s[0].0.is_one() {
                continue 'values;
            }
            next.push(s);
        }
        point.push(*c);
        brute_rec(depth + 1, n, &next, elems, powers, point, out);
        point.pop();
    }
}

/// Substitutes variable `v` in terms sorted by packed exponents, where `v`
/// is the least significant remaining variable, so equal remainders are
/// adjacent and stay sorted.
fn substitute_sorted<F: FiniteField>(
    p: &[(Monomial, F)],
    v: usize,
    pw: &[F],
) -> Vec<(Monomial, F)> {
    let mut out: Vec<(Monomial, F)> = Vec::with_capacity(p.len());
    for (m, c) in p {
        let e = m.exp(v) as usize;
        let val = *c * pw[e];
        let rest = if e == 0 { *m } else { m.without_var(v) };
        match out.last_mut() {
            Some((lm, lc)) if *lm == rest => *lc += val,
            _ => out.push((rest, val)),
        }
    }
    out.retain(|(_, c)| !c.is_zero());
    out
}

#[cfg(test)]
mod tests;
