//! Superspeciality via the 16 Hasse–Witt coefficients of `(PQ)^(p-1)`.
//!
//! Polynomials live in the curve variables `x, y, z, w` (indices 0..4);
//! symbolic coefficient variables, when present, follow at indices 4.. .

use num_traits::Zero;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::field::FiniteField;
use crate::poly::{MPoly, Monomial};

/// Number of curve variables.
pub const NV: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HwError {
    #[error("expected a cubic form in x, y, z, w")]
    NotCubic,
    #[error("expected a quadratic form in x, y, z, w")]
    NotQuadric,
    #[error("characteristic must be at least 5")]
    SmallCharacteristic,
}

/// The 16 exponent vectors, row by row: row `i` starts with the diagonal
/// pattern (variable `i` at `2p-2`, the rest at `p-1`) and continues with
/// variable `i` at `2p-1` and one other variable at `p-2`.
pub fn hw_monomials(p: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::with_capacity(16);
    for i in 0..4 {
        let mut diag = [p - 1; 4];
        diag[i] = 2 * p - 2;
        out.push(diag);
        for j in (0..4).filter(|&j| j != i) {
            let mut e = [p - 1; 4];
            e[i] = 2 * p - 1;
            e[j] = p - 2;
            out.push(e);
        }
    }
    out
}

fn check_forms<F: FiniteField>(p_flat: &MPoly<F>, q: &MPoly<F>) -> Result<(), HwError> {
    if F::CHARACTERISTIC < 5 {
        return Err(HwError::SmallCharacteristic);
    }
    let curve_deg = |m: &Monomial| m.split_at(NV).0.degree();
    if p_flat.is_empty() || p_flat.terms().iter().any(|(m, _)| curve_deg(m) != 3) {
        return Err(HwError::NotCubic);
    }
    if q.is_empty() || q.num_vars_used() > NV || q.terms().iter().any(|(m, _)| m.degree() != 2) {
        return Err(HwError::NotQuadric);
    }
    Ok(())
}

/// The 16 coefficients of `(PQ)^(p-1)` at [`hw_monomials`], as polynomials
/// in the symbolic variables (shifted down to start at index 0). `p_flat`
/// holds curve variables at 0..4 and symbolic ones from index 4; `q` is
/// numeric.
///
/// Only the coefficients of `P^(p-1)` that can contribute are formed:
/// `coeff_m(h) = sum_u Q^(p-1)[u] * P^(p-1)[m-u]`, and each needed
/// `P^(p-1)[t]` is assembled from the two halves `P^((p-1)/2)`.
pub fn hw_coefficients<F: FiniteField>(
    p_flat: &MPoly<F>,
    q: &MPoly<F>,
) -> Result<Vec<MPoly<F>>, HwError> {
    check_forms(p_flat, q)?;
    let p = F::CHARACTERISTIC;
    let half = p_flat.pow((p - 1) / 2);
    let groups: FxHashMap<Monomial, MPoly<F>> =
        half.split_vars(NV).into_terms().into_iter().collect();
    let keys: Vec<Monomial> = groups.keys().copied().collect();
    let g1 = q.pow(p - 1);
    let mut cache: FxHashMap<Monomial, MPoly<F>> = FxHashMap::default();
    let mut f1_at = |t: Monomial| -> MPoly<F> {
        if let Some(v) = cache.get(&t) {
            return v.clone();
        }
        let mut acc = MPoly::zero();
        for s in &keys {
            let Some(r) = t.checked_div(*s) else { continue };
            // each unordered pair once, doubled when the halves differ
            if r < *s {
                continue;
            }
            let Some(gr) = groups.get(&r) else { continue };
            let prod = &groups[s] * gr;
            acc = if r == *s {
                &acc + &prod
            } else {
                &acc + &prod.scale(F::from_i64(2))
            };
        }
        cache.insert(t, acc.clone());
        acc
    };
    let mut out = Vec::with_capacity(16);
    for e in hw_monomials(p) {
        let m = Monomial::from_exps(&e);
        let mut acc = MPoly::zero();
        for (u, gu) in g1.terms() {
            if let Some(t) = m.checked_div(*u) {
                acc = &acc + &f1_at(t).scale(*gu);
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Drops constant zeros and duplicates (keeping first occurrences).
pub fn clean_system<F: FiniteField>(polys: Vec<MPoly<F>>) -> Vec<MPoly<F>> {
    let mut out: Vec<MPoly<F>> = Vec::new();
    for f in polys {
        if !f.is_zero() && !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// The superspeciality system for a cubic with coefficients in a
/// polynomial ring: the nonzero distinct Hasse–Witt coefficients, as
/// polynomials in the coefficient variables.
pub fn superspecial_system<F: FiniteField>(
    p: &MPoly<MPoly<F>>,
    q: &MPoly<F>,
) -> Result<Vec<MPoly<F>>, HwError> {
    Ok(clean_system(hw_coefficients(&p.flatten(NV), q)?))
}

/// Whether the numeric curve `V(P, Q)` is superspecial (smoothness is a
/// separate question).
pub fn is_superspecial<F: FiniteField>(p: &MPoly<F>, q: &MPoly<F>) -> Result<bool, HwError> {
    if p.num_vars_used() > NV {
        return Err(HwError::NotCubic);
    }
    Ok(hw_coefficients(p, q)?.iter().all(|c| c.is_zero()))
}

/// Dense evaluator for the numeric criterion, tuned for sweeping millions
/// of cubics against one fixed quadric over `F_p`.
pub struct HwEvaluator<F> {
    /// `cube_index[e]` for degree-3 exponent tuples, flattened as `a*16+b*4+c`.
    cube_index: Vec<u16>,
    /// Tables for multiplying the degree-`3k` dense power by a cubic term,
    /// with the destination length.
    step_tables: Vec<(Vec<u16>, usize)>,
    half_len: usize,
    /// Per Hasse–Witt monomial: (coefficient of `Q^(p-1)`, target id).
    rows: Vec<Vec<(F, usize)>>,
    /// Per target: index pairs `(i, j, doubled)` into the half power.
    targets: Vec<Vec<(u16, u16, bool)>>,
}

fn dense_monomials(deg: u32) -> Vec<[u32; 4]> {
    let mut v = Vec::new();
    for a in (0..=deg).rev() {
        for b in (0..=deg - a).rev() {
            for c in (0..=deg - a - b).rev() {
                v.push([a, b, c, deg - a - b - c]);
            }
        }
    }
    v
}

impl<F: FiniteField> HwEvaluator<F> {
    pub fn new(q: &MPoly<F>) -> Self {
        let p = F::CHARACTERISTIC;
        assert!(p >= 5, "characteristic must be at least 5");
        let cubes = dense_monomials(3);
        let mut cube_index = vec![u16::MAX; 64];
        for (i, e) in cubes.iter().enumerate() {
            cube_index[(e[0] * 16 + e[1] * 4 + e[2]) as usize] = i as u16;
        }
        let k_half = (p - 1) / 2;
        let mut step_tables = Vec::new();
        for k in 1..k_half {
            let src = dense_monomials(3 * k);
            let dst = dense_monomials(3 * (k + 1));
            let dst_idx: FxHashMap<[u32; 4], u16> = dst
                .iter()
                .enumerate()
                .map(|(i, e)| (*e, i as u16))
                .collect();
            let mut table = Vec::with_capacity(src.len() * cubes.len());
            for s in &src {
                for c in &cubes {
                    let e = [s[0] + c[0], s[1] + c[1], s[2] + c[2], s[3] + c[3]];
                    table.push(dst_idx[&e]);
                }
            }
            step_tables.push((table, dst.len()));
        }
        let half = dense_monomials(3 * k_half);
        let half_idx: FxHashMap<[u32; 4], u16> = half
            .iter()
            .enumerate()
            .map(|(i, e)| (*e, i as u16))
            .collect();
        let g1 = q.pow(p - 1);
        let mut target_ids: FxHashMap<[u32; 4], usize> = FxHashMap::default();
        let mut targets: Vec<Vec<(u16, u16, bool)>> = Vec::new();
        let mut rows = Vec::new();
        for m in hw_monomials(p) {
            let mut row = Vec::new();
            for (u, gu) in g1.terms() {
                let ue = [u.exp(0), u.exp(1), u.exp(2), u.exp(3)];
                if (0..4).any(|i| ue[i] > m[i]) {
                    continue;
                }
                let t = [m[0] - ue[0], m[1] - ue[1], m[2] - ue[2], m[3] - ue[3]];
                let id = *target_ids.entry(t).or_insert_with(|| {
                    let mut pairs = Vec::new();
                    for (i, s) in half.iter().enumerate() {
                        if (0..4).any(|v| s[v] > t[v]) {
                            continue;
                        }
                        let r = [t[0] - s[0], t[1] - s[1], t[2] - s[2], t[3] - s[3]];
                        if let Some(&j) = half_idx.get(&r) {
                            if (j as usize) >= i {
                                pairs.push((i as u16, j, j as usize != i));
                            }
                        }
                    }
                    targets.push(pairs);
                    targets.len() - 1
                });
                row.push((*gu, id));
            }
            rows.push(row);
        }
        HwEvaluator {
            cube_index,
            step_tables,
            half_len: half.len(),
            rows,
            targets,
        }
    }

    /// Whether all 16 coefficients vanish for the cubic given by its terms
    /// (exponent tuples with coefficients). Stops at the first nonzero one.
    pub fn is_superspecial_terms(&self, terms: &[([u32; 4], F)], scratch: &mut Vec<F>) -> bool {
        let cubic: Vec<(usize, F)> = terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| {
                (
                    self.cube_index[(e[0] * 16 + e[1] * 4 + e[2]) as usize] as usize,
                    *c,
                )
            })
            .collect();
        // dense P^((p-1)/2), built one cubic factor at a time
        let mut cur = vec![F::zero(); 20];
        for (i, c) in &cubic {
            cur[*i] = *c;
        }
        for (table, dst_len) in &self.step_tables {
            let mut next = vec![F::zero(); *dst_len];
            for (s, cs) in cur.iter().enumerate() {
                if cs.is_zero() {
                    continue;
                }
                for (i, c) in &cubic {
                    next[table[s * 20 + i] as usize] += *cs * *c;
                }
            }
            cur = next;
        }
        debug_assert_eq!(cur.len(), self.half_len);
        let f1 = scratch;
        f1.clear();
        f1.resize(self.targets.len(), F::zero());
        let mut done = vec![false; self.targets.len()];
        for row in &self.rows {
            let mut acc = F::zero();
            for (gu, id) in row {
                if !done[*id] {
                    let mut v = F::zero();
                    for &(i, j, dbl) in &self.targets[*id] {
                        let prod = cur[i as usize] * cur[j as usize];
                        v += if dbl { prod + prod } else { prod };
                    }
                    f1[*id] = v;
                    done[*id] = true;
                }
                acc += *gu * f1[*id];
            }
            if !acc.is_zero() {
                return false;
            }
        }
        true
    }

    pub fn is_superspecial(&self, p: &MPoly<F>) -> bool {
        let terms: Vec<([u32; 4], F)> = p
            .terms()
            .iter()
            .map(|(m, c)| ([m.exp(0), m.exp(1), m.exp(2), m.exp(3)], *c))
            .collect();
        self.is_superspecial_terms(&terms, &mut Vec::new())
    }
}
