//! Exhaustive group sweep: an independent isomorphism test over `F_q` that
//! enumerates every numeric Bruhat parameter tuple.
//!
//! With `g = L R` as in the cell systems, `g . P1 = lambda P2` iff the monic
//! normal forms of `P1(L X)` and `P2(R^-1 X)` agree, so both sides are
//! enumerated separately and joined through a hash map.

use num_traits::Zero;
use rustc_hash::FxHashMap;

use super::group::{
    a_matrix, identity, inverse, mat_mul, projective_torus, translation, u1, u2, weyl_elements,
    Mat4, Similitude,
};
use super::system::{cells, needs_translations};
use super::{check_cubic, reduce, GroupKind, IsoError};
use crate::families::{CaseTag, QuadricCase};
use crate::field::FiniteField;
use crate::poly::MPoly;

/// Number of matrices the sweep evaluates for this case and field.
pub fn sweep_size<F: FiniteField>(case: &QuadricCase, translations: bool) -> u128 {
    let q = F::ORDER as u128;
    let torus = (q - 1) * (q - 1);
    let (unip, rhs) = match case.tag {
        CaseTag::Dege => (q, if translations { q.pow(4) } else { q }),
        _ => (q * q, q * q),
    };
    let lhs: u128 = cells(case)
        .iter()
        .map(|c| if c.w == 0 { torus } else { torus * unip })
        .sum();
    lhs + rhs
}

fn torus_elements<F: FiniteField>(case: &QuadricCase, group: GroupKind) -> Vec<Mat4<F>> {
    let e = F::from_i64(case.eps as i64);
    let mut out = Vec::new();
    for a in F::elements() {
        for b in F::elements() {
            let ok = match (case.tag, group) {
                (CaseTag::N1, GroupKind::Orthogonal) => a * b == F::one(),
                (CaseTag::N2, GroupKind::Orthogonal) => a * a - e * b * b == F::one(),
                (CaseTag::N2, _) => !(a * a - e * b * b).is_zero(),
                _ => !a.is_zero() && !b.is_zero(),
            };
            if ok {
                out.push(projective_torus::<F, F>(case, &a, &b));
            }
        }
    }
    out
}

fn unipotents<F: FiniteField>(case: &QuadricCase) -> Vec<Mat4<F>> {
    let els = F::elements();
    match case.tag {
        CaseTag::Dege => els.iter().map(|a| u1::<F, F>(case, a)).collect(),
        _ => els
            .iter()
            .flat_map(|a| {
                els.iter().map(move |b| {
                    mat_mul(&u1::<F, F>(case, a), &u2::<F, F>(case, b).expect("rank 4"))
                })
            })
            .collect(),
    }
}

fn monic<F: FiniteField>(p: &MPoly<F>) -> MPoly<F> {
    if p.is_zero() {
        p.clone()
    } else {
        p.monic()
    }
}

/// Searches the whole group for `(g, lambda)` with `g . P1 = lambda P2`.
/// Refuses when more than `budget` matrices would be evaluated.
pub fn sweep_isomorphic<F: FiniteField>(
    case: &QuadricCase,
    p1: &MPoly<F>,
    p2: &MPoly<F>,
    group: GroupKind,
    budget: u128,
) -> Result<Option<(Similitude<F>, F)>, IsoError> {
    check_cubic(p1)?;
    check_cubic(p2)?;
    let (r1, r2) = (reduce(case, p1), reduce(case, p2));
    let translations = case.tag == CaseTag::Dege && needs_translations(&r1, &r2);
    let size = sweep_size::<F>(case, translations);
    if size > budget {
        return Err(IsoError::Budget { size, budget });
    }
    let act = |m: &Mat4<F>, p: &MPoly<F>| super::group::act_matrix(case, m, p);

    // right-hand side: P2(R X) for every R of the trailing family
    let mut right: FxHashMap<MPoly<F>, Mat4<F>> = FxHashMap::default();
    let mut rhs_family = unipotents::<F>(case);
    if translations {
        let els = F::elements();
        let mut with_t = Vec::new();
        for u in &rhs_family {
            for b in &els {
                for c in &els {
                    for d in &els {
                        with_t.push(mat_mul(&translation(b, c, d), u));
                    }
                }
            }
        }
        rhs_family = with_t;
    }
    for r in rhs_family {
        right.entry(monic(&act(&r, &r2))).or_insert(r);
    }

    let tori = torus_elements::<F>(case, group);
    let unips = unipotents::<F>(case);
    let weyl = weyl_elements::<F>(case);
    for cell in cells(case) {
        let a: Mat4<F> = if cell.a { a_matrix(case) } else { identity() };
        for t in &tori {
            let at = mat_mul(&a, t);
            let tails: Vec<Mat4<F>> = if cell.w == 0 {
                vec![identity()]
            } else {
                unips.iter().map(|u| mat_mul(u, &weyl[cell.w])).collect()
            };
            for tail in tails {
                let l = mat_mul(&at, &tail);
                let lp = act(&l, &r1);
                if let Some(r) = right.get(&monic(&lp)) {
                    let rinv = inverse(r).expect("unipotent");
                    let g = Similitude::new(*case, mat_mul(&l, &rinv))?;
                    let lambda = proportional_factor(&act(&g.matrix, &r1), &r2)
                        .expect("joined normal forms are proportional");
                    return Ok(Some((g, lambda)));
                }
            }
        }
    }
    Ok(None)
}

fn proportional_factor<F: FiniteField>(a: &MPoly<F>, b: &MPoly<F>) -> Option<F> {
    let l = *a.leading_coeff()? * b.leading_coeff()?.inv()?;
    (*a == b.scale(l)).then_some(l)
}
