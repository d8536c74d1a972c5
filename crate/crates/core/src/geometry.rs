//! Smoothness, point counts and related sanity checks for curves
//! `V(P, Q)` in projective 3-space.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::QuadricCase;
use crate::field::FiniteField;
use crate::poly::{divide_exact, MPoly, Monomial, PolyRing};
use crate::solver::f4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("the quadric divides the cubic, so V(P, Q) is a surface")]
    Degenerate,
    #[error("expected a nonzero homogeneous {0} in x, y, z, w")]
    NotForm(&'static str),
}

const NV: usize = 4;

fn check_form<F: FiniteField>(
    f: &MPoly<F>,
    deg: u32,
    what: &'static str,
) -> Result<(), GeometryError> {
    if f.is_zero() || !f.is_homogeneous() || f.total_degree() != Some(deg) || f.num_vars_used() > NV
    {
        return Err(GeometryError::NotForm(what));
    }
    Ok(())
}

/// The six 2x2 minors of the Jacobian of `(P, Q)`, ordered by column pairs
/// (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
pub fn jacobian_minors<F: FiniteField>(p: &MPoly<F>, q: &MPoly<F>) -> Vec<MPoly<F>> {
    let dp: Vec<MPoly<F>> = (0..NV).map(|i| p.partial_derivative(i)).collect();
    let dq: Vec<MPoly<F>> = (0..NV).map(|i| q.partial_derivative(i)).collect();
    let mut out = Vec::with_capacity(6);
    for i in 0..NV {
        for j in i + 1..NV {
            out.push(&(&dp[i] * &dq[j]) - &(&dp[j] * &dq[i]));
        }
    }
    out
}

/// Whether `V(P, Q)` is a nonsingular curve, decided over the algebraic
/// closure: for each coordinate `X_i`, the ideal of `P`, `Q`, the Jacobian
/// minors and `1 - Y X_i` must be the unit ideal.
///
/// An `F_q`-rational singular point is searched for first, which settles
/// most singular inputs without a basis computation.
pub fn is_nonsingular<F: FiniteField>(p: &MPoly<F>, q: &MPoly<F>) -> Result<bool, GeometryError> {
    check_form(p, 3, "cubic")?;
    check_form(q, 2, "quadric")?;
    if divide_exact(p, q).is_some() {
        return Err(GeometryError::Degenerate);
    }
    let minors = jacobian_minors(p, q);
    if has_rational_singular_point(p, q, &minors) {
        return Ok(false);
    }
    let mut base: Vec<MPoly<F>> = vec![p.clone(), q.clone()];
    base.extend(minors.into_iter().filter(|m| !m.is_zero()));
    let y = MPoly::var(NV);
    for i in 0..NV {
        let mut gens = base.clone();
        gens.push(&MPoly::one() - &(&y * &MPoly::var(i)));
        let (gb, _) = f4(&gens);
        if !(gb.len() == 1 && gb[0].is_constant()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The saturation check of [`is_nonsingular`] without the rational
/// prefilter, for cross-checking.
pub fn is_nonsingular_closure_only<F: FiniteField>(
    p: &MPoly<F>,
    q: &MPoly<F>,
) -> Result<bool, GeometryError> {
    check_form(p, 3, "cubic")?;
    check_form(q, 2, "quadric")?;
    if divide_exact(p, q).is_some() {
        return Err(GeometryError::Degenerate);
    }
    let mut base: Vec<MPoly<F>> = vec![p.clone(), q.clone()];
    base.extend(jacobian_minors(p, q).into_iter().filter(|m| !m.is_zero()));
    let y = MPoly::var(NV);
    Ok((0..NV).all(|i| {
        let mut gens = base.clone();
        gens.push(&MPoly::one() - &(&y * &MPoly::var(i)));
        f4(&gens)
            .0
            .iter()
            .any(|g| g.is_constant() && !g.is_zero())
    }))
}

fn has_rational_singular_point<F: FiniteField>(
    p: &MPoly<F>,
    q: &MPoly<F>,
    minors: &[MPoly<F>],
) -> bool {
    let mut found = false;
    for_each_projective_point::<F>(|pt| {
        if q.eval(pt).is_zero()
            && p.eval(pt).is_zero()
            && minors.iter().all(|m| m.eval(pt).is_zero())
        {
            found = true;
            return false;
        }
        true
    });
    found
}

/// Singular points of `V(P, Q)` over the field `G` the forms are given over,
/// by exhaustive search.
pub fn singular_points<G: FiniteField>(p: &MPoly<G>, q: &MPoly<G>) -> Vec<[G; 4]> {
    let minors = jacobian_minors(p, q);
    let mut out = Vec::new();
    for_each_projective_point::<G>(|pt| {
        if q.eval(pt).is_zero()
            && p.eval(pt).is_zero()
            && minors.iter().all(|m| m.eval(pt).is_zero())
        {
            out.push([pt[0], pt[1], pt[2], pt[3]]);
        }
        true
    });
    out
}

/// Calls `f` on every normalized point of `P^3(G)` (first nonzero
/// coordinate equal to one) until it returns false.
fn for_each_projective_point<G: FiniteField>(mut f: impl FnMut(&[G]) -> bool) {
    let elems = G::elements();
    let n = elems.len();
    for lead in 0..NV {
        let mut pt = [G::zero(); NV];
        pt[lead] = G::one();
        let free = NV - 1 - lead;
        let total = n.pow(free as u32);
        for k in 0..total {
            let mut r = k;
            for j in 0..free {
                pt[lead + 1 + j] = elems[r % n];
                r /= n;
            }
            if !f(&pt) {
                return;
            }
        }
    }
}

/// Dense evaluator for a homogeneous form: coefficient per exponent vector.
struct DenseForm<G> {
    terms: Vec<([u32; 4], G)>,
}

impl<G: FiniteField> DenseForm<G> {
    fn new(f: &MPoly<G>) -> Self {
        let terms = f
            .terms()
            .iter()
            .map(|(m, c)| ([m.exp(0), m.exp(1), m.exp(2), m.exp(3)], *c))
            .collect();
        DenseForm { terms }
    }

    fn eval(&self, pw: &[[G; 4]; 4]) -> G {
        let mut acc = G::zero();
        for (e, c) in &self.terms {
            acc += *c
                * pw[0][e[0] as usize]
                * pw[1][e[1] as usize]
                * pw[2][e[2] as usize]
                * pw[3][e[3] as usize];
        }
        acc
    }
}

/// Number of points of `V(P, Q)` in `P^3(G)`.
pub fn count_points<G: FiniteField>(p: &MPoly<G>, q: &MPoly<G>) -> u64 {
    let dp = DenseForm::new(p);
    let dq = DenseForm::new(q);
    let mut count = 0u64;
    for_each_projective_point::<G>(|pt| {
        let mut pw = [[G::one(); 4]; 4];
        for (i, row) in pw.iter_mut().enumerate() {
            row[1] = pt[i];
            row[2] = pt[i] * pt[i];
            row[3] = row[2] * pt[i];
        }
        if dq.eval(&pw).is_zero() && dp.eval(&pw).is_zero() {
            count += 1;
        }
        true
    });
    count
}

/// Hasse–Weil upper bound `q + 1 + 2 g sqrt(q)` for genus 4 over `F_{p^2}`.
pub fn maximal_count(p: u64) -> u64 {
    p * p + 1 + 8 * p
}

pub fn is_maximal_count(count: u64, p: u64) -> bool {
    count == maximal_count(p)
}

pub fn is_minimal_count(count: u64, p: u64) -> bool {
    count + 8 * p == p * p + 1
}

/// Whether a count over `F_q` (`q = p^a`) satisfies the Weil bound for genus 4.
pub fn within_weil_bound(count: u64, q: u64) -> bool {
    let diff = (count as i128 - (q as i128 + 1)).unsigned_abs();
    // |diff| <= 8 sqrt(q)  <=>  diff^2 <= 64 q
    diff * diff <= 64 * q as u128
}

/// A candidate curve together with what has been verified about it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub case: QuadricCase,
    pub p: u32,
    pub quadric: String,
    pub cubic: String,
    pub superspecial: Option<bool>,
    pub smooth: Option<bool>,
    pub count_fp: Option<u64>,
    pub count_fp2: Option<u64>,
}

impl CurveRecord {
    pub fn new<F: FiniteField>(case: QuadricCase, p: &MPoly<F>) -> Self {
        let ring = PolyRing::xyzw();
        CurveRecord {
            case,
            p: F::CHARACTERISTIC,
            quadric: ring.render(&case.quadric::<F>()),
            cubic: ring.render(p),
            superspecial: None,
            smooth: None,
            count_fp: None,
            count_fp2: None,
        }
    }

    pub fn is_maximal_fp2(&self) -> Option<bool> {
        self.count_fp2.map(|c| is_maximal_count(c, self.p as u64))
    }

    /// The congruence `#C(F_p) = 1 mod p` expected of p-rank zero curves.
    pub fn congruence_holds(&self) -> Option<bool> {
        self.count_fp
            .map(|c| c % self.p as u64 == 1 % self.p as u64)
    }
}

/// The monomials of `P` divisible by `m` (used to sanity-check reductions).
pub fn terms_divisible_by<F: FiniteField>(p: &MPoly<F>, m: Monomial) -> usize {
    p.terms().iter().filter(|(t, _)| m.divides(*t)).count()
}
