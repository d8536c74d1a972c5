//! Polynomial systems whose zeros are isomorphisms `g . P1 = lambda P2`
//! restricted to one Bruhat cell.
//!
//! Writing `g = L R` with `R` the trailing unipotent (and, in the
//! degenerate case, translation) factor, `g . P1 = lambda P2` is equivalent
//! to `P1(L X) = lambda P2(R^-1 X) mod Q` because `R` preserves `Q`. The
//! family of `R^-1` is again a unipotent (times translation) family, so the
//! right-hand side is parametrised directly. This keeps the coefficient
//! degrees at most 7 instead of 12.

use num_traits::One;

use super::group::{
    a_matrix, inverse, mat_mul, projective_torus, translation, u1, u2, weyl_elements, weyl_len, Mat4,
    Similitude,
};
use super::GroupKind;
use crate::families::{CaseTag, QuadricCase};
use crate::field::FiniteField;
use crate::poly::{mod_quad, Algebra, MPoly, Monomial, PolyRing};
use crate::solver::field_equations;

type Sym<F> = MPoly<F>;

/// One Bruhat cell: a choice in `A` and in the Weyl factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cell {
    pub a: bool,
    pub w: usize,
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "A{} W{}", u8::from(self.a), self.w)
    }
}

/// Cells in search order: `A` outer, Weyl inner. In the degenerate
/// case the sign `z -> -z` of `A` lies in the torus and is not iterated.
pub fn cells(case: &QuadricCase) -> Vec<Cell> {
    let nw = weyl_len(case);
    let a_choices: &[bool] = if case.tag == CaseTag::Dege {
        &[false]
    } else {
        &[false, true]
    };
    a_choices
        .iter()
        .flat_map(|&a| (0..nw).map(move |w| Cell { a, w }))
        .collect()
}

/// A cell system together with the data needed to rebuild `g`.
pub struct CellSystem<F> {
    pub ring: PolyRing,
    pub gens: Vec<MPoly<F>>,
    lhs: Mat4<Sym<F>>,
    rhs: Mat4<Sym<F>>,
    lambda: usize,
}

/// Which constraints encode that the parameters come from the group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Setting {
    /// Field equations and `X^(q-1) = 1` for units.
    Rational(GroupKind),
    /// No field equations; units through one Rabinowitsch variable.
    Closure,
}

struct Vars {
    names: Vec<String>,
}

impl Vars {
    fn add(&mut self, name: &str) -> usize {
        self.names.push(name.to_string());
        self.names.len() - 1
    }
}

/// Whether `g` may need the translations `x -> x + b y + c z + d w`: they
/// are forced to vanish when both cubics contain `x^3` and neither has a
/// term `x^2 y`, `x^2 z` or `x^2 w`.
pub fn needs_translations<F: FiniteField>(p1: &MPoly<F>, p2: &MPoly<F>) -> bool {
    let shaped = |p: &MPoly<F>| {
        !p.coefficient_of(Monomial::from_exps(&[3, 0, 0, 0])).is_zero()
            && p.terms().iter().all(|(m, _)| m.exp(0) != 2)
    };
    !(shaped(p1) && shaped(p2))
}

pub fn build<F: FiniteField>(
    case: &QuadricCase,
    cell: Cell,
    p1: &MPoly<F>,
    p2: &MPoly<F>,
    setting: Setting,
    translations: bool,
) -> CellSystem<F> {
    let mut v = Vars { names: Vec::new() };
    let dege = case.tag == CaseTag::Dege;
    // unipotent parameters first: they are the largest in the order
    let (l1, l2) = if cell.w != 0 {
        (Some(v.add("t3")), (!dege).then(|| v.add("t4")))
    } else {
        (None, None)
    };
    let r1 = v.add("t5");
    let r2 = (!dege).then(|| v.add("t6"));
    let trans = (dege && translations).then(|| [v.add("b"), v.add("c"), v.add("d")]);
    let t1 = v.add("t1");
    let t2 = v.add("t2");
    let lam = v.add("lam");
    let rab = (setting == Setting::Closure).then(|| v.add("u"));

    let var = |i: usize| -> Sym<F> { MPoly::var(i) };
    let lift = |m: &Mat4<F>| -> Mat4<Sym<F>> {
        std::array::from_fn(|i| std::array::from_fn(|j| Sym::<F>::from_scalar(m[i][j])))
    };

    let mut lhs = projective_torus::<F, Sym<F>>(case, &var(t1), &var(t2));
    if cell.a {
        lhs = mat_mul(&lift(&a_matrix(case)), &lhs);
    }
    if let Some(i) = l1 {
        lhs = mat_mul(&lhs, &u1::<F, Sym<F>>(case, &var(i)));
        if let Some(j) = l2 {
            lhs = mat_mul(&lhs, &u2::<F, Sym<F>>(case, &var(j)).expect("rank 4"));
        }
        lhs = mat_mul(&lhs, &lift(&weyl_elements(case)[cell.w]));
    }
    let mut rhs = u1::<F, Sym<F>>(case, &var(r1));
    if let Some(j) = r2 {
        rhs = mat_mul(&rhs, &u2::<F, Sym<F>>(case, &var(j)).expect("rank 4"));
    }
    if let Some([b, c, d]) = trans {
        rhs = mat_mul(&translation(&var(b), &var(c), &var(d)), &rhs);
    }

    let q = case.quadric::<F>();
    let mq = case.reducing_monomial();
    let left = super::group::substitute(&lhs, p1);
    let right = super::group::substitute(&rhs, p2);
    let lam_poly = var(lam);
    let right = MPoly::from_terms(
        right
            .terms()
            .iter()
            .map(|(m, c)| (*m, c * &lam_poly)),
    );
    let diff = mod_quad(&(left - right), &q, mq).expect("monomial occurs in quadric");
    let mut gens: Vec<MPoly<F>> = diff.terms().iter().map(|(_, c)| c.clone()).collect();

    let nu = match case.tag {
        CaseTag::N2 => Some(lhs_nu(case, &var(t1), &var(t2))),
        _ => None,
    };
    let mut free: Vec<usize> = [l1, l2, Some(r1), r2].into_iter().flatten().collect();
    if let Some(t) = trans {
        free.extend(t);
    }
    let mut units = vec![lam];
    match case.tag {
        CaseTag::N2 => free.extend([t1, t2]),
        _ => units.extend([t1, t2]),
    }
    match setting {
        Setting::Rational(kind) => {
            gens.extend(field_equations::<F>(&free, &units));
            let q_minus_1 = F::ORDER - 1;
            match (case.tag, kind) {
                (CaseTag::N1, GroupKind::Orthogonal) => {
                    gens.push(&(&var(t1) * &var(t2)) - &MPoly::one());
                }
                (CaseTag::N2, GroupKind::Orthogonal) => {
                    gens.push(nu.clone().unwrap() - MPoly::one());
                }
                (CaseTag::N2, GroupKind::Similitude) => {
                    gens.push(nu.clone().unwrap().pow(q_minus_1) - MPoly::one());
                }
                _ => {}
            }
        }
        Setting::Closure => {
            let mut prod = var(rab.unwrap());
            for &u in &units {
                prod = &prod * &var(u);
            }
            if let Some(n) = &nu {
                prod = &prod * n;
            }
            gens.push(prod - MPoly::one());
        }
    }
    CellSystem {
        ring: PolyRing::new(&v.names),
        gens,
        lhs,
        rhs,
        lambda: lam,
    }
}

fn lhs_nu<F: FiniteField>(case: &QuadricCase, a: &Sym<F>, b: &Sym<F>) -> Sym<F> {
    let e = F::from_i64(case.eps as i64);
    &(a * a) - &(b * b).scale(e)
}

impl<F: FiniteField> CellSystem<F> {
    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// The element `g = L R^-1` and `lambda` at a zero of the system.
    pub fn witness(&self, case: &QuadricCase, point: &[F]) -> Option<(Similitude<F>, F)> {
        let eval = |m: &Mat4<Sym<F>>| -> Mat4<F> {
            std::array::from_fn(|i| std::array::from_fn(|j| m[i][j].eval(point)))
        };
        let l = eval(&self.lhs);
        let r = inverse(&eval(&self.rhs))?;
        let g = Similitude::new(*case, mat_mul(&l, &r)).ok()?;
        Some((g, point[self.lambda]))
    }
}
