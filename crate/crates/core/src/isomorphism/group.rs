//! Bruhat factors of the orthogonal similitude group of each quadric, and
//! the action of 4x4 matrices on cubic forms.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::IsoError;
use crate::families::{CaseTag, QuadricCase};
use crate::field::{FiniteField, Ring};
use crate::poly::{mod_quad, Algebra, MPoly, Monomial};

pub type Mat4<R> = [[R; 4]; 4];

/// One Bruhat factor with numeric parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor<F> {
    /// The nontrivial element of the finite factor `A`.
    A,
    /// N1: `diag(a, b, c/b, c/a)` from `[a, b, c]`. N2: `H(a) R(b, c)` from
    /// `[a, b, c]`. Dege: `diag(1, b, b, b) T(a)` from `[a, b]`.
    Torus(Vec<F>),
    /// First unipotent family (`U(a)` in the degenerate case).
    U1(F),
    /// Second unipotent family; N1 and N2 only.
    U2(F),
    /// Element of the Weyl factor by index: N1 `[1, s1, s2, s1 s2]`,
    /// N2 `[1, w]`, Dege `[1, s]`.
    W(usize),
    /// Dege only: `x -> a x + b y + c z + d w`.
    V([F; 4]),
}

/// A numeric element `g` with `g^T phi g = mu phi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Similitude<F> {
    pub case: QuadricCase,
    pub matrix: Mat4<F>,
    pub mu: F,
}

/// Serializable form of a witness `(g, lambda)` with entries as residues.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub matrix: [[u32; 4]; 4],
    pub mu: u32,
    pub lambda: u32,
}

pub fn identity<R: Ring>() -> Mat4<R> {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { R::one() } else { R::zero() }))
}

pub fn mat_mul<R: Ring>(a: &Mat4<R>, b: &Mat4<R>) -> Mat4<R> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut s = R::zero();
            for k in 0..4 {
                if !a[i][k].is_zero() && !b[k][j].is_zero() {
                    s = s + a[i][k].clone() * b[k][j].clone();
                }
            }
            s
        })
    })
}

pub fn transpose<R: Ring>(a: &Mat4<R>) -> Mat4<R> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].clone()))
}

fn lift<F: FiniteField, R: Algebra<F>>(m: &Mat4<F>) -> Mat4<R> {
    std::array::from_fn(|i| std::array::from_fn(|j| R::from_scalar(m[i][j])))
}

fn diag<R: Ring>(d: [R; 4]) -> Mat4<R> {
    let mut m: Mat4<R> = std::array::from_fn(|_| std::array::from_fn(|_| R::zero()));
    for (i, v) in d.into_iter().enumerate() {
        m[i][i] = v;
    }
    m
}

fn permutation<F: FiniteField>(images: [usize; 4]) -> Mat4<F> {
    std::array::from_fn(|i| std::array::from_fn(|j| if images[i] == j { F::one() } else { F::zero() }))
}

fn eps<F: FiniteField>(case: &QuadricCase) -> F {
    F::from_i64(case.eps as i64)
}

fn half<F: FiniteField>() -> F {
    F::from_i64(2).inv().expect("odd characteristic")
}

/// The nontrivial element of `A`: `y <-> z` for N1, `z -> -z` otherwise.
pub fn a_matrix<F: FiniteField>(case: &QuadricCase) -> Mat4<F> {
    match case.tag {
        CaseTag::N1 => permutation([0, 2, 1, 3]),
        _ => diag([F::one(), F::one(), -F::one(), F::one()]),
    }
}

/// The Weyl representatives of the case, identity first.
pub fn weyl_elements<F: FiniteField>(case: &QuadricCase) -> Vec<Mat4<F>> {
    match case.tag {
        CaseTag::N1 => {
            let s1 = permutation([1, 0, 3, 2]);
            let s2 = permutation([2, 3, 0, 1]);
            vec![identity(), s1, s2, mat_mul(&s1, &s2)]
        }
        CaseTag::N2 => {
            let mut w: Mat4<F> = permutation([3, 1, 2, 0]);
            w[2][2] = -F::one();
            vec![identity(), w]
        }
        CaseTag::Dege => vec![identity(), permutation([0, 3, 2, 1])],
    }
}

pub fn weyl_len(case: &QuadricCase) -> usize {
    match case.tag {
        CaseTag::N1 => 4,
        _ => 2,
    }
}

/// First unipotent family evaluated at `a` in any algebra over `F`.
pub fn u1<F: FiniteField, R: Algebra<F>>(case: &QuadricCase, a: &R) -> Mat4<R> {
    let mut m: Mat4<R> = identity();
    let a2h = (a.clone() * a.clone()).scale(half::<F>());
    match case.tag {
        CaseTag::N1 => {
            m[0][1] = a.clone();
            m[2][3] = -a.clone();
        }
        CaseTag::N2 => {
            m[0][1] = a.clone();
            m[0][3] = -a2h;
            m[1][3] = -a.clone();
        }
        CaseTag::Dege => {
            // y -> y + a z - a^2/2 w, z -> z - a w preserves 2yw + z^2
            m[1][2] = a.clone();
            m[1][3] = -a2h;
            m[2][3] = -a.clone();
        }
    }
    m
}

/// Second unipotent family; the degenerate case has none.
pub fn u2<F: FiniteField, R: Algebra<F>>(case: &QuadricCase, b: &R) -> Option<Mat4<R>> {
    let mut m: Mat4<R> = identity();
    match case.tag {
        CaseTag::N1 => {
            m[0][2] = b.clone();
            m[1][3] = -b.clone();
        }
        CaseTag::N2 => {
            let e = eps::<F>(case);
            let e_inv = e.inv().expect("epsilon is a unit");
            m[0][2] = b.clone();
            m[0][3] = (b.clone() * b.clone()).scale(half::<F>() * e_inv);
            m[2][3] = b.scale(e_inv);
        }
        CaseTag::Dege => return None,
    }
    Some(m)
}

/// `R(a, b)` of the N2 case: `y -> a y + eps b z`, `z -> b y + a z`,
/// `w -> (a^2 - eps b^2) w`.
pub fn rotation<F: FiniteField, R: Algebra<F>>(case: &QuadricCase, a: &R, b: &R) -> Mat4<R> {
    let e = eps::<F>(case);
    let nu = a.clone() * a.clone() - (b.clone() * b.clone()).scale(e);
    let mut m: Mat4<R> = identity();
    m[1][1] = a.clone();
    m[1][2] = b.scale(e);
    m[2][1] = b.clone();
    m[2][2] = a.clone();
    m[3][3] = nu;
    m
}

/// Torus of the similitude group modulo scalars, written without
/// inverses: N1 `diag(1, s, r, s r)`, N2 `R(r, s)`, Dege
/// `diag(e0, 1, e2, e2^2)`. The Dege torus also carries the x-scaling of
/// `V` and absorbs the factor `A`.
pub fn projective_torus<F: FiniteField, R: Algebra<F>>(
    case: &QuadricCase,
    p: &R,
    q: &R,
) -> Mat4<R> {
    match case.tag {
        CaseTag::N1 => diag([R::one(), p.clone(), q.clone(), p.clone() * q.clone()]),
        CaseTag::N2 => rotation(case, p, q),
        CaseTag::Dege => diag([p.clone(), R::one(), q.clone(), q.clone() * q.clone()]),
    }
}

/// `x -> x + b y + c z + d w` in the degenerate case.
pub fn translation<R: Ring>(b: &R, c: &R, d: &R) -> Mat4<R> {
    let mut m: Mat4<R> = identity();
    m[0][1] = b.clone();
    m[0][2] = c.clone();
    m[0][3] = d.clone();
    m
}

/// The matrix of one factor, validated as a similitude.
pub fn bruhat_generator<F: FiniteField>(
    case: &QuadricCase,
    factor: &Factor<F>,
) -> Result<Similitude<F>, IsoError> {
    let unit = |v: F| v.inv().ok_or(IsoError::NotUnit);
    let m: Mat4<F> = match factor {
        Factor::A => a_matrix(case),
        Factor::Torus(p) => match (case.tag, p.as_slice()) {
            (CaseTag::N1, [a, b, c]) => {
                let (ai, bi) = (unit(*a)?, unit(*b)?);
                unit(*c)?;
                diag([*a, *b, *c * bi, *c * ai])
            }
            (CaseTag::N2, [a, b, c]) => {
                let ai = unit(*a)?;
                let r = rotation(case, b, c);
                unit(r[3][3])?;
                mat_mul(&diag([*a, F::one(), F::one(), ai]), &r)
            }
            (CaseTag::Dege, [a, b]) => {
                let ai = unit(*a)?;
                unit(*b)?;
                diag([F::one(), *a * *b, *b, *b * ai])
            }
            _ => return Err(IsoError::BadParameters),
        },
        Factor::U1(a) => u1(case, a),
        Factor::U2(b) => u2(case, b).ok_or(IsoError::BadParameters)?,
        Factor::W(i) => weyl_elements(case)
            .get(*i)
            .copied()
            .ok_or(IsoError::BadParameters)?,
        Factor::V([a, b, c, d]) => {
            if case.tag != CaseTag::Dege {
                return Err(IsoError::BadParameters);
            }
            let mut m = translation(b, c, d);
            m[0][0] = *a;
            unit(*a)?;
            m
        }
    };
    Similitude::new(*case, m)
}

/// Product of factors, left to right.
pub fn compose<F: FiniteField>(
    case: &QuadricCase,
    factors: &[Factor<F>],
) -> Result<Similitude<F>, IsoError> {
    let mut acc = Similitude::identity(*case);
    for f in factors {
        acc = acc.mul(&bruhat_generator(case, f)?);
    }
    Ok(acc)
}

impl<F: FiniteField> Similitude<F> {
    pub fn identity(case: QuadricCase) -> Self {
        Similitude {
            case,
            matrix: identity(),
            mu: F::one(),
        }
    }

    /// Checks `g^T phi g = mu phi` for some unit `mu` and `det g != 0`.
    pub fn new(case: QuadricCase, matrix: Mat4<F>) -> Result<Self, IsoError> {
        let mu = similitude_factor(&case, &matrix).ok_or(IsoError::NotSimilitude)?;
        if inverse(&matrix).is_none() {
            return Err(IsoError::Singular);
        }
        Ok(Similitude { case, matrix, mu })
    }

    pub fn mul(&self, other: &Self) -> Self {
        Similitude {
            case: self.case,
            matrix: mat_mul(&self.matrix, &other.matrix),
            mu: self.mu * other.mu,
        }
    }

    pub fn inverse(&self) -> Self {
        Similitude {
            case: self.case,
            matrix: inverse(&self.matrix).expect("similitudes are invertible"),
            mu: self.mu.inv().expect("mu is a unit"),
        }
    }

    pub fn record(&self, lambda: F) -> WitnessRecord {
        WitnessRecord {
            matrix: self.matrix.map(|r| r.map(|v| v.index())),
            mu: self.mu.index(),
            lambda: lambda.index(),
        }
    }
}

/// The unit `mu` with `g^T phi g = mu phi`, if any.
pub fn similitude_factor<F: FiniteField>(case: &QuadricCase, g: &Mat4<F>) -> Option<F> {
    let phi = case.gram::<F>();
    let lhs = mat_mul(&transpose(g), &mat_mul(&phi, g));
    // every gram matrix here has phi[3][1] or phi[3][0] equal to one
    let (i, j) = if case.tag == CaseTag::Dege {
        (3, 1)
    } else {
        (3, 0)
    };
    let mu = lhs[i][j];
    if mu.is_zero() {
        return None;
    }
    let ok = (0..4).all(|a| (0..4).all(|b| lhs[a][b] == mu * phi[a][b]));
    ok.then_some(mu)
}

/// Gauss-Jordan inverse over a field.
pub fn inverse<F: FiniteField>(m: &Mat4<F>) -> Option<Mat4<F>> {
    let mut a = *m;
    let mut inv: Mat4<F> = identity();
    for col in 0..4 {
        let piv = (col..4).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let c = a[col][col].inv()?;
        for j in 0..4 {
            a[col][j] *= c;
            inv[col][j] *= c;
        }
        for r in 0..4 {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..4 {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * ac;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    Some(inv)
}

/// `P(g X)` without reduction: each variable `X_i` is replaced by the
/// linear form `sum_j g[i][j] X_j`.
pub fn substitute<F: FiniteField, R: Algebra<F>>(g: &Mat4<R>, p: &MPoly<F>) -> MPoly<R> {
    let forms: Vec<MPoly<R>> = (0..4)
        .map(|i| MPoly::from_terms((0..4).map(|j| (Monomial::var(j), g[i][j].clone()))))
        .collect();
    let maxdeg = p.total_degree().unwrap_or(0) as usize;
    let powers: Vec<Vec<MPoly<R>>> = forms
        .iter()
        .map(|l| {
            let mut v = vec![MPoly::one()];
            for k in 1..=maxdeg {
                let next = &v[k - 1] * l;
                v.push(next);
            }
            v
        })
        .collect();
    let mut out = MPoly::zero();
    for (m, c) in p.terms() {
        let mut t = MPoly::constant(R::from_scalar(*c));
        for (i, pw) in powers.iter().enumerate() {
            let e = m.exp(i) as usize;
            if e > 0 {
                t = &t * &pw[e];
            }
        }
        out = out + t;
    }
    out
}

/// `P(g X)` reduced modulo the quadric of the case.
pub fn act_matrix<F: FiniteField, R: Algebra<F>>(
    case: &QuadricCase,
    g: &Mat4<R>,
    p: &MPoly<F>,
) -> MPoly<R> {
    let q = case.quadric::<F>();
    mod_quad(&substitute(g, p), &q, case.reducing_monomial()).expect("monomial occurs in quadric")
}

/// `g . P = P(g X) mod Q`. With this convention
/// `act(h, act(g, P)) = act(g h, P)`.
pub fn act<F: FiniteField>(g: &Similitude<F>, p: &MPoly<F>) -> MPoly<F> {
    act_matrix(&g.case, &g.matrix, p)
}

/// Lifts a numeric matrix into a polynomial algebra.
pub fn lift_matrix<F: FiniteField, R: Algebra<F>>(m: &Mat4<F>) -> Mat4<R> {
    lift(m)
}
