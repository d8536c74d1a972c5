use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::Monomial;
use crate::field::{FiniteField, Ring};

/// Sparse multivariate polynomial with coefficients in `R`.
///
/// Terms are kept strictly decreasing in grevlex order with no zero
/// coefficients, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly<R> {
    terms: Vec<(Monomial, R)>,
}

/// A ring that contains a copy of the finite field `F`.
pub trait Algebra<F: FiniteField>: Ring {
    fn from_scalar(c: F) -> Self;
    fn scale(&self, c: F) -> Self;
}

impl<F: FiniteField> Algebra<F> for F {
    fn from_scalar(c: F) -> Self {
        c
    }
    fn scale(&self, c: F) -> Self {
        *self * c
    }
}

impl<F: FiniteField, R: Algebra<F>> Algebra<F> for MPoly<R> {
    fn from_scalar(c: F) -> Self {
        MPoly::constant(R::from_scalar(c))
    }
    fn scale(&self, c: F) -> Self {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, r)| (*m, r.scale(c))).collect(),
        }
    }
}

impl<R: Ring> MPoly<R> {
    pub fn constant(c: R) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn term(m: Monomial, c: R) -> Self {
        if c.is_zero() {
            MPoly { terms: Vec::new() }
        } else {
            MPoly {
                terms: vec![(m, c)],
            }
        }
    }

    pub fn var(i: usize) -> Self {
        Self::term(Monomial::var(i), R::one())
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, R)>) -> Self {
        let mut map: FxHashMap<Monomial, R> = FxHashMap::default();
        for (m, c) in terms {
            match map.get_mut(&m) {
                Some(e) => *e = e.clone() + c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        Self::from_map(map)
    }

    fn from_map(map: FxHashMap<Monomial, R>) -> Self {
        let mut terms: Vec<(Monomial, R)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MPoly { terms }
    }

    /// Builds from terms already strictly decreasing with nonzero coefficients.
    pub fn from_sorted_unchecked(terms: Vec<(Monomial, R)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        MPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, R)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, R)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.first().map(|t| t.0)
    }

    pub fn leading_coeff(&self) -> Option<&R> {
        self.terms.first().map(|t| &t.1)
    }

    /// Maximal total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms
            .windows(2)
            .all(|w| w[0].0.degree() == w[1].0.degree())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// One past the largest variable index that occurs.
    pub fn num_vars_used(&self) -> usize {
        self.terms
            .iter()
            .map(|(m, _)| m.support_len())
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient_of(&self, m: Monomial) -> R {
        match self.terms.binary_search_by(|(t, _)| m.cmp(t)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => R::zero(),
        }
    }

    pub fn map_coeffs<S: Ring>(&self, mut f: impl FnMut(&R) -> S) -> MPoly<S> {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let s = f(c);
                    (!s.is_zero()).then_some((*m, s))
                })
                .collect(),
        }
    }

    /// Applies `f` to every monomial; the result is re-sorted and combined.
    pub fn map_monomials(&self, mut f: impl FnMut(Monomial) -> Monomial) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, c)| (f(*m), c.clone())))
    }

    /// Relabels variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m.permute(perm), c.clone()))
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MPoly { terms }
    }

    pub fn mul_term(&self, m: Monomial, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .filter_map(|(t, d)| {
                    let p = d.clone() * c.clone();
                    (!p.is_zero()).then(|| (t.mul(m), p))
                })
                .collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative in variable `i`.
    pub fn partial_derivative(&self, i: usize) -> Self {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(i);
            if e == 0 {
                return None;
            }
            let d = c.clone() * R::from_i64(e as i64);
            (!d.is_zero()).then(|| (m.div_exact(Monomial::var(i)), d))
        });
        Self::from_terms(terms)
    }

    /// Groups terms by the part of the monomial in variables `< k`; each
    /// group's coefficient is a polynomial in the remaining variables
    /// (shifted down by `k`).
    pub fn split_vars(&self, k: usize) -> MPoly<MPoly<R>> {
        let mut groups: FxHashMap<Monomial, Vec<(Monomial, R)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let (lo, hi) = m.split_at(k);
            groups.entry(lo).or_default().push((hi, c.clone()));
        }
        let mut terms: Vec<(Monomial, MPoly<R>)> = groups
            .into_iter()
            .map(|(lo, mut v)| {
                v.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                (lo, MPoly { terms: v })
            })
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        MPoly { terms }
    }
}

impl<R: Ring> MPoly<MPoly<R>> {
    /// Inverse of [`MPoly::split_vars`]: outer variables first, inner
    /// variables shifted up by `k`.
    pub fn flatten(&self, k: usize) -> MPoly<R> {
        MPoly::from_terms(self.terms.iter().flat_map(|(m, c)| {
            c.terms
                .iter()
                .map(move |(n, d)| (m.mul(n.shift_up(k)), d.clone()))
        }))
    }
}

impl<F: FiniteField> MPoly<F> {
    pub fn eval(&self, point: &[F]) -> F {
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut v = *c;
            for (i, x) in point.iter().enumerate() {
                let e = m.exp(i);
                if e > 0 {
                    v *= x.pow(e as u64);
                }
            }
            acc += v;
        }
        acc
    }

    /// Substitutes the given values for the listed variables, keeping the
    /// rest symbolic; variable positions are not renumbered.
    pub fn specialize(&self, assignment: &[(usize, F)]) -> Self {
        if assignment.is_empty() {
            return self.clone();
        }
        Self::from_terms(self.terms.iter().map(|(m, c)| {
            let mut m = *m;
            let mut v = *c;
            for &(i, x) in assignment {
                let e = m.exp(i);
                if e > 0 {
                    v *= x.pow(e as u64);
                    m = m.without_var(i);
                }
            }
            (m, v)
        }))
    }

    /// Monic rescaling; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(inv)
            }
        }
    }

    pub fn scale(&self, c: F) -> Self {
        <Self as Algebra<F>>::scale(self, c)
    }

    /// Exact linear map of coefficients into a field extension.
    pub fn embed<G: FiniteField + From<F>>(&self) -> MPoly<G> {
        self.map_coeffs(|c| G::from(*c))
    }
}

impl<F: FiniteField> MPoly<MPoly<F>> {
    /// Substitutes values for coefficient-ring variables.
    pub fn specialize_coeffs(&self, assignment: &[(usize, F)]) -> Self {
        self.map_coeffs(|c| c.specialize(assignment))
    }
}

fn merge<R: Ring>(a: &[(Monomial, R)], b: &[(Monomial, R)], negate_b: bool) -> Vec<(Monomial, R)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let nb = |c: &R| if negate_b { -c.clone() } else { c.clone() };
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((b[j].0, nb(&b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let s = a[i].1.clone() + nb(&b[j].1);
                if !s.is_zero() {
                    out.push((a[i].0, s));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(b[j..].iter().map(|(m, c)| (*m, nb(c))));
    out
}

impl<R: Ring> Add for &MPoly<R> {
    type Output = MPoly<R>;
    fn add(self, rhs: Self) -> MPoly<R> {
        MPoly {
            terms: merge(&self.terms, &rhs.terms, false),
        }
    }
}

impl<R: Ring> Sub for &MPoly<R> {
    type Output = MPoly<R>;
    fn sub(self, rhs: Self) -> MPoly<R> {
        MPoly {
            terms: merge(&self.terms, &rhs.terms, true),
        }
    }
}

impl<R: Ring> Mul for &MPoly<R> {
    type Output = MPoly<R>;
    fn mul(self, rhs: Self) -> MPoly<R> {
        if self.is_empty() || rhs.is_empty() {
            return MPoly::zero();
        }
        if self.len() == 1 {
            return rhs.mul_term(self.terms[0].0, &self.terms[0].1);
        }
        if rhs.len() == 1 {
            return self.mul_term(rhs.terms[0].0, &rhs.terms[0].1);
        }
        let mut map: FxHashMap<Monomial, R> = FxHashMap::default();
        map.reserve(self.len() * rhs.len() / 2);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let p = c1.clone() * c2.clone();
                let m = m1.mul(*m2);
                match map.get_mut(&m) {
                    Some(e) => *e = e.clone() + p,
                    None => {
                        map.insert(m, p);
                    }
                }
            }
        }
        MPoly::from_map(map)
    }
}

impl<R: Ring> Neg for &MPoly<R> {
    type Output = MPoly<R>;
    fn neg(self) -> MPoly<R> {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! by_value {
    ($tr:ident, $f:ident) => {
        impl<R: Ring> $tr for MPoly<R> {
            type Output = MPoly<R>;
            fn $f(self, rhs: Self) -> MPoly<R> {
                (&self).$f(&rhs)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl<R: Ring> Neg for MPoly<R> {
    type Output = MPoly<R>;
    fn neg(self) -> MPoly<R> {
        -&self
    }
}

impl<R: Ring> Zero for MPoly<R> {
    fn zero() -> Self {
        MPoly { terms: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<R: Ring> One for MPoly<R> {
    fn one() -> Self {
        MPoly::constant(R::one())
    }
}

impl<R: Ring> Ring for MPoly<R> {
    fn from_i64(n: i64) -> Self {
        MPoly::constant(R::from_i64(n))
    }
}

impl<R: std::fmt::Debug> std::fmt::Debug for MPoly<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?}){m:?}")?;
        }
        Ok(())
    }
}
