//! Sparse multivariate polynomials over finite fields and nested
//! polynomial rings.

mod monomial;
mod mpoly;
mod text;

pub use monomial::Monomial;
pub use mpoly::{Algebra, MPoly};
pub use text::{ParseError, PolyRing};

use thiserror::Error;

use crate::field::FiniteField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("the reducing monomial does not occur in the quadric")]
    MonomialNotInQuadric,
}

/// Multiplies a polynomial over `R` by a numeric polynomial over `F`.
pub fn mul_numeric<F: FiniteField, R: Algebra<F>>(r: &MPoly<R>, f: &MPoly<F>) -> MPoly<R> {
    MPoly::from_terms(r.terms().iter().flat_map(|(m1, c1)| {
        f.terms()
            .iter()
            .map(move |(m2, c2)| (m1.mul(*m2), c1.scale(*c2)))
    }))
}

/// Reduces `p` modulo the quadric `q` by eliminating every monomial
/// divisible by `m_q`: writing `p = p0 + m_q*r`, the substitution
/// `m_q -> -(q - c*m_q)/c` is applied until no such monomial remains.
/// The result is congruent to `p` modulo `q`.
pub fn mod_quad<F: FiniteField, R: Algebra<F>>(
    p: &MPoly<R>,
    q: &MPoly<F>,
    m_q: Monomial,
) -> Result<MPoly<R>, PolyError> {
    let c = q.coefficient_of(m_q);
    let c_inv = c.inv().ok_or(PolyError::MonomialNotInQuadric)?;
    let rest = q - &MPoly::term(m_q, c);
    let subst = rest.scale(-c_inv);
    let mut cur = p.clone();
    for _ in 0..=Monomial::MAX_EXP {
        let (mut keep, mut quot) = (Vec::new(), Vec::new());
        for (m, coef) in cur.terms() {
            match m.checked_div(m_q) {
                Some(d) => quot.push((d, coef.clone())),
                None => keep.push((*m, coef.clone())),
            }
        }
        if quot.is_empty() {
            return Ok(cur);
        }
        let keep = MPoly::from_sorted_unchecked(keep);
        let quot = MPoly::from_terms(quot);
        cur = &keep + &mul_numeric(&quot, &subst);
    }
    unreachable!("mod_quad did not terminate; the quadric re-creates its own reducing monomial")
}

/// Exact division by a numeric polynomial, returning `None` when the
/// remainder is nonzero. Plain multivariate long division in grevlex.
pub fn divide_exact<F: FiniteField>(p: &MPoly<F>, d: &MPoly<F>) -> Option<MPoly<F>> {
    let lm = d.leading_monomial()?;
    let lc_inv = d.leading_coeff()?.inv()?;
    let mut rem = p.clone();
    let mut quot = Vec::new();
    while let Some(m) = rem.leading_monomial() {
        let t = m.checked_div(lm)?;
        let c = *rem.leading_coeff().unwrap() * lc_inv;
        quot.push((t, c));
        rem = &rem - &d.mul_term(t, &c);
    }
    Some(MPoly::from_terms(quot))
}
