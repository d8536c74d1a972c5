//! Isomorphism testing and classification of curves `V(P, Q)` on a fixed
//! quadric, by Gröbner bases over the Bruhat cells of the orthogonal
//! similitude group.

pub mod group;
pub mod oracle;
pub mod system;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use group::{
    act, bruhat_generator, compose, Factor, Mat4, Similitude, WitnessRecord,
};
pub use system::{cells, Cell};

use crate::families::{CaseTag, QuadricCase};
use crate::field::{FiniteField, Fp, Fp2};
use crate::geometry::count_points;
use crate::poly::{mod_quad, MPoly, PolyRing};
use crate::solver::{f4, first_point};
use system::Setting;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("a parameter that must be a unit is zero")]
    NotUnit,
    #[error("wrong number or kind of parameters for this factor")]
    BadParameters,
    #[error("matrix is not a similitude of the quadric")]
    NotSimilitude,
    #[error("matrix is singular")]
    Singular,
    #[error("expected a nonzero homogeneous cubic in x, y, z, w")]
    NotCubic,
    #[error("the N2 quadric is split only over F_q^2; transport the cubics to N1 first")]
    ClosureNeedsSplitForm,
    #[error("mixed cases in one classification: {0} and {1}")]
    MixedCases(CaseTag, CaseTag),
    #[error("search over {size} group elements exceeds the budget of {budget}")]
    Budget { size: u128, budget: u128 },
}

/// The group searched over `F_q`: the similitudes with the scalar part
/// pinned, or all similitudes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Orthogonal,
    Similitude,
}

#[derive(Clone, Debug)]
pub struct IsoOptions {
    pub group: GroupKind,
    /// Compare `#C(F_q)` before solving anything.
    pub prefilter: bool,
    /// Extract and verify an explicit `(g, lambda)`.
    pub witness: bool,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions {
            group: GroupKind::Similitude,
            prefilter: true,
            witness: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    /// The cubics are proportional modulo `Q`.
    Proportional,
    /// The point counts over `F_q` differ.
    Invariant,
    /// Decided by Gröbner bases over the Bruhat cells.
    Groebner,
}

#[derive(Clone, Debug)]
pub struct IsoOutcome<F> {
    pub isomorphic: bool,
    pub witness: Option<(Similitude<F>, F)>,
    pub decided_by: Decision,
    /// The cell that produced a hit, if any.
    pub cell: Option<Cell>,
    pub cells_tested: usize,
}

fn check_cubic<F: FiniteField>(p: &MPoly<F>) -> Result<(), IsoError> {
    if p.is_zero()
        || !p.is_homogeneous()
        || p.total_degree() != Some(3)
        || p.num_vars_used() > 4
    {
        return Err(IsoError::NotCubic);
    }
    Ok(())
}

/// `P mod Q` in the normal form used for comparisons.
pub fn reduce<F: FiniteField>(case: &QuadricCase, p: &MPoly<F>) -> MPoly<F> {
    mod_quad(p, &case.quadric::<F>(), case.reducing_monomial())
        .expect("monomial occurs in quadric")
}

fn proportional<F: FiniteField>(a: &MPoly<F>, b: &MPoly<F>) -> Option<F> {
    let (la, lb) = (a.leading_coeff()?, b.leading_coeff()?);
    let lambda = *la * lb.inv()?;
    (*a == b.scale(lambda)).then_some(lambda)
}

/// Whether `V(P1, Q)` and `V(P2, Q)` are isomorphic over `F_q`: some `g`
/// in the chosen group and unit `lambda` satisfy `g . P1 = lambda P2 mod Q`.
///
/// Cells are visited with `A` outer and the Weyl factor inner; the first
/// cell whose basis is not `{1}` decides.
pub fn is_isomorphic<F: FiniteField>(
    case: &QuadricCase,
    p1: &MPoly<F>,
    p2: &MPoly<F>,
    opts: &IsoOptions,
) -> Result<IsoOutcome<F>, IsoError> {
    check_cubic(p1)?;
    check_cubic(p2)?;
    let (r1, r2) = (reduce(case, p1), reduce(case, p2));
    if let Some(lambda) = proportional(&r1, &r2) {
        return Ok(IsoOutcome {
            isomorphic: true,
            witness: Some((Similitude::identity(*case), lambda)),
            decided_by: Decision::Proportional,
            cell: None,
            cells_tested: 0,
        });
    }
    let not_iso = |decided_by, cells_tested| IsoOutcome {
        isomorphic: false,
        witness: None,
        decided_by,
        cell: None,
        cells_tested,
    };
    if opts.prefilter {
        let q = case.quadric::<F>();
        if count_points(&r1, &q) != count_points(&r2, &q) {
            return Ok(not_iso(Decision::Invariant, 0));
        }
    }
    let translations = case.tag == CaseTag::Dege && system::needs_translations(&r1, &r2);
    let all = cells(case);
    for (k, cell) in all.iter().enumerate() {
        let sys = system::build(
            case,
            *cell,
            &r1,
            &r2,
            Setting::Rational(opts.group),
            translations,
        );
        let (gb, _) = f4(&sys.gens);
        if gb.len() == 1 && gb[0].is_constant() {
            continue;
        }
        let witness = if opts.witness {
            let point = first_point(&gb, sys.nvars()).expect("nonunit basis has a rational zero");
            let (g, lambda) = sys
                .witness(case, &point)
                .expect("cell parameters give a similitude");
            assert_eq!(
                act(&g, &r1),
                r2.scale(lambda),
                "witness fails the isomorphism equation"
            );
            Some((g, lambda))
        } else {
            None
        };
        return Ok(IsoOutcome {
            isomorphic: true,
            witness,
            decided_by: Decision::Groebner,
            cell: Some(*cell),
            cells_tested: k + 1,
        });
    }
    Ok(not_iso(Decision::Groebner, all.len()))
}

/// Whether the curves are isomorphic over the algebraic closure. Same cell
/// systems without field equations; nonvanishing of the torus parameters,
/// `lambda` (and `a^2 - eps b^2`) through one Rabinowitsch variable.
pub fn is_isomorphic_closure<F: FiniteField>(
    case: &QuadricCase,
    p1: &MPoly<F>,
    p2: &MPoly<F>,
) -> Result<bool, IsoError> {
    check_cubic(p1)?;
    check_cubic(p2)?;
    if case.tag == CaseTag::N2 {
        return Err(IsoError::ClosureNeedsSplitForm);
    }
    let (r1, r2) = (reduce(case, p1), reduce(case, p2));
    if proportional(&r1, &r2).is_some() {
        return Ok(true);
    }
    let translations = case.tag == CaseTag::Dege && system::needs_translations(&r1, &r2);
    for cell in cells(case) {
        let sys = system::build(case, cell, &r1, &r2, Setting::Closure, translations);
        let (gb, _) = f4(&sys.gens);
        if !(gb.len() == 1 && gb[0].is_constant()) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Where the equivalence is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Rational,
    Closure,
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub field: Field,
    /// Deduplicate under the orthogonal group before the full similitude
    /// group (rational setting only).
    pub phase1: bool,
    pub prefilter: bool,
    pub witness: bool,
    pub workers: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            field: Field::Rational,
            phase1: true,
            prefilter: true,
            witness: true,
            workers: 1,
        }
    }
}

/// Result of classifying a list of cubics on one quadric.
#[derive(Clone, Debug)]
pub struct Classification<F> {
    /// Input indices of the representatives, in input order.
    pub representatives: Vec<usize>,
    /// Class id (position in `representatives`) of every input.
    pub class_of: Vec<usize>,
    /// For each input, `(g, lambda)` with `g . rep = lambda P` when known.
    pub witnesses: Vec<Option<(Similitude<F>, F)>>,
    /// Number of pairwise tests run, per phase.
    pub tests: [usize; 2],
}

impl<F> Classification<F> {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

type PairTest<'a, F> =
    dyn Fn(&MPoly<F>, &MPoly<F>) -> Result<Option<Option<(Similitude<F>, F)>>, IsoError> + Sync + 'a;

/// One FlagList pass: every unflagged item becomes a representative and
/// flags all later items isomorphic to it. Returns (representative of each
/// item as a position in `items`, witness relative to it, tests run).
fn flag_pass<F: FiniteField>(
    items: &[MPoly<F>],
    test: &PairTest<'_, F>,
    workers: usize,
) -> Result<(Vec<usize>, Vec<Option<(Similitude<F>, F)>>, usize), IsoError> {
    let n = items.len();
    let mut rep: Vec<Option<usize>> = vec![None; n];
    let mut wit: Vec<Option<(Similitude<F>, F)>> = vec![None; n];
    let mut tests = 0;
    for i in 0..n {
        if rep[i].is_some() {
            continue;
        }
        rep[i] = Some(i);
        let todo: Vec<usize> = (i + 1..n).filter(|&j| rep[j].is_none()).collect();
        tests += todo.len();
        let next = AtomicUsize::new(0);
        let hits: Mutex<Vec<(usize, Option<(Similitude<F>, F)>)>> = Mutex::new(Vec::new());
        let err: Mutex<Option<IsoError>> = Mutex::new(None);
        std::thread::scope(|s| {
            for _ in 0..workers.max(1).min(todo.len().max(1)) {
                s.spawn(|| loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    if k >= todo.len() {
                        break;
                    }
                    let j = todo[k];
                    match test(&items[i], &items[j]) {
                        Ok(Some(w)) => hits.lock().unwrap().push((j, w)),
                        Ok(None) => {}
                        Err(e) => {
                            *err.lock().unwrap() = Some(e);
                            break;
                        }
                    }
                });
            }
        });
        if let Some(e) = err.into_inner().unwrap() {
            return Err(e);
        }
        for (j, w) in hits.into_inner().unwrap() {
            rep[j] = Some(i);
            wit[j] = w;
        }
    }
    Ok((rep.into_iter().map(Option::unwrap).collect(), wit, tests))
}

fn compose_witness<F: FiniteField>(
    outer: &Option<(Similitude<F>, F)>,
    inner: &Option<(Similitude<F>, F)>,
) -> Option<(Similitude<F>, F)> {
    // outer: rep -> mid, inner: mid -> item; act(h, act(g, P)) = act(g h, P)
    match (outer, inner) {
        (Some((g, l1)), Some((h, l2))) => Some((g.mul(h), *l1 * *l2)),
        _ => None,
    }
}

/// Two-phase classification: a FlagList pass under the restricted group,
/// then one under the full group on the survivors. Representatives are the
/// first-seen members of each class in input order.
pub fn classify<F: FiniteField>(
    case: &QuadricCase,
    cubics: &[MPoly<F>],
    opts: &ClassifyOptions,
) -> Result<Classification<F>, IsoError> {
    for p in cubics {
        check_cubic(p)?;
    }
    let n = cubics.len();
    let rational = |group: GroupKind| {
        let iso = IsoOptions {
            group,
            prefilter: opts.prefilter,
            witness: opts.witness,
        };
        move |a: &MPoly<F>, b: &MPoly<F>| -> Result<Option<Option<(Similitude<F>, F)>>, IsoError> {
            let out = is_isomorphic(case, a, b, &iso)?;
            Ok(out.isomorphic.then_some(out.witness))
        }
    };
    let closure = |a: &MPoly<F>, b: &MPoly<F>| -> Result<Option<Option<(Similitude<F>, F)>>, IsoError> {
        Ok(is_isomorphic_closure(case, a, b)?.then_some(None))
    };
    // over the closure, and in the degenerate case, every similitude is a
    // scalar times an orthogonal one, so the first pass would repeat the second
    let two_phase = opts.phase1 && opts.field == Field::Rational && case.tag != CaseTag::Dege;

    let identity = |len: usize| -> (Vec<usize>, Vec<Option<(Similitude<F>, F)>>, usize) {
        ((0..len).collect(), vec![None; len], 0)
    };
    let (rep1, wit1, tests1) = if two_phase {
        flag_pass(cubics, &rational(GroupKind::Orthogonal), opts.workers)?
    } else {
        identity(n)
    };
    let survivors: Vec<usize> = (0..n).filter(|&i| rep1[i] == i).collect();
    let items: Vec<MPoly<F>> = survivors.iter().map(|&i| cubics[i].clone()).collect();
    let (rep2, wit2, tests2) = match opts.field {
        Field::Rational => flag_pass(&items, &rational(GroupKind::Similitude), opts.workers)?,
        Field::Closure => flag_pass(&items, &closure, opts.workers)?,
    };
    let representatives: Vec<usize> = (0..items.len())
        .filter(|&k| rep2[k] == k)
        .map(|k| survivors[k])
        .collect();
    let class_id = |input: usize| representatives.iter().position(|&r| r == input).unwrap();
    let mut class_of = vec![0; n];
    let mut witnesses: Vec<Option<(Similitude<F>, F)>> = vec![None; n];
    let identity_witness = Some((Similitude::identity(*case), F::from_i64(1)));
    for i in 0..n {
        let mid = rep1[i];
        let k = survivors.iter().position(|&s| s == mid).unwrap();
        let rep = survivors[rep2[k]];
        class_of[i] = class_id(rep);
        let w_mid = if mid == i {
            identity_witness.clone()
        } else {
            wit1[i].clone()
        };
        let w_rep = if rep == mid {
            identity_witness.clone()
        } else {
            wit2[k].clone()
        };
        witnesses[i] = compose_witness(&w_rep, &w_mid);
    }
    Ok(Classification {
        representatives,
        class_of,
        witnesses,
        tests: [tests1, tests2],
    })
}

/// The change of coordinates from the N2 quadric to the N1 quadric over
/// `F_p^2`: `Q_N2(M X) = Q_N1(X)`.
pub fn n2_to_n1_matrix<const P: u32>(eps: u32) -> Option<Mat4<Fp2<P>>> {
    let e = Fp2::<P>::from(Fp::<P>::from_int(eps as i64));
    let r = e.sqrt()?;
    let r_inv = r.inv()?;
    let half = Fp2::<P>::from_base(Fp::from_int(2)).inv()?;
    let (o, z) = (Fp2::<P>::from_base(Fp::from_int(1)), Fp2::<P>::zero());
    Some([
        [o, z, z, z],
        [z, half, o, z],
        [z, half * r_inv, -r_inv, z],
        [z, z, z, o],
    ])
}

/// Transports an N2 cubic to the N1 quadric over `F_p^2`:
/// `P(M X) mod Q_N1`. The curves are isomorphic over the closure.
pub fn n2_to_n1<const P: u32>(p: &MPoly<Fp<P>>, eps: u32) -> Result<MPoly<Fp2<P>>, IsoError> {
    check_cubic(p)?;
    let m = n2_to_n1_matrix::<P>(eps).ok_or(IsoError::BadParameters)?;
    let lifted: MPoly<Fp2<P>> = p.embed();
    Ok(group::act_matrix(&QuadricCase::n1(), &m, &lifted))
}

/// One class of a classification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassEntry {
    pub id: usize,
    pub representative: String,
    pub size: usize,
}

/// One input cubic of a classification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberEntry {
    pub index: usize,
    pub cubic: String,
    pub class: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    /// The input form when `cubic` is its image under a change of quadric.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationMeta {
    pub case: CaseTag,
    pub q: u32,
    pub zeta: u32,
    pub epsilon: u32,
    pub quadric_rank: usize,
    pub field: Field,
    pub phase1: bool,
    pub preset_version: String,
    pub code_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub meta: ClassificationMeta,
    pub classes: Vec<ClassEntry>,
    pub members: Vec<MemberEntry>,
}

impl<F: FiniteField> Classification<F> {
    pub fn report(
        &self,
        case: &QuadricCase,
        cubics: &[MPoly<F>],
        opts: &ClassifyOptions,
    ) -> ClassificationReport {
        let ring = PolyRing::xyzw();
        let classes = self
            .representatives
            .iter()
            .enumerate()
            .map(|(id, &r)| ClassEntry {
                id,
                representative: ring.render(&cubics[r]),
                size: self.class_of.iter().filter(|&&c| c == id).count(),
            })
            .collect();
        let members = cubics
            .iter()
            .enumerate()
            .map(|(index, p)| MemberEntry {
                index,
                cubic: ring.render(p),
                class: self.class_of[index],
                witness: self.witnesses[index]
                    .as_ref()
                    .map(|(g, l)| g.record(*l)),
                source: None,
            })
            .collect();
        ClassificationReport {
            meta: ClassificationMeta {
                case: case.tag,
                q: F::ORDER,
                zeta: crate::field::primitive_element(F::CHARACTERISTIC as u64).unwrap_or(0),
                epsilon: case.eps,
                quadric_rank: case.rank(),
                field: opts.field,
                phase1: opts.phase1,
                preset_version: crate::families::PresetTable::builtin().version,
                code_version: env!("CARGO_PKG_VERSION").to_string(),
            },
            classes,
            members,
        }
    }
}

#[cfg(test)]
mod tests;
