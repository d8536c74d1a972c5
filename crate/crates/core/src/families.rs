//! Quadric normal forms, reduced cubic templates, and the preset splits
//! that drive the double hybrid enumeration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{primitive_element, FiniteField};
use crate::poly::{MPoly, Monomial, PolyRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("unsupported case/q combination: {0} over F_{1}")]
    Unsupported(CaseTag, u32),
    #[error("unknown slot {0:?}")]
    UnknownSlot(String),
    #[error("invalid preset table: {0}")]
    Preset(String),
    #[error("epsilon {0} is not a non-square modulo {1}")]
    BadEpsilon(u32, u32),
}

/// The three normal forms of the quadric.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    N1,
    N2,
    Dege,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::N1 => "n1",
            CaseTag::N2 => "n2",
            CaseTag::Dege => "dege",
        })
    }
}

impl FromStr for CaseTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "n1" => Ok(CaseTag::N1),
            "n2" => Ok(CaseTag::N2),
            "dege" => Ok(CaseTag::Dege),
            other => Err(format!("unknown case {other:?} (expected n1, n2 or dege)")),
        }
    }
}

/// A quadric case; `eps` is the non-square of the N2 form (ignored otherwise).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadricCase {
    pub tag: CaseTag,
    pub eps: u32,
}

/// Default non-square for N2: 2 whenever it is a non-square.
pub fn default_epsilon(q: u32) -> u32 {
    crate::field::smallest_nonsquare(q)
}

impl QuadricCase {
    pub fn n1() -> Self {
        QuadricCase {
            tag: CaseTag::N1,
            eps: 0,
        }
    }

    pub fn n2(eps: u32) -> Self {
        QuadricCase {
            tag: CaseTag::N2,
            eps,
        }
    }

    pub fn dege() -> Self {
        QuadricCase {
            tag: CaseTag::Dege,
            eps: 0,
        }
    }

    /// The case with the default epsilon for `q`.
    pub fn for_tag(tag: CaseTag, q: u32) -> Self {
        match tag {
            CaseTag::N1 => Self::n1(),
            CaseTag::N2 => Self::n2(default_epsilon(q)),
            CaseTag::Dege => Self::dege(),
        }
    }

    pub fn validate<F: FiniteField>(&self) -> Result<(), FamilyError> {
        if self.tag == CaseTag::N2 {
            let e = F::from_i64(self.eps as i64);
            let is_square = F::elements().iter().any(|r| *r * *r == e);
            if is_square {
                return Err(FamilyError::BadEpsilon(self.eps, F::ORDER));
            }
        }
        Ok(())
    }

    pub fn quadric<F: FiniteField>(&self) -> MPoly<F> {
        let r = PolyRing::xyzw();
        let s = match self.tag {
            CaseTag::N1 => "2*x*w + 2*y*z".to_string(),
            CaseTag::N2 => format!("2*x*w + y^2 - {}*z^2", self.eps),
            CaseTag::Dege => "2*y*w + z^2".to_string(),
        };
        r.parse(&s).expect("quadric literal")
    }

    /// The monomial eliminated when reducing cubics modulo the quadric.
    pub fn reducing_monomial(&self) -> Monomial {
        match self.tag {
            CaseTag::N1 | CaseTag::N2 => Monomial::from_exps(&[1, 0, 0, 1]),
            CaseTag::Dege => Monomial::from_exps(&[0, 1, 0, 1]),
        }
    }

    /// Symmetric Gram matrix `phi` with `Q(v) = v^T phi v`.
    pub fn gram<F: FiniteField>(&self) -> [[F; 4]; 4] {
        let mut g = [[F::zero(); 4]; 4];
        match self.tag {
            CaseTag::N1 => {
                for i in 0..4 {
                    g[i][3 - i] = F::one();
                }
            }
            CaseTag::N2 => {
                g[0][3] = F::one();
                g[3][0] = F::one();
                g[1][1] = F::one();
                g[2][2] = -F::from_i64(self.eps as i64);
            }
            CaseTag::Dege => {
                g[1][3] = F::one();
                g[3][1] = F::one();
                g[2][2] = F::one();
            }
        }
        g
    }

    pub fn rank(&self) -> usize {
        match self.tag {
            CaseTag::Dege => 3,
            _ => 4,
        }
    }
}

/// Allowed values of a template slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlotDomain {
    Any,
    Units,
    /// A finite list of residues (discrete `b` slots).
    Values(Vec<u32>),
}

impl SlotDomain {
    pub fn values<F: FiniteField>(&self) -> Vec<F> {
        match self {
            SlotDomain::Any => F::elements(),
            SlotDomain::Units => F::units(),
            SlotDomain::Values(v) => v.iter().map(|x| F::from_i64(*x as i64)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Slot<F> {
    pub name: String,
    pub domain: SlotDomain,
    /// The cubic multiplied by the slot's value.
    pub form: MPoly<F>,
}

/// A reduced family: `fixed + sum(slot_value * slot_form)`, with optional
/// "not all zero" constraints on groups of slots.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicTemplate<F> {
    pub case: QuadricCase,
    pub form: u8,
    pub fixed: MPoly<F>,
    pub slots: Vec<Slot<F>>,
    pub nonzero_groups: Vec<Vec<String>>,
}

impl<F: FiniteField> CubicTemplate<F> {
    pub fn slot(&self, name: &str) -> Option<&Slot<F>> {
        self.slots.iter().find(|s| s.name == name)
    }

    pub fn slot_index(&self, name: &str) -> Result<usize, FamilyError> {
        self.slots
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| FamilyError::UnknownSlot(name.to_string()))
    }

    /// The numeric cubic for a full assignment of slot values.
    pub fn instantiate(&self, values: &BTreeMap<String, F>) -> Result<MPoly<F>, FamilyError> {
        let mut acc = self.fixed.clone();
        for s in &self.slots {
            let v = values
                .get(&s.name)
                .ok_or_else(|| FamilyError::UnknownSlot(s.name.clone()))?;
            if !v.is_zero() {
                acc = &acc + &s.form.scale(*v);
            }
        }
        Ok(acc)
    }

    /// Whether a full assignment respects slot domains and nonzero groups.
    pub fn admissible(&self, values: &BTreeMap<String, F>) -> bool {
        for s in &self.slots {
            let Some(v) = values.get(&s.name) else {
                return false;
            };
            let ok = match &s.domain {
                SlotDomain::Any => true,
                SlotDomain::Units => !v.is_zero(),
                SlotDomain::Values(list) => list.iter().any(|x| F::from_i64(*x as i64) == *v),
            };
            if !ok {
                return false;
            }
        }
        self.nonzero_groups.iter().all(|g| {
            g.iter()
                .any(|n| values.get(n).is_some_and(|v| !v.is_zero()))
        })
    }

    /// Flat polynomial in `x, y, z, w` followed by the `symbolic` slots as
    /// variables 4.., with all other slots taken from `values`.
    pub fn symbolic(
        &self,
        values: &BTreeMap<String, F>,
        symbolic: &[String],
    ) -> Result<MPoly<F>, FamilyError> {
        let mut acc = self.fixed.clone();
        for s in &self.slots {
            if let Some(k) = symbolic.iter().position(|n| *n == s.name) {
                let var = Monomial::var(4 + k);
                acc = &acc + &s.form.mul_term(var, &F::one());
            } else {
                let v = values
                    .get(&s.name)
                    .ok_or_else(|| FamilyError::UnknownSlot(s.name.clone()))?;
                if !v.is_zero() {
                    acc = &acc + &s.form.scale(*v);
                }
            }
        }
        Ok(acc)
    }

    /// Slot values with `instantiate(values) = p`, if `p` lies in the
    /// linear span of the template (domains are not checked).
    pub fn decompose(&self, p: &MPoly<F>) -> Option<BTreeMap<String, F>> {
        let target = p - &self.fixed;
        let mut monos: Vec<Monomial> = target.terms().iter().map(|(m, _)| *m).collect();
        for s in &self.slots {
            monos.extend(s.form.terms().iter().map(|(m, _)| *m));
        }
        monos.sort();
        monos.dedup();
        let n = self.slots.len();
        // rows: one per monomial, columns: slots then the right-hand side
        let mut rows: Vec<Vec<F>> = monos
            .iter()
            .map(|m| {
                let mut r: Vec<F> = self.slots.iter().map(|s| s.form.coefficient_of(*m)).collect();
                r.push(target.coefficient_of(*m));
                r
            })
            .collect();
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..n {
            let Some(k) = (top..rows.len()).find(|&k| !rows[k][col].is_zero()) else {
                continue;
            };
            rows.swap(top, k);
            let inv = rows[top][col].inv().expect("nonzero pivot");
            for x in rows[top].iter_mut() {
                *x *= inv;
            }
            for k in 0..rows.len() {
                if k != top && !rows[k][col].is_zero() {
                    let f = rows[k][col];
                    for j in 0..=n {
                        let d = rows[top][j] * f;
                        rows[k][j] -= d;
                    }
                }
            }
            pivots.push(col);
            top += 1;
        }
        if rows[top..].iter().any(|r| !r[n].is_zero()) {
            return None;
        }
        let mut values: BTreeMap<String, F> =
            self.slots.iter().map(|s| (s.name.clone(), F::zero())).collect();
        for (r, col) in pivots.iter().enumerate() {
            values.insert(self.slots[*col].name.clone(), rows[r][n]);
        }
        Some(values)
    }

    pub fn a_slots(&self) -> Vec<String> {
        self.slots
            .iter()
            .filter(|s| s.name.starts_with('a'))
            .map(|s| s.name.clone())
            .collect()
    }

    pub fn b_slots(&self) -> Vec<String> {
        self.slots
            .iter()
            .filter(|s| s.name.starts_with('b'))
            .map(|s| s.name.clone())
            .collect()
    }
}

fn cubic<F: FiniteField>(s: &str) -> MPoly<F> {
    PolyRing::xyzw().parse(s).expect("template literal")
}

fn slot<F: FiniteField>(name: &str, domain: SlotDomain, form: &str) -> Slot<F> {
    Slot {
        name: name.to_string(),
        domain,
        form: cubic(form),
    }
}

/// The reduced templates for a case over `F_q` (`q = F::ORDER`, prime).
/// Dege over `F_5` has two forms; every other supported case has one.
pub fn templates<F: FiniteField>(case: QuadricCase) -> Result<Vec<CubicTemplate<F>>, FamilyError> {
    let q = F::ORDER;
    if q != F::CHARACTERISTIC || q < 5 {
        return Err(FamilyError::Unsupported(case.tag, q));
    }
    case.validate::<F>()?;
    let zeta = primitive_element(q as u64).expect("prime order");
    let any = || SlotDomain::Any;
    let bits = || SlotDomain::Values(vec![0, 1]);
    let e = case.eps;
    let out = match case.tag {
        CaseTag::N1 => vec![CubicTemplate {
            case,
            form: 1,
            fixed: cubic("x^2*y"),
            slots: vec![
                slot("b1", SlotDomain::Values(vec![0, 1, zeta]), "x^2*z"),
                slot("b2", bits(), "x*z^2"),
                slot("a1", any(), "y^3"),
                slot("a2", any(), "y^2*z"),
                slot("a3", any(), "y*z^2"),
                slot("a4", any(), "z^3"),
                slot("a5", any(), "y^2*w"),
                slot("a6", any(), "y*z*w"),
                slot("a7", any(), "z^2*w"),
                slot("a8", any(), "y*w^2"),
                slot("a9", any(), "z*w^2"),
                slot("a10", any(), "w^3"),
            ],
            nonzero_groups: vec![],
        }],
        CaseTag::N2 => vec![CubicTemplate {
            case,
            form: 1,
            fixed: MPoly::zero(),
            slots: vec![
                slot("a1", any(), "x^2*y"),
                slot("a2", any(), "x^2*z"),
                slot("a3", any(), &format!("(y^2 - {e}*z^2)*x")),
                slot("b1", bits(), &format!("y*(y^2 - {e}*z^2)")),
                slot("a4", any(), &format!("y*(y^2 + 3*{e}*z^2)")),
                slot("a5", any(), &format!("z*(3*y^2 + {e}*z^2)")),
                slot("a6", any(), "y^2*w"),
                slot("a7", any(), "y*z*w"),
                slot("b2", bits(), "z^2*w"),
                slot("a8", any(), "y*w^2"),
                slot("a9", any(), "z*w^2"),
                slot("a10", any(), "w^3"),
            ],
            nonzero_groups: vec![vec!["a1".into(), "a2".into()]],
        }],
        CaseTag::Dege => {
            let mut v = vec![CubicTemplate {
                case,
                form: 1,
                fixed: MPoly::zero(),
                slots: vec![
                    slot("a0", SlotDomain::Units, "x^3"),
                    slot("a1", any(), "x*y^2"),
                    slot("a2", any(), "x*z^2"),
                    slot("a3", any(), "x*w^2"),
                    slot("a4", any(), "x*y*z"),
                    slot("a5", any(), "x*z*w"),
                    slot("a6", SlotDomain::Units, "y^3"),
                    slot("a7", any(), "z^3"),
                    slot("a8", any(), "w^3"),
                    slot("a9", any(), "y*z^2"),
                    slot("b1", bits(), "z^2*w"),
                    slot("b2", bits(), "z*w^2"),
                ],
                nonzero_groups: vec![],
            }];
            if q == 5 {
                v.push(CubicTemplate {
                    case,
                    form: 2,
                    fixed: cubic("x^3 + y^2*z + z*w^2"),
                    slots: vec![
                        slot("a1", any(), "x*y^2"),
                        slot("a2", any(), "x*z^2"),
                        slot("a3", any(), "x*w^2"),
                        slot("a4", any(), "x*y*z"),
                        slot("b1", bits(), "x*z*w"),
                    ],
                    nonzero_groups: vec![],
                });
            }
            v
        }
    };
    Ok(out)
}

/// One double-hybrid configuration, as stored in the preset table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HybridSplit {
    pub id: String,
    pub case: CaseTag,
    pub q: u32,
    #[serde(default = "one_u8")]
    pub form: u8,
    /// Allowed values for each discrete slot; `"zeta"` is the primitive
    /// element. Slots not listed use the template's full list.
    #[serde(default)]
    pub discrete: BTreeMap<String, Vec<String>>,
    /// Slots pinned to a single value for the whole split.
    #[serde(default)]
    pub fixed: BTreeMap<String, u32>,
    /// Slots restricted to nonzero values on top of the template domain.
    #[serde(default)]
    pub units: Vec<String>,
    /// Slots enumerated in the outer loop (numeric during the power).
    #[serde(default)]
    pub outer: Vec<String>,
    /// Slots kept symbolic while forming `(PQ)^(p-1)`.
    pub symbolic: Vec<String>,
    /// Symbolic slots enumerated in the inner loop.
    #[serde(default)]
    pub inner: Vec<String>,
    /// Remaining symbolic slots as an ascending grevlex chain (least first).
    pub solve_order: Vec<String>,
}

fn one_u8() -> u8 {
    1
}

impl HybridSplit {
    pub fn s1(&self) -> usize {
        self.symbolic.len()
    }

    pub fn s2(&self) -> usize {
        self.solve_order.len()
    }

    /// The solve ring, greatest variable first.
    pub fn solve_ring(&self) -> PolyRing {
        PolyRing::from_ascending(&self.solve_order)
    }

    /// Checks the split against its template: every `a` slot is outer,
    /// symbolic or fixed exactly once; inner and solve slots partition the
    /// symbolic ones.
    pub fn validate<F: FiniteField>(&self, t: &CubicTemplate<F>) -> Result<(), FamilyError> {
        let err = |m: String| Err(FamilyError::Preset(format!("split {}: {m}", self.id)));
        let mut seen: Vec<&String> = Vec::new();
        for n in self
            .outer
            .iter()
            .chain(&self.symbolic)
            .chain(self.fixed.keys())
        {
            if t.slot(n).is_none() || !n.starts_with('a') {
                return err(format!("{n} is not a coefficient slot of the template"));
            }
            if seen.contains(&n) {
                return err(format!("{n} assigned twice"));
            }
            seen.push(n);
        }
        for a in t.a_slots() {
            if !seen.contains(&&a) {
                return err(format!("{a} is not covered"));
            }
        }
        let mut solve_set: Vec<&String> = self
            .symbolic
            .iter()
            .filter(|n| !self.inner.contains(n))
            .collect();
        let mut order: Vec<&String> = self.solve_order.iter().collect();
        solve_set.sort();
        order.sort();
        if solve_set != order {
            return err(
                "solve_order must list exactly the symbolic slots that are not inner".into(),
            );
        }
        if self.inner.iter().any(|n| !self.symbolic.contains(n)) {
            return err("inner slots must be symbolic".into());
        }
        for n in self.discrete.keys() {
            if !t.b_slots().contains(n) {
                return err(format!("{n} is not a discrete slot"));
            }
        }
        for n in &self.units {
            if t.slot(n).is_none() {
                return err(format!("unknown unit slot {n}"));
            }
        }
        if self.symbolic.len() + 4 > Monomial::MAX_VARS {
            return err("too many symbolic slots".into());
        }
        Ok(())
    }

    fn value_of<F: FiniteField>(s: &str) -> Result<F, FamilyError> {
        if s == "zeta" {
            let z = primitive_element(F::ORDER as u64)
                .map_err(|e| FamilyError::Preset(e.to_string()))?;
            return Ok(F::from_i64(z as i64));
        }
        s.parse::<i64>()
            .map(F::from_i64)
            .map_err(|_| FamilyError::Preset(format!("bad discrete value {s:?}")))
    }

    /// Values each slot ranges over under this split.
    pub fn slot_values<F: FiniteField>(
        &self,
        t: &CubicTemplate<F>,
        name: &str,
    ) -> Result<Vec<F>, FamilyError> {
        if let Some(v) = self.fixed.get(name) {
            return Ok(vec![F::from_i64(*v as i64)]);
        }
        let slot = t
            .slot(name)
            .ok_or_else(|| FamilyError::UnknownSlot(name.to_string()))?;
        let mut vals: Vec<F> = match self.discrete.get(name) {
            Some(list) => list
                .iter()
                .map(|s| Self::value_of::<F>(s))
                .collect::<Result<_, _>>()?,
            None => slot.domain.values(),
        };
        if self.units.iter().any(|u| u == name) {
            vals.retain(|v| !v.is_zero());
        }
        Ok(vals)
    }

    /// Whether a full assignment lies in this split's region.
    pub fn contains<F: FiniteField>(
        &self,
        t: &CubicTemplate<F>,
        values: &BTreeMap<String, F>,
    ) -> bool {
        t.admissible(values)
            && t.slots.iter().all(|s| {
                let v = values[&s.name];
                self.slot_values(t, &s.name)
                    .map(|vals| vals.contains(&v))
                    .unwrap_or(false)
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetTable {
    pub version: String,
    #[serde(rename = "split")]
    pub splits: Vec<HybridSplit>,
}

/// The preset table shipped with the crate.
pub const BUILTIN_PRESETS: &str = include_str!("../presets/splits.toml");

impl PresetTable {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_PRESETS).expect("built-in preset table parses")
    }

    pub fn parse(text: &str) -> Result<Self, FamilyError> {
        toml::from_str(text).map_err(|e| FamilyError::Preset(e.to_string()))
    }

    /// The splits for a case and field, in table order.
    pub fn splits(&self, tag: CaseTag, q: u32) -> Result<Vec<HybridSplit>, FamilyError> {
        let v: Vec<HybridSplit> = self
            .splits
            .iter()
            .filter(|s| s.case == tag && s.q == q)
            .cloned()
            .collect();
        if v.is_empty() {
            return Err(FamilyError::Unsupported(tag, q));
        }
        Ok(v)
    }

    pub fn find(&self, tag: CaseTag, q: u32, id: &str) -> Result<HybridSplit, FamilyError> {
        self.splits(tag, q)?
            .into_iter()
            .find(|s| s.id == id)
            .ok_or_else(|| FamilyError::Preset(format!("no split {id:?} for {tag} over F_{q}")))
    }
}

/// Preset splits for a case and field from the built-in table.
pub fn preset_splits(tag: CaseTag, q: u32) -> Result<Vec<HybridSplit>, FamilyError> {
    PresetTable::builtin().splits(tag, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    type F5 = Fp<5>;
    type F11 = Fp<11>;

    #[test]
    fn quadrics() {
        let r = PolyRing::xyzw();
        assert_eq!(
            r.render(&QuadricCase::n1().quadric::<F11>()),
            "2*y*z + 2*x*w"
        );
        assert_eq!(
            QuadricCase::n2(2).quadric::<F11>(),
            r.parse("2*x*w + y^2 + 9*z^2").unwrap()
        );
        assert_eq!(
            QuadricCase::dege().quadric::<F11>(),
            r.parse("2*y*w + z^2").unwrap()
        );
        assert!(QuadricCase::n2(3).validate::<F11>().is_err());
    }

    #[test]
    fn gram_matches_quadric() {
        for case in [QuadricCase::n1(), QuadricCase::n2(2), QuadricCase::dege()] {
            let g = case.gram::<F11>();
            let mut q = MPoly::<F11>::zero();
            for i in 0..4 {
                for j in 0..4 {
                    let m = Monomial::var(i).mul(Monomial::var(j));
                    q = &q + &MPoly::term(m, g[i][j]);
                }
            }
            assert_eq!(q, case.quadric::<F11>());
        }
    }

    #[test]
    fn template_counts() {
        assert_eq!(templates::<F5>(QuadricCase::dege()).unwrap().len(), 2);
        assert_eq!(templates::<F11>(QuadricCase::dege()).unwrap().len(), 1);
        let n1 = &templates::<F11>(QuadricCase::n1()).unwrap()[0];
        assert_eq!(
            n1.slot("b1").unwrap().domain,
            SlotDomain::Values(vec![0, 1, 2])
        );
    }

    #[test]
    fn published_cubics_decompose_into_preset_regions() {
        fn check<F: FiniteField>(name: &str) -> usize {
            let set = crate::published::published_set(name).unwrap();
            let case = set.quadric_case();
            let ts = templates::<F>(case).unwrap();
            let splits = preset_splits(case.tag, F::ORDER).unwrap();
            let mut inside = 0;
            for p in set.cubics::<F>() {
                for t in &ts {
                    let Some(v) = t.decompose(&p) else { continue };
                    assert_eq!(t.instantiate(&v).unwrap(), p);
                    if splits.iter().any(|s| s.form == t.form && s.contains(t, &v)) {
                        inside += 1;
                    }
                }
            }
            inside
        }
        assert_eq!(check::<F5>("dege-q5"), 7);
        assert_eq!(check::<F11>("n1-q11"), 8);
        assert_eq!(check::<F11>("n2-q11"), 5);
        assert_eq!(check::<F11>("dege-q11"), 17);
    }

    #[test]
    fn templates_avoid_reducing_monomial() {
        fn check<F: FiniteField>() {
            for case in [
                QuadricCase::n1(),
                QuadricCase::for_tag(CaseTag::N2, F::ORDER),
                QuadricCase::dege(),
            ] {
                let m = case.reducing_monomial();
                for t in templates::<F>(case).unwrap() {
                    let all = std::iter::once(&t.fixed).chain(t.slots.iter().map(|s| &s.form));
                    for f in all {
                        assert!(f.terms().iter().all(|(mm, _)| !m.divides(*mm)));
                        assert!(f.is_zero() || (f.is_homogeneous() && f.total_degree() == Some(3)));
                    }
                }
            }
        }
        check::<F5>();
        check::<F11>();
    }

    #[test]
    fn builtin_presets_validate() {
        let table = PresetTable::builtin();
        for s in &table.splits {
            match s.q {
                5 => check_split::<F5>(s),
                11 => check_split::<F11>(s),
                7 => check_split::<Fp<7>>(s),
                _ => panic!("unexpected q"),
            }
        }
        fn check_split<F: FiniteField>(s: &HybridSplit) {
            let ts = templates::<F>(QuadricCase::for_tag(s.case, F::ORDER)).unwrap();
            let t = ts.iter().find(|t| t.form == s.form).unwrap();
            s.validate(t).unwrap();
        }
        let n1 = table.splits(CaseTag::N1, 11).unwrap();
        assert_eq!(
            n1.iter().map(|s| (s.s1(), s.s2())).collect::<Vec<_>>(),
            vec![(8, 6), (9, 5), (8, 4)]
        );
        let d5 = table.splits(CaseTag::Dege, 5).unwrap();
        assert!(d5.iter().all(|s| s.inner.is_empty() && s.s1() == s.s2()));
        assert_eq!(d5.iter().map(|s| s.s1()).collect::<Vec<_>>(), vec![8, 4]);
        let d11 = table.splits(CaseTag::Dege, 11).unwrap();
        assert_eq!(d11.len(), 1);
        assert_eq!(d11[0].outer, vec!["a0"]);
        assert_eq!(
            d11[0].solve_ring().names(),
            ["a2", "a5", "a3", "a9", "a7", "a8"]
                .map(String::from)
                .to_vec()
        );
        assert!(matches!(
            table.splits(CaseTag::N1, 13),
            Err(FamilyError::Unsupported(..))
        ));
    }

    /// Counts parameter points per split; the N1 splits over F_11 must
    /// partition the template's full space.
    #[test]
    fn n1_splits_partition_parameter_space() {
        let t = &templates::<F11>(QuadricCase::n1()).unwrap()[0];
        let splits = preset_splits(CaseTag::N1, 11).unwrap();
        let count = |s: &HybridSplit| -> u128 {
            t.slots
                .iter()
                .map(|sl| s.slot_values(t, &sl.name).unwrap().len() as u128)
                .product()
        };
        let total: u128 = splits.iter().map(count).sum();
        let full: u128 = t
            .slots
            .iter()
            .map(|sl| sl.domain.values::<F11>().len() as u128)
            .product();
        assert_eq!(total, full);
        // disjointness on the distinguishing slots b1 and a4
        let region = |s: &HybridSplit| -> Vec<(F11, F11)> {
            let mut v = Vec::new();
            for b in s.slot_values(t, "b1").unwrap() {
                for a in s.slot_values(t, "a4").unwrap() {
                    v.push((b, a));
                }
            }
            v
        };
        let mut all: Vec<(F11, F11)> = splits.iter().flat_map(region).collect();
        let n = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), n);
    }
}
