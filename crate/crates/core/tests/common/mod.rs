#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use ssp_core::enumerate::{enumerate_case, split_region, Backend, EnumerationReport, EnumerationTask};
use ssp_core::families::{preset_splits, templates, CaseTag, HybridSplit, QuadricCase};
use ssp_core::isomorphism::group::weyl_len;
use ssp_core::isomorphism::{compose, Factor, Similitude};
use ssp_core::{FiniteField, MPoly, Monomial};

pub fn cubic_set(r: &EnumerationReport) -> BTreeSet<String> {
    r.curves.iter().map(|c| c.cubic.clone()).collect()
}

pub fn run<F: FiniteField>(
    case: QuadricCase,
    split: &HybridSplit,
    slice: &BTreeMap<String, u32>,
    backend: Backend,
) -> EnumerationReport {
    let mut task = EnumerationTask::new(case, split.clone());
    task.backend = backend;
    task.slice = slice.clone();
    task.workers = workers();
    enumerate_case::<F>(&task).unwrap()
}

pub fn workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Pins randomly chosen free slots of a split until its region has at most
/// `max` points. Pinned values come from `centre` when given, so the region
/// keeps that point.
pub fn random_slice<F: FiniteField>(
    case: QuadricCase,
    split: &HybridSplit,
    max: u128,
    centre: Option<&BTreeMap<String, F>>,
    rng: &mut impl Rng,
) -> BTreeMap<String, u32> {
    let t = templates::<F>(case)
        .unwrap()
        .into_iter()
        .find(|t| t.form == split.form)
        .unwrap();
    let mut slice = BTreeMap::new();
    let mut names: Vec<String> = t
        .slots
        .iter()
        .map(|s| s.name.clone())
        .filter(|n| !split.fixed.contains_key(n))
        .collect();
    names.shuffle(rng);
    for n in names {
        let size: u128 = split_region(&t, split, &slice)
            .unwrap()
            .iter()
            .map(|(_, v)| v.len() as u128)
            .product();
        if size <= max {
            break;
        }
        let v = match centre {
            Some(c) => c[&n],
            None => {
                let vals = split.slot_values(&t, &n).unwrap();
                vals[rng.gen_range(0..vals.len())]
            }
        };
        slice.insert(n, v.index());
    }
    slice
}

pub fn split(tag: CaseTag, q: u32, id: &str, form: u8) -> HybridSplit {
    preset_splits(tag, q)
        .unwrap()
        .into_iter()
        .find(|s| s.id == id && s.form == form)
        .unwrap()
}

/// A random group element as a product of Bruhat generators.
pub fn random_similitude<F: FiniteField>(case: &QuadricCase, rng: &mut impl Rng) -> Similitude<F> {
    let q = F::ORDER;
    let mut any = || F::from_index(rng.gen_range(0..q));
    let mut vals: Vec<F> = (0..12).map(|_| any()).collect();
    let units: Vec<F> = (0..4)
        .map(|_| F::from_index(rng.gen_range(1..q)))
        .collect();
    let torus = match case.tag {
        CaseTag::N1 => Factor::Torus(vec![units[0], units[1], units[2]]),
        // b = 0 keeps the norm a unit
        CaseTag::N2 => Factor::Torus(vec![units[0], units[1], F::zero()]),
        CaseTag::Dege => Factor::Torus(vec![units[0], units[1]]),
    };
    let mut factors = vec![torus, Factor::U1(vals.pop().unwrap())];
    if case.tag != CaseTag::Dege {
        factors.push(Factor::U2(vals.pop().unwrap()));
        if rng.gen_bool(0.5) {
            factors.insert(0, Factor::A);
        }
    }
    factors.push(Factor::W(rng.gen_range(0..weyl_len(case))));
    factors.push(Factor::U1(vals.pop().unwrap()));
    if case.tag == CaseTag::Dege {
        factors.push(Factor::V([units[3], vals[0], vals[1], vals[2]]));
    }
    compose(case, &factors).unwrap()
}

pub fn random_cubic<F: FiniteField>(rng: &mut impl Rng) -> MPoly<F> {
    let mut terms = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=3 - a {
            for c in 0..=3 - a - b {
                let m = Monomial::from_exps(&[a, b, c, 3 - a - b - c]);
                terms.push((m, F::from_index(rng.gen_range(0..F::ORDER))));
            }
        }
    }
    MPoly::from_terms(terms)
}

/// Published cubics of a set with the split each falls in and its slot
/// values.
pub fn published_points<F: FiniteField>(
    name: &str,
) -> Vec<(HybridSplit, BTreeMap<String, F>)> {
    let set = ssp_core::published::published_set(name).unwrap();
    let case = set.quadric_case();
    let ts = templates::<F>(case).unwrap();
    let splits = preset_splits(case.tag, F::ORDER).unwrap();
    let mut out = Vec::new();
    for p in set.cubics::<F>() {
        for t in &ts {
            let Some(v) = t.decompose(&p) else { continue };
            if let Some(s) = splits.iter().find(|s| s.form == t.form && s.contains(t, &v)) {
                out.push((s.clone(), v));
            }
        }
    }
    out
}
