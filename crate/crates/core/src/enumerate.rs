//! Enumeration of superspecial curves in a reduced family: the double
//! hybrid driver and an exhaustive oracle.
//!
//! The hybrid driver walks the outer points (discrete slots times outer
//! slots), forms the 16 Hasse–Witt coefficients with the symbolic slots as
//! indeterminates, then for every inner point specializes those
//! coefficients and solves for the remaining slots.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::families::{CubicTemplate, FamilyError, HybridSplit, QuadricCase};
use crate::field::{primitive_element, FiniteField};
use crate::geometry::{is_nonsingular, CurveRecord, GeometryError};
use crate::hasse_witt::{hw_coefficients, HwError, HwEvaluator};
use crate::poly::{MPoly, PolyRing};
use crate::solver::{brute_force_variety, variety_over_fq, PolySystem, SolverError};

#[derive(Debug, Error)]
pub enum EnumError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Hw(#[from] HwError),
    #[error("solver failed at parameter point {point}: {source}")]
    Solver { point: String, source: SolverError },
    #[error("exhaustive search over {size} candidates exceeds the budget of {budget}")]
    Budget { size: u128, budget: u128 },
    #[error("slice names slot {0:?}, which is not a free slot of this split")]
    BadSlice(String),
    #[error("checkpoint {path}: {msg}")]
    Checkpoint { path: PathBuf, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Hybrid,
    Brute,
}

/// Limits on the work the driver will take on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Inner systems with `q^s2` at most this are solved by exhaustive
    /// search; larger ones go through a Gröbner basis.
    pub brute_threshold: u128,
    /// Largest parameter space the exhaustive oracle accepts.
    pub oracle_budget: u128,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            brute_threshold: 2_000_000,
            oracle_budget: 30_000_000,
        }
    }
}

/// One enumeration job over a single template and split.
#[derive(Clone, Debug)]
pub struct EnumerationTask {
    pub case: QuadricCase,
    pub split: HybridSplit,
    pub backend: Backend,
    pub budgets: Budgets,
    pub workers: usize,
    /// Pins enumerated slots to single values (`b1 = 1`, `a1 = 0`, ...).
    pub slice: BTreeMap<String, u32>,
    pub checkpoint: Option<PathBuf>,
}

impl EnumerationTask {
    pub fn new(case: QuadricCase, split: HybridSplit) -> Self {
        EnumerationTask {
            case,
            split,
            backend: Backend::Hybrid,
            budgets: Budgets::default(),
            workers: 1,
            slice: BTreeMap::new(),
            checkpoint: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnumerationStats {
    /// Outer points (discrete times outer slots).
    pub iterations1: u64,
    /// Inner points summed over all outer points.
    pub iterations2: u64,
    /// Inner systems that needed a solver call (not trivially inconsistent).
    pub systems_solved: u64,
    /// Parameter points where all Hasse–Witt coefficients vanish.
    pub hw_roots: u64,
    pub singular: u64,
    pub degenerate: u64,
    pub smooth: u64,
    /// Outer points taken from a checkpoint instead of recomputed.
    pub resumed: u64,
    pub seconds_symbolic: f64,
    pub seconds_solve: f64,
    pub seconds_smooth: f64,
}

impl EnumerationStats {
    pub fn absorb(&mut self, o: &EnumerationStats) {
        self.iterations1 += o.iterations1;
        self.iterations2 += o.iterations2;
        self.systems_solved += o.systems_solved;
        self.hw_roots += o.hw_roots;
        self.singular += o.singular;
        self.degenerate += o.degenerate;
        self.smooth += o.smooth;
        self.resumed += o.resumed;
        self.seconds_symbolic += o.seconds_symbolic;
        self.seconds_solve += o.seconds_solve;
        self.seconds_smooth += o.seconds_smooth;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub case: QuadricCase,
    pub q: u32,
    pub zeta: u32,
    pub epsilon: Option<u32>,
    pub split: Option<HybridSplit>,
    pub slice: BTreeMap<String, u32>,
    pub backend: Backend,
    pub preset_version: String,
    pub code_version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub meta: ReportMeta,
    pub curves: Vec<CurveRecord>,
    pub stats: EnumerationStats,
}

impl EnumerationReport {
    /// Concatenates the reports of several splits of one case. The merged
    /// meta keeps the first report's fields and drops the split.
    pub fn merge(reports: Vec<EnumerationReport>) -> Option<EnumerationReport> {
        let mut it = reports.into_iter();
        let mut out = it.next()?;
        let mut splits = 1;
        for r in it {
            out.stats.absorb(&r.stats);
            out.curves.extend(r.curves);
            splits += 1;
        }
        if splits > 1 {
            out.meta.split = None;
        }
        Some(out)
    }

    pub fn cubics<F: FiniteField>(&self) -> Vec<MPoly<F>> {
        let ring = PolyRing::xyzw();
        self.curves
            .iter()
            .map(|c| ring.parse(&c.cubic).expect("report cubic parses"))
            .collect()
    }
}

pub fn report_meta<F: FiniteField>(
    case: QuadricCase,
    split: Option<&HybridSplit>,
    slice: &BTreeMap<String, u32>,
    backend: Backend,
) -> ReportMeta {
    ReportMeta {
        case,
        q: F::ORDER,
        zeta: primitive_element(F::ORDER as u64).unwrap_or(0),
        epsilon: (case.tag == crate::families::CaseTag::N2).then_some(case.eps),
        split: split.cloned(),
        slice: slice.clone(),
        backend,
        preset_version: crate::families::PresetTable::builtin().version,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

/// Canonical sort key for a cubic: its terms in decreasing grevlex order.
pub fn cubic_key<F: FiniteField>(
    p: &MPoly<F>,
) -> Vec<(std::cmp::Reverse<crate::poly::Monomial>, u32)> {
    p.terms()
        .iter()
        .map(|(m, c)| (std::cmp::Reverse(*m), c.index()))
        .collect()
}

/// Calls `f` on every tuple of the cartesian product, first list varying
/// slowest.
pub fn for_each_tuple<T: Copy>(lists: &[Vec<T>], mut f: impl FnMut(&[T])) {
    if lists.iter().any(|l| l.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; lists.len()];
    let mut cur: Vec<T> = lists.iter().map(|l| l[0]).collect();
    loop {
        f(&cur);
        let mut k = lists.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < lists[k].len() {
                cur[k] = lists[k][idx[k]];
                break;
            }
            idx[k] = 0;
            cur[k] = lists[k][0];
        }
    }
}

fn sliced_values<F: FiniteField>(
    split: &HybridSplit,
    t: &CubicTemplate<F>,
    name: &str,
    slice: &BTreeMap<String, u32>,
) -> Result<Vec<F>, EnumError> {
    let mut v = split.slot_values(t, name)?;
    if let Some(x) = slice.get(name) {
        let x = F::from_i64(*x as i64);
        v.retain(|y| *y == x);
    }
    Ok(v)
}

/// Result of one outer point, as stored in the checkpoint.
#[derive(Clone, Debug, Serialize, Deserialize)]
struct PointResult {
    key: Vec<u32>,
    cubics: Vec<String>,
    stats: EnumerationStats,
}

struct Checkpoint {
    path: PathBuf,
    file: Mutex<File>,
}

impl Checkpoint {
    fn open(path: &Path) -> Result<(Self, Vec<PointResult>), EnumError> {
        let err = |msg: String| EnumError::Checkpoint {
            path: path.to_path_buf(),
            msg,
        };
        let mut done = Vec::new();
        if path.exists() {
            let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
            let mut valid_len = 0;
            let mut lines = text.split_inclusive('\n').enumerate().peekable();
            while let Some((n, line)) = lines.next() {
                let last = lines.peek().is_none();
                if line.trim().is_empty() {
                    valid_len += line.len();
                    continue;
                }
                match serde_json::from_str::<PointResult>(line) {
                    Ok(r) if line.ends_with('\n') => {
                        done.push(r);
                        valid_len += line.len();
                    }
                    // a torn final line from an interrupted run is dropped
                    _ if last => break,
                    Err(e) => return Err(err(format!("line {}: {e}", n + 1))),
                    Ok(_) => unreachable!("only the final line lacks a newline"),
                }
            }
            if valid_len < text.len() {
                let f = OpenOptions::new()
                    .write(true)
                    .open(path)
                    .map_err(|e| err(e.to_string()))?;
                f.set_len(valid_len as u64).map_err(|e| err(e.to_string()))?;
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| err(e.to_string()))?;
        Ok((
            Checkpoint {
                path: path.to_path_buf(),
                file: Mutex::new(file),
            },
            done,
        ))
    }

    fn append(&self, r: &PointResult) -> Result<(), EnumError> {
        let mut line = serde_json::to_string(r).expect("point result serializes");
        line.push('\n');
        let mut f = self.file.lock().unwrap();
        f.write_all(line.as_bytes())
            .and_then(|_| f.flush())
            .map_err(|e| EnumError::Checkpoint {
                path: self.path.clone(),
                msg: e.to_string(),
            })
    }
}

/// The per-outer-point work of the hybrid method.
struct HybridContext<'a, F> {
    template: &'a CubicTemplate<F>,
    split: &'a HybridSplit,
    quadric: MPoly<F>,
    /// Values for each inner slot.
    inner_values: Vec<Vec<F>>,
    /// Symbolic slot position -> variable index after renumbering (solve
    /// variables first, greatest first; inner variables after them).
    perm: Vec<usize>,
    solve_names: Vec<String>,
    ring: PolyRing,
    budgets: Budgets,
}

impl<'a, F: FiniteField> HybridContext<'a, F> {
    fn new(
        template: &'a CubicTemplate<F>,
        split: &'a HybridSplit,
        slice: &BTreeMap<String, u32>,
        budgets: Budgets,
        case: QuadricCase,
    ) -> Result<Self, EnumError> {
        let ring = split.solve_ring();
        let solve_names: Vec<String> = ring.names().to_vec();
        let s2 = solve_names.len();
        let mut perm = vec![0; split.symbolic.len()];
        for (k, name) in split.symbolic.iter().enumerate() {
            perm[k] = match solve_names.iter().position(|n| n == name) {
                Some(i) => i,
                None => {
                    s2 + split
                        .inner
                        .iter()
                        .position(|n| n == name)
                        .expect("validated split")
                }
            };
        }
        let inner_values = split
            .inner
            .iter()
            .map(|n| sliced_values(split, template, n, slice))
            .collect::<Result<_, _>>()?;
        Ok(HybridContext {
            template,
            split,
            quadric: case.quadric(),
            inner_values,
            perm,
            solve_names,
            ring,
            budgets,
        })
    }

    fn run_point(
        &self,
        fixed: &BTreeMap<String, F>,
    ) -> Result<(Vec<MPoly<F>>, EnumerationStats), EnumError> {
        let mut stats = EnumerationStats {
            iterations1: 1,
            ..Default::default()
        };
        let t0 = Instant::now();
        let flat = self.template.symbolic(fixed, &self.split.symbolic)?;
        let hw: Vec<MPoly<F>> = hw_coefficients(&flat, &self.quadric)?
            .into_iter()
            .map(|c| c.permute_vars(&self.perm))
            .filter(|c| !c.is_zero())
            .collect();
        stats.seconds_symbolic += t0.elapsed().as_secs_f64();
        let s2 = self.solve_names.len();
        let q = F::ORDER as u128;
        let solve_size = q.checked_pow(s2 as u32).unwrap_or(u128::MAX);
        let mut found = Vec::new();
        let mut failure: Option<EnumError> = None;
        for_each_tuple(&self.inner_values, |inner| {
            if failure.is_some() {
                return;
            }
            stats.iterations2 += 1;
            let asg: Vec<(usize, F)> = inner
                .iter()
                .enumerate()
                .map(|(j, v)| (s2 + j, *v))
                .collect();
            let mut sys: Vec<MPoly<F>> = Vec::with_capacity(hw.len());
            for c in &hw {
                let s = c.specialize(&asg);
                if s.is_zero() {
                    continue;
                }
                if s.is_constant() {
                    return;
                }
                if !sys.contains(&s) {
                    sys.push(s);
                }
            }
            stats.systems_solved += 1;
            let t1 = Instant::now();
            let system = PolySystem {
                ring: self.ring.clone(),
                gens: sys,
            };
            let sols = if solve_size <= self.budgets.brute_threshold {
                match brute_force_variety(&system, self.budgets.brute_threshold) {
                    Ok(s) => s,
                    Err(e) => {
                        failure = Some(EnumError::Solver {
                            point: self.describe(fixed, inner),
                            source: e,
                        });
                        return;
                    }
                }
            } else {
                variety_over_fq(&system)
            };
            stats.seconds_solve += t1.elapsed().as_secs_f64();
            let t2 = Instant::now();
            for sol in sols {
                let mut values = fixed.clone();
                for (n, v) in self.split.inner.iter().zip(inner) {
                    values.insert(n.clone(), *v);
                }
                for (n, v) in self.solve_names.iter().zip(&sol) {
                    values.insert(n.clone(), *v);
                }
                if !self.split.contains(self.template, &values) {
                    continue;
                }
                stats.hw_roots += 1;
                let p = self.template.instantiate(&values).expect("full assignment");
                match is_nonsingular(&p, &self.quadric) {
                    Ok(true) => {
                        stats.smooth += 1;
                        found.push(p);
                    }
                    Ok(false) => stats.singular += 1,
                    Err(GeometryError::Degenerate) | Err(GeometryError::NotForm(_)) => {
                        stats.degenerate += 1
                    }
                }
            }
            stats.seconds_smooth += t2.elapsed().as_secs_f64();
        });
        match failure {
            Some(e) => Err(e),
            None => Ok((found, stats)),
        }
    }

    fn describe(&self, fixed: &BTreeMap<String, F>, inner: &[F]) -> String {
        let mut parts: Vec<String> = fixed.iter().map(|(k, v)| format!("{k}={v}")).collect();
        parts.extend(
            self.split
                .inner
                .iter()
                .zip(inner)
                .map(|(k, v)| format!("{k}={v}")),
        );
        parts.join(",")
    }
}

/// Runs one split of one template with the hybrid method, or the
/// exhaustive oracle over the same region when the backend is `Brute`.
pub fn enumerate_case<F: FiniteField>(
    task: &EnumerationTask,
) -> Result<EnumerationReport, EnumError> {
    let templates = crate::families::templates::<F>(task.case)?;
    let template = templates
        .iter()
        .find(|t| t.form == task.split.form)
        .ok_or_else(|| {
            FamilyError::Preset(format!("no form {} for {}", task.split.form, task.case.tag))
        })?;
    task.split.validate(template)?;
    let meta = report_meta::<F>(task.case, Some(&task.split), &task.slice, task.backend);
    for k in task.slice.keys() {
        if template.slot(k).is_none() || task.split.fixed.contains_key(k) {
            return Err(EnumError::BadSlice(k.clone()));
        }
    }
    let mut task = task.clone();
    for (k, v) in &task.slice.clone() {
        if !task.split.solve_order.contains(k) {
            continue;
        }
        // a pinned solve slot becomes a fixed slot of the split
        let allowed = task.split.slot_values(template, k)?;
        if !allowed.contains(&F::from_i64(*v as i64)) {
            return Ok(finish::<F>(task.case, meta, Vec::new(), EnumerationStats::default()));
        }
        task.split.symbolic.retain(|n| n != k);
        task.split.solve_order.retain(|n| n != k);
        task.split.fixed.insert(k.clone(), *v);
    }
    let task = &task;
    if task.backend == Backend::Brute {
        let region = split_region(template, &task.split, &task.slice)?;
        let (curves, stats) =
            brute_force_enumerate(template, &region, task.budgets.oracle_budget, task.workers)?;
        return Ok(finish(task.case, meta, curves, stats));
    }

    let outer_names: Vec<String> = template
        .b_slots()
        .into_iter()
        .chain(task.split.outer.iter().cloned())
        .collect();
    let outer_values: Vec<Vec<F>> = outer_names
        .iter()
        .map(|n| sliced_values(&task.split, template, n, &task.slice))
        .collect::<Result<_, _>>()?;
    let mut points: Vec<Vec<F>> = Vec::new();
    for_each_tuple(&outer_values, |t| points.push(t.to_vec()));

    let ctx = HybridContext::new(template, &task.split, &task.slice, task.budgets, task.case)?;
    let (ckpt, done) = match &task.checkpoint {
        Some(p) => {
            let (c, d) = Checkpoint::open(p)?;
            (Some(c), d)
        }
        None => (None, Vec::new()),
    };
    let done: BTreeMap<Vec<u32>, PointResult> =
        done.into_iter().map(|r| (r.key.clone(), r)).collect();

    let results: Mutex<Vec<Option<(Vec<MPoly<F>>, EnumerationStats)>>> =
        Mutex::new(vec![None; points.len()]);
    let next = AtomicUsize::new(0);
    let failure: Mutex<Option<EnumError>> = Mutex::new(None);
    let ring = PolyRing::xyzw();
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        if i >= points.len() || failure.lock().unwrap().is_some() {
            return;
        }
        let key: Vec<u32> = points[i].iter().map(|v| v.index()).collect();
        if let Some(r) = done.get(&key) {
            let cubics = r
                .cubics
                .iter()
                .map(|s| ring.parse::<F>(s).expect("checkpoint cubic"))
                .collect();
            let mut stats = r.stats.clone();
            stats.resumed = 1;
            results.lock().unwrap()[i] = Some((cubics, stats));
            continue;
        }
        let fixed: BTreeMap<String, F> = outer_names
            .iter()
            .cloned()
            .zip(points[i].iter().copied())
            .chain(
                task.split
                    .fixed
                    .iter()
                    .map(|(k, v)| (k.clone(), F::from_i64(*v as i64))),
            )
            .collect();
        match ctx.run_point(&fixed) {
            Ok((cubics, stats)) => {
                if let Some(c) = &ckpt {
                    let rec = PointResult {
                        key,
                        cubics: cubics.iter().map(|p| ring.render(p)).collect(),
                        stats: stats.clone(),
                    };
                    if let Err(e) = c.append(&rec) {
                        *failure.lock().unwrap() = Some(e);
                        return;
                    }
                }
                results.lock().unwrap()[i] = Some((cubics, stats));
            }
            Err(e) => {
                *failure.lock().unwrap() = Some(e);
                return;
            }
        }
    };
    std::thread::scope(|s| {
        for _ in 1..task.workers.max(1) {
            s.spawn(worker);
        }
        worker();
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let mut stats = EnumerationStats::default();
    let mut curves = Vec::new();
    for r in results.into_inner().unwrap().into_iter().flatten() {
        stats.absorb(&r.1);
        curves.extend(r.0);
    }
    Ok(finish(task.case, meta, curves, stats))
}

fn finish<F: FiniteField>(
    case: QuadricCase,
    meta: ReportMeta,
    mut curves: Vec<MPoly<F>>,
    stats: EnumerationStats,
) -> EnumerationReport {
    curves.sort_by_cached_key(|p| cubic_key(p));
    let before = curves.len();
    curves.dedup();
    assert_eq!(
        before,
        curves.len(),
        "a cubic was produced twice within one split"
    );
    let curves = curves
        .iter()
        .map(|p| {
            let mut r = CurveRecord::new(case, p);
            r.superspecial = Some(true);
            r.smooth = Some(true);
            r
        })
        .collect();
    EnumerationReport {
        meta,
        curves,
        stats,
    }
}

/// The values each template slot takes inside a split, after slicing.
pub fn split_region<F: FiniteField>(
    template: &CubicTemplate<F>,
    split: &HybridSplit,
    slice: &BTreeMap<String, u32>,
) -> Result<Vec<(String, Vec<F>)>, EnumError> {
    template
        .slots
        .iter()
        .map(|s| {
            Ok((
                s.name.clone(),
                sliced_values(split, template, &s.name, slice)?,
            ))
        })
        .collect()
}

/// The template's whole parameter space, after slicing.
pub fn template_region<F: FiniteField>(
    template: &CubicTemplate<F>,
    slice: &BTreeMap<String, u32>,
) -> Vec<(String, Vec<F>)> {
    template
        .slots
        .iter()
        .map(|s| {
            let mut v = s.domain.values::<F>();
            if let Some(x) = slice.get(&s.name) {
                v.retain(|y| *y == F::from_i64(*x as i64));
            }
            (s.name.clone(), v)
        })
        .collect()
}

/// The exhaustive oracle over a whole template (not a split), for
/// differential testing against the hybrid runs.
pub fn oracle_case<F: FiniteField>(
    case: QuadricCase,
    form: u8,
    slice: &BTreeMap<String, u32>,
    budgets: Budgets,
    workers: usize,
) -> Result<EnumerationReport, EnumError> {
    let templates = crate::families::templates::<F>(case)?;
    let template = templates
        .iter()
        .find(|t| t.form == form)
        .ok_or_else(|| FamilyError::Preset(format!("no form {form} for {}", case.tag)))?;
    for k in slice.keys() {
        if template.slot(k).is_none() {
            return Err(EnumError::BadSlice(k.clone()));
        }
    }
    let region = template_region(template, slice);
    let (curves, stats) = brute_force_enumerate(template, &region, budgets.oracle_budget, workers)?;
    let meta = report_meta::<F>(case, None, slice, Backend::Brute);
    Ok(finish(case, meta, curves, stats))
}

/// Exhaustive oracle: every admissible parameter point of `region` is
/// instantiated and tested numerically, then smooth ones are kept.
pub fn brute_force_enumerate<F: FiniteField>(
    template: &CubicTemplate<F>,
    region: &[(String, Vec<F>)],
    budget: u128,
    workers: usize,
) -> Result<(Vec<MPoly<F>>, EnumerationStats), EnumError> {
    let size: u128 = region.iter().map(|(_, v)| v.len() as u128).product();
    if size > budget {
        return Err(EnumError::Budget { size, budget });
    }
    let quadric = template.case.quadric::<F>();
    let eval = HwEvaluator::new(&quadric);
    let names: Vec<String> = region.iter().map(|(n, _)| n.clone()).collect();
    let forms: Vec<Vec<([u32; 4], F)>> = template
        .slots
        .iter()
        .map(|s| {
            s.form
                .terms()
                .iter()
                .map(|(m, c)| (exps4(*m), *c))
                .collect()
        })
        .collect();
    let fixed: Vec<([u32; 4], F)> = template
        .fixed
        .terms()
        .iter()
        .map(|(m, c)| (exps4(*m), *c))
        .collect();
    let slot_pos: Vec<usize> = names
        .iter()
        .map(|n| template.slot_index(n).expect("region slot"))
        .collect();
    // dense accumulation over the 20 cubic monomials
    let cube_list = cubic_exponents();
    let cube_id = |e: &[u32; 4]| {
        cube_list
            .iter()
            .position(|c| c == e)
            .expect("cubic exponent")
    };
    let fixed_dense: Vec<(usize, F)> = fixed.iter().map(|(e, c)| (cube_id(e), *c)).collect();
    let forms_dense: Vec<Vec<(usize, F)>> = forms
        .iter()
        .map(|f| f.iter().map(|(e, c)| (cube_id(e), *c)).collect())
        .collect();

    let lists: Vec<Vec<F>> = region.iter().map(|(_, v)| v.clone()).collect();
    let head = lists.first().cloned().unwrap_or_default();
    let next = AtomicUsize::new(0);
    let out: Mutex<(Vec<MPoly<F>>, EnumerationStats)> =
        Mutex::new((Vec::new(), EnumerationStats::default()));
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::Relaxed);
        if i >= head.len() {
            return;
        }
        let mut sub = lists.clone();
        sub[0] = vec![head[i]];
        let mut local = EnumerationStats::default();
        let mut found = Vec::new();
        let mut scratch = Vec::new();
        let mut dense = [F::zero(); 20];
        let mut terms: Vec<([u32; 4], F)> = Vec::with_capacity(20);
        for_each_tuple(&sub, |vals| {
            local.iterations2 += 1;
            let values: BTreeMap<String, F> =
                names.iter().cloned().zip(vals.iter().copied()).collect();
            if !template.admissible(&values) {
                return;
            }
            dense = [F::zero(); 20];
            for (id, c) in &fixed_dense {
                dense[*id] += *c;
            }
            for (k, v) in vals.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                for (id, c) in &forms_dense[slot_pos[k]] {
                    dense[*id] += *c * *v;
                }
            }
            terms.clear();
            for (id, c) in dense.iter().enumerate() {
                if !c.is_zero() {
                    terms.push((cube_list[id], *c));
                }
            }
            if terms.is_empty() || !eval.is_superspecial_terms(&terms, &mut scratch) {
                return;
            }
            local.hw_roots += 1;
            let p = template.instantiate(&values).expect("full assignment");
            match is_nonsingular(&p, &quadric) {
                Ok(true) => {
                    local.smooth += 1;
                    found.push(p);
                }
                Ok(false) => local.singular += 1,
                Err(_) => local.degenerate += 1,
            }
        });
        let mut g = out.lock().unwrap();
        g.0.extend(found);
        g.1.absorb(&local);
    };
    std::thread::scope(|s| {
        for _ in 1..workers.max(1) {
            s.spawn(worker);
        }
        worker();
    });
    let (mut curves, mut stats) = out.into_inner().unwrap();
    stats.iterations1 = 1;
    curves.sort_by_cached_key(|p| cubic_key(p));
    Ok((curves, stats))
}

fn exps4(m: crate::poly::Monomial) -> [u32; 4] {
    [m.exp(0), m.exp(1), m.exp(2), m.exp(3)]
}

fn cubic_exponents() -> Vec<[u32; 4]> {
    let mut v = Vec::with_capacity(20);
    for a in 0..=3 {
        for b in 0..=3 - a {
            for c in 0..=3 - a - b {
                v.push([a, b, c, 3 - a - b - c]);
            }
        }
    }
    v
}

/// All splits of a case over `F_q` from a preset table, run in table
/// order; curves are concatenated and checked for cross-split duplicates.
pub fn enumerate_all<F: FiniteField>(
    case: QuadricCase,
    splits: &[HybridSplit],
    base: &EnumerationTask,
) -> Result<Vec<EnumerationReport>, EnumError> {
    let mut reports = Vec::new();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for s in splits {
        let mut task = base.clone();
        task.case = case;
        task.split = s.clone();
        if let Some(p) = &base.checkpoint {
            task.checkpoint = Some(p.with_extension(format!("{}-f{}.jsonl", s.id, s.form)));
        }
        let r = enumerate_case::<F>(&task)?;
        for c in &r.curves {
            assert!(
                seen.insert(c.cubic.clone()),
                "cubic {} found by two splits",
                c.cubic
            );
        }
        reports.push(r);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests;
