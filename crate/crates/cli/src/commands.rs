//! The four subcommands. Field arithmetic is monomorphised per prime, so
//! every command dispatches on `q` through `dispatch!`.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use ssp_core::enumerate::{
    enumerate_case, oracle_case, Backend, Budgets, EnumError, EnumerationReport, EnumerationTask,
};
use ssp_core::families::{templates, CaseTag, PresetTable, QuadricCase};
use ssp_core::field::{is_prime, primitive_element};
use ssp_core::geometry::{count_points, is_maximal_count, is_nonsingular};
use ssp_core::hasse_witt::is_superspecial;
use ssp_core::isomorphism::{
    classify as classify_cubics, n2_to_n1, ClassificationReport, ClassifyOptions, Field,
};
use ssp_core::{FiniteField, Fp, Fp2, MPoly, PolyRing};

use crate::input::{parse_slice, read_records, write_json, RawCurve};
use crate::{
    BackendArg, BudgetArgs, ClassifyArgs, CliError, EnumerateArgs, FieldArg, OracleArgs,
    VerifyArgs,
};

pub const SUPPORTED_PRIMES: [u32; 4] = [5, 7, 11, 13];

macro_rules! dispatch {
    ($q:expr, $f:ident ( $($arg:expr),* )) => {
        match $q {
            5 => $f::<5>($($arg),*),
            7 => $f::<7>($($arg),*),
            11 => $f::<11>($($arg),*),
            13 => $f::<13>($($arg),*),
            q => Err(unsupported(q)),
        }
    };
}

fn unsupported(q: u32) -> CliError {
    if q < 5 {
        CliError::Config(format!("q = {q}: p >= 5 required"))
    } else if !is_prime(q as u64) {
        CliError::Config(format!("q = {q} is not prime"))
    } else {
        CliError::Config(format!(
            "q = {q} is not built in (supported: {SUPPORTED_PRIMES:?})"
        ))
    }
}

fn workers(n: Option<usize>) -> usize {
    n.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    })
    .max(1)
}

fn budgets(b: &BudgetArgs) -> Budgets {
    let d = Budgets::default();
    Budgets {
        brute_threshold: b.brute_threshold.unwrap_or(d.brute_threshold),
        oracle_budget: b.oracle_budget.unwrap_or(d.oracle_budget),
    }
}

fn enum_error(e: EnumError) -> CliError {
    match e {
        EnumError::Budget { .. } => CliError::Budget(e.to_string()),
        EnumError::Family(_) | EnumError::BadSlice(_) | EnumError::Checkpoint { .. } => {
            CliError::Config(e.to_string())
        }
        EnumError::Hw(_) | EnumError::Solver { .. } => CliError::Internal(e.to_string()),
    }
}

fn presets(path: Option<&Path>) -> Result<PresetTable, CliError> {
    match path {
        None => Ok(PresetTable::builtin()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            PresetTable::parse(&text).map_err(|e| CliError::Config(e.to_string()))
        }
    }
}

fn log_stats(label: &str, r: &EnumerationReport) {
    let s = &r.stats;
    eprintln!(
        "{label}: outer points {}, inner points {}, systems {}, roots before smoothness {}, \
         singular {}, smooth {}, resumed {}",
        s.iterations1, s.iterations2, s.systems_solved, s.hw_roots, s.singular, s.smooth, s.resumed
    );
}

pub fn enumerate(a: &EnumerateArgs) -> Result<(), CliError> {
    dispatch!(a.q, enumerate_q(a))
}

fn checkpoint_for(base: &Path, id: &str, form: u8, several: bool) -> PathBuf {
    if !several {
        return base.to_path_buf();
    }
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    base.with_file_name(format!("{stem}-{id}-f{form}.jsonl"))
}

fn enumerate_q<const P: u32>(a: &EnumerateArgs) -> Result<(), CliError> {
    let tag: CaseTag = a.case.into();
    let case = QuadricCase::for_tag(tag, P);
    templates::<Fp<P>>(case).map_err(|e| CliError::Config(e.to_string()))?;
    let table = presets(a.preset_file.as_deref())?;
    let splits: Vec<_> = table
        .splits(tag, P)
        .map_err(|e| CliError::Config(e.to_string()))?
        .into_iter()
        .filter(|s| a.split.as_ref().is_none_or(|id| *id == s.id))
        .filter(|s| a.form.is_none_or(|f| f == s.form))
        .collect();
    if splits.is_empty() {
        return Err(CliError::Config(format!(
            "no preset split matches case {tag} over F_{P} (split {:?}, form {:?})",
            a.split, a.form
        )));
    }
    let slice = parse_slice(&a.slice)?;
    let mut reports = Vec::new();
    for s in &splits {
        let mut task = EnumerationTask::new(case, s.clone());
        task.backend = match a.backend {
            BackendArg::Hybrid => Backend::Hybrid,
            BackendArg::Brute => Backend::Brute,
        };
        task.budgets = budgets(&a.budgets);
        task.workers = workers(a.common.workers);
        task.slice = slice.clone();
        task.checkpoint = a
            .checkpoint
            .as_deref()
            .map(|p| checkpoint_for(p, &s.id, s.form, splits.len() > 1));
        let mut r = enumerate_case::<Fp<P>>(&task).map_err(enum_error)?;
        r.meta.preset_version = table.version.clone();
        log_stats(&format!("split {} form {}", s.id, s.form), &r);
        reports.push(r);
    }
    let report = EnumerationReport::merge(reports).expect("at least one split");
    eprintln!("{} curves", report.curves.len());
    write_json(&report, a.common.out.as_deref())
}

pub fn oracle(a: &OracleArgs) -> Result<(), CliError> {
    dispatch!(a.q, oracle_q(a))
}

fn oracle_q<const P: u32>(a: &OracleArgs) -> Result<(), CliError> {
    let case = QuadricCase::for_tag(a.case.into(), P);
    let forms: Vec<u8> = templates::<Fp<P>>(case)
        .map_err(|e| CliError::Config(e.to_string()))?
        .iter()
        .map(|t| t.form)
        .filter(|f| a.form.is_none_or(|g| g == *f))
        .collect();
    if forms.is_empty() {
        return Err(CliError::Config(format!("no form {:?}", a.form)));
    }
    let slice = parse_slice(&a.slice)?;
    let mut reports = Vec::new();
    for form in forms {
        let r = oracle_case::<Fp<P>>(case, form, &slice, budgets(&a.budgets), workers(a.common.workers))
            .map_err(enum_error)?;
        log_stats(&format!("form {form}"), &r);
        reports.push(r);
    }
    let report = EnumerationReport::merge(reports).expect("at least one form");
    write_json(&report, a.common.out.as_deref())
}

/// Outcome of verifying one curve record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub index: usize,
    pub case: Option<QuadricCase>,
    pub p: Option<u32>,
    pub zeta: Option<u32>,
    pub cubic: Option<String>,
    pub superspecial: Option<bool>,
    pub smooth: Option<bool>,
    pub count_fp: Option<u64>,
    pub count_fp2: Option<u64>,
    /// `#C(F_p^2)` meets the Hasse–Weil upper bound.
    pub maximal: Option<bool>,
    /// `#C(F_p) = 1 mod p`.
    pub congruence: Option<bool>,
    pub error: Option<String>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub code_version: String,
    pub records: Vec<VerificationRecord>,
    pub failures: usize,
}

fn blank(index: usize) -> VerificationRecord {
    VerificationRecord {
        index,
        case: None,
        p: None,
        zeta: None,
        cubic: None,
        superspecial: None,
        smooth: None,
        count_fp: None,
        count_fp2: None,
        maximal: None,
        congruence: None,
        error: None,
        ok: false,
    }
}

fn verify_q<const P: u32>(raw: &RawCurve, rec: &mut VerificationRecord) -> Result<(), CliError> {
    let case = raw.case;
    case.validate::<Fp<P>>()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let p: MPoly<Fp<P>> = PolyRing::xyzw()
        .parse(&raw.cubic)
        .map_err(|e| CliError::Config(format!("cubic: {e}")))?;
    let q = case.quadric::<Fp<P>>();
    let ss = is_superspecial(&p, &q).map_err(|e| CliError::Config(e.to_string()))?;
    let smooth = is_nonsingular(&p, &q).map_err(|e| CliError::Config(e.to_string()))?;
    let n1 = count_points(&p, &q);
    let n2 = count_points(&p.embed::<Fp2<P>>(), &q.embed::<Fp2<P>>());
    rec.zeta = primitive_element(P as u64).ok();
    rec.superspecial = Some(ss);
    rec.smooth = Some(smooth);
    rec.count_fp = Some(n1);
    rec.count_fp2 = Some(n2);
    rec.maximal = Some(is_maximal_count(n2, P as u64));
    rec.congruence = Some(n1 % P as u64 == 1);
    rec.ok = ss && smooth && n1 % P as u64 == 1;
    Ok(())
}

pub fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let records = read_records(&a.input)?;
    let mut out = Vec::new();
    for (index, r) in records.into_iter().enumerate() {
        let mut rec = blank(index);
        match r {
            Err(e) => rec.error = Some(format!("record: {e}")),
            Ok(raw) => {
                rec.case = Some(raw.case);
                rec.p = Some(raw.p);
                rec.cubic = Some(raw.cubic.clone());
                if let Err(e) = dispatch!(raw.p, verify_q(&raw, &mut rec)) {
                    rec.error = Some(match e {
                        CliError::Config(m) => m,
                        other => other.to_string(),
                    });
                }
            }
        }
        if !rec.ok {
            eprintln!(
                "record {index} failed: {}",
                rec.error.clone().unwrap_or_else(|| "property check".into())
            );
        }
        out.push(rec);
    }
    let failures = out.iter().filter(|r| !r.ok).count();
    let report = VerificationReport {
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        records: out,
        failures,
    };
    write_json(&report, a.common.out.as_deref())?;
    eprintln!("{} records, {failures} failed", report.records.len());
    if failures > 0 {
        return Err(CliError::Verification(failures));
    }
    Ok(())
}

pub fn classify(a: &ClassifyArgs) -> Result<(), CliError> {
    let mut raws = Vec::new();
    for path in &a.inputs {
        for (k, r) in read_records(path)?.into_iter().enumerate() {
            raws.push(r.map_err(|e| {
                CliError::Config(format!("{} record {k}: {e}", path.display()))
            })?);
        }
    }
    let ps: BTreeSet<u32> = raws.iter().map(|r| r.p).collect();
    if ps.len() > 1 {
        return Err(CliError::Config(format!("inputs mix primes {ps:?}")));
    }
    let Some(&p) = ps.iter().next() else {
        return Err(CliError::Config("no curves in the input".into()));
    };
    dispatch!(p, classify_q(a, &raws))
}

fn parse_all<F: FiniteField>(raws: &[RawCurve]) -> Result<Vec<MPoly<F>>, CliError> {
    let ring = PolyRing::xyzw();
    raws.iter()
        .enumerate()
        .map(|(i, r)| {
            ring.parse(&r.cubic)
                .map_err(|e| CliError::Config(format!("curve {i}: {e}")))
        })
        .collect()
}

fn run_classify<F: FiniteField>(
    case: QuadricCase,
    cubics: &[MPoly<F>],
    opts: &ClassifyOptions,
) -> Result<ClassificationReport, CliError> {
    let c = classify_cubics(&case, cubics, opts).map_err(|e| CliError::Config(e.to_string()))?;
    eprintln!(
        "{} curves, {} classes ({} + {} pairwise tests)",
        cubics.len(),
        c.len(),
        c.tests[0],
        c.tests[1]
    );
    Ok(c.report(&case, cubics, opts))
}

fn classify_q<const P: u32>(a: &ClassifyArgs, raws: &[RawCurve]) -> Result<(), CliError> {
    let cases: BTreeSet<(CaseTag, u32)> = raws.iter().map(|r| (r.case.tag, r.case.eps)).collect();
    let opts = ClassifyOptions {
        field: match a.field {
            FieldArg::Rational => Field::Rational,
            FieldArg::Closure => Field::Closure,
        },
        phase1: !a.no_phase1,
        prefilter: !a.no_prefilter,
        witness: !a.no_witness,
        workers: workers(a.common.workers),
    };
    let tags: BTreeSet<CaseTag> = cases.iter().map(|c| c.0).collect();
    let mixed = || {
        CliError::Config(format!(
            "inputs mix quadric cases {:?}",
            cases.iter().map(|(t, e)| format!("{t}/{e}")).collect::<Vec<_>>()
        ))
    };
    let nondegenerate_only = !tags.contains(&CaseTag::Dege);
    let report = if a.field == FieldArg::Closure && nondegenerate_only && tags.contains(&CaseTag::N2) {
        // over the closure every N2 curve moves to the N1 quadric over F_p^2
        let eps: BTreeSet<u32> = cases
            .iter()
            .filter(|c| c.0 == CaseTag::N2)
            .map(|c| c.1)
            .collect();
        if eps.len() > 1 {
            return Err(mixed());
        }
        let base = parse_all::<Fp<P>>(raws)?;
        let mut items: Vec<MPoly<Fp2<P>>> = Vec::new();
        let mut moved = Vec::new();
        for (r, p) in raws.iter().zip(&base) {
            if r.case.tag == CaseTag::N2 {
                items.push(n2_to_n1::<P>(p, r.case.eps).map_err(|e| CliError::Config(e.to_string()))?);
                moved.push(true);
            } else {
                items.push(p.embed());
                moved.push(false);
            }
        }
        let mut rep = run_classify(QuadricCase::n1(), &items, &opts)?;
        for (m, (r, moved)) in rep.members.iter_mut().zip(raws.iter().zip(moved)) {
            if moved {
                m.source = Some(format!("n2/{}: {}", r.case.eps, r.cubic));
            }
        }
        rep
    } else {
        if cases.len() > 1 {
            return Err(mixed());
        }
        let case = raws[0].case;
        case.validate::<Fp<P>>()
            .map_err(|e| CliError::Config(e.to_string()))?;
        run_classify(case, &parse_all::<Fp<P>>(raws)?, &opts)?
    };
    write_json(&report, a.common.out.as_deref())
}
