use super::*;
use crate::families::{preset_splits, templates, CaseTag};
use crate::field::{Fp, Ring};

type F11 = Fp<11>;

fn slice(pairs: &[(&str, u32)]) -> BTreeMap<String, u32> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

#[test]
fn tuple_order() {
    let mut seen = Vec::new();
    for_each_tuple(&[vec![1, 2], vec![7, 8, 9]], |t| seen.push(t.to_vec()));
    assert_eq!(
        seen,
        vec![
            vec![1, 7],
            vec![1, 8],
            vec![1, 9],
            vec![2, 7],
            vec![2, 8],
            vec![2, 9]
        ]
    );
    let mut n = 0;
    for_each_tuple::<u8>(&[vec![1], vec![]], |_| n += 1);
    assert_eq!(n, 0);
}

#[test]
#[ignore]
fn profile_n1_point() {
    let split = preset_splits(CaseTag::N1, 11).unwrap().remove(0);
    let t = &templates::<F11>(QuadricCase::n1()).unwrap()[0];
    let fixed: BTreeMap<String, F11> = [("b1", 1), ("b2", 0), ("a1", 1), ("a2", 0)]
        .iter()
        .map(|(k, v)| (k.to_string(), F11::from_i64(*v)))
        .collect();
    let ctx = HybridContext::new(
        t,
        &split,
        &slice(&[("a3", 0), ("a7", 0)]),
        Budgets::default(),
        QuadricCase::n1(),
    )
    .unwrap();
    let s = Instant::now();
    let flat = t.symbolic(&fixed, &split.symbolic).unwrap();
    let hw = hw_coefficients(&flat, &ctx.quadric).unwrap();
    eprintln!(
        "hw {:?} sizes {:?}",
        s.elapsed(),
        hw.iter().map(|c| c.len()).collect::<Vec<_>>()
    );
    let s = Instant::now();
    let (_, st) = ctx.run_point(&fixed).unwrap();
    eprintln!("one inner {:?} {:?}", s.elapsed(), st);
    let b = Budgets {
        brute_threshold: 2_000_000,
        ..Budgets::default()
    };
    let ctx = HybridContext::new(
        t,
        &split,
        &slice(&[("a3", 0), ("a7", 0)]),
        b,
        QuadricCase::n1(),
    )
    .unwrap();
    let s = Instant::now();
    let (_, st) = ctx.run_point(&fixed).unwrap();
    eprintln!("brute inner {:?} {:?}", s.elapsed(), st);
}

#[test]
#[ignore]
fn profile_gb() {
    use crate::solver::{buchberger, field_equations};
    let split = preset_splits(CaseTag::N1, 11).unwrap().remove(0);
    let t = &templates::<F11>(QuadricCase::n1()).unwrap()[0];
    let fixed: BTreeMap<String, F11> = [("b1", 1), ("b2", 0), ("a1", 1), ("a2", 0)]
        .iter()
        .map(|(k, v)| (k.to_string(), F11::from_i64(*v)))
        .collect();
    let ctx = HybridContext::new(
        t,
        &split,
        &slice(&[]),
        Budgets::default(),
        QuadricCase::n1(),
    )
    .unwrap();
    let flat = t.symbolic(&fixed, &split.symbolic).unwrap();
    let hw: Vec<MPoly<F11>> = hw_coefficients(&flat, &ctx.quadric)
        .unwrap()
        .into_iter()
        .map(|c| c.permute_vars(&ctx.perm))
        .collect();
    for (a3, a7) in [(0, 0), (1, 2), (5, 7)] {
        let asg = [(6, F11::from_i64(a3)), (7, F11::from_i64(a7))];
        let sys: Vec<MPoly<F11>> = hw
            .iter()
            .map(|c| c.specialize(&asg))
            .filter(|c| !c.is_zero())
            .collect();
        let s = Instant::now();
        let (gb0, st0) = buchberger(&sys);
        eprintln!("plain gb {:?} len {} {:?}", s.elapsed(), gb0.len(), st0);
        let mut g = sys.clone();
        g.extend(field_equations::<F11>(&(0..6).collect::<Vec<_>>(), &[]));
        let s = Instant::now();
        let (gb, st) = buchberger(&g);
        eprintln!("with field eqs {:?} len {} {:?}", s.elapsed(), gb.len(), st);
        let s = Instant::now();
        let mut g2 = gb0.clone();
        g2.extend(field_equations::<F11>(&(0..6).collect::<Vec<_>>(), &[]));
        let (gb2, st2) = buchberger(&g2);
        eprintln!("two-step {:?} len {} {:?} same {}", s.elapsed(), gb2.len(), st2, gb2 == gb);
        let s = Instant::now();
        let (gb4, st4) = crate::solver::f4(&g);
        eprintln!("f4 {:?} len {} {:?} same {}", s.elapsed(), gb4.len(), st4, gb4 == gb);
    }
}
