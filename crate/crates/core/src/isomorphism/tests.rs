use super::group::*;
use super::*;
use crate::field::Fp;
use crate::poly::Monomial;
use crate::published::published_set;
use proptest::prelude::*;
use std::time::Instant;

type F5 = Fp<5>;
type F11 = Fp<11>;
type F121 = Fp2<11>;

fn all_cases(q: u32) -> Vec<QuadricCase> {
    vec![
        QuadricCase::n1(),
        QuadricCase::n2(crate::families::default_epsilon(q)),
        QuadricCase::dege(),
    ]
}

fn parse<F: FiniteField>(s: &str) -> MPoly<F> {
    PolyRing::xyzw().parse(s).unwrap()
}

#[test]
fn generators_are_similitudes() {
    for case in all_cases(11) {
        let mut factors = vec![
            Factor::A,
            Factor::U1(F11::from_int(3)),
            Factor::W(1),
        ];
        match case.tag {
            CaseTag::N1 => factors.extend([
                Factor::Torus(vec![F11::from_int(2), F11::from_int(5), F11::from_int(7)]),
                Factor::U2(F11::from_int(4)),
                Factor::W(3),
            ]),
            CaseTag::N2 => factors.extend([
                Factor::Torus(vec![F11::from_int(2), F11::from_int(5), F11::from_int(7)]),
                Factor::U2(F11::from_int(4)),
            ]),
            CaseTag::Dege => factors.extend([
                Factor::Torus(vec![F11::from_int(2), F11::from_int(5)]),
                Factor::V([F11::from_int(3), F11::from_int(1), F11::from_int(9), F11::from_int(2)]),
            ]),
        }
        for f in &factors {
            let g = bruhat_generator(&case, f).unwrap();
            assert_eq!(similitude_factor(&case, &g.matrix), Some(g.mu), "{case:?} {f:?}");
        }
    }
}

#[test]
fn identity_parameters_give_identity() {
    let zero = F11::from_int(0);
    let one = F11::from_int(1);
    let id = identity::<F11>();
    for case in all_cases(11) {
        assert_eq!(bruhat_generator(&case, &Factor::U1(zero)).unwrap().matrix, id);
        assert_eq!(bruhat_generator(&case, &Factor::<F11>::W(0)).unwrap().matrix, id);
        let torus = match case.tag {
            CaseTag::Dege => vec![one, one],
            CaseTag::N2 => vec![one, one, zero],
            CaseTag::N1 => vec![one, one, one],
        };
        assert_eq!(bruhat_generator(&case, &Factor::Torus(torus)).unwrap().matrix, id);
    }
}

#[test]
fn n1_unipotent_pattern() {
    let case = QuadricCase::n1();
    let (a, b) = (F11::from_int(3), F11::from_int(5));
    let g = compose(&case, &[Factor::U1(a), Factor::U2(b)]).unwrap();
    let z = F11::from_int(0);
    let o = F11::from_int(1);
    assert_eq!(
        g.matrix,
        [[o, a, b, -a * b], [z, o, z, -b], [z, z, o, -a], [z, z, z, o]]
    );
}

#[test]
fn rotation_multiplier_is_norm() {
    let case = QuadricCase::n2(2);
    for a in F11::elements() {
        for b in F11::elements() {
            let nu = a * a - F11::from_int(2) * b * b;
            if nu.is_zero() {
                continue;
            }
            let r = rotation::<F11, F11>(&case, &a, &b);
            assert_eq!(similitude_factor(&case, &r), Some(nu));
        }
    }
}

#[test]
fn non_units_are_rejected() {
    let zero = F11::from_int(0);
    let one = F11::from_int(1);
    assert_eq!(
        bruhat_generator(&QuadricCase::n1(), &Factor::Torus(vec![zero, one, one])),
        Err(IsoError::NotUnit)
    );
    assert_eq!(
        bruhat_generator(&QuadricCase::dege(), &Factor::U2(one)),
        Err(IsoError::BadParameters)
    );
    let mut m = identity::<F11>();
    m[1][1] = F11::from_int(2);
    assert_eq!(Similitude::new(QuadricCase::n1(), m), Err(IsoError::NotSimilitude));
}

#[test]
fn unipotent_families_are_closed_under_inverse() {
    // the right-hand side of the cell systems relies on this
    for case in all_cases(5) {
        let fam: Vec<Mat4<F5>> = oracle_family(&case);
        for m in &fam {
            let inv = inverse(m).unwrap();
            assert!(fam.contains(&inv), "{case:?}");
        }
    }
}

fn oracle_family(case: &QuadricCase) -> Vec<Mat4<F5>> {
    let mut out = Vec::new();
    for a in F5::elements() {
        match u2::<F5, F5>(case, &a) {
            None => out.push(u1::<F5, F5>(case, &a)),
            Some(_) => {
                for b in F5::elements() {
                    out.push(mat_mul(
                        &u1::<F5, F5>(case, &a),
                        &u2::<F5, F5>(case, &b).unwrap(),
                    ));
                }
            }
        }
    }
    out
}

#[test]
fn action_of_identity_and_on_quadric() {
    for case in all_cases(11) {
        let p = parse::<F11>("x^3 + 2 x y z + 3 z^2 w + w^3 + y^2 x");
        let id = Similitude::identity(case);
        assert_eq!(act(&id, &p), reduce(&case, &p));
        let g = compose(
            &case,
            &[Factor::A, Factor::U1(F11::from_int(4)), Factor::W(1), Factor::U1(F11::from_int(2))],
        )
        .unwrap();
        let q = case.quadric::<F11>();
        assert_eq!(substitute(&g.matrix, &q), q.scale(g.mu));
    }
}

fn cubic_monomials() -> Vec<Monomial> {
    let mut out = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=3 - a {
            for c in 0..=3 - a - b {
                out.push(Monomial::from_exps(&[a, b, c, 3 - a - b - c]));
            }
        }
    }
    out
}

fn random_element(case: &QuadricCase, seed: &[u32]) -> Similitude<F11> {
    let f = |i: usize| F11::from_int(seed[i % seed.len()] as i64);
    let unit = |i: usize| F11::from_int(1 + (seed[i % seed.len()] % 10) as i64);
    let torus = match case.tag {
        CaseTag::N1 => Factor::Torus(vec![unit(0), unit(1), unit(2)]),
        CaseTag::N2 => {
            // b = 0 keeps a^2 - eps b^2 a unit
            Factor::Torus(vec![unit(0), unit(1), F11::from_int(0)])
        }
        CaseTag::Dege => Factor::Torus(vec![unit(0), unit(1)]),
    };
    let mut factors = vec![torus, Factor::U1(f(3))];
    if case.tag != CaseTag::Dege {
        factors.push(Factor::U2(f(4)));
    }
    factors.push(Factor::W(seed[5] as usize % weyl_len(case)));
    factors.push(Factor::U1(f(6)));
    if case.tag == CaseTag::Dege {
        factors.push(Factor::V([unit(7), f(8), f(9), f(10)]));
    }
    if seed[11] % 2 == 1 {
        factors.insert(0, Factor::A);
    }
    compose(case, &factors).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_is_compatible_with_products(
        s1 in prop::collection::vec(0u32..11, 12),
        s2 in prop::collection::vec(0u32..11, 12),
        coeffs in prop::collection::vec(0i64..11, 20),
        which in 0usize..3,
    ) {
        let case = all_cases(11)[which];
        let g = random_element(&case, &s1);
        let h = random_element(&case, &s2);
        let monos = cubic_monomials();
        let p = MPoly::from_terms(monos.iter().zip(&coeffs).map(|(m, c)| (*m, F11::from_int(*c))));
        prop_assume!(!p.is_zero());
        prop_assert_eq!(act(&h, &act(&g, &p)), act(&g.mul(&h), &p));
        prop_assert_eq!(act(&g.inverse(), &act(&g, &p)), reduce(&case, &p));
    }
}

#[test]
fn reflexive_on_published_dege_q5() {
    let set = published_set("dege-q5").unwrap();
    let case = set.quadric_case();
    for p in set.cubics::<F5>() {
        let out = is_isomorphic(&case, &p, &p, &IsoOptions::default()).unwrap();
        assert!(out.isomorphic);
    }
}

#[test]
fn transformed_cubic_is_recognised_with_witness() {
    let set = published_set("dege-q5").unwrap();
    let case = set.quadric_case();
    let p = &set.cubics::<F5>()[2];
    let g = compose(
        &case,
        &[
            Factor::Torus(vec![F5::from_int(2), F5::from_int(3)]),
            Factor::U1(F5::from_int(1)),
            Factor::W(1),
            Factor::U1(F5::from_int(4)),
            Factor::V([F5::from_int(2), F5::from_int(1), F5::from_int(0), F5::from_int(3)]),
        ],
    )
    .unwrap();
    let p2 = act(&g, p);
    let opts = IsoOptions {
        witness: true,
        prefilter: false,
        ..IsoOptions::default()
    };
    let out = is_isomorphic(&case, p, &p2, &opts).unwrap();
    assert!(out.isomorphic);
    let (w, lambda) = out.witness.unwrap();
    assert_eq!(act(&w, p), reduce(&case, &p2).scale(lambda));
}

#[test]
#[ignore = "timing probe"]
fn probe_timings() {
    let set = published_set("n1-q11").unwrap();
    let case = set.quadric_case();
    let ps = set.cubics::<F11>();
    let opts = IsoOptions {
        prefilter: false,
        ..IsoOptions::default()
    };
    for (i, j) in [(0, 0), (0, 1), (1, 2), (3, 4)] {
        let t = Instant::now();
        let out = is_isomorphic(&case, &ps[i], &ps[j], &opts).unwrap();
        eprintln!("n1 {i} {j}: {} in {:?}", out.isomorphic, t.elapsed());
    }
    let set = published_set("dege-q11").unwrap();
    let case = set.quadric_case();
    let ps = set.cubics::<F11>();
    for (i, j) in [(0, 1), (5, 6), (13, 14)] {
        let t = Instant::now();
        let out = is_isomorphic(&case, &ps[i], &ps[j], &opts).unwrap();
        eprintln!("dege {i} {j}: {} in {:?}", out.isomorphic, t.elapsed());
    }
    let _ = F121::from(F11::from_int(1));
}

fn cubic_from<F: FiniteField>(coeffs: &[i64]) -> MPoly<F> {
    MPoly::from_terms(
        cubic_monomials()
            .into_iter()
            .zip(coeffs)
            .map(|(m, c)| (m, F::from_i64(*c))),
    )
}

fn random_element_f5(case: &QuadricCase, seed: &[u32]) -> Similitude<F5> {
    let f = |i: usize| F5::from_int(seed[i % seed.len()] as i64);
    let unit = |i: usize| F5::from_int(1 + (seed[i % seed.len()] % 4) as i64);
    let torus = match case.tag {
        CaseTag::N1 => Factor::Torus(vec![unit(0), unit(1), unit(2)]),
        CaseTag::N2 => Factor::Torus(vec![unit(0), unit(1), F5::from_int(0)]),
        CaseTag::Dege => Factor::Torus(vec![unit(0), unit(1)]),
    };
    let mut factors = vec![torus, Factor::U1(f(3))];
    if case.tag != CaseTag::Dege {
        factors.push(Factor::U2(f(4)));
    }
    factors.push(Factor::W(seed[5] as usize % weyl_len(case)));
    factors.push(Factor::U1(f(6)));
    if case.tag == CaseTag::Dege {
        factors.push(Factor::V([unit(7), f(8), f(9), f(10)]));
    }
    if seed[11] % 2 == 1 && case.tag != CaseTag::Dege {
        factors.insert(0, Factor::A);
    }
    compose(case, &factors).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn groebner_agrees_with_group_sweep(
        seed in prop::collection::vec(0u32..5, 12),
        c1 in prop::collection::vec(0i64..5, 20),
        c2 in prop::collection::vec(0i64..5, 20),
        which in 0usize..3,
        related in any::<bool>(),
        orthogonal in any::<bool>(),
    ) {
        let case = all_cases(5)[which];
        let p1 = reduce(&case, &cubic_from::<F5>(&c1));
        prop_assume!(!p1.is_zero());
        let p2 = if related {
            act(&random_element_f5(&case, &seed), &p1)
        } else {
            reduce(&case, &cubic_from::<F5>(&c2))
        };
        prop_assume!(!p2.is_zero());
        let group = if orthogonal { GroupKind::Orthogonal } else { GroupKind::Similitude };
        let opts = IsoOptions { group, prefilter: false, witness: true };
        let gb = is_isomorphic(&case, &p1, &p2, &opts).unwrap();
        let sweep = oracle::sweep_isomorphic(&case, &p1, &p2, group, u128::MAX).unwrap();
        prop_assert_eq!(gb.isomorphic, sweep.is_some(), "{:?}\n{:?}\n{:?}", case, p1, p2);
        if related && group == GroupKind::Similitude {
            prop_assert!(gb.isomorphic);
        }
        if let Some((g, l)) = sweep {
            prop_assert_eq!(act(&g, &p1), p2.scale(l));
        }
    }

    #[test]
    fn rational_isomorphism_implies_closure_isomorphism(
        seed in prop::collection::vec(0u32..5, 12),
        c1 in prop::collection::vec(0i64..5, 20),
        dege in any::<bool>(),
    ) {
        let case = if dege { QuadricCase::dege() } else { QuadricCase::n1() };
        let p1 = reduce(&case, &cubic_from::<F5>(&c1));
        prop_assume!(!p1.is_zero());
        let p2 = act(&random_element_f5(&case, &seed), &p1);
        prop_assert!(is_isomorphic_closure(&case, &p1, &p2).unwrap());
    }

    #[test]
    fn invariant_prefilter_never_separates_isomorphic_pairs(
        seed in prop::collection::vec(0u32..11, 12),
        c1 in prop::collection::vec(0i64..11, 20),
        which in 0usize..3,
    ) {
        let case = all_cases(11)[which];
        let p1 = reduce(&case, &cubic_from::<F11>(&c1));
        prop_assume!(!p1.is_zero());
        let p2 = act(&random_element(&case, &seed), &p1);
        let q = case.quadric::<F11>();
        prop_assert_eq!(count_points(&p1, &q), count_points(&p2, &q));
    }
}

#[test]
fn closure_rejects_the_nonsplit_form() {
    let case = QuadricCase::n2(2);
    let p = parse::<F11>("x^3 + y^3 + z w^2");
    assert_eq!(
        is_isomorphic_closure(&case, &p, &p),
        Err(IsoError::ClosureNeedsSplitForm)
    );
}

#[test]
fn transport_matrix_carries_quadrics() {
    for eps in [2u32, 6, 7, 8, 10] {
        let m = n2_to_n1_matrix::<11>(eps).unwrap();
        let q2 = QuadricCase::n2(eps).quadric::<F11>().embed::<F121>();
        assert_eq!(substitute(&m, &q2), QuadricCase::n1().quadric::<F121>());
    }
    let m = n2_to_n1_matrix::<5>(2).unwrap();
    let q2 = QuadricCase::n2(2).quadric::<F5>().embed::<Fp2<5>>();
    assert_eq!(substitute(&m, &q2), QuadricCase::n1().quadric::<Fp2<5>>());
}

#[test]
fn transport_preserves_published_n2_classes() {
    let set = published_set("n2-q11").unwrap();
    for p in set.cubics::<F11>() {
        let t = n2_to_n1::<11>(&p, set.epsilon).unwrap();
        let q1 = QuadricCase::n1().quadric::<F121>();
        assert!(crate::geometry::is_nonsingular(&t, &q1).unwrap());
        assert_eq!(
            count_points(&p.embed::<F121>(), &QuadricCase::n2(set.epsilon).quadric()),
            count_points(&t, &q1)
        );
    }
}

#[test]
fn classify_singleton_and_empty() {
    let case = QuadricCase::dege();
    let p = parse::<F5>("x^3 + y^3 + z w^2");
    let c = classify(&case, &[p], &ClassifyOptions::default()).unwrap();
    assert_eq!(c.representatives, vec![0]);
    assert_eq!(c.class_of, vec![0]);
    let c = classify::<F5>(&case, &[], &ClassifyOptions::default()).unwrap();
    assert!(c.is_empty());
}

#[test]
fn classify_published_dege_q5_with_images() {
    let set = published_set("dege-q5").unwrap();
    let case = set.quadric_case();
    let ps = set.cubics::<F5>();
    let mut items = Vec::new();
    for (k, p) in ps.iter().enumerate() {
        items.push(p.clone());
        let s: Vec<u32> = (0..12).map(|i| ((i * 7 + k * 3) % 5) as u32).collect();
        items.push(act(&random_element_f5(&case, &s), p));
    }
    let opts = ClassifyOptions {
        workers: 2,
        ..ClassifyOptions::default()
    };
    let c = classify(&case, &items, &opts).unwrap();
    assert_eq!(c.len(), ps.len());
    for k in 0..ps.len() {
        assert_eq!(c.class_of[2 * k], c.class_of[2 * k + 1]);
        assert_eq!(c.class_of[2 * k], k);
    }
    for (i, w) in c.witnesses.iter().enumerate() {
        let (g, l) = w.clone().expect("witness requested");
        let rep = &items[c.representatives[c.class_of[i]]];
        assert_eq!(act(&g, rep), reduce(&case, &items[i]).scale(l));
    }
    // reversing the input permutes representatives but keeps the partition
    let rev: Vec<MPoly<F5>> = items.iter().rev().cloned().collect();
    let c2 = classify(&case, &rev, &opts).unwrap();
    let n = items.len();
    for i in 0..n {
        for j in 0..n {
            assert_eq!(
                c.class_of[i] == c.class_of[j],
                c2.class_of[n - 1 - i] == c2.class_of[n - 1 - j]
            );
        }
    }
}

#[test]
fn two_phase_matches_single_phase_on_n1() {
    let case = QuadricCase::n1();
    let set = published_set("n1-q11").unwrap();
    let ps = set.cubics::<F11>();
    let mut items = Vec::new();
    for (k, p) in ps.iter().take(4).enumerate() {
        items.push(p.clone());
        let s: Vec<u32> = (0..12).map(|i| ((i * 5 + k) % 11) as u32).collect();
        items.push(act(&random_element(&case, &s), p));
    }
    let one = classify(
        &case,
        &items,
        &ClassifyOptions {
            phase1: false,
            ..ClassifyOptions::default()
        },
    )
    .unwrap();
    let two = classify(&case, &items, &ClassifyOptions::default()).unwrap();
    assert_eq!(one.class_of, two.class_of);
    assert_eq!(one.len(), 4);
}
