use super::*;
use crate::field::Fp;
use proptest::prelude::*;

type F5 = Fp<5>;
type F11 = Fp<11>;

fn sys<F: FiniteField>(names: &[&str], gens: &[&str]) -> PolySystem<F> {
    let ring = PolyRing::new(names);
    let gens = gens.iter().map(|g| ring.parse(g).unwrap()).collect();
    PolySystem::new(ring, gens).unwrap()
}

#[test]
fn groebner_examples() {
    let s: PolySystem<F5> = sys(&["x", "y"], &["x^2", "x*y"]);
    let gb = groebner(&s);
    let r = &s.ring;
    assert_eq!(
        gb.basis,
        vec![r.parse("x*y").unwrap(), r.parse("x^2").unwrap()]
    );
    assert!(gb.reduced);
    assert!(groebner(&sys::<F5>(&["x"], &["1"])).is_unit());
    assert!(groebner(&sys::<F5>(&["x"], &["x-1", "x-2"])).is_unit());
}

#[test]
fn normal_form_examples() {
    let s: PolySystem<F5> = sys(
        &["x", "y", "z"],
        &["x^2*y - z", "y*z^2 + x", "x*z - y^2 + 1"],
    );
    let gb = groebner(&s);
    for g in &s.gens {
        assert!(normal_form(g, &gb).is_zero());
    }
    let unit = groebner(&sys::<F5>(&["x"], &["1"]));
    assert!(normal_form(&MPoly::one(), &unit).is_zero());
    let x2 = sys::<F5>(&["x", "y"], &["x^2"]);
    let gb = groebner(&x2);
    assert!(normal_form(&x2.ring.parse("x^2*y").unwrap(), &gb).is_zero());
}

#[test]
fn inconsistency_examples() {
    assert!(is_inconsistent(&sys::<F5>(&["x"], &["x", "x-1"])));
    assert!(!is_inconsistent(&sys::<F5>(&["x", "y"], &["x*y-1"])));
    // no F_5 point but points over the closure
    assert!(!is_inconsistent(&sys::<F5>(&["a"], &["a^2-2"])));
}

#[test]
fn variety_examples() {
    let v = variety_over_fq(&sys::<F5>(&["a"], &["a^2+1"]));
    assert_eq!(v, vec![vec![F5::new(2)], vec![F5::new(3)]]);
    assert!(variety_over_fq(&sys::<F5>(&["a"], &["1"])).is_empty());
    let v = variety_over_fq(&sys::<F11>(&["a", "b"], &["a-3", "b-a"]));
    assert_eq!(v, vec![vec![F11::new(3), F11::new(3)]]);
}

#[test]
fn restricted_variety_examples() {
    let s = sys::<F5>(&["a", "b", "c"], &["a*b - c", "a + b + c - 1"]);
    let all = variety_over_fq(&s);
    assert_eq!(
        restricted_variety(&s, &[true, true, true], &[]).unwrap(),
        all
    );
    let pinned = restricted_variety(&s, &[false, true, false], &[F5::new(2), F5::new(1)]).unwrap();
    let expect: Vec<Vec<F5>> = all
        .iter()
        .filter(|p| p[0] == F5::new(2) && p[2] == F5::new(1))
        .cloned()
        .collect();
    assert_eq!(pinned, expect);
    let pt = [F5::new(0), F5::new(1), F5::new(0)];
    assert_eq!(
        restricted_variety(&s, &[false; 3], &pt).unwrap(),
        vec![pt.to_vec()]
    );
    assert!(
        restricted_variety(&s, &[false; 3], &[F5::new(1), F5::new(1), F5::new(1)])
            .unwrap()
            .is_empty()
    );
    assert!(matches!(
        restricted_variety(&s, &[false, true, true], &[]),
        Err(SolverError::MaskMismatch { .. })
    ));
}

#[test]
fn brute_force_examples() {
    let s = sys::<F5>(&["x"], &["x^5-x"]);
    assert_eq!(brute_force_variety(&s, 1000).unwrap().len(), 5);
    let empty = PolySystem::<F5>::new(PolyRing::new(&["x", "y"]), vec![]).unwrap();
    assert_eq!(brute_force_variety(&empty, 1000).unwrap().len(), 25);
    assert!(matches!(
        brute_force_variety(&empty, 10),
        Err(SolverError::Budget { .. })
    ));
}

#[test]
fn field_equations_shape() {
    let eqs = field_equations::<F5>(&[0], &[1]);
    let r = PolyRing::new(&["x", "y"]);
    assert_eq!(
        eqs,
        vec![r.parse("x^5-x").unwrap(), r.parse("y^4-1").unwrap()]
    );
}

fn arb_system(nvars: usize) -> impl Strategy<Value = Vec<MPoly<F5>>> {
    let term = (prop::collection::vec(0u32..3, nvars), 1u32..5);
    let poly = prop::collection::vec(term, 1..5).prop_map(|ts| {
        MPoly::from_terms(
            ts.into_iter()
                .map(|(e, c)| (Monomial::from_exps(&e), F5::new(c))),
        )
    });
    prop::collection::vec(poly, 1..4)
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn variety_matches_brute_force((n, gens) in (1usize..=4).prop_flat_map(|n| arb_system(n).prop_map(move |g| (n, g)))) {
        let s = PolySystem::new(PolyRing::new(&names(n)), gens).unwrap();
        prop_assert_eq!(variety_over_fq(&s), brute_force_variety(&s, 1 << 20).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn reduced_basis_is_canonical(gens in arb_system(3), rot in 0usize..4) {
        let (a, _) = buchberger(&gens);
        let mut shuffled = gens.clone();
        shuffled.reverse();
        let k = rot % shuffled.len();
        shuffled.rotate_left(k);
        let (b, _) = buchberger(&shuffled);
        prop_assert_eq!(&a, &b);
        // interreducing again is a fixed point
        let (c, _) = buchberger(&a);
        prop_assert_eq!(&a, &c);
        for g in &gens {
            prop_assert!(reduce_by(g, &a).is_zero());
        }
        // monic, and no term divisible by another element's leading monomial
        for (i, f) in a.iter().enumerate() {
            prop_assert!(f.leading_coeff().unwrap().is_one());
            for (j, g) in a.iter().enumerate() {
                if i != j {
                    let lm = g.leading_monomial().unwrap();
                    prop_assert!(f.terms().iter().all(|(m, _)| !lm.divides(*m)));
                }
            }
        }
        // S-polynomials reduce to zero
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                let (f, g) = (&a[i], &a[j]);
                let l = f.leading_monomial().unwrap().lcm(g.leading_monomial().unwrap());
                let s = &f.mul_term(l.div_exact(f.leading_monomial().unwrap()), &F5::one())
                    - &g.mul_term(l.div_exact(g.leading_monomial().unwrap()), &F5::one());
                prop_assert!(reduce_by(&s, &a).is_zero());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn f4_matches_buchberger((n, gens) in (1usize..=5).prop_flat_map(|n| arb_system(n).prop_map(move |g| (n, g)))) {
        let _ = n;
        prop_assert_eq!(f4(&gens).0, buchberger(&gens).0);
    }
}

#[test]
fn f4_matches_buchberger_on_larger_systems() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for round in 0..40 {
        let n = 3 + round % 3;
        let gens: Vec<MPoly<Fp<7>>> = (0..n + 1)
            .map(|_| {
                MPoly::from_terms((0..6).map(|_| {
                    let e: Vec<u32> = (0..n).map(|_| rng.gen_range(0..3)).collect();
                    (Monomial::from_exps(&e), Fp::<7>::new(rng.gen_range(1..7)))
                }))
            })
            .collect();
        assert_eq!(f4(&gens).0, buchberger(&gens).0, "round {round}");
    }
}
