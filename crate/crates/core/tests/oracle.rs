use icc_core::analyzer::{analyze, free_action, matrix_action, AutElement, ExtensionSpec, KernelDesc, SearchCaps};
use icc_core::catalog::{conjugacy_test_free, Conjugacy, FreeAut, GroupDesc, Perm, PermGroup, Word};
use icc_core::oracle::{
    conjugacy_ball, crosscheck, exact_abelian_class, BallStatus, ConcreteGroup, ExactClass, KernelPart,
};
use icc_core::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn z() -> GroupDesc {
    GroupDesc::fg_abelian(1, vec![]).unwrap()
}

fn zk(rank: usize) -> KernelDesc {
    KernelDesc::Abelian { rank, torsion: vec![] }
}

fn f2() -> KernelDesc {
    KernelDesc::Free {
        names: vec!["a".into(), "b".into()],
    }
}

fn sol() -> ExtensionSpec {
    ExtensionSpec::new(zk(2), z(), None, vec![matrix_action(&[&[2, 1], &[1, 1]])]).unwrap()
}

fn vec2(a: i64, b: i64) -> Vec<BigInt> {
    vec![BigInt::from(a), BigInt::from(b)]
}

#[test]
fn group_axioms_on_random_triples() {
    let specs = vec![
        sol(),
        ExtensionSpec::new(f2(), z(), None, vec![free_action(2, &[&[1, 2], &[2]]).unwrap()]).unwrap(),
        ExtensionSpec::new(
            f2(),
            GroupDesc::Finite(PermGroup::generate(2, vec![Perm::from_cycles(2, &[vec![1, 2]]).unwrap()]).unwrap()),
            None,
            vec![free_action(2, &[&[2], &[1]]).unwrap()],
        )
        .unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in specs {
        let g = ConcreteGroup::materialize(&spec).unwrap();
        let pool = g.sample_elements(60);
        for _ in 0..100 {
            let x = &pool[rng.random_range(0..pool.len())];
            let y = &pool[rng.random_range(0..pool.len())];
            let w = &pool[rng.random_range(0..pool.len())];
            assert_eq!(g.mul(&g.mul(x, y), w), g.mul(x, &g.mul(y, w)));
            assert_eq!(g.mul(x, &g.identity()), *x);
            assert_eq!(g.mul(&g.identity(), x), *x);
            assert!(g.is_identity(&g.mul(x, &g.inverse(x))));
        }
    }
}

#[test]
fn sol_kernel_vector_keeps_growing() {
    let g = ConcreteGroup::materialize(&sol()).unwrap();
    let u = g.kernel_element(KernelPart::Vector(vec2(1, 0)));
    let c = conjugacy_ball(&g, &u, 8, 100_000);
    assert_eq!(c.status, BallStatus::StillGrowing { cap_exceeded: false });
    assert_eq!(c.sizes.len(), 9);
    assert!(c.sizes.windows(2).all(|w| w[0] < w[1]), "{:?}", c.sizes);
    assert_eq!(
        exact_abelian_class(&g, &vec2(1, 0), 10_000).unwrap(),
        ExactClass::Exceeded
    );
    assert_eq!(
        exact_abelian_class(&g, &vec2(0, 0), 10).unwrap(),
        ExactClass::Finite(vec![vec2(0, 0)])
    );
}

#[test]
fn central_element_of_f2_times_z() {
    let spec = ExtensionSpec::new(f2(), z(), None, vec![AutElement::Free(FreeAut::identity(2))]).unwrap();
    let g = ConcreteGroup::materialize(&spec).unwrap();
    let t = g.quotient_lift(&Word::generator(0));
    let c = conjugacy_ball(&g, &t, 6, 5000);
    assert_eq!(c.status, BallStatus::Closed { radius: 1 });
    assert_eq!(c.final_size(), 1);
}

#[test]
fn free_group_fc_is_trivial_by_ball_growth() {
    // conjugates of each short nontrivial word by words of length <= 6
    let all_words = |n: usize| {
        let mut out = vec![Word::identity()];
        let mut layer = vec![Word::identity()];
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &layer {
                for s in [1, -1, 2, -2] {
                    let x = w.mul(&Word::from_signed(&[s]));
                    if x.len() > w.len() {
                        next.push(x);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    };
    let conjugators = all_words(6);
    for u in all_words(2).into_iter().filter(|w| !w.is_identity()) {
        let mut seen = std::collections::HashSet::new();
        for c in &conjugators {
            seen.insert(c.conjugate(&u));
        }
        assert!(seen.len() > 20, "{u} has only {} conjugates", seen.len());
        // all are conjugate to u
        let sample = seen.iter().next().unwrap();
        assert!(matches!(conjugacy_test_free(&u, sample), Conjugacy::Conjugator(_)));
    }
}

#[test]
fn fc_of_free_times_z_is_the_z_factor() {
    // in F2 x Z, (1, t) is central while (a, 1) and (a, t) grow
    let spec = ExtensionSpec::new(f2(), z(), None, vec![AutElement::Free(FreeAut::identity(2))]).unwrap();
    let g = ConcreteGroup::materialize(&spec).unwrap();
    let t = g.quotient_lift(&Word::generator(0));
    let a = g.kernel_element(KernelPart::Word(Word::generator(0)));
    assert!(conjugacy_ball(&g, &g.mul(&t, &t), 6, 5000).is_closed());
    assert!(!conjugacy_ball(&g, &a, 6, 5000).is_closed());
    assert!(!conjugacy_ball(&g, &g.mul(&a, &t), 6, 5000).is_closed());
}

#[test]
fn exact_class_is_contained_in_every_ball() {
    let spec = ExtensionSpec::new(zk(2), z(), None, vec![matrix_action(&[&[0, -1], &[1, 0]])]).unwrap();
    let g = ConcreteGroup::materialize(&spec).unwrap();
    let v = vec2(2, 1);
    let ExactClass::Finite(orbit) = exact_abelian_class(&g, &v, 100).unwrap() else {
        panic!("rotation orbits are finite")
    };
    assert_eq!(orbit.len(), 4);
    let u = g.kernel_element(KernelPart::Vector(v));
    let c = conjugacy_ball(&g, &u, 6, 5000);
    assert!(c.is_closed());
    let ball: Vec<_> = c
        .elements
        .iter()
        .map(|e| match &e.kernel {
            KernelPart::Vector(x) => x.clone(),
            _ => unreachable!(),
        })
        .collect();
    for o in &orbit {
        assert!(ball.contains(o));
    }
    assert_eq!(ball.len(), orbit.len());
    // one more round adds nothing
    for e in &c.elements {
        for s in g.generators() {
            assert!(c.elements.contains(&g.conjugate(e, s)));
        }
    }
}

#[test]
fn analyzer_and_oracle_agree_on_reference_cases() {
    let swap = free_action(2, &[&[2], &[1]]).unwrap();
    let c2 = GroupDesc::Finite(PermGroup::generate(2, vec![Perm::from_cycles(2, &[vec![1, 2]]).unwrap()]).unwrap());
    let specs = vec![
        sol(),
        ExtensionSpec::new(zk(1), z(), None, vec![matrix_action(&[&[-1]])]).unwrap(),
        ExtensionSpec::new(f2(), c2, None, vec![swap]).unwrap(),
        ExtensionSpec::new(
            f2(),
            z(),
            None,
            vec![AutElement::Free(FreeAut::inner(2, &Word::from_signed(&[1, 2])))],
        )
        .unwrap(),
    ];
    for spec in specs {
        let report = analyze(&spec, SearchCaps::default()).unwrap();
        let x = crosscheck(&spec, &report, 20, 6, 5000).unwrap();
        assert!(x.consistent, "{:?}", report.verdict);
    }
}

#[test]
fn random_finite_orbit_vectors_close_in_the_ball() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let spec = ExtensionSpec::new(zk(2), z(), None, vec![matrix_action(&[&[1, 1], &[0, -1]])]).unwrap();
    let g = ConcreteGroup::materialize(&spec).unwrap();
    for _ in 0..10 {
        let v = vec2(rng.random_range(-3..=3), rng.random_range(-3..=3));
        let ExactClass::Finite(orbit) = exact_abelian_class(&g, &v, 100).unwrap() else {
            panic!("M^2 = I")
        };
        let c = conjugacy_ball(&g, &g.kernel_element(KernelPart::Vector(v)), 6, 5000);
        assert!(c.is_closed());
        assert_eq!(c.final_size(), orbit.len());
    }
}
