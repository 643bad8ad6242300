use icc_core::catalog::FactorElement;
use icc_core::catalog::{
    conjugacy_test_free, cyclic_normalize, fc_is_trivial, is_inner, nielsen_reduce, normalize, Conjugacy, FreeAut,
    Innerness, Letter, NielsenMove, Word,
};
use icc_core::dsl::parse_extension;
use icc_core::oracle::{conjugacy_ball, ConcreteGroup};
use proptest::prelude::*;

fn letters(rank: i64, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    proptest::collection::vec((1..=rank, any::<bool>()), 0..=max_len).prop_map(|v| {
        v.into_iter()
            .map(|(g, neg)| Letter::from_signed(if neg { -g } else { g }))
            .collect()
    })
}

fn word(rank: i64, max_len: usize) -> impl Strategy<Value = Word> {
    letters(rank, max_len).prop_map(|l| normalize(&l))
}

fn nielsen_move(n: usize) -> impl Strategy<Value = NielsenMove> {
    (0..n, 1..n, any::<bool>(), any::<bool>()).prop_map(move |(target, shift, inverted, on_left)| NielsenMove {
        target,
        other: (target + shift) % n,
        inverted,
        on_left,
    })
}

/// An automorphism of `F_rank` built from random elementary moves.
fn automorphism(rank: usize) -> impl Strategy<Value = FreeAut> {
    proptest::collection::vec(nielsen_move(rank), 0..=5).prop_map(move |moves| {
        let mut images: Vec<Word> = (0..rank).map(Word::generator).collect();
        for mv in moves {
            mv.apply(&mut images);
        }
        FreeAut::new(rank, images).unwrap()
    })
}

fn total_len(t: &[Word]) -> usize {
    t.iter().map(Word::len).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalize_is_idempotent_and_reduced(l in letters(3, 16)) {
        let w = normalize(&l);
        prop_assert_eq!(normalize(w.letters()), w.clone());
        prop_assert!(w.len() <= l.len());
        prop_assert_eq!(w.len() % 2, l.len() % 2);
        prop_assert!(w.letters().windows(2).all(|p| p[1] != p[0].inverse()));
        prop_assert!(w.mul(&w.inverse()).is_empty());
        prop_assert!(w.inverse().mul(&w).is_empty());
    }

    #[test]
    fn conjugator_verifies(u in word(2, 8), c in word(2, 5)) {
        let v = c.conjugate(&u);
        match conjugacy_test_free(&u, &v) {
            Conjugacy::Conjugator(w) => {
                prop_assert_eq!(w.conjugate(&u), v.clone());
                prop_assert!(w.len() <= c.len());
            }
            Conjugacy::NotConjugate => prop_assert!(false, "{} and {} are conjugate", u, v),
        }
        prop_assert_eq!(cyclic_normalize(&u), cyclic_normalize(&v));
    }

    #[test]
    fn conjugacy_is_an_equivalence(u in word(2, 6), v in word(2, 6), c in word(2, 4)) {
        let uv = conjugacy_test_free(&u, &v);
        let vu = conjugacy_test_free(&v, &u);
        prop_assert_eq!(matches!(uv, Conjugacy::Conjugator(_)), matches!(vu, Conjugacy::Conjugator(_)));
        // v ~ v^c, so u ~ v iff u ~ v^c
        let w = c.conjugate(&v);
        let uw = conjugacy_test_free(&u, &w);
        prop_assert_eq!(matches!(uv, Conjugacy::Conjugator(_)), matches!(uw, Conjugacy::Conjugator(_)));
        prop_assert_eq!(matches!(uv, Conjugacy::Conjugator(_)), cyclic_normalize(&u) == cyclic_normalize(&v));
    }

    #[test]
    fn nielsen_log_replays(rank in 2usize..=3, tuple in proptest::collection::vec(word(3, 6), 2..=3)) {
        let tuple: Vec<Word> = tuple
            .into_iter()
            .map(|w| Word::from_signed(&w.to_signed().into_iter().map(|s| s.signum() * ((s.abs() - 1) % rank as i64 + 1)).collect::<Vec<_>>()))
            .collect();
        let res = nielsen_reduce(&tuple, rank);
        let mut cur = tuple.clone();
        let mut len = total_len(&cur);
        for mv in &res.log {
            mv.apply(&mut cur);
            let next = total_len(&cur);
            prop_assert!(next <= len);
            len = next;
        }
        prop_assert_eq!(&cur, &res.reduced);
        prop_assert!(total_len(&res.reduced) <= total_len(&tuple));
        // the log writes each reduced entry as a word in the input entries
        let mut formal: Vec<Word> = (0..tuple.len()).map(Word::generator).collect();
        for mv in &res.log {
            mv.apply(&mut formal);
        }
        for (f, r) in formal.iter().zip(&res.reduced) {
            prop_assert_eq!(&f.substitute(&tuple), r);
        }
        // and the reversed, inverted log recovers the input
        for mv in res.log.iter().rev() {
            NielsenMove { inverted: !mv.inverted, ..*mv }.apply(&mut cur);
        }
        prop_assert_eq!(cur, tuple);
    }

    #[test]
    fn automorphisms_reduce_to_a_basis(phi in automorphism(3)) {
        let res = nielsen_reduce(phi.images(), 3);
        prop_assert!(res.is_basis && res.complete);
        prop_assert!(phi.compose(&phi.inverse()).is_identity());
        prop_assert!(phi.inverse().compose(&phi).is_identity());
    }

    #[test]
    fn inner_automorphisms_are_recognized(rank in 2usize..=3, w in word(3, 7)) {
        let w = Word::from_signed(&w.to_signed().into_iter().filter(|s| s.unsigned_abs() as usize <= rank).collect::<Vec<_>>());
        prop_assert_eq!(is_inner(&FreeAut::inner(rank, &w)), Innerness::Inner(w));
    }

    #[test]
    fn inner_automorphisms_form_a_subgroup(u in word(2, 5), v in word(2, 5), phi in automorphism(2)) {
        let a = FreeAut::inner(2, &u);
        let b = FreeAut::inner(2, &v);
        prop_assert_eq!(is_inner(&a.compose(&b)), Innerness::Inner(u.mul(&v)));
        prop_assert_eq!(is_inner(&a.inverse()), Innerness::Inner(u.inverse()));
        // phi inn(u) phi^-1 = inn(phi(u))
        let c = phi.compose(&a).compose(&phi.inverse());
        prop_assert_eq!(is_inner(&c), Innerness::Inner(phi.apply(&u)));
    }

    #[test]
    fn outer_automorphisms_are_not_inner(phi in automorphism(2), u in word(2, 4)) {
        let inner_phi = matches!(is_inner(&phi), Innerness::Inner(_));
        let psi = phi.compose(&FreeAut::inner(2, &u));
        prop_assert_eq!(inner_phi, matches!(is_inner(&psi), Innerness::Inner(_)));
        if !phi.abelianization().is_identity() {
            prop_assert!(!inner_phi);
        }
    }
}

/// FC membership read off conjugacy balls of sampled elements of the group
/// with a trivial kernel over `quotient`.
fn ball_fc(quotient: &str) -> Vec<bool> {
    let text = format!("kernel: trivial\nquotient: {quotient}\n");
    let spec = parse_extension(&text).unwrap();
    let g = ConcreteGroup::materialize(&spec).unwrap();
    g.sample_elements(12)
        .iter()
        .map(|x| conjugacy_ball(&g, x, 6, 20_000).is_closed())
        .collect()
}

#[test]
fn fc_subgroup_matches_conjugacy_balls() {
    // groups whose FC-subgroup is everything: every ball closes
    for q in ["Z^2", "Z^2 + Z/2", "finite perm((1 2 3);(1 2))", "free(a)"] {
        assert!(ball_fc(q).iter().all(|&c| c), "{q}");
        let spec = parse_extension(&format!("kernel: trivial\nquotient: {q}\n")).unwrap();
        assert!(!fc_is_trivial(spec.quotient()), "{q}");
    }
    // free groups of rank two: only the identity closes
    let spec = parse_extension("kernel: trivial\nquotient: free(a,b)\n").unwrap();
    assert!(fc_is_trivial(spec.quotient()));
    let g = ConcreteGroup::materialize(&spec).unwrap();
    for x in g.sample_elements(12) {
        assert_eq!(conjugacy_ball(&g, &x, 6, 20_000).is_closed(), g.is_identity(&x));
    }
    // in F2 x Z the Z factor is central and F2 elements are not
    let spec = parse_extension("kernel: trivial\nquotient: product(free(a,b), Z)\n").unwrap();
    assert!(!fc_is_trivial(spec.quotient()));
    let g = ConcreteGroup::materialize(&spec).unwrap();
    let z = g.generators()[2].clone();
    assert!(conjugacy_ball(&g, &z, 6, 20_000).is_closed());
    let a = g.generators()[0].clone();
    assert!(!conjugacy_ball(&g, &g.mul(&a, &z), 6, 20_000).is_closed());
}

#[test]
fn fc_distributes_over_direct_products() {
    for q in [
        "product(free(a,b), finite perm((1 2 3)))",
        "product(free(a,b), Z^2 + Z/3)",
    ] {
        let spec = parse_extension(&format!("kernel: trivial\nquotient: {q}\n")).unwrap();
        let g = ConcreteGroup::materialize(&spec).unwrap();
        let mut closed = 0;
        for x in g.sample_elements(40) {
            let in_fc = x.quotient.0[0] == FactorElement::Free(Word::identity());
            let ball = conjugacy_ball(&g, &x, 6, 20_000);
            assert_eq!(ball.is_closed(), in_fc, "{q}: {x}");
            closed += usize::from(in_fc);
        }
        assert!(closed > 0, "{q}");
    }
}
