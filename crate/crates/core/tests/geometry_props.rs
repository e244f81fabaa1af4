mod common;

use braidfix::braid::BraidWord;
use braidfix::rep::{
    fingerprint, gauge_fix, hurwitz, is_irreducible, product, slice_representative, Configuration,
    IRREDUCIBLE_TOL, SLICE_TOL,
};
use braidfix::su2::{align, conj_action, qmul, reflect, Quaternion, TracelessElement};
use common::{braid_on, configuration, unit_quaternion, unit_vector};
use proptest::prelude::*;

fn sized_config(max_n: usize) -> impl Strategy<Value = Configuration> {
    (2..=max_n).prop_flat_map(configuration)
}

fn config_and_braid(max_n: usize, max_len: usize) -> impl Strategy<Value = (Configuration, BraidWord)> {
    (2..=max_n).prop_flat_map(move |n| (configuration(n), braid_on(n, max_len)))
}

/// Evaluates a free word on a tuple of quaternions.
fn evaluate(w: &braidfix::braid::FreeWord, c: &Configuration) -> Quaternion {
    w.syllables().iter().fold(Quaternion::ONE, |acc, &(i, e)| {
        let q = c.elems()[i - 1].quaternion();
        let q = if e < 0 { q.inverse() } else { q };
        (0..e.unsigned_abs()).fold(acc, |a, _| qmul(&a, &q))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reflect_is_an_involution(u in unit_vector(), v in unit_vector()) {
        let (u, v) = (TracelessElement::new(u).unwrap(), TracelessElement::new(v).unwrap());
        let back = reflect(&u, &reflect(&u, &v));
        prop_assert!((back.0 - v.0).amax() <= 1e-12);
    }

    #[test]
    fn conjugation_is_an_isometry(g in unit_quaternion(), a in unit_vector(), b in unit_vector()) {
        let (a, b) = (TracelessElement::new(a).unwrap(), TracelessElement::new(b).unwrap());
        let (ga, gb) = (conj_action(&g, &a).unwrap(), conj_action(&g, &b).unwrap());
        prop_assert!((ga.dot(&gb) - a.dot(&b)).abs() <= 1e-12);
    }

    #[test]
    fn quaternion_product_is_associative(a in unit_quaternion(), b in unit_quaternion(), c in unit_quaternion()) {
        let l = qmul(&qmul(&a, &b), &c);
        let r = qmul(&a, &qmul(&b, &c));
        prop_assert!(l.distance(&r) <= 1e-12);
    }

    #[test]
    fn align_recovers_a_conjugation(c in (1usize..=6).prop_flat_map(configuration), g in unit_quaternion()) {
        let moved = c.conjugated(&g);
        let (_, d) = align(c.elems(), moved.elems()).unwrap();
        prop_assert!(d <= 1e-9);
    }

    #[test]
    fn braid_relation_on_tuples((c, i) in (3usize..=6).prop_flat_map(|n| (configuration(n), 1..(n as i32 - 1)))) {
        let n = c.n();
        let l = hurwitz(&BraidWord::new(n, vec![i, i + 1, i]).unwrap(), &c).unwrap();
        let r = hurwitz(&BraidWord::new(n, vec![i + 1, i, i + 1]).unwrap(), &c).unwrap();
        prop_assert!(l.distance(&r) <= 1e-12);
    }

    #[test]
    // Rounding errors grow roughly threefold per letter, so the 1e-12 checks
    // use words of length at most 4.
    #[test]
    fn product_is_preserved((c, b) in config_and_braid(6, 4)) {
        let moved = hurwitz(&b, &c).unwrap();
        prop_assert!(product(&moved).distance(&product(&c)) <= 1e-12);
    }

    #[test]
    fn action_commutes_with_gauge((c, b) in config_and_braid(6, 4), g in unit_quaternion()) {
        let l = hurwitz(&b, &c.conjugated(&g)).unwrap();
        let r = hurwitz(&b, &c).unwrap().conjugated(&g);
        prop_assert!(l.distance(&r) <= 1e-12);
    }

    #[test]
    fn inverse_word_undoes_action((c, b) in config_and_braid(6, 4)) {
        let back = hurwitz(&b.inverse(), &hurwitz(&b, &c).unwrap()).unwrap();
        prop_assert!(back.distance(&c) <= 1e-10);
    }

    #[test]
    fn reducibility_is_preserved((n, b) in (2usize..=6).prop_flat_map(|n| (Just(n), braid_on(n, 10))), axis in unit_vector(), signs in prop::collection::vec(any::<bool>(), 6)) {
        let vs: Vec<_> = (0..n).map(|k| if signs[k] { axis } else { -axis }).collect();
        let c = Configuration::from_vectors(&vs).unwrap();
        prop_assert!(!is_irreducible(&hurwitz(&b, &c).unwrap(), IRREDUCIBLE_TOL));
    }

    #[test]
    fn free_group_action_matches_tuple_action((c, b) in config_and_braid(5, 8)) {
        let moved = hurwitz(&b, &c).unwrap();
        for i in 1..=c.n() {
            let w = braidfix::braid::free_action(&b, &braidfix::braid::FreeWord::generator(i)).unwrap();
            let q = evaluate(&w, &c);
            prop_assert!(q.distance(&moved.elems()[i - 1].quaternion()) <= 1e-10);
        }
    }

    #[test]
    fn fingerprint_is_conjugation_invariant(c in sized_config(6), g in unit_quaternion()) {
        prop_assert!(fingerprint(&c).distance(&fingerprint(&c.conjugated(&g))) <= 1e-12);
    }

    #[test]
    fn fingerprint_separates_classes(a in sized_config(5), seed in any::<u64>()) {
        // a second tuple of the same size, drawn from the seed
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let vs: Vec<_> = (0..a.n()).map(|_| {
            let v = nalgebra::Vector3::new(
                rand::Rng::gen_range(&mut rng, -1.0..1.0),
                rand::Rng::gen_range(&mut rng, -1.0..1.0),
                rand::Rng::gen_range(&mut rng, -1.0..1.0));
            if v.norm() < 1e-3 { nalgebra::Vector3::x() } else { v }
        }).collect();
        let b = Configuration::from_vectors(&vs).unwrap();
        let (_, d) = align(a.elems(), b.elems()).unwrap();
        prop_assume!(d.sqrt() > 1e-3);
        prop_assert!(fingerprint(&a).distance(&fingerprint(&b)) > 1e-6);
    }

    #[test]
    fn slice_round_trip(c in sized_config(6)) {
        prop_assume!(is_irreducible(&c, 1e-4));
        let (s, g) = gauge_fix(&c).unwrap();
        prop_assert_eq!(s.params.len(), 2 * c.n() - 3);
        let decoded = s.decode();
        prop_assert!(decoded.distance(&c.conjugated(&g)) <= SLICE_TOL);
        let rep = slice_representative(&c).unwrap();
        prop_assert!(rep.distance(&decoded) <= SLICE_TOL);
        let (_, d) = align(c.elems(), rep.elems()).unwrap();
        prop_assert!(d <= 1e-18);
    }

    #[test]
    fn slice_is_gauge_invariant(c in sized_config(6), g in unit_quaternion()) {
        prop_assume!(is_irreducible(&c, 1e-4));
        let a = slice_representative(&c).unwrap();
        let b = slice_representative(&c.conjugated(&g)).unwrap();
        prop_assert!(a.distance(&b) <= 1e-9);
    }
}
