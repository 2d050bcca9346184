use khr_core::braid::{jucys_murphy_braid, parse_braid_word, BraidWord, Permutation};
use khr_core::hecke::{
    braid_to_hecke, homfly, jm_elementary_identity, ocneanu_trace, trace_with, HeckeElement, Normalization,
};
use khr_core::laurent::{LaurentScalar, RatFunc};
use khr_core::young::{jm_acts_by_contents, verify_weight_decomposition, YoungDiagram};
use proptest::prelude::*;

fn z() -> LaurentScalar {
    LaurentScalar::v_minus_vinv()
}

#[test]
fn generators_satisfy_hecke_relations() {
    for n in 2..=5 {
        let one = HeckeElement::one(n);
        for i in 1..n {
            let pos = braid_to_hecke(&BraidWord::new(n, vec![i as i32]).unwrap());
            let neg = braid_to_hecke(&BraidWord::new(n, vec![-(i as i32)]).unwrap());
            assert_eq!(&pos * &pos, &pos.scale(&z()) + &one);
            assert_eq!(&pos * &neg, one);
            assert_eq!(&neg * &pos, one);
            if i + 1 < n {
                let next = HeckeElement::generator(i + 1, n);
                assert_eq!(&(&pos * &next) * &pos, &(&next * &pos) * &next);
            }
        }
    }
}

#[test]
fn jucys_murphy_elements_commute() {
    for n in 1..=4 {
        let js: Vec<HeckeElement> =
            (0..n).map(|k| braid_to_hecke(&jucys_murphy_braid(k, n).unwrap())).collect();
        for a in &js {
            for b in &js {
                assert_eq!(a * b, b * a);
            }
        }
    }
}

/// Independent check of the Markov axioms on every basis element.
#[test]
fn trace_axioms_exhaustive() {
    let vinv = LaurentScalar::from_ratfunc(RatFunc::v_pow(-1, (-1).into()));
    assert_eq!(trace_with(&HeckeElement::one(1), Normalization::Unreduced), LaurentScalar::unknot_factor());
    for n in 1..=3 {
        for w in Permutation::all(n) {
            let x = HeckeElement::basis(w);
            let t = ocneanu_trace(&x);
            let up = x.embed();
            assert_eq!(ocneanu_trace(&up), &LaurentScalar::unknot_factor() * &t);
            let stab = up.mul_generator_right(n);
            assert_eq!(ocneanu_trace(&stab), &vinv * &t);
        }
    }
}

#[test]
fn weight_decomposition_through_four() {
    for n in 2..=4 {
        assert!(verify_weight_decomposition(n), "n = {n}");
    }
}

#[test]
fn jm_eigenvalues_through_four() {
    for l in YoungDiagram::all(4) {
        assert!(jm_acts_by_contents(&l), "{l}");
    }
}

#[test]
fn jm_identity_exhaustive_small() {
    for n in 2..=3 {
        for w in Permutation::all(n) {
            for k in 0..n {
                assert!(jm_elementary_identity(&HeckeElement::basis(w.clone()), k), "n={n} w={w:?} k={k}");
            }
        }
    }
}

fn markov_test_set() -> Vec<BraidWord> {
    [
        ("", 1),
        ("1", 2),
        ("1 1", 2),
        ("1 1 1", 2),
        ("-1 -1 -1", 2),
        ("1 2", 3),
        ("1 -2", 3),
        ("1 -2 1 -2", 3),
        ("1 1 2 -1 2", 3),
        ("1 2 3", 4),
    ]
    .iter()
    .map(|(w, n)| parse_braid_word(w, *n).unwrap())
    .collect()
}

#[test]
fn homfly_markov_invariance() {
    for b in markov_test_set() {
        let p = homfly(&b);
        assert_eq!(p, homfly(&b.stabilize(true)), "positive stabilization of {b}");
        assert_eq!(p, homfly(&b.stabilize(false)), "negative stabilization of {b}");
        for i in 1..b.strands() as i32 {
            for g in [i, -i] {
                let gw = BraidWord::new(b.strands(), vec![g]).unwrap();
                assert_eq!(p, homfly(&b.conjugate_by(&gw).unwrap()), "conjugation of {b} by {g}");
            }
        }
    }
}

#[test]
fn homfly_trefoil_and_mirror_differ() {
    let t = homfly(&parse_braid_word("1 1 1", 2).unwrap());
    let m = homfly(&parse_braid_word("-1 -1 -1", 2).unwrap());
    assert_ne!(t, m);
}

fn arb_basis_pair() -> impl Strategy<Value = (Permutation, Permutation)> {
    (1usize..=4).prop_flat_map(|n| {
        let p = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
        (p.clone(), p)
    })
    .prop_map(|(a, b)| (Permutation::from_images(a).unwrap(), Permutation::from_images(b).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn trace_is_cyclic((u, w) in arb_basis_pair()) {
        let x = HeckeElement::basis(u);
        let y = HeckeElement::basis(w);
        prop_assert_eq!(ocneanu_trace(&(&x * &y)), ocneanu_trace(&(&y * &x)));
    }
}
