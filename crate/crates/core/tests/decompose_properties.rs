use khr_core::braid::{reduced_word, Permutation};
use khr_core::decompose::{decompose, format_label, identify, is_isomorphism};
use khr_core::poly::PolyMatrix;
use khr_core::soergel::{b_w0, bott_samelson, hom_space, GradedRank};
use proptest::prelude::*;

fn labels(word: &[usize], n: usize) -> Vec<String> {
    let mut l: Vec<String> = decompose(&bott_samelson(word, n).unwrap()).iter().map(|s| s.label()).collect();
    l.sort();
    l
}

fn sorted(v: &[&str]) -> Vec<String> {
    let mut out: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    out.sort();
    out
}

#[test]
fn cube_of_a_generator() {
    assert_eq!(labels(&[1, 1, 1], 2), sorted(&["B1(-2)", "B1", "B1", "B1(2)"]));
}

#[test]
fn length_four_word_in_three_strands() {
    let w0 = format_label(&reduced_word(&Permutation::longest(3)), 0);
    let top = |k: i64| format_label(&reduced_word(&Permutation::longest(3)), k);
    assert_eq!(w0, top(0));
    assert_eq!(labels(&[1, 2, 1, 2], 3), sorted(&[&top(1), &top(-1), "B12"]));
}

#[test]
fn summands_reassemble() {
    for (word, n) in [(vec![1, 1], 2), (vec![1, 2, 1], 3), (vec![2, 1, 2, 1], 3)] {
        let m = bott_samelson(&word, n).unwrap();
        let parts = decompose(&m);
        let total = parts.iter().fold(GradedRank::default(), |acc, s| acc.add(&s.module.graded_rank()));
        assert_eq!(total, m.graded_rank());
        // Σ ι∘π = id, π_a ∘ ι_b = δ_ab
        let mut sum = PolyMatrix::zeros(m.rank(), m.rank());
        for (a, sa) in parts.iter().enumerate() {
            sum = sum.add(&sa.inclusion.mul(&sa.projection));
            for (b, sb) in parts.iter().enumerate() {
                let c = sa.projection.mul(&sb.inclusion);
                if a == b {
                    assert_eq!(c, PolyMatrix::identity(sa.module.rank()));
                } else {
                    assert!(c.data.iter().all(|p| p.is_zero()));
                }
            }
        }
        assert_eq!(sum, PolyMatrix::identity(m.rank()));
    }
}

#[test]
fn indecomposables_have_local_degree_zero_endomorphisms() {
    for s in decompose(&bott_samelson(&[1, 2, 1, 2], 3).unwrap()) {
        assert_eq!(hom_space(&s.module, &s.module, 0).len(), 1, "{}", s.label());
    }
}

#[test]
fn isomorphism_by_constant_part() {
    let w = b_w0(2);
    let b = bott_samelson(&[1], 2).unwrap();
    let f = &hom_space(&b, &w, 0)[0].matrix;
    assert!(is_isomorphism(f));
    assert!(!is_isomorphism(&PolyMatrix::zeros(2, 2)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn shifts_are_read_off(shift in -4i64..=4, word in proptest::collection::vec(1usize..3, 0..3)) {
        let mut reduced = word.clone();
        reduced.dedup();
        let b = bott_samelson(&reduced, 3).unwrap().shift(shift);
        prop_assert_eq!(identify(&b), (reduced, shift));
    }
}

#[test]
fn canonical_tensor_products() {
    use khr_core::decompose::{canonical, tensor_canonical};
    use khr_core::soergel::{check_map, tensor, BimoduleMap};
    let w0 = Permutation::longest(3);
    let s1 = Permutation::simple(1, 3);
    let s12 = Permutation::from_word(&[1, 2], 3);
    let mut l: Vec<String> = tensor_canonical(&w0, &s1).iter().map(|p| p.label()).collect();
    l.sort();
    let top = |k: i64| format_label(&reduced_word(&w0), k);
    assert_eq!(l, sorted(&[&top(-1), &top(1)]));
    let pieces = tensor_canonical(&s12, &s1);
    let mut l: Vec<String> = pieces.iter().map(|p| p.label()).collect();
    l.sort();
    assert_eq!(l, sorted(&["B1", &top(0)]));
    let carrier = tensor(&canonical(&s12), &canonical(&s1)).unwrap();
    for p in pieces.iter() {
        let m = p.module();
        check_map(&m, &carrier, &BimoduleMap::new(0, p.inclusion.clone())).unwrap();
        check_map(&carrier, &m, &BimoduleMap::new(0, p.projection.clone())).unwrap();
        assert_eq!(p.projection.mul(&p.inclusion), PolyMatrix::identity(m.rank()));
    }
    assert_eq!(canonical(&w0).graded_rank(), b_w0(3).graded_rank());
}
