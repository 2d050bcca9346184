use khr_core::poly::{count_monomials, Poly, PolyMatrix};
use khr_core::rational::Q;
use khr_core::soergel::*;
use proptest::prelude::*;

fn r(n: usize) -> GradedBimodule {
    GradedBimodule::diagonal(n)
}

fn rank_of(degs: &[(i64, i64)]) -> GradedRank {
    GradedRank(degs.iter().copied().collect())
}

/// Graded dimension of `(R ⊗_{R^W} R)_d`: the right factor is free over `R^W`
/// with Poincaré polynomial `[n]_q!`, enumerated directly here.
fn coinvariant_tensor_dim(n: usize, d: i64) -> usize {
    if d < 0 || d % 2 != 0 {
        return 0;
    }
    // coefficients of Π_{i=1}^{n} (1 + q + … + q^{i-1})
    let mut poincare = vec![1usize];
    for i in 1..=n {
        let mut next = vec![0usize; poincare.len() + i - 1];
        for (a, c) in poincare.iter().enumerate() {
            for b in 0..i {
                next[a + b] += c;
            }
        }
        poincare = next;
    }
    let half = d / 2;
    poincare
        .iter()
        .enumerate()
        .filter(|(k, _)| *k as i64 <= half)
        .map(|(k, c)| c * count_monomials(n, half - k as i64))
        .sum()
}

#[test]
fn bott_samelson_examples() {
    let e = bott_samelson(&[], 3).unwrap();
    assert_eq!(e.rank(), 1);
    assert_eq!(e.degrees(), &[0]);
    for j in 0..3 {
        assert_eq!(e.right_action(j), &PolyMatrix::scalar(1, &Poly::var(j)));
    }
    let b = bott_samelson(&[1], 2).unwrap();
    assert_eq!(b.degrees(), &[-1, 1]);
    let b121 = bott_samelson(&[1, 2, 1], 3).unwrap();
    assert_eq!(b121.rank(), 8);
    b121.validate().unwrap();
    assert!(bott_samelson(&[3], 3).is_err());
}

#[test]
fn tensor_examples() {
    let b1 = bott_samelson(&[1], 2).unwrap();
    let t = tensor(&r(2), &b1).unwrap();
    assert_eq!(t.right_actions(), b1.right_actions());
    let bb = tensor(&b1, &b1).unwrap();
    assert_eq!(bb.graded_rank(), rank_of(&[(-2, 1), (0, 2), (2, 1)]));
    let b1_3 = bott_samelson(&[1], 3).unwrap();
    let b2_3 = bott_samelson(&[2], 3).unwrap();
    let t12 = tensor(&b1_3, &b2_3).unwrap();
    let bs12 = bott_samelson(&[1, 2], 3).unwrap();
    assert_eq!(t12.right_actions(), bs12.right_actions());
    assert_eq!(t12.degrees(), bs12.degrees());
}

#[test]
fn shift_bookkeeping() {
    let b = bott_samelson(&[1, 2], 3).unwrap();
    assert_eq!(b.shift(0), b);
    assert_eq!(b.shift(2).shift(-5), b.shift(-3));
    assert_eq!(b.shift(1).graded_rank(), b.graded_rank().shift(-1));
}

#[test]
fn hom_space_examples() {
    for n in 1..=3 {
        let rr = r(n);
        let id = hom_space(&rr, &rr, 0);
        assert_eq!(id.len(), 1);
        assert_eq!(hom_space(&rr, &rr, 2).len(), n);
        assert!(hom_space(&rr, &rr, 1).is_empty());
    }
    let b = bott_samelson(&[1], 2).unwrap();
    let maps = hom_space(&r(2).shift(-1), &b, 0);
    assert_eq!(maps.len(), 1);
    let s = split_map(1, 2).unwrap();
    // spanned by the split map: proportional matrices
    let c = maps[0].matrix.get(1, 0).constant_term();
    let scaled = s.matrix.scale_q(&(&c / &Q::from_int(-1)));
    assert_eq!(maps[0].matrix, scaled);
}

#[test]
fn hom_space_dimensions_invariant_under_basis_permutation() {
    let b = bott_samelson(&[1, 2, 1], 3).unwrap();
    let perm: Vec<usize> = vec![3, 1, 7, 0, 5, 2, 6, 4];
    let p = {
        let mut m = PolyMatrix::zeros(8, 8);
        for (i, &j) in perm.iter().enumerate() {
            m.set(i, j, Poly::one());
        }
        m
    };
    let pinv = {
        let mut m = PolyMatrix::zeros(8, 8);
        for (i, &j) in perm.iter().enumerate() {
            m.set(j, i, Poly::one());
        }
        m
    };
    let degrees: Vec<i64> = perm.iter().map(|&j| b.degrees()[j]).collect();
    let right = b.right_actions().iter().map(|y| p.mul(y).mul(&pinv)).collect();
    let permuted = GradedBimodule::new(3, degrees, right, None, Tag::Sum).unwrap();
    let bs = bott_samelson(&[1], 3).unwrap();
    for d in [-2, 0, 2] {
        assert_eq!(hom_space(&b, &bs, d).len(), hom_space(&permuted, &bs, d).len());
        assert_eq!(hom_space(&bs, &b, d).len(), hom_space(&bs, &permuted, d).len());
    }
}

#[test]
fn graded_rank_multiplicative() {
    for (w1, w2) in [(vec![1], vec![2]), (vec![1, 2], vec![1]), (vec![2], vec![2, 1, 2])] {
        let a = bott_samelson(&w1, 3).unwrap().shift(1);
        let b = bott_samelson(&w2, 3).unwrap();
        let t = tensor(&a, &b).unwrap();
        assert_eq!(t.graded_rank(), a.graded_rank().mul(&b.graded_rank()));
    }
}

#[test]
fn all_right_actions_commute_and_symmetric_functions_agree() {
    for (word, n) in [(vec![], 2), (vec![1], 2), (vec![1, 1], 2), (vec![1, 2, 1], 3), (vec![2, 1, 3], 4)] {
        let b = bott_samelson(&word, n).unwrap();
        b.validate().unwrap();
        assert!(b.symmetric_actions_agree(), "{word:?}");
    }
    for n in 1..=4 {
        let w = b_w0(n);
        w.validate().unwrap();
        assert!(w.symmetric_actions_agree());
    }
}

#[test]
fn b_w0_examples() {
    assert_eq!(b_w0(1).right_actions(), r(1).right_actions());
    let w2 = b_w0(2);
    assert_eq!(w2.degrees(), &[-1, 1]);
    let bs = bott_samelson(&[1], 2).unwrap();
    let there = hom_space(&bs, &w2, 0);
    let back = hom_space(&w2, &bs, 0);
    assert_eq!((there.len(), back.len()), (1, 1));
    assert!(invert_degree_zero(&there[0].matrix).is_some());
    let w3 = b_w0(3);
    assert_eq!(w3.rank(), 6);
    // v^-3 (1 + v^2)(1 + v^2 + v^4)
    assert_eq!(w3.graded_rank(), rank_of(&[(-3, 1), (-1, 2), (1, 2), (3, 1)]));
}

#[test]
fn end_of_b_w0_matches_coinvariant_tensor() {
    for n in 2..=3 {
        let w = b_w0(n);
        for d in (0..=12).step_by(2) {
            assert_eq!(hom_space(&w, &w, d).len(), coinvariant_tensor_dim(n, d), "n={n} d={d}");
        }
    }
}

#[test]
fn split_bs_shift_off_bs_bs() {
    let b = bott_samelson(&[1], 2).unwrap();
    let bb = tensor(&b, &b).unwrap();
    // projection id ⊗ multiplication: B_s B_s -> B_s(1)
    let target = b.shift(1);
    let mult = multiplication_map(1, 2).unwrap();
    let p = BimoduleMap::new(0, id_tensor(&b, &mult.matrix));
    check_map(&bb, &target, &p).unwrap();
    let incl = hom_space(&target, &bb, 0);
    let (i, p) = find_pair(&incl, &[p]).expect("B_s(1) is a summand of B_s B_s");
    let (sum, comp) = split_summand(&bb, &i, &p).unwrap();
    assert_eq!(sum.graded_rank(), target.graded_rank());
    assert_eq!(comp.graded_rank(), b.shift(-1).graded_rank());
    assert_eq!(sum.graded_rank().add(&comp.graded_rank()), bb.graded_rank());
    // R is not a summand: no degree-0 pair composes to a unit
    let rr = r(2);
    assert!(find_pair(&hom_space(&rr, &bb, 0), &hom_space(&bb, &rr, 0)).is_none());
}

fn find_pair(incl: &[BimoduleMap], proj: &[BimoduleMap]) -> Option<(BimoduleMap, BimoduleMap)> {
    for i in incl {
        for p in proj {
            let c = p.after(i);
            if !c.matrix.constant_part().data.iter().all(|q| q.is_zero()) {
                return Some((i.clone(), p.clone()));
            }
        }
    }
    None
}

#[test]
fn split_identity_gives_zero_complement() {
    let b = bott_samelson(&[1, 2], 3).unwrap();
    let id = BimoduleMap::identity(&b);
    let (s, c) = split_summand(&b, &id, &id).unwrap();
    assert_eq!(s.graded_rank(), b.graded_rank());
    assert_eq!(c.graded_rank().total(), 0);
    let bad = id.scale(&Q::from_int(0));
    assert!(split_summand(&b, &bad, &id).is_err());
}

#[test]
fn split_b1_off_b1b2b1() {
    let m = bott_samelson(&[1, 2, 1], 3).unwrap();
    let b1 = bott_samelson(&[1], 3).unwrap();
    let incl = hom_space(&b1, &m, 0);
    let proj = hom_space(&m, &b1, 0);
    let (i, p) = find_pair(&incl, &proj).expect("B1 is a summand");
    let (s, c) = split_summand(&m, &i, &p).unwrap();
    assert_eq!(s.graded_rank(), b1.graded_rank());
    // (v^-1 + v)^3 - (v^-1 + v)
    assert_eq!(c.graded_rank(), rank_of(&[(-3, 1), (-1, 2), (1, 2), (3, 1)]));
    let real = realize(&c);
    real.module.validate().unwrap();
    assert!(real.module.symmetric_actions_agree());
    // the complement is B_{w0}
    let w = b_w0(3);
    let there = hom_space(&real.module, &w, 0);
    assert_eq!(there.len(), 1);
    assert!(invert_degree_zero(&there[0].matrix).is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn random_words_give_valid_bimodules(word in proptest::collection::vec(1usize..3, 0..4)) {
        let b = bott_samelson(&word, 3).unwrap();
        prop_assert!(b.validate().is_ok());
        prop_assert!(b.symmetric_actions_agree());
        prop_assert_eq!(b.graded_rank().total(), 1i64 << word.len());
    }
}
