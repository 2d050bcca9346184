//! Krull–Schmidt decomposition of free graded bimodules into indecomposables,
//! and identification of each indecomposable as `B_w(k)` by its support.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::braid::{reduced_word, Permutation};
use crate::laurent::UniPoly;
use crate::linalg::{collect_sparse, rank, solve, Echelon, SparseVec};
use crate::poly::{Mono, Poly, PolyMatrix};
use crate::rational::Q;
use crate::soergel::{bott_samelson, hom_space, invert_degree_zero, realize, tensor, GradedBimodule, Tag};

/// A free indecomposable summand of a carrier, with `projection · inclusion = id`.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: GradedBimodule,
    pub inclusion: PolyMatrix,
    pub projection: PolyMatrix,
    pub word: Vec<usize>,
    pub shift: i64,
}

impl Summand {
    pub fn label(&self) -> String {
        format_label(&self.word, self.shift)
    }
}

pub fn format_label(word: &[usize], shift: i64) -> String {
    let base = if word.is_empty() { "R".to_string() } else { format!("B{}", word.iter().map(|i| i.to_string()).collect::<String>()) };
    if shift == 0 {
        base
    } else {
        format!("{base}({shift})")
    }
}

fn flatten(m: &PolyMatrix, index: &mut HashMap<(usize, Mono), usize>) -> SparseVec {
    let mut out = Vec::new();
    for (e, p) in m.data.iter().enumerate() {
        for (mono, c) in p.terms() {
            let next = index.len();
            let col = *index.entry((e, *mono)).or_insert(next);
            out.push((col, c.clone()));
        }
    }
    collect_sparse(out)
}

/// Minimal polynomial of a matrix algebraic over `Q` (e.g. a degree-0 endomorphism).
pub fn minimal_polynomial(f: &PolyMatrix) -> UniPoly {
    let k = f.rows;
    let mut index = HashMap::new();
    let mut powers: Vec<SparseVec> = Vec::new();
    let mut ech = Echelon::new();
    let mut p = PolyMatrix::identity(k);
    loop {
        let v = flatten(&p, &mut index);
        if !ech.insert(v.clone()) {
            // v = Σ c_i powers[i]
            let m = powers.len();
            let mut by_coord: HashMap<usize, Vec<(usize, Q)>> = HashMap::new();
            for (i, pw) in powers.iter().enumerate() {
                for (c, x) in pw {
                    by_coord.entry(*c).or_default().push((i, x.clone()));
                }
            }
            let target: HashMap<usize, Q> = v.iter().cloned().collect();
            let mut coords: Vec<usize> = by_coord.keys().copied().collect();
            coords.extend(target.keys().copied());
            coords.sort_unstable();
            coords.dedup();
            let rows = coords.into_iter().map(|c| {
                (collect_sparse(by_coord.remove(&c).unwrap_or_default()), target.get(&c).cloned().unwrap_or_default())
            });
            let sol = solve(rows, m).expect("dependent power lies in the span");
            let mut coeffs = vec![Q::from_int(0); m + 1];
            for (i, c) in sol {
                coeffs[i] = -c;
            }
            coeffs[m] = Q::from_int(1);
            return UniPoly::from_coeffs(coeffs);
        }
        powers.push(v);
        p = p.mul(f);
    }
}

/// `g(f)` by Horner's rule.
pub fn eval_at_matrix(g: &UniPoly, f: &PolyMatrix) -> PolyMatrix {
    let k = f.rows;
    let mut acc = PolyMatrix::zeros(k, k);
    for c in g.coeffs().iter().rev() {
        acc = acc.mul(f).add(&PolyMatrix::scalar(k, &Poly::constant(c.clone())));
    }
    acc
}

fn linear_factor_power(root: &Q, r: usize) -> UniPoly {
    let lin = UniPoly::from_coeffs(vec![-root.clone(), Q::from_int(1)]);
    (0..r).fold(UniPoly::one(), |acc, _| &acc * &lin)
}

/// A nontrivial idempotent in `Q[f]`, if the minimal polynomial of `f` has a
/// rational root and another coprime factor.
pub fn idempotent_from(f: &PolyMatrix) -> Option<PolyMatrix> {
    let mu = minimal_polynomial(f);
    for root in mu.rational_roots() {
        let mut r = 0;
        let mut rest = mu.clone();
        let lin = linear_factor_power(&root, 1);
        loop {
            let (q, rem) = rest.divrem(&lin);
            if !rem.is_zero() {
                break;
            }
            rest = q;
            r += 1;
        }
        if rest.degree().unwrap_or(0) == 0 {
            continue;
        }
        let p = linear_factor_power(&root, r);
        let (_, _, t) = UniPoly::ext_gcd(&p, &rest);
        return Some(eval_at_matrix(&(&t * &rest), f));
    }
    None
}

/// A nontrivial idempotent degree-0 endomorphism of a free module, if any.
pub fn find_idempotent(x: &GradedBimodule) -> Option<PolyMatrix> {
    let basis: Vec<PolyMatrix> = hom_space(x, x, 0).into_iter().map(|m| m.matrix).collect();
    if basis.len() <= 1 {
        return None;
    }
    for b in &basis {
        if let Some(e) = idempotent_from(b) {
            return Some(e);
        }
    }
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let cand = if i < j { basis[i].add(&basis[j]) } else { basis[i].mul(&basis[j]) };
            if let Some(e) = idempotent_from(&cand) {
                return Some(e);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..300 {
        let mut cand = PolyMatrix::zeros(x.rank(), x.rank());
        for b in &basis {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                cand = cand.add(&b.scale_q(&Q::from_int(c)));
            }
        }
        if let Some(e) = idempotent_from(&cand) {
            return Some(e);
        }
    }
    None
}

fn carve(x: &GradedBimodule, e: &PolyMatrix) -> (GradedBimodule, PolyMatrix, PolyMatrix) {
    let mut k = x.clone();
    k = GradedBimodule::new(k.nvars(), k.degrees().to_vec(), k.right_actions().to_vec(), Some(e.clone()), k.tag().clone())
        .expect("idempotent commutes with the right action");
    let real = realize(&k);
    (real.module, real.inclusion, real.projection)
}

fn decompose_raw(x: &GradedBimodule) -> Vec<(GradedBimodule, PolyMatrix, PolyMatrix)> {
    if x.rank() == 0 {
        return Vec::new();
    }
    match find_idempotent(x) {
        None => vec![(x.clone(), PolyMatrix::identity(x.rank()), PolyMatrix::identity(x.rank()))],
        Some(e) => {
            let comp = PolyMatrix::identity(x.rank()).sub(&e);
            let mut out = Vec::new();
            for idem in [e, comp] {
                let (piece, incl, proj) = carve(x, &idem);
                for (m, i2, p2) in decompose_raw(&piece) {
                    out.push((m, incl.mul(&i2), p2.mul(&proj)));
                }
            }
            out
        }
    }
}

type Cache<K, V> = OnceLock<RwLock<HashMap<K, Arc<V>>>>;

fn cached<K: std::hash::Hash + Eq + Clone, V>(cell: &'static Cache<K, V>, key: &K, make: impl FnOnce() -> V) -> Arc<V> {
    let map = cell.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(v) = map.read().expect("cache poisoned").get(key) {
        return v.clone();
    }
    // computed outside the lock: `make` may recurse into the same cache
    let v = Arc::new(make());
    map.write().expect("cache poisoned").entry(key.clone()).or_insert(v).clone()
}

/// The fixed model of `B_w` used throughout: for `w = w's` with `l(w) = l(w') + 1`,
/// the `B_w` summand of `B_{w'} ⊗ B_s`; for `l(w) ≤ 1` the Bott–Samelson module.
pub fn canonical(w: &Permutation) -> Arc<GradedBimodule> {
    static CACHE: Cache<Permutation, GradedBimodule> = OnceLock::new();
    cached(&CACHE, w, || {
        let n = w.n();
        let word = reduced_word(w);
        let tag = Tag::Indecomposable(word.clone());
        if word.len() <= 1 {
            return bott_samelson(&word, n).expect("valid word").with_tag(tag);
        }
        let last = *word.last().expect("nonempty");
        let shorter = w.mul_simple_right(last);
        let carrier = tensor(&canonical(&shorter), &bott_samelson(&[last], n).expect("valid letter")).expect("same ring");
        decompose_raw(&carrier)
            .into_iter()
            .map(|(m, _, _)| m)
            .find(|m| identify_perm(m) == (w.clone(), 0))
            .expect("B_w occurs once in B_{w'} B_s")
            .with_tag(tag)
    })
}

/// Indecomposable summand, in the coordinates of `canonical(w).shift(shift)`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub w: Permutation,
    pub shift: i64,
    pub inclusion: PolyMatrix,
    pub projection: PolyMatrix,
}

impl Piece {
    pub fn module(&self) -> GradedBimodule {
        canonical(&self.w).shift(self.shift)
    }

    pub fn label(&self) -> String {
        format_label(&reduced_word(&self.w), self.shift)
    }
}

/// Decomposes a free bimodule into canonical indecomposables.
pub fn decompose_canonical(x: &GradedBimodule) -> Vec<Piece> {
    decompose_raw(x)
        .into_iter()
        .map(|(m, incl, proj)| {
            let (w, shift) = identify_perm(&m);
            let model = canonical(&w).shift(shift);
            let there = hom_space(&model, &m, 0);
            assert_eq!(there.len(), 1, "indecomposable summand has one-dimensional End^0");
            let phi = there.into_iter().next().expect("one map").matrix;
            let psi = invert_degree_zero(&phi).expect("nonzero map between copies of B_w is invertible");
            Piece { w, shift, inclusion: incl.mul(&phi), projection: psi.mul(&proj) }
        })
        .collect()
}

/// `canonical(x) ⊗ canonical(y)` split into canonical pieces (memoized).
pub fn tensor_canonical(x: &Permutation, y: &Permutation) -> Arc<Vec<Piece>> {
    static CACHE: Cache<(Permutation, Permutation), Vec<Piece>> = OnceLock::new();
    cached(&CACHE, &(x.clone(), y.clone()), || {
        let only = |w: &Permutation| {
            let r = canonical(w).rank();
            vec![Piece { w: w.clone(), shift: 0, inclusion: PolyMatrix::identity(r), projection: PolyMatrix::identity(r) }]
        };
        if x.is_identity() {
            return only(y);
        }
        if y.is_identity() {
            return only(x);
        }
        decompose_canonical(&tensor(&canonical(x), &canonical(y)).expect("same ring"))
    })
}

/// Decomposes a free bimodule into indecomposables `B_w(k)`, each in canonical
/// coordinates. Bott–Samelson carriers are memoized by word.
pub fn decompose(x: &GradedBimodule) -> Vec<Summand> {
    assert!(x.is_free(), "decompose expects a free bimodule; realize Karoubi objects first");
    let to_summands = |pieces: &[Piece], offset: i64| -> Vec<Summand> {
        pieces
            .iter()
            .map(|p| Summand {
                module: canonical(&p.w).shift(p.shift + offset),
                inclusion: p.inclusion.clone(),
                projection: p.projection.clone(),
                word: reduced_word(&p.w),
                shift: p.shift + offset,
            })
            .collect()
    };
    if let Tag::BottSamelson(word) = x.tag() {
        let base = bott_samelson(word, x.nvars()).expect("valid word");
        let offset = base.degrees()[0] - x.degrees()[0];
        let consistent = base.degrees().iter().zip(x.degrees()).all(|(a, b)| a - b == offset)
            && base.right_actions() == x.right_actions();
        if consistent {
            static CACHE: Cache<(usize, Vec<usize>), Vec<Piece>> = OnceLock::new();
            let pieces = cached(&CACHE, &(x.nvars(), word.clone()), || decompose_canonical(&base));
            return to_summands(&pieces, offset);
        }
    }
    to_summands(&decompose_canonical(x), 0)
}

const GENERIC_POINT: [i64; 8] = [2, 5, 11, 17, 23, 31, 41, 47];

/// Permutations `σ` with a joint eigenvector of the right actions at a generic
/// left point `a`: `Y_p(a) v = a_{σ(p)} v` for all `p`.
pub fn support(x: &GradedBimodule) -> Vec<Permutation> {
    let n = x.nvars();
    let k = x.rank();
    let point: Vec<Q> = GENERIC_POINT[..n].iter().map(|&a| Q::from_int(a)).collect();
    let ys: Vec<_> = (0..n).map(|p| x.right_action(p).eval(&point)).collect();
    Permutation::all(n)
        .into_iter()
        .filter(|sigma| {
            let mut rows = Vec::new();
            for (p, y) in ys.iter().enumerate() {
                let lam = &point[sigma.apply(p)];
                for r in 0..k {
                    let mut row = y.row_sparse(r);
                    match row.binary_search_by_key(&r, |(c, _)| *c) {
                        Ok(pos) => row[pos].1 = &row[pos].1 - lam,
                        Err(pos) => row.insert(pos, (r, -lam.clone())),
                    }
                    row.retain(|(_, v)| !v.is_zero());
                    rows.push(row);
                }
            }
            rank(rows) < k
        })
        .collect()
}

/// `(w, k)` with `x ≅ B_w(k)`, for an indecomposable `x`.
pub fn identify(x: &GradedBimodule) -> (Vec<usize>, i64) {
    let (w, k) = identify_perm(x);
    (reduced_word(&w), k)
}

pub fn identify_perm(x: &GradedBimodule) -> (Permutation, i64) {
    let supp = support(x);
    let top = supp.iter().max_by_key(|w| w.length()).cloned().unwrap_or_else(|| Permutation::identity(x.nvars()));
    let lo = x.degrees().iter().min().copied().unwrap_or(0);
    let hi = x.degrees().iter().max().copied().unwrap_or(0);
    (top, -(lo + hi) / 2)
}

/// A degree-0 map between free modules of equal graded rank is invertible iff
/// its constant part is.
pub fn is_isomorphism(f: &PolyMatrix) -> bool {
    f.rows == f.cols && f.constant_part().rank() == f.rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::soergel::b_w0;

    #[test]
    fn minimal_polynomial_of_projection() {
        let mut m = PolyMatrix::zeros(2, 2);
        m.set(0, 0, Poly::one());
        let mu = minimal_polynomial(&m);
        assert_eq!(mu, UniPoly::from_ints(&[0, -1, 1]));
        let e = idempotent_from(&m).unwrap();
        assert_eq!(e.mul(&e), e);
    }

    #[test]
    fn labels_of_bott_samelson_indecomposables() {
        assert_eq!(identify(&bott_samelson(&[], 3).unwrap()), (vec![], 0));
        assert_eq!(identify(&bott_samelson(&[1], 3).unwrap()), (vec![1], 0));
        assert_eq!(identify(&bott_samelson(&[1, 2], 3).unwrap()), (vec![1, 2], 0));
        assert_eq!(identify(&bott_samelson(&[2, 1], 3).unwrap()), (vec![2, 1], 0));
        assert_eq!(identify(&b_w0(3)), (reduced_word(&Permutation::longest(3)), 0));
        assert_eq!(identify(&bott_samelson(&[2], 3).unwrap().shift(-1)), (vec![2], -1));
    }

    #[test]
    fn bs_squared_splits_into_shifts() {
        let b = bott_samelson(&[1], 2).unwrap();
        let bb = tensor(&b, &b).unwrap();
        let parts = decompose(&bb);
        let mut labels: Vec<String> = parts.iter().map(|s| s.label()).collect();
        labels.sort();
        assert_eq!(labels, vec!["B1(-1)", "B1(1)"]);
        for s in &parts {
            assert_eq!(s.projection.mul(&s.inclusion), PolyMatrix::identity(s.module.rank()));
        }
    }

    #[test]
    fn b121_splits() {
        let parts = decompose(&bott_samelson(&[1, 2, 1], 3).unwrap());
        let mut labels: Vec<String> = parts.iter().map(|s| s.label()).collect();
        labels.sort();
        let w0 = format_label(&reduced_word(&Permutation::longest(3)), 0);
        let mut expected = vec!["B1".to_string(), w0];
        expected.sort();
        assert_eq!(labels, expected);
    }
}
