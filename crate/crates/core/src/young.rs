//! Young diagrams, the weight formula for the trace, and seminormal
//! representations of the Hecke algebra.
//!
//! A cell is `(i, j)` with `i` the column and `j` the row, both from 0; its
//! content is `i - j`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::braid::{reduced_word, Permutation};
use crate::error::{Error, Result};
use crate::hecke::{elementary_symmetric_of, inverse_jucys_murphy, trace_with, HeckeElement, Normalization};
use crate::laurent::{LaurentScalar, RatFunc, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct YoungDiagram {
    rows: Vec<usize>,
}

impl YoungDiagram {
    pub fn new(rows: Vec<usize>) -> Result<Self> {
        if rows.iter().any(|&r| r == 0) || rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(format!("{rows:?} is not a partition")));
        }
        Ok(YoungDiagram { rows })
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn size(&self) -> usize {
        self.rows.iter().sum()
    }

    pub fn columns(&self) -> Vec<usize> {
        let width = self.rows.first().copied().unwrap_or(0);
        (0..width).map(|i| self.rows.iter().filter(|&&r| r > i).count()).collect()
    }

    pub fn transpose(&self) -> Self {
        YoungDiagram { rows: self.columns() }
    }

    /// Cells `(column, row)`.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (j, &len) in self.rows.iter().enumerate() {
            for i in 0..len {
                out.push((i, j));
            }
        }
        out
    }

    pub fn content(cell: (usize, usize)) -> i64 {
        cell.0 as i64 - cell.1 as i64
    }

    pub fn hook(&self, cell: (usize, usize)) -> usize {
        let (i, j) = cell;
        let arm = self.rows[j] - i - 1;
        let leg = self.columns()[i] - j - 1;
        arm + leg + 1
    }

    /// `Σ_i (i-1) λ'_i` over the column lengths `λ'`.
    pub fn n_prime(&self) -> usize {
        self.columns().iter().enumerate().map(|(i, &c)| i * c).sum()
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all(n: usize) -> Vec<YoungDiagram> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<YoungDiagram>) {
            if rest == 0 {
                out.push(YoungDiagram { rows: cur.clone() });
                return;
            }
            for part in (1..=rest.min(max)).rev() {
                cur.push(part);
                rec(rest - part, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Standard tableaux, each given as the cell of entry `0, 1, …, n-1`.
    pub fn standard_tableaux(&self) -> Vec<Vec<(usize, usize)>> {
        fn rec(shape: &[usize], filled: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
            if cur.len() == shape.iter().sum::<usize>() {
                out.push(cur.clone());
                return;
            }
            for j in 0..shape.len() {
                let i = filled[j];
                if i < shape[j] && (j == 0 || filled[j - 1] > i) {
                    filled[j] += 1;
                    cur.push((i, j));
                    rec(shape, filled, cur, out);
                    cur.pop();
                    filled[j] -= 1;
                }
            }
        }
        let mut out = Vec::new();
        rec(&self.rows, &mut vec![0; self.rows.len()], &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for YoungDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `W_λ = q^{n'(λ)} ∏ (1 + a q^{-c}) / (1 - q^{h})`.
pub fn weight(lambda: &YoungDiagram) -> LaurentScalar {
    let mut w = LaurentScalar::from_ratfunc(RatFunc::q_pow(lambda.n_prime() as i64));
    for cell in lambda.cells() {
        let c = YoungDiagram::content(cell);
        let h = lambda.hook(cell) as i64;
        let num = &LaurentScalar::one() + &LaurentScalar::a_term(1, RatFunc::q_pow(-c));
        let den = (&RatFunc::one() - &RatFunc::q_pow(h)).inv();
        w = (&w * &num).scale(&den);
    }
    w
}

/// Small dense matrix over `Q(v)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    dim: usize,
    data: Vec<RatFunc>,
}

impl RatMatrix {
    pub fn zeros(dim: usize) -> Self {
        RatMatrix { dim, data: vec![RatFunc::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = RatFunc::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> &RatFunc {
        &self.data[r * self.dim + c]
    }

    fn set(&mut self, r: usize, c: usize, x: RatFunc) {
        self.data[r * self.dim + c] = x;
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * d + j] = &out.data[i * d + j] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        RatMatrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &RatFunc) -> RatMatrix {
        RatMatrix { dim: self.dim, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> RatFunc {
        (0..self.dim).fold(RatFunc::zero(), |acc, i| &acc + self.get(i, i))
    }
}

#[derive(Clone, Debug)]
pub struct SeminormalRep {
    diagram: YoungDiagram,
    tableaux: Vec<Vec<(usize, usize)>>,
    generators: Vec<RatMatrix>,
    images: HashMap<Permutation, RatMatrix>,
}

impl SeminormalRep {
    pub fn diagram(&self) -> &YoungDiagram {
        &self.diagram
    }

    pub fn dim(&self) -> usize {
        self.tableaux.len()
    }

    pub fn tableaux(&self) -> &[Vec<(usize, usize)>] {
        &self.tableaux
    }

    /// Matrix of `t_{s_i}` (1-based `i`).
    pub fn generator(&self, i: usize) -> &RatMatrix {
        &self.generators[i - 1]
    }

    /// Matrix of `t_w`.
    pub fn basis_image(&self, w: &Permutation) -> &RatMatrix {
        &self.images[w]
    }

    /// Matrix of `x`, with `a`-coefficients kept separate: `a^k ↦ M_k`.
    pub fn represent(&self, x: &HeckeElement) -> Result<std::collections::BTreeMap<i64, RatMatrix>> {
        if x.n() != self.diagram.size() {
            return Err(Error::StrandMismatch { left: x.n(), right: self.diagram.size() });
        }
        let mut out = std::collections::BTreeMap::new();
        for (w, c) in x.coords() {
            let m = self.basis_image(w);
            for (k, r) in c.terms() {
                let slot = out.entry(k).or_insert_with(|| RatMatrix::zeros(self.dim()));
                *slot = slot.add(&m.scale(r));
            }
        }
        Ok(out)
    }
}

/// `(v - v^{-1}) / (1 - q^{-r})`: diagonal entry for axial distance `r`.
fn axial_diagonal(r: i64) -> RatFunc {
    let z = RatFunc::laurent(&[-1, 0, 1], -1);
    &z * &(&RatFunc::one() - &RatFunc::q_pow(-r)).inv()
}

pub fn build_seminormal(lambda: &YoungDiagram) -> SeminormalRep {
    let n = lambda.size();
    let tableaux = lambda.standard_tableaux();
    let index: HashMap<Vec<(usize, usize)>, usize> = tableaux.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let dim = tableaux.len();
    let mut generators = Vec::new();
    for i in 1..n {
        let mut m = RatMatrix::zeros(dim);
        for (col, t) in tableaux.iter().enumerate() {
            let r = YoungDiagram::content(t[i]) - YoungDiagram::content(t[i - 1]);
            m.set(col, col, axial_diagonal(r));
            if r.abs() >= 2 {
                let mut swapped = t.clone();
                swapped.swap(i - 1, i);
                let other = index[&swapped];
                // off-diagonal product must be 1 + a_r a_{-r}
                let off = if r > 0 { RatFunc::one() } else { &RatFunc::one() + &(&axial_diagonal(r) * &axial_diagonal(-r)) };
                m.set(other, col, off);
            }
        }
        generators.push(m);
    }
    let rep = SeminormalRep { diagram: lambda.clone(), tableaux, generators, images: HashMap::new() };
    let rep = fill_images(rep, n);
    assert_relations(&rep);
    rep
}

fn fill_images(mut rep: SeminormalRep, n: usize) -> SeminormalRep {
    let dim = rep.dim();
    let mut images = HashMap::new();
    for w in Permutation::all(n) {
        let mut m = RatMatrix::identity(dim);
        for i in reduced_word(&w) {
            m = m.mul(&rep.generators[i - 1]);
        }
        images.insert(w, m);
    }
    rep.images = images;
    rep
}

fn assert_relations(rep: &SeminormalRep) {
    let dim = rep.dim();
    let z = RatFunc::laurent(&[-1, 0, 1], -1);
    let id = RatMatrix::identity(dim);
    for (k, t) in rep.generators.iter().enumerate() {
        assert_eq!(t.mul(t), t.scale(&z).add(&id), "quadratic relation fails for generator {}", k + 1);
        for (l, u) in rep.generators.iter().enumerate() {
            if l == k + 1 {
                assert_eq!(t.mul(u).mul(t), u.mul(t).mul(u), "braid relation fails at {}", k + 1);
            } else if l > k + 1 {
                assert_eq!(t.mul(u), u.mul(t), "commutation fails at {},{}", k + 1, l + 1);
            }
        }
    }
}

pub fn character(rep: &SeminormalRep, x: &HeckeElement) -> Result<LaurentScalar> {
    let mats = rep.represent(x)?;
    Ok(mats.iter().fold(LaurentScalar::zero(), |acc, (k, m)| &acc + &LaurentScalar::a_term(*k, m.trace())))
}

/// `Tr_n(t_w) = Σ_λ W_λ χ_λ(t_w)` for every `w ∈ S_n` (unreduced trace).
pub fn verify_weight_decomposition(n: usize) -> bool {
    weight_decomposition_failures(n).is_empty()
}

/// Permutations where the weight decomposition fails.
pub fn weight_decomposition_failures(n: usize) -> Vec<Permutation> {
    let reps: Vec<(LaurentScalar, SeminormalRep)> =
        YoungDiagram::all(n).iter().map(|l| (weight(l), build_seminormal(l))).collect();
    let mut bad = Vec::new();
    for w in Permutation::all(n) {
        let x = HeckeElement::basis(w.clone());
        let lhs = trace_with(&x, Normalization::Unreduced);
        let rhs = reps.iter().fold(LaurentScalar::zero(), |acc, (wt, rep)| {
            let chi = rep.basis_image(&w).trace();
            &acc + &wt.scale(&chi)
        });
        if lhs != rhs {
            bad.push(w);
        }
    }
    bad
}

/// Whether `E_k(j_0^{-1}, …, j_{n-1}^{-1})` acts on the `λ` representation as
/// the scalar `e_k({q^{-c(□)}})`, for every `k`.
pub fn jm_acts_by_contents(lambda: &YoungDiagram) -> bool {
    let n = lambda.size();
    let rep = build_seminormal(lambda);
    let e = elementary_symmetric_of(&inverse_jucys_murphy(n), n);
    let eigen: Vec<RatFunc> = lambda.cells().into_iter().map(|c| RatFunc::q_pow(-YoungDiagram::content(c))).collect();
    for (k, ek) in e.iter().enumerate() {
        let expected = elementary_of_scalars(&eigen, k);
        let mats = rep.represent(ek).expect("same rank");
        let scalar = RatMatrix::identity(rep.dim()).scale(&expected);
        let got = mats.get(&0).cloned().unwrap_or_else(|| RatMatrix::zeros(rep.dim()));
        if got != scalar || mats.keys().any(|&a| a != 0) {
            return false;
        }
    }
    true
}

fn elementary_of_scalars(xs: &[RatFunc], k: usize) -> RatFunc {
    let mut e = vec![RatFunc::one()];
    for x in xs {
        e.push(RatFunc::zero());
        for j in (1..e.len()).rev() {
            e[j] = &e[j] + &(&e[j - 1] * x);
        }
    }
    e.get(k).cloned().unwrap_or_default()
}

/// `1 / (1 - q)` — handy in tests and reports.
pub fn geometric_q() -> RatFunc {
    RatFunc::new(UniPoly::one(), UniPoly::from_ints(&[1, 0, -1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn yd(rows: &[usize]) -> YoungDiagram {
        YoungDiagram::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn diagram_statistics() {
        let l = yd(&[3, 1]);
        assert_eq!(l.columns(), vec![2, 1, 1]);
        assert_eq!(l.hook((0, 0)), 4);
        assert_eq!(l.n_prime(), 3);
        assert_eq!(yd(&[2]).n_prime(), 1);
        assert_eq!(yd(&[1, 1]).n_prime(), 0);
        assert_eq!(YoungDiagram::all(4).len(), 5);
        assert_eq!(yd(&[2, 1]).standard_tableaux().len(), 2);
        assert_eq!(yd(&[3, 2]).standard_tableaux().len(), 5);
        assert!(YoungDiagram::new(vec![1, 2]).is_err());
    }

    #[test]
    fn weight_examples() {
        let g = LaurentScalar::from_ratfunc(geometric_q());
        let one_plus_a = &LaurentScalar::one() + &LaurentScalar::a_term(1, RatFunc::one());
        assert_eq!(weight(&yd(&[1])), &one_plus_a * &g);
        let g2 = LaurentScalar::from_ratfunc((&RatFunc::one() - &RatFunc::q_pow(2)).inv());
        let row = &(&(&one_plus_a * &(&LaurentScalar::one() + &LaurentScalar::a_term(1, RatFunc::q_pow(-1)))) * &g) * &g2;
        assert_eq!(weight(&yd(&[2])), row.scale(&RatFunc::q_pow(1)));
        let col = &(&(&one_plus_a * &(&LaurentScalar::one() + &LaurentScalar::a_term(1, RatFunc::q_pow(1)))) * &g) * &g2;
        assert_eq!(weight(&yd(&[1, 1])), col);
    }

    #[test]
    fn one_dimensional_reps() {
        let v = RatFunc::v_pow(1, 1.into());
        let mvinv = RatFunc::v_pow(-1, (-1).into());
        for n in 2..=4 {
            let row = build_seminormal(&yd(&[n]));
            let col = build_seminormal(&yd(&vec![1; n]));
            assert_eq!(row.dim(), 1);
            for i in 1..n {
                assert_eq!(row.generator(i).get(0, 0), &v);
                assert_eq!(col.generator(i).get(0, 0), &mvinv);
            }
            for w in Permutation::all(n) {
                let chi = character(&row, &HeckeElement::basis(w.clone())).unwrap();
                assert_eq!(chi, LaurentScalar::v_pow(w.length() as i64));
            }
        }
    }

    #[test]
    fn hook_rep_character() {
        let rep = build_seminormal(&yd(&[2, 1]));
        assert_eq!(rep.dim(), 2);
        let chi = character(&rep, &HeckeElement::generator(1, 3)).unwrap();
        assert_eq!(chi, LaurentScalar::v_minus_vinv());
        assert_eq!(character(&rep, &HeckeElement::one(3)).unwrap(), LaurentScalar::int(2));
        // t_{s1} t_{s2}: computed independently from the generator matrices
        let m = rep.generator(1).mul(rep.generator(2));
        let x = &HeckeElement::generator(1, 3) * &HeckeElement::generator(2, 3);
        assert_eq!(character(&rep, &x).unwrap(), LaurentScalar::from_ratfunc(m.trace()));
        assert!(character(&rep, &HeckeElement::one(2)).is_err());
    }

    #[test]
    fn weight_decomposition_small() {
        for n in 1..=3 {
            assert!(verify_weight_decomposition(n), "n = {n}");
        }
    }

    #[test]
    fn jm_eigenvalues_small() {
        for n in 1..=3 {
            for l in YoungDiagram::all(n) {
                assert!(jm_acts_by_contents(&l), "{l}");
            }
        }
    }
}
