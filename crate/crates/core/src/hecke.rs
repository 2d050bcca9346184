//! Iwahori–Hecke algebra of `S_n` in the `t_w` basis, the Ocneanu trace and
//! the HOMFLY-PT normalization.
//!
//! Quadratic relation: `t_s^2 = (v - v^{-1}) t_s + 1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::braid::{coset_normal_form, jucys_murphy_braid, reduced_word, BraidWord, Permutation};
use crate::error::{Error, Result};
use crate::laurent::{LaurentScalar, RatFunc};

#[derive(Clone, PartialEq, Eq)]
pub struct HeckeElement {
    n: usize,
    coords: BTreeMap<Permutation, LaurentScalar>,
}

impl HeckeElement {
    pub fn zero(n: usize) -> Self {
        HeckeElement { n, coords: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::basis(Permutation::identity(n))
    }

    pub fn basis(w: Permutation) -> Self {
        let n = w.n();
        let mut coords = BTreeMap::new();
        coords.insert(w, LaurentScalar::one());
        HeckeElement { n, coords }
    }

    /// `t_{s_i}`.
    pub fn generator(i: usize, n: usize) -> Self {
        Self::basis(Permutation::simple(i, n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &BTreeMap<Permutation, LaurentScalar> {
        &self.coords
    }

    pub fn coeff(&self, w: &Permutation) -> LaurentScalar {
        self.coords.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn add_term(&mut self, w: Permutation, c: &LaurentScalar) {
        if c.is_zero() {
            return;
        }
        let s = &self.coeff(&w) + c;
        if s.is_zero() {
            self.coords.remove(&w);
        } else {
            self.coords.insert(w, s);
        }
    }

    pub fn scale(&self, c: &LaurentScalar) -> Self {
        let mut out = Self::zero(self.n);
        for (w, x) in &self.coords {
            out.add_term(w.clone(), &(x * c));
        }
        out
    }

    /// `self * t_{s_i}`.
    pub fn mul_generator_right(&self, i: usize) -> Self {
        let z = LaurentScalar::v_minus_vinv();
        let mut out = Self::zero(self.n);
        for (w, c) in &self.coords {
            let ws = w.mul_simple_right(i);
            if w.has_right_descent(i) {
                out.add_term(w.clone(), &(c * &z));
            }
            out.add_term(ws, c);
        }
        out
    }

    /// `t_{s_i} * self`.
    pub fn mul_generator_left(&self, i: usize) -> Self {
        let z = LaurentScalar::v_minus_vinv();
        let mut out = Self::zero(self.n);
        for (w, c) in &self.coords {
            let sw = w.mul_simple_left(i);
            if w.has_left_descent(i) {
                out.add_term(w.clone(), &(c * &z));
            }
            out.add_term(sw, c);
        }
        out
    }

    /// Image under the inclusion `H_n -> H_{n+1}`.
    pub fn embed(&self) -> Self {
        HeckeElement { n: self.n + 1, coords: self.coords.iter().map(|(w, c)| (w.embed(), c.clone())).collect() }
    }

    fn mul_unchecked(&self, other: &HeckeElement) -> HeckeElement {
        let mut out = Self::zero(self.n);
        for (w, c) in &other.coords {
            let mut part = self.clone();
            for i in reduced_word(w) {
                part = part.mul_generator_right(i);
            }
            out = &out + &part.scale(c);
        }
        out
    }
}

pub fn hecke_multiply(x: &HeckeElement, y: &HeckeElement) -> Result<HeckeElement> {
    if x.n != y.n {
        return Err(Error::StrandMismatch { left: x.n, right: y.n });
    }
    Ok(x.mul_unchecked(y))
}

impl Add for &HeckeElement {
    type Output = HeckeElement;
    fn add(self, rhs: &HeckeElement) -> HeckeElement {
        assert_eq!(self.n, rhs.n, "Hecke algebras of different rank");
        let mut out = self.clone();
        for (w, c) in &rhs.coords {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Sub for &HeckeElement {
    type Output = HeckeElement;
    fn sub(self, rhs: &HeckeElement) -> HeckeElement {
        self + &(-rhs)
    }
}

impl Neg for &HeckeElement {
    type Output = HeckeElement;
    fn neg(self) -> HeckeElement {
        self.scale(&LaurentScalar::int(-1))
    }
}

impl Mul for &HeckeElement {
    type Output = HeckeElement;
    fn mul(self, rhs: &HeckeElement) -> HeckeElement {
        assert_eq!(self.n, rhs.n, "Hecke algebras of different rank");
        self.mul_unchecked(rhs)
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coords.iter().map(|(w, c)| format!("[{c}] t_{w}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `σ_i ↦ t_{s_i}`, `σ_i^{-1} ↦ t_{s_i} - (v - v^{-1})`.
pub fn braid_to_hecke(b: &BraidWord) -> HeckeElement {
    let z = LaurentScalar::v_minus_vinv();
    let mut x = HeckeElement::one(b.strands());
    for &l in b.letters() {
        let i = l.unsigned_abs() as usize;
        let xs = x.mul_generator_right(i);
        x = if l > 0 { xs } else { &xs - &x.scale(&z) };
    }
    x
}

/// Which unknot value the trace is normalized to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Normalization {
    /// `Tr_1(1) = 1`.
    Reduced,
    /// `Tr_0(1) = 1`, so `Tr_1(1) = (1 + a)/(1 - q)`.
    Unreduced,
}

/// Memo of `Tr_n(t_w)` (reduced), shareable across threads.
#[derive(Default)]
pub struct TraceCache {
    values: RwLock<HashMap<Permutation, LaurentScalar>>,
}

impl TraceCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static TraceCache {
        static CACHE: OnceLock<TraceCache> = OnceLock::new();
        CACHE.get_or_init(TraceCache::new)
    }

    pub fn len(&self) -> usize {
        self.values.read().expect("trace cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Reduced trace of the basis element `t_w`.
    pub fn basis_trace(&self, w: &Permutation) -> LaurentScalar {
        if let Some(v) = self.values.read().expect("trace cache poisoned").get(w) {
            return v.clone();
        }
        let value = self.compute(w);
        self.values.write().expect("trace cache poisoned").insert(w.clone(), value.clone());
        value
    }

    fn compute(&self, w: &Permutation) -> LaurentScalar {
        let n = w.n();
        if n <= 1 {
            return LaurentScalar::one();
        }
        let (u, tail) = coset_normal_form(w);
        let u = u.restrict().expect("coset representative fixes the last strand");
        if tail.is_empty() {
            return &LaurentScalar::unknot_factor() * &self.basis_trace(&u);
        }
        // t_w = t_u t_{s_{n-1}} t_rest  ~>  -v^{-1} Tr_{n-1}(t_rest t_u)
        let mut x = HeckeElement::basis(u);
        for &i in tail[1..].iter().rev() {
            x = x.mul_generator_left(i);
        }
        &LaurentScalar::from_ratfunc(RatFunc::v_pow(-1, (-1).into())) * &self.trace(&x)
    }

    pub fn trace(&self, x: &HeckeElement) -> LaurentScalar {
        let mut acc = LaurentScalar::zero();
        for (w, c) in x.coords() {
            acc = &acc + &(c * &self.basis_trace(w));
        }
        acc
    }
}

/// Reduced Ocneanu trace (`Tr_1(1) = 1`).
pub fn ocneanu_trace(x: &HeckeElement) -> LaurentScalar {
    TraceCache::global().trace(x)
}

pub fn trace_with(x: &HeckeElement, norm: Normalization) -> LaurentScalar {
    let t = ocneanu_trace(x);
    match norm {
        Normalization::Reduced => t,
        Normalization::Unreduced => &LaurentScalar::unknot_factor() * &t,
    }
}

/// Coefficient of `a^k` in the trace.
pub fn trace_coefficient(x: &HeckeElement, k: i64, norm: Normalization) -> RatFunc {
    trace_with(x, norm).coeff(k)
}

/// Elementary symmetric functions `E_0..E_m` of commuting Hecke elements.
pub fn elementary_symmetric_of(elems: &[HeckeElement], n: usize) -> Vec<HeckeElement> {
    let mut e = vec![HeckeElement::one(n)];
    for j in elems {
        e.push(HeckeElement::zero(n));
        for k in (1..e.len()).rev() {
            let t = &e[k - 1] * j;
            e[k] = &e[k] + &t;
        }
    }
    e
}

/// Images of `j_0^{-1}, …, j_{n-1}^{-1}`.
pub fn inverse_jucys_murphy(n: usize) -> Vec<HeckeElement> {
    (0..n)
        .map(|k| braid_to_hecke(&jucys_murphy_braid(k, n).expect("k < n").inverse()))
        .collect()
}

/// Both sides of `Tr^{(k)}(x) = Tr^{(0)}(x E_k(j_0^{-1}, …, j_{n-1}^{-1}))`
/// with the unreduced trace.
pub fn jm_identity_sides(x: &HeckeElement, k: usize) -> (RatFunc, RatFunc) {
    let n = x.n();
    let lhs = trace_coefficient(x, k as i64, Normalization::Unreduced);
    let e = elementary_symmetric_of(&inverse_jucys_murphy(n), n);
    let rhs = match e.get(k) {
        Some(ek) => trace_coefficient(&(x * ek), 0, Normalization::Unreduced),
        None => RatFunc::zero(),
    };
    (lhs, rhs)
}

pub fn jm_elementary_identity(x: &HeckeElement, k: usize) -> bool {
    let (l, r) = jm_identity_sides(x, k);
    l == r
}

/// HOMFLY-PT polynomial of the braid closure, normalized so the unknot is 1.
///
/// A writhe-only normalization needs `sqrt(-a)`, so the result is expressed in
/// `α` with `a = -α^2`: `P = (-1)^e v^{n-1} α^{e-n+1} Tr(φ(β))` (reduced trace),
/// where `e` is the writhe. The `a`-powers of the returned scalar are powers of `α`.
pub fn homfly(b: &BraidWord) -> LaurentScalar {
    let raw = ocneanu_trace(&braid_to_hecke(b));
    &homfly_factor(b) * &substitute_a_neg_square(&raw)
}

/// The prefactor `(-1)^e v^{n-1} α^{e-n+1}`.
pub fn homfly_factor(b: &BraidWord) -> LaurentScalar {
    let e = b.writhe();
    let n = b.strands() as i64;
    let sign = if e.rem_euclid(2) == 0 { 1 } else { -1 };
    LaurentScalar::a_term(e - n + 1, RatFunc::v_pow(n - 1, sign.into()))
}

/// `a ↦ -α^2`.
pub fn substitute_a_neg_square(x: &LaurentScalar) -> LaurentScalar {
    let mut out = LaurentScalar::zero();
    for (k, r) in x.terms() {
        let r = if k.rem_euclid(2) == 0 { r.clone() } else { -r };
        out = &out + &LaurentScalar::a_term(2 * k, r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::parse_braid_word;

    fn z() -> LaurentScalar {
        LaurentScalar::v_minus_vinv()
    }

    #[test]
    fn quadratic_relation() {
        let t = HeckeElement::generator(1, 2);
        let lhs = &t * &t;
        let rhs = &t.scale(&z()) + &HeckeElement::one(2);
        assert_eq!(lhs, rhs);
        let one = HeckeElement::one(2);
        let p = &(&t + &one) * &(&t - &one);
        assert_eq!(p, t.scale(&z()));
    }

    #[test]
    fn length_additive_product() {
        let a = HeckeElement::generator(1, 3);
        let b = HeckeElement::generator(2, 3);
        let w = Permutation::simple(1, 3).compose(&Permutation::simple(2, 3));
        assert_eq!(&a * &b, HeckeElement::basis(w));
        assert!(hecke_multiply(&a, &HeckeElement::one(2)).is_err());
    }

    #[test]
    fn braid_images() {
        assert_eq!(braid_to_hecke(&BraidWord::identity(3)), HeckeElement::one(3));
        let inv = braid_to_hecke(&parse_braid_word("-1", 2).unwrap());
        let t = HeckeElement::generator(1, 2);
        assert_eq!(inv, &t - &HeckeElement::one(2).scale(&z()));
        assert_eq!(&inv * &t, HeckeElement::one(2));
        let sq = braid_to_hecke(&parse_braid_word("1 1", 2).unwrap());
        assert_eq!(sq, &t.scale(&z()) + &HeckeElement::one(2));
    }

    #[test]
    fn trace_examples() {
        assert_eq!(ocneanu_trace(&HeckeElement::one(2)), LaurentScalar::unknot_factor());
        let vinv = LaurentScalar::from_ratfunc(RatFunc::v_pow(-1, (-1).into()));
        let t = HeckeElement::generator(1, 2);
        assert_eq!(ocneanu_trace(&t), vinv);
        let expect = &(&z() * &vinv) + &LaurentScalar::unknot_factor();
        assert_eq!(ocneanu_trace(&(&t * &t)), expect);
    }

    #[test]
    fn trace_coefficient_examples() {
        let one = HeckeElement::one(2);
        let inv1mq = RatFunc::new(crate::laurent::UniPoly::one(), crate::laurent::UniPoly::from_ints(&[1, 0, -1]));
        assert_eq!(trace_coefficient(&one, 0, Normalization::Reduced), inv1mq);
        assert_eq!(trace_coefficient(&one, 1, Normalization::Reduced), inv1mq);
        assert!(trace_coefficient(&HeckeElement::generator(1, 2), 1, Normalization::Reduced).is_zero());
    }

    #[test]
    fn jm_identity_small() {
        assert!(jm_elementary_identity(&HeckeElement::one(2), 1));
        assert!(jm_elementary_identity(&HeckeElement::generator(1, 3), 1));
        assert!(jm_elementary_identity(&HeckeElement::one(3), 2));
    }

    #[test]
    fn homfly_anchors() {
        assert_eq!(homfly(&BraidWord::identity(1)), LaurentScalar::one());
        assert_eq!(homfly(&parse_braid_word("1", 2).unwrap()), LaurentScalar::one());
        assert_eq!(homfly(&parse_braid_word("-1", 2).unwrap()), LaurentScalar::one());
        let t = parse_braid_word("1 1 1", 2).unwrap();
        let g = parse_braid_word("1", 2).unwrap();
        assert_eq!(homfly(&t), homfly(&t.conjugate_by(&g).unwrap()));
    }
}
