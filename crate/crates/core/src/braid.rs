//! Braid words, permutations of `S_n`, reduced words and coset normal forms.
//!
//! Strands are 0-based; the letter `±i` (1-based) is `σ_i^{±1}`, and the simple
//! reflection `s_i` swaps positions `i-1` and `i`. Products of permutations
//! compose as functions: `(u * w)(x) = u(w(x))`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::OutOfRange { index: 0, expected: "strand count >= 1".into() });
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::OutOfRange {
                    index: l as i64,
                    expected: format!("0 < |letter| < {strands}"),
                });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        BraidWord { strands, letters: Vec::new() }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn writhe(&self) -> i64 {
        self.letters.iter().map(|l| l.signum() as i64).sum()
    }

    pub fn positive_crossings(&self) -> usize {
        self.letters.iter().filter(|l| **l > 0).count()
    }

    pub fn negative_crossings(&self) -> usize {
        self.letters.iter().filter(|l| **l < 0).count()
    }

    pub fn inverse(&self) -> Self {
        BraidWord { strands: self.strands, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn concat(&self, other: &BraidWord) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch { left: self.strands, right: other.strands });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { strands: self.strands, letters })
    }

    /// `g * self * g^{-1}`.
    pub fn conjugate_by(&self, g: &BraidWord) -> Result<Self> {
        g.concat(self)?.concat(&g.inverse())
    }

    /// Same word on `strands + 1` strands.
    pub fn embed(&self) -> Self {
        BraidWord { strands: self.strands + 1, letters: self.letters.clone() }
    }

    /// Markov stabilization `ι(β) σ_n^{±1}` in `Br_{n+1}`.
    pub fn stabilize(&self, positive: bool) -> Self {
        let mut b = self.embed();
        let s = self.strands as i32;
        b.letters.push(if positive { s } else { -s });
        b
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Parses whitespace-separated signed letters.
pub fn parse_braid_word(text: &str, n: usize) -> Result<BraidWord> {
    if n == 0 {
        return Err(Error::OutOfRange { index: 0, expected: "strand count >= 1".into() });
    }
    let mut letters = Vec::new();
    for tok in text.split(|c: char| c.is_whitespace() || c == ',') {
        if tok.is_empty() {
            continue;
        }
        let l: i32 = tok.parse().map_err(|_| Error::Parse {
            token: tok.to_string(),
            reason: "not a signed integer".into(),
        })?;
        if l == 0 || l.unsigned_abs() as usize >= n {
            return Err(Error::Parse {
                token: tok.to_string(),
                reason: format!("generator index must satisfy 0 < |i| < {n}"),
            });
        }
        letters.push(l);
    }
    Ok(BraidWord { strands: n, letters })
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Precondition(format!("{images:?} is not a permutation")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Simple reflection `s_i` (1-based), swapping positions `i-1` and `i`.
    pub fn simple(i: usize, n: usize) -> Self {
        assert!(i >= 1 && i < n, "simple reflection s_{i} not in S_{n}");
        let mut p = Self::identity(n);
        p.images.swap(i - 1, i);
        p
    }

    /// Longest element `w_0`.
    pub fn longest(n: usize) -> Self {
        Permutation { images: (0..n).rev().collect() }
    }

    pub fn from_word(word: &[usize], n: usize) -> Self {
        word.iter().fold(Self::identity(n), |acc, &i| acc.mul_simple_right(i))
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n());
        Permutation { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    /// `self * s_i`.
    pub fn mul_simple_right(&self, i: usize) -> Permutation {
        let mut p = self.clone();
        p.images.swap(i - 1, i);
        p
    }

    /// `s_i * self`.
    pub fn mul_simple_left(&self, i: usize) -> Permutation {
        let images = self
            .images
            .iter()
            .map(|&x| if x == i - 1 { i } else if x == i { i - 1 } else { x })
            .collect();
        Permutation { images }
    }

    /// Inversion count.
    pub fn length(&self) -> usize {
        let n = self.n();
        let mut c = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.images[i] > self.images[j] {
                    c += 1;
                }
            }
        }
        c
    }

    /// `l(self * s_i) < l(self)`.
    pub fn has_right_descent(&self, i: usize) -> bool {
        self.images[i - 1] > self.images[i]
    }

    /// `l(s_i * self) < l(self)`.
    pub fn has_left_descent(&self, i: usize) -> bool {
        self.inverse().has_right_descent(i)
    }

    /// Same permutation in `S_{n+1}`, fixing the new last point.
    pub fn embed(&self) -> Permutation {
        let mut images = self.images.clone();
        images.push(self.n());
        Permutation { images }
    }

    /// Restriction to `S_{n-1}`; requires `n-1` to be fixed.
    pub fn restrict(&self) -> Option<Permutation> {
        let n = self.n();
        (n > 0 && self.images[n - 1] == n - 1).then(|| Permutation { images: self.images[..n - 1].to_vec() })
    }

    /// Every permutation of `S_n`, in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
            let n = used.len();
            if cur.len() == n {
                out.push(Permutation { images: cur.clone() });
                return;
            }
            for x in 0..n {
                if !used[x] {
                    used[x] = true;
                    cur.push(x);
                    rec(cur, used, out);
                    cur.pop();
                    used[x] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = reduced_word(self);
        if w.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = w.iter().map(|i| i.to_string()).collect();
        write!(f, "s{}", parts.join("s"))
    }
}

/// Image of a braid under `Br_n -> S_n`.
pub fn permutation_of(b: &BraidWord) -> Permutation {
    b.letters.iter().fold(Permutation::identity(b.strands), |acc, &l| acc.mul_simple_right(l.unsigned_abs() as usize))
}

/// Reduced word `w = s_{i_1} ... s_{i_q}` by repeated leftmost-descent extraction.
pub fn reduced_word(w: &Permutation) -> Vec<usize> {
    let mut rest = w.clone();
    let mut word = Vec::with_capacity(w.length());
    while !rest.is_identity() {
        let i = (1..rest.n()).find(|&i| rest.has_left_descent(i)).expect("non-identity has a descent");
        word.push(i);
        rest = rest.mul_simple_left(i);
    }
    word
}

/// `w = u * tail` with `u` fixing `n-1` and `tail = s_{n-1} s_{n-2} ... s_k`.
/// Returns `u` (as an element of `S_n`) and the tail as simple-reflection indices.
pub fn coset_normal_form(w: &Permutation) -> (Permutation, Vec<usize>) {
    let n = w.n();
    if n <= 1 {
        return (w.clone(), Vec::new());
    }
    let j = w.inverse().apply(n - 1);
    if j == n - 1 {
        return (w.clone(), Vec::new());
    }
    // tail maps j -> n-1
    let tail: Vec<usize> = (j + 1..n).rev().collect();
    let tail_perm = Permutation::from_word(&tail, n);
    let u = w.compose(&tail_perm.inverse());
    (u, tail)
}

/// Jucys–Murphy braid `j_0 = 1, j_k = σ_k j_{k-1} σ_k`.
pub fn jucys_murphy_braid(k: usize, n: usize) -> Result<BraidWord> {
    if n == 0 || k >= n {
        return Err(Error::OutOfRange { index: k as i64, expected: format!("0 <= k <= {}", n.saturating_sub(1)) });
    }
    let mut letters: Vec<i32> = (1..=k as i32).rev().collect();
    letters.extend(1..=k as i32);
    Ok(BraidWord { strands: n, letters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let t = parse_braid_word("1 1 1", 2).unwrap();
        assert_eq!(t.letters(), &[1, 1, 1]);
        let e = parse_braid_word("", 1).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.strands(), 1);
        assert_eq!(parse_braid_word("1 -2 1", 3).unwrap().letters(), &[1, -2, 1]);
        match parse_braid_word("1 3", 3) {
            Err(Error::Parse { token, .. }) => assert_eq!(token, "3"),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_braid_word("1 x", 3).is_err());
        assert!(parse_braid_word("0", 3).is_err());
    }

    #[test]
    fn permutation_examples() {
        let t = parse_braid_word("1 1 1", 2).unwrap();
        assert_eq!(permutation_of(&t).images(), &[1, 0]);
        assert!(permutation_of(&BraidWord::identity(3)).is_identity());
        let c = permutation_of(&parse_braid_word("1 2", 3).unwrap());
        assert_eq!((c.apply(0), c.apply(1), c.apply(2)), (1, 2, 0));
    }

    #[test]
    fn reduced_word_examples() {
        assert!(reduced_word(&Permutation::identity(4)).is_empty());
        let w0 = Permutation::longest(3);
        let w = reduced_word(&w0);
        assert_eq!(w.len(), 3);
        assert_eq!(Permutation::from_word(&w, 3), w0);
        let t02 = Permutation::from_images(vec![2, 1, 0]).unwrap();
        assert_eq!(reduced_word(&t02).len(), 3);
    }

    #[test]
    fn coset_examples() {
        let (u, tail) = coset_normal_form(&Permutation::identity(3));
        assert!(u.is_identity() && tail.is_empty());
        let (u, tail) = coset_normal_form(&Permutation::simple(3, 4));
        assert!(u.is_identity());
        assert_eq!(tail, vec![3]);
        let (u, tail) = coset_normal_form(&Permutation::longest(3));
        assert_eq!(u, Permutation::simple(1, 3));
        assert_eq!(tail, vec![2, 1]);
    }

    #[test]
    fn coset_normal_form_exhaustive() {
        for n in 1..=5 {
            for w in Permutation::all(n) {
                let (u, tail) = coset_normal_form(&w);
                assert_eq!(u.compose(&Permutation::from_word(&tail, n)), w);
                assert_eq!(u.length() + tail.len(), w.length());
                assert!(tail.is_empty() || u.apply(n - 1) == n - 1);
                assert_eq!(u.apply(n - 1), n - 1);
                for (a, b) in tail.iter().zip(tail.iter().skip(1)) {
                    assert_eq!(*a, b + 1);
                }
                if let Some(&first) = tail.first() {
                    assert_eq!(first, n - 1);
                }
            }
        }
    }

    #[test]
    fn jucys_murphy_examples() {
        assert!(jucys_murphy_braid(0, 3).unwrap().is_empty());
        assert_eq!(jucys_murphy_braid(1, 3).unwrap().letters(), &[1, 1]);
        assert_eq!(jucys_murphy_braid(2, 3).unwrap().letters(), &[2, 1, 1, 2]);
        assert!(jucys_murphy_braid(3, 3).is_err());
        for n in 1..=5 {
            for k in 0..n {
                let jk = jucys_murphy_braid(k, n).unwrap();
                assert_eq!(jk.len(), 2 * k);
                for l in 0..n {
                    let jl = jucys_murphy_braid(l, n).unwrap();
                    let a = permutation_of(&jk.concat(&jl).unwrap());
                    let b = permutation_of(&jl.concat(&jk).unwrap());
                    assert_eq!(a, b);
                }
            }
        }
    }

    fn arb_perm(max_n: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_n).prop_flat_map(|n| Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn reduced_word_roundtrip(w in arb_perm(7)) {
            let word = reduced_word(&w);
            prop_assert_eq!(word.len(), w.length());
            prop_assert_eq!(Permutation::from_word(&word, w.n()), w);
        }
    }
}
