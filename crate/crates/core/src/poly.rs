//! Multivariate polynomials over `Q` and matrices of them.
//!
//! Variables are `x_1..x_n`, stored 0-based. Every variable has internal
//! degree 2. Terms are kept sorted in degree-lexicographic order.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::linalg::DenseMatrix;
use crate::rational::Q;

pub const MAX_VARS: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mono(pub [u8; MAX_VARS]);

impl Mono {
    pub fn one() -> Mono {
        Mono([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Mono {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Mono(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Mono(e)
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Mono) -> Mono {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a -= *b;
        }
        Mono(e)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", MonoDisplay(self))
    }
}

struct MonoDisplay<'a>(&'a Mono);

impl fmt::Display for MonoDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0 .0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All monomials in `nvars` variables of total (polynomial) degree `d`.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Mono> {
    fn rec(nvars: usize, idx: usize, left: u32, cur: &mut [u8; MAX_VARS], out: &mut Vec<Mono>) {
        if idx + 1 == nvars {
            cur[idx] = left as u8;
            out.push(Mono(*cur));
            cur[idx] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[idx] = e as u8;
            rec(nvars, idx + 1, left - e, cur, out);
        }
        cur[idx] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Mono::one());
        }
        return out;
    }
    let mut cur = [0u8; MAX_VARS];
    rec(nvars, 0, d, &mut cur, &mut out);
    out.sort();
    out
}

/// Number of monomials of polynomial degree `d` in `nvars` variables.
pub fn count_monomials(nvars: usize, d: i64) -> usize {
    if d < 0 {
        return 0;
    }
    if nvars == 0 {
        return usize::from(d == 0);
    }
    // binomial(d + nvars - 1, nvars - 1)
    let (n, k) = (d as u128 + nvars as u128 - 1, nvars as u128 - 1);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r as usize
}

/// Position lookup for the monomials of one degree.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub monos: Vec<Mono>,
    index: HashMap<Mono, usize>,
}

impl MonomialBasis {
    pub fn new(nvars: usize, d: i64) -> Self {
        let monos = if d < 0 { Vec::new() } else { monomials_of_degree(nvars, d as u32) };
        let index = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        MonomialBasis { monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn index_of(&self, m: &Mono) -> Option<usize> {
        self.index.get(m).copied()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Mono, Q)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Q::from_int(1))
    }

    pub fn constant(c: Q) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Mono::one(), c)] }
        }
    }

    pub fn int(c: i64) -> Poly {
        Poly::constant(Q::from_int(c))
    }

    /// The variable `x_{i+1}` (0-based index).
    pub fn var(i: usize) -> Poly {
        Poly { terms: vec![(Mono::var(i), Q::from_int(1))] }
    }

    pub fn monomial(m: Mono, c: Q) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, Q)>) -> Poly {
        let mut map: HashMap<Mono, Q> = HashMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            let slot = map.entry(m).or_default();
            *slot += &c;
        }
        let mut terms: Vec<(Mono, Q)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, Q)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Q {
        match self.terms.binary_search_by(|(t, _)| t.cmp(m)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&Mono::one())
    }

    /// Polynomial degree if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        self.terms.iter().all(|(m, _)| m.degree() as i64 == d)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.last().map(|(m, _)| m.degree())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        // multiplying by a monomial preserves the degree-lex order
        Poly { terms: self.terms.iter().map(|(t, v)| (t.mul(m), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &point[i].pow(e as u32);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Substitutes polynomials for variables.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let mut acc = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &images[i].pow(e as u32);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Applies a permutation of variables: `x_i -> x_{perm[i]}`.
    pub fn permute_vars(&self, perm: &[usize]) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut e = [0u8; MAX_VARS];
            for (i, &p) in perm.iter().enumerate() {
                e[p] = m.0[i];
            }
            (Mono(e), c.clone())
        }))
    }

    fn merge(&self, other: &Poly, sign: i64) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let ord = if i >= a.len() {
                Ordering::Greater
            } else if j >= b.len() {
                Ordering::Less
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let v = if sign < 0 { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0, v));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = if sign < 0 { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !v.is_zero() {
                        out.push((a[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { terms: out }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.merge(rhs, 1)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.merge(rhs, -1)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() == 1 {
            return rhs.mul_mono(&self.terms[0].0, &self.terms[0].1);
        }
        if rhs.terms.len() == 1 {
            return self.mul_mono(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        let mut map: HashMap<Mono, Q> = HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let slot = map.entry(ma.mul(mb)).or_default();
                *slot += &(ca * cb);
            }
        }
        let mut terms: Vec<(Mono, Q)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Poly { terms }
    }
}

macro_rules! owned_poly_op {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
owned_poly_op!(Add, add);
owned_poly_op!(Sub, sub);
owned_poly_op!(Mul, mul);

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.signum() < 0;
            let abs = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            if *m == Mono::one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", MonoDisplay(m))?;
            } else {
                write!(f, "{abs}*{}", MonoDisplay(m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Elementary symmetric polynomial `e_k(x_1..x_n)`.
pub fn elementary_symmetric(nvars: usize, k: usize) -> Poly {
    let mut terms = Vec::new();
    fn rec(start: usize, left: usize, nvars: usize, cur: &mut [u8; MAX_VARS], out: &mut Vec<(Mono, Q)>) {
        if left == 0 {
            out.push((Mono(*cur), Q::from_int(1)));
            return;
        }
        for i in start..nvars {
            cur[i] = 1;
            rec(i + 1, left - 1, nvars, cur, out);
            cur[i] = 0;
        }
    }
    let mut cur = [0u8; MAX_VARS];
    rec(0, k, nvars, &mut cur, &mut terms);
    Poly::from_terms(terms)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, &Poly::one())
    }

    pub fn scalar(n: usize, p: &Poly) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = p.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data: Vec<Poly> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c);
        PolyMatrix { rows: r, cols: c, data }
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Poly {
        &mut self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: Poly) {
        self.data[r * self.cols + c] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|p| p.is_zero())
    }

    pub fn nonzero_terms(&self) -> usize {
        self.data.iter().map(|p| p.len()).sum()
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch");
        let mut out = PolyMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, p: &Poly) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * p).collect() }
    }

    pub fn scale_q(&self, c: &Q) -> PolyMatrix {
        PolyMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.scale(c)).collect() }
    }

    /// Kronecker product with an identity: `self ⊗ I_k`, indices `(i, a)` flattened as `i * k + a`.
    pub fn kron_identity(&self, k: usize) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.rows * k, self.cols * k);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let p = self.get(i, j);
                if p.is_zero() {
                    continue;
                }
                for a in 0..k {
                    out.set(i * k + a, j * k + a, p.clone());
                }
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(rows.len(), cols.len());
        for (a, &r) in rows.iter().enumerate() {
            for (b, &c) in cols.iter().enumerate() {
                out.set(a, b, self.get(r, c).clone());
            }
        }
        out
    }

    /// Copies `block` into position `(r0, c0)`.
    pub fn put_block(&mut self, r0: usize, c0: usize, block: &PolyMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn constant_part(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).constant_term());
            }
        }
        out
    }

    pub fn eval(&self, point: &[Q]) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).eval(point));
            }
        }
        out
    }

    pub fn from_dense(m: &DenseMatrix) -> PolyMatrix {
        PolyMatrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|q| Poly::constant(q.clone())).collect(),
        }
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
