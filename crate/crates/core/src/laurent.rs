//! Scalars of the Hecke algebra: rational functions in `v` with polynomial
//! (or Laurent) dependence on `a`. Throughout, `q = v^2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::rational::Q;

/// Dense univariate polynomial in `v`; `coeffs[i]` is the coefficient of `v^i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Q>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Q::from_int(1))
    }

    pub fn constant(c: Q) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(power: usize, c: Q) -> Self {
        let mut v = vec![Q::zero(); power + 1];
        v[power] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::from_coeffs(c.iter().map(|&x| Q::from_int(x)).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![Q::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(v)
    }

    /// Divides by `v^k`; requires valuation ≥ k.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn divrem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let inv = d.lead().inv();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Q::zero(); r.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &r[i + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&c * dc);
            }
            quot[i] = c;
        }
        (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(r))
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv())
    }

    pub fn gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b)` monic.
    pub fn ext_gcd(a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (UniPoly::one(), UniPoly::zero());
        let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lead().inv();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Rational roots, by the rational root test on the primitive integer form.
    pub fn rational_roots(&self) -> Vec<Q> {
        use num_bigint::BigInt;
        use num_integer::Integer;
        use num_traits::{One, Signed, ToPrimitive};
        if self.is_zero() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut p = self.clone();
        if p.valuation().unwrap_or(0) > 0 {
            out.push(Q::zero());
            p = p.shift_down(p.valuation().unwrap());
        }
        if p.degree() == Some(0) {
            return out;
        }
        // clear denominators
        let mut l = BigInt::one();
        for c in &p.coeffs {
            l = l.lcm(&c.parts().1);
        }
        let ints: Vec<BigInt> = p.coeffs.iter().map(|c| {
            let (n, d) = c.parts();
            n * (&l / d)
        }).collect();
        let a0 = ints[0].abs().to_i64();
        let an = ints.last().unwrap().abs().to_i64();
        let (Some(a0), Some(an)) = (a0, an) else { return out };
        if a0 > 1_000_000 || an > 1_000_000 {
            return out;
        }
        let divisors = |n: i64| (1..=n).filter(move |d| n % d == 0);
        for num in divisors(a0) {
            for den in divisors(an) {
                for sign in [1, -1] {
                    let r = Q::new(sign * num, den);
                    if p.eval(&r).is_zero() && !out.contains(&r) {
                        out.push(r);
                    }
                }
            }
        }
        out
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::from_coeffs(out)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

fn fmt_laurent(f: &mut fmt::Formatter<'_>, coeffs: &[Q], low: i64) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let e = i as i64 + low;
        let neg = c.signum() < 0;
        let abs = if neg { -c } else { c.clone() };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        match (e, abs.is_one()) {
            (0, _) => write!(f, "{abs}")?,
            (1, true) => write!(f, "v")?,
            (1, false) => write!(f, "{abs}*v")?,
            (_, true) => write!(f, "v^{e}")?,
            (_, false) => write!(f, "{abs}*v^{e}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_laurent(f, &self.coeffs, 0)
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Element of `Q(v)` in lowest terms with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = UniPoly::gcd(&num, &den);
        let (num, _) = num.divrem(&g);
        let (den, _) = den.divrem(&g);
        let l = den.lead().inv();
        RatFunc { num: num.scale(&l), den: den.scale(&l) }
    }

    pub fn zero() -> Self {
        RatFunc { num: UniPoly::zero(), den: UniPoly::one() }
    }

    pub fn one() -> Self {
        Self::constant(Q::from_int(1))
    }

    pub fn constant(c: Q) -> Self {
        RatFunc { num: UniPoly::constant(c), den: UniPoly::one() }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Q::from_int(c))
    }

    /// `c * v^e` for any integer `e`.
    pub fn v_pow(e: i64, c: Q) -> Self {
        if e >= 0 {
            RatFunc::new(UniPoly::monomial(e as usize, c), UniPoly::one())
        } else {
            RatFunc::new(UniPoly::constant(c), UniPoly::monomial((-e) as usize, Q::from_int(1)))
        }
    }

    /// `q^e = v^{2e}`.
    pub fn q_pow(e: i64) -> Self {
        Self::v_pow(2 * e, Q::from_int(1))
    }

    /// Laurent polynomial `Σ c_i v^{low + i}`.
    pub fn laurent(coeffs: &[i64], low: i64) -> Self {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| RatFunc::v_pow(low + i as i64, Q::from_int(c)))
            .fold(RatFunc::zero(), |a, b| &a + &b)
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Self {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// Laurent series in `v`: coefficients of `v^m` for `m ≤ max_order`.
    pub fn series(&self, max_order: i64) -> BTreeMap<i64, Q> {
        let mut out = BTreeMap::new();
        if self.is_zero() {
            return out;
        }
        let dv = self.den.valuation().unwrap() as i64;
        let nv = self.num.valuation().unwrap() as i64;
        let den = self.den.shift_down(dv as usize);
        let num = self.num.shift_down(nv as usize);
        let low = nv - dv;
        if low > max_order {
            return out;
        }
        let terms = (max_order - low + 1) as usize;
        let d0inv = den.coeff(0).inv();
        let mut s: Vec<Q> = Vec::with_capacity(terms);
        for k in 0..terms {
            let mut acc = num.coeff(k);
            for j in 1..=k.min(den.degree().unwrap_or(0)) {
                acc = &acc - &(&den.coeff(j) * &s[k - j]);
            }
            s.push(&acc * &d0inv);
        }
        for (k, c) in s.into_iter().enumerate() {
            if !c.is_zero() {
                out.insert(low + k as i64, c);
            }
        }
        out
    }

    /// Whether the denominator is a power of `v` (so this is a Laurent polynomial).
    pub fn is_laurent_polynomial(&self) -> bool {
        self.den.coeffs.iter().rev().skip(1).all(|c| c.is_zero())
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent_polynomial() {
            let k = self.den.degree().unwrap_or(0) as i64;
            return fmt_laurent(f, &self.num.coeffs, -k);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Element of `Q(v)[a, a^{-1}]`, stored by power of `a`.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct LaurentScalar {
    coeffs: BTreeMap<i64, RatFunc>,
}

impl LaurentScalar {
    pub fn zero() -> Self {
        LaurentScalar { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_ratfunc(RatFunc::one())
    }

    pub fn from_ratfunc(r: RatFunc) -> Self {
        Self::a_term(0, r)
    }

    pub fn a_term(k: i64, r: RatFunc) -> Self {
        let mut coeffs = BTreeMap::new();
        if !r.is_zero() {
            coeffs.insert(k, r);
        }
        LaurentScalar { coeffs }
    }

    pub fn int(c: i64) -> Self {
        Self::from_ratfunc(RatFunc::int(c))
    }

    pub fn v_pow(e: i64) -> Self {
        Self::from_ratfunc(RatFunc::v_pow(e, Q::from_int(1)))
    }

    /// `v - v^{-1}`.
    pub fn v_minus_vinv() -> Self {
        Self::from_ratfunc(RatFunc::laurent(&[-1, 0, 1], -1))
    }

    /// `(1 + a) / (1 - q)`.
    pub fn unknot_factor() -> Self {
        let r = RatFunc::new(UniPoly::one(), UniPoly::from_ints(&[1, 0, -1]));
        &Self::a_term(0, r.clone()) + &Self::a_term(1, r)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> RatFunc {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &RatFunc)> {
        self.coeffs.iter().map(|(k, r)| (*k, r))
    }

    pub fn scale(&self, r: &RatFunc) -> Self {
        let mut out = LaurentScalar::zero();
        for (k, c) in &self.coeffs {
            let p = c * r;
            if !p.is_zero() {
                out.coeffs.insert(*k, p);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = LaurentScalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse when this is a single `a`-monomial.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.coeffs.len() != 1 {
            return None;
        }
        let (k, r) = self.coeffs.iter().next().unwrap();
        Some(Self::a_term(-k, r.inv()))
    }

    /// Series in `v` of every `a`-coefficient, keyed by `(a power, v power)`.
    pub fn series(&self, max_order: i64) -> BTreeMap<(i64, i64), Q> {
        let mut out = BTreeMap::new();
        for (k, r) in &self.coeffs {
            for (m, c) in r.series(max_order) {
                out.insert((*k, m), c);
            }
        }
        out
    }

    /// `{"a^k": "rational-in-v"}` rendering.
    pub fn to_string_map(&self) -> BTreeMap<String, String> {
        self.coeffs.iter().map(|(k, r)| (format!("a^{k}"), r.to_string())).collect()
    }
}

impl Add for &LaurentScalar {
    type Output = LaurentScalar;
    fn add(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = self.clone();
        for (k, r) in &rhs.coeffs {
            let s = &out.coeff(*k) + r;
            if s.is_zero() {
                out.coeffs.remove(k);
            } else {
                out.coeffs.insert(*k, s);
            }
        }
        out
    }
}

impl Sub for &LaurentScalar {
    type Output = LaurentScalar;
    fn sub(self, rhs: &LaurentScalar) -> LaurentScalar {
        self + &(-rhs)
    }
}

impl Neg for &LaurentScalar {
    type Output = LaurentScalar;
    fn neg(self) -> LaurentScalar {
        LaurentScalar { coeffs: self.coeffs.iter().map(|(k, r)| (*k, -r)).collect() }
    }
}

impl Mul for &LaurentScalar {
    type Output = LaurentScalar;
    fn mul(self, rhs: &LaurentScalar) -> LaurentScalar {
        let mut out = LaurentScalar::zero();
        for (k1, r1) in &self.coeffs {
            for (k2, r2) in &rhs.coeffs {
                out = &out + &LaurentScalar::a_term(k1 + k2, r1 * r2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(k, r)| match k {
                0 => format!("({r})"),
                1 => format!("({r})*a"),
                _ => format!("({r})*a^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LaurentScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
