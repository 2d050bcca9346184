//! Graded bimodules over `R = Q[x_1..x_n]` (deg `x_i` = 2) that are free as left
//! modules, together with degree-`d` bimodule maps.
//!
//! An element is a column vector of left coefficients. Right multiplication by
//! `x_j` is the matrix `Y_j`: `b · x_j = Σ_{b'} Y_j[b'][b] b'`, so the entry
//! `(r, c)` has degree `deg[c] + 2 - deg[r]`. A map `F: M -> N` of degree `d`
//! sends coefficient vectors `f ↦ F f`; its entry `(r, c)` has degree
//! `deg_M[c] + d - deg_N[r]` and it intertwines: `F Y^M_j = Y^N_j F`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{collect_sparse, nullspace, solve, DenseMatrix, Echelon, SparseVec};
use crate::poly::{elementary_symmetric, monomials_of_degree, Mono, Poly, PolyMatrix, MAX_VARS};
use crate::rational::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    nvars: usize,
}

impl PolyRing {
    pub fn new(nvars: usize) -> Result<Self> {
        if nvars == 0 || nvars > MAX_VARS {
            return Err(Error::OutOfRange { index: nvars as i64, expected: format!("1..={MAX_VARS} variables") });
        }
        Ok(PolyRing { nvars })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// `x_i`, 1-based.
    pub fn x(&self, i: usize) -> Poly {
        Poly::var(i - 1)
    }
}

/// Where a bimodule came from; used for display only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tag {
    Diagonal,
    BottSamelson(Vec<usize>),
    LongestElement,
    Tensor(Box<Tag>, Box<Tag>),
    Summand(Box<Tag>),
    Indecomposable(Vec<usize>),
    Sum,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Diagonal => write!(f, "R"),
            Tag::BottSamelson(w) => write!(f, "BS({})", w.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")),
            Tag::LongestElement => write!(f, "Bw0"),
            Tag::Tensor(a, b) => write!(f, "{a}⊗{b}"),
            Tag::Summand(a) => write!(f, "summand of {a}"),
            Tag::Indecomposable(w) if w.is_empty() => write!(f, "R"),
            Tag::Indecomposable(w) => write!(f, "B{}", w.iter().map(|i| i.to_string()).collect::<String>()),
            Tag::Sum => write!(f, "sum"),
        }
    }
}

/// Graded rank `Σ_b v^{deg b}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedRank(pub BTreeMap<i64, i64>);

impl GradedRank {
    pub fn from_degrees(degrees: &[i64]) -> Self {
        let mut m = BTreeMap::new();
        for &d in degrees {
            *m.entry(d).or_insert(0) += 1;
        }
        GradedRank(m)
    }

    pub fn total(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn add(&self, other: &GradedRank) -> GradedRank {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &GradedRank) -> GradedRank {
        self.combine(other, -1)
    }

    fn combine(&self, other: &GradedRank, sign: i64) -> GradedRank {
        let mut m = self.0.clone();
        for (d, c) in &other.0 {
            *m.entry(*d).or_insert(0) += sign * c;
        }
        m.retain(|_, c| *c != 0);
        GradedRank(m)
    }

    pub fn mul(&self, other: &GradedRank) -> GradedRank {
        let mut m = BTreeMap::new();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                *m.entry(a + b).or_insert(0) += x * y;
            }
        }
        m.retain(|_, c| *c != 0);
        GradedRank(m)
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i64) -> GradedRank {
        GradedRank(self.0.iter().map(|(d, c)| (d + k, *c)).collect())
    }

    pub fn scale(&self, k: i64) -> GradedRank {
        let mut m: BTreeMap<i64, i64> = self.0.iter().map(|(d, c)| (*d, c * k)).collect();
        m.retain(|_, c| *c != 0);
        GradedRank(m)
    }
}

impl fmt::Display for GradedRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (d, c)) in self.0.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if i > 0 { "+" } else { "" };
            if i > 0 {
                out.push(' ');
            }
            out.push_str(sign);
            if i > 0 {
                out.push(' ');
            }
            let a = c.abs();
            let mono = match d {
                0 => String::new(),
                1 => "v".into(),
                _ => format!("v^{d}"),
            };
            if mono.is_empty() {
                out.push_str(&a.to_string());
            } else if a == 1 {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}{mono}"));
            }
        }
        write!(f, "{out}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBimodule {
    nvars: usize,
    degrees: Vec<i64>,
    right: Vec<PolyMatrix>,
    idempotent: Option<PolyMatrix>,
    tag: Tag,
}

impl GradedBimodule {
    pub fn new(nvars: usize, degrees: Vec<i64>, right: Vec<PolyMatrix>, idempotent: Option<PolyMatrix>, tag: Tag) -> Result<Self> {
        let m = GradedBimodule { nvars, degrees, right, idempotent, tag };
        m.validate()?;
        Ok(m)
    }

    fn new_unchecked(nvars: usize, degrees: Vec<i64>, right: Vec<PolyMatrix>, tag: Tag) -> Self {
        GradedBimodule { nvars, degrees, right, idempotent: None, tag }
    }

    /// The diagonal bimodule `R`.
    pub fn diagonal(nvars: usize) -> Self {
        let right = (0..nvars).map(|j| PolyMatrix::scalar(1, &Poly::var(j))).collect();
        Self::new_unchecked(nvars, vec![0], right, Tag::Diagonal)
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new_unchecked(nvars, Vec::new(), vec![PolyMatrix::zeros(0, 0); nvars], Tag::Sum)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ring(&self) -> PolyRing {
        PolyRing { nvars: self.nvars }
    }

    /// Rank of the free carrier (ignores the idempotent).
    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Right action matrix of `x_{j+1}` (0-based `j`).
    pub fn right_action(&self, j: usize) -> &PolyMatrix {
        &self.right[j]
    }

    pub fn right_actions(&self) -> &[PolyMatrix] {
        &self.right
    }

    pub fn idempotent(&self) -> Option<&PolyMatrix> {
        self.idempotent.as_ref()
    }

    pub fn tag(&self) -> &Tag {
        &self.tag
    }

    pub fn with_tag(mut self, tag: Tag) -> Self {
        self.tag = tag;
        self
    }

    pub fn is_free(&self) -> bool {
        self.idempotent.is_none()
    }

    /// `M(r)`: basis degrees lowered by `r`.
    pub fn shift(&self, r: i64) -> Self {
        let mut m = self.clone();
        for d in &mut m.degrees {
            *d -= r;
        }
        m
    }

    /// Graded rank of the (Karoubi) object.
    pub fn graded_rank(&self) -> GradedRank {
        match &self.idempotent {
            None => GradedRank::from_degrees(&self.degrees),
            Some(e) => {
                let cols = independent_columns(&e.constant_part());
                GradedRank::from_degrees(&cols.iter().map(|&c| self.degrees[c]).collect::<Vec<_>>())
            }
        }
    }

    /// Whether `Y_j` is the scalar matrix `x_j · I`.
    pub fn acts_as_scalar(&self, j: usize) -> bool {
        let x = Poly::var(j);
        let r = self.rank();
        let y = &self.right[j];
        (0..r).all(|a| (0..r).all(|b| if a == b { y.get(a, b) == &x } else { y.get(a, b).is_zero() }))
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.rank();
        if self.right.len() != self.nvars {
            return Err(Error::Invariant(format!("{} right actions for {} variables", self.right.len(), self.nvars)));
        }
        for (j, y) in self.right.iter().enumerate() {
            if y.rows != r || y.cols != r {
                return Err(Error::Invariant(format!("right action {j} has wrong shape")));
            }
            for a in 0..r {
                for b in 0..r {
                    let deg = self.degrees[b] + 2 - self.degrees[a];
                    if !entry_has_degree(y.get(a, b), deg) {
                        return Err(Error::Invariant(format!("right action {j} entry ({a},{b}) not of degree {deg}")));
                    }
                }
            }
        }
        for j in 0..self.nvars {
            for k in j + 1..self.nvars {
                if self.right[j].mul(&self.right[k]) != self.right[k].mul(&self.right[j]) {
                    return Err(Error::Invariant(format!("right actions {j} and {k} do not commute")));
                }
            }
        }
        if let Some(e) = &self.idempotent {
            if &e.mul(e) != e {
                return Err(Error::Invariant("idempotent is not idempotent".into()));
            }
            for (j, y) in self.right.iter().enumerate() {
                if e.mul(y) != y.mul(e) {
                    return Err(Error::Invariant(format!("idempotent does not commute with right action {j}")));
                }
            }
        }
        Ok(())
    }

    /// Left and right multiplication by each `e_k` agree.
    pub fn symmetric_actions_agree(&self) -> bool {
        let r = self.rank();
        let mut cache = MatrixPowers::new(self);
        (1..=self.nvars).all(|k| {
            let ek = elementary_symmetric(self.nvars, k);
            let right = cache.eval(&ek);
            let left = PolyMatrix::scalar(r, &ek);
            match &self.idempotent {
                None => right == left,
                Some(e) => e.mul(&right) == e.mul(&left),
            }
        })
    }
}

/// Degree-`d` map between bimodules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleMap {
    pub degree: i64,
    pub matrix: PolyMatrix,
}

impl BimoduleMap {
    pub fn new(degree: i64, matrix: PolyMatrix) -> Self {
        BimoduleMap { degree, matrix }
    }

    pub fn identity(m: &GradedBimodule) -> Self {
        let matrix = m.idempotent.clone().unwrap_or_else(|| PolyMatrix::identity(m.rank()));
        BimoduleMap { degree: 0, matrix }
    }

    pub fn zero(source: &GradedBimodule, target: &GradedBimodule, degree: i64) -> Self {
        BimoduleMap { degree, matrix: PolyMatrix::zeros(target.rank(), source.rank()) }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &BimoduleMap) -> BimoduleMap {
        BimoduleMap { degree: self.degree + first.degree, matrix: self.matrix.mul(&first.matrix) }
    }

    pub fn add(&self, other: &BimoduleMap) -> BimoduleMap {
        BimoduleMap { degree: self.degree, matrix: self.matrix.add(&other.matrix) }
    }

    pub fn scale(&self, c: &Q) -> BimoduleMap {
        BimoduleMap { degree: self.degree, matrix: self.matrix.scale_q(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

fn entry_has_degree(p: &Poly, deg: i64) -> bool {
    if p.is_zero() {
        return true;
    }
    deg >= 0 && deg % 2 == 0 && p.is_homogeneous_of(deg / 2)
}

/// Checks homogeneity, right-linearity and idempotent compatibility.
pub fn check_map(source: &GradedBimodule, target: &GradedBimodule, f: &BimoduleMap) -> Result<()> {
    let m = &f.matrix;
    if m.rows != target.rank() || m.cols != source.rank() {
        return Err(Error::Invariant(format!(
            "map of shape {}x{} between ranks {} and {}",
            m.rows,
            m.cols,
            source.rank(),
            target.rank()
        )));
    }
    for r in 0..m.rows {
        for c in 0..m.cols {
            let deg = source.degrees[c] + f.degree - target.degrees[r];
            if !entry_has_degree(m.get(r, c), deg) {
                return Err(Error::Invariant(format!("entry ({r},{c}) = {} not of degree {deg}", m.get(r, c))));
            }
        }
    }
    for j in 0..source.nvars {
        if m.mul(&source.right[j]) != target.right[j].mul(m) {
            return Err(Error::Invariant(format!("map does not intertwine right action of x{}", j + 1)));
        }
    }
    if let Some(e) = &source.idempotent {
        if &m.mul(e) != m {
            return Err(Error::Invariant("map not compatible with source idempotent".into()));
        }
    }
    if let Some(e) = &target.idempotent {
        if &e.mul(m) != m {
            return Err(Error::Invariant("map not compatible with target idempotent".into()));
        }
    }
    Ok(())
}

/// Evaluates polynomials at the commuting right-action matrices of a module.
pub struct MatrixPowers<'a> {
    module: &'a GradedBimodule,
    scalar: Vec<bool>,
    cache: HashMap<Mono, PolyMatrix>,
}

impl<'a> MatrixPowers<'a> {
    pub fn new(module: &'a GradedBimodule) -> Self {
        let scalar = (0..module.nvars).map(|j| module.acts_as_scalar(j)).collect();
        MatrixPowers { module, scalar, cache: HashMap::new() }
    }

    fn power(&mut self, m: &Mono) -> PolyMatrix {
        if let Some(p) = self.cache.get(m) {
            return p.clone();
        }
        let out = match (0..MAX_VARS).find(|&j| m.0[j] > 0) {
            None => PolyMatrix::identity(self.module.rank()),
            Some(j) => {
                let mut lower = *m;
                lower.0[j] -= 1;
                self.power(&lower).mul(&self.module.right[j])
            }
        };
        self.cache.insert(*m, out.clone());
        out
    }

    /// `g(Y_1, …, Y_n)`; variables acting as scalars are kept as left scalars.
    pub fn eval(&mut self, g: &Poly) -> PolyMatrix {
        let r = self.module.rank();
        let mut acc = PolyMatrix::zeros(r, r);
        let mut grouped: HashMap<Mono, Poly> = HashMap::new();
        for (m, c) in g.terms() {
            let mut matrix_part = Mono::one();
            let mut scalar_part = Mono::one();
            for j in 0..MAX_VARS {
                if m.0[j] == 0 {
                    continue;
                }
                if j < self.scalar.len() && self.scalar[j] {
                    scalar_part.0[j] = m.0[j];
                } else {
                    matrix_part.0[j] = m.0[j];
                }
            }
            let slot = grouped.entry(matrix_part).or_insert_with(Poly::zero);
            *slot = &*slot + &Poly::monomial(scalar_part, c.clone());
        }
        for (m, coeff) in grouped {
            let p = self.power(&m);
            acc = acc.add(&p.scale(&coeff));
        }
        acc
    }
}

/// `B_{s_i}` on the basis `{1⊗1, 1⊗x_{i+1}}` with degrees `(-1, 1)`.
pub fn elementary_bimodule(i: usize, nvars: usize) -> Result<GradedBimodule> {
    if i == 0 || i >= nvars {
        return Err(Error::OutOfRange { index: i as i64, expected: format!("1..{nvars}") });
    }
    let (a, b) = (Poly::var(i - 1), Poly::var(i));
    let e = &a + &b;
    let p = &a * &b;
    let y_next = PolyMatrix::from_rows(vec![vec![Poly::zero(), -&p], vec![Poly::one(), e.clone()]]);
    let y_this = PolyMatrix::scalar(2, &e).sub(&y_next);
    let right = (0..nvars)
        .map(|j| {
            if j == i {
                y_next.clone()
            } else if j == i - 1 {
                y_this.clone()
            } else {
                PolyMatrix::scalar(2, &Poly::var(j))
            }
        })
        .collect();
    Ok(GradedBimodule::new_unchecked(nvars, vec![-1, 1], right, Tag::BottSamelson(vec![i])))
}

pub fn bott_samelson(word: &[usize], nvars: usize) -> Result<GradedBimodule> {
    let mut m = GradedBimodule::diagonal(nvars);
    for &i in word {
        m = tensor(&m, &elementary_bimodule(i, nvars)?)?;
    }
    Ok(m.with_tag(if word.is_empty() { Tag::Diagonal } else { Tag::BottSamelson(word.to_vec()) }))
}

/// `id_M ⊗ G` for a map `G: N -> N'`.
pub fn id_tensor(m: &GradedBimodule, g: &PolyMatrix) -> PolyMatrix {
    let rm = m.rank();
    let mut powers = MatrixPowers::new(m);
    let mut out = PolyMatrix::zeros(rm * g.rows, rm * g.cols);
    for b2 in 0..g.rows {
        for b in 0..g.cols {
            let entry = g.get(b2, b);
            if entry.is_zero() {
                continue;
            }
            let block = powers.eval(entry);
            for a2 in 0..rm {
                for a in 0..rm {
                    let p = block.get(a2, a);
                    if !p.is_zero() {
                        out.set(a2 * g.rows + b2, a * g.cols + b, p.clone());
                    }
                }
            }
        }
    }
    out
}

/// `F ⊗ id_N` for a map `F: M -> M'`.
pub fn tensor_id(f: &PolyMatrix, n: &GradedBimodule) -> PolyMatrix {
    f.kron_identity(n.rank())
}

/// `F ⊗ G: M ⊗ N -> M' ⊗ N'`.
pub fn tensor_maps(f: &BimoduleMap, g: &BimoduleMap, m: &GradedBimodule, n_target: &GradedBimodule) -> BimoduleMap {
    let left = tensor_id(&f.matrix, n_target);
    let right = id_tensor(m, &g.matrix);
    BimoduleMap { degree: f.degree + g.degree, matrix: left.mul(&right) }
}

pub fn tensor(m: &GradedBimodule, n: &GradedBimodule) -> Result<GradedBimodule> {
    if m.nvars != n.nvars {
        return Err(Error::Precondition(format!("tensor of bimodules over {} and {} variables", m.nvars, n.nvars)));
    }
    let (rm, rn) = (m.rank(), n.rank());
    let mut degrees = Vec::with_capacity(rm * rn);
    for a in 0..rm {
        for b in 0..rn {
            degrees.push(m.degrees[a] + n.degrees[b]);
        }
    }
    let right: Vec<PolyMatrix> = (0..m.nvars)
        .map(|j| if n.acts_as_scalar(j) { m.right[j].kron_identity(rn) } else { id_tensor(m, &n.right[j]) })
        .collect();
    let idempotent = match (&m.idempotent, &n.idempotent) {
        (None, None) => None,
        (em, en) => {
            let left = em.as_ref().map(|e| tensor_id(e, n)).unwrap_or_else(|| PolyMatrix::identity(rm * rn));
            let rightp = en.as_ref().map(|e| id_tensor(m, e)).unwrap_or_else(|| PolyMatrix::identity(rm * rn));
            Some(left.mul(&rightp))
        }
    };
    Ok(GradedBimodule {
        nvars: m.nvars,
        degrees,
        right,
        idempotent,
        tag: Tag::Tensor(Box::new(m.tag.clone()), Box::new(n.tag.clone())),
    })
}

/// Direct sum of free bimodules, blocks in order.
pub fn direct_sum(parts: &[&GradedBimodule], nvars: usize) -> GradedBimodule {
    let total: usize = parts.iter().map(|p| p.rank()).sum();
    let mut degrees = Vec::with_capacity(total);
    let mut right = vec![PolyMatrix::zeros(total, total); nvars];
    let mut off = 0;
    for p in parts {
        assert!(p.is_free(), "direct sum of Karoubi objects");
        degrees.extend_from_slice(&p.degrees);
        for (j, y) in right.iter_mut().enumerate() {
            y.put_block(off, off, &p.right[j]);
        }
        off += p.rank();
    }
    GradedBimodule::new_unchecked(nvars, degrees, right, Tag::Sum)
}

/// Multiplication `B_{s_i} -> R(1)`: `1⊗1 ↦ 1`, `1⊗x_{i+1} ↦ x_{i+1}`.
pub fn multiplication_map(i: usize, nvars: usize) -> Result<BimoduleMap> {
    elementary_bimodule(i, nvars)?;
    Ok(BimoduleMap::new(0, PolyMatrix::from_rows(vec![vec![Poly::one(), Poly::var(i)]])))
}

/// `R(-1) -> B_{s_i}`: `1 ↦ x_i⊗1 - 1⊗x_{i+1}`.
pub fn split_map(i: usize, nvars: usize) -> Result<BimoduleMap> {
    elementary_bimodule(i, nvars)?;
    Ok(BimoduleMap::new(0, PolyMatrix::from_rows(vec![vec![Poly::var(i - 1)], vec![Poly::int(-1)]])))
}

/// A `Q`-basis of the degree-`d` bimodule maps `M -> N`.
pub fn hom_space(m: &GradedBimodule, n: &GradedBimodule, d: i64) -> Vec<BimoduleMap> {
    hom_space_coordinates(m, n, d).into_iter().map(|(map, _)| map).collect()
}

/// Unknown layout for degree-`d` maps `M -> N`: `(row, col, monomial)`.
pub fn hom_unknowns(m: &GradedBimodule, n: &GradedBimodule, d: i64) -> Vec<(usize, usize, Mono)> {
    let mut unknowns = Vec::new();
    let mut by_degree: HashMap<i64, Vec<Mono>> = HashMap::new();
    for r in 0..n.rank() {
        for c in 0..m.rank() {
            let deg = m.degrees[c] + d - n.degrees[r];
            if deg < 0 || deg % 2 != 0 {
                continue;
            }
            let monos = by_degree.entry(deg).or_insert_with(|| monomials_of_degree(m.nvars, (deg / 2) as u32));
            for mono in monos.iter() {
                unknowns.push((r, c, *mono));
            }
        }
    }
    unknowns
}

/// Linear constraints on the unknowns of [`hom_unknowns`] making a matrix a
/// bimodule map.
pub fn hom_constraints(m: &GradedBimodule, n: &GradedBimodule, unknowns: &[(usize, usize, Mono)]) -> Vec<SparseVec> {
    #[derive(Hash, PartialEq, Eq)]
    struct Key(usize, usize, usize, Mono);
    let mut eqs: HashMap<Key, Vec<(usize, Q)>> = HashMap::new();
    let active: Vec<usize> = (0..m.nvars).filter(|&j| !(m.acts_as_scalar(j) && n.acts_as_scalar(j))).collect();
    for (u, &(r, c, mono)) in unknowns.iter().enumerate() {
        for &j in &active {
            let ym = &m.right[j];
            for c2 in 0..m.rank() {
                let y = ym.get(c, c2);
                for (t, v) in y.terms() {
                    eqs.entry(Key(j, r, c2, t.mul(&mono))).or_default().push((u, v.clone()));
                }
            }
            let yn = &n.right[j];
            for r2 in 0..n.rank() {
                let y = yn.get(r2, r);
                for (t, v) in y.terms() {
                    eqs.entry(Key(j, r2, c, t.mul(&mono))).or_default().push((u, -v));
                }
            }
        }
        let tag = m.nvars;
        if let Some(e) = &m.idempotent {
            // F e - F
            for c2 in 0..m.rank() {
                for (t, v) in e.get(c, c2).terms() {
                    eqs.entry(Key(tag, r, c2, t.mul(&mono))).or_default().push((u, v.clone()));
                }
            }
            eqs.entry(Key(tag, r, c, mono)).or_default().push((u, Q::from_int(-1)));
        }
        if let Some(e) = &n.idempotent {
            // e F - F
            for r2 in 0..n.rank() {
                for (t, v) in e.get(r2, r).terms() {
                    eqs.entry(Key(tag + 1, r2, c, t.mul(&mono))).or_default().push((u, v.clone()));
                }
            }
            eqs.entry(Key(tag + 1, r, c, mono)).or_default().push((u, Q::from_int(-1)));
        }
    }
    eqs.into_values().map(collect_sparse).filter(|r| !r.is_empty()).collect()
}

/// Assembles a map from a coefficient vector over [`hom_unknowns`].
pub fn map_from_coordinates(
    m: &GradedBimodule,
    n: &GradedBimodule,
    d: i64,
    unknowns: &[(usize, usize, Mono)],
    coords: &SparseVec,
) -> BimoduleMap {
    let mut entries: HashMap<(usize, usize), Vec<(Mono, Q)>> = HashMap::new();
    for (u, v) in coords {
        let (r, c, mono) = unknowns[*u];
        entries.entry((r, c)).or_default().push((mono, v.clone()));
    }
    let mut mat = PolyMatrix::zeros(n.rank(), m.rank());
    for ((r, c), terms) in entries {
        mat.set(r, c, Poly::from_terms(terms));
    }
    BimoduleMap::new(d, mat)
}

/// Basis of degree-`d` maps together with their coordinate vectors.
pub fn hom_space_coordinates(m: &GradedBimodule, n: &GradedBimodule, d: i64) -> Vec<(BimoduleMap, SparseVec)> {
    let unknowns = hom_unknowns(m, n, d);
    if unknowns.is_empty() {
        return Vec::new();
    }
    let rows = hom_constraints(m, n, &unknowns);
    nullspace(rows, unknowns.len())
        .into_iter()
        .map(|v| (map_from_coordinates(m, n, d, &unknowns, &v), v))
        .collect()
}

/// Indices of a maximal set of linearly independent columns.
pub fn independent_columns(a: &DenseMatrix) -> Vec<usize> {
    let mut e = Echelon::new();
    let mut cols = Vec::new();
    for c in 0..a.cols {
        let v: SparseVec = (0..a.rows).filter_map(|r| {
            let x = a.get(r, c);
            (!x.is_zero()).then(|| (r, x.clone()))
        }).collect();
        if e.insert(v) {
            cols.push(c);
        }
    }
    cols
}

fn independent_rows(a: &DenseMatrix) -> Vec<usize> {
    let mut e = Echelon::new();
    (0..a.rows).filter(|&r| e.insert(a.row_sparse(r))).collect()
}

/// Inverse of a homogeneous degree-0 map between graded free modules, when its
/// constant part is invertible (graded Nakayama), via a terminating Neumann series.
pub fn invert_degree_zero(s: &PolyMatrix) -> Option<PolyMatrix> {
    if s.rows != s.cols {
        return None;
    }
    let k = s.rows;
    let s0inv = PolyMatrix::from_dense(&s.constant_part().inverse()?);
    let nil = PolyMatrix::identity(k).sub(&s0inv.mul(s));
    let mut sum = PolyMatrix::identity(k);
    let mut term = PolyMatrix::identity(k);
    for _ in 0..=4 * k + 64 {
        term = term.mul(&nil);
        if term.is_zero() {
            return Some(sum.mul(&s0inv));
        }
        sum = sum.add(&term);
    }
    None
}

/// A Karoubi object realized as a free bimodule, with inclusion into and
/// projection from the carrier.
#[derive(Clone, Debug)]
pub struct Realization {
    pub module: GradedBimodule,
    pub inclusion: PolyMatrix,
    pub projection: PolyMatrix,
}

pub fn realize(m: &GradedBimodule) -> Realization {
    let e = match &m.idempotent {
        None => {
            let id = PolyMatrix::identity(m.rank());
            return Realization { module: m.clone(), inclusion: id.clone(), projection: id };
        }
        Some(e) => e,
    };
    let e0 = e.constant_part();
    let cols = independent_columns(&e0);
    let all_rows: Vec<usize> = (0..m.rank()).collect();
    let incl = e.submatrix(&all_rows, &cols);
    let rows = independent_rows(&incl.constant_part());
    let square = incl.submatrix(&rows, &(0..cols.len()).collect::<Vec<_>>());
    let sinv = invert_degree_zero(&square).expect("idempotent image has an invertible minor");
    let all_cols: Vec<usize> = (0..m.rank()).collect();
    let proj = sinv.mul(&e.submatrix(&rows, &all_cols));
    let right = m.right.iter().map(|y| proj.mul(y).mul(&incl)).collect();
    let degrees = cols.iter().map(|&c| m.degrees[c]).collect();
    let module = GradedBimodule::new_unchecked(m.nvars, degrees, right, Tag::Summand(Box::new(m.tag.clone())));
    Realization { module, inclusion: incl, projection: proj }
}

/// Splits `M` along `incl: X -> M`, `proj: M -> X` with `proj ∘ incl = c · id`.
/// Returns the image of `incl ∘ proj / c` and its complement as Karoubi objects.
pub fn split_summand(m: &GradedBimodule, incl: &BimoduleMap, proj: &BimoduleMap) -> Result<(GradedBimodule, GradedBimodule)> {
    let comp = proj.matrix.mul(&incl.matrix);
    let k = comp.rows;
    if comp.cols != k {
        return Err(Error::Precondition("proj ∘ incl is not square".into()));
    }
    let c = if k == 0 { Q::from_int(1) } else { comp.get(0, 0).constant_term() };
    if c.is_zero() || comp != PolyMatrix::scalar(k, &Poly::constant(c.clone())) {
        return Err(Error::Precondition("proj ∘ incl is not a nonzero multiple of the identity".into()));
    }
    let e = incl.matrix.mul(&proj.matrix).scale_q(&c.inv());
    let base = m.idempotent.clone().unwrap_or_else(|| PolyMatrix::identity(m.rank()));
    let comp_e = base.sub(&e);
    let mut summand = m.clone();
    summand.idempotent = Some(e);
    summand.tag = Tag::Summand(Box::new(m.tag.clone()));
    let mut complement = m.clone();
    complement.idempotent = Some(comp_e);
    complement.tag = Tag::Summand(Box::new(m.tag.clone()));
    Ok((summand, complement))
}

/// Artin monomials `x^a`, `a_i ≤ n-1-i` (0-based), sorted by degree.
pub fn artin_monomials(nvars: usize) -> Vec<Mono> {
    let mut out = vec![Mono::one()];
    for i in 0..nvars {
        let bound = (nvars - 1 - i) as u8;
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..=bound).map(move |e| {
                    let mut m2 = m;
                    m2.0[i] = e;
                    m2
                })
            })
            .collect();
    }
    out.sort();
    out
}

/// Products `e_1^{k_1} … e_n^{k_n}` of total degree `d`, as polynomials.
fn symmetric_basis(nvars: usize, d: u32, elem: &[Poly]) -> Vec<Poly> {
    fn rec(k: usize, rest: u32, nvars: usize, cur: Poly, elem: &[Poly], out: &mut Vec<Poly>) {
        if rest == 0 {
            out.push(cur);
            return;
        }
        if k > nvars {
            return;
        }
        let mut p = cur;
        let mut used = 0;
        loop {
            rec(k + 1, rest - used, nvars, p.clone(), elem, out);
            if used + k as u32 > rest {
                break;
            }
            used += k as u32;
            p = &p * &elem[k];
        }
    }
    let mut out = Vec::new();
    rec(1, d, nvars, Poly::one(), elem, &mut out);
    out
}

/// Writes `f = Σ_a c_a x^a` with `c_a` symmetric and `x^a` Artin; returns `c_a`.
fn straighten(f: &Poly, nvars: usize, artin: &[Mono], elem: &[Poly]) -> Vec<Poly> {
    let d = f.homogeneous_degree().expect("homogeneous input");
    let mut unknowns: Vec<(usize, Poly)> = Vec::new();
    for (ai, a) in artin.iter().enumerate() {
        if a.degree() > d {
            continue;
        }
        for s in symmetric_basis(nvars, d - a.degree(), elem) {
            unknowns.push((ai, s));
        }
    }
    let monos = monomials_of_degree(nvars, d);
    let index: HashMap<Mono, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); monos.len()];
    for (u, (ai, s)) in unknowns.iter().enumerate() {
        let p = s.mul_mono(&artin[*ai], &Q::from_int(1));
        for (m, c) in p.terms() {
            rows[index[m]].push((u, c.clone()));
        }
    }
    let system = rows.into_iter().enumerate().map(|(i, r)| (collect_sparse(r), f.coeff(&monos[i])));
    let x = solve(system, unknowns.len()).expect("Artin monomials span over the invariants");
    let mut out = vec![Poly::zero(); artin.len()];
    for (u, c) in x {
        let (ai, s) = &unknowns[u];
        out[*ai] = &out[*ai] + &s.scale(&c);
    }
    out
}

/// `B_{w_0} = R ⊗_{R^W} R (l(w_0))` on the Artin basis `1 ⊗ x^a`.
pub fn b_w0(nvars: usize) -> GradedBimodule {
    let artin = artin_monomials(nvars);
    let l = (nvars * (nvars - 1) / 2) as i64;
    let elem: Vec<Poly> = (0..=nvars).map(|k| elementary_symmetric(nvars, k)).collect();
    let degrees = artin.iter().map(|a| 2 * a.degree() as i64 - l).collect();
    let k = artin.len();
    let right = (0..nvars)
        .map(|j| {
            let mut y = PolyMatrix::zeros(k, k);
            for (c, a) in artin.iter().enumerate() {
                let f = Poly::monomial(a.mul(&Mono::var(j)), Q::from_int(1));
                for (r, coeff) in straighten(&f, nvars, &artin, &elem).into_iter().enumerate() {
                    y.set(r, c, coeff);
                }
            }
            y
        })
        .collect();
    GradedBimodule::new_unchecked(nvars, degrees, right, Tag::LongestElement)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_bimodule_matches_rewriting() {
        let b = elementary_bimodule(1, 2).unwrap();
        assert_eq!(b.degrees(), &[-1, 1]);
        let x1 = Poly::var(0);
        let x2 = Poly::var(1);
        let expected = PolyMatrix::from_rows(vec![vec![Poly::zero(), -&(&x1 * &x2)], vec![Poly::one(), &x1 + &x2]]);
        assert_eq!(b.right_action(1), &expected);
        b.validate().unwrap();
        assert!(b.symmetric_actions_agree());
    }

    #[test]
    fn multiplication_and_split_compose_to_root() {
        for n in 2..=4 {
            for i in 1..n {
                let b = elementary_bimodule(i, n).unwrap();
                let r = GradedBimodule::diagonal(n);
                let m = multiplication_map(i, n).unwrap();
                let s = split_map(i, n).unwrap();
                check_map(&b, &r.shift(1), &m).unwrap();
                check_map(&r.shift(-1), &b, &s).unwrap();
                let comp = m.after(&s);
                assert_eq!(comp.matrix.get(0, 0), &(&Poly::var(i - 1) - &Poly::var(i)));
            }
        }
    }

    #[test]
    fn realize_identity_idempotent() {
        let b = bott_samelson(&[1, 2], 3).unwrap();
        let mut k = b.clone();
        k.idempotent = Some(PolyMatrix::identity(b.rank()));
        let r = realize(&k);
        assert_eq!(r.module.graded_rank(), b.graded_rank());
        r.module.validate().unwrap();
    }

    #[test]
    fn artin_basis_counts() {
        assert_eq!(artin_monomials(3).len(), 6);
        assert_eq!(artin_monomials(4).len(), 24);
    }
}
