//! Bounded complexes of Soergel bimodules whose terms are canonical
//! indecomposables `B_w(k)`, with block differentials.
//!
//! A differential at level `i` is a grid `d[b][a]` of matrices from term `a`
//! of level `i` to term `b` of level `i + 1`, in the coordinates of
//! [`canonical`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use serde::{Deserialize, Serialize};

use crate::braid::{reduced_word, BraidWord, Permutation};
use crate::decompose::{canonical, decompose_canonical, format_label, tensor_canonical};
use crate::error::{Error, Result};
use crate::linalg::{collect_sparse, nullspace, SparseVec};
use crate::poly::{Mono, Poly, PolyMatrix};
use crate::rational::Q;
use crate::soergel::{
    check_map, hom_space, id_tensor, invert_degree_zero, multiplication_map, split_map, tensor_id, BimoduleMap,
    GradedBimodule, GradedRank,
};

/// Version of the canonical models and sign conventions; serialized
/// complexes are only comparable within one version.
pub const CONVENTION_VERSION: u32 = 1;

/// `B_w(shift)` in its canonical model.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub w: Permutation,
    pub shift: i64,
}

impl Term {
    pub fn new(w: Permutation, shift: i64) -> Self {
        Term { w, shift }
    }

    pub fn diagonal(n: usize, shift: i64) -> Self {
        Term { w: Permutation::identity(n), shift }
    }

    pub fn module(&self) -> GradedBimodule {
        canonical(&self.w).shift(self.shift)
    }

    pub fn rank(&self) -> usize {
        canonical(&self.w).rank()
    }

    pub fn word(&self) -> Vec<usize> {
        reduced_word(&self.w)
    }

    pub fn label(&self) -> String {
        format_label(&self.word(), self.shift)
    }

    pub fn graded_rank(&self) -> GradedRank {
        canonical(&self.w).graded_rank().shift(-self.shift)
    }
}

/// Block matrix `[target][source]`.
pub type Blocks = Vec<Vec<PolyMatrix>>;

fn zero_blocks(target: &[Term], source: &[Term]) -> Blocks {
    target.iter().map(|b| source.iter().map(|a| PolyMatrix::zeros(b.rank(), a.rank())).collect()).collect()
}

/// `g ∘ f` for block matrices `f: X → Y`, `g: Y → Z`.
pub fn compose_blocks(g: &Blocks, f: &Blocks, x: &[Term], z: &[Term]) -> Blocks {
    let mut out = zero_blocks(z, x);
    for (c, row) in g.iter().enumerate() {
        for (b, gb) in row.iter().enumerate() {
            if gb.is_zero() {
                continue;
            }
            for (a, fa) in f[b].iter().enumerate() {
                if !fa.is_zero() {
                    out[c][a] = out[c][a].add(&gb.mul(fa));
                }
            }
        }
    }
    out
}

fn blocks_zero(b: &Blocks) -> bool {
    b.iter().all(|r| r.iter().all(|m| m.is_zero()))
}

fn scale_blocks(b: &Blocks, c: &Q) -> Blocks {
    b.iter().map(|r| r.iter().map(|m| m.scale_q(c)).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "ComplexRepr", try_from = "ComplexRepr")]
pub struct BimoduleChainComplex {
    n: usize,
    levels: BTreeMap<i64, Vec<Term>>,
    diffs: BTreeMap<i64, Blocks>,
}

impl BimoduleChainComplex {
    /// Builds a complex, filling missing differentials with zero and asserting `d² = 0`.
    pub fn new(n: usize, levels: BTreeMap<i64, Vec<Term>>, mut diffs: BTreeMap<i64, Blocks>) -> Result<Self> {
        let levels: BTreeMap<i64, Vec<Term>> = levels.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        for t in levels.values().flatten() {
            if t.w.n() != n {
                return Err(Error::StrandMismatch { left: n, right: t.w.n() });
            }
        }
        let mut full = BTreeMap::new();
        for (&i, src) in &levels {
            let Some(tgt) = levels.get(&(i + 1)) else {
                if diffs.get(&i).is_some_and(|d| !blocks_zero(d)) {
                    return Err(Error::Precondition(format!("nonzero differential out of level {i} into an empty level")));
                }
                continue;
            };
            let d = diffs.remove(&i).unwrap_or_else(|| zero_blocks(tgt, src));
            if d.len() != tgt.len() || d.iter().any(|r| r.len() != src.len()) {
                return Err(Error::Precondition(format!("differential at level {i} has the wrong block shape")));
            }
            for (b, row) in d.iter().enumerate() {
                for (a, m) in row.iter().enumerate() {
                    if (m.rows, m.cols) != (tgt[b].rank(), src[a].rank()) {
                        return Err(Error::Precondition(format!("block ({b},{a}) at level {i} has the wrong size")));
                    }
                }
            }
            full.insert(i, d);
        }
        let c = BimoduleChainComplex { n, levels, diffs: full };
        c.check_d_squared()?;
        Ok(c)
    }

    pub fn zero(n: usize) -> Self {
        BimoduleChainComplex { n, levels: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    pub fn single(term: Term, degree: i64) -> Self {
        let n = term.w.n();
        BimoduleChainComplex { n, levels: BTreeMap::from([(degree, vec![term])]), diffs: BTreeMap::new() }
    }

    /// The diagonal bimodule `R` in degree 0.
    pub fn diagonal(n: usize) -> Self {
        Self::single(Term::diagonal(n, 0), 0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn levels(&self) -> &BTreeMap<i64, Vec<Term>> {
        &self.levels
    }

    pub fn terms(&self, i: i64) -> &[Term] {
        self.levels.get(&i).map_or(&[], |v| v.as_slice())
    }

    /// The differential out of level `i` (zero blocks if absent).
    pub fn differential(&self, i: i64) -> Blocks {
        self.diffs.get(&i).cloned().unwrap_or_else(|| zero_blocks(self.terms(i + 1), self.terms(i)))
    }

    pub fn is_zero(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn total_rank(&self) -> usize {
        self.levels.values().flatten().map(|t| t.rank()).sum()
    }

    pub fn num_terms(&self) -> usize {
        self.levels.values().map(|v| v.len()).sum()
    }

    pub fn graded_rank(&self, i: i64) -> GradedRank {
        self.terms(i).iter().fold(GradedRank::default(), |acc, t| acc.add(&t.graded_rank()))
    }

    /// `Σ_i (-1)^i · graded_rank(i)`.
    pub fn euler_characteristic(&self) -> GradedRank {
        self.levels.keys().fold(GradedRank::default(), |acc, &i| {
            let r = self.graded_rank(i);
            if i.rem_euclid(2) == 0 {
                acc.add(&r)
            } else {
                acc.sub(&r)
            }
        })
    }

    /// Class in the split Grothendieck group: `w ↦ Σ ± v^{-k}` over terms `B_w(k)`.
    pub fn grothendieck_class(&self) -> BTreeMap<Permutation, GradedRank> {
        let mut out: BTreeMap<Permutation, GradedRank> = BTreeMap::new();
        for (&i, terms) in &self.levels {
            for t in terms {
                let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
                let e = out.entry(t.w.clone()).or_default();
                *e = e.add(&GradedRank(BTreeMap::from([(-t.shift, sign)])));
            }
        }
        out.retain(|_, r| r.0.values().any(|&c| c != 0));
        for r in out.values_mut() {
            r.0.retain(|_, c| *c != 0);
        }
        out
    }

    /// Term labels per level, sorted within a level.
    pub fn signature(&self) -> BTreeMap<i64, Vec<Term>> {
        self.levels
            .iter()
            .map(|(&i, v)| {
                let mut v = v.clone();
                v.sort();
                (i, v)
            })
            .collect()
    }

    fn check_d_squared(&self) -> Result<()> {
        for (&i, d) in &self.diffs {
            if let Some(next) = self.diffs.get(&(i + 1)) {
                let dd = compose_blocks(next, d, self.terms(i), self.terms(i + 2));
                if !blocks_zero(&dd) {
                    return Err(Error::Invariant(format!("d∘d ≠ 0 out of level {i}")));
                }
            }
        }
        Ok(())
    }

    /// Full check: `d² = 0` and every block is a degree-0 bimodule map.
    pub fn validate(&self) -> Result<()> {
        self.check_d_squared()?;
        for (&i, d) in &self.diffs {
            for (b, row) in d.iter().enumerate() {
                for (a, m) in row.iter().enumerate() {
                    let src = self.terms(i)[a].module();
                    let tgt = self.terms(i + 1)[b].module();
                    check_map(&src, &tgt, &BimoduleMap::new(0, m.clone()))
                        .map_err(|e| Error::Invariant(format!("block ({b},{a}) at level {i}: {e}")))?;
                }
            }
        }
        Ok(())
    }

    /// Homological shift `C[k]`: `(C[k])^i = C^{i+k}`, differential `(-1)^k d`.
    pub fn hom_shift(&self, k: i64) -> Self {
        let sign = if k.rem_euclid(2) == 0 { Q::from_int(1) } else { Q::from_int(-1) };
        BimoduleChainComplex {
            n: self.n,
            levels: self.levels.iter().map(|(&i, v)| (i - k, v.clone())).collect(),
            diffs: self.diffs.iter().map(|(&i, d)| (i - k, scale_blocks(d, &sign))).collect(),
        }
    }

    /// Internal shift `C(k)` applied to every term.
    pub fn shift(&self, k: i64) -> Self {
        BimoduleChainComplex {
            n: self.n,
            levels: self
                .levels
                .iter()
                .map(|(&i, v)| (i, v.iter().map(|t| Term::new(t.w.clone(), t.shift + k)).collect()))
                .collect(),
            diffs: self.diffs.clone(),
        }
    }
}

// Serialized form: terms as permutation images, matrix entries as
// `[exponents, coefficient]` pairs with exact rational strings.
#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    n: usize,
    levels: Vec<LevelRepr>,
}

#[derive(Serialize, Deserialize)]
struct LevelRepr {
    degree: i64,
    terms: Vec<(Vec<usize>, i64)>,
    differential: Vec<Vec<MatrixRepr>>,
}

/// `(exponents, coefficient)` terms of one polynomial entry.
type PolyRepr = Vec<(Vec<u8>, String)>;

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, PolyRepr)>,
}

fn trimmed(m: &Mono) -> Vec<u8> {
    let len = m.0.iter().rposition(|&e| e != 0).map_or(0, |p| p + 1);
    m.0[..len].to_vec()
}

impl From<&PolyMatrix> for MatrixRepr {
    fn from(m: &PolyMatrix) -> Self {
        let mut entries = Vec::new();
        for r in 0..m.rows {
            for c in 0..m.cols {
                let p = m.get(r, c);
                if !p.is_zero() {
                    entries.push((r, c, p.terms().iter().map(|(mono, q)| (trimmed(mono), q.to_string())).collect()));
                }
            }
        }
        MatrixRepr { rows: m.rows, cols: m.cols, entries }
    }
}

impl TryFrom<MatrixRepr> for PolyMatrix {
    type Error = String;
    fn try_from(r: MatrixRepr) -> std::result::Result<Self, String> {
        let mut m = PolyMatrix::zeros(r.rows, r.cols);
        for (row, col, terms) in r.entries {
            if row >= r.rows || col >= r.cols {
                return Err(format!("entry ({row},{col}) outside a {}x{} matrix", r.rows, r.cols));
            }
            let mut parsed = Vec::with_capacity(terms.len());
            for (exps, q) in terms {
                let mut mono = Mono::one();
                if exps.len() > mono.0.len() {
                    return Err(format!("monomial with {} exponents", exps.len()));
                }
                mono.0[..exps.len()].copy_from_slice(&exps);
                parsed.push((mono, q.parse::<Q>()?));
            }
            m.set(row, col, Poly::from_terms(parsed));
        }
        Ok(m)
    }
}

impl From<BimoduleChainComplex> for ComplexRepr {
    fn from(c: BimoduleChainComplex) -> Self {
        let levels = c
            .levels
            .iter()
            .map(|(&i, ts)| LevelRepr {
                degree: i,
                terms: ts.iter().map(|t| (t.w.images().to_vec(), t.shift)).collect(),
                differential: c
                    .diffs
                    .get(&i)
                    .map(|d| d.iter().map(|row| row.iter().map(MatrixRepr::from).collect()).collect())
                    .unwrap_or_default(),
            })
            .collect();
        ComplexRepr { n: c.n, levels }
    }
}

impl TryFrom<ComplexRepr> for BimoduleChainComplex {
    type Error = String;
    fn try_from(r: ComplexRepr) -> std::result::Result<Self, String> {
        let mut levels = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for l in r.levels {
            let terms = l
                .terms
                .into_iter()
                .map(|(images, shift)| Permutation::from_images(images).map(|w| Term::new(w, shift)))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.to_string())?;
            if levels.insert(l.degree, terms).is_some() {
                return Err(format!("duplicate level {}", l.degree));
            }
            if !l.differential.is_empty() {
                let blocks = l
                    .differential
                    .into_iter()
                    .map(|row| row.into_iter().map(PolyMatrix::try_from).collect::<std::result::Result<Vec<_>, _>>())
                    .collect::<std::result::Result<Blocks, _>>()?;
                diffs.insert(l.degree, blocks);
            }
        }
        BimoduleChainComplex::new(r.n, levels, diffs).map_err(|e| e.to_string())
    }
}

impl fmt::Display for BimoduleChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.levels.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .levels
            .iter()
            .map(|(i, v)| {
                let terms: Vec<String> = v.iter().map(|t| t.label()).collect();
                format!("[{i}] {}", terms.join(" ⊕ "))
            })
            .collect();
        write!(f, "{}", parts.join(" → "))
    }
}

/// `Δ_i = B_{s_i} → R(1)`, with `B_s` in degree 0.
pub fn delta_complex(i: usize, n: usize) -> Result<BimoduleChainComplex> {
    let m = multiplication_map(i, n)?;
    let s = Term::new(Permutation::simple(i, n), 0);
    BimoduleChainComplex::new(
        n,
        BTreeMap::from([(0, vec![s]), (1, vec![Term::diagonal(n, 1)])]),
        BTreeMap::from([(0, vec![vec![m.matrix]])]),
    )
}

/// `∇_i = R(-1) → B_{s_i}`, with `B_s` in degree 0.
pub fn nabla_complex(i: usize, n: usize) -> Result<BimoduleChainComplex> {
    let m = split_map(i, n)?;
    let s = Term::new(Permutation::simple(i, n), 0);
    BimoduleChainComplex::new(
        n,
        BTreeMap::from([(-1, vec![Term::diagonal(n, -1)]), (0, vec![s])]),
        BTreeMap::from([(-1, vec![vec![m.matrix]])]),
    )
}

/// Position of a tensor pair's pieces inside the total complex.
struct PairPieces {
    level: i64,
    offset: usize,
    pieces: std::sync::Arc<Vec<crate::decompose::Piece>>,
}

/// Total complex of `C ⊗ D`, with `d = d_C ⊗ 1 + (-1)^i 1 ⊗ d_D` on bidegree
/// `(i, j)`; each `B_x ⊗ B_y` is split into canonical indecomposables.
pub fn tensor_complex(c: &BimoduleChainComplex, d: &BimoduleChainComplex) -> Result<BimoduleChainComplex> {
    if c.n != d.n {
        return Err(Error::StrandMismatch { left: c.n, right: d.n });
    }
    let n = c.n;
    let mut levels: BTreeMap<i64, Vec<Term>> = BTreeMap::new();
    let mut pairs: HashMap<(i64, usize, i64, usize), PairPieces> = HashMap::new();
    for (&i, cs) in &c.levels {
        for (&j, ds) in &d.levels {
            for (a, ta) in cs.iter().enumerate() {
                for (b, tb) in ds.iter().enumerate() {
                    let pieces = tensor_canonical(&ta.w, &tb.w);
                    let slot = levels.entry(i + j).or_default();
                    let offset = slot.len();
                    for p in pieces.iter() {
                        slot.push(Term::new(p.w.clone(), p.shift + ta.shift + tb.shift));
                    }
                    pairs.insert((i, a, j, b), PairPieces { level: i + j, offset, pieces });
                }
            }
        }
    }
    let mut diffs: BTreeMap<i64, Blocks> = BTreeMap::new();
    for (&k, src) in &levels {
        if let Some(tgt) = levels.get(&(k + 1)) {
            diffs.insert(k, zero_blocks(tgt, src));
        }
    }
    let mut add_block = |from: &PairPieces, to: &PairPieces, carrier_map: &PolyMatrix| {
        let dk = diffs.get_mut(&from.level).expect("target level exists");
        for (p, pp) in from.pieces.iter().enumerate() {
            let restricted = carrier_map.mul(&pp.inclusion);
            for (q, qp) in to.pieces.iter().enumerate() {
                let block = qp.projection.mul(&restricted);
                if !block.is_zero() {
                    let cell = &mut dk[to.offset + q][from.offset + p];
                    *cell = cell.add(&block);
                }
            }
        }
    };
    for (&i, cs) in &c.levels {
        for (&j, ds) in &d.levels {
            for (a, ta) in cs.iter().enumerate() {
                for (b, tb) in ds.iter().enumerate() {
                    let from = &pairs[&(i, a, j, b)];
                    if let Some(dc) = c.diffs.get(&i) {
                        for (a2, m) in dc.iter().map(|row| &row[a]).enumerate() {
                            if !m.is_zero() {
                                let to = &pairs[&(i + 1, a2, j, b)];
                                add_block(from, to, &tensor_id(m, &canonical(&tb.w)));
                            }
                        }
                    }
                    if let Some(dd) = d.diffs.get(&j) {
                        for (b2, m) in dd.iter().map(|row| &row[b]).enumerate() {
                            if !m.is_zero() {
                                let to = &pairs[&(i, a, j + 1, b2)];
                                let g = id_tensor(&canonical(&ta.w), m);
                                let g = if i.rem_euclid(2) == 0 { g } else { g.neg() };
                                add_block(from, to, &g);
                            }
                        }
                    }
                }
            }
        }
    }
    BimoduleChainComplex::new(n, levels, diffs)
}

/// Tensor product of `Δ_i` (positive letters) and `∇_i` (negative letters) in word order.
pub fn rouquier_complex(b: &BraidWord) -> Result<BimoduleChainComplex> {
    let n = b.strands();
    let mut acc = BimoduleChainComplex::diagonal(n);
    for &l in b.letters() {
        acc = tensor_complex(&acc, &letter_complex(l, n)?)?;
    }
    Ok(acc)
}

/// Same homotopy type as [`rouquier_complex`], minimized after every letter.
pub fn minimal_rouquier_complex(b: &BraidWord) -> Result<BimoduleChainComplex> {
    let n = b.strands();
    let mut acc = BimoduleChainComplex::diagonal(n);
    for &l in b.letters() {
        acc = gaussian_eliminate(&tensor_complex(&acc, &letter_complex(l, n)?)?);
    }
    Ok(acc)
}

fn letter_complex(l: i32, n: usize) -> Result<BimoduleChainComplex> {
    let i = l.unsigned_abs() as usize;
    if l > 0 {
        delta_complex(i, n)
    } else {
        nabla_complex(i, n)
    }
}

/// A degree-0 chain map, `components[i][b][a]` from term `a` of `source^i` to term `b` of `target^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainMap {
    pub source: BimoduleChainComplex,
    pub target: BimoduleChainComplex,
    pub components: BTreeMap<i64, Blocks>,
}

impl ChainMap {
    pub fn new(source: BimoduleChainComplex, target: BimoduleChainComplex, components: BTreeMap<i64, Blocks>) -> Self {
        ChainMap { source, target, components }
    }

    pub fn component(&self, i: i64) -> Blocks {
        self.components
            .get(&i)
            .cloned()
            .unwrap_or_else(|| zero_blocks(self.target.terms(i), self.source.terms(i)))
    }

    /// `f d_C = d_D f` at every level, and every block is a bimodule map.
    pub fn verify(&self) -> Result<()> {
        for (&i, f) in &self.components {
            if f.len() != self.target.terms(i).len() || f.iter().any(|r| r.len() != self.source.terms(i).len()) {
                return Err(Error::Precondition(format!("chain map component at level {i} has the wrong block shape")));
            }
            for (b, row) in f.iter().enumerate() {
                for (a, m) in row.iter().enumerate() {
                    check_map(&self.source.terms(i)[a].module(), &self.target.terms(i)[b].module(), &BimoduleMap::new(0, m.clone()))
                        .map_err(|e| Error::Precondition(format!("component ({b},{a}) at level {i}: {e}")))?;
                }
            }
        }
        let lo = self.source.levels.keys().chain(self.target.levels.keys()).min().copied().unwrap_or(0);
        let hi = self.source.levels.keys().chain(self.target.levels.keys()).max().copied().unwrap_or(0);
        for i in lo..=hi {
            let left = compose_blocks(&self.target.differential(i), &self.component(i), self.source.terms(i), self.target.terms(i + 1));
            let right = compose_blocks(&self.component(i + 1), &self.source.differential(i), self.source.terms(i), self.target.terms(i + 1));
            for (l, r) in left.iter().flatten().zip(right.iter().flatten()) {
                if l != r {
                    return Err(Error::Precondition(format!("not a chain map: square at level {i} does not commute\n{:?}\nvs\n{:?}", l, r)));
                }
            }
        }
        Ok(())
    }

    pub fn identity(c: &BimoduleChainComplex) -> Self {
        let components = c
            .levels
            .iter()
            .map(|(&i, ts)| {
                let blocks = ts
                    .iter()
                    .enumerate()
                    .map(|(b, tb)| {
                        ts.iter()
                            .enumerate()
                            .map(|(a, ta)| if a == b { PolyMatrix::identity(ta.rank()) } else { PolyMatrix::zeros(tb.rank(), ta.rank()) })
                            .collect()
                    })
                    .collect();
                (i, blocks)
            })
            .collect();
        ChainMap::new(c.clone(), c.clone(), components)
    }

    pub fn zero(source: &BimoduleChainComplex, target: &BimoduleChainComplex) -> Self {
        ChainMap::new(source.clone(), target.clone(), BTreeMap::new())
    }

    pub fn scale(&self, c: &Q) -> Self {
        ChainMap::new(
            self.source.clone(),
            self.target.clone(),
            self.components.iter().map(|(&i, b)| (i, scale_blocks(b, c))).collect(),
        )
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ChainMap) -> ChainMap {
        let mut components = BTreeMap::new();
        for &i in first.source.levels.keys() {
            let f = first.component(i);
            let g = self.component(i);
            components.insert(i, compose_blocks(&g, &f, first.source.terms(i), self.target.terms(i)));
        }
        ChainMap::new(first.source.clone(), self.target.clone(), components)
    }
}

/// Mapping cone: `Cone(f)^i = C^{i+1} ⊕ D^i`, `d = [[-d_C, 0], [f, d_D]]`.
pub fn cone(f: &ChainMap) -> Result<BimoduleChainComplex> {
    f.verify()?;
    let (c, d) = (&f.source, &f.target);
    let mut keys: Vec<i64> = c.levels.keys().map(|i| i - 1).chain(d.levels.keys().copied()).collect();
    keys.sort_unstable();
    keys.dedup();
    let mut levels = BTreeMap::new();
    for &i in &keys {
        let mut v = c.terms(i + 1).to_vec();
        v.extend_from_slice(d.terms(i));
        levels.insert(i, v);
    }
    let mut diffs = BTreeMap::new();
    for &i in &keys {
        let (c1, d0) = (c.terms(i + 1), d.terms(i));
        let (c2, d1) = (c.terms(i + 2), d.terms(i + 1));
        if c2.is_empty() && d1.is_empty() {
            continue;
        }
        let dc = c.differential(i + 1);
        let dd = d.differential(i);
        let fi = f.component(i + 1);
        let mut rows: Blocks = Vec::new();
        for (b, tb) in c2.iter().enumerate() {
            let mut row: Vec<PolyMatrix> = dc[b].iter().map(|m| m.neg()).collect();
            row.extend(d0.iter().map(|ta| PolyMatrix::zeros(tb.rank(), ta.rank())));
            rows.push(row);
        }
        for b in 0..d1.len() {
            let mut row: Vec<PolyMatrix> = fi[b].clone();
            debug_assert_eq!(row.len(), c1.len());
            row.extend(dd[b].iter().cloned());
            rows.push(row);
        }
        diffs.insert(i, rows);
    }
    BimoduleChainComplex::new(c.n, levels, diffs)
}

fn drop_index<T: Clone>(v: &[T], k: usize) -> Vec<T> {
    v.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| x.clone()).collect()
}

/// Cancels one invertible block `d^i[b][a]` by the Gaussian elimination lemma.
pub fn eliminate_pivot(c: &BimoduleChainComplex, i: i64, a: usize, b: usize) -> Result<BimoduleChainComplex> {
    let d = c.differential(i);
    let phi_inv = invert_degree_zero(&d[b][a]).ok_or_else(|| Error::Precondition(format!("block ({b},{a}) at level {i} is not invertible")))?;
    let mut levels = c.levels.clone();
    let src = drop_index(c.terms(i), a);
    let tgt = drop_index(c.terms(i + 1), b);
    levels.insert(i, src);
    levels.insert(i + 1, tgt);
    let mut diffs = c.diffs.clone();
    // δ' = δ - γ φ^{-1} β
    let mut new_d = Vec::new();
    for (b2, row) in d.iter().enumerate() {
        if b2 == b {
            continue;
        }
        let gamma = row[a].mul(&phi_inv);
        let mut new_row = Vec::new();
        for (a2, m) in row.iter().enumerate() {
            if a2 == a {
                continue;
            }
            new_row.push(if gamma.is_zero() { m.clone() } else { m.sub(&gamma.mul(&d[b][a2])) });
        }
        new_d.push(new_row);
    }
    diffs.insert(i, new_d);
    if let Some(prev) = diffs.get_mut(&(i - 1)) {
        prev.remove(a);
    }
    if let Some(next) = diffs.get_mut(&(i + 1)) {
        for row in next.iter_mut() {
            row.remove(b);
        }
    }
    BimoduleChainComplex::new(c.n, levels, diffs)
}

fn find_pivot(c: &BimoduleChainComplex) -> Option<(i64, usize, usize)> {
    for (&i, d) in &c.diffs {
        let src = c.terms(i);
        let tgt = c.terms(i + 1);
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for (b, row) in d.iter().enumerate() {
            for (a, m) in row.iter().enumerate() {
                if src[a] != tgt[b] || m.is_zero() || m.constant_part().rank() != m.rows {
                    continue;
                }
                let key = (src[a].rank(), m.nonzero_terms(), b, a);
                if best.as_ref().is_none_or(|k| key < *k) {
                    best = Some(key);
                }
            }
        }
        if let Some((_, _, b, a)) = best {
            return Some((i, a, b));
        }
    }
    None
}

/// Repeatedly cancels invertible blocks, lowest level first and smallest
/// support first; the result has no invertible differential component.
pub fn gaussian_eliminate(c: &BimoduleChainComplex) -> BimoduleChainComplex {
    let mut cur = c.clone();
    while let Some((i, a, b)) = find_pivot(&cur) {
        cur = eliminate_pivot(&cur, i, a, b).expect("pivot is invertible and d² = 0 is preserved");
    }
    cur
}

/// Rewrites a complex whose terms were produced outside the canonical models
/// (free modules with block differentials) in canonical coordinates.
pub fn canonicalize(
    n: usize,
    levels: BTreeMap<i64, Vec<GradedBimodule>>,
    diffs: BTreeMap<i64, Vec<Vec<PolyMatrix>>>,
) -> Result<BimoduleChainComplex> {
    let mut pieces = BTreeMap::new();
    let mut out_levels = BTreeMap::new();
    for (&i, mods) in &levels {
        let split: Vec<Vec<crate::decompose::Piece>> = mods.iter().map(decompose_canonical).collect();
        out_levels.insert(i, split.iter().flatten().map(|p| Term::new(p.w.clone(), p.shift)).collect::<Vec<_>>());
        pieces.insert(i, split);
    }
    let mut out_diffs = BTreeMap::new();
    for (&i, d) in &diffs {
        let (Some(src), Some(tgt)) = (pieces.get(&i), pieces.get(&(i + 1))) else { continue };
        let mut rows = Vec::new();
        for (b, tps) in tgt.iter().enumerate() {
            for q in tps {
                let mut row = Vec::new();
                for (a, sps) in src.iter().enumerate() {
                    for p in sps {
                        row.push(q.projection.mul(&d[b][a]).mul(&p.inclusion));
                    }
                }
                rows.push(row);
            }
        }
        out_diffs.insert(i, rows);
    }
    BimoduleChainComplex::new(n, out_levels, out_diffs)
}

/// Basis of the space of degree-0 chain maps `C → D`.
pub fn chain_maps(c: &BimoduleChainComplex, d: &BimoduleChainComplex) -> Vec<ChainMap> {
    // unknowns: coordinates of each block in a hom-space basis
    let mut slots: Vec<(i64, usize, usize, PolyMatrix)> = Vec::new();
    let mut slot_index: HashMap<(i64, usize, usize), Vec<usize>> = HashMap::new();
    for (&i, cs) in &c.levels {
        for (b, tb) in d.terms(i).iter().enumerate() {
            for (a, ta) in cs.iter().enumerate() {
                for m in hom_space(&ta.module(), &tb.module(), 0) {
                    slot_index.entry((i, b, a)).or_default().push(slots.len());
                    slots.push((i, b, a, m.matrix));
                }
            }
        }
    }
    if slots.is_empty() {
        return Vec::new();
    }
    // constraint (d_D f_i - f_{i+1} d_C)[b'][a] = 0, flattened by (level, b', a, row, col, mono)
    let mut coords: HashMap<(i64, usize, usize, usize, usize, Mono), usize> = HashMap::new();
    let mut columns: Vec<Vec<(usize, Q)>> = vec![Vec::new(); slots.len()];
    let mut push = |key: (i64, usize, usize), m: &PolyMatrix, slot: usize, sign: i64, columns: &mut Vec<Vec<(usize, Q)>>| {
        for r in 0..m.rows {
            for col in 0..m.cols {
                for (mono, q) in m.get(r, col).terms() {
                    let next = coords.len();
                    let k = *coords.entry((key.0, key.1, key.2, r, col, *mono)).or_insert(next);
                    columns[slot].push((k, if sign > 0 { q.clone() } else { -q.clone() }));
                }
            }
        }
    };
    for (s, (i, b, a, m)) in slots.iter().enumerate() {
        let dd = d.differential(*i);
        for (b2, row) in dd.iter().enumerate() {
            if !row[*b].is_zero() {
                push((*i, b2, *a), &row[*b].mul(m), s, 1, &mut columns);
            }
        }
        let dc = c.differential(*i - 1);
        for (a0, m0) in dc.get(*a).map(|r| r.iter().enumerate().collect::<Vec<_>>()).unwrap_or_default() {
            if !m0.is_zero() {
                push((*i - 1, *b, a0), &m.mul(m0), s, -1, &mut columns);
            }
        }
    }
    let mut rows: Vec<Vec<(usize, Q)>> = vec![Vec::new(); coords.len()];
    for (s, col) in columns.into_iter().enumerate() {
        for (k, q) in col {
            rows[k].push((s, q));
        }
    }
    let rows: Vec<SparseVec> = rows.into_iter().map(collect_sparse).collect();
    nullspace(rows, slots.len())
        .into_iter()
        .map(|v| {
            let mut comps: BTreeMap<i64, Blocks> = BTreeMap::new();
            for (s, q) in v {
                let (i, b, a, m) = &slots[s];
                let blocks = comps.entry(*i).or_insert_with(|| zero_blocks(d.terms(*i), c.terms(*i)));
                blocks[*b][*a] = blocks[*b][*a].add(&m.scale_q(&q));
            }
            ChainMap::new(c.clone(), d.clone(), comps)
        })
        .collect()
}

fn combine(maps: &[ChainMap], coeffs: &[i64]) -> ChainMap {
    let c = &maps[0].source;
    let d = &maps[0].target;
    let mut comps: BTreeMap<i64, Blocks> = BTreeMap::new();
    for (m, &k) in maps.iter().zip(coeffs) {
        if k == 0 {
            continue;
        }
        for (&i, blocks) in &m.components {
            let acc = comps.entry(i).or_insert_with(|| zero_blocks(d.terms(i), c.terms(i)));
            for (b, row) in blocks.iter().enumerate() {
                for (a, x) in row.iter().enumerate() {
                    acc[b][a] = acc[b][a].add(&x.scale_q(&Q::from_int(k)));
                }
            }
        }
    }
    ChainMap::new(c.clone(), d.clone(), comps)
}

fn is_levelwise_iso(f: &ChainMap) -> bool {
    f.source.levels.keys().all(|&i| {
        let blocks = f.component(i);
        let src = f.source.terms(i);
        let tgt = f.target.terms(i);
        let rows: usize = tgt.iter().map(|t| t.rank()).sum();
        let cols: usize = src.iter().map(|t| t.rank()).sum();
        if rows != cols {
            return false;
        }
        let mut full = PolyMatrix::zeros(rows, cols);
        let mut r0 = 0;
        for (b, tb) in tgt.iter().enumerate() {
            let mut c0 = 0;
            for (a, ta) in src.iter().enumerate() {
                full.put_block(r0, c0, &blocks[b][a]);
                c0 += ta.rank();
            }
            r0 += tb.rank();
        }
        full.constant_part().rank() == rows
    })
}

/// A homotopy equivalence `C → D`, if one is found. Both complexes are
/// minimized first; between minimal complexes an equivalence is an
/// isomorphism, so a generic chain map is tried and confirmed by a
/// contractible cone.
pub fn find_equivalence(c: &BimoduleChainComplex, d: &BimoduleChainComplex) -> Option<ChainMap> {
    if c.n != d.n {
        return None;
    }
    let (c, d) = (gaussian_eliminate(c), gaussian_eliminate(d));
    if c.signature() != d.signature() {
        return None;
    }
    if c.is_zero() {
        return Some(ChainMap::zero(&c, &d));
    }
    search_chain_maps(&c, &d, |f| is_levelwise_iso(f) && cone(f).map(|k| gaussian_eliminate(&k).is_zero()).unwrap_or(false))
}

/// First degree-0 chain map `C → D` accepted by `accept`, trying the solver's
/// basis, then their sum, then seeded random combinations.
pub fn search_chain_maps(
    c: &BimoduleChainComplex,
    d: &BimoduleChainComplex,
    mut accept: impl FnMut(&ChainMap) -> bool,
) -> Option<ChainMap> {
    let basis = chain_maps(c, d);
    if basis.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    let mut candidates: Vec<Vec<i64>> = (0..basis.len())
        .map(|k| (0..basis.len()).map(|j| i64::from(j == k)).collect())
        .collect();
    candidates.push(vec![1; basis.len()]);
    candidates.extend((0..24).map(|_| (0..basis.len()).map(|_| rng.gen_range(-5..=5)).collect()));
    candidates.into_iter().map(|coeffs| combine(&basis, &coeffs)).find(|f| accept(f))
}

pub fn complexes_equivalent(c: &BimoduleChainComplex, d: &BimoduleChainComplex) -> bool {
    find_equivalence(c, d).is_some()
}
