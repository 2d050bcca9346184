//! Hochschild cohomology of graded bimodules through the Koszul complex of
//! `A_p = (left x_p) - (right x_p)`, computed one internal degree at a time,
//! and the triply graded homology of braid closures.
//!
//! `HH^k` in internal degree `j` is the cohomology of `Λ^k ⊗ M_{j+2k}`: each
//! Koszul step carries an internal shift of `-2`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::braid::{BraidWord, Permutation};
use crate::complex::{minimal_rouquier_complex, BimoduleChainComplex, Blocks, Term};
use crate::decompose::canonical;
use crate::error::Result;
use crate::hecke::{braid_to_hecke, trace_with, Normalization};
use crate::linalg::{collect_sparse, nullspace, rank, Echelon, SparseVec};
use crate::poly::{monomials_of_degree, Mono, Poly, PolyMatrix};
use crate::rational::Q;
use crate::soergel::{hom_space, GradedBimodule};

/// Which commuting operators build the Koszul complex: one per coordinate
/// `x_p`, or one per simple root `x_p - x_{p+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KoszulFrame {
    Coordinates,
    Roots,
}

impl KoszulFrame {
    /// The linear forms defining the operators.
    pub fn forms(self, n: usize) -> Vec<Poly> {
        match self {
            KoszulFrame::Coordinates => (0..n).map(Poly::var).collect(),
            KoszulFrame::Roots => (0..n.saturating_sub(1)).map(|p| &Poly::var(p) - &Poly::var(p + 1)).collect(),
        }
    }
}

/// `A_p = (left multiplication by ℓ_p) - (right action of ℓ_p)` on a free bimodule.
#[derive(Clone, Debug)]
pub struct HHOperatorSet {
    pub module: GradedBimodule,
    pub operators: Vec<PolyMatrix>,
}

impl HHOperatorSet {
    pub fn new(module: &GradedBimodule, frame: KoszulFrame) -> Self {
        assert!(module.is_free(), "Koszul operators need a free bimodule");
        let r = module.rank();
        let operators = frame
            .forms(module.nvars())
            .iter()
            .map(|form| {
                let right = form.terms().iter().fold(PolyMatrix::zeros(r, r), |acc, (m, c)| {
                    let p = (0..module.nvars()).find(|&p| m.0[p] == 1).expect("linear form");
                    acc.add(&module.right_action(p).scale_q(c))
                });
                PolyMatrix::scalar(r, form).sub(&right)
            })
            .collect();
        HHOperatorSet { module: module.clone(), operators }
    }

    pub fn commute(&self) -> bool {
        self.operators.iter().all(|a| self.operators.iter().all(|b| a.mul(b) == b.mul(a)))
    }
}

/// Basis `x^α · e_b` of the degree-`e` piece of a free bimodule.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub basis: Vec<(usize, Mono)>,
    index: HashMap<(usize, Mono), usize>,
}

impl GradedPiece {
    pub fn new(module: &GradedBimodule, e: i64) -> Self {
        let mut basis = Vec::new();
        for (b, &deg) in module.degrees().iter().enumerate() {
            let rest = e - deg;
            if rest >= 0 && rest % 2 == 0 {
                for m in monomials_of_degree(module.nvars(), (rest / 2) as u32) {
                    basis.push((b, m));
                }
            }
        }
        let index = basis.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        GradedPiece { basis, index }
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn index_of(&self, b: usize, m: &Mono) -> usize {
        self.index[&(b, *m)]
    }
}

/// Image of `x^α e_b` under a left-linear map given by a matrix `F`: `x^α · F[:, b]`.
fn apply_to_basis(f: &PolyMatrix, b: usize, alpha: &Mono, target: &GradedPiece, offset: usize, out: &mut Vec<(usize, Q)>, sign: &Q) {
    for r in 0..f.rows {
        for (m, c) in f.get(r, b).terms() {
            out.push((offset + target.index_of(r, &alpha.mul(m)), sign * c));
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for p in start..n {
            cur.push(p);
            rec(p + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The Koszul cochain space `Λ^k ⊗ M_{j+2k}` of a direct sum of modules.
struct Cochains {
    subsets: Vec<Vec<usize>>,
    subset_index: HashMap<Vec<usize>, usize>,
    pieces: Vec<GradedPiece>,
    offsets: Vec<usize>,
    block: usize,
}

impl Cochains {
    fn new(ops: &[HHOperatorSet], m: usize, k: usize, j: i64) -> Self {
        let subsets = if k <= m { subsets(m, k) } else { Vec::new() };
        let subset_index = subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let pieces: Vec<GradedPiece> = ops.iter().map(|o| GradedPiece::new(&o.module, j + 2 * k as i64)).collect();
        let mut offsets = Vec::new();
        let mut acc = 0;
        for p in &pieces {
            offsets.push(acc);
            acc += p.len();
        }
        Cochains { subsets, subset_index, pieces, offsets, block: acc }
    }

    fn dim(&self) -> usize {
        self.subsets.len() * self.block
    }

    fn position(&self, s: usize, term: usize, local: usize) -> usize {
        s * self.block + self.offsets[term] + local
    }
}

/// Columns of the Koszul differential `C^k_j → C^{k+1}_j` (one sparse image per basis vector).
fn koszul_images(ops: &[HHOperatorSet], src: &Cochains, tgt: &Cochains) -> Vec<SparseVec> {
    let mut cols = Vec::with_capacity(src.dim());
    for set in &src.subsets {
        for (t, piece) in src.pieces.iter().enumerate() {
            for (b, alpha) in &piece.basis {
                let mut out = Vec::new();
                for (p, op) in ops[t].operators.iter().enumerate() {
                    if set.contains(&p) {
                        continue;
                    }
                    let before = set.iter().filter(|&&x| x < p).count();
                    let sign = if before % 2 == 0 { Q::from_int(1) } else { Q::from_int(-1) };
                    let mut bigger = set.clone();
                    bigger.insert(before, p);
                    let ts = tgt.subset_index[&bigger];
                    apply_to_basis(op, *b, alpha, &tgt.pieces[t], tgt.position(ts, t, 0), &mut out, &sign);
                }
                cols.push(collect_sparse(out));
            }
        }
    }
    cols
}

fn transpose(cols: &[SparseVec]) -> Vec<SparseVec> {
    let mut rows: BTreeMap<usize, Vec<(usize, Q)>> = BTreeMap::new();
    for (c, col) in cols.iter().enumerate() {
        for (r, v) in col {
            rows.entry(*r).or_default().push((c, v.clone()));
        }
    }
    rows.into_values().collect()
}

/// Applies a sparse combination of source basis vectors to column images.
fn image_of(v: &SparseVec, cols: &[SparseVec]) -> SparseVec {
    collect_sparse(v.iter().flat_map(|(c, q)| cols[*c].iter().map(move |(r, x)| (*r, q * x))))
}

/// `dim HH^k(M)_j` for `k = 0..=m` (`m` operators) and `j ≤ max_degree`.
pub fn hochschild_dims_in(m: &GradedBimodule, frame: KoszulFrame, max_degree: i64) -> BTreeMap<(usize, i64), usize> {
    let ops = [HHOperatorSet::new(m, frame)];
    let nops = ops[0].operators.len();
    let lo = m.degrees().iter().min().copied().unwrap_or(0) - 2 * nops as i64;
    let cells: Vec<(usize, i64)> = (0..=nops).flat_map(|k| (lo..=max_degree).map(move |j| (k, j))).collect();
    cells
        .into_par_iter()
        .filter_map(|(k, j)| {
            let here = Cochains::new(&ops, nops, k, j);
            if here.dim() == 0 {
                return None;
            }
            let out_rank = if k < nops {
                let next = Cochains::new(&ops, nops, k + 1, j);
                rank(transpose(&koszul_images(&ops, &here, &next)))
            } else {
                0
            };
            let in_rank = if k > 0 {
                let prev = Cochains::new(&ops, nops, k - 1, j);
                rank(koszul_images(&ops, &prev, &here))
            } else {
                0
            };
            let d = here.dim() - out_rank - in_rank;
            (d > 0).then_some(((k, j), d))
        })
        .collect()
}

/// Hochschild cohomology dimensions in the coordinate frame.
pub fn hochschild_dims(m: &GradedBimodule, max_degree: i64) -> BTreeMap<(usize, i64), usize> {
    hochschild_dims_in(m, KoszulFrame::Coordinates, max_degree)
}

/// `K^• ⊗_{R⊗R} B_{w0}`: `Λ^k` copies of `B_{w0}(-2k)` in degree `-k`, with
/// contraction differential `e_S ⊗ b ↦ Σ_{p∈S} ± e_{S∖p} ⊗ A_p b`.
pub fn koszul_soergel_complex(n: usize, frame: KoszulFrame) -> Result<BimoduleChainComplex> {
    let w0 = Permutation::longest(n);
    let ops = HHOperatorSet::new(&canonical(&w0), frame);
    let m = ops.operators.len();
    let r = canonical(&w0).rank();
    let mut levels = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for k in 0..=m {
        let sets = subsets(m, k);
        levels.insert(-(k as i64), vec![Term::new(w0.clone(), -2 * k as i64); sets.len()]);
        if k == 0 {
            continue;
        }
        let smaller = subsets(m, k - 1);
        let index: HashMap<Vec<usize>, usize> = smaller.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut blocks: Blocks = vec![vec![PolyMatrix::zeros(r, r); sets.len()]; smaller.len()];
        for (a, set) in sets.iter().enumerate() {
            for (pos, &p) in set.iter().enumerate() {
                let mut rest = set.clone();
                rest.remove(pos);
                let sign = if pos % 2 == 0 { Q::from_int(1) } else { Q::from_int(-1) };
                blocks[index[&rest]][a] = ops.operators[p].scale_q(&sign);
            }
        }
        diffs.insert(-(k as i64), blocks);
    }
    BimoduleChainComplex::new(n, levels, diffs)
}

/// `dim H^k(Hom(K_S, M))_d` for internal degrees `d ≤ max_degree`, using the
/// bimodule-map solver on each term.
pub fn koszul_hom_dims(m: &GradedBimodule, frame: KoszulFrame, max_degree: i64) -> Result<BTreeMap<(usize, i64), usize>> {
    let n = m.nvars();
    let ks = koszul_soergel_complex(n, frame)?;
    let nops = frame.forms(n).len();
    let w0 = canonical(&Permutation::longest(n));
    let lo = m.degrees().iter().min().copied().unwrap_or(0) - w0.degrees().iter().max().copied().unwrap_or(0) - 2 * nops as i64;
    // Hom(B_{w0}(-2k), M)_d = Hom(B_{w0}, M)_{d+2k}
    let needed: Vec<i64> = (lo..=max_degree + 2 * nops as i64).collect();
    let homs: HashMap<i64, Vec<PolyMatrix>> =
        needed.par_iter().map(|&e| (e, hom_space(&w0, m, e).into_iter().map(|f| f.matrix).collect())).collect();
    let flat = |mat: &PolyMatrix, slot: usize, index: &mut HashMap<(usize, usize, Mono), usize>| -> SparseVec {
        let mut out = Vec::new();
        for (e, p) in mat.data.iter().enumerate() {
            for (mono, c) in p.terms() {
                let next = index.len();
                out.push((*index.entry((slot, e, *mono)).or_insert(next), c.clone()));
            }
        }
        collect_sparse(out)
    };
    let cells: Vec<(usize, i64)> = (0..=nops).flat_map(|k| (lo..=max_degree).map(move |d| (k, d))).collect();
    // rank of precomposition Hom^k_d → Hom^{k+1}_d
    let rank_out = |k: usize, d: i64| -> usize {
        if k >= nops {
            return 0;
        }
        let src = ks.terms(-(k as i64));
        let dk = ks.differential(-(k as i64 + 1));
        let basis = &homs[&(d + 2 * k as i64)];
        let mut index = HashMap::new();
        let mut vecs = Vec::new();
        for a in 0..src.len() {
            for phi in basis {
                // φ placed on summand a; (φ ∘ d)_{a'} = φ · d[a][a']
                let mut v = Vec::new();
                for (a2, blk) in dk[a].iter().enumerate() {
                    if !blk.is_zero() {
                        v.extend(flat(&phi.mul(blk), a2, &mut index));
                    }
                }
                vecs.push(collect_sparse(v));
            }
        }
        rank(vecs)
    };
    let dims: Vec<((usize, i64), usize)> = cells
        .par_iter()
        .filter_map(|&(k, d)| {
            let here = ks.terms(-(k as i64)).len() * homs[&(d + 2 * k as i64)].len();
            if here == 0 {
                return None;
            }
            let out = rank_out(k, d);
            let inc = if k > 0 { rank_out(k - 1, d) } else { 0 };
            let h = here - out - inc;
            (h > 0).then_some(((k, d), h))
        })
        .collect();
    Ok(dims.into_iter().collect())
}

/// Compares `HH^k(M)_{d - l(w0)}` with `H^k(Hom(K_S, M))_d` for `d - l(w0) ≤ max_degree`.
pub fn hh_agreement_check(m: &GradedBimodule, max_degree: i64) -> Result<bool> {
    let l = Permutation::longest(m.nvars()).length() as i64;
    let hh = hochschild_dims(m, max_degree);
    let hom = koszul_hom_dims(m, KoszulFrame::Coordinates, max_degree + l)?;
    let shifted: BTreeMap<(usize, i64), usize> = hom.into_iter().map(|((k, d), v)| ((k, d - l), v)).collect();
    Ok(hh == shifted)
}

/// Entries `dim HHH^{k,i,j}` for internal degrees `j ≤ truncation`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "TableRepr", try_from = "TableRepr")]
pub struct TriGradedTable {
    pub truncation: i64,
    pub entries: BTreeMap<(usize, i64, i64), usize>,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    truncation: i64,
    entries: Vec<EntryRepr>,
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    k: usize,
    i: i64,
    j: i64,
    dim: usize,
}

impl From<TriGradedTable> for TableRepr {
    fn from(t: TriGradedTable) -> Self {
        TableRepr {
            truncation: t.truncation,
            entries: t.entries.into_iter().map(|((k, i, j), dim)| EntryRepr { k, i, j, dim }).collect(),
        }
    }
}

impl TryFrom<TableRepr> for TriGradedTable {
    type Error = String;
    fn try_from(r: TableRepr) -> std::result::Result<Self, String> {
        let mut entries = BTreeMap::new();
        for e in r.entries {
            if e.dim == 0 {
                return Err(format!("zero entry at ({}, {}, {})", e.k, e.i, e.j));
            }
            if entries.insert((e.k, e.i, e.j), e.dim).is_some() {
                return Err(format!("duplicate entry at ({}, {}, {})", e.k, e.i, e.j));
            }
        }
        Ok(TriGradedTable { truncation: r.truncation, entries })
    }
}

impl TriGradedTable {
    /// Shifts every entry by `(dk, di, dj)`.
    pub fn shifted(&self, dk: i64, di: i64, dj: i64) -> TriGradedTable {
        TriGradedTable {
            truncation: self.truncation + dj,
            entries: self.entries.iter().map(|(&(k, i, j), &v)| (((k as i64 + dk) as usize, i + di, j + dj), v)).collect(),
        }
    }

    /// Entries with `j ≤ bound`.
    pub fn below(&self, bound: i64) -> BTreeMap<(usize, i64, i64), usize> {
        self.entries.iter().filter(|(&(_, _, j), _)| j <= bound).map(|(&k, &v)| (k, v)).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,i,j,dim\n");
        for ((k, i, j), d) in &self.entries {
            s.push_str(&format!("{k},{i},{j},{d}\n"));
        }
        s
    }
}

/// Triply graded homology of a complex: `HH` termwise, then cohomology in the
/// homological direction, for `j ≤ max_degree`.
pub fn hhh_of_complex(c: &BimoduleChainComplex, max_degree: i64) -> TriGradedTable {
    let n = c.n();
    let levels: Vec<i64> = c.levels().keys().copied().collect();
    let ops: HashMap<i64, Vec<HHOperatorSet>> = levels
        .iter()
        .map(|&i| (i, c.terms(i).iter().map(|t| HHOperatorSet::new(&t.module(), KoszulFrame::Coordinates)).collect()))
        .collect();
    let lo = c.levels().values().flatten().map(|t| t.module().degrees().iter().min().copied().unwrap_or(0)).min().unwrap_or(0)
        - 2 * n as i64;
    let cells: Vec<(usize, i64)> = (0..=n).flat_map(|k| (lo..=max_degree).map(move |j| (k, j))).collect();
    let entries: Vec<((usize, i64, i64), usize)> = cells
        .into_par_iter()
        .flat_map_iter(|(k, j)| hhh_cell(c, &ops, n, k, j).into_iter().map(move |(i, d)| ((k, i, j), d)))
        .collect();
    TriGradedTable { truncation: max_degree, entries: entries.into_iter().collect() }
}

/// Per level: cycles `Z^i`, boundaries `B^i` of the Koszul direction, and the
/// homological differential as column images.
fn hhh_cell(c: &BimoduleChainComplex, ops: &HashMap<i64, Vec<HHOperatorSet>>, n: usize, k: usize, j: i64) -> Vec<(i64, usize)> {
    struct Level {
        cycles: Vec<SparseVec>,
        boundaries: Vec<SparseVec>,
    }
    let mut data: BTreeMap<i64, Level> = BTreeMap::new();
    let mut spaces: BTreeMap<i64, Cochains> = BTreeMap::new();
    for (&i, o) in ops {
        let here = Cochains::new(o, n, k, j);
        if here.dim() == 0 {
            continue;
        }
        let cycles = if k < n {
            let next = Cochains::new(o, n, k + 1, j);
            nullspace(transpose(&koszul_images(o, &here, &next)), here.dim())
        } else {
            (0..here.dim()).map(|x| vec![(x, Q::from_int(1))]).collect()
        };
        let boundaries = if k > 0 {
            let prev = Cochains::new(o, n, k - 1, j);
            let mut e = Echelon::new();
            koszul_images(o, &prev, &here).into_iter().filter(|v| e.insert(v.clone())).collect()
        } else {
            Vec::new()
        };
        data.insert(i, Level { cycles, boundaries });
        spaces.insert(i, here);
    }
    // homological differential id_Λ ⊗ d between cochain spaces
    let hom_images = |i: i64| -> Option<Vec<SparseVec>> {
        let (src, tgt) = (spaces.get(&i)?, spaces.get(&(i + 1))?);
        let d = c.differential(i);
        let mut cols = Vec::with_capacity(src.dim());
        for s in 0..src.subsets.len() {
            for (a, piece) in src.pieces.iter().enumerate() {
                for (bvec, alpha) in &piece.basis {
                    let mut out = Vec::new();
                    for (b, row) in d.iter().enumerate() {
                        if !row[a].is_zero() {
                            apply_to_basis(&row[a], *bvec, alpha, &tgt.pieces[b], tgt.position(s, b, 0), &mut out, &Q::from_int(1));
                        }
                    }
                    cols.push(collect_sparse(out));
                }
            }
        }
        Some(cols)
    };
    let mut images_of_cycles: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
    for (&i, lv) in &data {
        if let Some(cols) = hom_images(i) {
            images_of_cycles.insert(i, lv.cycles.iter().map(|z| image_of(z, &cols)).collect());
        }
    }
    let mut out = Vec::new();
    for (&i, lv) in &data {
        let z = lv.cycles.len();
        if z == 0 {
            continue;
        }
        // {z : dz ∈ B^{i+1}} has dim Z - (rank(B^{i+1} ∪ dZ^i) - dim B^{i+1})
        let kernel = match (images_of_cycles.get(&i), data.get(&(i + 1))) {
            (Some(dz), Some(next)) => {
                let both = rank(next.boundaries.iter().cloned().chain(dz.iter().cloned()));
                z - (both - next.boundaries.len())
            }
            _ => z,
        };
        let image = match images_of_cycles.get(&(i - 1)) {
            Some(dz) => rank(lv.boundaries.iter().cloned().chain(dz.iter().cloned())),
            None => lv.boundaries.len(),
        };
        if kernel > image {
            out.push((i, kernel - image));
        }
    }
    out
}

pub fn hhh(b: &BraidWord, max_degree: i64) -> Result<TriGradedTable> {
    Ok(hhh_of_complex(&minimal_rouquier_complex(b)?, max_degree))
}

/// Global normalization of the Euler bridge: a sign and a power of `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerNormalization {
    pub sign: i64,
    pub v_power: i64,
}

/// Calibrated on the unknot (one strand, empty word).
pub const EULER_NORMALIZATION: EulerNormalization = EulerNormalization { sign: 1, v_power: 0 };

/// `Σ (-1)^i dim HHH^{k,i,j} a^k v^{j+2k}`, times the normalization, keyed by
/// `(a power, v power)`; complete for `v` powers up to the truncation.
pub fn euler_bridge_with(t: &TriGradedTable, norm: EulerNormalization) -> BTreeMap<(i64, i64), Q> {
    let mut acc: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    for (&(k, i, j), &d) in &t.entries {
        let e = j + 2 * k as i64 + norm.v_power;
        if e > t.truncation {
            continue;
        }
        let s = if i.rem_euclid(2) == 0 { 1 } else { -1 } * norm.sign;
        *acc.entry((k as i64, e)).or_default() += s * d as i64;
    }
    acc.into_iter().filter(|(_, v)| *v != 0).map(|(k, v)| (k, Q::from_int(v))).collect()
}

pub fn euler_bridge(t: &TriGradedTable) -> BTreeMap<(i64, i64), Q> {
    euler_bridge_with(t, EULER_NORMALIZATION)
}

/// The unreduced trace of the braid as a `v`-series up to `order`.
pub fn trace_series(b: &BraidWord, order: i64) -> BTreeMap<(i64, i64), Q> {
    trace_with(&braid_to_hecke(b), Normalization::Unreduced).series(order)
}

/// Shift `(k, i, j)` relating `HHH(β)` to `HHH(β σ_n)`.
pub type TableShift = (i64, i64, i64);

/// Frozen from the unknot pair (empty word on one strand vs `σ_1` on two);
/// see [`calibrate_stabilization_shift`].
pub const STABILIZATION_SHIFT: TableShift = (0, 1, -1);

/// Whether `shifted(a)` and `b` agree wherever both are complete.
pub fn tables_agree_up_to(a: &TriGradedTable, b: &TriGradedTable, shift: TableShift) -> bool {
    let (dk, di, dj) = shift;
    let moved = a.shifted(dk, di, dj);
    let window = a.truncation.min(b.truncation) + dj.min(0);
    moved.below(window) == b.below(window)
}

/// Searches the small shift box for the unique shift matching the unknot
/// and its stabilization.
pub fn calibrate_stabilization_shift(max_degree: i64) -> Result<Option<TableShift>> {
    let a = hhh(&BraidWord::identity(1), max_degree)?;
    let b = hhh(&BraidWord::new(2, vec![1])?, max_degree)?;
    let mut found = Vec::new();
    for dk in -1..=1 {
        for di in -2..=2 {
            for dj in -4..=4 {
                if tables_agree_up_to(&a, &b, (dk, di, dj)) {
                    found.push((dk, di, dj));
                }
            }
        }
    }
    Ok(if found.len() == 1 { found.pop() } else { None })
}
