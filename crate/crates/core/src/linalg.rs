//! Sparse exact linear algebra over `Q`.
//!
//! Rows are sorted `(column, value)` lists without explicit zeros. Elimination
//! pivots by column position only.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rational::Q;

pub type SparseVec = Vec<(usize, Q)>;

/// `a - factor * b`.
pub fn axpy_neg(a: &SparseVec, factor: &Q, b: &SparseVec) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, -(factor * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - &(factor * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale(a: &SparseVec, factor: &Q) -> SparseVec {
    if factor.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(c, v)| (*c, v * factor)).collect()
}

/// Builds a sorted sparse vector from unordered entries, summing duplicates.
pub fn collect_sparse(entries: impl IntoIterator<Item = (usize, Q)>) -> SparseVec {
    let mut map: BTreeMap<usize, Q> = BTreeMap::new();
    for (c, v) in entries {
        if v.is_zero() {
            continue;
        }
        let slot = map.entry(c).or_default();
        *slot += &v;
    }
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Row echelon form maintained incrementally, keyed by leading column.
#[derive(Default, Clone, Debug)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots (leading entries only).
    pub fn reduce(&self, mut row: SparseVec) -> SparseVec {
        while let Some((lead, val)) = row.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => row = axpy_neg(&row, &val, p),
                None => break,
            }
        }
        row
    }

    /// Inserts a row; returns true if it increased the rank.
    pub fn insert(&mut self, row: SparseVec) -> bool {
        let row = self.reduce(row);
        match row.first() {
            None => false,
            Some((lead, val)) => {
                let lead = *lead;
                let inv = val.inv();
                self.pivots.insert(lead, scale(&row, &inv));
                true
            }
        }
    }

    pub fn contains(&self, row: SparseVec) -> bool {
        self.reduce(row).is_empty()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Converts to reduced row echelon form.
    pub fn into_reduced(mut self) -> BTreeMap<usize, SparseVec> {
        let leads: Vec<usize> = self.pivots.keys().rev().copied().collect();
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for lead in leads {
            let mut row = self.pivots.remove(&lead).unwrap();
            loop {
                let hit = row.iter().skip(1).find(|(c, _)| done.contains_key(c)).cloned();
                match hit {
                    Some((c, v)) => row = axpy_neg(&row, &v, &done[&c]),
                    None => break,
                }
            }
            done.insert(lead, row);
        }
        done
    }
}

pub fn rank(rows: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// Basis of `{x : A x = 0}` where `A` has the given rows and `ncols` columns.
pub fn nullspace(rows: impl IntoIterator<Item = SparseVec>, ncols: usize) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    let rref = e.into_reduced();
    let mut out = Vec::new();
    for free in 0..ncols {
        if rref.contains_key(&free) {
            continue;
        }
        let mut v = vec![(free, Q::from_int(1))];
        for (lead, row) in &rref {
            if let Ok(pos) = row.binary_search_by_key(&free, |(c, _)| *c) {
                v.push((*lead, -&row[pos].1));
            }
        }
        v.sort_by_key(|(c, _)| *c);
        out.push(v);
    }
    out
}

/// One solution of `A x = b`, or `None` when inconsistent. Rows of `A` are
/// given together with their right-hand side values.
pub fn solve(rows: impl IntoIterator<Item = (SparseVec, Q)>, ncols: usize) -> Option<SparseVec> {
    let mut e = Echelon::new();
    for (mut r, b) in rows {
        if !b.is_zero() {
            r.push((ncols, b));
        }
        e.insert(r);
    }
    if e.pivots.contains_key(&ncols) {
        return None;
    }
    let rref = e.into_reduced();
    let mut x = Vec::new();
    for (lead, row) in &rref {
        if let Some((c, v)) = row.last() {
            if *c == ncols {
                x.push((*lead, v.clone()));
            }
        }
    }
    Some(x)
}

/// Dense matrix over `Q`, used for small blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Q>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Q::from_int(1);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Q {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn row_sparse(&self, r: usize) -> SparseVec {
        (0..self.cols)
            .filter_map(|c| {
                let v = self.get(r, c);
                (!v.is_zero()).then(|| (c, v.clone()))
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        rank((0..self.rows).map(|r| self.row_sparse(r)))
    }

    /// Inverse via Gauss-Jordan; `None` if singular.
    pub fn inverse(&self) -> Option<DenseMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = DenseMatrix::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for c in 0..n {
                    a.data.swap(piv * n + c, col * n + c);
                    inv.data.swap(piv * n + c, col * n + c);
                }
            }
            let f = a.get(col, col).inv();
            for c in 0..n {
                a.data[col * n + c] = &a.data[col * n + c] * &f;
                inv.data[col * n + c] = &inv.data[col * n + c] * &f;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let g = a.get(r, col).clone();
                if g.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let t = &a.data[col * n + c] * &g;
                    a.data[r * n + c] = &a.data[r * n + c] - &t;
                    let t = &inv.data[col * n + c] * &g;
                    inv.data[r * n + c] = &inv.data[r * n + c] - &t;
                }
            }
        }
        Some(inv)
    }
}
