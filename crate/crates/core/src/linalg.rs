//! Row-reduction kernels shared by the code representations.
//!
//! Two row stores implement [`RowOps`]: bit-packed rows for `F_2` and one
//! integer per symbol for every other field. All elimination routines are
//! written once against the trait.

use crate::gf::{Elem, FieldSpec};

pub(crate) trait RowOps {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn get(&self, r: usize, c: usize) -> Elem;
    fn swap_rows(&mut self, a: usize, b: usize);
    /// Scales row `r` so that its entry at `c` becomes one.
    fn normalize(&mut self, r: usize, c: usize);
    /// `row[dst] -= factor * row[src]`, touching only columns `>= from`.
    fn axpy(&mut self, dst: usize, src: usize, factor: Elem, from: usize);
    /// `a / b` for field elements.
    fn ratio(&self, a: Elem, b: Elem) -> Elem;
    fn truncate(&mut self, rows: usize);
    fn select(&self, rows: &[usize], cols: &[usize]) -> Self;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PackedRows {
    ncols: usize,
    rows: Vec<Vec<u64>>,
}

impl PackedRows {
    pub fn from_dense(ncols: usize, rows: &[Vec<Elem>]) -> Self {
        let words = ncols.div_ceil(64);
        let rows = rows
            .iter()
            .map(|r| {
                let mut w = vec![0u64; words];
                for (j, &v) in r.iter().enumerate() {
                    if v & 1 == 1 {
                        w[j / 64] |= 1 << (j % 64);
                    }
                }
                w
            })
            .collect();
        PackedRows { ncols, rows }
    }

    pub fn with_rows(ncols: usize, rows: Vec<Vec<u64>>) -> Self {
        PackedRows { ncols, rows }
    }
}

impl RowOps for PackedRows {
    fn nrows(&self) -> usize {
        self.rows.len()
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    fn get(&self, r: usize, c: usize) -> Elem {
        ((self.rows[r][c / 64] >> (c % 64)) & 1) as Elem
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    fn normalize(&mut self, _r: usize, _c: usize) {}

    fn axpy(&mut self, dst: usize, src: usize, _factor: Elem, from: usize) {
        let (d, s) = if dst < src {
            let (lo, hi) = self.rows.split_at_mut(src);
            (&mut lo[dst], &hi[0])
        } else {
            let (lo, hi) = self.rows.split_at_mut(dst);
            (&mut hi[0], &lo[src])
        };
        for (x, y) in d[from / 64..].iter_mut().zip(&s[from / 64..]) {
            *x ^= y;
        }
    }

    fn ratio(&self, a: Elem, _b: Elem) -> Elem {
        a
    }

    fn truncate(&mut self, rows: usize) {
        self.rows.truncate(rows);
    }

    fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let words = cols.len().div_ceil(64);
        let out = rows
            .iter()
            .map(|&r| {
                let mut w = vec![0u64; words];
                for (j, &c) in cols.iter().enumerate() {
                    if self.get(r, c) == 1 {
                        w[j / 64] |= 1 << (j % 64);
                    }
                }
                w
            })
            .collect();
        PackedRows { ncols: cols.len(), rows: out }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct DenseRows {
    field: FieldSpec,
    ncols: usize,
    rows: Vec<Vec<Elem>>,
}

impl DenseRows {
    pub fn new(field: &FieldSpec, ncols: usize, rows: Vec<Vec<Elem>>) -> Self {
        DenseRows { field: field.clone(), ncols, rows }
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.rows[r]
    }
}

impl RowOps for DenseRows {
    fn nrows(&self) -> usize {
        self.rows.len()
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    fn get(&self, r: usize, c: usize) -> Elem {
        self.rows[r][c]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.rows.swap(a, b);
    }

    fn normalize(&mut self, r: usize, c: usize) {
        let lead = self.rows[r][c];
        if lead != 1 {
            let inv = self.field.inv(lead).expect("pivot is nonzero");
            for x in self.rows[r].iter_mut() {
                *x = self.field.mul(*x, inv);
            }
        }
    }

    fn axpy(&mut self, dst: usize, src: usize, factor: Elem, from: usize) {
        let f = &self.field;
        let (d, s) = if dst < src {
            let (lo, hi) = self.rows.split_at_mut(src);
            (&mut lo[dst], &hi[0])
        } else {
            let (lo, hi) = self.rows.split_at_mut(dst);
            (&mut hi[0], &lo[src])
        };
        for (x, &y) in d[from..].iter_mut().zip(&s[from..]) {
            if y != 0 {
                *x = f.sub(*x, f.mul(factor, y));
            }
        }
    }

    fn ratio(&self, a: Elem, b: Elem) -> Elem {
        self.field.div(a, b).expect("pivot is nonzero")
    }

    fn truncate(&mut self, rows: usize) {
        self.rows.truncate(rows);
    }

    fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let out = rows.iter().map(|&r| cols.iter().map(|&c| self.rows[r][c]).collect()).collect();
        DenseRows { field: self.field.clone(), ncols: cols.len(), rows: out }
    }
}

/// Reduces `m` in place to reduced row-echelon form, dropping zero rows.
/// Returns the pivot columns.
///
/// Forward elimination first, then back-substitution from the last pivot up,
/// so banded inputs (shifted generator rows) stay cheap.
pub(crate) fn rref<M: RowOps>(m: &mut M) -> Vec<usize> {
    let (nrows, ncols) = (m.nrows(), m.ncols());
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(r) = (rank..nrows).find(|&r| m.get(r, col) != 0) else { continue };
        m.swap_rows(rank, r);
        m.normalize(rank, col);
        for r2 in rank + 1..nrows {
            let c = m.get(r2, col);
            if c != 0 {
                m.axpy(r2, rank, c, col);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    for (i, &col) in pivots.iter().enumerate().rev() {
        for r in 0..i {
            let c = m.get(r, col);
            if c != 0 {
                m.axpy(r, i, c, col);
            }
        }
    }
    m.truncate(rank);
    pivots
}

/// Eliminates on the given columns only and returns the rows left without a
/// pivot; those rows vanish on `cols` and span every combination that does.
pub(crate) fn vanishing_rows<M: RowOps>(m: &mut M, cols: &[usize]) -> Vec<usize> {
    let nrows = m.nrows();
    let mut used = vec![false; nrows];
    for &col in cols {
        let Some(p) = (0..nrows).find(|&r| !used[r] && m.get(r, col) != 0) else { continue };
        used[p] = true;
        let pivot = m.get(p, col);
        for r in 0..nrows {
            if used[r] {
                continue;
            }
            let c = m.get(r, col);
            if c != 0 {
                let factor = m.ratio(c, pivot);
                m.axpy(r, p, factor, 0);
            }
        }
    }
    (0..nrows).filter(|&r| !used[r]).collect()
}

/// Rank by forward elimination on a scratch copy.
pub(crate) fn rank<M: RowOps + Clone>(m: &M) -> usize {
    let mut scratch = m.clone();
    let (nrows, ncols) = (scratch.nrows(), scratch.ncols());
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(r) = (rank..nrows).find(|&r| scratch.get(r, col) != 0) else { continue };
        scratch.swap_rows(rank, r);
        let pivot = scratch.get(rank, col);
        for r2 in rank + 1..nrows {
            let c = scratch.get(r2, col);
            if c != 0 {
                let factor = scratch.ratio(c, pivot);
                scratch.axpy(r2, rank, factor, col);
            }
        }
        rank += 1;
    }
    rank
}
