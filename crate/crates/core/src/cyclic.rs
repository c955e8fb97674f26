//! Cyclic codes `C(n', g)` held as a length and a generator polynomial.
//!
//! Generator rows are produced on demand, and ranks of column restrictions are
//! computed by streaming the shift rows through a banded elimination, so the
//! `k' x n'` matrix is never stored.

use thiserror::Error;

use crate::codes::{CodeError, CoordSet, LinearCode};
use crate::gf::{Elem, FieldSpec};
use crate::poly::{Poly, PolyError};

/// Largest coordinate set (or elimination band) the streaming rank accepts.
pub const RANK_GUARD: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CyclicError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("generator polynomial is not monic")]
    NotMonic,
    #[error("generator polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("length {nprime} is divisible by the characteristic {p}")]
    LengthDivisibleByP { nprime: usize, p: u32 },
    #[error("generator does not divide X^{nprime} - 1")]
    NotDivisor { nprime: usize },
    #[error("deg g = {deg} leaves no dimension at length {nprime}")]
    NoDimension { nprime: usize, deg: usize },
    #[error("row index {index} outside 0..{kprime}")]
    RowIndex { index: usize, kprime: usize },
    #[error("word has length {got}, expected {expected}")]
    WordLength { got: usize, expected: usize },
    #[error("working set of {size} exceeds the streaming guard {limit}")]
    Guard { size: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicCode {
    nprime: usize,
    g: Poly,
    kprime: usize,
}

impl CyclicCode {
    pub fn new(nprime: usize, g: Poly) -> Result<Self, CyclicError> {
        if !g.is_monic() {
            return Err(CyclicError::NotMonic);
        }
        if g.coeff(0) == 0 {
            return Err(CyclicError::ZeroConstantTerm);
        }
        let deg = g.degree().expect("monic");
        if deg >= nprime {
            return Err(CyclicError::NoDimension { nprime, deg });
        }
        let p = g.field().p();
        if nprime % p as usize == 0 {
            return Err(CyclicError::LengthDivisibleByP { nprime, p });
        }
        if deg > 0 && !g.x_pow_mod(nprime as u64)?.is_one() {
            return Err(CyclicError::NotDivisor { nprime });
        }
        Ok(CyclicCode { nprime, kprime: nprime - deg, g })
    }

    pub fn field(&self) -> &FieldSpec {
        self.g.field()
    }

    pub fn nprime(&self) -> usize {
        self.nprime
    }

    pub fn kprime(&self) -> usize {
        self.kprime
    }

    pub fn generator(&self) -> &Poly {
        &self.g
    }

    pub fn deg(&self) -> usize {
        self.nprime - self.kprime
    }

    /// Entry of shift row `i` at 0-based column `col`.
    #[inline]
    pub fn entry(&self, i: usize, col: usize) -> Elem {
        if col < i {
            0
        } else {
            self.g.coeff(col - i)
        }
    }

    /// The `i`-th generator row, `X^i g(X)`, as a length-`n'` vector.
    pub fn row(&self, i: usize) -> Result<Vec<Elem>, CyclicError> {
        if i >= self.kprime {
            return Err(CyclicError::RowIndex { index: i, kprime: self.kprime });
        }
        let mut out = vec![0; self.nprime];
        out[i..i + self.g.coeffs().len()].copy_from_slice(self.g.coeffs());
        Ok(out)
    }

    /// Lazily yields all `k'` generator rows.
    pub fn rows(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        (0..self.kprime).map(|i| self.row(i).expect("in range"))
    }

    /// True iff `g` divides the word polynomial.
    pub fn contains(&self, word: &[Elem]) -> Result<bool, CyclicError> {
        if word.len() != self.nprime {
            return Err(CyclicError::WordLength { got: word.len(), expected: self.nprime });
        }
        let w = Poly::new(self.field(), word.to_vec())?;
        Ok(w.rem(&self.g).map(|r| r.is_zero()).unwrap_or(true))
    }

    /// Builds the full code as a [`LinearCode`].
    pub fn materialize(&self) -> Result<LinearCode, CyclicError> {
        let field = self.field();
        if field.is_binary() {
            let words = self.nprime.div_ceil(64);
            let rows = (0..self.kprime)
                .map(|i| {
                    let mut w = vec![0u64; words];
                    for (j, &c) in self.g.coeffs().iter().enumerate() {
                        if c != 0 {
                            w[(i + j) / 64] |= 1 << ((i + j) % 64);
                        }
                    }
                    w
                })
                .collect();
            Ok(LinearCode::from_packed(field, self.nprime, rows)?)
        } else {
            Ok(LinearCode::new(field, self.rows().collect())?)
        }
    }

    /// Rank of the generator matrix restricted to the columns in `l`.
    pub fn restricted_rank(&self, l: &CoordSet) -> Result<usize, CyclicError> {
        if l.bound() != self.nprime {
            return Err(CodeError::BoundMismatch { expected: self.nprime, got: l.bound() }.into());
        }
        if l.len() > RANK_GUARD {
            return Err(CyclicError::Guard { size: l.len(), limit: RANK_GUARD });
        }
        let rows: Vec<usize> = (0..self.kprime).collect();
        self.restricted_rank_rows(&rows, &l.zero_based())
    }

    /// Rank of the chosen shift rows restricted to the chosen 0-based columns.
    /// Both lists must be strictly increasing. The guard applies to the
    /// widest band of columns a single row can touch.
    pub fn restricted_rank_rows(&self, rows: &[usize], cols: &[usize]) -> Result<usize, CyclicError> {
        if let Some(&i) = rows.iter().find(|&&i| i >= self.kprime) {
            return Err(CyclicError::RowIndex { index: i, kprime: self.kprime });
        }
        assert!(rows.windows(2).all(|w| w[0] < w[1]), "rows must be increasing");
        assert!(cols.windows(2).all(|w| w[0] < w[1]), "columns must be increasing");
        let band = Band { g: self.g.coeffs(), cols };
        let width = rows.iter().map(|&i| band.window(i).len()).max().unwrap_or(0);
        if width > RANK_GUARD {
            return Err(CyclicError::Guard { size: width, limit: RANK_GUARD });
        }
        let limit = rows.len().min(cols.len());
        Ok(if self.field().is_binary() {
            band.rank_packed(rows, limit)
        } else {
            band.rank_dense(self.field(), rows, limit)
        })
    }
}

/// Shift rows of `g` seen through a sorted column list.
struct Band<'a> {
    g: &'a [Elem],
    cols: &'a [usize],
}

impl Band<'_> {
    /// Indices into `cols` that row `i` can touch.
    fn window(&self, i: usize) -> std::ops::Range<usize> {
        let lo = self.cols.partition_point(|&c| c < i);
        let hi = self.cols.partition_point(|&c| c < i + self.g.len());
        lo..hi
    }

    // Rows arrive in increasing order, so a basis vector's support never
    // extends past the window of a later row, and leads left of the current
    // window can be dropped.

    fn rank_packed(&self, rows: &[usize], limit: usize) -> usize {
        let mut basis: Vec<Option<Vec<u64>>> = vec![None; self.cols.len()];
        let mut freed = 0;
        let mut rank = 0;
        for &i in rows {
            if rank == limit {
                break;
            }
            let win = self.window(i);
            if win.is_empty() {
                continue;
            }
            for slot in &mut basis[freed..win.start] {
                *slot = None;
            }
            freed = freed.max(win.start);
            let w0 = win.start / 64;
            let mut v = vec![0u64; (win.end - 1) / 64 - w0 + 1];
            for idx in win {
                if self.g[self.cols[idx] - i] & 1 == 1 {
                    v[idx / 64 - w0] |= 1 << (idx % 64);
                }
            }
            let mut word = 0;
            loop {
                while word < v.len() && v[word] == 0 {
                    word += 1;
                }
                if word == v.len() {
                    break;
                }
                let lead = (w0 + word) * 64 + v[word].trailing_zeros() as usize;
                match &basis[lead] {
                    Some(b) => {
                        for (x, y) in v[word..].iter_mut().zip(b) {
                            *x ^= y;
                        }
                    }
                    None => {
                        basis[lead] = Some(v.split_off(word));
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }

    fn rank_dense(&self, field: &FieldSpec, rows: &[usize], limit: usize) -> usize {
        let mut basis: Vec<Option<Vec<Elem>>> = vec![None; self.cols.len()];
        let mut freed = 0;
        let mut rank = 0;
        for &i in rows {
            if rank == limit {
                break;
            }
            let win = self.window(i);
            if win.is_empty() {
                continue;
            }
            for slot in &mut basis[freed..win.start] {
                *slot = None;
            }
            freed = freed.max(win.start);
            let lo = win.start;
            let mut v: Vec<Elem> = win.map(|idx| self.g[self.cols[idx] - i]).collect();
            let mut at = 0;
            loop {
                while at < v.len() && v[at] == 0 {
                    at += 1;
                }
                if at == v.len() {
                    break;
                }
                match &basis[lo + at] {
                    Some(b) => {
                        let c = v[at];
                        for (x, &y) in v[at..].iter_mut().zip(b) {
                            if y != 0 {
                                *x = field.sub(*x, field.mul(c, y));
                            }
                        }
                    }
                    None => {
                        let inv = field.inv(v[at]).expect("nonzero lead");
                        let b = v[at..].iter().map(|&x| field.mul(x, inv)).collect();
                        basis[lo + at] = Some(b);
                        rank += 1;
                        break;
                    }
                }
            }
        }
        rank
    }
}
