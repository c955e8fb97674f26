//! Linear block codes with canonical generator matrices, and the two
//! coordinate operations: puncturing and shortening.
//!
//! A [`LinearCode`] always stores its generator matrix in reduced row-echelon
//! form, so two codes are equal exactly when their stored matrices are equal.
//! Over `F_2` rows are bit-packed.

use std::fmt;

use thiserror::Error;

use crate::gf::{Elem, FieldError, FieldSpec};
use crate::linalg::{self, DenseRows, PackedRows, RowOps};

/// Largest `q^k` the enumeration oracle will walk.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("row {row} has length {got}, expected {expected}")]
    RaggedRows { row: usize, got: usize, expected: usize },
    #[error("zero row space")]
    ZeroRowSpace,
    #[error("codes are over different fields")]
    FieldMismatch,
    #[error("code lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("coordinate {coord} outside 1..={bound}")]
    CoordOutOfRange { coord: usize, bound: usize },
    #[error("coordinates must be strictly increasing")]
    CoordsNotIncreasing,
    #[error("coordinate set indexes length {got} but the code has length {expected}")]
    BoundMismatch { expected: usize, got: usize },
    #[error("cannot puncture every coordinate")]
    PunctureAll,
    #[error("punctured code collapses to zero")]
    PunctureCollapse,
    #[error("no nonzero codeword vanishes on the shortening set")]
    ZeroShortening,
    #[error("enumeration of q^k = {0} codewords exceeds the oracle limit")]
    EnumerationGuard(u128),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A set of 1-based coordinate positions into a word of length `bound`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordSet {
    coords: Vec<usize>,
    bound: usize,
}

impl CoordSet {
    pub fn new(coords: Vec<usize>, bound: usize) -> Result<Self, CodeError> {
        for w in coords.windows(2) {
            if w[0] >= w[1] {
                return Err(CodeError::CoordsNotIncreasing);
            }
        }
        if let Some(&c) = coords.iter().find(|&&c| c == 0 || c > bound) {
            return Err(CodeError::CoordOutOfRange { coord: c, bound });
        }
        Ok(CoordSet { coords, bound })
    }

    pub fn empty(bound: usize) -> Self {
        CoordSet { coords: Vec::new(), bound }
    }

    /// `lo..=hi`, 1-based; empty when `lo > hi`.
    pub fn range(lo: usize, hi: usize, bound: usize) -> Result<Self, CodeError> {
        Self::new((lo..=hi).collect(), bound)
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.coords.binary_search(&c).is_ok()
    }

    pub fn zero_based(&self) -> Vec<usize> {
        self.coords.iter().map(|c| c - 1).collect()
    }

    /// 0-based positions not in the set.
    pub fn complement_zero_based(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.bound - self.coords.len());
        let mut it = self.coords.iter().peekable();
        for c in 1..=self.bound {
            if it.peek() == Some(&&c) {
                it.next();
            } else {
                out.push(c - 1);
            }
        }
        out
    }

    /// Splits into maximal runs of consecutive coordinates.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &c in &self.coords {
            match out.last_mut() {
                Some((_, hi)) if *hi + 1 == c => *hi = c,
                _ => out.push((c, c)),
            }
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq)]
enum Gen {
    Packed(PackedRows),
    Dense(DenseRows),
}

/// A linear `[n, k]` code over `F_q` held by its canonical RREF generator.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: FieldSpec,
    n: usize,
    pivots: Vec<usize>,
    gen: Gen,
}

impl LinearCode {
    /// Canonicalizes the row space of `rows`.
    pub fn new(field: &FieldSpec, rows: Vec<Vec<Elem>>) -> Result<Self, CodeError> {
        let n = rows.first().map(Vec::len).ok_or(CodeError::ZeroRowSpace)?;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(CodeError::RaggedRows { row: i, got: r.len(), expected: n });
            }
            if let Some(&v) = r.iter().find(|&&v| !field.contains(v)) {
                return Err(FieldError::ElementOutOfRange { value: v as u64, q: field.q() }.into());
            }
        }
        let gen = if field.is_binary() {
            Gen::Packed(PackedRows::from_dense(n, &rows))
        } else {
            Gen::Dense(DenseRows::new(field, n, rows))
        };
        Self::canonical(field, n, gen)
    }

    /// Builds from packed `F_2` rows of width `n`.
    pub(crate) fn from_packed(field: &FieldSpec, n: usize, rows: Vec<Vec<u64>>) -> Result<Self, CodeError> {
        debug_assert!(field.is_binary());
        Self::canonical(field, n, Gen::Packed(PackedRows::with_rows(n, rows)))
    }

    fn canonical(field: &FieldSpec, n: usize, mut gen: Gen) -> Result<Self, CodeError> {
        if n == 0 {
            return Err(CodeError::ZeroRowSpace);
        }
        let pivots = match &mut gen {
            Gen::Packed(m) => linalg::rref(m),
            Gen::Dense(m) => linalg::rref(m),
        };
        if pivots.is_empty() {
            return Err(CodeError::ZeroRowSpace);
        }
        Ok(LinearCode { field: field.clone(), n, pivots, gen })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        match &self.gen {
            Gen::Packed(m) => m.get(r, c),
            Gen::Dense(m) => m.get(r, c),
        }
    }

    pub fn row(&self, r: usize) -> Vec<Elem> {
        match &self.gen {
            Gen::Packed(m) => (0..self.n).map(|c| m.get(r, c)).collect(),
            Gen::Dense(m) => m.row(r).to_vec(),
        }
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        (0..self.k()).map(|r| self.row(r)).collect()
    }

    fn compatible(&self, other: &LinearCode) -> Result<(), CodeError> {
        if self.field != other.field {
            return Err(CodeError::FieldMismatch);
        }
        if self.n != other.n {
            return Err(CodeError::LengthMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// True iff both codes have the same row space.
    pub fn row_space_equal(&self, other: &LinearCode) -> Result<bool, CodeError> {
        self.compatible(other)?;
        Ok(self == other)
    }

    fn check_bound(&self, set: &CoordSet) -> Result<(), CodeError> {
        if set.bound() != self.n {
            return Err(CodeError::BoundMismatch { expected: self.n, got: set.bound() });
        }
        Ok(())
    }

    fn select(&self, rows: &[usize], cols: &[usize]) -> Result<LinearCode, CodeError> {
        let gen = match &self.gen {
            Gen::Packed(m) => Gen::Packed(m.select(rows, cols)),
            Gen::Dense(m) => Gen::Dense(m.select(rows, cols)),
        };
        Self::canonical(&self.field, cols.len(), gen)
    }

    /// Deletes the coordinates in `set` from every codeword.
    pub fn puncture(&self, set: &CoordSet) -> Result<LinearCode, CodeError> {
        self.check_bound(set)?;
        if set.len() == self.n {
            return Err(CodeError::PunctureAll);
        }
        let rows: Vec<usize> = (0..self.k()).collect();
        self.select(&rows, &set.complement_zero_based()).map_err(|e| match e {
            CodeError::ZeroRowSpace => CodeError::PunctureCollapse,
            e => e,
        })
    }

    /// Keeps the codewords that vanish on `set`, then deletes those coordinates.
    pub fn shorten(&self, set: &CoordSet) -> Result<LinearCode, CodeError> {
        self.check_bound(set)?;
        let cols = set.zero_based();
        let keep = set.complement_zero_based();
        let map_zero = |e| match e {
            CodeError::ZeroRowSpace => CodeError::ZeroShortening,
            e => e,
        };
        match &self.gen {
            Gen::Packed(m) => {
                let mut work = m.clone();
                let rows = linalg::vanishing_rows(&mut work, &cols);
                if rows.is_empty() || keep.is_empty() {
                    return Err(CodeError::ZeroShortening);
                }
                Self::canonical(&self.field, keep.len(), Gen::Packed(work.select(&rows, &keep))).map_err(map_zero)
            }
            Gen::Dense(m) => {
                let mut work = m.clone();
                let rows = linalg::vanishing_rows(&mut work, &cols);
                if rows.is_empty() || keep.is_empty() {
                    return Err(CodeError::ZeroShortening);
                }
                Self::canonical(&self.field, keep.len(), Gen::Dense(work.select(&rows, &keep))).map_err(map_zero)
            }
        }
    }

    /// Rank of the generator restricted to the given 0-based columns.
    pub fn column_rank(&self, cols: &[usize]) -> usize {
        let rows: Vec<usize> = (0..self.k()).collect();
        match &self.gen {
            Gen::Packed(m) => linalg::rank(&m.select(&rows, cols)),
            Gen::Dense(m) => linalg::rank(&m.select(&rows, cols)),
        }
    }

    /// All `q^k` codewords, in message order.
    pub fn codewords(&self) -> Result<Vec<Vec<Elem>>, CodeError> {
        let (q, k) = (self.field.q() as u128, self.k() as u32);
        let total = q.checked_pow(k).unwrap_or(u128::MAX);
        if total > ENUMERATION_LIMIT as u128 {
            return Err(CodeError::EnumerationGuard(total));
        }
        let f = &self.field;
        let rows = self.rows();
        let mut out = Vec::with_capacity(total as usize);
        let mut msg = vec![0 as Elem; k as usize];
        for _ in 0..total {
            let mut word = vec![0; self.n];
            for (m, row) in msg.iter().zip(&rows) {
                if *m != 0 {
                    for (w, &r) in word.iter_mut().zip(row) {
                        *w = f.add(*w, f.mul(*m, r));
                    }
                }
            }
            out.push(word);
            for digit in msg.iter_mut() {
                *digit += 1;
                if *digit < f.q() {
                    break;
                }
                *digit = 0;
            }
        }
        Ok(out)
    }

    /// Shortening by literal enumeration of the codewords; a test oracle.
    pub fn enumerate_shorten_oracle(&self, set: &CoordSet) -> Result<LinearCode, CodeError> {
        self.check_bound(set)?;
        let drop = set.zero_based();
        let keep = set.complement_zero_based();
        let survivors: Vec<Vec<Elem>> = self
            .codewords()?
            .into_iter()
            .filter(|w| drop.iter().all(|&c| w[c] == 0))
            .map(|w| keep.iter().map(|&c| w[c]).collect::<Vec<_>>())
            .filter(|w| w.iter().any(|&x| x != 0))
            .collect();
        if survivors.is_empty() {
            return Err(CodeError::ZeroShortening);
        }
        LinearCode::new(&self.field, survivors)
    }

    /// Code file text: field header, `n= k=`, then the generator rows.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\nn={} k={}\n", self.field, self.n, self.k());
        for r in 0..self.k() {
            let line: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses a code file; the listed rows need not be in canonical form.
    pub fn parse(text: &str) -> Result<LinearCode, CodeError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        let err = |line: usize, msg: &str| CodeError::Parse { line, msg: msg.to_string() };
        let (ln, header) = lines.next().ok_or_else(|| err(1, "missing field header"))?;
        let field = FieldSpec::parse_header(header).map_err(|e| err(ln, &e.to_string()))?;
        let (ln, dims) = lines.next().ok_or_else(|| err(ln + 1, "missing `n= k=` line"))?;
        let (n, k) = parse_dims(dims).ok_or_else(|| err(ln, "expected `n=<int> k=<int>`"))?;
        let mut rows = Vec::with_capacity(k);
        for (ln, line) in lines.by_ref() {
            if rows.len() == k {
                return Err(err(ln, "more rows than k"));
            }
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|_| err(ln, &format!("bad symbol `{t}`"))).and_then(|v| field.check(v).map_err(|e| err(ln, &e.to_string()))))
                .collect::<Result<Vec<_>, _>>()?;
            if row.len() != n {
                return Err(err(ln, &format!("row has {} symbols, expected {n}", row.len())));
            }
            rows.push(row);
        }
        if rows.len() != k {
            return Err(err(text.lines().count(), &format!("expected {k} rows, found {}", rows.len())));
        }
        if rows.is_empty() {
            return Err(CodeError::ZeroRowSpace);
        }
        LinearCode::new(&field, rows)
    }
}

fn parse_dims(line: &str) -> Option<(usize, usize)> {
    let mut n = None;
    let mut k = None;
    for tok in line.split_whitespace() {
        match tok.split_once('=')? {
            ("n", v) => n = Some(v.parse().ok()?),
            ("k", v) => k = Some(v.parse().ok()?),
            _ => return None,
        }
    }
    Some((n?, k?))
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] over {:?} {:?}", self.n, self.k(), self.field, self.rows())
    }
}
