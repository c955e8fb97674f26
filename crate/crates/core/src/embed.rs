//! Embedding certificates: a cyclic code `C(n', g)` together with the
//! shorten/puncture steps that carry it onto a given linear code.
//!
//! The construction places the basis vectors, separated by zero blocks, in a
//! vector `f`, spreads `f` over every `p`-th coefficient of `g` and closes with
//! `X^deg g`. Five stages then cut `C(n', g)` down:
//!
//! * A shortens the columns between the multiples of `p` in the head;
//! * B shortens the tail beyond the last useful shift row;
//! * C punctures the tail except one marker column per row to be removed;
//! * D shortens those marker columns (absent when `k = 1`);
//! * E punctures the head down to the last `n` columns.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::codes::{CodeError, CoordSet, LinearCode};
use crate::cyclic::{CyclicCode, CyclicError};
use crate::gf::{Elem, FieldError, FieldSpec};
use crate::poly::{Poly, PolyError};

/// Default cap on the cyclic length `n'`.
pub const DEFAULT_BOUND: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error("f must start and end with 1")]
    MalformedF,
    #[error("required length nprime={required} exceeds bound {bound} (e={e}, deg_g={deg_g})")]
    Budget { e: String, deg_g: usize, required: String, bound: u64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl EmbedError {
    fn budget(e: Option<u64>, deg_g: usize, required: Option<u128>, bound: u64) -> Self {
        let show = |v: Option<String>| v.unwrap_or_else(|| ">2^64".to_string());
        EmbedError::Budget {
            e: show(e.map(|v| v.to_string())),
            deg_g,
            required: show(required.map(|v| v.to_string())),
            bound,
        }
    }
}

/// The basis used by the construction, with per-row zero profiles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisProfile {
    rows: Vec<Vec<Elem>>,
    /// `(leading zeros, core length, trailing zeros)` per row.
    shape: Vec<(usize, usize, usize)>,
}

impl BasisProfile {
    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn shape(&self) -> &[(usize, usize, usize)] {
        &self.shape
    }

    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// The trimmed core of row `j`, first and last entries nonzero.
    pub fn core(&self, j: usize) -> &[Elem] {
        let (l, d, _) = self.shape[j];
        &self.rows[j][l..l + d]
    }
}

fn shape_of(row: &[Elem]) -> (usize, usize, usize) {
    let l = row.iter().take_while(|&&x| x == 0).count();
    let r = row.iter().rev().take_while(|&&x| x == 0).count();
    (l, row.len() - l - r, r)
}

/// Canonical basis of `c`, ordered by trailing zeros and then by the row
/// itself with the first coordinate most significant.
pub fn normalize_basis(c: &LinearCode) -> BasisProfile {
    let mut rows = c.rows();
    rows.sort_by(|a, b| shape_of(a).2.cmp(&shape_of(b).2).then_with(|| a.cmp(b)));
    let shape = rows.iter().map(|r| shape_of(r)).collect();
    BasisProfile { rows, shape }
}

/// `f = [1, v_1, 0^n, v_2, 0^n, ..., v_k, 1]`.
pub fn build_f(basis: &BasisProfile) -> Vec<Elem> {
    let n = basis.n();
    let mut f = vec![1];
    for (j, v) in basis.rows().iter().enumerate() {
        if j > 0 {
            f.extend(std::iter::repeat(0).take(n));
        }
        f.extend_from_slice(v);
    }
    f.push(1);
    f
}

/// `g = sum_{i<m} f_i X^{pi} + X^{(m-1)p+1}` where `m = len(f) - 1`.
pub fn build_g(field: &FieldSpec, f: &[Elem]) -> Result<Poly, EmbedError> {
    if f.len() < 2 || f[0] != 1 || f[f.len() - 1] != 1 {
        return Err(EmbedError::MalformedF);
    }
    if let Some(&v) = f.iter().find(|&&v| !field.contains(v)) {
        return Err(PolyError::from(FieldError::ElementOutOfRange { value: v as u64, q: field.q() }).into());
    }
    let p = field.p() as usize;
    let m = f.len() - 1;
    let deg = (m - 1) * p + 1;
    let mut coeffs = vec![0; deg + 1];
    for (i, &fi) in f[..m].iter().enumerate() {
        coeffs[i * p] = fi;
    }
    coeffs[deg] = 1;
    Ok(Poly::new(field, coeffs)?)
}

/// Least `n' = t e` with `n' >= 2 deg g` and `p` not dividing `t`; returns
/// `(e, n')`.
pub fn find_length(g: &Poly, bound: u64) -> Result<(u64, u64), EmbedError> {
    let deg = g.degree().unwrap_or(0);
    let need = 2 * deg as u128;
    if need > bound as u128 {
        return Err(EmbedError::budget(None, deg, None, bound).with_min(need));
    }
    let e = match g.order_of_x() {
        Ok(e) => e,
        Err(PolyError::OrderOverflow(_)) => return Err(EmbedError::budget(None, deg, None, bound)),
        Err(err) => return Err(err.into()),
    };
    let p = g.field().p() as u128;
    let mut t = need.div_ceil(e as u128).max(1);
    if t % p == 0 {
        t += 1;
    }
    let nprime = t * e as u128;
    if nprime > bound as u128 {
        return Err(EmbedError::budget(Some(e), deg, Some(nprime), bound));
    }
    Ok((e, nprime as u64))
}

impl EmbedError {
    fn with_min(self, need: u128) -> Self {
        match self {
            EmbedError::Budget { e, deg_g, bound, .. } => {
                EmbedError::Budget { e, deg_g, required: format!(">={need}"), bound }
            }
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    A,
    B,
    C,
    D,
    E,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Stage {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        Ok(match s {
            "A" => Stage::A,
            "B" => Stage::B,
            "C" => Stage::C,
            "D" => Stage::D,
            "E" => Stage::E,
            _ => return Err(()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Shorten,
    Puncture,
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Shorten => "shorten",
            Op::Puncture => "puncture",
        })
    }
}

/// A set of original generator-row indices, kept as arithmetic runs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RowSet {
    runs: Vec<(usize, usize, usize)>,
}

impl RowSet {
    /// Adds `start, start+step, ..., <= end`; ignored when `start > end`.
    pub fn push(&mut self, start: usize, end: usize, step: usize) {
        assert!(step > 0);
        if start <= end {
            let end = start + (end - start) / step * step;
            let step = if start == end { 1 } else { step };
            self.runs.push((start, end, step));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.runs.iter().flat_map(|&(a, b, s)| (a..=b).step_by(s))
    }

    pub fn len(&self) -> usize {
        self.runs.iter().map(|&(a, b, s)| (b - a) / s + 1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Sorted, deduplicated members.
    pub fn to_sorted(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.iter().collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl fmt::Display for RowSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.runs.is_empty() {
            return f.write_str("-");
        }
        let items: Vec<String> = self
            .runs
            .iter()
            .map(|&(a, b, s)| match (a == b, s) {
                (true, _) => a.to_string(),
                (false, 1) => format!("{a}-{b}"),
                _ => format!("{a}-{b}:{s}"),
            })
            .collect();
        f.write_str(&items.join(","))
    }
}

impl FromStr for RowSet {
    type Err = String;
    fn from_str(text: &str) -> Result<Self, String> {
        let mut out = RowSet::default();
        if text == "-" {
            return Ok(out);
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| format!("bad row item `{s}`"));
        for item in text.split(',') {
            let (range, step) = match item.split_once(':') {
                Some((r, s)) => (r, num(s)?),
                None => (item, 1),
            };
            let (a, b) = match range.split_once('-') {
                Some((a, b)) => (num(a)?, num(b)?),
                None => (num(range)?, num(range)?),
            };
            if step == 0 || a > b || (b - a) % step != 0 {
                return Err(format!("bad row item `{item}`"));
            }
            out.push(a, b, step);
        }
        Ok(out)
    }
}

fn format_coords(set: &CoordSet) -> String {
    if set.is_empty() {
        return "-".to_string();
    }
    let items: Vec<String> = set
        .runs()
        .into_iter()
        .map(|(a, b)| if a == b { a.to_string() } else { format!("{a}-{b}") })
        .collect();
    items.join(",")
}

fn parse_coords(text: &str, bound: usize) -> Result<CoordSet, String> {
    if text == "-" {
        return Ok(CoordSet::empty(bound));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| format!("bad coordinate `{s}`"));
    let mut coords = Vec::new();
    for item in text.split(',') {
        match item.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("bad coordinate range `{item}`"));
                }
                coords.extend(a..=b);
            }
            None => coords.push(num(item)?),
        }
    }
    CoordSet::new(coords, bound).map_err(|e| e.to_string())
}

/// One shorten or puncture step, indexed against the current code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub stage: Stage,
    pub op: Op,
    pub len_before: usize,
    pub len_after: usize,
    pub dim_after: usize,
    pub coords: CoordSet,
    /// Original generator rows whose images span the code after this step.
    pub rows: RowSet,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step {} {} len_before={} len_after={} dim_after={} coords={} rows={}",
            self.stage,
            self.op,
            self.len_before,
            self.len_after,
            self.dim_after,
            format_coords(&self.coords),
            self.rows
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedHeader {
    pub field: FieldSpec,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub f: Vec<Elem>,
    pub g: Poly,
    pub e: u64,
    pub nprime: usize,
    pub kprime: usize,
}

impl EmbedHeader {
    pub fn p(&self) -> usize {
        self.field.p() as usize
    }

    pub fn deg_g(&self) -> usize {
        self.nprime - self.kprime
    }

    pub fn cyclic(&self) -> Result<CyclicCode, CyclicError> {
        CyclicCode::new(self.nprime, self.g.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub header: EmbedHeader,
    pub basis: BasisProfile,
    pub steps: Vec<Step>,
}

/// `m = 2n(k-1) + n + 1`.
pub fn block_length(n: usize, k: usize) -> usize {
    2 * n * (k - 1) + n + 1
}

/// The shorten/puncture steps for a header, empty stages omitted.
pub fn plan_steps(h: &EmbedHeader) -> Result<Vec<Step>, CodeError> {
    let (n, k, m, p) = (h.n, h.k, h.m, h.p());
    let (nprime, kprime) = (h.nprime, h.kprime);
    let span = 2 * n * (k - 1);
    let mut steps = Vec::new();

    // A: between consecutive multiples of p in the first (m-1)p+1 columns
    let coords = (1..m).flat_map(|j| (j - 1) * p + 2..=j * p).collect();
    let len_a = nprime - (m - 1) * (p - 1);
    let mut rows = RowSet::default();
    rows.push(0, (m - 1) * p, p);
    rows.push((m - 1) * p + 1, kprime - 1, 1);
    steps.push(Step {
        stage: Stage::A,
        op: Op::Shorten,
        len_before: nprime,
        len_after: len_a,
        dim_after: kprime - (m - 1) * (p - 1),
        coords: CoordSet::new(coords, nprime)?,
        rows,
    });

    // B: the trailing kprime - 1 - 2np(k-1) columns
    let tail = kprime - 1 - span * p;
    let len_b = len_a - tail;
    let mut rows = RowSet::default();
    rows.push(0, span * p, p);
    steps.push(Step {
        stage: Stage::B,
        op: Op::Shorten,
        len_before: len_a,
        len_after: len_b,
        dim_after: span + 1,
        coords: CoordSet::range(len_b + 1, len_a, len_a)?,
        rows: rows.clone(),
    });

    // C: the tail column m+1+tp carries the top coefficient of row tp alone;
    // keep it for every row that D must remove, drop the rest of the tail
    let markers: Vec<usize> = (0..=span).filter(|t| t % (2 * n) != 0).map(|t| m + 1 + t * p).collect();
    let coords = (m + 1..=len_b).filter(|c| markers.binary_search(c).is_err()).collect();
    let len_c = m + markers.len();
    steps.push(Step {
        stage: Stage::C,
        op: Op::Puncture,
        len_before: len_b,
        len_after: len_c,
        dim_after: span + 1,
        coords: CoordSet::new(coords, len_b)?,
        rows,
    });

    let mut rows = RowSet::default();
    rows.push(0, span * p, 2 * n * p);
    if k > 1 {
        steps.push(Step {
            stage: Stage::D,
            op: Op::Shorten,
            len_before: len_c,
            len_after: m,
            dim_after: k,
            coords: CoordSet::range(m + 1, len_c, len_c)?,
            rows: rows.clone(),
        });
    }

    // E: the last n head columns hold v_k, ..., v_1 in the surviving rows
    steps.push(Step {
        stage: Stage::E,
        op: Op::Puncture,
        len_before: m,
        len_after: n,
        dim_after: k,
        coords: CoordSet::range(1, m - n, m)?,
        rows,
    });
    Ok(steps)
}

/// Builds the certificate embedding `c` into a cyclic code of length at most
/// `bound`.
pub fn build_certificate(c: &LinearCode, bound: u64) -> Result<Certificate, EmbedError> {
    let field = c.field().clone();
    let basis = normalize_basis(c);
    let (n, k) = (basis.n(), basis.k());
    let m = block_length(n, k);
    let f = build_f(&basis);
    let g = build_g(&field, &f)?;
    let (e, nprime) = find_length(&g, bound)?;
    let nprime = nprime as usize;
    let kprime = nprime - g.degree().expect("monic");
    let header = EmbedHeader { field, n, k, m, f, g, e, nprime, kprime };
    let steps = plan_steps(&header)?;
    Ok(Certificate { header, basis, steps })
}

impl Certificate {
    pub fn to_text(&self) -> String {
        let h = &self.header;
        let join = |v: &[Elem]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let mut out = format!(
            "{}\nn={} k={} m={} p={}\nf={}\ng={}\ne={} nprime={} kprime={}\n",
            h.field,
            h.n,
            h.k,
            h.m,
            h.p(),
            join(&h.f),
            join(h.g.coeffs()),
            h.e,
            h.nprime,
            h.kprime
        );
        for s in &self.steps {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out.push_str("basis=\n");
        for r in self.basis.rows() {
            out.push_str(&r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses certificate text. Only syntax and per-line ranges are checked;
    /// consistency is the verifiers' job.
    pub fn parse(text: &str) -> Result<Certificate, EmbedError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty()).peekable();
        let err = |line: usize, msg: String| EmbedError::Parse { line, msg };
        let mut next = |what: &str| lines.next().ok_or_else(|| err(text.lines().count() + 1, format!("missing {what}")));

        let (ln, line) = next("field header")?;
        let field = FieldSpec::parse_header(line).map_err(|e| err(ln, e.to_string()))?;

        let (ln, line) = next("`n= k= m= p=` line")?;
        let kv = keyvals(line, &["n", "k", "m", "p"]).map_err(|m| err(ln, m))?;
        let (n, k, m, p) = (kv[0], kv[1], kv[2], kv[3]);
        if p != field.p() as u64 || n == 0 || k == 0 || m != block_length(n as usize, k as usize) as u64 {
            return Err(err(ln, "inconsistent n, k, m, p".into()));
        }

        let (ln, line) = next("`f=` line")?;
        let f = elem_list(line.strip_prefix("f=").ok_or_else(|| err(ln, "expected `f=`".into()))?, &field).map_err(|m| err(ln, m))?;
        let (ln, line) = next("`g=` line")?;
        let gc = elem_list(line.strip_prefix("g=").ok_or_else(|| err(ln, "expected `g=`".into()))?, &field).map_err(|m| err(ln, m))?;
        let g = Poly::new(&field, gc.clone()).map_err(|e| err(ln, e.to_string()))?;
        if g.coeffs().len() != gc.len() {
            return Err(err(ln, "trailing zero coefficients".into()));
        }

        let (ln, line) = next("`e= nprime= kprime=` line")?;
        let kv = keyvals(line, &["e", "nprime", "kprime"]).map_err(|m| err(ln, m))?;
        let header = EmbedHeader {
            field: field.clone(),
            n: n as usize,
            k: k as usize,
            m: m as usize,
            f,
            g,
            e: kv[0],
            nprime: kv[1] as usize,
            kprime: kv[2] as usize,
        };

        let mut steps = Vec::new();
        loop {
            let (ln, line) = next("`basis=` line")?;
            if line == "basis=" {
                break;
            }
            steps.push(parse_step(line).map_err(|m| err(ln, m))?);
        }

        let mut rows = Vec::with_capacity(header.k);
        for _ in 0..header.k {
            let (ln, line) = next("basis row")?;
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<u64>().map_err(|_| format!("bad symbol `{t}`")).and_then(|v| field.check(v).map_err(|e| e.to_string())))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|m| err(ln, m))?;
            if row.len() != header.n || row.iter().all(|&x| x == 0) {
                return Err(err(ln, format!("basis row must be a nonzero vector of length {}", header.n)));
            }
            rows.push(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(err(ln, "unexpected trailing line".into()));
        }
        let shape = rows.iter().map(|r| shape_of(r)).collect();
        Ok(Certificate { header, basis: BasisProfile { rows, shape }, steps })
    }
}

fn keyvals(line: &str, keys: &[&str]) -> Result<Vec<u64>, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != keys.len() {
        return Err(format!("expected {}", keys.iter().map(|k| format!("{k}=")).collect::<Vec<_>>().join(" ")));
    }
    toks.iter()
        .zip(keys)
        .map(|(t, k)| {
            t.strip_prefix(k)
                .and_then(|r| r.strip_prefix('='))
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| format!("expected `{k}=<int>`, found `{t}`"))
        })
        .collect()
}

fn elem_list(text: &str, field: &FieldSpec) -> Result<Vec<Elem>, String> {
    text.split(',')
        .map(|t| t.parse::<u64>().map_err(|_| format!("bad symbol `{t}`")).and_then(|v| field.check(v).map_err(|e| e.to_string())))
        .collect()
}

fn parse_step(line: &str) -> Result<Step, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 8 || toks[0] != "step" {
        return Err("expected `step <stage> <op> len_before= len_after= dim_after= coords= rows=`".into());
    }
    let stage = toks[1].parse::<Stage>().map_err(|_| format!("bad stage `{}`", toks[1]))?;
    let op = match toks[2] {
        "shorten" => Op::Shorten,
        "puncture" => Op::Puncture,
        other => return Err(format!("bad operation `{other}`")),
    };
    let nums = keyvals(&toks[3..6].join(" "), &["len_before", "len_after", "dim_after"])?;
    let (len_before, len_after, dim_after) = (nums[0] as usize, nums[1] as usize, nums[2] as usize);
    let coords = toks[6].strip_prefix("coords=").ok_or("expected `coords=`")?;
    let coords = parse_coords(coords, len_before)?;
    let rows = toks[7].strip_prefix("rows=").ok_or("expected `rows=`")?.parse::<RowSet>()?;
    Ok(Step { stage, op, len_before, len_after, dim_after, coords, rows })
}
