//! Two independent checks of a certificate against its target code.
//!
//! Oracle mode materializes `C(n', g)` and replays every step with the codes
//! module. Structural mode never builds the cyclic code: it tracks the
//! surviving original columns and generator rows, and checks dimensions with
//! the streaming restricted rank.

use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::codes::{CodeError, CoordSet, LinearCode};
use crate::cyclic::{CyclicCode, CyclicError};
use crate::embed::{block_length, build_f, build_g, Certificate, Op, Stage, Step};
use crate::gf::Elem;

/// Oracle mode refuses cyclic codes longer or wider than this.
pub const ORACLE_LIMIT: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Oracle,
    Structural,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Oracle => "oracle",
            Mode::Structural => "structural",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("certificate is for a [{cert_n}, {cert_k}] code over {cert_field}, input is [{n}, {k}] over {field}")]
    HeaderMismatch { cert_field: String, cert_n: usize, cert_k: usize, field: String, n: usize, k: usize },
    #[error("oracle mode needs nprime, kprime <= {ORACLE_LIMIT} (got {nprime}, {kprime})")]
    OracleGuard { nprime: usize, kprime: usize },
    #[error(transparent)]
    Cyclic(#[from] CyclicError),
    #[error("step {index}: {source}")]
    Step { index: usize, source: CodeError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepReport {
    pub stage: Stage,
    pub op: Op,
    pub length_ok: bool,
    pub dim_ok: bool,
    pub surviving_rows_ok: bool,
    /// Stage A only, oracle mode only: the union shortening equals shortening
    /// run by run.
    pub iterated_ok: Option<bool>,
    pub elapsed: Duration,
}

impl StepReport {
    fn new(step: &Step) -> Self {
        StepReport {
            stage: step.stage,
            op: step.op,
            length_ok: false,
            dim_ok: false,
            surviving_rows_ok: false,
            iterated_ok: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn ok(&self) -> bool {
        self.length_ok && self.dim_ok && self.surviving_rows_ok && self.iterated_ok != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub mode: Mode,
    /// Empty when the header is self-consistent.
    pub header_faults: Vec<String>,
    pub steps: Vec<StepReport>,
    /// Number of steps in the certificate; `steps` stops at the first step
    /// that could not be carried out.
    pub planned: usize,
    pub final_equal: bool,
}

impl VerifyReport {
    pub fn header_ok(&self) -> bool {
        self.header_faults.is_empty()
    }

    /// Line-oriented report mirroring the certificate's step lines.
    pub fn render(&self, cert: &Certificate) -> String {
        self.render_inner(cert, false)
    }

    /// Like [`VerifyReport::render`], with per-step wall time.
    pub fn render_with_timings(&self, cert: &Certificate) -> String {
        self.render_inner(cert, true)
    }

    fn render_inner(&self, cert: &Certificate, timings: bool) -> String {
        let mut out = format!("mode={}\n", self.mode);
        if self.header_ok() {
            out.push_str("header ok\n");
        } else {
            out.push_str(&format!("header fail={}\n", self.header_faults.join("; ")));
        }
        for (i, step) in cert.steps.iter().enumerate() {
            let line = format!(
                "step {} {} len_before={} len_after={} dim_after={}",
                step.stage, step.op, step.len_before, step.len_after, step.dim_after
            );
            let Some(r) = self.steps.get(i) else {
                out.push_str(&format!("{line} fail=not-reached\n"));
                continue;
            };
            let mut ok = Vec::new();
            let mut fail = Vec::new();
            for (name, flag) in [("length", Some(r.length_ok)), ("dim", Some(r.dim_ok)), ("rows", Some(r.surviving_rows_ok)), ("iterated", r.iterated_ok)] {
                match flag {
                    Some(true) => ok.push(name),
                    Some(false) => fail.push(name),
                    None => {}
                }
            }
            out.push_str(&line);
            if !ok.is_empty() {
                out.push_str(&format!(" ok={}", ok.join(",")));
            }
            if !fail.is_empty() {
                out.push_str(&format!(" fail={}", fail.join(",")));
            }
            if timings {
                out.push_str(&format!(" elapsed_us={}", r.elapsed.as_micros()));
            }
            out.push('\n');
        }
        out.push_str(&format!("final_equal={}\n", self.final_equal));
        out
    }

    fn finish(&mut self, reached: bool) {
        self.final_equal = self.final_equal
            && reached
            && self.header_ok()
            && self.steps.len() == self.planned
            && self.steps.iter().all(StepReport::ok);
    }
}

/// Checks that the certificate describes `c` and that its header follows from
/// its basis. Returns the cyclic code when it is well formed.
fn check_header(c: &LinearCode, cert: &Certificate) -> Result<(Vec<String>, Option<CyclicCode>), VerifyError> {
    let h = &cert.header;
    if h.field != *c.field() || h.n != c.n() || h.k != c.k() {
        return Err(VerifyError::HeaderMismatch {
            cert_field: h.field.to_string(),
            cert_n: h.n,
            cert_k: h.k,
            field: c.field().to_string(),
            n: c.n(),
            k: c.k(),
        });
    }
    let mut faults = Vec::new();
    if cert.basis.k() != h.k || cert.basis.rows().iter().any(|r| r.len() != h.n) {
        faults.push("basis has the wrong shape".to_string());
    } else if LinearCode::new(&h.field, cert.basis.rows().to_vec()).ok().as_ref() != Some(c) {
        faults.push("basis does not span the input code".to_string());
    } else if h.f != build_f(&cert.basis) {
        faults.push("f does not match the basis".to_string());
    }
    if h.m != block_length(h.n, h.k) {
        faults.push("m does not match n and k".to_string());
    }
    match build_g(&h.field, &h.f) {
        Ok(g) if g == h.g => {}
        _ => faults.push("g does not match f".to_string()),
    }
    let mut cyclic = None;
    match CyclicCode::new(h.nprime, h.g.clone()) {
        Ok(cc) if cc.kprime() == h.kprime => cyclic = Some(cc),
        Ok(_) => faults.push("kprime is not nprime - deg g".to_string()),
        Err(e) => faults.push(format!("cyclic code: {e}")),
    }
    let period = match h.g.degree() {
        Some(0) => true,
        Some(_) => h.g.x_pow_mod(h.e).map(|r| r.is_one()).unwrap_or(false),
        None => false,
    };
    if h.e == 0 || h.nprime as u64 % h.e != 0 || !period {
        faults.push("e is not a period of X mod g dividing nprime".to_string());
    }
    if !cert.steps.windows(2).all(|w| w[0].stage < w[1].stage) {
        faults.push("stages out of order".to_string());
    }
    Ok((faults, cyclic))
}

fn apply(code: &LinearCode, step: &Step) -> Result<LinearCode, CodeError> {
    match step.op {
        Op::Shorten => code.shorten(&step.coords),
        Op::Puncture => code.puncture(&step.coords),
    }
}

/// Applies every step of `cert` to `start`.
pub fn replay(cert: &Certificate, start: &LinearCode) -> Result<LinearCode, VerifyError> {
    let mut cur = start.clone();
    for (index, step) in cert.steps.iter().enumerate() {
        cur = apply(&cur, step).map_err(|source| VerifyError::Step { index, source })?;
    }
    Ok(cur)
}

/// Shortens one maximal run at a time, last run first so earlier positions
/// keep their indices.
fn shorten_by_runs(code: &LinearCode, set: &CoordSet) -> Result<LinearCode, CodeError> {
    let mut cur = code.clone();
    for (a, b) in set.runs().into_iter().rev() {
        cur = cur.shorten(&CoordSet::range(a, b, cur.n())?)?;
    }
    Ok(cur)
}

fn delete_positions(cols: &[usize], set: &CoordSet) -> Vec<usize> {
    set.complement_zero_based().into_iter().map(|i| cols[i]).collect()
}

/// Verification by full materialization and replay.
pub fn verify_oracle(c: &LinearCode, cert: &Certificate) -> Result<VerifyReport, VerifyError> {
    let h = &cert.header;
    if h.nprime > ORACLE_LIMIT || h.kprime > ORACLE_LIMIT {
        return Err(VerifyError::OracleGuard { nprime: h.nprime, kprime: h.kprime });
    }
    let (header_faults, cyclic) = check_header(c, cert)?;
    let mut report = VerifyReport { mode: Mode::Oracle, header_faults, steps: Vec::new(), planned: cert.steps.len(), final_equal: true };
    let Some(cyclic) = cyclic else {
        report.finish(false);
        return Ok(report);
    };
    let mut cur = cyclic.materialize()?;
    let mut cols: Vec<usize> = (0..h.nprime).collect();
    for step in &cert.steps {
        let t0 = Instant::now();
        let mut r = StepReport::new(step);
        if step.len_before != cur.n() || step.coords.bound() != cur.n() {
            report.steps.push(r);
            report.finish(false);
            return Ok(report);
        }
        let next = match apply(&cur, step) {
            Ok(next) => next,
            Err(_) => {
                report.steps.push(r);
                report.finish(false);
                return Ok(report);
            }
        };
        cols = delete_positions(&cols, &step.coords);
        r.length_ok = next.n() == step.len_after;
        r.dim_ok = next.k() == step.dim_after;
        let ids = step.rows.to_sorted();
        r.surviving_rows_ok = ids.len() == step.dim_after
            && ids.iter().all(|&i| i < h.kprime)
            && LinearCode::new(c.field(), ids.iter().map(|&i| cols.iter().map(|&j| cyclic.entry(i, j)).collect()).collect()).ok().as_ref()
                == Some(&next);
        if step.stage == Stage::A && step.op == Op::Shorten {
            r.iterated_ok = Some(shorten_by_runs(&cur, &step.coords).ok().as_ref() == Some(&next));
        }
        r.elapsed = t0.elapsed();
        report.steps.push(r);
        cur = next;
    }
    report.final_equal = cur.n() == c.n() && cur.row_space_equal(c).unwrap_or(false);
    report.finish(true);
    Ok(report)
}

/// Verification without materializing the cyclic code.
pub fn verify_structural(c: &LinearCode, cert: &Certificate) -> Result<VerifyReport, VerifyError> {
    let (header_faults, cyclic) = check_header(c, cert)?;
    let mut report = VerifyReport { mode: Mode::Structural, header_faults, steps: Vec::new(), planned: cert.steps.len(), final_equal: true };
    let Some(cyclic) = cyclic else {
        report.finish(false);
        return Ok(report);
    };
    let deg = cyclic.deg();
    // surviving original columns, and original rows spanning the current code
    // (independent on those columns)
    let mut cols: Vec<usize> = (0..cyclic.nprime()).collect();
    let mut rows: Vec<usize> = (0..cyclic.kprime()).collect();
    for step in &cert.steps {
        let t0 = Instant::now();
        let mut r = StepReport::new(step);
        if step.len_before != cols.len() || step.coords.bound() != cols.len() {
            report.steps.push(r);
            report.finish(false);
            return Ok(report);
        }
        let hit: Vec<usize> = step.coords.zero_based().into_iter().map(|i| cols[i]).collect();
        let kept = delete_positions(&cols, &step.coords);
        let claimed = step.rows.to_sorted();
        let subset = claimed.iter().all(|i| rows.binary_search(i).is_ok());
        r.length_ok = kept.len() == step.len_after;
        let dim = match step.op {
            Op::Shorten => {
                let dim = rows.len() - cyclic.restricted_rank_rows(&rows, &hit)?;
                let vanish = claimed.iter().all(|&i| {
                    let lo = hit.partition_point(|&c| c < i);
                    hit[lo..].iter().take_while(|&&c| c <= i + deg).all(|&c| cyclic.entry(i, c) == 0)
                });
                r.surviving_rows_ok = subset && vanish && claimed.len() == dim;
                dim
            }
            Op::Puncture => {
                let dim = cyclic.restricted_rank_rows(&rows, &kept)?;
                r.surviving_rows_ok = subset && claimed.len() == dim && cyclic.restricted_rank_rows(&claimed, &kept)? == dim;
                dim
            }
        };
        r.dim_ok = dim == step.dim_after;
        r.elapsed = t0.elapsed();
        let ok = r.ok();
        report.steps.push(r);
        if !ok {
            report.finish(false);
            return Ok(report);
        }
        cols = kept;
        rows = claimed;
    }
    let fin: Vec<Vec<Elem>> = rows.iter().map(|&i| cols.iter().map(|&j| cyclic.entry(i, j)).collect()).collect();
    report.final_equal = cols.len() == c.n() && LinearCode::new(c.field(), fin).ok().as_ref() == Some(c);
    report.finish(true);
    Ok(report)
}
