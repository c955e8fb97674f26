//! The embed / verify / demo commands behind the `cyclic-embed` binary.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::codes::{CodeError, LinearCode};
use crate::embed::{build_certificate, Certificate, EmbedError, DEFAULT_BOUND};
use crate::gf::{Elem, FieldSpec};
use crate::verify::{self, VerifyError, VerifyReport, ORACLE_LIMIT};

/// Environment variable that overrides [`DEFAULT_BOUND`].
pub const BOUND_ENV: &str = "CYCLIC_EMBED_BOUND";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Code { path: PathBuf, source: CodeError },
    #[error("{path}: {source}")]
    Certificate { path: PathBuf, source: EmbedError },
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("invalid {BOUND_ENV} value `{0}`")]
    BadBound(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeChoice {
    Oracle,
    Structural,
    #[default]
    Auto,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Embed { input: PathBuf, out: PathBuf },
    Verify { input: PathBuf, cert: PathBuf, mode: ModeChoice, report: Option<PathBuf>, timings: bool },
    Demo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub bound: u64,
    pub seed: u64,
}

/// The bound from an explicit flag, else the environment, else the default.
pub fn resolve_bound(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    match (flag, env) {
        (Some(b), _) => Ok(b),
        (None, Some(v)) => v.trim().parse().map_err(|_| CliError::BadBound(v.to_string())),
        (None, None) => Ok(DEFAULT_BOUND),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn read_code(path: &Path) -> Result<LinearCode, CliError> {
    LinearCode::parse(&read(path)?).map_err(|source| CliError::Code { path: path.to_owned(), source })
}

pub fn read_certificate(path: &Path) -> Result<Certificate, CliError> {
    Certificate::parse(&read(path)?).map_err(|source| CliError::Certificate { path: path.to_owned(), source })
}

/// `n= k= q= m= deg_g= e= nprime= kprime= steps=`
pub fn summary(cert: &Certificate) -> String {
    let h = &cert.header;
    format!(
        "n={} k={} q={} m={} deg_g={} e={} nprime={} kprime={} steps={}",
        h.n,
        h.k,
        h.field.q(),
        h.m,
        h.deg_g(),
        h.e,
        h.nprime,
        h.kprime,
        cert.steps.len()
    )
}

pub fn cmd_embed(input: &Path, out: &Path, bound: u64) -> Result<String, CliError> {
    let code = read_code(input)?;
    let cert = build_certificate(&code, bound)?;
    write(out, &cert.to_text())?;
    Ok(summary(&cert))
}

/// Runs the chosen verifier; `auto` uses the oracle up to [`ORACLE_LIMIT`].
pub fn verify_with(code: &LinearCode, cert: &Certificate, mode: ModeChoice) -> Result<VerifyReport, VerifyError> {
    let h = &cert.header;
    let oracle = match mode {
        ModeChoice::Oracle => true,
        ModeChoice::Structural => false,
        ModeChoice::Auto => h.nprime <= ORACLE_LIMIT && h.kprime <= ORACLE_LIMIT,
    };
    if oracle {
        verify::verify_oracle(code, cert)
    } else {
        verify::verify_structural(code, cert)
    }
}

/// Returns the rendered report and whether the certificate checked out.
pub fn cmd_verify(input: &Path, cert_path: &Path, mode: ModeChoice, timings: bool) -> Result<(String, bool), CliError> {
    let code = read_code(input)?;
    let cert = read_certificate(cert_path)?;
    let report = verify_with(&code, &cert, mode)?;
    let text = if timings { report.render_with_timings(&cert) } else { report.render(&cert) };
    Ok((text, report.final_equal))
}

/// Every nonzero subspace of `F_2^n`, each listed once by its canonical form.
pub fn binary_codes(n: usize) -> Vec<LinearCode> {
    let f2 = FieldSpec::prime(2);
    let vectors: Vec<Vec<Elem>> = (1u32..1 << n).map(|v| (0..n).map(|j| (v >> j) & 1).collect()).collect();
    let mut out: Vec<LinearCode> = Vec::new();
    // every subspace has a basis among subsets of at most n nonzero vectors
    for mask in 1u64..1 << vectors.len() {
        if mask.count_ones() as usize > n {
            continue;
        }
        let rows = vectors.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v.clone()).collect();
        let c = LinearCode::new(&f2, rows).expect("nonzero rows");
        if c.k() == mask.count_ones() as usize && !out.contains(&c) {
            out.push(c);
        }
    }
    out.sort_by_key(|c| (c.n(), c.k(), c.rows()));
    out
}

/// A random code over `field` with length at most `max_n` and dimension at
/// most `max_k`.
pub fn random_code(field: &FieldSpec, max_n: usize, max_k: usize, rng: &mut impl Rng) -> LinearCode {
    loop {
        let n = rng.gen_range(1..=max_n);
        let k = rng.gen_range(1..=max_k.min(n));
        let rows = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..field.q())).collect()).collect();
        if let Ok(c) = LinearCode::new(field, rows) {
            return c;
        }
    }
}

/// The demonstration corpus: all binary codes with `n <= 3`, then seeded
/// samples over `F_3` and `F_4`.
pub fn demo_corpus(seed: u64) -> Vec<LinearCode> {
    let mut corpus: Vec<LinearCode> = (1..=3).flat_map(binary_codes).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for field in [FieldSpec::prime(3), FieldSpec::new(2, 2, None).expect("F_4")] {
        for _ in 0..4 {
            corpus.push(random_code(&field, 3, 2, &mut rng));
        }
    }
    corpus
}

fn describe(c: &LinearCode) -> String {
    let gen: Vec<String> = c.rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<String>()).collect();
    format!("q={} n={} k={} gen={}", c.field().q(), c.n(), c.k(), gen.join(","))
}

/// One line per corpus code: embed, verify, report.
pub fn demo_line(c: &LinearCode, bound: u64) -> String {
    let head = describe(c);
    let cert = match build_certificate(c, bound) {
        Ok(cert) => cert,
        Err(EmbedError::Budget { required, .. }) => return format!("{head} skipped (nprime={required} > bound)"),
        Err(e) => return format!("{head} error ({e})"),
    };
    let nprime = cert.header.nprime;
    match verify_with(c, &cert, ModeChoice::Auto) {
        Ok(r) if r.final_equal => format!("{head} nprime={nprime} mode={} ok", r.mode),
        Ok(r) => format!("{head} nprime={nprime} mode={} FAILED", r.mode),
        Err(e) => format!("{head} nprime={nprime} error ({e})"),
    }
}

pub fn cmd_demo(bound: u64, seed: u64, out: &mut impl Write) -> io::Result<()> {
    for c in demo_corpus(seed) {
        writeln!(out, "{}", demo_line(&c, bound))?;
    }
    Ok(())
}

/// Runs a command, writing its output to `out`; returns the exit status.
pub fn run(config: &RunConfig, out: &mut impl Write) -> Result<i32, CliError> {
    let stdout_err = |source| CliError::Io { path: PathBuf::from("<stdout>"), source };
    match &config.command {
        Command::Embed { input, out: path } => {
            writeln!(out, "{}", cmd_embed(input, path, config.bound)?).map_err(stdout_err)?;
            Ok(0)
        }
        Command::Verify { input, cert, mode, report, timings } => {
            let (text, ok) = cmd_verify(input, cert, *mode, *timings)?;
            match report {
                Some(path) => write(path, &text)?,
                None => out.write_all(text.as_bytes()).map_err(stdout_err)?,
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Demo => {
            cmd_demo(config.bound, config.seed, out).map_err(stdout_err)?;
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_code_counts() {
        // number of nonzero subspaces of F_2^n: 1, 4, 15
        let counts: Vec<usize> = (1..=3).map(|n| binary_codes(n).len()).collect();
        assert_eq!(counts, vec![1, 4, 15]);
    }

    #[test]
    fn bound_resolution() {
        assert_eq!(resolve_bound(Some(7), Some("9")).unwrap(), 7);
        assert_eq!(resolve_bound(None, Some("9")).unwrap(), 9);
        assert_eq!(resolve_bound(None, None).unwrap(), DEFAULT_BOUND);
        assert!(matches!(resolve_bound(None, Some("x")), Err(CliError::BadBound(_))));
    }

    #[test]
    fn demo_is_deterministic() {
        let run = |seed| {
            let mut buf = Vec::new();
            cmd_demo(100, seed, &mut buf).unwrap();
            String::from_utf8(buf).unwrap()
        };
        assert_eq!(run(3), run(3));
        assert!(run(3).contains("skipped (nprime="));
    }

    #[test]
    fn summary_of_worked_example() {
        let c = LinearCode::new(&FieldSpec::prime(2), vec![vec![1, 1]]).unwrap();
        let cert = build_certificate(&c, DEFAULT_BOUND).unwrap();
        assert_eq!(summary(&cert), "n=2 k=1 q=2 m=3 deg_g=5 e=15 nprime=15 kprime=10 steps=4");
    }
}
