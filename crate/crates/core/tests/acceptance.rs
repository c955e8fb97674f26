// Acceptance suite: one pass/fail line per criterion, exit status 1 on any
// failure. Runs with its own harness so the lines always reach the output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cyclic_embed::cli::{verify_with, ModeChoice};
use cyclic_embed::codes::{CodeError, CoordSet, LinearCode};
use cyclic_embed::cyclic::CyclicCode;
use cyclic_embed::embed::{block_length, build_certificate, build_f, build_g, normalize_basis, Certificate, EmbedError, Op, Stage};
use cyclic_embed::gf::{Elem, FieldSpec};
use cyclic_embed::poly::Poly;
use cyclic_embed::verify::{verify_oracle, verify_structural, ORACLE_LIMIT};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn code(field: &FieldSpec, rows: &[&[Elem]]) -> LinearCode {
    LinearCode::new(field, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn random_code(field: &FieldSpec, max_n: usize, max_k: usize, rng: &mut ChaCha8Rng) -> LinearCode {
    loop {
        let n = rng.gen_range(1..=max_n);
        let k = rng.gen_range(1..=max_k.min(n));
        let rows = (0..k).map(|_| (0..n).map(|_| rng.gen_range(0..field.q())).collect()).collect();
        if let Ok(c) = LinearCode::new(field, rows) {
            return c;
        }
    }
}

/// Every binary RREF matrix of shape `k x n`, i.e. every `[n, k]` binary code.
fn binary_codes(n: usize, k: usize) -> Vec<LinearCode> {
    let f2 = FieldSpec::prime(2);
    let mut out = Vec::new();
    for pivots in (0u32..1 << n).filter(|m| m.count_ones() as usize == k) {
        let piv: Vec<usize> = (0..n).filter(|j| pivots >> j & 1 == 1).collect();
        let free: Vec<(usize, usize)> =
            (0..k).flat_map(|r| (piv[r] + 1..n).filter(|c| pivots >> c & 1 == 0).map(move |c| (r, c))).collect();
        for fill in 0u64..1 << free.len() {
            let mut rows = vec![vec![0; n]; k];
            for (r, &p) in piv.iter().enumerate() {
                rows[r][p] = 1;
            }
            for (b, &(r, c)) in free.iter().enumerate() {
                rows[r][c] = (fill >> b & 1) as Elem;
            }
            out.push(LinearCode::new(&f2, rows).unwrap());
        }
    }
    out
}

fn verify_auto(c: &LinearCode, cert: &Certificate) -> bool {
    verify_with(c, cert, ModeChoice::Auto).map(|r| r.final_equal).unwrap_or(false)
}

fn criterion_1() -> Outcome {
    let f2 = FieldSpec::prime(2);
    let rep = code(&f2, &[&[1, 1]]);
    let cert = build_certificate(&rep, 1 << 20).map_err(|e| e.to_string())?;
    let h = &cert.header;
    check(h.m == 3 && h.f == [1, 1, 1, 1], || format!("m={} f={:?}", h.m, h.f))?;
    check(h.g.coeffs() == [1, 0, 1, 0, 1, 1], || format!("g={:?}", h.g))?;
    check((h.e, h.nprime, h.kprime) == (15, 15, 10), || format!("e={} nprime={} kprime={}", h.e, h.nprime, h.kprime))?;
    let steps: Vec<(Op, Vec<usize>)> = cert.steps.iter().map(|s| (s.op, s.coords.coords().to_vec())).collect();
    let expected = vec![
        (Op::Shorten, vec![2, 4]),
        (Op::Shorten, (5..=13).collect()),
        (Op::Puncture, vec![4]),
        (Op::Puncture, vec![1]),
    ];
    check(steps == expected, || format!("steps {steps:?}"))?;
    let report = verify_oracle(&rep, &cert).map_err(|e| e.to_string())?;
    check(report.final_equal, || report.render(&cert))?;
    let start = h.cyclic().unwrap().materialize().unwrap();
    let end = cyclic_embed::verify::replay(&cert, &start).map_err(|e| e.to_string())?;
    check(end.rows() == vec![vec![1, 1]], || format!("replay gave {:?}", end.rows()))?;
    Ok("m=3 f=1111 g=1+X^2+X^4+X^5 e=15 nprime=15 kprime=10, 4 steps, oracle recovers [[1,1]]".into())
}

/// Certificates gathered for criteria 2 and 8.
fn corpus_certificates() -> Result<Vec<(LinearCode, Certificate)>, String> {
    let mut out = Vec::new();
    for n in 1..=2 {
        for k in 1..=n {
            for c in binary_codes(n, k) {
                let cert = build_certificate(&c, 1 << 16).map_err(|e| format!("{c:?}: {e}"))?;
                out.push((c, cert));
            }
        }
    }
    let fields = [FieldSpec::prime(2), FieldSpec::prime(3)];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut sampled: Vec<LinearCode> = Vec::new();
    for attempt in 0..5000 {
        if sampled.len() == 24 {
            break;
        }
        let c = random_code(&fields[attempt % 2], 3, 2, &mut rng);
        if sampled.contains(&c) {
            continue;
        }
        match build_certificate(&c, 1 << 16) {
            Ok(cert) => {
                sampled.push(c.clone());
                out.push((c, cert));
            }
            Err(EmbedError::Budget { .. }) => {}
            Err(e) => return Err(format!("{c:?}: {e}")),
        }
    }
    if sampled.len() < 20 {
        return Err(format!("only {} sampled codes fit nprime <= 2^16", sampled.len()));
    }
    Ok(out)
}

fn criterion_2(certs: &[(LinearCode, Certificate)]) -> Outcome {
    let mut oracle = 0;
    let mut structural = 0;
    for (c, cert) in certs {
        let report = verify_with(c, cert, ModeChoice::Auto).map_err(|e| format!("{c:?}: {e}"))?;
        check(report.final_equal, || format!("{c:?}\n{}", report.render(cert)))?;
        if cert.header.nprime <= ORACLE_LIMIT {
            oracle += 1;
        } else {
            structural += 1;
        }
    }
    Ok(format!("{} codes ({oracle} oracle, {structural} structural), all final_equal", certs.len()))
}

fn criterion_3() -> Outcome {
    let fields = [FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::new(2, 2, None).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let count = 240;
    for i in 0..count {
        let field = &fields[i % 3];
        let c = random_code(field, 4, 3, &mut rng);
        let basis = normalize_basis(&c);
        let f = build_f(&basis);
        let (n, k, p) = (c.n(), c.k(), field.p() as usize);
        let m = f.len() - 1;
        check(m == 2 * n * (k - 1) + n + 1 && m == block_length(n, k), || format!("{c:?}: m={m}"))?;
        check(f[0] == 1 && f[m] == 1, || format!("{c:?}: f={f:?}"))?;
        let g = build_g(field, &f).map_err(|e| e.to_string())?;
        check(g.degree() == Some((m - 1) * p + 1), || format!("{c:?}: deg g"))?;
        let dg = g.derivative();
        check(dg == Poly::monomial(field, 1, (m - 1) * p), || format!("{c:?}: g' = {dg:?}"))?;
        check(g.gcd(&dg).unwrap().is_one(), || format!("{c:?}: gcd(g, g') != 1"))?;
    }
    Ok(format!("{count} random bases over F_2, F_3, F_4"))
}

/// Least `e` with `X^e = 1 mod g`, by stepping `X^i mod g`; `None` past `cap`.
fn brute_order(g: &[Elem], field: &FieldSpec, cap: u64) -> Option<u64> {
    let d = g.len() - 1;
    let mut state = vec![0; d];
    let mut one = vec![0; d];
    one[0] = 1;
    if d == 1 {
        state[0] = field.neg(g[0]);
    } else {
        state[1] = 1;
    }
    for e in 1..=cap {
        if state == one {
            return Some(e);
        }
        // multiply by X and reduce with the monic g
        let top = state[d - 1];
        for i in (1..d).rev() {
            state[i] = field.sub(state[i - 1], field.mul(top, g[i]));
        }
        state[0] = field.neg(field.mul(top, g[0]));
    }
    None
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut tested = [0usize; 2];
    for (slot, field) in [FieldSpec::prime(2), FieldSpec::prime(3)].into_iter().enumerate() {
        let mut attempts = 0;
        while tested[slot] < 120 {
            attempts += 1;
            if attempts > 100_000 {
                return Err(format!("too few testable polynomials over {field:?}"));
            }
            let d = rng.gen_range(1..=12);
            let mut coeffs: Vec<Elem> = (0..d).map(|_| rng.gen_range(0..field.q())).collect();
            coeffs.push(1);
            if coeffs[0] == 0 {
                continue;
            }
            let g = Poly::new(&field, coeffs.clone()).unwrap();
            if !g.is_squarefree() {
                continue;
            }
            let Some(expected) = brute_order(&coeffs, &field, 1 << 16) else { continue };
            let got = g.order_of_x().map_err(|e| format!("{g:?}: {e}"))?;
            check(got == expected, || format!("{g:?}: order_of_x={got} brute={expected}"))?;
            tested[slot] += 1;
        }
    }
    Ok(format!("{} polynomials over F_2, {} over F_3", tested[0], tested[1]))
}

fn puncture_by_enumeration(c: &LinearCode, l: &CoordSet) -> Result<LinearCode, CodeError> {
    let keep = l.complement_zero_based();
    let words: Vec<Vec<Elem>> = c
        .codewords()?
        .into_iter()
        .map(|w| keep.iter().map(|&j| w[j]).collect::<Vec<_>>())
        .filter(|w| w.iter().any(|&x| x != 0))
        .collect();
    if words.is_empty() {
        return Err(CodeError::PunctureCollapse);
    }
    LinearCode::new(c.field(), words)
}

fn small_sets(n: usize) -> Vec<CoordSet> {
    let mut out = vec![CoordSet::empty(n)];
    for a in 1..=n {
        out.push(CoordSet::new(vec![a], n).unwrap());
        for b in a + 1..=n {
            out.push(CoordSet::new(vec![a, b], n).unwrap());
        }
    }
    out
}

fn compare_ops(c: &LinearCode, l: &CoordSet) -> Result<(), String> {
    let fast = c.shorten(l);
    let slow = c.enumerate_shorten_oracle(l);
    check(fast == slow, || format!("shorten {c:?} at {:?}: {fast:?} vs {slow:?}", l.coords()))?;
    if l.len() < c.n() {
        let fast = c.puncture(l);
        let slow = puncture_by_enumeration(c, l);
        check(fast == slow, || format!("puncture {c:?} at {:?}: {fast:?} vs {slow:?}", l.coords()))?;
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    let mut pairs = 0;
    let mut codes = 0;
    for n in 1..=6 {
        let sets = small_sets(n);
        for k in 1..=n.min(4) {
            for c in binary_codes(n, k) {
                codes += 1;
                for l in &sets {
                    compare_ops(&c, l)?;
                    pairs += 1;
                }
            }
        }
    }
    let f3 = FieldSpec::prime(3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let c = random_code(&f3, 6, 4, &mut rng);
        let mut all: Vec<usize> = (1..=c.n()).collect();
        all.shuffle(&mut rng);
        let mut pick = all[..rng.gen_range(0..=c.n())].to_vec();
        pick.sort_unstable();
        compare_ops(&c, &CoordSet::new(pick, c.n()).unwrap())?;
    }
    Ok(format!("{codes} binary codes x all |L| <= 2 ({pairs} pairs), plus 500 ternary pairs"))
}

fn criterion_6() -> Outcome {
    let fields = [FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::new(2, 2, None).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut done = 0;
    while done < 120 {
        let field = &fields[done % 3];
        let p = field.p() as usize;
        let n = rng.gen_range(2..=1024);
        if n % p == 0 {
            continue;
        }
        let xn = Poly::x_pow_minus_one(field, n);
        let r: Vec<Elem> = (0..rng.gen_range(1..n)).map(|_| rng.gen_range(0..field.q())).collect();
        let Ok(r) = Poly::new(field, r) else { continue };
        if r.is_zero() {
            continue;
        }
        let common = xn.gcd(&r).unwrap();
        let g = if rng.gen_bool(0.5) { common } else { xn.divrem(&common).unwrap().0 };
        if g.degree() >= Some(n) {
            continue;
        }
        let c = CyclicCode::new(n, g).map_err(|e| e.to_string())?;
        let density = [0.05, 0.3, 0.7, 0.95][rng.gen_range(0..4)];
        let cols: Vec<usize> = (0..n).filter(|_| rng.gen_bool(density)).collect();
        let l = CoordSet::new(cols.iter().map(|j| j + 1).collect(), n).unwrap();
        let fast = c.restricted_rank(&l).map_err(|e| e.to_string())?;
        let slow = if cols.is_empty() {
            0
        } else {
            let rows: Vec<Vec<Elem>> = c.rows().map(|row| cols.iter().map(|&j| row[j]).collect()).collect();
            LinearCode::new(field, rows).map(|m| m.k()).unwrap_or(0)
        };
        check(fast == slow, || format!("n={n} g={:?} |L|={}: streaming {fast}, materialized {slow}", c.generator(), cols.len()))?;
        done += 1;
    }
    Ok(format!("{done} random cyclic codes with nprime <= 1024 over F_2, F_3, F_4"))
}

fn mutate(cert: &Certificate, rng: &mut ChaCha8Rng) -> (Certificate, &'static str) {
    let mut m = cert.clone();
    match rng.gen_range(0..3) {
        0 => {
            let s = &mut m.steps[rng.gen_range(0..cert.steps.len())];
            let c = rng.gen_range(1..=s.len_before);
            let mut coords = s.coords.coords().to_vec();
            match coords.binary_search(&c) {
                Ok(i) => {
                    coords.remove(i);
                }
                Err(i) => coords.insert(i, c),
            }
            s.coords = CoordSet::new(coords, s.len_before).unwrap();
            (m, "coordinate")
        }
        1 => {
            let field = cert.header.field.clone();
            let mut coeffs = cert.header.g.coeffs().to_vec();
            let i = rng.gen_range(0..coeffs.len());
            let old = coeffs[i];
            coeffs[i] = (old + rng.gen_range(1..field.q())) % field.q();
            m.header.g = Poly::new(&field, coeffs).unwrap();
            (m, "g coefficient")
        }
        _ => {
            let s = &mut m.steps[rng.gen_range(0..cert.steps.len())];
            s.dim_after = if s.dim_after == 0 || rng.gen_bool(0.5) { s.dim_after + 1 } else { s.dim_after - 1 };
            (m, "expected dim")
        }
    }
}

fn criterion_7() -> Outcome {
    let f2 = FieldSpec::prime(2);
    let f3 = FieldSpec::prime(3);
    let f4 = FieldSpec::new(2, 2, None).unwrap();
    let bases = [
        code(&f2, &[&[1, 1]]),
        code(&f2, &[&[1, 0], &[0, 1]]),
        code(&f2, &[&[0, 1, 1]]),
        code(&f3, &[&[1, 2]]),
        code(&f4, &[&[1, 3]]),
    ];
    let certs: Vec<(LinearCode, Certificate)> = bases.into_iter().map(|c| (c.clone(), build_certificate(&c, 4096).unwrap())).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let total = 150;
    let mut by_kind = std::collections::BTreeMap::new();
    for i in 0..total {
        let (c, cert) = &certs[i % certs.len()];
        let (bad, kind) = mutate(cert, &mut rng);
        let caught_auto = !verify_auto(c, &bad);
        let caught_structural = !verify_structural(c, &bad).map(|r| r.final_equal).unwrap_or(false);
        check(caught_auto && caught_structural, || format!("{kind} mutation not caught on {c:?}:\n{}", bad.to_text()))?;
        *by_kind.entry(kind).or_insert(0) += 1;
    }
    let kinds: Vec<String> = by_kind.iter().map(|(k, v)| format!("{v} {k}")).collect();
    Ok(format!("{total} mutations all rejected ({})", kinds.join(", ")))
}

fn criterion_8(certs: &[(LinearCode, Certificate)]) -> Outcome {
    for (c, cert) in certs {
        let h = &cert.header;
        check(2 * h.kprime >= h.nprime && h.nprime % h.p() != 0, || format!("{c:?}: nprime={} kprime={}", h.nprime, h.kprime))?;
        check(cert.steps.iter().any(|s| s.stage == Stage::D) == (h.k > 1), || format!("{c:?}: stage D presence"))?;
    }
    Ok(format!("{} certificates satisfy 2 kprime >= nprime and p does not divide nprime", certs.len()))
}

fn main() -> ExitCode {
    let mut all_ok = true;
    let mut report = |id: usize, name: &str, limit: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let t0 = Instant::now();
        let mut outcome = f();
        let elapsed = t0.elapsed();
        if let (Ok(_), Some(limit)) = (&outcome, limit) {
            if elapsed > limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(detail) => println!("criterion {id} {name}: PASS ({detail}; {elapsed:.2?})"),
            Err(why) => {
                all_ok = false;
                println!("criterion {id} {name}: FAIL ({why})");
            }
        }
    };
    let secs = |s| Some(Duration::from_secs(s));
    report(1, "worked example", secs(1), &mut criterion_1);
    let t0 = Instant::now();
    let certs = corpus_certificates();
    let build_time = t0.elapsed();
    report(2, "small-corpus theorem check", secs(300).map(|d| d.saturating_sub(build_time)), &mut || {
        certs.as_ref().map_err(Clone::clone).and_then(|c| criterion_2(c))
    });
    report(3, "construction invariants", secs(10), &mut criterion_3);
    report(4, "order_of_x oracle", secs(60), &mut criterion_4);
    report(5, "shorten/puncture oracle", secs(120), &mut criterion_5);
    report(6, "streaming rank oracle", secs(60), &mut criterion_6);
    report(7, "mutation sensitivity", secs(60), &mut criterion_7);
    report(8, "rate bound", None, &mut || certs.as_ref().map_err(Clone::clone).and_then(|c| criterion_8(c)));
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
