//! Exact arithmetic in `F_q`, `q = p^s`.
//!
//! Elements are plain integers in `[0, q)`. The base-`p` digits of an element
//! (constant digit first) are its coordinates in the polynomial basis
//! `1, a, a^2, ..., a^(s-1)` where `a` is a root of the modulus. Prime fields
//! use modular arithmetic directly; extension fields use log/antilog tables
//! built once at construction.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::arith;
use crate::poly::Poly;

/// Canonical integer encoding of a field element.
pub type Elem = u32;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {0} exceeds the supported maximum 2^16")]
    TooLarge(u128),
    #[error("modulus must have degree {expected}, got {got}")]
    ModulusDegree { expected: u32, got: usize },
    #[error("modulus is not monic")]
    ModulusNotMonic,
    #[error("modulus is reducible over F_{0}")]
    ModulusReducible(u32),
    #[error("modulus coefficient {0} is not in F_p")]
    ModulusCoefficient(u32),
    #[error("prime fields take no modulus")]
    UnexpectedModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {value} is not an element of F_{q}")]
    ElementOutOfRange { value: u64, q: u32 },
    #[error("digit {digit} out of range for characteristic {p}")]
    DigitOutOfRange { digit: u32, p: u32 },
    #[error("expected {expected} digits, got {got}")]
    DigitCount { expected: u32, got: usize },
    #[error("malformed field header: {0}")]
    Header(String),
}

struct Tables {
    /// `exp[i] = gen^i`, doubled so that `exp[log a + log b]` needs no reduction.
    exp: Vec<Elem>,
    log: Vec<u32>,
}

struct Inner {
    p: u32,
    s: u32,
    q: u32,
    modulus: Option<Vec<Elem>>,
    tables: Option<Tables>,
}

/// The field `F_q`. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.s == other.0.s && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q())?;
        if let Some(m) = &self.0.modulus {
            write!(f, "[{m:?}]")?;
        }
        Ok(())
    }
}

impl fmt::Display for FieldSpec {
    /// The field header line shared by all file formats.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} p={} s={} modulus=", self.q(), self.p(), self.s())?;
        match &self.0.modulus {
            Some(m) => write!(f, "{}", join(m)),
            None => write!(f, "-"),
        }
    }
}

fn join(v: &[Elem]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

impl FieldSpec {
    /// Builds `F_{p^s}`. For `s > 1` the modulus is given as ascending
    /// coefficients (length `s + 1`, monic); when absent the smallest monic
    /// irreducible polynomial by integer encoding is chosen.
    pub fn new(p: u64, s: u32, modulus: Option<&[Elem]>) -> Result<Self, FieldError> {
        if !arith::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if s == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u128).pow(s);
        if q > MAX_ORDER as u128 {
            return Err(FieldError::TooLarge(q));
        }
        let p = p as u32;
        if s == 1 {
            if modulus.is_some() {
                return Err(FieldError::UnexpectedModulus);
            }
            return Ok(Self::prime(p));
        }
        let base = Self::prime(p);
        let modulus = match modulus {
            Some(m) => {
                if m.len() != s as usize + 1 {
                    return Err(FieldError::ModulusDegree { expected: s, got: m.len().saturating_sub(1) });
                }
                if let Some(&c) = m.iter().find(|&&c| c >= p) {
                    return Err(FieldError::ModulusCoefficient(c));
                }
                if m[s as usize] != 1 {
                    return Err(FieldError::ModulusNotMonic);
                }
                let poly = Poly::new(&base, m.to_vec()).expect("coefficients checked");
                if !poly.is_irreducible() {
                    return Err(FieldError::ModulusReducible(p));
                }
                m.to_vec()
            }
            None => smallest_irreducible(&base, s),
        };
        let q = q as u32;
        let tables = build_tables(p, s, q, &modulus);
        Ok(FieldSpec(Arc::new(Inner { p, s, q, modulus: Some(modulus), tables: Some(tables) })))
    }

    /// The prime field `F_p`. Panics if `p` is not a prime below 2^16.
    pub fn prime(p: u32) -> Self {
        assert!(arith::is_prime(p as u64) && (p as u64) < MAX_ORDER, "F_{p} is not a supported prime field");
        FieldSpec(Arc::new(Inner { p, s: 1, q: p, modulus: None, tables: None }))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn s(&self) -> u32 {
        self.0.s
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn modulus(&self) -> Option<&[Elem]> {
        self.0.modulus.as_deref()
    }

    pub fn is_binary(&self) -> bool {
        self.0.q == 2
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        a < self.0.q
    }

    pub fn check(&self, a: u64) -> Result<Elem, FieldError> {
        if a < self.0.q as u64 {
            Ok(a as Elem)
        } else {
            Err(FieldError::ElementOutOfRange { value: a, q: self.0.q })
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.0;
        if inner.s == 1 {
            let r = a + b;
            if r >= inner.p { r - inner.p } else { r }
        } else if inner.p == 2 {
            a ^ b
        } else {
            self.digitwise(a, b, |x, y| (x + y) % inner.p)
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let inner = &*self.0;
        if inner.p == 2 {
            a
        } else if inner.s == 1 {
            if a == 0 { 0 } else { inner.p - a }
        } else {
            self.digitwise(a, 0, |x, _| (inner.p - x) % inner.p)
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.0;
        match &inner.tables {
            None => ((a as u64 * b as u64) % inner.p as u64) as Elem,
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let inner = &*self.0;
        Ok(match &inner.tables {
            None => self.pow(a, inner.p as u64 - 2),
            Some(t) => t.exp[((inner.q - 1 - t.log[a as usize]) % (inner.q - 1)) as usize],
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Square-and-multiply exponentiation; `pow(0, 0) = 1`.
    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The unique `b` with `b^p = a` (Frobenius is a bijection on `F_q`).
    pub fn pth_root(&self, a: Elem) -> Elem {
        self.pow(a, (self.0.q / self.0.p) as u64)
    }

    /// Base-`p` digits of `a`, constant digit first, always `s` long.
    pub fn decode(&self, a: Elem) -> Result<Vec<u32>, FieldError> {
        let a = self.check(a as u64)?;
        Ok(self.digits(a))
    }

    pub fn encode(&self, digits: &[u32]) -> Result<Elem, FieldError> {
        let inner = &*self.0;
        if digits.len() != inner.s as usize {
            return Err(FieldError::DigitCount { expected: inner.s, got: digits.len() });
        }
        let mut v = 0u32;
        for &d in digits.iter().rev() {
            if d >= inner.p {
                return Err(FieldError::DigitOutOfRange { digit: d, p: inner.p });
            }
            v = v * inner.p + d;
        }
        Ok(v)
    }

    fn digits(&self, mut a: Elem) -> Vec<u32> {
        let inner = &*self.0;
        let mut out = Vec::with_capacity(inner.s as usize);
        for _ in 0..inner.s {
            out.push(a % inner.p);
            a /= inner.p;
        }
        out
    }

    fn digitwise(&self, a: Elem, b: Elem, f: impl Fn(u32, u32) -> u32) -> Elem {
        let p = self.0.p;
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.0.s {
            out += f(a % p, b % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out
    }

    /// Parses a field header line `q=.. p=.. s=.. modulus=..`.
    pub fn parse_header(line: &str) -> Result<Self, FieldError> {
        let bad = || FieldError::Header(line.to_string());
        let mut q = None;
        let mut p = None;
        let mut s = None;
        let mut modulus = None;
        for tok in line.split_whitespace() {
            let (key, val) = tok.split_once('=').ok_or_else(bad)?;
            match key {
                "q" => q = Some(val.parse::<u64>().map_err(|_| bad())?),
                "p" => p = Some(val.parse::<u64>().map_err(|_| bad())?),
                "s" => s = Some(val.parse::<u32>().map_err(|_| bad())?),
                "modulus" => {
                    modulus = Some(if val == "-" {
                        None
                    } else {
                        Some(
                            val.split(',')
                                .map(|c| c.parse::<Elem>())
                                .collect::<Result<Vec<_>, _>>()
                                .map_err(|_| bad())?,
                        )
                    })
                }
                _ => return Err(bad()),
            }
        }
        let (q, p, s, modulus) = (q.ok_or_else(bad)?, p.ok_or_else(bad)?, s.ok_or_else(bad)?, modulus.ok_or_else(bad)?);
        let field = FieldSpec::new(p, s, modulus.as_deref())?;
        if field.q() as u64 != q {
            return Err(bad());
        }
        Ok(field)
    }
}

fn smallest_irreducible(base: &FieldSpec, s: u32) -> Vec<Elem> {
    let p = base.p();
    let count = p.pow(s);
    (0..count)
        .map(|low| {
            let mut c = base.digits_of(low, s);
            c.push(1);
            c
        })
        .find(|c| c[0] != 0 && Poly::new(base, c.clone()).expect("valid digits").is_irreducible())
        .expect("irreducible polynomials exist in every degree")
}

impl FieldSpec {
    fn digits_of(&self, mut v: u32, len: u32) -> Vec<Elem> {
        let p = self.p();
        (0..len)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }
}

/// Multiplies two digit vectors modulo the monic modulus over `F_p`.
fn slow_mul(p: u32, modulus: &[Elem], a: &[u32], b: &[u32]) -> Vec<u32> {
    let s = modulus.len() - 1;
    let mut prod = vec![0u32; 2 * s - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for deg in (s..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        for (j, &m) in modulus.iter().enumerate().take(s) {
            let shift = deg - s + j;
            prod[shift] = (prod[shift] + (p - c) * m % p) % p;
        }
        prod[deg] = 0;
    }
    prod.truncate(s);
    prod
}

fn build_tables(p: u32, s: u32, q: u32, modulus: &[Elem]) -> Tables {
    let to_digits = |mut v: u32| -> Vec<u32> {
        (0..s)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    };
    let from_digits = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &x| acc * p + x);
    let order = q - 1;
    let prime_factors: Vec<u64> = arith::factor(order as u64, arith::DEFAULT_RHO_BUDGET)
        .expect("small orders always factor")
        .into_iter()
        .map(|(r, _)| r)
        .collect();
    let pow_digits = |g: &[u32], mut e: u64| -> Vec<u32> {
        let mut acc = to_digits(1);
        let mut base = g.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = slow_mul(p, modulus, &acc, &base);
            }
            base = slow_mul(p, modulus, &base, &base);
            e >>= 1;
        }
        acc
    };
    let one = to_digits(1);
    let generator = (2..q)
        .map(to_digits)
        .find(|g| prime_factors.iter().all(|&r| pow_digits(g, order as u64 / r) != one))
        .unwrap_or_else(|| to_digits(1));
    let mut exp = vec![0u32; 2 * order as usize];
    let mut log = vec![0u32; q as usize];
    let mut cur = one;
    for i in 0..order {
        let v = from_digits(&cur);
        exp[i as usize] = v;
        exp[(i + order) as usize] = v;
        log[v as usize] = i;
        cur = slow_mul(p, modulus, &cur, &generator);
    }
    Tables { exp, log }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_fields() -> Vec<FieldSpec> {
        vec![
            FieldSpec::new(2, 1, None).unwrap(),
            FieldSpec::new(3, 1, None).unwrap(),
            FieldSpec::new(2, 2, Some(&[1, 1, 1])).unwrap(),
            FieldSpec::new(5, 1, None).unwrap(),
            FieldSpec::new(7, 1, None).unwrap(),
            FieldSpec::new(2, 3, None).unwrap(),
            FieldSpec::new(3, 2, None).unwrap(),
            FieldSpec::new(2, 4, None).unwrap(),
            FieldSpec::new(13, 1, None).unwrap(),
        ]
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldSpec::new(4, 1, None).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(FieldSpec::new(2, 0, None).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(FieldSpec::new(2, 17, None), Err(FieldError::TooLarge(_))));
        assert_eq!(FieldSpec::new(2, 2, Some(&[1, 0, 1])).unwrap_err(), FieldError::ModulusReducible(2));
        assert!(matches!(FieldSpec::new(2, 2, Some(&[1, 1])), Err(FieldError::ModulusDegree { .. })));
        assert_eq!(FieldSpec::new(3, 2, Some(&[1, 0, 2])).unwrap_err(), FieldError::ModulusNotMonic);
        assert_eq!(FieldSpec::new(2, 1, Some(&[1, 1])).unwrap_err(), FieldError::UnexpectedModulus);
    }

    #[test]
    fn default_moduli() {
        assert_eq!(FieldSpec::new(2, 2, None).unwrap().modulus(), Some(&[1, 1, 1][..]));
        assert_eq!(FieldSpec::new(2, 3, None).unwrap().modulus(), Some(&[1, 1, 0, 1][..]));
        assert_eq!(FieldSpec::new(3, 2, None).unwrap().modulus(), Some(&[1, 0, 1][..]));
        assert_eq!(FieldSpec::new(2, 4, None).unwrap().modulus(), Some(&[1, 1, 0, 0, 1][..]));
    }

    #[test]
    fn small_values() {
        let f2 = FieldSpec::new(2, 1, None).unwrap();
        assert_eq!(f2.add(1, 1), 0);
        let f4 = FieldSpec::new(2, 2, Some(&[1, 1, 1])).unwrap();
        assert_eq!(f4.mul(2, 2), 3);
        assert_eq!(f4.inv(2).unwrap(), 3);
        assert_eq!(f4.inv(0), Err(FieldError::DivisionByZero));
        assert_eq!(f4.decode(3).unwrap(), vec![1, 1]);
        let f9 = FieldSpec::new(3, 2, None).unwrap();
        assert_eq!(f9.decode(5).unwrap(), vec![2, 1]);
        assert_eq!(f2.encode(&[1]).unwrap(), 1);
        assert!(f9.decode(9).is_err());
        assert!(f9.encode(&[3, 0]).is_err());
        assert!(f9.encode(&[1]).is_err());
    }

    #[test]
    fn inverse_matches_exhaustive_search() {
        for f in all_fields() {
            for a in 1..f.q() {
                let brute = (1..f.q()).find(|&b| f.mul(a, b) == 1).unwrap();
                assert_eq!(f.inv(a).unwrap(), brute, "{f:?} a={a}");
            }
        }
    }

    #[test]
    fn axioms_exhaustive_small() {
        for f in all_fields().into_iter().filter(|f| f.q() <= 16) {
            let q = f.q();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.sub(a, a), 0);
                if a != 0 {
                    assert_eq!(f.pow(a, q as u64 - 1), 1);
                }
                assert_eq!(f.pth_root(f.pow(a, f.p() as u64)), a);
                assert_eq!(f.encode(&f.decode(a).unwrap()).unwrap(), a);
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn multiplication_matches_digit_polynomials() {
        let f = FieldSpec::new(3, 3, None).unwrap();
        let m = f.modulus().unwrap().to_vec();
        for a in 0..f.q() {
            for b in 0..f.q() {
                let slow = slow_mul(3, &m, &f.decode(a).unwrap(), &f.decode(b).unwrap());
                assert_eq!(f.decode(f.mul(a, b)).unwrap(), slow);
            }
        }
    }

    #[test]
    fn header_round_trip() {
        for f in all_fields() {
            let line = f.to_string();
            assert_eq!(FieldSpec::parse_header(&line).unwrap(), f);
        }
        assert_eq!(FieldSpec::new(2, 2, None).unwrap().to_string(), "q=4 p=2 s=2 modulus=1,1,1");
        assert_eq!(FieldSpec::prime(2).to_string(), "q=2 p=2 s=1 modulus=-");
        assert!(FieldSpec::parse_header("q=3 p=2 s=1 modulus=-").is_err());
        assert!(FieldSpec::parse_header("q=2 p=2").is_err());
    }
}
