//! Univariate polynomials over `F_q`, their factorization, and the
//! multiplicative order of `X` modulo a squarefree polynomial.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arith::{self, ArithError};
use crate::gf::{Elem, FieldError, FieldSpec};

/// Seed for the equal-degree splitting so factorizations are reproducible.
const SPLIT_SEED: u64 = 0x00c0_ffee_5eed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("polynomials over different fields")]
    FieldMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials")]
    GcdOfZeros,
    #[error("modulus must be nonconstant")]
    ConstantModulus,
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("polynomial is constant")]
    Constant,
    #[error("polynomial has zero constant term")]
    ZeroConstantTerm,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("order of X exceeds 64 bits (irreducible factor of degree {0})")]
    OrderOverflow(usize),
    #[error(transparent)]
    Factoring(#[from] ArithError),
    #[error("malformed polynomial text: {0}")]
    Parse(String),
}

/// A polynomial in ascending-coefficient form with no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<Elem>,
}

/// `unit * prod(factor^multiplicity)`, factors monic irreducible and sorted
/// by degree then encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Elem,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn expand(&self, field: &FieldSpec) -> Poly {
        self.factors.iter().fold(Poly::constant(field, self.unit), |acc, (f, m)| {
            (0..*m).fold(acc, |acc, _| &acc * f)
        })
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

impl Poly {
    pub fn new(field: &FieldSpec, coeffs: Vec<Elem>) -> Result<Self, PolyError> {
        if let Some(&c) = coeffs.iter().find(|&&c| !field.contains(c)) {
            return Err(FieldError::ElementOutOfRange { value: c as u64, q: field.q() }.into());
        }
        Ok(Self::from_raw(field, coeffs))
    }

    fn from_raw(field: &FieldSpec, mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldSpec) -> Self {
        Self::constant(field, 1)
    }

    pub fn x(field: &FieldSpec) -> Self {
        Self::monomial(field, 1, 1)
    }

    pub fn constant(field: &FieldSpec, c: Elem) -> Self {
        Self::from_raw(field, vec![c])
    }

    pub fn monomial(field: &FieldSpec, c: Elem, degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c;
        Self::from_raw(field, coeffs)
    }

    /// `X^n - 1`.
    pub fn x_pow_minus_one(field: &FieldSpec, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        coeffs[0] = field.sub(coeffs[0], 1);
        Self::from_raw(field, coeffs)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> Option<Elem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(1)
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn scale(&self, c: Elem) -> Self {
        let f = &self.field;
        Self::from_raw(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Scales to leading coefficient 1; the zero polynomial is returned as is.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None | Some(1) => self.clone(),
            Some(lc) => self.scale(self.field.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    fn same_field(&self, other: &Poly) -> Result<(), PolyError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(PolyError::FieldMismatch)
        }
    }

    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.same_field(divisor)?;
        let f = &self.field;
        let db = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let inv_lc = f.inv(divisor.coeffs[db])?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let mut quot = vec![0; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = rem[i];
            if c == 0 {
                continue;
            }
            let t = f.mul(c, inv_lc);
            quot[i - db] = t;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                if b != 0 {
                    let k = i - db + j;
                    rem[k] = f.sub(rem[k], f.mul(t, b));
                }
            }
        }
        rem.truncate(db);
        Ok((Self::from_raw(f, quot), Self::from_raw(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Monic gcd by Euclid's algorithm.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.same_field(other)?;
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::GcdOfZeros);
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Formal derivative; coefficients are multiplied by their degree mod `p`.
    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let p = f.p() as usize;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| {
                let k = (i % p) as Elem;
                // k < p is the field element k * 1 in every F_{p^s}
                f.mul(c, k)
            })
            .collect();
        Self::from_raw(f, coeffs)
    }

    /// `self^exponent mod modulus` by square-and-multiply.
    pub fn powmod(&self, mut exponent: u64, modulus: &Poly) -> Result<Poly, PolyError> {
        self.same_field(modulus)?;
        match modulus.degree() {
            None | Some(0) => return Err(PolyError::ConstantModulus),
            _ => {}
        }
        let mut base = self.rem(modulus)?;
        let mut acc = Poly::one(&self.field);
        while exponent > 0 {
            if exponent & 1 == 1 {
                acc = (&acc * &base).rem(modulus)?;
            }
            exponent >>= 1;
            if exponent > 0 {
                base = (&base * &base).rem(modulus)?;
            }
        }
        Ok(acc)
    }

    /// `X^n mod self`.
    pub fn x_pow_mod(&self, n: u64) -> Result<Poly, PolyError> {
        Poly::x(&self.field).powmod(n, self)
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).map(|g| g.is_one()).unwrap_or(false),
        }
    }

    /// Ben-Or test: no factor of degree `i <= deg/2` divides `X^(q^i) - X`.
    pub fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        let f = self.monic();
        let x = Poly::x(&self.field);
        let mut h = x.rem(&f).expect("nonconstant");
        for _ in 1..=d / 2 {
            h = h.powmod(self.field.q() as u64, &f).expect("nonconstant");
            if !(&h - &x).gcd(&f).expect("f nonzero").is_one() {
                return false;
            }
        }
        true
    }

    /// Complete factorization: squarefree decomposition, distinct-degree
    /// splitting, then seeded equal-degree splitting.
    pub fn factor(&self) -> Result<Factorization, PolyError> {
        let unit = self.leading().ok_or(PolyError::ZeroPolynomial)?;
        let monic = self.monic();
        let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
        let mut factors: Vec<(Poly, u32)> = Vec::new();
        if monic.degree() > Some(0) {
            for (part, mult) in squarefree_parts(&monic) {
                for (block, d) in distinct_degree(&part) {
                    for irr in equal_degree(&block, d, &mut rng) {
                        factors.push((irr, mult));
                    }
                }
            }
        }
        factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        let mut merged: Vec<(Poly, u32)> = Vec::with_capacity(factors.len());
        for (f, m) in factors {
            match merged.last_mut() {
                Some((g, n)) if *g == f => *n += m,
                _ => merged.push((f, m)),
            }
        }
        Ok(Factorization { unit, factors: merged })
    }

    /// Orders polynomials by degree, then by integer encoding
    /// `sum c_i q^i` (highest coefficient most significant).
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// Least `e >= 1` with `X^e = 1 mod self`.
    pub fn order_of_x(&self) -> Result<u64, PolyError> {
        self.order_of_x_with_budget(arith::DEFAULT_RHO_BUDGET)
    }

    /// Like [`Poly::order_of_x`], with an explicit Pollard-rho budget for
    /// factoring the group orders `q^d - 1`.
    pub fn order_of_x_with_budget(&self, budget: u64) -> Result<u64, PolyError> {
        match self.degree() {
            None => return Err(PolyError::ZeroPolynomial),
            Some(0) => return Err(PolyError::Constant),
            _ => {}
        }
        if self.coeff(0) == 0 {
            return Err(PolyError::ZeroConstantTerm);
        }
        if !self.is_squarefree() {
            return Err(PolyError::NotSquarefree);
        }
        let q = self.field.q() as u64;
        let mut order = 1u64;
        for (irr, _) in self.factor()?.factors {
            let d = irr.degree().expect("nonconstant factor");
            let group = u32::try_from(d)
                .ok()
                .and_then(|d| q.checked_pow(d))
                .map(|v| v - 1)
                .ok_or(PolyError::OrderOverflow(d))?;
            let mut local = group;
            for (r, e) in arith::factor(group, budget)? {
                for _ in 0..e {
                    if irr.x_pow_mod(local / r)?.is_one() {
                        local /= r;
                    } else {
                        break;
                    }
                }
            }
            order = arith::lcm(order, local).ok_or(PolyError::OrderOverflow(d))?;
        }
        Ok(order)
    }

    /// Parses `deg=<d>; coeffs=<c0,c1,...>`.
    pub fn parse_text(field: &FieldSpec, text: &str) -> Result<Poly, PolyError> {
        let bad = || PolyError::Parse(text.to_string());
        let (deg_part, coeff_part) = text.trim().split_once(';').ok_or_else(bad)?;
        let deg = deg_part.trim().strip_prefix("deg=").ok_or_else(bad)?;
        let list = coeff_part.trim().strip_prefix("coeffs=").ok_or_else(bad)?;
        let coeffs = if list.is_empty() {
            Vec::new()
        } else {
            list.split(',').map(|c| c.trim().parse::<Elem>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad())?
        };
        let poly = Poly::new(field, coeffs.clone())?;
        let expected = match deg {
            "-inf" => None,
            d => Some(d.parse::<usize>().map_err(|_| bad())?),
        };
        if poly.degree() != expected || poly.coeffs.len() != coeffs.len() {
            return Err(bad());
        }
        Ok(poly)
    }

    fn pth_root(&self) -> Poly {
        let f = &self.field;
        let p = f.p() as usize;
        let coeffs = self.coeffs.iter().step_by(p).map(|&c| f.pth_root(c)).collect();
        Self::from_raw(f, coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.degree() {
            None => write!(f, "deg=-inf; coeffs="),
            Some(d) => {
                let list = self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
                write!(f, "deg={d}; coeffs={list}")
            }
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "X".to_string(),
                (1, c) => format!("{c}X"),
                (i, 1) => format!("X^{i}"),
                (i, c) => format!("{c}X^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join("+"))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert!(self.field == rhs.field, "polynomials over different fields");
        let f = &self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_raw(f, (0..n).map(|i| f.add(self.coeff(i), rhs.coeff(i))).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = &self.field;
        Poly::from_raw(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert!(self.field == rhs.field, "polynomials over different fields");
        let f = &self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                if b != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        Poly::from_raw(f, out)
    }
}

fn exact_div(a: &Poly, b: &Poly) -> Poly {
    let (q, r) = a.divrem(b).expect("nonzero divisor");
    debug_assert!(r.is_zero());
    q
}

/// Squarefree decomposition of a monic nonconstant polynomial into coprime
/// squarefree parts with multiplicities.
fn squarefree_parts(f: &Poly) -> Vec<(Poly, u32)> {
    let p = f.field.p();
    let mut out = Vec::new();
    let d = f.derivative();
    if d.is_zero() {
        for (g, m) in squarefree_parts(&f.pth_root()) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&d).expect("f nonzero");
    let mut w = exact_div(f, &c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c).expect("w nonzero");
        let fac = exact_div(&w, &y);
        if !fac.is_one() {
            out.push((fac, i));
        }
        i += 1;
        c = exact_div(&c, &y);
        w = y;
    }
    if !c.is_one() {
        for (g, m) in squarefree_parts(&c.pth_root()) {
            out.push((g, m * p));
        }
    }
    out
}

/// Splits a monic squarefree polynomial into products of irreducibles of
/// equal degree, returned as `(product, degree)`.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = &f.field;
    let q = field.q() as u64;
    let x = Poly::x(field);
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut h = x.rem(&rest).expect("nonconstant");
    let mut i = 1;
    while rest.degree().is_some_and(|d| d >= 2 * i) {
        h = h.powmod(q, &rest).expect("nonconstant");
        let g = (&h - &x).gcd(&rest).expect("rest nonzero");
        if !g.is_one() {
            rest = exact_div(&rest, &g);
            out.push((g, i));
            if rest.degree() > Some(0) {
                h = h.rem(&rest).expect("nonconstant");
            }
        }
        i += 1;
    }
    if let Some(d) = rest.degree().filter(|&d| d > 0) {
        out.push((rest, d));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct irreducibles of
/// degree `d`.
fn equal_degree(f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.clone()];
    }
    let field = &f.field;
    let q = field.q() as u64;
    loop {
        let a = Poly::from_raw(field, (0..n).map(|_| rng.gen_range(0..field.q())).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if q % 2 == 1 {
            // a^((q^d - 1)/2) = (prod_{i<d} a^(q^i))^((q-1)/2)
            let mut frob = a.clone();
            let mut norm = a.clone();
            for _ in 1..d {
                frob = frob.powmod(q, f).expect("nonconstant");
                norm = (&norm * &frob).rem(f).expect("nonconstant");
            }
            &norm.powmod((q - 1) / 2, f).expect("nonconstant") - &Poly::one(field)
        } else {
            // absolute trace down to F_2
            let steps = field.s() as usize * d;
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..steps {
                t = (&t * &t).rem(f).expect("nonconstant");
                acc = &acc + &t;
            }
            acc
        };
        if b.is_zero() {
            continue;
        }
        let g = b.gcd(f).expect("f nonzero");
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&exact_div(f, &g), d, rng));
            return out;
        }
    }
}
