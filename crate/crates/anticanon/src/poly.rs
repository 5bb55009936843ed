//! Sparse multivariate polynomials over the rationals in the fixed variable
//! set `z0, z1, z2, z3, z4, a, a1, a2`.
//!
//! Representation: a map from exponent vectors to nonzero `BigRational`
//! coefficients. The derived ordering on `[u16; 8]` is exactly the lex order
//! with `z0 > z1 > z2 > z3 > z4 > a > a1 > a2`, so the leading monomial is
//! the largest key. Display renders terms in descending lex order and the
//! parser accepts everything Display emits, so printing round-trips bit for
//! bit.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Number of ring variables.
pub const NVARS: usize = 8;

/// Variable names in lex-priority order. The first five are the projective
/// scroll coordinates, the last three are parameters.
pub const VAR_NAMES: [&str; NVARS] = ["z0", "z1", "z2", "z3", "z4", "a", "a1", "a2"];

/// Indices of the coordinate variables `z0..z4`.
pub const Z_RANGE: std::ops::Range<usize> = 0..5;

pub const A: usize = 5;
pub const A1: usize = 6;
pub const A2: usize = 7;

/// Exponent vector. Array comparison gives the monomial order.
pub type Exp = [u16; NVARS];

pub const EXP_ONE: Exp = [0; NVARS];

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for a fraction.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    // Invariant: no zero coefficients are stored.
    terms: BTreeMap<Exp, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(EXP_ONE, c);
        }
        p
    }

    pub fn var(i: usize) -> Self {
        assert!(i < NVARS);
        let mut e = EXP_ONE;
        e[i] = 1;
        Poly::monomial(e, Rat::one())
    }

    pub fn monomial(e: Exp, c: Rat) -> Self {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&EXP_ONE))
    }

    /// The constant term (zero if absent).
    pub fn constant_term(&self) -> Rat {
        self.terms.get(&EXP_ONE).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exp, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest monomial in lex order, with its coefficient.
    pub fn leading_term(&self) -> Option<(&Exp, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, e: &Exp) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    fn insert_add(&mut self, e: Exp, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                *old += c;
                if old.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::default();
        for (e, c) in &self.terms {
            out.terms.insert(*e, -c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::default();
        for (e, k) in &self.terms {
            out.terms.insert(*e, k * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e = *e1;
                for (k, x) in e.iter_mut().zip(e2.iter()) {
                    *k = k.checked_add(*x).expect("exponent overflow");
                }
                out.insert_add(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Substitutes `value` for variable `i`.
    pub fn subst_var(&self, i: usize, value: &Poly) -> Poly {
        let mut out = Poly::default();
        // Cache powers of the replacement since exponents repeat.
        let mut powers: Vec<Poly> = vec![Poly::one()];
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            let mut rest = *e;
            rest[i] = 0;
            let contrib = powers[k].mul(&Poly::monomial(rest, c.clone()));
            out = out.add(&contrib);
        }
        out
    }

    /// Substitutes rational values for a subset of variables.
    pub fn eval_partial(&self, values: &[(usize, Rat)]) -> Poly {
        let mut out = self.clone();
        for (i, v) in values {
            out = out.subst_var(*i, &Poly::constant(v.clone()));
        }
        out
    }

    /// Total degree in the coordinate variables `z0..z4` of a monomial.
    pub fn z_degree(e: &Exp) -> u32 {
        Z_RANGE.map(|i| e[i] as u32).sum()
    }

    /// Max total z-degree over all terms, or None for the zero polynomial.
    pub fn max_z_degree(&self) -> Option<u32> {
        self.terms.keys().map(Poly::z_degree).max()
    }

    /// True when every monomial has z-degree exactly `d`.
    pub fn is_z_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|e| Poly::z_degree(e) == d)
    }

    /// True when no parameter variable occurs.
    pub fn is_parameter_free(&self) -> bool {
        self.terms.keys().all(|e| e[A] == 0 && e[A1] == 0 && e[A2] == 0)
    }

    /// Coefficient of variable `i` as a polynomial in the remaining
    /// variables: sum of `term / x_i` over terms where `x_i` appears exactly
    /// once and the caller guarantees linearity in `x_i`.
    pub fn linear_coeff_of(&self, i: usize) -> Poly {
        let mut out = Poly::default();
        for (e, c) in &self.terms {
            if e[i] == 1 {
                let mut rest = *e;
                rest[i] = 0;
                out.insert_add(rest, c.clone());
            }
        }
        out
    }

    /// Parses the canonical text form, accepting `+ - * ^ ( )`, integer and
    /// `p/q` coefficient literals, and the eight variable names.
    pub fn parse(input: &str) -> Result<Poly> {
        Parser::new(input).parse_all()
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if pos == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            let mono = render_monomial(e);
            match mono {
                None => write!(f, "{abs}")?,
                Some(m) => {
                    if abs.is_one() {
                        write!(f, "{m}")?;
                    } else {
                        write!(f, "{abs}*{m}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn render_monomial(e: &Exp) -> Option<String> {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(VAR_NAMES[i].to_string()),
            _ => parts.push(format!("{}^{}", VAR_NAMES[i], k)),
        }
    }
    if parts.is_empty() {
        None
    } else {
        Some(parts.join("*"))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn parse_all(&mut self) -> Result<Poly> {
        let p = self.parse_expr()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err("trailing input");
        }
        Ok(p)
    }

    fn parse_expr(&mut self) -> Result<Poly> {
        let mut acc = self.parse_term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.parse_term()?);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.parse_term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Poly> {
        let mut acc = self.parse_factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.parse_factor()?);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Poly> {
        let mut sign = false;
        while let Some(b'-') = self.peek() {
            self.pos += 1;
            sign = !sign;
        }
        let mut base = self.parse_atom()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            let n = self.parse_uint()?;
            if n > 64 {
                return self.err("exponent too large");
            }
            base = base.pow(n as u32);
        }
        Ok(if sign { base.neg() } else { base })
    }

    fn parse_atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                match self.bump() {
                    Some(b')') => Ok(inner),
                    _ => self.err("expected ')'"),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.parse_uint()?;
                if let Some(b'/') = self.peek() {
                    self.pos += 1;
                    let d = self.parse_uint()?;
                    if d == 0 {
                        return self.err("zero denominator");
                    }
                    Ok(Poly::constant(Rat::new(BigInt::from(n), BigInt::from(d))))
                } else {
                    Ok(Poly::constant(Rat::from_integer(BigInt::from(n))))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric())
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match VAR_NAMES.iter().position(|v| *v == name) {
                    Some(i) => Ok(Poly::var(i)),
                    None => {
                        self.pos = start;
                        self.err(format!("unknown variable '{name}'"))
                    }
                }
            }
            _ => self.err("expected atom"),
        }
    }

    fn parse_uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse {
                offset: start,
                message: "integer out of range".into(),
            })
    }
}

/// The quadric cone equation of the scroll, `z0^2 - z1*z2`.
pub fn scroll_quadric() -> Poly {
    Poly::parse("z0^2 - z1*z2").unwrap()
}
