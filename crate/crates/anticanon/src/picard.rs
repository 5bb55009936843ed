//! Intersection lattice of an iterated blowup of the quadric surface `F0`.
//!
//! Basis: the two ruling fibers `f1, f2` and the exceptional classes
//! `e1..en`, with `f1.f2 = 1`, `f1^2 = f2^2 = 0`, `ei.ej = -delta_ij`.
//! Exceptional classes come in conjugate pairs: the real structure swaps
//! `ei` and `e(i + n/2)` while fixing `f1` and `f2`. The canonical class is
//! `K = -2 f1 - 2 f2 + sum ei`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A divisor class, coefficients in the order `[f1, f2, e1, .., en]`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Class(pub Vec<i64>);

impl Class {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn f1_coeff(&self) -> i64 {
        self.0[0]
    }

    pub fn f2_coeff(&self) -> i64 {
        self.0[1]
    }

    pub fn e_coeff(&self, slot: usize) -> i64 {
        self.0[2 + slot]
    }

    pub fn add(&self, other: &Class) -> Class {
        assert_eq!(self.0.len(), other.0.len());
        Class(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Class) -> Class {
        assert_eq!(self.0.len(), other.0.len());
        Class(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Class {
        Class(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Class {
        self.scale(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }
}

impl fmt::Debug for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let name = basis_name(i);
            if !wrote {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            if a == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{a}*{name}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn basis_name(i: usize) -> String {
    match i {
        0 => "f1".to_string(),
        1 => "f2".to_string(),
        _ => format!("e{}", i - 1),
    }
}

/// The lattice of a blowup with `pairs` conjugate pairs of exceptional
/// classes (so `n = 2 * pairs`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub pairs: usize,
}

impl Lattice {
    pub fn new(pairs: usize) -> Self {
        Lattice { pairs }
    }

    pub fn n_exceptional(&self) -> usize {
        2 * self.pairs
    }

    pub fn dim(&self) -> usize {
        2 + self.n_exceptional()
    }

    pub fn zero(&self) -> Class {
        Class(vec![0; self.dim()])
    }

    pub fn f1(&self) -> Class {
        let mut c = self.zero();
        c.0[0] = 1;
        c
    }

    pub fn f2(&self) -> Class {
        let mut c = self.zero();
        c.0[1] = 1;
        c
    }

    /// Exceptional class by 0-based slot; slots `0..pairs` and
    /// `pairs..2*pairs` are swapped by conjugation.
    pub fn e(&self, slot: usize) -> Class {
        assert!(slot < self.n_exceptional());
        let mut c = self.zero();
        c.0[2 + slot] = 1;
        c
    }

    /// Conjugate slot of an exceptional slot.
    pub fn conj_slot(&self, slot: usize) -> usize {
        (slot + self.pairs) % self.n_exceptional()
    }

    pub fn canonical(&self) -> Class {
        let mut c = self.zero();
        c.0[0] = -2;
        c.0[1] = -2;
        for i in 0..self.n_exceptional() {
            c.0[2 + i] = 1;
        }
        c
    }

    pub fn anticanonical(&self) -> Class {
        self.canonical().neg()
    }

    /// Intersection pairing.
    pub fn pair(&self, x: &Class, y: &Class) -> i64 {
        assert_eq!(x.dim(), self.dim());
        assert_eq!(y.dim(), self.dim());
        let mut acc = x.0[0] * y.0[1] + x.0[1] * y.0[0];
        for i in 2..self.dim() {
            acc -= x.0[i] * y.0[i];
        }
        acc
    }

    pub fn self_int(&self, x: &Class) -> i64 {
        self.pair(x, x)
    }

    /// Euler characteristic by Riemann-Roch; the product is always even.
    pub fn chi(&self, d: &Class) -> i64 {
        let t = self.pair(d, &d.sub(&self.canonical()));
        assert!(t % 2 == 0, "Riemann-Roch parity violated");
        t / 2 + 1
    }

    /// Arithmetic genus of a curve class.
    pub fn genus(&self, d: &Class) -> i64 {
        let t = self.pair(d, &d.add(&self.canonical()));
        assert!(t % 2 == 0, "adjunction parity violated");
        t / 2 + 1
    }

    /// Image under the real structure: swaps each exceptional slot with its
    /// conjugate, fixes the rulings.
    pub fn conjugate(&self, d: &Class) -> Class {
        let mut out = d.clone();
        let n = self.n_exceptional();
        for i in 0..n {
            out.0[2 + i] = d.0[2 + self.conj_slot(i)];
        }
        out
    }

    /// True when `d` pairs nonnegatively with every class of the catalog.
    pub fn nef_against(&self, d: &Class, catalog: &[Class]) -> bool {
        catalog.iter().all(|c| self.pair(d, c) >= 0)
    }

    /// Parses a class expression over the tokens `f1, f2, e1..en, K` with
    /// integer scalars, `+ - *` and parentheses, for example
    /// `2*(-K) - e1 - e5`.
    pub fn parse_class(&self, input: &str) -> Result<Class> {
        ClassParser {
            src: input.as_bytes().to_vec(),
            pos: 0,
            lat: *self,
        }
        .parse_all()
    }
}

struct ClassParser {
    src: Vec<u8>,
    pos: usize,
    lat: Lattice,
}

impl ClassParser {
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

    fn parse_all(&mut self) -> Result<Class> {
        let c = self.parse_expr()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err("trailing input");
        }
        Ok(c)
    }

    fn parse_expr(&mut self) -> Result<Class> {
        let mut acc = self.parse_term()?;
        while let Some(op) = self.peek() {
            match op {
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

    fn parse_term(&mut self) -> Result<Class> {
        // A term is a product of integer scalars and at most one class atom.
        let mut scalar: i64 = 1;
        let mut class: Option<Class> = None;
        loop {
            let part = self.parse_factor()?;
            match part {
                TermPart::Scalar(k) => scalar = scalar.checked_mul(k).ok_or_else(|| Error::Class("scalar overflow".into()))?,
                TermPart::Class(c) => {
                    if class.is_some() {
                        return self.err("product of two classes is not a class");
                    }
                    class = Some(c);
                }
            }
            if let Some(b'*') = self.peek() {
                self.pos += 1;
                continue;
            }
            break;
        }
        Ok(match class {
            Some(c) => c.scale(scalar),
            None => {
                if scalar == 0 {
                    self.lat.zero()
                } else {
                    return self.err("bare integer term, expected a class");
                }
            }
        })
    }

    fn parse_factor(&mut self) -> Result<TermPart> {
        let mut sign = 1i64;
        while let Some(b'-') = self.peek() {
            self.pos += 1;
            sign = -sign;
        }
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_expr()?;
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(TermPart::Class(inner.scale(sign)))
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let k: i64 = text.parse().map_err(|_| Error::Parse {
                    offset: start,
                    message: "integer out of range".into(),
                })?;
                Ok(TermPart::Scalar(sign * k))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let base = match name {
                    "f1" => self.lat.f1(),
                    "f2" => self.lat.f2(),
                    "K" => self.lat.canonical(),
                    _ => {
                        if let Some(num) = name.strip_prefix('e') {
                            let i: usize = num.parse().map_err(|_| Error::Parse {
                                offset: start,
                                message: format!("unknown token '{name}'"),
                            })?;
                            if i == 0 || i > self.lat.n_exceptional() {
                                return Err(Error::Class(format!(
                                    "e{i} out of range, lattice has e1..e{}",
                                    self.lat.n_exceptional()
                                )));
                            }
                            self.lat.e(i - 1)
                        } else {
                            return Err(Error::Parse {
                                offset: start,
                                message: format!("unknown token '{name}'"),
                            });
                        }
                    }
                };
                Ok(TermPart::Class(base.scale(sign)))
            }
            _ => self.err("expected factor"),
        }
    }
}

enum TermPart {
    Scalar(i64),
    Class(Class),
}
