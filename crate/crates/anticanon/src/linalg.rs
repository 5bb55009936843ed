//! Exact dense linear algebra over a field: rank, reduced row echelon form,
//! and nullspace bases. Matrices here never exceed a few dozen rows, so plain
//! Gaussian elimination with exact arithmetic is the right tool.
//!
//! Two scalar types are supported: the rationals, and a quadratic extension
//! `Q(theta)` with `theta^2 = d` for a fixed nonsquare rational `d`. The
//! extension is needed when tangency conditions at a conjugate point pair are
//! imposed exactly; the rank over `Q(theta)` equals the rank over the complex
//! numbers for such systems.

use num_rational::BigRational;

use crate::poly::Rat;

fn r0() -> Rat {
    num_traits::Zero::zero()
}

fn r1() -> Rat {
    num_traits::One::one()
}

pub trait Field: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn neg(&self) -> Self;
}

impl Field for BigRational {
    fn zero() -> Self {
        r0()
    }
    fn one() -> Self {
        r1()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Self {
        r1() / self
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Element `re + im*theta` of `Q(theta)`, `theta^2 = d`.
///
/// Every element carries `d`; mixing elements from different extensions is a
/// logic error and panics.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadExt {
    pub re: Rat,
    pub im: Rat,
    pub d: Rat,
}

impl QuadExt {
    pub fn new(re: Rat, im: Rat, d: Rat) -> Self {
        QuadExt { re, im, d }
    }

    pub fn from_rat(re: Rat, d: Rat) -> Self {
        QuadExt {
            re,
            im: r0(),
            d,
        }
    }

    pub fn theta(d: Rat) -> Self {
        QuadExt {
            re: r0(),
            im: r1(),
            d,
        }
    }

    fn check(&self, other: &Self) {
        // Zero constants created by Field::zero carry d = 0 as a placeholder.
        if !self.d.is_zero() && !other.d.is_zero() {
            assert_eq!(self.d, other.d, "mixed quadratic extensions");
        }
    }

    fn d_of(&self, other: &Self) -> Rat {
        if self.d.is_zero() {
            other.d.clone()
        } else {
            self.d.clone()
        }
    }
}

impl Field for QuadExt {
    fn zero() -> Self {
        QuadExt {
            re: r0(),
            im: r0(),
            d: r0(),
        }
    }
    fn one() -> Self {
        QuadExt {
            re: r1(),
            im: r0(),
            d: r0(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        self.check(other);
        QuadExt {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
            d: self.d_of(other),
        }
    }
    fn sub(&self, other: &Self) -> Self {
        self.check(other);
        QuadExt {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
            d: self.d_of(other),
        }
    }
    fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let d = self.d_of(other);
        QuadExt {
            re: &self.re * &other.re + &(&self.im * &other.im) * &d,
            im: &self.re * &other.im + &self.im * &other.re,
            d,
        }
    }
    fn inv(&self) -> Self {
        // (re + im t)^-1 = (re - im t) / (re^2 - d im^2); the norm is nonzero
        // because d is not a square.
        let norm = &self.re * &self.re - &(&self.im * &self.im) * &self.d;
        assert!(!norm.is_zero(), "inverting zero in Q(theta)");
        QuadExt {
            re: &self.re / &norm,
            im: -(&self.im / &norm),
            d: self.d.clone(),
        }
    }
    fn neg(&self) -> Self {
        QuadExt {
            re: -self.re.clone(),
            im: -self.im.clone(),
            d: self.d.clone(),
        }
    }
}

/// Rank of the matrix given as a list of rows.
pub fn rank<F: Field>(rows: &[Vec<F>]) -> usize {
    rref(rows.to_vec()).1
}

/// Reduced row echelon form plus rank.
pub fn rref<F: Field>(mut rows: Vec<Vec<F>>) -> (Vec<Vec<F>>, usize) {
    if rows.is_empty() {
        return (rows, 0);
    }
    let ncols = rows[0].len();
    let mut lead = 0usize;
    let mut col = 0usize;
    while lead < rows.len() && col < ncols {
        let pivot = (lead..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(pivot) = pivot else {
            col += 1;
            continue;
        };
        rows.swap(lead, pivot);
        let inv = rows[lead][col].inv();
        for x in rows[lead].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..rows.len() {
            if r != lead && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..ncols {
                    let delta = rows[lead][c].mul(&f);
                    rows[r][c] = rows[r][c].sub(&delta);
                }
            }
        }
        lead += 1;
        col += 1;
    }
    (rows, lead)
}

/// Basis of the right nullspace `{x : A x = 0}`.
pub fn nullspace<F: Field>(rows: &[Vec<F>]) -> Vec<Vec<F>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let (r, rank) = rref(rows.to_vec());
    // Locate pivot columns.
    let mut pivot_col_of_row = Vec::new();
    for row in r.iter().take(rank) {
        let c = row.iter().position(|x| !x.is_zero()).unwrap();
        pivot_col_of_row.push(c);
    }
    let pivot_cols: std::collections::BTreeSet<usize> =
        pivot_col_of_row.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (ri, &pc) in pivot_col_of_row.iter().enumerate() {
            v[pc] = r[ri][free].neg();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn q(n: i64) -> Rat {
        rat(n)
    }

    #[test]
    fn rank_of_rational_matrices() {
        let m = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ];
        assert_eq!(rank(&m), 2);
        let id = vec![
            vec![q(1), q(0)],
            vec![q(0), q(1)],
        ];
        assert_eq!(rank(&id), 2);
        assert_eq!(rank::<Rat>(&[]), 0);
    }

    #[test]
    fn nullspace_solves() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(0), q(1), q(1)]];
        let ns = nullspace(&m);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let dot = row
                .iter()
                .zip(ns[0].iter())
                .fold(r0(), |acc, (a, b)| acc + a * b);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn quad_ext_arithmetic() {
        let d = q(-4);
        let t = QuadExt::theta(d.clone());
        let x = QuadExt::new(q(2), q(3), d.clone());
        let prod = x.mul(&t);
        // (2 + 3t) t = 3d + 2t = -12 + 2t.
        assert_eq!(prod.re, q(-12));
        assert_eq!(prod.im, q(2));
        let inv = x.inv();
        let one = x.mul(&inv);
        assert_eq!(one.re, q(1));
        assert!(one.im.is_zero());
    }

    #[test]
    fn rank_over_quadratic_extension() {
        let d = q(-1);
        let t = || QuadExt::theta(q(-1));
        let one = || QuadExt::from_rat(q(1), q(-1));
        // Rows (1, t) and (t, -1) are proportional over Q(i): rank 1.
        let m = vec![
            vec![one(), t()],
            vec![t(), QuadExt::from_rat(q(-1), d.clone())],
        ];
        assert_eq!(rank(&m), 1);
    }
}
