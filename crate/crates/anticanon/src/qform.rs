//! Exact rank of quadratic forms in the coordinate variables `z0..z4` whose
//! coefficients may involve the parameters `a, a1, a2`.
//!
//! The rank of the symmetric Gram matrix over the rational function field is
//! computed by specializing the parameters to random rationals twice and
//! requiring agreement. Specializations avoid the degenerate parameter values
//! (0, 1, and coincidences), and both draws come from the caller's seeded
//! RNG, so results are reproducible.

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{A, A1, A2, Exp, Poly, Rat, ratio};

/// Inclusive bound for random specialization numerators and denominators.
pub const SPECIALIZATION_BOUND: i64 = 97;

/// Draws a random rational with numerator in `[-97, 97]` and denominator in
/// `[1, 97]`.
pub fn random_rational(rng: &mut impl Rng) -> Rat {
    let n = rng.gen_range(-SPECIALIZATION_BOUND..=SPECIALIZATION_BOUND);
    let d = rng.gen_range(1..=SPECIALIZATION_BOUND);
    ratio(n, d)
}

/// Draws values for `(a, a1, a2)` subject to the nondegeneracy constraints
/// `a, a1, a2 not in {0, 1}` and `a1 != a2`.
pub fn random_parameters(rng: &mut impl Rng) -> [(usize, Rat); 3] {
    let banned = [ratio(0, 1), ratio(1, 1)];
    let mut draw = |avoid: &[Rat]| loop {
        let v = random_rational(rng);
        if !banned.contains(&v) && !avoid.contains(&v) {
            return v;
        }
    };
    let a = draw(&[]);
    let a1 = draw(&[]);
    let a2 = draw(&[a1.clone()]);
    [(A, a), (A1, a1), (A2, a2)]
}

/// The symmetric Gram matrix of a quadratic form, entries polynomial in the
/// parameters only.
pub fn gram_matrix(p: &Poly) -> Result<Vec<Vec<Poly>>> {
    if !p.is_z_homogeneous(2) {
        return Err(Error::NotQuadratic(p.to_string()));
    }
    let mut g = vec![vec![Poly::zero(); 5]; 5];
    for (e, c) in p.terms() {
        let mut zs = Vec::new();
        for i in 0..5 {
            for _ in 0..e[i] {
                zs.push(i);
            }
        }
        debug_assert_eq!(zs.len(), 2);
        let (i, j) = (zs[0], zs[1]);
        let mut rest: Exp = *e;
        rest[i] -= 1;
        rest[j] -= 1;
        let coeff = if i == j {
            Poly::monomial(rest, c.clone())
        } else {
            Poly::monomial(rest, c / &crate::poly::rat(2))
        };
        g[i][j] = g[i][j].add(&coeff);
        if i != j {
            g[j][i] = g[j][i].add(&coeff);
        }
    }
    Ok(g)
}

fn specialize_rank(g: &[Vec<Poly>], params: &[(usize, Rat)]) -> Result<usize> {
    let mut rows = Vec::with_capacity(5);
    for row in g {
        let mut out = Vec::with_capacity(5);
        for entry in row {
            let v = entry.eval_partial(params);
            if !v.is_constant() {
                return Err(Error::NotQuadratic(entry.to_string()));
            }
            out.push(v.constant_term());
        }
        rows.push(out);
    }
    Ok(linalg::rank(&rows))
}

/// Exact rank of the Gram matrix of `p`, decided by two agreeing random
/// parameter specializations.
pub fn quadratic_rank(p: &Poly, rng: &mut impl Rng) -> Result<usize> {
    let g = gram_matrix(p)?;
    if g.iter().flatten().all(|e| e.is_parameter_free()) {
        // No parameters, a single exact computation suffices.
        return specialize_rank(&g, &[]);
    }
    let r1 = specialize_rank(&g, &random_parameters(rng))?;
    let r2 = specialize_rank(&g, &random_parameters(rng))?;
    if r1 != r2 {
        return Err(Error::SpecializationMismatch(r1, r2));
    }
    Ok(r1)
}

/// True when the form is a nonzero binary quadratic in `z3, z4` with negative
/// discriminant, so its two projective roots are a non-real conjugate pair.
pub fn has_conjugate_roots_in_z3z4(p: &Poly) -> Result<bool> {
    if p.is_zero() {
        return Ok(false);
    }
    if !p.is_z_homogeneous(2) || !p.is_parameter_free() {
        return Err(Error::NotQuadratic(p.to_string()));
    }
    let mut alpha = Rat::zero();
    let mut beta = Rat::zero();
    let mut gamma = Rat::zero();
    for (e, c) in p.terms() {
        if e[0] != 0 || e[1] != 0 || e[2] != 0 {
            return Err(Error::NotQuadratic(p.to_string()));
        }
        match (e[3], e[4]) {
            (2, 0) => alpha = c.clone(),
            (1, 1) => beta = c.clone(),
            (0, 2) => gamma = c.clone(),
            _ => unreachable!("z-homogeneous of degree 2"),
        }
    }
    let disc = &beta * &beta - crate::poly::rat(4) * &alpha * &gamma;
    Ok(disc < Rat::zero())
}

/// Discriminant of a binary quadratic in `z3, z4`.
pub fn z3z4_discriminant(p: &Poly) -> Result<Rat> {
    if !p.is_z_homogeneous(2) || !p.is_parameter_free() {
        return Err(Error::NotQuadratic(p.to_string()));
    }
    let mut alpha = Rat::zero();
    let mut beta = Rat::zero();
    let mut gamma = Rat::zero();
    for (e, c) in p.terms() {
        if e[0] != 0 || e[1] != 0 || e[2] != 0 {
            return Err(Error::NotQuadratic(p.to_string()));
        }
        match (e[3], e[4]) {
            (2, 0) => alpha = c.clone(),
            (1, 1) => beta = c.clone(),
            (0, 2) => gamma = c.clone(),
            _ => unreachable!(),
        }
    }
    Ok(&beta * &beta - crate::poly::rat(4) * &alpha * &gamma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    fn rng() -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(0)
    }

    #[test]
    fn ranks_of_standard_forms() {
        let mut r = rng();
        assert_eq!(quadratic_rank(&p("z0^2 - z1*z2"), &mut r).unwrap(), 3);
        assert_eq!(quadratic_rank(&p("z3^2 + z4^2"), &mut r).unwrap(), 2);
        assert_eq!(quadratic_rank(&p("z0*z1"), &mut r).unwrap(), 2);
        assert_eq!(quadratic_rank(&p("(z0 + z1)^2"), &mut r).unwrap(), 1);
        assert_eq!(
            quadratic_rank(&p("z0^2 + z1^2 + z2^2 + z3^2 + z4^2"), &mut r).unwrap(),
            5
        );
    }

    #[test]
    fn parametrized_rank_is_generic() {
        let mut r = rng();
        // a != 0 is enforced by the specialization constraints.
        assert_eq!(quadratic_rank(&p("z0^2 - a*z1*z2"), &mut r).unwrap(), 3);
        assert_eq!(quadratic_rank(&p("a*z3^2"), &mut r).unwrap(), 1);
        // (a1 - a2) z3^2 keeps rank 1 because a1 != a2 is enforced.
        assert_eq!(quadratic_rank(&p("a1*z3^2 - a2*z3^2"), &mut r).unwrap(), 1);
    }

    #[test]
    fn non_quadratic_is_rejected() {
        let mut r = rng();
        assert!(quadratic_rank(&p("z0^3"), &mut r).is_err());
        assert!(quadratic_rank(&p("z0^2 + z1"), &mut r).is_err());
        assert!(quadratic_rank(&p("z0^2 + a"), &mut r).is_err());
    }

    #[test]
    fn conjugate_root_detection() {
        assert!(has_conjugate_roots_in_z3z4(&p("z3^2 + z4^2")).unwrap());
        assert!(!has_conjugate_roots_in_z3z4(&p("z3^2 - z4^2")).unwrap());
        assert!(!has_conjugate_roots_in_z3z4(&p("z3*z4")).unwrap());
        assert!(!has_conjugate_roots_in_z3z4(&Poly::zero()).unwrap());
        assert!(has_conjugate_roots_in_z3z4(&p("z3^2 + z3*z4 + z4^2")).unwrap());
        assert!(has_conjugate_roots_in_z3z4(&p("z0*z3")).is_err());
    }
}
