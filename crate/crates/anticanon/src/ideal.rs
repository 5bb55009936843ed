//! Reduction of polynomials modulo an ideal generated by homogeneous linear
//! forms in `z0..z4` (coefficients may involve the parameters), optionally
//! together with the scroll quadric `z0^2 - z1*z2`.
//!
//! The linear part is triangularized into substitutions `pivot -> rhs` where
//! each pivot is the greatest coordinate variable with a constant (parameter
//! free) coefficient; rational division by a parameter polynomial is never
//! performed. The quadric is rewritten through the substitutions and then
//! used as a single division rule under the lex order. Normal forms are
//! therefore canonical: a polynomial reduces to zero exactly when it lies in
//! the ideal.

use crate::error::{Error, Result};
use crate::poly::{Poly, Rat, Z_RANGE, scroll_quadric};

/// A triangularized reduction system.
#[derive(Clone, Debug)]
pub struct ReductionSystem {
    /// Substitutions `var -> rhs` with rhs free of every pivot variable.
    subs: Vec<(usize, Poly)>,
    /// The rewritten scroll quadric, if it did not collapse to zero.
    quadric: Option<Poly>,
}

impl ReductionSystem {
    /// Builds the system from linear generators. With `include_scroll` the
    /// quadric `z0^2 - z1*z2` joins the ideal as a rewriting rule.
    pub fn new(generators: &[Poly], include_scroll: bool) -> Result<Self> {
        let mut subs: Vec<(usize, Poly)> = Vec::new();
        for g in generators {
            if g.is_zero() {
                continue;
            }
            if !g.is_z_homogeneous(1) {
                return Err(Error::NonLinearGenerator(g.to_string()));
            }
            let mut g = g.clone();
            for (v, rhs) in &subs {
                g = g.subst_var(*v, rhs);
            }
            if g.is_zero() {
                continue; // dependent generator
            }
            // Substitution keeps z-homogeneity, so g is again linear.
            let pivot = Z_RANGE
                .clone()
                .find(|&v| {
                    let c = g.linear_coeff_of(v);
                    !c.is_zero() && c.is_constant()
                })
                .ok_or_else(|| Error::NoConstantPivot(g.to_string()))?;
            let c = g.linear_coeff_of(pivot).constant_term();
            // g = c*pivot + rest, so pivot -> -rest / c.
            let rest = g.sub(&Poly::var(pivot).scale(&c));
            subs.push((pivot, rest.scale(&(-Rat::from_integer(1.into()) / c))));
        }
        // Back substitution, last to first, leaves every rhs pivot free.
        for i in (0..subs.len()).rev() {
            let mut rhs = subs[i].1.clone();
            for (v, r) in subs.iter().skip(i + 1) {
                rhs = rhs.subst_var(*v, r);
            }
            subs[i].1 = rhs;
        }
        let quadric = if include_scroll {
            let mut q = scroll_quadric();
            for (v, rhs) in &subs {
                q = q.subst_var(*v, rhs);
            }
            if q.is_zero() {
                None
            } else {
                let (lead, _) = q.leading_term().unwrap();
                let param_laden = lead[crate::poly::A] != 0
                    || lead[crate::poly::A1] != 0
                    || lead[crate::poly::A2] != 0;
                if param_laden {
                    return Err(Error::UnorientableQuadric(q.to_string()));
                }
                Some(q)
            }
        } else {
            None
        };
        Ok(ReductionSystem { subs, quadric })
    }

    /// Normal form of `p` modulo the system.
    pub fn reduce(&self, p: &Poly) -> Poly {
        let mut out = p.clone();
        for (v, rhs) in &self.subs {
            out = out.subst_var(*v, rhs);
        }
        if let Some(q) = &self.quadric {
            out = divide_once(&out, q);
        }
        out
    }

    /// The substitution list, mainly for diagnostics.
    pub fn substitutions(&self) -> &[(usize, Poly)] {
        &self.subs
    }
}

/// Multivariate division of `p` by the single divisor `q` under lex order.
fn divide_once(p: &Poly, q: &Poly) -> Poly {
    let (lead, lc) = q.leading_term().expect("nonzero divisor");
    let lead = *lead;
    let lc = lc.clone();
    let mut rem = p.clone();
    loop {
        // Find the largest reducible term; terms below the divisor's leading
        // monomial can never become reducible again.
        let target = rem
            .terms()
            .rev()
            .find(|(e, _)| lead.iter().zip(e.iter()).all(|(a, b)| a <= b))
            .map(|(e, c)| (*e, c.clone()));
        let Some((e, c)) = target else {
            return rem;
        };
        let mut quot = e;
        for (k, l) in quot.iter_mut().zip(lead.iter()) {
            *k -= l;
        }
        let factor = Poly::monomial(quot, c / &lc);
        rem = rem.sub(&factor.mul(q));
    }
}

/// Convenience wrapper: reduce `p` modulo the given linear generators.
pub fn reduce(p: &Poly, generators: &[Poly], include_scroll: bool) -> Result<Poly> {
    Ok(ReductionSystem::new(generators, include_scroll)?.reduce(p))
}

/// Decides whether `f + q^2` lies in the ideal, the certificate that a
/// product of factors restricts to minus a perfect square.
pub fn is_neg_square(f: &Poly, q: &Poly, generators: &[Poly], include_scroll: bool) -> Result<bool> {
    let sys = ReductionSystem::new(generators, include_scroll)?;
    Ok(sys.reduce(&f.add(&q.mul(q))).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        Poly::parse(s).unwrap()
    }

    #[test]
    fn scroll_quadric_reduces_to_zero() {
        let r = reduce(&p("z0^2 - z1*z2"), &[], true).unwrap();
        assert!(r.is_zero());
        // The rewriting direction follows lex: z0^2 is the leading monomial.
        let r = reduce(&p("z0^2"), &[], true).unwrap();
        assert_eq!(r, p("z1*z2"));
        let r = reduce(&p("z1*z2"), &[], true).unwrap();
        assert_eq!(r, p("z1*z2"));
        // z0^2*z3 - z1*z2*z3 is a multiple of the quadric.
        let r = reduce(&p("z0^2*z3 - z1*z2*z3"), &[], true).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn plane_ideal_with_parameters() {
        // The plane through a parametrized point of the conic: the scroll
        // quadric itself must die on it.
        let gens = [p("z0 - a*z1"), p("z2 - a^2*z1")];
        let r = reduce(&p("z0^2 - z1*z2"), &gens, false).unwrap();
        assert!(r.is_zero());
        let r = reduce(&p("z0*z2"), &gens, false).unwrap();
        assert_eq!(r, p("a^3*z1^2"));
    }

    #[test]
    fn no_constant_pivot_is_an_error() {
        let gens = [p("a*z3 + a1*z4")];
        assert!(matches!(
            reduce(&p("z3"), &gens, false),
            Err(Error::NoConstantPivot(_))
        ));
    }

    #[test]
    fn nonlinear_generator_is_an_error() {
        let gens = [p("z3^2")];
        assert!(matches!(
            reduce(&p("z3"), &gens, false),
            Err(Error::NonLinearGenerator(_))
        ));
        let gens = [p("z3 - 1")];
        assert!(reduce(&p("z3"), &gens, false).is_err());
    }

    #[test]
    fn dependent_generators_are_dropped() {
        let gens = [p("z3 - z4"), p("2*z3 - 2*z4")];
        let sys = ReductionSystem::new(&gens, false).unwrap();
        assert_eq!(sys.substitutions().len(), 1);
        assert!(sys.reduce(&p("z3 - z4")).is_zero());
    }

    #[test]
    fn triangularization_handles_chained_pivots() {
        // z0 -> z1 -> z2 chain, all pivots constant.
        let gens = [p("z0 - z1"), p("z1 - z2")];
        let sys = ReductionSystem::new(&gens, false).unwrap();
        assert_eq!(sys.reduce(&p("z0 - z2")), Poly::zero());
        assert_eq!(sys.reduce(&p("z0")), p("z2"));
    }

    #[test]
    fn membership_after_substituted_quadric() {
        // On the hyperplane z0 = 0 the scroll becomes z1*z2 = 0.
        let gens = [p("z0")];
        let sys = ReductionSystem::new(&gens, true).unwrap();
        assert!(sys.reduce(&p("z1*z2*z4")).is_zero());
        assert_eq!(sys.reduce(&p("z1*z3")), p("z1*z3"));
    }

    #[test]
    fn neg_square_certificate() {
        // On the plane (z0, z2), with the scroll: take q = z3.
        // f = -z3^2 + z0*z4 restricts to -z3^2 = -(q restricted)^2.
        let gens = [p("z0"), p("z2")];
        assert!(is_neg_square(&p("-z3^2 + z0*z4"), &p("z3"), &gens, true).unwrap());
        assert!(!is_neg_square(&p("z3^2"), &p("z3"), &gens, true).unwrap());
    }
}
