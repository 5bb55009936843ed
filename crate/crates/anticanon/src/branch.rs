//! Branch-divisor assembly for the double-solid families.
//!
//! A double solid is branched over a quartic surface `F = P - Q^2`: `P` is a
//! product of four linear forms fixed by the subtype and `Q` is a quadric to
//! be determined.  This module pins down the frame the quartic must fit:
//!
//! * tangent-plane placements on the base conic, with multiplicities that are
//!   cross-checked against a pullback along the conic parameterization;
//! * the incidence budget of the five double curves;
//! * the algebraic checks a candidate `Q` must pass (plane and hyperplane
//!   restrictions, ridge behaviour, degeneracy of the contact conic);
//! * frozen point-incidence systems over the Gaussian rationals whose rank
//!   bounds the dimension of the space of admissible quadrics;
//! * exact certification that the five double curves lie on their carriers
//!   and on the branch quartic;
//! * signed half-cycle selections on the surface side that assemble twice
//!   the anticanonical class, together with the sections they bound.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::cycles::CycleConfig;
use crate::error::{Error, Result};
use crate::ideal::{is_neg_square, reduce};
use crate::linalg::{rank, Field, QuadExt};
use crate::linsys::{h0_full, H0Result};
use crate::picard::{Class, Lattice};
use crate::poly::{rat, scroll_quadric, Poly, Rat, A, A1, A2};
use crate::qform::{has_conjugate_roots_in_z3z4, quadratic_rank};
use crate::threefold::DsType;

/// Number of coefficients of a quadratic form in `z0..z4`.
pub const QUADRIC_COEFFS: usize = 15;

/// Projective dimension of the full space of quadrics in `z0..z4`.
pub const QUADRIC_DIM: i64 = QUADRIC_COEFFS as i64 - 1;

fn gauss_d() -> Rat {
    rat(-1)
}

fn gauss(re: Rat, im: Rat) -> QuadExt {
    QuadExt::new(re, im, gauss_d())
}

fn gi(re: i64, im: i64) -> QuadExt {
    gauss(rat(re), rat(im))
}

/// Integer `(re, im)` Gaussian point.
fn gp(coords: [(i64, i64); 5]) -> [QuadExt; 5] {
    coords.map(|(re, im)| gi(re, im))
}

fn fmt_coord(x: &QuadExt) -> String {
    let unit = if x.d == gauss_d() {
        "i".to_string()
    } else {
        format!("sqrt({})", x.d)
    };
    if Zero::is_zero(&x.im) {
        return format!("{}", x.re);
    }
    let imag = if x.im.is_one() {
        unit
    } else if (-x.im.clone()).is_one() {
        format!("-{unit}")
    } else {
        format!("{}{unit}", x.im)
    };
    if Zero::is_zero(&x.re) {
        imag
    } else if x.im.is_negative() {
        format!("{}{imag}", x.re)
    } else {
        format!("{}+{imag}", x.re)
    }
}

fn fmt_point(p: &[QuadExt; 5]) -> String {
    let parts: Vec<String> = p.iter().map(fmt_coord).collect();
    format!("({})", parts.join(":"))
}

/// Contact grade of the branch quartic against the distinguished plane.
pub fn contact_label(ds: DsType) -> &'static str {
    match ds {
        DsType::I => "tangency",
        DsType::II => "A1",
        DsType::III => "A2",
        DsType::IV => "A3",
    }
}

/// Name of the builtin surface scenario realizing this subtype.
pub fn standard_scenario(ds: DsType) -> &'static str {
    match ds {
        DsType::I => "type-i",
        DsType::II => "type-ii",
        DsType::III => "type-iii",
        DsType::IV => "type-iv",
    }
}

fn require_param(params: &BTreeMap<String, Rat>, name: &str, ds: DsType) -> Result<Rat> {
    params.get(name).cloned().ok_or_else(|| {
        Error::Scenario(format!(
            "subtype {} needs the parameter {name}",
            ds.name()
        ))
    })
}

/// The slopes `c` of the `z0 - c*z1` factors of the branch product, with the
/// supplied parameter values filled in.  The slopes must be pairwise distinct
/// or the placements collide.
pub fn line_parameters(ds: DsType, params: &BTreeMap<String, Rat>) -> Result<Vec<Rat>> {
    let mut cs = vec![rat(0)];
    match ds {
        DsType::I => {}
        DsType::II => cs.push(rat(1)),
        DsType::III => {
            cs.push(rat(1));
            cs.push(require_param(params, "a", ds)?);
        }
        DsType::IV => {
            cs.push(rat(1));
            cs.push(require_param(params, "a1", ds)?);
            cs.push(require_param(params, "a2", ds)?);
        }
    }
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            if cs[i] == cs[j] {
                return Err(Error::Scenario(format!(
                    "line parameters must be pairwise distinct, got {} twice",
                    cs[i]
                )));
            }
        }
    }
    Ok(cs)
}

/// A tangent-plane contact point `[x:y:z]` on the base conic `x^2 = yz`,
/// together with the number of branch lines through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub point: [Rat; 3],
    pub multiplicity: usize,
}

fn placements_from_parameters(cs: &[Rat]) -> Vec<Placement> {
    let mut out = vec![Placement {
        point: [rat(0), rat(0), rat(1)],
        multiplicity: cs.len(),
    }];
    for c in cs {
        out.push(Placement {
            point: [c.clone(), rat(1), c.clone() * c.clone()],
            multiplicity: 1,
        });
    }
    out.sort_by(|a, b| a.point.cmp(&b.point));
    out
}

/// Contact points of the branch lines with the base conic.  Every subtype
/// places one contact at `(0:0:1)` with multiplicity `k - 1` and spreads the
/// remaining `k - 1` contacts to distinct simple points.
pub fn lambda_placements(ds: DsType, params: &BTreeMap<String, Rat>) -> Result<Vec<Placement>> {
    Ok(placements_from_parameters(&line_parameters(ds, params)?))
}

/// Independent recomputation of the placements: pull the product of the
/// `z0 - c*z1` factors back along the conic parameterization
/// `(z0, z1, z2) = (t*s, t^2, s^2)` and read the root multiplicities of the
/// resulting binary form.  The parameter pair `(t, s)` is carried by the
/// `(z3, z4)` variable slots.
pub fn placements_from_pullback(cs: &[Rat]) -> Result<Vec<Placement>> {
    let t = Poly::var(3);
    let s = Poly::var(4);
    let mut pulled = Poly::one();
    for c in cs {
        // (z0 - c*z1) pulled back is t*s - c*t^2.
        pulled = pulled.mul(&t.mul(&s).sub(&t.mul(&t).scale(c)));
    }
    let degree = pulled.max_z_degree().unwrap_or(0) as usize;
    let mut coeffs = vec![rat(0); degree + 1];
    for (e, c) in pulled.terms() {
        let j = e[4] as usize;
        if e[3] as usize + j != degree || e.iter().take(3).any(|&k| k != 0) {
            return Err(Error::Branch(
                "pullback of the branch lines is not a binary form".into(),
            ));
        }
        coeffs[j] = c.clone();
    }
    // Trailing zeros in t correspond to the contact at (0:0:1).
    let top = match coeffs.iter().rposition(|c| !Zero::is_zero(c)) {
        Some(j) => j,
        None => return Err(Error::Branch("branch line product vanished".into())),
    };
    let mut out = Vec::new();
    if degree > top {
        out.push(Placement {
            point: [rat(0), rat(0), rat(1)],
            multiplicity: degree - top,
        });
    }
    // Remaining roots s = c*t of the dehomogenized form.
    let mut rest: Vec<Rat> = coeffs[..=top].to_vec();
    let mut seen: Vec<Rat> = Vec::new();
    for c in cs {
        if seen.contains(c) {
            continue;
        }
        seen.push(c.clone());
        let mut multiplicity = 0;
        loop {
            // Synthetic division of `rest` by (x - c); remainder is rest(c).
            let mut quot = vec![rat(0); rest.len().saturating_sub(1)];
            let mut carry = rat(0);
            for j in (1..rest.len()).rev() {
                carry = rest[j].clone() + c.clone() * carry.clone();
                quot[j - 1] = carry.clone();
            }
            let remainder = if rest.is_empty() {
                rat(0)
            } else {
                rest[0].clone() + c.clone() * carry
            };
            if !Zero::is_zero(&remainder) {
                break;
            }
            multiplicity += 1;
            rest = quot;
            if rest.len() <= 1 {
                break;
            }
        }
        if multiplicity > 0 {
            out.push(Placement {
                point: [c.clone(), rat(1), c.clone() * c.clone()],
                multiplicity,
            });
        }
    }
    let placed: usize = out.iter().map(|p| p.multiplicity).sum();
    if placed != degree {
        return Err(Error::Branch(
            "pullback has roots outside the expected placement set".into(),
        ));
    }
    out.sort_by(|a, b| a.point.cmp(&b.point));
    Ok(out)
}

/// Two linear generators of the tangent plane of the scroll at the conic
/// point `[x:y:z]`.
pub fn lambda_plane(point: &[Rat; 3]) -> Result<Vec<Poly>> {
    let [x, y, z] = point.clone();
    if x.clone() * x.clone() != y.clone() * z.clone() {
        return Err(Error::Scenario(format!(
            "({x}:{y}:{z}) is not on the base conic"
        )));
    }
    if Zero::is_zero(&y) {
        if Zero::is_zero(&x) && !Zero::is_zero(&z) {
            return Ok(vec![Poly::var(0), Poly::var(1)]);
        }
        return Err(Error::Scenario(format!(
            "({x}:{y}:{z}) is not a conic point"
        )));
    }
    let g1 = Poly::var(0).scale(&y).sub(&Poly::var(1).scale(&x));
    let g2 = Poly::var(2).scale(&y).sub(&Poly::var(1).scale(&z));
    Ok(vec![g1, g2])
}

fn parse_list(texts: &[&str]) -> Vec<Poly> {
    texts
        .iter()
        .map(|t| Poly::parse(t).expect("builtin polynomial"))
        .collect()
}

/// The four linear factors of the branch product, with symbolic parameters
/// where the subtype has moduli.
pub fn theorem_factors(ds: DsType) -> Vec<Poly> {
    parse_list(match ds {
        DsType::I => &["z0", "z3", "z4", "z0 + z1 + z2"],
        DsType::II => &["z0", "z0 - z1", "z3", "z4"],
        DsType::III => &["z0", "z0 - z1", "z0 - a*z1", "z4"],
        DsType::IV => &["z0", "z0 - z1", "z0 - a1*z1", "z0 - a2*z1"],
    })
}

/// The factors that are hyperplane sections rather than scroll lines.
pub fn hyperplane_factors(ds: DsType) -> Vec<Poly> {
    parse_list(match ds {
        DsType::I => &["z3", "z4", "z0 + z1 + z2"],
        DsType::II => &["z3", "z4"],
        DsType::III => &["z4"],
        DsType::IV => &[],
    })
}

fn parameter_values(ds: DsType, params: &BTreeMap<String, Rat>) -> Result<Vec<(usize, Rat)>> {
    Ok(match ds {
        DsType::I | DsType::II => Vec::new(),
        DsType::III => vec![(A, require_param(params, "a", ds)?)],
        DsType::IV => vec![
            (A1, require_param(params, "a1", ds)?),
            (A2, require_param(params, "a2", ds)?),
        ],
    })
}

/// The branch factors with numeric parameter values substituted.
pub fn numeric_factors(ds: DsType, params: &BTreeMap<String, Rat>) -> Result<Vec<Poly>> {
    let values = parameter_values(ds, params)?;
    Ok(theorem_factors(ds)
        .iter()
        .map(|f| f.eval_partial(&values))
        .collect())
}

/// The quartic `P - q^2` cut out by the branch product and a quadric.
pub fn branch_quartic(ds: DsType, q: &Poly) -> Poly {
    let mut product = Poly::one();
    for f in theorem_factors(ds) {
        product = product.mul(&f);
    }
    product.sub(&q.mul(q))
}

/// Symbolic tangent-plane ideals, one per distinct contact point, labelled.
fn lambda_planes_symbolic(ds: DsType) -> Vec<(String, Vec<Poly>)> {
    let mut out = vec![
        ("(0:1:0)".to_string(), parse_list(&["z0", "z2"])),
        ("(0:0:1)".to_string(), parse_list(&["z0", "z1"])),
    ];
    match ds {
        DsType::I => {}
        DsType::II => out.push((
            "(1:1:1)".to_string(),
            parse_list(&["z0 - z1", "z2 - z1"]),
        )),
        DsType::III => {
            out.push((
                "(1:1:1)".to_string(),
                parse_list(&["z0 - z1", "z2 - z1"]),
            ));
            out.push((
                "(a:1:a^2)".to_string(),
                parse_list(&["z0 - a*z1", "z2 - a^2*z1"]),
            ));
        }
        DsType::IV => {
            out.push((
                "(1:1:1)".to_string(),
                parse_list(&["z0 - z1", "z2 - z1"]),
            ));
            out.push((
                "(a1:1:a1^2)".to_string(),
                parse_list(&["z0 - a1*z1", "z2 - a1^2*z1"]),
            ));
            out.push((
                "(a2:1:a2^2)".to_string(),
                parse_list(&["z0 - a2*z1", "z2 - a2^2*z1"]),
            ));
        }
    }
    out
}

/// Pairwise meeting counts of the five double curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IncidenceBudget {
    pub conics: usize,
    pub quartics: usize,
    /// The conjugate ridge points shared by every pair of conics.
    pub ridge_pair: usize,
    pub quartic_quartic: usize,
    pub conic_quartic: usize,
}

impl IncidenceBudget {
    pub fn total(&self) -> usize {
        self.ridge_pair + self.quartic_quartic + self.conic_quartic
    }
}

/// Meeting counts determined by the curve degrees: every quartic pair meets
/// in four points, every conic meets every quartic in two, and all conics
/// share the fixed conjugate ridge pair (counted once).
pub fn incidence_budget(ds: DsType) -> IncidenceBudget {
    let conics = ds.k();
    let quartics = 5 - conics;
    IncidenceBudget {
        conics,
        quartics,
        ridge_pair: 2,
        quartic_quartic: 4 * quartics * quartics.saturating_sub(1) / 2,
        conic_quartic: 2 * conics * quartics,
    }
}

/// A single verification step with its outcome.
#[derive(Clone, Debug)]
pub struct BranchCheck {
    pub label: String,
    pub ok: bool,
}

/// Outcome of the assembly checks for one candidate quadric.
#[derive(Clone, Debug)]
pub struct BranchReport {
    pub ds: DsType,
    /// Rank of the candidate restricted to the distinguished plane.
    pub mid_rank: usize,
    pub checks: Vec<BranchCheck>,
}

impl BranchReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

fn validate_candidate(q: &Poly) -> Result<()> {
    if !q.is_parameter_free() || !q.is_z_homogeneous(2) || q.is_zero() {
        return Err(Error::Scenario(
            "branch quadric must be a nonzero parameter-free quadratic form in z0..z4".into(),
        ));
    }
    Ok(())
}

/// Run every assembly check for a candidate quadric and report each outcome.
pub fn check_quartic(
    ds: DsType,
    q: &Poly,
    params: &BTreeMap<String, Rat>,
    seed: u64,
) -> Result<BranchReport> {
    validate_candidate(q)?;
    line_parameters(ds, params)?;
    let f = branch_quartic(ds, q);
    let mut checks = Vec::new();

    for (name, plane) in lambda_planes_symbolic(ds) {
        checks.push(BranchCheck {
            label: format!("tangent plane {name}: quartic restricts to -Q^2"),
            ok: is_neg_square(&f, q, &plane, false)?,
        });
    }

    let ridge_gens = parse_list(&["z0", "z1", "z2"]);
    checks.push(BranchCheck {
        label: "ridge line: quartic restricts to -Q^2".to_string(),
        ok: is_neg_square(&f, q, &ridge_gens, false)?,
    });
    let ridge = q.eval_partial(&[(0, rat(0)), (1, rat(0)), (2, rat(0))]);
    checks.push(BranchCheck {
        label: "ridge restriction has conjugate roots".to_string(),
        ok: !ridge.is_zero() && has_conjugate_roots_in_z3z4(&ridge)?,
    });

    let mid = q.eval_partial(&[(0, rat(0)), (1, rat(0))]);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mid_rank = quadratic_rank(&mid, &mut rng)?;
    let (label, ok) = match ds {
        DsType::I => (
            "contact conic at (0:0:1) is irreducible (rank 3)",
            mid_rank == 3,
        ),
        _ => (
            "contact conic at (0:0:1) is degenerate (rank <= 2)",
            mid_rank <= 2,
        ),
    };
    checks.push(BranchCheck {
        label: label.to_string(),
        ok,
    });

    for h in hyperplane_factors(ds) {
        checks.push(BranchCheck {
            label: format!("hyperplane {h}: quartic restricts to -Q^2"),
            ok: is_neg_square(&f, q, std::slice::from_ref(&h), false)?,
        });
    }

    Ok(BranchReport {
        ds,
        mid_rank,
        checks,
    })
}

/// As [`check_quartic`], but any failed check is promoted to an error so the
/// caller can distinguish verification failure from malformed input.
pub fn assemble_quartic(
    ds: DsType,
    q: &Poly,
    params: &BTreeMap<String, Rat>,
    seed: u64,
) -> Result<BranchReport> {
    let report = check_quartic(ds, q, params, seed)?;
    if let Some(failed) = report.checks.iter().find(|c| !c.ok) {
        return Err(Error::Branch(format!(
            "assembly check failed: {}",
            failed.label
        )));
    }
    Ok(report)
}

/// The curated quadric completing the branch quartic of each subtype.
pub fn fixture_quadric(ds: DsType) -> Poly {
    let text = match ds {
        DsType::I => "z2^2 + z3^2 + z4^2 + 4*z0^2 + z1^2 + 1/4*z1*z2",
        DsType::II => "z3^2 + (z4 + z2)^2 + 337/144*z0^2 - 5/6*z0*z4 + z1^2",
        DsType::III => "z3^2 + (z4 + z2)^2 - 7*z0^2 + 6*z0*z1 + z1^2 + z0*z4",
        DsType::IV => "z3^2 + (z4 + z2)^2 + z0^2 + z0*z4 + z1^2",
    };
    Poly::parse(text).expect("builtin fixture quadric")
}

/// Parameter values matching the builtin surface scenarios.
pub fn fixture_params(ds: DsType) -> BTreeMap<String, Rat> {
    let mut params = BTreeMap::new();
    match ds {
        DsType::I | DsType::II => {}
        DsType::III => {
            params.insert("a".to_string(), rat(2));
        }
        DsType::IV => {
            params.insert("a1".to_string(), rat(2));
            params.insert("a2".to_string(), rat(3));
        }
    }
    params
}

fn monomial_pairs() -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(QUADRIC_COEFFS);
    for i in 0..5 {
        for j in i..5 {
            out.push((i, j));
        }
    }
    out
}

/// Row of monomial values `z_i z_j` at a point; its dot product with the
/// coefficient vector of a quadric is the value of the quadric there.
pub fn membership_row(point: &[QuadExt; 5]) -> Vec<QuadExt> {
    monomial_pairs()
        .into_iter()
        .map(|(i, j)| point[i].mul(&point[j]))
        .collect()
}

/// Row of directional derivatives of the monomials at a point; its dot
/// product with a coefficient vector is the derivative of the quadric in
/// the given coordinate direction.
pub fn contact_row(point: &[QuadExt; 5], direction: usize) -> Vec<QuadExt> {
    monomial_pairs()
        .into_iter()
        .map(|(i, j)| {
            if i == j {
                if i == direction {
                    point[i].add(&point[i])
                } else {
                    Field::zero()
                }
            } else if i == direction {
                point[j].clone()
            } else if j == direction {
                point[i].clone()
            } else {
                Field::zero()
            }
        })
        .collect()
}

/// Coefficients of a parameter-free quadratic form in the monomial order of
/// [`membership_row`].
pub fn quadric_coefficients(q: &Poly) -> Result<Vec<Rat>> {
    validate_candidate(q)?;
    Ok(monomial_pairs()
        .into_iter()
        .map(|(i, j)| {
            let mut e: crate::poly::Exp = [0; 8];
            e[i] += 1;
            e[j] += 1;
            q.coeff(&e)
        })
        .collect())
}

/// Dot product of a constraint row with a rational coefficient vector.
pub fn row_value(row: &[QuadExt], coeffs: &[Rat]) -> QuadExt {
    let mut acc: QuadExt = Field::zero();
    for (entry, c) in row.iter().zip(coeffs) {
        acc = acc.add(&entry.mul(&QuadExt::from_rat(c.clone(), entry.d.clone())));
    }
    acc
}

/// A labelled linear condition on quadric coefficients.
#[derive(Clone, Debug)]
pub struct ConstraintRow {
    pub label: String,
    pub entries: Vec<QuadExt>,
}

/// A batch of constraint rows added together.
#[derive(Clone, Debug)]
pub struct ConstraintStage {
    pub label: String,
    pub rows: Vec<ConstraintRow>,
}

fn through(point: [QuadExt; 5]) -> ConstraintRow {
    ConstraintRow {
        label: format!("through {}", fmt_point(&point)),
        entries: membership_row(&point),
    }
}

fn ruling_contact(point: [QuadExt; 5]) -> ConstraintRow {
    ConstraintRow {
        label: format!("ruling contact at {}", fmt_point(&point)),
        entries: contact_row(&point, 1),
    }
}

/// The frozen incidence conditions a branch quadric must satisfy, grouped in
/// the order the count is usually carried out.
pub fn constraint_stages(ds: DsType) -> Vec<ConstraintStage> {
    match ds {
        DsType::I => vec![
            ConstraintStage {
                label: "conic and hyperplane crossings".to_string(),
                rows: vec![
                    through(gp([(0, 0), (0, 0), (0, 0), (1, 0), (0, 1)])),
                    through(gp([(0, 0), (0, 0), (0, 0), (1, 0), (0, -1)])),
                    through(gp([(0, 0), (1, 0), (0, 0), (0, 0), (0, 1)])),
                    through(gp([(0, 0), (1, 0), (0, 0), (0, 0), (0, -1)])),
                    through(gp([(0, 0), (0, 0), (1, 0), (0, 0), (0, 1)])),
                    through(gp([(0, 0), (0, 0), (1, 0), (0, 0), (0, -1)])),
                    through(gp([(0, 0), (1, 0), (0, 0), (0, 1), (0, 0)])),
                    through(gp([(0, 0), (0, 0), (1, 0), (0, 1), (0, 0)])),
                ],
            },
            ConstraintStage {
                label: "scroll crossings".to_string(),
                rows: vec![
                    through(gp([(0, 2), (-4, 0), (1, 0), (0, 0), (0, 0)])),
                    through(gp([(0, -2), (-4, 0), (1, 0), (0, 0), (0, 0)])),
                    through(gp([(0, 2), (-1, 0), (4, 0), (0, 0), (0, 0)])),
                    through(gp([(0, -2), (-1, 0), (4, 0), (0, 0), (0, 0)])),
                ],
            },
        ],
        DsType::II => {
            let mut c2a = gp([(1, 0), (1, 0), (1, 0), (0, 0), (0, 2)]);
            c2a[4].re = Rat::new((-7).into(), 12.into());
            let mut c2b = gp([(1, 0), (1, 0), (1, 0), (0, 0), (0, -2)]);
            c2b[4].re = Rat::new((-7).into(), 12.into());
            let mut c2c = gp([(1, 0), (1, 0), (1, 0), (0, 0), (0, 0)]);
            c2c[3] = gauss(rat(0), Rat::new(25.into(), 12.into()));
            vec![ConstraintStage {
                label: "double-curve crossings".to_string(),
                rows: vec![
                    through(gp([(0, 0), (0, 0), (0, 0), (1, 0), (0, 1)])),
                    through(gp([(0, 0), (0, 0), (0, 0), (1, 0), (0, -1)])),
                    through(gp([(0, 12), (-9, 0), (16, 0), (0, 0), (0, 0)])),
                    through(gp([(0, -12), (-9, 0), (16, 0), (0, 0), (0, 0)])),
                    through(gp([(0, 12), (-16, 0), (9, 0), (0, 0), (0, 0)])),
                    through(gp([(0, -12), (-16, 0), (9, 0), (0, 0), (0, 0)])),
                    through(gp([(0, 0), (1, 0), (0, 0), (0, 0), (0, 1)])),
                    through(gp([(0, 0), (1, 0), (0, 0), (0, 0), (0, -1)])),
                    through(gp([(0, 0), (1, 0), (0, 0), (0, 1), (0, 0)])),
                    through(c2a),
                    through(c2b),
                    through(c2c),
                ],
            }]
        }
        DsType::III => vec![ConstraintStage {
            label: "double-curve crossings and ridge contact".to_string(),
            rows: vec![
                through(gp([(0, 0), (0, 0), (0, 0), (1, 0), (0, 1)])),
                through(gp([(0, 0), (0, 0), (0, 0), (1, 0), (0, -1)])),
                ruling_contact(gp([(0, 0), (0, 0), (0, 0), (1, 0), (0, 1)])),
                ruling_contact(gp([(0, 0), (0, 0), (0, 0), (1, 0), (0, -1)])),
                through(gp([(0, 0), (1, 0), (0, 0), (0, 1), (0, 0)])),
                through(gp([(0, 0), (1, 0), (0, 0), (0, -1), (0, 0)])),
                through(gp([(1, 0), (1, 0), (1, 0), (0, 1), (0, 0)])),
                through(gp([(1, 0), (1, 0), (1, 0), (0, -1), (0, 0)])),
                through(gp([(2, 0), (1, 0), (4, 0), (0, 1), (0, 0)])),
                through(gp([(2, 0), (1, 0), (4, 0), (0, -1), (0, 0)])),
                through(gp([(0, 0), (0, 0), (1, 0), (0, 1), (0, 0)])),
                through(gp([(0, 0), (0, 0), (1, 0), (0, -1), (0, 0)])),
            ],
        }],
        DsType::IV => vec![ConstraintStage {
            label: "double-curve crossings and ridge contact".to_string(),
            rows: vec![
                through(gp([(0, 0), (0, 0), (0, 0), (1, 0), (0, 1)])),
                through(gp([(0, 0), (0, 0), (0, 0), (1, 0), (0, -1)])),
                ruling_contact(gp([(0, 0), (0, 0), (0, 0), (1, 0), (0, 1)])),
                ruling_contact(gp([(0, 0), (0, 0), (0, 0), (1, 0), (0, -1)])),
                through(gp([(0, 0), (-1, 0), (0, 0), (0, 0), (0, 1)])),
                through(gp([(0, -1), (0, -1), (0, -1), (1, 0), (0, 1)])),
                through(gp([(0, -20), (0, -10), (0, -40), (21, 0), (0, 21)])),
                through(gp([(0, -9), (0, -3), (0, -27), (13, 0), (0, 13)])),
                through(gp([(0, 0), (0, 0), (1, 0), (0, -1), (0, 0)])),
            ],
        }],
    }
}

/// Cumulative size, rank and solution dimension after each constraint stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageDim {
    pub label: String,
    pub rows: usize,
    pub rank: usize,
    /// Projective dimension of the quadrics satisfying all rows so far.
    pub dim: i64,
}

/// Rank profile of the frozen constraint systems.
pub fn constraint_dims(ds: DsType) -> Vec<StageDim> {
    let mut acc: Vec<Vec<QuadExt>> = Vec::new();
    let mut out = Vec::new();
    for stage in constraint_stages(ds) {
        for row in &stage.rows {
            acc.push(row.entries.clone());
        }
        let rank = rank(&acc);
        out.push(StageDim {
            label: stage.label,
            rows: acc.len(),
            rank,
            dim: QUADRIC_DIM - rank as i64,
        });
    }
    out
}

/// Evaluate every constraint row against a candidate quadric.
pub fn satisfies_constraints(ds: DsType, q: &Poly) -> Result<Vec<BranchCheck>> {
    let coeffs = quadric_coefficients(q)?;
    let mut out = Vec::new();
    for stage in constraint_stages(ds) {
        for row in stage.rows {
            out.push(BranchCheck {
                ok: row_value(&row.entries, &coeffs).is_zero(),
                label: row.label,
            });
        }
    }
    Ok(out)
}

/// One of the five double curves of a branch quartic: either a conic on a
/// tangent plane of the scroll or a quartic cut on the scroll by one of the
/// hyperplane factors.
#[derive(Clone, Debug)]
pub struct DoubleCurve {
    pub name: String,
    pub kind: &'static str,
    pub degree: usize,
    /// Linear generators of the carrier.
    pub carrier: Vec<Poly>,
    /// Whether the scroll quadric is part of the carrier.
    pub with_scroll: bool,
    /// A frozen algebraic point on the curve.
    pub sample: [QuadExt; 5],
}

fn conic_curve(n: usize, point: [Rat; 3], sample: [QuadExt; 5]) -> Result<DoubleCurve> {
    Ok(DoubleCurve {
        name: format!("C{n}"),
        kind: "conic",
        degree: 2,
        carrier: lambda_plane(&point)?,
        with_scroll: false,
        sample,
    })
}

fn quartic_curve(n: usize, h: Poly, sample: [QuadExt; 5]) -> DoubleCurve {
    DoubleCurve {
        name: format!("C{n}"),
        kind: "quartic",
        degree: 4,
        carrier: vec![h],
        with_scroll: true,
        sample,
    }
}

/// The five double curves with their carriers and frozen sample points.
pub fn double_curves(ds: DsType, params: &BTreeMap<String, Rat>) -> Result<Vec<DoubleCurve>> {
    let cs = line_parameters(ds, params)?;
    let mut out = Vec::new();
    match ds {
        DsType::I => {
            out.push(conic_curve(
                1,
                [rat(0), rat(1), rat(0)],
                gp([(0, 0), (1, 0), (0, 0), (0, 0), (0, 1)]),
            )?);
            out.push(conic_curve(
                2,
                [rat(0), rat(0), rat(1)],
                gp([(0, 0), (0, 0), (1, 0), (0, 0), (0, 1)]),
            )?);
            let hs = hyperplane_factors(ds);
            out.push(quartic_curve(
                3,
                hs[0].clone(),
                gp([(0, 2), (-4, 0), (1, 0), (0, 0), (0, 0)]),
            ));
            out.push(quartic_curve(
                4,
                hs[1].clone(),
                gp([(0, 0), (1, 0), (0, 0), (0, 1), (0, 0)]),
            ));
            // The last carrier meets the scroll over a parameter satisfying
            // t^2 + t + 1 = 0, so the sample lives over sqrt(-3).
            let w = |re: i64, im: i64| QuadExt::new(rat(re), rat(im), rat(-3));
            out.push(quartic_curve(
                5,
                hs[2].clone(),
                [w(-2, 2), w(-2, -2), w(4, 0), w(4, 2), w(5, 1)],
            ));
        }
        DsType::II => {
            out.push(conic_curve(
                1,
                [rat(0), rat(1), rat(0)],
                gp([(0, 0), (1, 0), (0, 0), (0, 0), (0, 1)]),
            )?);
            let mut c2 = gp([(1, 0), (1, 0), (1, 0), (0, 0), (0, 2)]);
            c2[4].re = Rat::new((-7).into(), 12.into());
            out.push(conic_curve(2, [rat(1), rat(1), rat(1)], c2)?);
            out.push(conic_curve(
                3,
                [rat(0), rat(0), rat(1)],
                gp([(0, 0), (0, 0), (1, 0), (0, 1), (0, 0)]),
            )?);
            let hs = hyperplane_factors(ds);
            out.push(quartic_curve(
                4,
                hs[0].clone(),
                gp([(0, 12), (-9, 0), (16, 0), (0, 0), (0, 0)]),
            ));
            out.push(quartic_curve(
                5,
                hs[1].clone(),
                gp([(0, 0), (1, 0), (0, 0), (0, 1), (0, 0)]),
            ));
        }
        DsType::III => {
            let a = cs[2].clone();
            out.push(conic_curve(
                1,
                [rat(0), rat(1), rat(0)],
                gp([(0, 0), (1, 0), (0, 0), (0, 1), (0, 0)]),
            )?);
            out.push(conic_curve(
                2,
                [rat(1), rat(1), rat(1)],
                gp([(1, 0), (1, 0), (1, 0), (0, 1), (0, 0)]),
            )?);
            out.push(conic_curve(
                3,
                [a.clone(), rat(1), a.clone() * a.clone()],
                gp([(2, 0), (1, 0), (4, 0), (0, 1), (0, 0)]),
            )?);
            out.push(conic_curve(
                4,
                [rat(0), rat(0), rat(1)],
                gp([(0, 0), (0, 0), (1, 0), (0, 1), (0, 0)]),
            )?);
            let hs = hyperplane_factors(ds);
            out.push(quartic_curve(
                5,
                hs[0].clone(),
                gp([(0, 0), (1, 0), (0, 0), (0, 1), (0, 0)]),
            ));
        }
        DsType::IV => {
            let a1 = cs[2].clone();
            let a2 = cs[3].clone();
            out.push(conic_curve(
                1,
                [rat(0), rat(1), rat(0)],
                gp([(0, 0), (-1, 0), (0, 0), (0, 0), (0, 1)]),
            )?);
            out.push(conic_curve(
                2,
                [rat(1), rat(1), rat(1)],
                gp([(0, -1), (0, -1), (0, -1), (1, 0), (0, 1)]),
            )?);
            out.push(conic_curve(
                3,
                [a1.clone(), rat(1), a1.clone() * a1.clone()],
                gp([(0, -20), (0, -10), (0, -40), (21, 0), (0, 21)]),
            )?);
            out.push(conic_curve(
                4,
                [a2.clone(), rat(1), a2.clone() * a2.clone()],
                gp([(0, -9), (0, -3), (0, -27), (13, 0), (0, 13)]),
            )?);
            out.push(conic_curve(
                5,
                [rat(0), rat(0), rat(1)],
                gp([(0, 0), (0, 0), (1, 0), (0, -1), (0, 0)]),
            )?);
        }
    }
    Ok(out)
}

/// Exact value of a parameter-free polynomial at an algebraic point.
pub fn poly_value_at(p: &Poly, point: &[QuadExt; 5]) -> Result<QuadExt> {
    if !p.is_parameter_free() {
        return Err(Error::Branch(
            "cannot evaluate a polynomial with free parameters at a point".into(),
        ));
    }
    let mut acc: QuadExt = Field::zero();
    for (e, c) in p.terms() {
        let mut term = QuadExt::from_rat(c.clone(), point[0].d.clone());
        for (i, &k) in e.iter().take(5).enumerate() {
            for _ in 0..k {
                term = term.mul(&point[i]);
            }
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Certify that each double curve lies on its carrier and on the branch
/// quartic: the quartic reduces to `-Q^2` on the carrier, the quadric is a
/// genuine (nonzero) section there, and the frozen sample point satisfies
/// the carrier, the scroll when applicable, and the quadric.
pub fn certify_double_curves(
    ds: DsType,
    q: &Poly,
    params: &BTreeMap<String, Rat>,
) -> Result<Vec<BranchCheck>> {
    validate_candidate(q)?;
    let factors = numeric_factors(ds, params)?;
    let mut product = Poly::one();
    for f in &factors {
        product = product.mul(f);
    }
    let quartic = product.sub(&q.mul(q));
    let mut out = Vec::new();
    for curve in double_curves(ds, params)? {
        out.push(BranchCheck {
            label: format!(
                "{} ({}): branch quartic vanishes doubly on the carrier",
                curve.name, curve.kind
            ),
            ok: is_neg_square(&quartic, q, &curve.carrier, curve.with_scroll)?,
        });
        out.push(BranchCheck {
            label: format!("{}: quadric is a nonzero section of the carrier", curve.name),
            ok: !reduce(q, &curve.carrier, curve.with_scroll)?.is_zero(),
        });
        let mut on_carrier = true;
        for g in &curve.carrier {
            on_carrier &= poly_value_at(g, &curve.sample)?.is_zero();
        }
        if curve.with_scroll {
            on_carrier &= poly_value_at(&scroll_quadric(), &curve.sample)?.is_zero();
        }
        out.push(BranchCheck {
            label: format!(
                "{}: frozen sample {} lies on the carrier",
                curve.name,
                fmt_point(&curve.sample)
            ),
            ok: on_carrier,
        });
        out.push(BranchCheck {
            label: format!("{}: frozen sample satisfies the quadric", curve.name),
            ok: poly_value_at(q, &curve.sample)?.is_zero(),
        });
    }
    Ok(out)
}

/// A signed half of the anticanonical cycle: `(j, -1)` collects the plain
/// components `C_1..C_j` with the barred components `cC_{j+1}..cC_k`, and
/// `(j, +1)` is its conjugate.
pub type HalfCycle = (usize, i8);

pub fn conjugate_half(h: HalfCycle) -> HalfCycle {
    (h.0, -h.1)
}

pub fn half_name(h: HalfCycle) -> String {
    format!("S{}{}", h.0, if h.1 < 0 { "-" } else { "+" })
}

fn half_checked(cfg: &CycleConfig, h: HalfCycle) -> Result<(usize, usize)> {
    let k = cfg.half();
    if h.0 < 1 || h.0 > k {
        return Err(Error::BadIndex {
            kind: "half-cycle",
            index: h.0,
            len: k,
        });
    }
    if h.1 != 1 && h.1 != -1 {
        return Err(Error::Scenario("half-cycle sign must be +1 or -1".into()));
    }
    Ok((h.0, k))
}

/// The divisor class of a signed half-cycle.
pub fn half_class(cfg: &CycleConfig, h: HalfCycle) -> Result<Class> {
    let (j, k) = half_checked(cfg, h)?;
    let classes = cfg.component_classes();
    let mut total = cfg.lattice().zero();
    if h.1 < 0 {
        for c in &classes[0..j] {
            total = total.add(c);
        }
        for c in &classes[k + j..2 * k] {
            total = total.add(c);
        }
    } else {
        for c in &classes[k..k + j] {
            total = total.add(c);
        }
        for c in &classes[j..k] {
            total = total.add(c);
        }
    }
    Ok(total)
}

fn symbol(id: usize) -> HalfCycle {
    (id / 2 + 1, if id % 2 == 0 { -1 } else { 1 })
}

/// Class excess of a four-element selection over twice the anticanonical
/// class.
pub fn selection_deficit(cfg: &CycleConfig, sel: &[HalfCycle; 4]) -> Result<Class> {
    let target = cfg.lattice().anticanonical().scale(2);
    let mut total = cfg.lattice().zero();
    for h in sel {
        total = total.add(&half_class(cfg, *h)?);
    }
    Ok(total.sub(&target))
}

/// All four-element multisets of signed half-cycles whose classes sum to
/// twice the anticanonical class.
pub fn half_cycle_search(cfg: &CycleConfig) -> Result<Vec<[HalfCycle; 4]>> {
    let k = cfg.half();
    let symbols = 2 * k;
    let mut classes = Vec::with_capacity(symbols);
    for id in 0..symbols {
        classes.push(half_class(cfg, symbol(id))?);
    }
    let target = cfg.lattice().anticanonical().scale(2);
    let mut out = Vec::new();
    for a in 0..symbols {
        for b in a..symbols {
            let ab = classes[a].add(&classes[b]);
            for c in b..symbols {
                let abc = ab.add(&classes[c]);
                for d in c..symbols {
                    if abc.add(&classes[d]) == target {
                        out.push([symbol(a), symbol(b), symbol(c), symbol(d)]);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// The class `-K - e_j + ce_j` singling out one exceptional direction.
pub fn special_class(lat: &Lattice, index: usize) -> Result<Class> {
    if index < 1 || index > lat.pairs {
        return Err(Error::BadIndex {
            kind: "exceptional pair",
            index,
            len: lat.pairs,
        });
    }
    Ok(lat
        .anticanonical()
        .sub(&lat.e(index - 1))
        .add(&lat.e(lat.pairs + index - 1)))
}

/// Sections of the special class on a realized cycle configuration.
pub fn special_class_h0(cfg: &CycleConfig, index: usize, seed: u64) -> Result<H0Result> {
    let lat = cfg.lattice();
    let d = special_class(&lat, index)?;
    h0_full(cfg, &d, seed)
}
